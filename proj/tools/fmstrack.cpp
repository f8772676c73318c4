#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmst/bench.hpp"
#include "fmst/synthseq.hpp"
#include "fmst/tracker.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fmst;

namespace {

constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// flat key=value config; '#' starts a comment
using FlatConfig = std::map<std::string, std::string>;

FlatConfig read_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    FlatConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) cfg[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

double to_double(const FlatConfig& c, const std::string& key, double fallback) {
    auto it = c.find(key);
    return it == c.end() ? fallback : std::stod(it->second);
}
long to_long(const FlatConfig& c, const std::string& key, long fallback) {
    auto it = c.find(key);
    return it == c.end() ? fallback : std::stol(it->second);
}
bool to_bool(const FlatConfig& c, const std::string& key, bool fallback) {
    auto it = c.find(key);
    if (it == c.end()) return fallback;
    return it->second == "1" || it->second == "true" || it->second == "yes";
}
std::string to_str(const FlatConfig& c, const std::string& key, const std::string& fallback) {
    auto it = c.find(key);
    return it == c.end() ? fallback : it->second;
}

TrackerConfig tracker_config_from(const FlatConfig& c) {
    TrackerConfig cfg;
    const std::string mode = to_str(c, "mode", "learned");
    if (mode == "learned")
        cfg.mode = TrackerMode::Learned;
    else if (mode == "fmst_hard")
        cfg.mode = TrackerMode::FmstHard;
    else
        throw UsageError("unknown mode '" + mode + "' (expected learned or fmst_hard)");
    cfg.eta = to_double(c, "eta", cfg.eta);
    cfg.selection_fraction = to_double(c, "selection_fraction", cfg.selection_fraction);
    cfg.sampler.sigma_xy = to_double(c, "sigma_xy", cfg.sampler.sigma_xy);
    cfg.sampler.sigma_wh = to_double(c, "sigma_wh", cfg.sampler.sigma_wh);
    cfg.sampler.num_candidates =
        static_cast<int>(to_long(c, "num_candidates", cfg.sampler.num_candidates));
    cfg.sampler.size_mean = to_double(c, "size_mean", cfg.sampler.size_mean);
    cfg.sampler.seed = static_cast<uint64_t>(to_long(c, "seed", 0));
    cfg.score_offset = to_double(c, "score_offset", cfg.score_offset);
    cfg.alpha = to_double(c, "alpha", cfg.alpha);
    cfg.use_type_s = to_bool(c, "use_type_s", cfg.use_type_s);
    cfg.use_type_c = to_bool(c, "use_type_c", cfg.use_type_c);
    cfg.use_negative = to_bool(c, "use_negative", cfg.use_negative);
    cfg.use_instant_scores = to_bool(c, "use_instant_scores", cfg.use_instant_scores);

    const std::string backbone = to_str(c, "backbone", "synthetic");
    if (backbone == "synthetic")
        cfg.backbone.kind = BackboneKind::Synthetic;
    else if (backbone == "file")
        cfg.backbone.kind = BackboneKind::File;
    else
        throw UsageError("unknown backbone '" + backbone + "'");
    cfg.backbone.out_rows = static_cast<int>(to_long(c, "out_rows", cfg.backbone.out_rows));
    cfg.backbone.out_cols = static_cast<int>(to_long(c, "out_cols", cfg.backbone.out_cols));
    cfg.backbone.out_channels =
        static_cast<int>(to_long(c, "out_channels", cfg.backbone.out_channels));
    cfg.backbone.input_size = static_cast<int>(to_long(c, "input_size", cfg.backbone.input_size));
    cfg.backbone.synthetic_seed = static_cast<uint64_t>(to_long(c, "synthetic_seed", 0));
    cfg.backbone.tensor_dir = to_str(c, "tensor_dir", "");

    const std::string net_pos = to_str(c, "net_pos", "");
    const std::string net_neg = to_str(c, "net_neg", "");
    if (!net_pos.empty()) cfg.net_pos = load_net(net_pos);
    if (!net_neg.empty()) cfg.net_neg = load_net(net_neg);
    if (cfg.mode == TrackerMode::Learned && !cfg.net_pos)
        throw UsageError("learned mode requires --net (or net_pos in the config)");
    if (cfg.mode == TrackerMode::Learned && cfg.use_negative && !cfg.net_neg)
        throw UsageError("learned mode with use_negative requires --net-neg");
    return cfg;
}

void write_resolved(const fs::path& dir, const FlatConfig& c) {
    std::ofstream out(dir / "resolved.cfg");
    for (const auto& [k, v] : c) out << k << " = " << v << "\n";
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const FlatConfig& c,
                    double elapsed_s) {
    json manifest;
    manifest["subcommand"] = subcommand;
    manifest["config_file"] = (dir / "resolved.cfg").string();
    manifest["seed"] = to_long(c, "seed", 0);
    manifest["output_dir"] = dir.string();
    manifest["elapsed_seconds"] = elapsed_s;
    manifest["config"] = json::object();
    for (const auto& [k, v] : c) manifest["config"][k] = v;
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
    write_resolved(dir, c);
}

void merge_cli_overrides(FlatConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got " + kv);
        cfg[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
}

void write_svg_curve(const std::string& path, const std::vector<double>& curve, double x_max,
                     const std::string& x_label, double marker_x) {
    const int w = 480, h = 360, m = 48;
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    auto px = [&](double x) { return m + x / x_max * (w - 2 * m); };
    auto py = [&](double y) { return h - m - y / 100.0 * (h - 2 * m); };
    out << "<line x1='" << m << "' y1='" << h - m << "' x2='" << w - m << "' y2='" << h - m
        << "' stroke='black'/>\n";
    out << "<line x1='" << m << "' y1='" << m << "' x2='" << m << "' y2='" << h - m
        << "' stroke='black'/>\n";
    out << "<polyline fill='none' stroke='blue' stroke-width='2' points='";
    for (size_t i = 0; i < curve.size(); ++i)
        out << px(x_max * i / (curve.size() - 1)) << "," << py(curve[i]) << " ";
    out << "'/>\n";
    if (marker_x >= 0)
        out << "<line x1='" << px(marker_x) << "' y1='" << m << "' x2='" << px(marker_x)
            << "' y2='" << h - m << "' stroke='red' stroke-dasharray='4'/>\n";
    out << "<text x='" << w / 2 << "' y='" << h - 12 << "' text-anchor='middle' font-size='13'>"
        << x_label << "</text>\n";
    out << "</svg>\n";
}

int cmd_track(const FlatConfig& flat, const std::string& seq_dir, const std::string& out_dir) {
    SequenceAnnotation ann;
    try {
        ann = load_annotations(seq_dir);
    } catch (const std::exception& e) {
        throw UsageError(std::string("no initial rect: ") + e.what());
    }

    TrackerConfig cfg = tracker_config_from(flat);
    cfg.backbone.task = ann.task;
    Tracker tracker(cfg);

    std::vector<Frame> frames;
    for (size_t i = 0; i < ann.image_files.size(); ++i) {
        frames.push_back(load_frame(ann.image_files[i]));
        frames.back().index = static_cast<int>(i);
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Rect> preds = tracker.track_sequence(frames, ann.truths[0]);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "predictions.txt");
    auto emit = [&](const Rect& r) {
        out << r.left() << "," << r.top() << "," << r.w << "," << r.h << "\n";
    };
    emit(ann.truths[0]);  // frame 0 is the given truth
    for (const Rect& r : preds) emit(r);
    out.close();

    write_manifest(out_dir, "track", flat, elapsed);
    std::cout << "tracked " << frames.size() << " frames in " << elapsed << " s ("
              << preds.size() / std::max(elapsed, 1e-9) << " fps)\n";
    return 0;
}

int cmd_bench(const FlatConfig& flat, const std::string& dataset, const std::string& out_dir,
              bool oracle, int jobs, bool svg) {
    std::vector<SequenceAnnotation> tasks;
    std::vector<std::string> unreadable;
    if (!fs::is_directory(dataset)) throw UsageError("dataset root not found: " + dataset);
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(dataset))
        if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        try {
            tasks.push_back(load_annotations(dir.string()));
        } catch (const std::exception& e) {
            std::cerr << "skipping " << dir << ": " << e.what() << "\n";
            unreadable.push_back(dir.filename().string());
        }
    }
    if (tasks.empty()) throw UsageError("no usable tasks under " + dataset);

    FlatConfig effective = flat;
    if (oracle) effective["mode"] = "fmst_hard";  // tracker is bypassed entirely
    TrackerConfig cfg = tracker_config_from(effective);
    OpeOptions opts;
    opts.oracle = oracle;
    opts.jobs = jobs;

    const auto t0 = std::chrono::steady_clock::now();
    OpeReport report = run_ope(tasks, cfg, opts);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(out_dir);
    json results;
    results["tasks"] = json::array();
    for (const auto& [name, r] : report.per_task) {
        json t;
        t["task"] = name;
        t["precision_score"] = r.precision_score;
        t["success_score"] = r.success_score;
        t["fps"] = r.fps;
        t["precision_curve"] = r.precision_curve;
        t["success_curve"] = r.success_curve;
        results["tasks"].push_back(t);
    }
    results["skipped"] = report.skipped;
    for (const auto& s : unreadable) results["skipped"].push_back(s);
    results["average"]["precision_score"] = report.averaged.precision_score;
    results["average"]["success_score"] = report.averaged.success_score;
    results["average"]["fps"] = report.averaged.fps;
    results["average"]["precision_curve"] = report.averaged.precision_curve;
    results["average"]["success_curve"] = report.averaged.success_curve;
    std::ofstream(fs::path(out_dir) / "results.json") << results.dump(2) << "\n";

    std::ofstream csv(fs::path(out_dir) / "curves.csv");
    csv << "metric,threshold,value\n";
    for (int t = 0; t <= 50; ++t)
        csv << "precision," << t << "," << report.averaged.precision_curve[t] << "\n";
    for (int t = 0; t <= 20; ++t)
        csv << "success," << t * 0.05 << "," << report.averaged.success_curve[t] << "\n";
    csv.close();

    if (svg) {
        write_svg_curve((fs::path(out_dir) / "precision.svg").string(),
                        report.averaged.precision_curve, 50, "center error threshold [px]", 20);
        write_svg_curve((fs::path(out_dir) / "success.svg").string(),
                        report.averaged.success_curve, 1.0, "IOU threshold", -1);
    }

    write_manifest(out_dir, "bench", flat, elapsed);
    std::cout << "precision_score " << report.averaged.precision_score << "\n"
              << "success_score " << report.averaged.success_score << "\n"
              << "fps " << report.averaged.fps << "\n";
    if (!report.skipped.empty() || !unreadable.empty())
        std::cout << "warnings: " << report.skipped.size() + unreadable.size()
                  << " task(s) skipped\n";
    return 0;
}

int cmd_train(const FlatConfig& flat, const std::vector<std::string>& data_dirs,
              const std::string& out_dir) {
    FlatConfig effective = flat;
    effective["mode"] = "fmst_hard";  // only the backbone settings matter here
    TrackerConfig tcfg = tracker_config_from(effective);
    FeatureProvider backbone(tcfg.backbone);

    std::vector<SequenceData> sequences;
    for (const auto& root : data_dirs) {
        std::vector<fs::path> dirs;
        if (fs::exists(fs::path(root) / "groundtruth_rect.txt")) {
            dirs.push_back(root);
        } else if (fs::is_directory(root)) {
            for (const auto& entry : fs::directory_iterator(root))
                if (entry.is_directory()) dirs.push_back(entry.path());
            std::sort(dirs.begin(), dirs.end());
        }
        for (const auto& dir : dirs) {
            try {
                const SequenceAnnotation ann = load_annotations(dir.string());
                SequenceData seq;
                seq.truths = ann.truths;
                for (size_t i = 0; i < ann.image_files.size(); ++i) {
                    seq.frames.push_back(load_frame(ann.image_files[i]));
                    seq.frames.back().index = static_cast<int>(i);
                }
                sequences.push_back(std::move(seq));
            } catch (const std::exception& e) {
                std::cerr << "skipping " << dir << ": " << e.what() << "\n";
            }
        }
    }

    const std::vector<TrainPair> pairs = build_dataset(sequences, backbone);
    if (pairs.size() < 2) throw UsageError("fewer than two usable training pairs");
    std::cout << "training on " << pairs.size() << " pairs\n";

    TrainConfig cfg;
    cfg.max_epochs = static_cast<int>(to_long(flat, "max_epochs", cfg.max_epochs));
    cfg.patience = static_cast<int>(to_long(flat, "patience", cfg.patience));
    cfg.learning_rate = to_double(flat, "learning_rate", cfg.learning_rate);
    cfg.validation_fraction = to_double(flat, "validation_fraction", cfg.validation_fraction);
    cfg.seed = static_cast<uint64_t>(to_long(flat, "seed", 0));

    const int c = pairs[0].feat_k.channels;
    const std::vector<int> dims{c, c, c};

    const auto t0 = std::chrono::steady_clock::now();
    const TrainResult pos = train(pairs, dims, cfg, Polarity::Positive);
    const TrainResult neg = train(pairs, dims, cfg, Polarity::Negative);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(out_dir);
    save_net((fs::path(out_dir) / "net_pos.fwn1").string(), pos.net);
    save_net((fs::path(out_dir) / "net_neg.fwn1").string(), neg.net);
    std::ofstream log(fs::path(out_dir) / "training_log.csv");
    log << "net,epoch,train_loss,val_loss\n";
    for (const auto& e : pos.log) log << "pos," << e.epoch << "," << e.train_loss << "," << e.val_loss << "\n";
    for (const auto& e : neg.log) log << "neg," << e.epoch << "," << e.train_loss << "," << e.val_loss << "\n";
    log.close();

    write_manifest(out_dir, "train", flat, elapsed);
    std::cout << "best epochs: pos " << pos.best_epoch << ", neg " << neg.best_epoch << "\n";
    return 0;
}

SceneSpec scene_from_config(const FlatConfig& c) {
    SceneSpec s;
    s.width = static_cast<int>(to_long(c, "width", s.width));
    s.height = static_cast<int>(to_long(c, "height", s.height));
    s.frame_count = static_cast<int>(to_long(c, "frames", s.frame_count));
    s.seed = static_cast<uint64_t>(to_long(c, "seed", 0));
    const std::string bg = to_str(c, "background", "flat");
    if (bg == "flat")
        s.background = Background::Flat;
    else if (bg == "checkerboard")
        s.background = Background::Checkerboard;
    else if (bg == "noise")
        s.background = Background::Noise;
    else
        throw UsageError("unknown background '" + bg + "'");
    for (int ch = 0; ch < 3; ++ch)
        s.bg_color[ch] = static_cast<uint8_t>(
            to_long(c, std::string("bg_") + "rgb"[ch], s.bg_color[ch]));

    auto fill_actor = [&](MovingRect& a, const std::string& prefix) {
        a.start = Rect{to_double(c, prefix + "x", a.start.x), to_double(c, prefix + "y", a.start.y),
                       to_double(c, prefix + "w", a.start.w), to_double(c, prefix + "h", a.start.h)};
        for (int ch = 0; ch < 3; ++ch)
            a.color[ch] = static_cast<uint8_t>(
                to_long(c, prefix + "color_" + "rgb"[ch], a.color[ch]));
        const std::string traj = to_str(c, prefix + "trajectory", "static");
        if (traj == "static")
            a.trajectory = Trajectory::Static;
        else if (traj == "linear")
            a.trajectory = Trajectory::Linear;
        else if (traj == "sinusoidal")
            a.trajectory = Trajectory::Sinusoidal;
        else if (traj == "scale_ramp")
            a.trajectory = Trajectory::ScaleRamp;
        else
            throw UsageError("unknown trajectory '" + traj + "'");
        a.vx = to_double(c, prefix + "vx", a.vx);
        a.vy = to_double(c, prefix + "vy", a.vy);
        a.amp_x = to_double(c, prefix + "amp_x", a.amp_x);
        a.amp_y = to_double(c, prefix + "amp_y", a.amp_y);
        a.period = to_double(c, prefix + "period", a.period);
        a.scale_per_frame = to_double(c, prefix + "scale_per_frame", a.scale_per_frame);
    };
    s.target.start = Rect{60, 60, 36, 36};
    fill_actor(s.target, "target_");
    for (int i = 1; c.count("distractor" + std::to_string(i) + "_x"); ++i) {
        MovingRect d;
        d.start = Rect{0, 0, 20, 20};
        fill_actor(d, "distractor" + std::to_string(i) + "_");
        s.distractors.push_back(d);
    }
    if (c.count("occluder_x")) {
        Occluder occ;
        occ.x = static_cast<int>(to_long(c, "occluder_x", 0));
        occ.width = static_cast<int>(to_long(c, "occluder_width", 10));
        occ.first_frame = static_cast<int>(to_long(c, "occluder_first", 0));
        occ.last_frame = static_cast<int>(to_long(c, "occluder_last", s.frame_count - 1));
        s.occluder = occ;
    }
    return s;
}

int cmd_gen(const FlatConfig& flat, const std::string& spec_path, const std::string& preset,
            const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    if (preset == "suite") {
        const uint64_t seed = static_cast<uint64_t>(to_long(flat, "seed", 0));
        for (const auto& [name, spec] : acceptance_suite(seed)) {
            const RenderedSequence seq = render(spec);
            write_otb_layout((fs::path(out_dir) / name).string(), seq);
            std::cout << "wrote " << name << " (" << seq.frames.size() << " frames)\n";
        }
    } else {
        if (spec_path.empty()) throw UsageError("gen requires --spec or --preset suite");
        FlatConfig scene_cfg = read_flat_config(spec_path);
        SceneSpec spec;
        try {
            spec = scene_from_config(scene_cfg);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        RenderedSequence seq;
        try {
            seq = render(spec);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        write_otb_layout(out_dir, seq);
        std::cout << "wrote " << seq.frames.size() << " frames to " << out_dir << "\n";
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fs::create_directories(out_dir);
    write_manifest(out_dir, "gen", flat, elapsed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature-map-selection tracker"};
    app.require_subcommand(1);

    std::string config_path, seq_dir, dataset, out_dir = "out", spec_path, preset;
    std::string net_pos_path, net_neg_path, mode;
    std::vector<std::string> data_dirs, overrides;
    long seed = -1;
    bool oracle = false, svg = false;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--set", overrides, "override config entries, key=value");
        sub->add_option("--seed", seed, "RNG seed (overrides config)");
        sub->add_option("--out", out_dir, "output directory");
    };

    auto* track = app.add_subcommand("track", "track one sequence");
    track->add_option("--seq", seq_dir, "OTB-style sequence directory")->required();
    track->add_option("--mode", mode, "learned | fmst_hard");
    track->add_option("--net", net_pos_path, "positive weight-net checkpoint");
    track->add_option("--net-neg", net_neg_path, "negative weight-net checkpoint");
    add_common(track);

    auto* bench = app.add_subcommand("bench", "one pass evaluation over a dataset");
    bench->add_option("--dataset", dataset, "root directory of task directories")->required();
    bench->add_option("--mode", mode, "learned | fmst_hard");
    bench->add_option("--net", net_pos_path, "positive weight-net checkpoint");
    bench->add_option("--net-neg", net_neg_path, "negative weight-net checkpoint");
    bench->add_flag("--oracle", oracle, "perfect-tracker stub (predictions = truth)");
    bench->add_flag("--svg", svg, "emit precision/success SVG plots");
    bench->add_option("--jobs", jobs, "parallel task evaluations");
    add_common(bench);

    auto* train_cmd = app.add_subcommand("train", "train the weight generation nets");
    train_cmd->add_option("--data", data_dirs, "sequence directories or roots")->required();
    add_common(train_cmd);

    auto* gen = app.add_subcommand("gen", "render synthetic sequences");
    gen->add_option("--spec", spec_path, "scene spec file (flat key=value)");
    gen->add_option("--preset", preset, "'suite' renders the 10-task synthetic suite");
    add_common(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        FlatConfig flat;
        if (!config_path.empty()) flat = read_flat_config(config_path);
        merge_cli_overrides(flat, overrides);
        if (seed >= 0) flat["seed"] = std::to_string(seed);
        if (!mode.empty()) flat["mode"] = mode;
        if (!net_pos_path.empty()) flat["net_pos"] = net_pos_path;
        if (!net_neg_path.empty()) flat["net_neg"] = net_neg_path;

        if (track->parsed()) return cmd_track(flat, seq_dir, out_dir);
        if (bench->parsed()) return cmd_bench(flat, dataset, out_dir, oracle, jobs, svg);
        if (train_cmd->parsed()) return cmd_train(flat, data_dirs, out_dir);
        if (gen->parsed()) return cmd_gen(flat, spec_path, preset, out_dir);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
