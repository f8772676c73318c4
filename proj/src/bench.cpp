#include "fmst/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fmst {

EvalResult evaluate(const std::vector<Rect>& preds, const std::vector<Rect>& truths) {
    if (preds.size() != truths.size())
        throw std::invalid_argument("evaluate: prediction/truth length mismatch");
    if (preds.empty())
        throw std::invalid_argument("evaluate: empty input");

    EvalResult res;
    res.precision_curve.resize(51);
    for (int tau = 0; tau <= 50; ++tau) {
        int hit = 0;
        for (size_t i = 0; i < preds.size(); ++i)
            if (center_distance(preds[i], truths[i]) <= tau) ++hit;
        res.precision_curve[tau] = 100.0 * hit / preds.size();
    }
    res.precision_score = res.precision_curve[20];

    res.success_curve.resize(21);
    for (int t = 0; t <= 20; ++t) {
        const double thr = t * 0.05;
        int hit = 0;
        for (size_t i = 0; i < preds.size(); ++i)
            if (iou(preds[i], truths[i]) >= thr) ++hit;
        res.success_curve[t] = 100.0 * hit / preds.size();
    }
    res.success_score =
        std::accumulate(res.success_curve.begin(), res.success_curve.end(), 0.0) / 21.0;

    for (int t = 1; t <= 50; ++t) assert(res.precision_curve[t] >= res.precision_curve[t - 1]);
    for (int t = 1; t <= 20; ++t) assert(res.success_curve[t] <= res.success_curve[t - 1]);
    return res;
}

namespace {

struct TaskOutcome {
    EvalResult result;
    bool ok = false;
};

TaskOutcome eval_one(const SequenceAnnotation& task, const TrackerConfig& cfg,
                     const OpeOptions& opts) {
    TaskOutcome out;
    try {
        std::vector<Frame> frames;
        frames.reserve(task.image_files.size());
        for (size_t i = 0; i < task.image_files.size(); ++i) {
            frames.push_back(load_frame(task.image_files[i]));
            frames.back().index = static_cast<int>(i);
        }
        std::vector<Rect> preds;
        double elapsed = 0;
        if (opts.oracle) {
            preds.assign(task.truths.begin() + 1, task.truths.end());
            elapsed = 1e-9;
        } else {
            TrackerConfig task_cfg = cfg;
            task_cfg.backbone.task = task.task;
            Tracker tracker(task_cfg);
            const auto t0 = std::chrono::steady_clock::now();
            preds = tracker.track_sequence(frames, task.truths[0]);
            elapsed = std::chrono::duration<double>(
                std::chrono::steady_clock::now() - t0).count();
        }
        // frame 0 is the given truth and excluded from the metrics
        const std::vector<Rect> truth_tail(task.truths.begin() + 1, task.truths.end());
        out.result = evaluate(preds, truth_tail);
        out.result.fps = preds.size() / std::max(elapsed, 1e-9);
        out.ok = true;
    } catch (const std::exception& e) {
        std::cerr << "run_ope: task " << task.task << " failed: " << e.what() << "\n";
    }
    return out;
}

}  // namespace

OpeReport run_ope(const std::vector<SequenceAnnotation>& tasks, const TrackerConfig& cfg,
                  const OpeOptions& opts) {
    if (tasks.empty())
        throw std::invalid_argument("run_ope: no tasks");

    std::vector<TaskOutcome> outcomes(tasks.size());
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < tasks.size(); ++i) outcomes[i] = eval_one(tasks[i], cfg, opts);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (size_t i = next++; i < tasks.size(); i = next++)
                    outcomes[i] = eval_one(tasks[i], cfg, opts);
            });
        for (auto& t : pool) t.join();
    }

    OpeReport report;
    report.averaged.precision_curve.assign(51, 0.0);
    report.averaged.success_curve.assign(21, 0.0);
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (!outcomes[i].ok) {
            report.skipped.push_back(tasks[i].task);
            continue;
        }
        report.per_task.emplace_back(tasks[i].task, outcomes[i].result);
    }
    if (report.per_task.empty())
        throw std::runtime_error("run_ope: every task failed");

    const double n = static_cast<double>(report.per_task.size());
    for (const auto& [name, r] : report.per_task) {
        for (int t = 0; t <= 50; ++t) report.averaged.precision_curve[t] += r.precision_curve[t] / n;
        for (int t = 0; t <= 20; ++t) report.averaged.success_curve[t] += r.success_curve[t] / n;
        report.averaged.precision_score += r.precision_score / n;
        report.averaged.success_score += r.success_score / n;
        report.averaged.fps += r.fps / n;
    }
    return report;
}

Rect parse_annotation_line(const std::string& line, int line_number) {
    std::string norm = line;
    for (char& c : norm)
        if (c == ',' || c == '\t' || c == '\r') c = ' ';
    std::istringstream ss(norm);
    double v[4];
    for (int i = 0; i < 4; ++i)
        if (!(ss >> v[i]))
            throw std::runtime_error("annotation line " + std::to_string(line_number) +
                                     ": expected four numeric fields");
    if (v[2] <= 0 || v[3] <= 0)
        throw std::runtime_error("annotation line " + std::to_string(line_number) +
                                 ": non-positive size");
    // top-left convention on disk, center-based internally
    return Rect{v[0] + v[2] / 2, v[1] + v[3] / 2, v[2], v[3]};
}

SequenceAnnotation load_annotations(const std::string& dir) {
    namespace fs = std::filesystem;
    SequenceAnnotation ann;
    ann.task = fs::path(dir).filename().string();

    std::ifstream gt(fs::path(dir) / "groundtruth_rect.txt");
    if (!gt)
        throw std::runtime_error("load_annotations: no groundtruth_rect.txt in " + dir);
    std::string line;
    int line_number = 0;
    while (std::getline(gt, line)) {
        ++line_number;
        if (line.empty()) continue;
        ann.truths.push_back(parse_annotation_line(line, line_number));
    }

    const fs::path img_dir = fs::path(dir) / "img";
    if (!fs::is_directory(img_dir))
        throw std::runtime_error("load_annotations: no img/ directory in " + dir);
    for (const auto& entry : fs::directory_iterator(img_dir)) {
        const std::string ext = entry.path().extension().string();
        if (ext == ".jpg" || ext == ".jpeg" || ext == ".png")
            ann.image_files.push_back(entry.path().string());
    }
    std::sort(ann.image_files.begin(), ann.image_files.end());

    if (ann.truths.size() != ann.image_files.size())
        throw std::runtime_error("load_annotations: " + dir + " has " +
                                 std::to_string(ann.truths.size()) + " rects but " +
                                 std::to_string(ann.image_files.size()) + " images");
    if (ann.truths.size() < 2)
        throw std::runtime_error("load_annotations: " + dir + " has fewer than two frames");
    return ann;
}

}  // namespace fmst
