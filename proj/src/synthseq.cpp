#include "fmst/synthseq.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

namespace fmst {

Rect MovingRect::rect_at(int frame) const {
    Rect r = start;
    switch (trajectory) {
        case Trajectory::Static:
            break;
        case Trajectory::Linear:
            r.x += vx * frame;
            r.y += vy * frame;
            break;
        case Trajectory::Sinusoidal:
            r.x += amp_x * std::sin(2 * M_PI * frame / period);
            r.y += amp_y * std::sin(2 * M_PI * frame / period);
            break;
        case Trajectory::ScaleRamp: {
            const double s = std::pow(scale_per_frame, frame);
            r.w *= s;
            r.h *= s;
            break;
        }
    }
    return r;
}

namespace {

void fill_rect(Frame& img, const Rect& r, const uint8_t color[3]) {
    const int x0 = std::max(0, static_cast<int>(std::ceil(r.left())));
    const int x1 = std::min(img.width, static_cast<int>(std::ceil(r.right())));
    const int y0 = std::max(0, static_cast<int>(std::ceil(r.top())));
    const int y1 = std::min(img.height, static_cast<int>(std::ceil(r.bottom())));
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            uint8_t* p = img.px(x, y);
            p[0] = color[0];
            p[1] = color[1];
            p[2] = color[2];
        }
}

}  // namespace

RenderedSequence render(const SceneSpec& spec) {
    if (spec.frame_count < 2)
        throw std::invalid_argument("render: need at least two frames");

    // validate the whole trajectory up front
    for (int t = 0; t < spec.frame_count; ++t) {
        const Rect r = spec.target.rect_at(t);
        if (!r.valid() || r.left() < 1 || r.top() < 1 ||
            r.right() > spec.width - 1 || r.bottom() > spec.height - 1)
            throw std::invalid_argument("render: target leaves the image at frame " +
                                        std::to_string(t));
    }

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> noise(0, 60);

    RenderedSequence seq;
    for (int t = 0; t < spec.frame_count; ++t) {
        Frame img;
        img.width = spec.width;
        img.height = spec.height;
        img.index = t;
        img.pixels.resize(static_cast<size_t>(spec.width) * spec.height * 3);

        switch (spec.background) {
            case Background::Flat:
                for (int y = 0; y < spec.height; ++y)
                    for (int x = 0; x < spec.width; ++x) {
                        uint8_t* p = img.px(x, y);
                        p[0] = spec.bg_color[0];
                        p[1] = spec.bg_color[1];
                        p[2] = spec.bg_color[2];
                    }
                break;
            case Background::Checkerboard:
                for (int y = 0; y < spec.height; ++y)
                    for (int x = 0; x < spec.width; ++x) {
                        const bool dark = ((x / 16) + (y / 16)) % 2 == 0;
                        uint8_t* p = img.px(x, y);
                        for (int ch = 0; ch < 3; ++ch)
                            p[ch] = static_cast<uint8_t>(spec.bg_color[ch] / (dark ? 2 : 1));
                    }
                break;
            case Background::Noise:
                for (int y = 0; y < spec.height; ++y)
                    for (int x = 0; x < spec.width; ++x) {
                        uint8_t* p = img.px(x, y);
                        for (int ch = 0; ch < 3; ++ch)
                            p[ch] = static_cast<uint8_t>(
                                std::min(255, spec.bg_color[ch] + noise(rng)));
                    }
                break;
        }

        for (const auto& d : spec.distractors) fill_rect(img, d.rect_at(t), d.color);
        const Rect truth = spec.target.rect_at(t);
        fill_rect(img, truth, spec.target.color);
        if (spec.occluder && t >= spec.occluder->first_frame && t <= spec.occluder->last_frame) {
            const Rect bar{spec.occluder->x + spec.occluder->width / 2.0, spec.height / 2.0,
                           static_cast<double>(spec.occluder->width),
                           static_cast<double>(spec.height)};
            fill_rect(img, bar, spec.occluder->color);
        }

        seq.frames.push_back(std::move(img));
        seq.truths.push_back(truth);
    }
    return seq;
}

void write_otb_layout(const std::string& dir, const RenderedSequence& seq) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "img");
    std::ofstream gt(fs::path(dir) / "groundtruth_rect.txt");
    if (!gt)
        throw std::runtime_error("write_otb_layout: cannot write to " + dir);
    for (size_t i = 0; i < seq.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "img/%04zu.png", i + 1);
        save_frame((fs::path(dir) / name).string(), seq.frames[i]);
        const Rect& r = seq.truths[i];
        gt << r.left() << "," << r.top() << "," << r.w << "," << r.h << "\n";
    }
}

std::vector<std::pair<std::string, SceneSpec>> acceptance_suite(uint64_t seed) {
    std::vector<std::pair<std::string, SceneSpec>> suite;
    auto base = [&](uint64_t salt) {
        SceneSpec s;
        s.width = 200;
        s.height = 200;
        s.frame_count = 100;
        s.seed = seed ^ salt;
        s.target.start = Rect{60, 60, 36, 36};
        s.target.color[0] = 220;
        s.target.color[1] = 40;
        s.target.color[2] = 40;
        return s;
    };

    {
        auto s = base(1);
        s.target.trajectory = Trajectory::Static;
        suite.emplace_back("static_flat", s);
    }
    {
        auto s = base(2);
        s.target.trajectory = Trajectory::Linear;
        s.target.vx = 0.8;
        s.target.vy = 0.4;
        suite.emplace_back("linear_slow", s);
    }
    {
        auto s = base(3);
        s.target.start = Rect{50, 100, 36, 36};
        s.target.trajectory = Trajectory::Linear;
        s.target.vx = 1.0;
        s.target.vy = 0.0;
        s.background = Background::Checkerboard;
        suite.emplace_back("linear_checker", s);
    }
    {
        auto s = base(4);
        s.target.start = Rect{100, 100, 36, 36};
        s.target.trajectory = Trajectory::Sinusoidal;
        s.target.amp_x = 18;
        s.target.amp_y = 10;
        s.target.period = 150;
        suite.emplace_back("sinusoidal", s);
    }
    {
        auto s = base(5);
        s.target.start = Rect{100, 100, 36, 36};
        s.target.trajectory = Trajectory::Sinusoidal;
        s.target.amp_x = 12;
        s.target.amp_y = 12;
        s.target.period = 120;
        s.background = Background::Noise;
        suite.emplace_back("sinusoidal_noise", s);
    }
    {
        auto s = base(6);
        s.target.start = Rect{100, 100, 30, 30};
        s.target.trajectory = Trajectory::ScaleRamp;
        s.target.scale_per_frame = 1.01;
        suite.emplace_back("scale_ramp_up", s);
    }
    {
        auto s = base(7);
        s.target.start = Rect{100, 100, 44, 44};
        s.target.trajectory = Trajectory::ScaleRamp;
        s.target.scale_per_frame = 0.995;
        suite.emplace_back("scale_ramp_down", s);
    }
    {
        auto s = base(8);
        s.target.trajectory = Trajectory::Linear;
        s.target.vx = 0.7;
        s.target.vy = 0.7;
        MovingRect d;
        d.start = Rect{150, 60, 30, 30};
        d.color[0] = 60;
        d.color[1] = 60;
        d.color[2] = 220;
        s.distractors.push_back(d);
        suite.emplace_back("distractor_blue", s);
    }
    {
        auto s = base(9);
        s.target.start = Rect{60, 120, 36, 36};
        s.target.trajectory = Trajectory::Linear;
        s.target.vx = 1.0;
        MovingRect d;
        d.start = Rect{150, 50, 36, 36};
        d.color[0] = 220;
        d.color[1] = 40;
        d.color[2] = 40;
        s.distractors.push_back(d);  // same color as the target, far away
        suite.emplace_back("distractor_same", s);
    }
    {
        auto s = base(10);
        s.target.start = Rect{60, 100, 36, 36};
        s.target.trajectory = Trajectory::Linear;
        s.target.vx = 1.0;
        Occluder occ;
        occ.x = 96;
        occ.width = 14;
        occ.first_frame = 35;
        occ.last_frame = 50;
        s.occluder = occ;
        suite.emplace_back("occlusion_bar", s);
    }
    return suite;
}

}  // namespace fmst
