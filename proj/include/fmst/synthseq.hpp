#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmst/image.hpp"
#include "fmst/geometry.hpp"

namespace fmst {

enum class Trajectory { Static, Linear, Sinusoidal, ScaleRamp };

struct MovingRect {
    Rect start;
    uint8_t color[3] = {255, 255, 255};
    Trajectory trajectory = Trajectory::Static;
    double vx = 0, vy = 0;          // px/frame for Linear
    double amp_x = 0, amp_y = 0;    // amplitude for Sinusoidal
    double period = 60;             // frames per sinusoid cycle
    double scale_per_frame = 1.0;   // per-frame size factor for ScaleRamp

    Rect rect_at(int frame) const;
};

enum class Background { Flat, Checkerboard, Noise };

struct Occluder {
    int x = 0;          // left edge of the vertical bar
    int width = 0;
    int first_frame = 0;
    int last_frame = -1;
    uint8_t color[3] = {90, 90, 90};
};

struct SceneSpec {
    int width = 200;
    int height = 200;
    int frame_count = 100;
    uint64_t seed = 0;
    Background background = Background::Flat;
    uint8_t bg_color[3] = {30, 80, 30};
    MovingRect target;
    std::vector<MovingRect> distractors;
    std::optional<Occluder> occluder;
};

struct RenderedSequence {
    std::vector<Frame> frames;
    std::vector<Rect> truths;
};

// Deterministic rendering with exact ground truth.  Throws at construction
// time if the target trajectory ever leaves the image.
RenderedSequence render(const SceneSpec& spec);

// Writes frames as img/%04d.png plus groundtruth_rect.txt (top-left x,y,w,h).
void write_otb_layout(const std::string& dir, const RenderedSequence& seq);

// Ten seed-fixed desk-scale tasks covering linear motion, sinusoidal
// motion, scale ramp, same-color distractors, and brief occlusion.
std::vector<std::pair<std::string, SceneSpec>> acceptance_suite(uint64_t seed);

}  // namespace fmst
