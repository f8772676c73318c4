#pragma once

#include <string>
#include <vector>

#include "fmst/tracker.hpp"

namespace fmst {

struct SequenceAnnotation {
    std::string task;
    std::vector<Rect> truths;            // center-based
    std::vector<std::string> image_files;
};

struct EvalResult {
    std::vector<double> precision_curve;  // 51 points, thresholds 0..50 px
    double precision_score = 0;           // value at 20 px, percent
    std::vector<double> success_curve;    // 21 points, IOU thresholds 0..1 step 0.05
    double success_score = 0;             // AUC, percent
    double fps = 0;
};

// curves over per-frame center errors / overlaps (percent)
EvalResult evaluate(const std::vector<Rect>& preds, const std::vector<Rect>& truths);

struct OpeOptions {
    int jobs = 1;
    bool oracle = false;  // perfect-tracker stub: predictions equal ground truth
};

struct OpeReport {
    std::vector<std::pair<std::string, EvalResult>> per_task;
    EvalResult averaged;
    std::vector<std::string> skipped;  // unreadable tasks
};

// One pass evaluation: initialize from the first-frame truth, track once,
// compute metrics over the subsequent frames, average uniformly over tasks.
// FPS counts tracker time only, excluding image decoding.
OpeReport run_ope(const std::vector<SequenceAnnotation>& tasks, const TrackerConfig& cfg,
                  const OpeOptions& opts = {});

// OTB-style directory: groundtruth_rect.txt + img/ frames
SequenceAnnotation load_annotations(const std::string& dir);

// parses one "x,y,w,h" line (comma or tab separated, top-left convention)
Rect parse_annotation_line(const std::string& line, int line_number);

}  // namespace fmst
