#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fmst/targetmap.hpp"

namespace fmst {

// Stack of feature channels sharing one spatial resolution.
// Storage is channel-major, row-major within a channel (FMT1 layout).
struct FeatureMapSet {
    int rows = 0;
    int cols = 0;
    int channels = 0;
    std::vector<float> data;

    size_t plane_size() const { return static_cast<size_t>(rows) * cols; }
    const float* channel(int c) const { return data.data() + plane_size() * c; }
    float* channel(int c) { return data.data() + plane_size() * c; }
    float at(int c, int r, int col) const {
        return data[plane_size() * c + static_cast<size_t>(r) * cols + col];
    }
};

using ScoreVector = std::vector<double>;

// Per-channel mixing coefficients.  Hard selection uses the {0,1} subset
// and records the chosen indices; the learned generator emits reals in [0,6].
struct WeightVector {
    std::vector<double> weights;
    std::optional<std::vector<int>> selected;
};

struct PredictionMap {
    int rows = 0;
    int cols = 0;
    bool normalized = false;
    std::vector<double> values;  // row-major

    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
    double& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
};

// scores[c] = sum(F_c o M).  Parallel over channels; each channel is an
// independent sequential sum so results are bit-stable.
ScoreVector score_channels(const FeatureMapSet& f, const TargetMap& m);

// running average: eta * old + (1 - eta) * instant
ScoreVector update_avg_scores(const ScoreVector& avg, const ScoreVector& instant, double eta);

// weight 1 for the top ceil(fraction * C) channels by score, ties broken
// by lower channel index
WeightVector top_fraction_weights(const ScoreVector& scores, double fraction);

// values = sum_c w_c * F_c, accumulated in channel-index order per cell
PredictionMap prediction_map(const FeatureMapSet& f, const WeightVector& w);

// affine rescale to [0,1]; constant maps become all-zero
PredictionMap normalize01(const PredictionMap& m);

// Mp - alpha * Mn; both inputs must be normalized
PredictionMap combine_pos_neg(const PredictionMap& pos, const PredictionMap& neg, double alpha);

// elementwise sum of normalized maps
PredictionMap combine_maps(const std::vector<PredictionMap>& maps);

}  // namespace fmst
