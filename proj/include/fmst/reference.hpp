#pragma once

// Serial, naive-loop reference implementations of the parallel kernels.
// Kept deliberately independent of the OpenMP paths: plain triple loops,
// no shared helpers beyond the data types.  Tests and the kernel benchmark
// compare against these.

#include "fmst/scoring.hpp"

namespace fmst::ref {

ScoreVector score_channels(const FeatureMapSet& f, const TargetMap& m);
PredictionMap prediction_map(const FeatureMapSet& f, const WeightVector& w);
PredictionMap combine_maps(const std::vector<PredictionMap>& maps);

std::vector<double> precision_curve(const std::vector<double>& center_errors);
std::vector<double> success_curve(const std::vector<double>& overlaps);

}  // namespace fmst::ref
