#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fmst/scoring.hpp"

namespace fmst {

struct SamplerParams {
    double sigma_xy = 0.01;    // stddev ratio for center jitter
    double sigma_wh = 1.0 / 3; // stddev of the shared scale factor
    int num_candidates = 600;
    double size_mean = 0.996;  // shrink-sampling mean scale
    uint64_t seed = 0;
};

struct CandidateEvaluation {
    Rect rect;
    double score = 0;       // sum over covered cells of (map - b)
    double distance = 0;    // center distance to the previous rect
    double confidence = 0;
    bool degenerate = false; // no map cell covered
};

// Gaussian random walk around the previous rect.  One scale factor per
// candidate multiplies both w and h, so aspect ratio is exact; factors
// <= 0.05 are rejection-resampled.
std::vector<Rect> sample_candidates(const Rect& prev, const SamplerParams& p, std::mt19937_64& rng);
std::vector<Rect> sample_candidates(const Rect& prev, const SamplerParams& p);

// Scores one candidate on a [0,1]-normalized map.  Confidence is filled by
// evaluate_all / select_best once the batch minimum score is known.
CandidateEvaluation evaluate_candidate(const PredictionMap& m, const Rect& cand,
                                       const Rect& prev, const RoiWindow& roi, double b);

std::vector<CandidateEvaluation> evaluate_all(const PredictionMap& m,
                                              const std::vector<Rect>& cands,
                                              const Rect& prev, const RoiWindow& roi, double b);

// Candidate with maximal confidence; ties broken by lower list index.
Rect select_best(const PredictionMap& m, const std::vector<Rect>& cands,
                 const Rect& prev, const RoiWindow& roi, double b);

}  // namespace fmst
