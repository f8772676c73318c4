#include "fmst/candidates.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmst {

std::vector<Rect> sample_candidates(const Rect& prev, const SamplerParams& p, std::mt19937_64& rng) {
    if (!prev.valid())
        throw std::invalid_argument("sample_candidates: invalid previous rect");
    if (p.num_candidates < 1)
        throw std::invalid_argument("sample_candidates: need at least one candidate");

    const double pos_sigma = p.sigma_xy * std::max(prev.w, prev.h);
    std::normal_distribution<double> dx(prev.x, pos_sigma);
    std::normal_distribution<double> dy(prev.y, pos_sigma);
    std::normal_distribution<double> dscale(p.size_mean, p.sigma_wh);

    std::vector<Rect> out;
    out.reserve(p.num_candidates);
    for (int i = 0; i < p.num_candidates; ++i) {
        const double cx = pos_sigma > 0 ? dx(rng) : prev.x;
        const double cy = pos_sigma > 0 ? dy(rng) : prev.y;
        double scale = p.size_mean;
        if (p.sigma_wh > 0) {
            do {
                scale = dscale(rng);
            } while (scale <= 0.05);
        }
        out.push_back(Rect{cx, cy, scale * prev.w, scale * prev.h});
    }
    return out;
}

std::vector<Rect> sample_candidates(const Rect& prev, const SamplerParams& p) {
    std::mt19937_64 rng(p.seed);
    return sample_candidates(prev, p, rng);
}

CandidateEvaluation evaluate_candidate(const PredictionMap& m, const Rect& cand,
                                       const Rect& prev, const RoiWindow& roi, double b) {
    if (!m.normalized)
        throw std::invalid_argument("evaluate_candidate: map must be normalized to [0,1]");
    CandidateEvaluation ev;
    ev.rect = cand;
    ev.distance = center_distance(cand, prev);

    // same half-open center-inclusion rule as the target maps
    double score = 0;
    int covered = 0;
    for (int r = 0; r < m.rows; ++r) {
        const double iy = roi.to_image_y((r + 0.5) / m.rows);
        for (int c = 0; c < m.cols; ++c) {
            const double ix = roi.to_image_x((c + 0.5) / m.cols);
            if (cand.contains(ix, iy)) {
                score += m.at(r, c) - b;
                ++covered;
            }
        }
    }
    ev.score = score;
    ev.degenerate = covered == 0;
    return ev;
}

std::vector<CandidateEvaluation> evaluate_all(const PredictionMap& m,
                                              const std::vector<Rect>& cands,
                                              const Rect& prev, const RoiWindow& roi, double b) {
    std::vector<CandidateEvaluation> evals(cands.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(cands.size()); ++i)
        evals[i] = evaluate_candidate(m, cands[i], prev, roi, b);

    double min_score = evals[0].score;
    for (const auto& e : evals) min_score = std::min(min_score, e.score);

    // D: half of the ROI's longer side
    const double d_max = std::max(roi.bounds.w, roi.bounds.h) / 2;
    for (auto& e : evals) {
        const double dist_factor = 1.0 - e.distance / d_max;
        e.confidence = dist_factor > 0 ? dist_factor * (e.score - min_score) : 0.0;
    }
    return evals;
}

Rect select_best(const PredictionMap& m, const std::vector<Rect>& cands,
                 const Rect& prev, const RoiWindow& roi, double b) {
    if (cands.empty())
        throw std::invalid_argument("select_best: empty candidate list");
    const auto evals = evaluate_all(m, cands, prev, roi, b);
    size_t best = 0;
    for (size_t i = 1; i < evals.size(); ++i)
        if (evals[i].confidence > evals[best].confidence) best = i;
    return evals[best].rect;
}

}  // namespace fmst
