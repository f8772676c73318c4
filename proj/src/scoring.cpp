#include "fmst/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fmst {

ScoreVector score_channels(const FeatureMapSet& f, const TargetMap& m) {
    if (f.rows != m.rows || f.cols != m.cols)
        throw std::invalid_argument("score_channels: feature/map shape mismatch");
    ScoreVector scores(f.channels);
    const size_t n = f.plane_size();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < f.channels; ++c) {
        const float* fc = f.channel(c);
        double acc = 0;
        for (size_t i = 0; i < n; ++i) acc += static_cast<double>(fc[i]) * m.values[i];
        scores[c] = acc;
    }
    return scores;
}

ScoreVector update_avg_scores(const ScoreVector& avg, const ScoreVector& instant, double eta) {
    if (avg.size() != instant.size())
        throw std::invalid_argument("update_avg_scores: length mismatch");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("update_avg_scores: eta outside [0,1]");
    ScoreVector out(avg.size());
    for (size_t i = 0; i < avg.size(); ++i) out[i] = eta * avg[i] + (1 - eta) * instant[i];
    return out;
}

WeightVector top_fraction_weights(const ScoreVector& scores, double fraction) {
    if (scores.empty())
        throw std::invalid_argument("top_fraction_weights: empty score vector");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("top_fraction_weights: fraction outside (0,1]");
    const int c = static_cast<int>(scores.size());
    const int k = static_cast<int>(std::ceil(fraction * c));

    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    // higher score first, lower index wins ties
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    order.resize(k);
    std::sort(order.begin(), order.end());

    WeightVector w;
    w.weights.assign(scores.size(), 0.0);
    for (int idx : order) w.weights[idx] = 1.0;
    w.selected = std::move(order);
    return w;
}

PredictionMap prediction_map(const FeatureMapSet& f, const WeightVector& w) {
    if (static_cast<int>(w.weights.size()) != f.channels)
        throw std::invalid_argument("prediction_map: weight length mismatch");
    PredictionMap m;
    m.rows = f.rows;
    m.cols = f.cols;
    m.normalized = false;
    const size_t n = f.plane_size();
    m.values.assign(n, 0.0);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        double acc = 0;
        for (int c = 0; c < f.channels; ++c)
            acc += w.weights[c] * static_cast<double>(f.data[f.plane_size() * c + i]);
        m.values[i] = acc;
    }
    return m;
}

PredictionMap normalize01(const PredictionMap& m) {
    PredictionMap out = m;
    const auto [mn, mx] = std::minmax_element(m.values.begin(), m.values.end());
    if (m.values.empty() || *mx == *mn) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
    } else {
        const double lo = *mn, range = *mx - *mn;
        for (double& v : out.values) v = (v - lo) / range;
    }
    out.normalized = true;
    return out;
}

PredictionMap combine_pos_neg(const PredictionMap& pos, const PredictionMap& neg, double alpha) {
    if (pos.rows != neg.rows || pos.cols != neg.cols)
        throw std::invalid_argument("combine_pos_neg: shape mismatch");
    if (!pos.normalized || !neg.normalized)
        throw std::invalid_argument("combine_pos_neg: inputs must be normalized");
    if (!(alpha >= 0))
        throw std::invalid_argument("combine_pos_neg: alpha must be non-negative");
    PredictionMap out = pos;
    out.normalized = false;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] -= alpha * neg.values[i];
    return out;
}

PredictionMap combine_maps(const std::vector<PredictionMap>& maps) {
    if (maps.empty())
        throw std::invalid_argument("combine_maps: empty list");
    PredictionMap out = maps[0];
    out.normalized = false;
    for (size_t m = 0; m < maps.size(); ++m) {
        if (!maps[m].normalized)
            throw std::invalid_argument("combine_maps: inputs must be normalized");
        if (maps[m].rows != out.rows || maps[m].cols != out.cols)
            throw std::invalid_argument("combine_maps: shape mismatch");
        if (m == 0) continue;
        for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += maps[m].values[i];
    }
    return out;
}

}  // namespace fmst
