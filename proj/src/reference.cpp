#include "fmst/reference.hpp"

namespace fmst::ref {

ScoreVector score_channels(const FeatureMapSet& f, const TargetMap& m) {
    ScoreVector scores(f.channels, 0.0);
    for (int c = 0; c < f.channels; ++c) {
        double acc = 0;
        for (int r = 0; r < f.rows; ++r)
            for (int col = 0; col < f.cols; ++col)
                acc += static_cast<double>(f.at(c, r, col)) * m.at(r, col);
        scores[c] = acc;
    }
    return scores;
}

PredictionMap prediction_map(const FeatureMapSet& f, const WeightVector& w) {
    PredictionMap m;
    m.rows = f.rows;
    m.cols = f.cols;
    m.normalized = false;
    m.values.assign(f.plane_size(), 0.0);
    for (int r = 0; r < f.rows; ++r)
        for (int col = 0; col < f.cols; ++col) {
            double acc = 0;
            for (int c = 0; c < f.channels; ++c)
                acc += w.weights[c] * static_cast<double>(f.at(c, r, col));
            m.at(r, col) = acc;
        }
    return m;
}

PredictionMap combine_maps(const std::vector<PredictionMap>& maps) {
    PredictionMap out;
    out.rows = maps.at(0).rows;
    out.cols = maps.at(0).cols;
    out.normalized = false;
    out.values.assign(maps[0].values.size(), 0.0);
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) {
            double acc = 0;
            for (const auto& m : maps) acc += m.at(r, c);
            out.at(r, c) = acc;
        }
    return out;
}

std::vector<double> precision_curve(const std::vector<double>& center_errors) {
    std::vector<double> curve(51, 0.0);
    for (int t = 0; t <= 50; ++t) {
        int hit = 0;
        for (double e : center_errors)
            if (e <= t) ++hit;
        curve[t] = center_errors.empty() ? 0.0 : 100.0 * hit / center_errors.size();
    }
    return curve;
}

std::vector<double> success_curve(const std::vector<double>& overlaps) {
    std::vector<double> curve(21, 0.0);
    for (int t = 0; t <= 20; ++t) {
        const double thr = t * 0.05;
        int hit = 0;
        for (double o : overlaps)
            if (o >= thr) ++hit;
        curve[t] = overlaps.empty() ? 0.0 : 100.0 * hit / overlaps.size();
    }
    return curve;
}

}  // namespace fmst::ref
