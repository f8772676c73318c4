#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fmst/candidates.hpp"
#include "test_util.hpp"

using namespace fmst;

TEST_CASE("degenerate sampler pins center and shrinks by the size mean") {
    SamplerParams p;
    p.sigma_xy = 0;
    p.sigma_wh = 0;
    p.num_candidates = 10;
    const Rect prev{50, 60, 30, 20};
    for (const Rect& c : sample_candidates(prev, p)) {
        CHECK(c.x == prev.x);
        CHECK(c.y == prev.y);
        CHECK(c.w == doctest::Approx(0.996 * prev.w));
        CHECK(c.h == doctest::Approx(0.996 * prev.h));
    }
}

TEST_CASE("default params yield exactly 600 candidates with exact aspect") {
    SamplerParams p;
    p.seed = 77;
    const Rect prev{100, 100, 48, 36};
    const auto cands = sample_candidates(prev, p);
    REQUIRE(cands.size() == 600);
    for (const Rect& c : cands) {
        CHECK(c.w / c.h == doctest::Approx(prev.w / prev.h).epsilon(1e-9));
        CHECK(c.w > 0.05 * prev.w - 1e-12);  // rejection threshold
    }
}

TEST_CASE("sampling is deterministic per seed") {
    SamplerParams p;
    p.seed = 123;
    const Rect prev{80, 80, 20, 20};
    const auto a = sample_candidates(prev, p);
    const auto b = sample_candidates(prev, p);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].w == b[i].w);
    }
}

TEST_CASE("scale factor statistics match the configured normal") {
    SamplerParams p;
    p.seed = 5;
    p.num_candidates = 100000;
    const Rect prev{100, 100, 40, 40};
    const auto cands = sample_candidates(prev, p);
    double mean = 0;
    for (const Rect& c : cands) mean += c.w / prev.w;
    mean /= cands.size();
    double var = 0;
    for (const Rect& c : cands) var += std::pow(c.w / prev.w - mean, 2);
    var /= cands.size();
    // rejection of factors <= 0.05 barely moves the moments at sigma = 1/3
    CHECK(std::abs(mean - p.size_mean) < 3 * p.sigma_wh / std::sqrt(100000.0) + 0.003);
    CHECK(std::abs(std::sqrt(var) - p.sigma_wh) < 0.05 * p.sigma_wh);
}

TEST_CASE("evaluate_candidate on an all-ones map") {
    PredictionMap m;
    m.rows = 10;
    m.cols = 10;
    m.normalized = true;
    m.values.assign(100, 1.0);
    const Rect prev{50, 50, 25, 25};
    const RoiWindow roi = make_roi(prev, {200, 200});
    const auto ev = evaluate_candidate(m, prev, prev, roi, 0.2);
    // a rect covering A cells scores 0.8 * A
    int covered = 0;
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c)
            if (prev.contains(roi.to_image_x((c + 0.5) / 10), roi.to_image_y((r + 0.5) / 10)))
                ++covered;
    CHECK(ev.score == doctest::Approx(0.8 * covered));
    CHECK(ev.distance == 0);
    CHECK(!ev.degenerate);

    PredictionMap raw = m;
    raw.normalized = false;
    CHECK_THROWS_AS(evaluate_candidate(raw, prev, prev, roi, 0.2), std::invalid_argument);
}

TEST_CASE("candidate outside the ROI is degenerate with zero score") {
    PredictionMap m;
    m.rows = 8;
    m.cols = 8;
    m.normalized = true;
    m.values.assign(64, 0.5);
    const Rect prev{50, 50, 20, 20};
    const RoiWindow roi = make_roi(prev, {400, 400});
    const auto ev = evaluate_candidate(m, Rect{300, 300, 10, 10}, prev, roi, 0.2);
    CHECK(ev.degenerate);
    CHECK(ev.score == 0);
}

TEST_CASE("confidence factors") {
    PredictionMap m;
    m.rows = 8;
    m.cols = 8;
    m.normalized = true;
    m.values.assign(64, 0.0);
    m.values[0] = 1.0;
    const Rect prev{50, 50, 20, 20};
    const RoiWindow roi = make_roi(prev, {400, 400});
    const double d_max = std::max(roi.bounds.w, roi.bounds.h) / 2;

    const std::vector<Rect> cands{prev, Rect{prev.x + d_max, prev.y, 20, 20},
                                  Rect{prev.x + 5, prev.y, 20, 20}};
    const auto evals = evaluate_all(m, cands, prev, roi, 0.2);
    double min_score = evals[0].score;
    for (const auto& e : evals) min_score = std::min(min_score, e.score);
    // d = 0: confidence is score minus the batch minimum
    CHECK(evals[0].confidence == doctest::Approx(evals[0].score - min_score));
    // d = D: confidence collapses to zero regardless of score
    CHECK(evals[1].confidence == 0);
    for (const auto& e : evals) {
        if (e.distance <= d_max) CHECK(e.confidence >= 0);
    }
}

TEST_CASE("select_best") {
    PredictionMap m;
    m.rows = 10;
    m.cols = 10;
    m.normalized = true;
    m.values.assign(100, 0.0);
    m.at(5, 5) = 1.0;  // one bright cell
    const Rect prev{50, 50, 20, 20};
    const RoiWindow roi = make_roi(prev, {200, 200});

    const Rect at_bright{roi.to_image_x(0.55), roi.to_image_y(0.55), 10, 10};
    const Rect far_away{roi.to_image_x(0.15), roi.to_image_y(0.15), 10, 10};
    const Rect best = select_best(m, {far_away, at_bright}, prev, roi, 0.2);
    CHECK(best.x == at_bright.x);
    CHECK(best.y == at_bright.y);

    const Rect only = select_best(m, {far_away}, prev, roi, 0.2);
    CHECK(only.x == far_away.x);
    CHECK_THROWS_AS(select_best(m, {}, prev, roi, 0.2), std::invalid_argument);
}

TEST_CASE("select_best agrees with a brute-force re-evaluation oracle") {
    const auto feats = fmst::test::random_features(14, 14, 32, 91);
    WeightVector w;
    w.weights.assign(32, 1.0);
    const PredictionMap m = normalize01(prediction_map(feats, w));
    const Rect prev{60, 60, 24, 24};
    const RoiWindow roi = make_roi(prev, {200, 200});
    SamplerParams p;
    p.seed = 9;
    const auto cands = sample_candidates(prev, p);
    const Rect best = select_best(m, cands, prev, roi, 0.2);

    // independent recomputation: serial loops, explicit argmax
    const double d_max = std::max(roi.bounds.w, roi.bounds.h) / 2;
    std::vector<double> scores(cands.size());
    for (size_t i = 0; i < cands.size(); ++i) {
        double s = 0;
        for (int r = 0; r < m.rows; ++r)
            for (int c = 0; c < m.cols; ++c)
                if (cands[i].contains(roi.to_image_x((c + 0.5) / m.cols),
                                      roi.to_image_y((r + 0.5) / m.rows)))
                    s += m.at(r, c) - 0.2;
        scores[i] = s;
    }
    const double min_score = *std::min_element(scores.begin(), scores.end());
    size_t best_idx = 0;
    double best_conf = -1;
    for (size_t i = 0; i < cands.size(); ++i) {
        const double d = center_distance(cands[i], prev);
        const double factor = 1.0 - d / d_max;
        const double conf = factor > 0 ? factor * (scores[i] - min_score) : 0.0;
        if (conf > best_conf) {
            best_conf = conf;
            best_idx = i;
        }
    }
    CHECK(best.x == cands[best_idx].x);
    CHECK(best.y == cands[best_idx].y);
    CHECK(best.w == cands[best_idx].w);
}

TEST_CASE("equal-area candidates: constant map shift cancels in the ranking") {
    const Rect prev{50, 50, 16, 16};
    const RoiWindow roi = make_roi(prev, {200, 200});
    const auto feats = fmst::test::random_features(12, 12, 8, 15);
    WeightVector w;
    w.weights.assign(8, 1.0);
    PredictionMap base = normalize01(prediction_map(feats, w));

    // candidates shifted by whole cell strides cover identical cell counts
    const double cell_w = roi.bounds.w / base.cols;
    const double cell_h = roi.bounds.h / base.rows;
    std::vector<Rect> cands;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
            cands.push_back(Rect{prev.x + dx * cell_w, prev.y + dy * cell_h, prev.w, prev.h});
    const Rect b1 = select_best(base, cands, prev, roi, 0.2);
    const Rect b2 = select_best(base, cands, prev, roi, 0.05);  // constant shift per covered cell
    CHECK(b1.x == b2.x);
    CHECK(b1.y == b2.y);
}
