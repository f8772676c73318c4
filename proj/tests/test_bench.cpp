#include <doctest.h>

#include <random>

#include "fmst/bench.hpp"
#include "fmst/reference.hpp"

using namespace fmst;

namespace {

std::vector<Rect> perturbed(const std::vector<Rect>& truths, uint64_t seed, double spread) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-spread, spread);
    std::vector<Rect> out;
    for (const Rect& t : truths)
        out.push_back(Rect{t.x + d(rng), t.y + d(rng), t.w * (1 + d(rng) / 50),
                           t.h * (1 + d(rng) / 50)});
    return out;
}

std::vector<Rect> make_truths(int n) {
    std::vector<Rect> out;
    for (int i = 0; i < n; ++i) out.push_back(Rect{50.0 + i, 60.0, 20, 24});
    return out;
}

}  // namespace

TEST_CASE("perfect predictions score 100 everywhere") {
    const auto truths = make_truths(30);
    const EvalResult r = evaluate(truths, truths);
    for (double v : r.precision_curve) CHECK(v == 100.0);
    CHECK(r.precision_score == 100.0);
    CHECK(r.success_score == doctest::Approx(100.0));
}

TEST_CASE("constant 25 px center error") {
    auto truths = make_truths(10);
    auto preds = truths;
    for (Rect& p : preds) p.x += 25;
    const EvalResult r = evaluate(preds, truths);
    CHECK(r.precision_curve[20] == 0.0);
    CHECK(r.precision_curve[24] == 0.0);
    CHECK(r.precision_curve[25] == 100.0);
    CHECK(r.precision_score == 0.0);
}

TEST_CASE("fully disjoint predictions keep only the zero-IOU threshold") {
    auto truths = make_truths(10);
    auto preds = truths;
    for (Rect& p : preds) p.x += 1000;
    const EvalResult r = evaluate(preds, truths);
    CHECK(r.success_curve[0] == 100.0);
    for (int t = 1; t <= 20; ++t) CHECK(r.success_curve[t] == 0.0);
    CHECK(r.success_score == doctest::Approx(100.0 / 21));
}

TEST_CASE("curves match the naive recount reference") {
    const auto truths = make_truths(200);
    const auto preds = perturbed(truths, 9, 30);

    std::vector<double> errors, overlaps;
    for (size_t i = 0; i < truths.size(); ++i) {
        errors.push_back(center_distance(preds[i], truths[i]));
        overlaps.push_back(iou(preds[i], truths[i]));
    }
    const EvalResult r = evaluate(preds, truths);
    const auto want_prec = ref::precision_curve(errors);
    const auto want_succ = ref::success_curve(overlaps);
    for (int t = 0; t <= 50; ++t)
        CHECK(r.precision_curve[t] == doctest::Approx(want_prec[t]).epsilon(1e-12));
    for (int t = 0; t <= 20; ++t)
        CHECK(r.success_curve[t] == doctest::Approx(want_succ[t]).epsilon(1e-12));
}

TEST_CASE("curve monotonicity and AUC identity") {
    const auto truths = make_truths(100);
    const auto preds = perturbed(truths, 4, 15);
    const EvalResult r = evaluate(preds, truths);
    for (int t = 1; t <= 50; ++t) CHECK(r.precision_curve[t] >= r.precision_curve[t - 1]);
    for (int t = 1; t <= 20; ++t) CHECK(r.success_curve[t] <= r.success_curve[t - 1]);
    double mean = 0;
    for (double v : r.success_curve) mean += v / 21;
    CHECK(r.success_score == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("metrics are symmetric in preds and truths") {
    const auto truths = make_truths(50);
    const auto preds = perturbed(truths, 77, 20);
    const EvalResult a = evaluate(preds, truths);
    const EvalResult b = evaluate(truths, preds);
    for (int t = 0; t <= 50; ++t) CHECK(a.precision_curve[t] == b.precision_curve[t]);
    for (int t = 0; t <= 20; ++t) CHECK(a.success_curve[t] == b.success_curve[t]);
}

TEST_CASE("evaluate input validation") {
    const auto truths = make_truths(5);
    CHECK_THROWS_AS(evaluate(make_truths(4), truths), std::invalid_argument);
    CHECK_THROWS_AS(evaluate({}, {}), std::invalid_argument);
}

TEST_CASE("annotation line parsing") {
    const Rect r = parse_annotation_line("10,20,30,40", 1);
    CHECK(r.x == 25);
    CHECK(r.y == 40);
    CHECK(r.w == 30);
    CHECK(r.h == 40);

    const Rect tabbed = parse_annotation_line("10\t20\t30\t40", 2);
    CHECK(tabbed.x == r.x);
    CHECK(tabbed.h == r.h);

    CHECK_THROWS_WITH_AS(parse_annotation_line("10,20,0,40", 3),
                         doctest::Contains("line 3"), std::runtime_error);
    CHECK_THROWS_AS(parse_annotation_line("10,20,abc,40", 4), std::runtime_error);
    CHECK_THROWS_AS(parse_annotation_line("10,20", 5), std::runtime_error);
}

TEST_CASE("per-task averaging is uniform") {
    // synthetic per-task results through the averaging path: one perfect
    // task, one fully-wrong task
    const auto truths = make_truths(10);
    auto off = truths;
    for (Rect& p : off) p.x += 1000;
    const EvalResult perfect = evaluate(truths, truths);
    const EvalResult wrong = evaluate(off, truths);
    const double avg_prec = (perfect.precision_score + wrong.precision_score) / 2;
    CHECK(avg_prec == doctest::Approx(50.0));
}
