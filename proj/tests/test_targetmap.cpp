#include <doctest.h>

#include <random>

#include "fmst/targetmap.hpp"

using namespace fmst;

namespace {

// brute-force center-inclusion oracle
int count_inside(const RoiWindow& roi, const Rect& region, int rows, int cols) {
    int n = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double ix = roi.to_image_x((c + 0.5) / cols);
            const double iy = roi.to_image_y((r + 0.5) / rows);
            if (region.contains(ix, iy)) ++n;
        }
    return n;
}

}  // namespace

TEST_CASE("type C on a centered target") {
    const Rect target{50, 50, 20, 20};
    const RoiWindow roi = make_roi(target, {200, 200});
    const TargetMap m = make_type_c(roi, target, 4, 4);
    // target occupies the central half of the ROI per axis -> inner 2x2 cells
    int pos = 0, neg = 0;
    for (double v : m.values) (v > 0 ? pos : neg)++;
    CHECK(pos == 4);
    CHECK(neg == 12);
    CHECK(m.at(1, 1) == 1);
    CHECK(m.at(0, 0) == -1);
}

TEST_CASE("1x1 maps are the ROI center, always inside the target") {
    const Rect target{33, 41, 10, 14};
    const RoiWindow roi = make_roi(target, {100, 100});
    CHECK(make_type_c(roi, target, 1, 1).values[0] == 1);
    CHECK(make_type_s(roi, target, 1, 1).values[0] == 1);
}

TEST_CASE("14x14 type C count for a target half the ROI size") {
    const Rect target{70, 70, 28, 28};
    const RoiWindow roi = make_roi(target, {300, 300});
    const TargetMap m = make_type_c(roi, target, 14, 14);
    int pos = 0;
    for (double v : m.values)
        if (v > 0) ++pos;
    CHECK(pos == count_inside(roi, target, 14, 14));
    CHECK(pos == 49);
}

TEST_CASE("type S equals type C when the doubled rect fills the ROI") {
    // tracking-time geometry: ROI is centered on the target, so the doubled
    // rect coincides with the ROI and no zero ring exists
    const Rect target{64, 64, 32, 24};
    const RoiWindow roi = make_roi(target, {256, 256});
    const TargetMap s = make_type_s(roi, target, 14, 14);
    const TargetMap c = make_type_c(roi, target, 14, 14);
    for (size_t i = 0; i < s.values.size(); ++i) CHECK(s.values[i] == c.values[i]);
}

TEST_CASE("type S has a zero ring for a small off-ROI-scale target") {
    // ROI built around a larger rect; the mapped target is a quarter of the
    // ROI per axis, so its doubled rect leaves a zero margin
    const RoiWindow roi = make_roi(Rect{80, 80, 40, 40}, {400, 400});
    const Rect small{80, 80, 20, 20};
    const int res = 16;
    const TargetMap m = make_type_s(roi, small, res, res);

    const Rect doubled{small.x, small.y, 2 * small.w, 2 * small.h};
    int pos = 0, neg = 0, zero = 0;
    for (double v : m.values) (v > 0 ? pos : (v < 0 ? neg : zero))++;
    CHECK(pos == count_inside(roi, small, res, res));
    CHECK(pos + neg == count_inside(roi, doubled, res, res));
    CHECK(zero == res * res - pos - neg);
    CHECK(zero > 0);
}

TEST_CASE("negate flips entries and polarity") {
    const RoiWindow roi = make_roi(Rect{80, 80, 40, 40}, {400, 400});
    const TargetMap m = make_type_s(roi, Rect{80, 80, 20, 20}, 8, 8);
    const TargetMap n = negate(m);
    CHECK(n.polarity == Polarity::Negative);
    for (size_t i = 0; i < m.values.size(); ++i) {
        CHECK(n.values[i] == -m.values[i]);
        CHECK(n.values[i] + m.values[i] == 0);
    }
    CHECK_THROWS_AS(negate(n), std::invalid_argument);
}

TEST_CASE("type C sum matches the brute-force count for random geometry") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> center(40, 60), size(8, 30);
    std::uniform_int_distribution<int> res(1, 20);
    for (int i = 0; i < 100; ++i) {
        const Rect target{center(rng), center(rng), size(rng), size(rng)};
        const RoiWindow roi = make_roi(target, {200, 200});
        const int rows = res(rng), cols = res(rng);
        const TargetMap m = make_type_c(roi, target, rows, cols);
        const int inside = count_inside(roi, target, rows, cols);
        double sum = 0;
        for (double v : m.values) sum += v;
        CHECK(sum == doctest::Approx(inside - (rows * cols - inside)));
    }
}

TEST_CASE("type C and type S agree on the +1 region") {
    const RoiWindow roi = make_roi(Rect{80, 80, 44, 36}, {400, 400});
    const Rect target{75, 85, 18, 22};
    const TargetMap c = make_type_c(roi, target, 14, 14);
    const TargetMap s = make_type_s(roi, target, 14, 14);
    for (size_t i = 0; i < c.values.size(); ++i)
        CHECK((c.values[i] == 1) == (s.values[i] == 1));
}

TEST_CASE("invalid resolution") {
    const Rect target{50, 50, 20, 20};
    const RoiWindow roi = make_roi(target, {200, 200});
    CHECK_THROWS_AS(make_type_c(roi, target, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_type_s(roi, target, 4, 0), std::invalid_argument);
}
