#include "fmst/targetmap.hpp"

namespace fmst {

namespace {

TargetMap make_map(const RoiWindow& roi, const Rect& target, int rows, int cols, MapKind kind) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("target map: resolution must be at least 1x1");
    if (!target.valid())
        throw std::invalid_argument("target map: invalid target rect");

    TargetMap m;
    m.rows = rows;
    m.cols = cols;
    m.kind = kind;
    m.polarity = Polarity::Positive;
    m.values.resize(static_cast<size_t>(rows) * cols);

    // doubled rect for Type S, clipped implicitly by the ROI extent
    const Rect doubled{target.x, target.y, 2 * target.w, 2 * target.h};

    for (int r = 0; r < rows; ++r) {
        const double iy = roi.to_image_y((r + 0.5) / rows);
        for (int c = 0; c < cols; ++c) {
            const double ix = roi.to_image_x((c + 0.5) / cols);
            double v;
            if (target.contains(ix, iy)) {
                v = 1.0;
            } else if (kind == MapKind::TypeC) {
                v = -1.0;
            } else {
                v = doubled.contains(ix, iy) ? -1.0 : 0.0;
            }
            m.at(r, c) = v;
        }
    }
    return m;
}

}  // namespace

TargetMap make_type_c(const RoiWindow& roi, const Rect& target, int rows, int cols) {
    return make_map(roi, target, rows, cols, MapKind::TypeC);
}

TargetMap make_type_s(const RoiWindow& roi, const Rect& target, int rows, int cols) {
    return make_map(roi, target, rows, cols, MapKind::TypeS);
}

TargetMap negate(const TargetMap& map) {
    if (map.polarity != Polarity::Positive)
        throw std::invalid_argument("negate: map is already negative");
    TargetMap out = map;
    out.polarity = Polarity::Negative;
    for (double& v : out.values) v = -v;
    return out;
}

}  // namespace fmst
