#pragma once

#include <vector>

#include "fmst/geometry.hpp"

namespace fmst {

enum class MapKind { TypeC, TypeS };
enum class Polarity { Positive, Negative };

// Signed mask over the ROI at feature-map resolution.  Entries are in
// {-1, 0, +1}; Type C has no zeros, Type S is zero outside the doubled
// target rect.
struct TargetMap {
    int rows = 0;
    int cols = 0;
    MapKind kind = MapKind::TypeS;
    Polarity polarity = Polarity::Positive;
    std::vector<double> values;  // row-major

    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
    double& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
};

// Maps are built by sampling cell centers against half-open rects, never by
// image resizing, so the construction is exact and interpolation-free.
TargetMap make_type_c(const RoiWindow& roi, const Rect& target, int rows, int cols);
TargetMap make_type_s(const RoiWindow& roi, const Rect& target, int rows, int cols);

TargetMap negate(const TargetMap& map);

}  // namespace fmst
