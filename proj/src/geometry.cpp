#include "fmst/geometry.hpp"

#include <algorithm>

namespace fmst {

RoiWindow make_roi(const Rect& target, ImageSize image_size) {
    if (!target.valid())
        throw std::invalid_argument("make_roi: rect has non-positive or non-finite size");
    RoiWindow win;
    win.bounds = Rect{target.x, target.y, 2 * target.w, 2 * target.h};
    win.image_size = image_size;
    return win;
}

double iou(const Rect& a, const Rect& b) {
    if (!a.valid() || !b.valid())
        throw std::invalid_argument("iou: invalid rect");
    const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.left(), b.left()));
    const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top()));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

double center_distance(const Rect& a, const Rect& b) {
    if (!a.valid() || !b.valid())
        throw std::invalid_argument("center_distance: invalid rect");
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace fmst
