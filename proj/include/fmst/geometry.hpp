#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fmst {

// Center-based bounding box in image pixels.
struct Rect {
    double x = 0;  // center column
    double y = 0;  // center row
    double w = 0;
    double h = 0;

    bool valid() const {
        return w > 0 && h > 0 && std::isfinite(x) && std::isfinite(y) &&
               std::isfinite(w) && std::isfinite(h);
    }
    double left() const { return x - w / 2; }
    double right() const { return x + w / 2; }
    double top() const { return y - h / 2; }
    double bottom() const { return y + h / 2; }
    double area() const { return w * h; }

    bool contains(double px, double py) const {
        // half-open membership: [left, right) x [top, bottom)
        return px >= left() && px < right() && py >= top() && py < bottom();
    }
};

struct ImageSize {
    int width = 0;
    int height = 0;
};

// Crop window twice the target size in each direction.  Portions outside
// the image are filled by edge replication at crop time, so the window
// always keeps its exact 2w x 2h extent.
struct RoiWindow {
    Rect bounds;
    ImageSize image_size;

    // window-relative (u,v) in [0,1] -> image pixel coordinate
    double to_image_x(double u) const { return bounds.left() + u * bounds.w; }
    double to_image_y(double v) const { return bounds.top() + v * bounds.h; }
    double to_window_u(double ix) const { return (ix - bounds.left()) / bounds.w; }
    double to_window_v(double iy) const { return (iy - bounds.top()) / bounds.h; }
};

RoiWindow make_roi(const Rect& target, ImageSize image_size);

double iou(const Rect& a, const Rect& b);
double center_distance(const Rect& a, const Rect& b);

}  // namespace fmst
