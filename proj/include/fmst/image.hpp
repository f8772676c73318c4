#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fmst {

// 8-bit RGB frame, row-major, interleaved.
struct Frame {
    int width = 0;
    int height = 0;
    int index = 0;
    std::vector<uint8_t> pixels;  // width * height * 3

    bool empty() const { return width == 0 || height == 0; }
    const uint8_t* px(int x, int y) const {
        return pixels.data() + (static_cast<size_t>(y) * width + x) * 3;
    }
    uint8_t* px(int x, int y) {
        return pixels.data() + (static_cast<size_t>(y) * width + x) * 3;
    }
};

Frame load_frame(const std::string& path);
void save_frame(const std::string& path, const Frame& frame);

}  // namespace fmst
