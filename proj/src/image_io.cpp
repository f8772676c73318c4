#include "fmst/image.hpp"

#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace fmst {

Frame load_frame(const std::string& path) {
    cv::Mat img = cv::imread(path, cv::IMREAD_COLOR);
    if (img.empty())
        throw std::runtime_error("load_frame: cannot read " + path);
    cv::cvtColor(img, img, cv::COLOR_BGR2RGB);
    Frame f;
    f.width = img.cols;
    f.height = img.rows;
    f.pixels.assign(img.data, img.data + static_cast<size_t>(img.total()) * 3);
    return f;
}

void save_frame(const std::string& path, const Frame& frame) {
    cv::Mat img(frame.height, frame.width, CV_8UC3,
                const_cast<uint8_t*>(frame.pixels.data()));
    cv::Mat bgr;
    cv::cvtColor(img, bgr, cv::COLOR_RGB2BGR);
    if (!cv::imwrite(path, bgr))
        throw std::runtime_error("save_frame: cannot write " + path);
}

}  // namespace fmst
