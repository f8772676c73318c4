#include "fmst/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace fmst {

namespace {

constexpr int kStatGrid = 16;
constexpr int kNumStats = 5;  // mean R, G, B, |dx|, |dy|
constexpr int kFilterLen = 3 * 3 * kNumStats;

inline double clampd(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// bilinear sample with edge replication
void sample_rgb(const Frame& frame, double ix, double iy, double out[3]) {
    const double fx = clampd(ix - 0.5, 0.0, frame.width - 1.0);
    const double fy = clampd(iy - 0.5, 0.0, frame.height - 1.0);
    const int x0 = static_cast<int>(fx);
    const int y0 = static_cast<int>(fy);
    const int x1 = std::min(x0 + 1, frame.width - 1);
    const int y1 = std::min(y0 + 1, frame.height - 1);
    const double ax = fx - x0, ay = fy - y0;
    for (int ch = 0; ch < 3; ++ch) {
        const double v00 = frame.px(x0, y0)[ch], v10 = frame.px(x1, y0)[ch];
        const double v01 = frame.px(x0, y1)[ch], v11 = frame.px(x1, y1)[ch];
        out[ch] = (1 - ay) * ((1 - ax) * v00 + ax * v10) + ay * ((1 - ax) * v01 + ax * v11);
    }
}

}  // namespace

SyntheticBackbone::SyntheticBackbone(const BackboneSpec& spec) : spec_(spec) {
    if (spec_.out_channels < 1)
        throw std::invalid_argument("backbone: need at least one channel");
    std::mt19937_64 rng(spec_.synthetic_seed);
    std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(double(kFilterLen)));
    filters_.resize(static_cast<size_t>(spec_.out_channels) * kFilterLen);
    for (auto& f : filters_) f = static_cast<float>(dist(rng));
}

FeatureMapSet SyntheticBackbone::extract(const Frame& frame, const RoiWindow& roi) const {
    if (frame.empty())
        throw std::invalid_argument("extract: empty frame");
    const int s = spec_.input_size;

    // resized ROI crop, RGB in [0,1]
    std::vector<double> crop(static_cast<size_t>(s) * s * 3);
    for (int y = 0; y < s; ++y) {
        const double iy = roi.to_image_y((y + 0.5) / s);
        for (int x = 0; x < s; ++x) {
            const double ix = roi.to_image_x((x + 0.5) / s);
            double rgb[3];
            sample_rgb(frame, ix, iy, rgb);
            double* dst = crop.data() + (static_cast<size_t>(y) * s + x) * 3;
            for (int ch = 0; ch < 3; ++ch) dst[ch] = rgb[ch] / 255.0;
        }
    }

    // pooled per-cell statistics over a 16x16 grid
    std::vector<double> stats(kStatGrid * kStatGrid * kNumStats, 0.0);
    std::vector<int> counts(kStatGrid * kStatGrid, 0);
    auto gray = [&](int x, int y) {
        const double* p = crop.data() + (static_cast<size_t>(y) * s + x) * 3;
        return (p[0] + p[1] + p[2]) / 3.0;
    };
    for (int y = 0; y < s; ++y) {
        const int gy = std::min(y * kStatGrid / s, kStatGrid - 1);
        for (int x = 0; x < s; ++x) {
            const int gx = std::min(x * kStatGrid / s, kStatGrid - 1);
            double* cell = stats.data() + (static_cast<size_t>(gy) * kStatGrid + gx) * kNumStats;
            const double* p = crop.data() + (static_cast<size_t>(y) * s + x) * 3;
            cell[0] += p[0];
            cell[1] += p[1];
            cell[2] += p[2];
            cell[3] += std::abs(gray(std::min(x + 1, s - 1), y) - gray(x, y));
            cell[4] += std::abs(gray(x, std::min(y + 1, s - 1)) - gray(x, y));
            ++counts[gy * kStatGrid + gx];
        }
    }
    for (int i = 0; i < kStatGrid * kStatGrid; ++i)
        for (int k = 0; k < kNumStats; ++k)
            stats[static_cast<size_t>(i) * kNumStats + k] /= counts[i];

    FeatureMapSet out;
    out.rows = spec_.out_rows;
    out.cols = spec_.out_cols;
    out.channels = spec_.out_channels;
    out.data.resize(out.plane_size() * out.channels);

#pragma omp parallel for schedule(static)
    for (int c = 0; c < out.channels; ++c) {
        const float* filt = filters_.data() + static_cast<size_t>(c) * kFilterLen;
        float* plane = out.channel(c);
        for (int r = 0; r < out.rows; ++r) {
            const int gy = std::clamp(
                static_cast<int>((r + 0.5) / out.rows * kStatGrid), 0, kStatGrid - 1);
            for (int col = 0; col < out.cols; ++col) {
                const int gx = std::clamp(
                    static_cast<int>((col + 0.5) / out.cols * kStatGrid), 0, kStatGrid - 1);
                double acc = 0;
                int fi = 0;
                for (int ny = -1; ny <= 1; ++ny) {
                    const int sy = std::clamp(gy + ny, 0, kStatGrid - 1);
                    for (int nx = -1; nx <= 1; ++nx) {
                        const int sx = std::clamp(gx + nx, 0, kStatGrid - 1);
                        const double* cell =
                            stats.data() + (static_cast<size_t>(sy) * kStatGrid + sx) * kNumStats;
                        for (int k = 0; k < kNumStats; ++k) acc += filt[fi++] * cell[k];
                    }
                }
                plane[static_cast<size_t>(r) * out.cols + col] =
                    acc > 0 ? static_cast<float>(acc) : 0.0f;
            }
        }
    }
    return out;
}

FeatureProvider::FeatureProvider(const BackboneSpec& spec) : spec_(spec) {
    if (spec_.kind == BackboneKind::Synthetic)
        synthetic_ = std::make_shared<SyntheticBackbone>(spec_);
}

FeatureMapSet FeatureProvider::extract(const Frame& frame, const RoiWindow& roi) const {
    if (spec_.kind == BackboneKind::Synthetic) return synthetic_->extract(frame, roi);
    const std::string path = tensor_frame_path(spec_.tensor_dir, spec_.task, frame.index);
    std::ifstream probe(path);
    if (!probe.good())
        throw std::runtime_error("extract: missing feature tensor " + path);
    return load_tensor(path);
}

std::string tensor_frame_path(const std::string& dir, const std::string& task, int frame_index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08d", frame_index);
    return dir + "/" + task + "/" + buf + ".fmt1";
}

namespace {

constexpr char kMagic[4] = {'F', 'M', 'T', '1'};

[[noreturn]] void format_error(const std::string& path, const char* what, long long offset) {
    throw std::runtime_error("FMT1 " + path + ": " + what + " at byte offset " +
                             std::to_string(offset));
}

template <typename T>
T read_le(std::ifstream& in, const std::string& path, const char* field) {
    uint8_t buf[sizeof(T)];
    const long long off = in.tellg();
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
        format_error(path, field, off);
    T v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
}

template <typename T>
void write_le(std::ofstream& out, T v) {
    uint8_t buf[sizeof(T)];
    for (size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<uint8_t>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

}  // namespace

FeatureMapSet load_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_tensor: cannot open " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        format_error(path, "bad magic", 0);
    const auto version = read_le<uint16_t>(in, path, "truncated version");
    if (version != 1)
        format_error(path, "unsupported version", 4);
    const auto rows = read_le<uint32_t>(in, path, "truncated rows");
    const auto cols = read_le<uint32_t>(in, path, "truncated cols");
    const auto channels = read_le<uint32_t>(in, path, "truncated channels");
    const uint64_t count = static_cast<uint64_t>(rows) * cols * channels;
    if (rows == 0 || cols == 0 || channels == 0 || count > (1ull << 31))
        format_error(path, "dimension overflow", 6);

    FeatureMapSet f;
    f.rows = static_cast<int>(rows);
    f.cols = static_cast<int>(cols);
    f.channels = static_cast<int>(channels);
    f.data.resize(count);
    static_assert(sizeof(float) == 4);
    const long long payload_off = in.tellg();
    if (!in.read(reinterpret_cast<char*>(f.data.data()), count * 4))
        format_error(path, "truncated payload", payload_off);
    return f;
}

void store_tensor(const std::string& path, const FeatureMapSet& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("store_tensor: cannot open " + path);
    out.write(kMagic, 4);
    write_le<uint16_t>(out, 1);
    write_le<uint32_t>(out, static_cast<uint32_t>(f.rows));
    write_le<uint32_t>(out, static_cast<uint32_t>(f.cols));
    write_le<uint32_t>(out, static_cast<uint32_t>(f.channels));
    out.write(reinterpret_cast<const char*>(f.data.data()),
              static_cast<std::streamsize>(f.data.size() * 4));
    if (!out)
        throw std::runtime_error("store_tensor: write failed for " + path);
}

}  // namespace fmst
