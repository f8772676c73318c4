#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fmst/image.hpp"
#include "fmst/scoring.hpp"

namespace fmst {

enum class BackboneKind { Synthetic, File };

struct BackboneSpec {
    BackboneKind kind = BackboneKind::Synthetic;
    int out_rows = 14;
    int out_cols = 14;
    int out_channels = 64;
    int input_size = 224;       // ROI resize target (square)
    uint64_t synthetic_seed = 0;
    std::string tensor_dir;     // for kind == File: <dir>/<task>/<frame>.fmt1
    std::string task;
};

// Deterministic stand-in backbone.  Crops the ROI with edge replication,
// bilinearly resizes to input_size, pools 16x16 color/gradient statistics,
// and projects each output cell's 3x3 stat neighborhood through a fixed
// seeded random filter per channel, then ReLU.
class SyntheticBackbone {
public:
    explicit SyntheticBackbone(const BackboneSpec& spec);
    FeatureMapSet extract(const Frame& frame, const RoiWindow& roi) const;
    const BackboneSpec& spec() const { return spec_; }

private:
    BackboneSpec spec_;
    std::vector<float> filters_;  // channels x (3*3*kNumStats)
};

// Dispatches on spec.kind: synthetic backbone or a preloaded FMT1 tensor
// for frame.index.
class FeatureProvider {
public:
    explicit FeatureProvider(const BackboneSpec& spec);
    FeatureMapSet extract(const Frame& frame, const RoiWindow& roi) const;
    const BackboneSpec& spec() const { return spec_; }

private:
    BackboneSpec spec_;
    std::shared_ptr<SyntheticBackbone> synthetic_;
};

// FMT1: "FMT1" | version u16 LE | rows u32 | cols u32 | channels u32 |
// payload f32 LE, channel-major then row-major.
FeatureMapSet load_tensor(const std::string& path);
void store_tensor(const std::string& path, const FeatureMapSet& f);

std::string tensor_frame_path(const std::string& dir, const std::string& task, int frame_index);

}  // namespace fmst
