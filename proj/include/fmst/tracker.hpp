#pragma once

#include <map>
#include <optional>
#include <random>

#include "fmst/candidates.hpp"
#include "fmst/features.hpp"
#include "fmst/weightnet.hpp"

namespace fmst {

enum class TrackerMode { FmstHard, Learned };

struct TrackerConfig {
    TrackerMode mode = TrackerMode::Learned;
    double eta = 0.99;
    double selection_fraction = 0.1;
    SamplerParams sampler;
    double score_offset = 0.2;       // b in the candidate score
    double alpha = 0.5;              // negative-map strength
    bool use_type_s = true;
    bool use_type_c = false;
    bool use_negative = true;        // learned mode only
    bool use_instant_scores = false; // feed the net s instead of s-bar
    BackboneSpec backbone;
    std::optional<DenseNet> net_pos;
    std::optional<DenseNet> net_neg;
};

// One (map type, polarity) scoring track carried across frames.
struct ChannelTrack {
    MapKind kind = MapKind::TypeS;
    Polarity polarity = Polarity::Positive;
    ScoreVector avg_scores;
    WeightVector weights;
};

struct TrackerState {
    Rect prev_rect;
    int frame_index = 0;
    std::vector<ChannelTrack> tracks;
    std::mt19937_64 rng;
    bool last_step_degenerate = false;
};

class Tracker {
public:
    explicit Tracker(const TrackerConfig& cfg);

    TrackerState init(const Frame& frame, const Rect& truth) const;
    Rect step(TrackerState& state, const Frame& frame) const;

    // init on frame 0, step on the rest; returns T-1 predictions
    std::vector<Rect> track_sequence(const std::vector<Frame>& frames, const Rect& init_rect) const;

    const TrackerConfig& config() const { return cfg_; }

private:
    TargetMap make_map(const ChannelTrack& track, const RoiWindow& roi, const Rect& rect,
                       int rows, int cols) const;
    void refresh_track(ChannelTrack& track, const FeatureMapSet& feat, const RoiWindow& roi,
                       const Rect& rect, bool first_frame) const;

    TrackerConfig cfg_;
    FeatureProvider backbone_;
};

}  // namespace fmst
