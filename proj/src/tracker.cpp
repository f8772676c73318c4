#include "fmst/tracker.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace fmst {

Tracker::Tracker(const TrackerConfig& cfg) : cfg_(cfg), backbone_(cfg.backbone) {
    if (!cfg_.use_type_s && !cfg_.use_type_c)
        throw std::invalid_argument("tracker: at least one target map type must be active");
    if (cfg_.mode == TrackerMode::Learned) {
        if (!cfg_.net_pos)
            throw std::invalid_argument("tracker: learned mode requires a positive net");
        if (cfg_.use_negative && !cfg_.net_neg)
            throw std::invalid_argument("tracker: negative combination requires a negative net");
    }
}

TargetMap Tracker::make_map(const ChannelTrack& track, const RoiWindow& roi, const Rect& rect,
                            int rows, int cols) const {
    TargetMap m = track.kind == MapKind::TypeS ? make_type_s(roi, rect, rows, cols)
                                               : make_type_c(roi, rect, rows, cols);
    return track.polarity == Polarity::Positive ? m : negate(m);
}

void Tracker::refresh_track(ChannelTrack& track, const FeatureMapSet& feat, const RoiWindow& roi,
                            const Rect& rect, bool first_frame) const {
    const TargetMap m = make_map(track, roi, rect, feat.rows, feat.cols);
    const ScoreVector s = score_channels(feat, m);
    track.avg_scores = first_frame ? s : update_avg_scores(track.avg_scores, s, cfg_.eta);

    if (cfg_.mode == TrackerMode::FmstHard) {
        track.weights = top_fraction_weights(track.avg_scores, cfg_.selection_fraction);
    } else {
        const ScoreVector& input = cfg_.use_instant_scores ? s : track.avg_scores;
        const DenseNet& net =
            track.polarity == Polarity::Positive ? *cfg_.net_pos : *cfg_.net_neg;
        track.weights = forward(net, input);
    }
}

TrackerState Tracker::init(const Frame& frame, const Rect& truth) const {
    if (!truth.valid())
        throw std::invalid_argument("tracker init: invalid rect");
    TrackerState state;
    state.prev_rect = truth;
    state.frame_index = 0;
    state.rng.seed(cfg_.sampler.seed);

    const bool with_negative = cfg_.mode == TrackerMode::Learned && cfg_.use_negative;
    for (MapKind kind : {MapKind::TypeS, MapKind::TypeC}) {
        if ((kind == MapKind::TypeS && !cfg_.use_type_s) ||
            (kind == MapKind::TypeC && !cfg_.use_type_c))
            continue;
        state.tracks.push_back({kind, Polarity::Positive, {}, {}});
        if (with_negative) state.tracks.push_back({kind, Polarity::Negative, {}, {}});
    }

    const RoiWindow roi = make_roi(truth, {frame.width, frame.height});
    const FeatureMapSet feat = backbone_.extract(frame, roi);
    for (auto& track : state.tracks) refresh_track(track, feat, roi, truth, true);
    return state;
}

Rect Tracker::step(TrackerState& state, const Frame& frame) const {
    if (state.tracks.empty())
        throw std::logic_error("tracker step: uninitialized state");
    const RoiWindow roi = make_roi(state.prev_rect, {frame.width, frame.height});
    const FeatureMapSet feat = backbone_.extract(frame, roi);

    // one final map per active type, then summed across types
    std::vector<PredictionMap> per_type;
    for (size_t i = 0; i < state.tracks.size(); ++i) {
        const auto& track = state.tracks[i];
        if (track.polarity != Polarity::Positive) continue;
        PredictionMap pos = normalize01(prediction_map(feat, track.weights));
        const ChannelTrack* neg_track = nullptr;
        for (const auto& t : state.tracks)
            if (t.kind == track.kind && t.polarity == Polarity::Negative) neg_track = &t;
        if (neg_track) {
            PredictionMap neg = normalize01(prediction_map(feat, neg_track->weights));
            per_type.push_back(normalize01(combine_pos_neg(pos, neg, cfg_.alpha)));
        } else {
            per_type.push_back(std::move(pos));
        }
    }
    PredictionMap combined = combine_maps(per_type);

    const auto [mn, mx] = std::minmax_element(combined.values.begin(), combined.values.end());
    Rect new_rect;
    if (*mx == *mn) {
        // featureless map: hold position instead of drifting to noise
        std::cerr << "tracker: degenerate prediction map at frame " << state.frame_index + 1
                  << ", holding previous rect\n";
        new_rect = state.prev_rect;
        state.last_step_degenerate = true;
    } else {
        const PredictionMap eval_map = normalize01(combined);
        const std::vector<Rect> cands =
            sample_candidates(state.prev_rect, cfg_.sampler, state.rng);
        new_rect = select_best(eval_map, cands, state.prev_rect, roi, cfg_.score_offset);
        state.last_step_degenerate = false;
    }

    // score and weight refresh against this frame's features and the new rect
    for (auto& track : state.tracks) refresh_track(track, feat, roi, new_rect, false);

    state.prev_rect = new_rect;
    ++state.frame_index;
    return new_rect;
}

std::vector<Rect> Tracker::track_sequence(const std::vector<Frame>& frames,
                                          const Rect& init_rect) const {
    if (frames.empty())
        throw std::invalid_argument("track_sequence: empty sequence");
    TrackerState state = init(frames[0], init_rect);
    std::vector<Rect> preds;
    preds.reserve(frames.size() - 1);
    for (size_t t = 1; t < frames.size(); ++t) preds.push_back(step(state, frames[t]));
    return preds;
}

}  // namespace fmst
