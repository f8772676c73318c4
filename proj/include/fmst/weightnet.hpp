#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmst/features.hpp"
#include "fmst/scoring.hpp"

namespace fmst {

// Fully connected score-to-weight generator.  Hidden layers use ReLU, the
// output layer ReLU6, so emitted weights live in [0,6].
struct DenseLayer {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<double> weights;  // out_dim x in_dim, row-major
    std::vector<double> biases;   // out_dim
};

struct DenseNet {
    std::vector<DenseLayer> layers;

    int input_dim() const { return layers.front().in_dim; }
    int output_dim() const { return layers.back().out_dim; }
    size_t param_count() const;
};

DenseNet make_net(const std::vector<int>& dims, uint64_t seed);
DenseNet make_zero_net(const std::vector<int>& dims);

WeightVector forward(const DenseNet& net, const ScoreVector& s);

// -sum(Mhat o M_next)
double prediction_loss(const PredictionMap& m_hat, const TargetMap& m_next);

struct TrainPair {
    FeatureMapSet feat_k;
    TargetMap map_k;    // positive polarity, ground truth at time k
    FeatureMapSet feat_k1;
    TargetMap map_k1;   // ground truth at time k+1
};

struct NetGradients {
    std::vector<DenseLayer> layers;  // same shapes, weights/biases hold gradients
    double loss = 0;
};

NetGradients grad(const DenseNet& net, const TrainPair& pair, Polarity polarity);

struct TrainConfig {
    int max_epochs = 50;
    int patience = 20;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double validation_fraction = 0.1;
    uint64_t seed = 0;
};

struct TrainLogEntry {
    int epoch = 0;
    double train_loss = 0;
    double val_loss = 0;
};

struct TrainResult {
    DenseNet net;          // best-validation snapshot
    int best_epoch = 0;
    std::vector<TrainLogEntry> log;
};

// Per-sample Adam (batch size 1), seeded shuffle, early stopping on mean
// validation loss with snapshot restore.
TrainResult train(const std::vector<TrainPair>& pairs, const std::vector<int>& dims,
                  const TrainConfig& cfg, Polarity polarity);

struct SequenceData {
    std::vector<Frame> frames;
    std::vector<Rect> truths;
};

// Consecutive-frame pairs; the ROI for both frames is centered on the
// ground truth at time k.  Sequences shorter than two frames are skipped.
std::vector<TrainPair> build_dataset(const std::vector<SequenceData>& sequences,
                                     const FeatureProvider& backbone);

// FWN1 checkpoint: "FWN1" | version u16 LE | layer count u16 LE |
// per layer: rows u32, cols u32, weights f32 LE row-major, biases f32 LE
void save_net(const std::string& path, const DenseNet& net);
DenseNet load_net(const std::string& path);

}  // namespace fmst
