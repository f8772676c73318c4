#include "fmst/weightnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fmst {

size_t DenseNet::param_count() const {
    size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

DenseNet make_net(const std::vector<int>& dims, uint64_t seed) {
    if (dims.size() < 2)
        throw std::invalid_argument("make_net: need input and output dims");
    std::mt19937_64 rng(seed);
    DenseNet net;
    for (size_t i = 0; i + 1 < dims.size(); ++i) {
        DenseLayer l;
        l.in_dim = dims[i];
        l.out_dim = dims[i + 1];
        const double bound = std::sqrt(6.0 / (l.in_dim + l.out_dim));
        std::uniform_real_distribution<double> dist(-bound, bound);
        l.weights.resize(static_cast<size_t>(l.out_dim) * l.in_dim);
        for (auto& w : l.weights) w = dist(rng);
        l.biases.assign(l.out_dim, 0.0);
        net.layers.push_back(std::move(l));
    }
    return net;
}

DenseNet make_zero_net(const std::vector<int>& dims) {
    DenseNet net = make_net(dims, 0);
    for (auto& l : net.layers) {
        std::fill(l.weights.begin(), l.weights.end(), 0.0);
        std::fill(l.biases.begin(), l.biases.end(), 0.0);
    }
    return net;
}

namespace {

struct ForwardTrace {
    std::vector<std::vector<double>> pre;   // z per layer
    std::vector<std::vector<double>> post;  // activations, post[0] is the input
};

ForwardTrace run_forward(const DenseNet& net, const ScoreVector& s) {
    if (static_cast<int>(s.size()) != net.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    ForwardTrace t;
    t.post.push_back(s);
    for (size_t li = 0; li < net.layers.size(); ++li) {
        const auto& l = net.layers[li];
        const auto& in = t.post.back();
        std::vector<double> z(l.out_dim);
        for (int o = 0; o < l.out_dim; ++o) {
            double acc = l.biases[o];
            const double* wr = l.weights.data() + static_cast<size_t>(o) * l.in_dim;
            for (int i = 0; i < l.in_dim; ++i) acc += wr[i] * in[i];
            z[o] = acc;
        }
        std::vector<double> a(l.out_dim);
        const bool last = li + 1 == net.layers.size();
        for (int o = 0; o < l.out_dim; ++o)
            a[o] = last ? std::clamp(z[o], 0.0, 6.0) : std::max(z[o], 0.0);
        t.pre.push_back(std::move(z));
        t.post.push_back(std::move(a));
    }
    return t;
}

}  // namespace

WeightVector forward(const DenseNet& net, const ScoreVector& s) {
    WeightVector w;
    w.weights = run_forward(net, s).post.back();
    return w;
}

double prediction_loss(const PredictionMap& m_hat, const TargetMap& m_next) {
    if (m_hat.rows != m_next.rows || m_hat.cols != m_next.cols)
        throw std::invalid_argument("prediction_loss: shape mismatch");
    double acc = 0;
    for (size_t i = 0; i < m_hat.values.size(); ++i) acc += m_hat.values[i] * m_next.values[i];
    return -acc;
}

NetGradients grad(const DenseNet& net, const TrainPair& pair, Polarity polarity) {
    const TargetMap mk = polarity == Polarity::Positive ? pair.map_k : negate(pair.map_k);
    const TargetMap mk1 = polarity == Polarity::Positive ? pair.map_k1 : negate(pair.map_k1);

    const ScoreVector s = score_channels(pair.feat_k, mk);
    const ForwardTrace trace = run_forward(net, s);
    const std::vector<double>& w = trace.post.back();

    // dLoss/dw_c = -sum(F^{k+1}_c o M^{k+1}); loss itself is -w . t
    const ScoreVector t = score_channels(pair.feat_k1, mk1);

    NetGradients g;
    g.loss = -std::inner_product(w.begin(), w.end(), t.begin(), 0.0);
    g.layers.resize(net.layers.size());

    std::vector<double> delta(w.size());
    for (size_t c = 0; c < w.size(); ++c) {
        const double z = trace.pre.back()[c];
        delta[c] = (z > 0 && z < 6) ? -t[c] : 0.0;  // ReLU6 subgradient 0 at kinks
    }

    for (int li = static_cast<int>(net.layers.size()) - 1; li >= 0; --li) {
        const auto& l = net.layers[li];
        auto& gl = g.layers[li];
        gl.in_dim = l.in_dim;
        gl.out_dim = l.out_dim;
        gl.weights.resize(l.weights.size());
        gl.biases.resize(l.biases.size());
        const auto& in = trace.post[li];
        for (int o = 0; o < l.out_dim; ++o) {
            gl.biases[o] = delta[o];
            double* gw = gl.weights.data() + static_cast<size_t>(o) * l.in_dim;
            for (int i = 0; i < l.in_dim; ++i) gw[i] = delta[o] * in[i];
        }
        if (li > 0) {
            std::vector<double> next(l.in_dim, 0.0);
            for (int o = 0; o < l.out_dim; ++o) {
                const double* wr = l.weights.data() + static_cast<size_t>(o) * l.in_dim;
                for (int i = 0; i < l.in_dim; ++i) next[i] += wr[i] * delta[o];
            }
            for (int i = 0; i < l.in_dim; ++i)
                if (trace.pre[li - 1][i] <= 0) next[i] = 0.0;  // hidden ReLU
            delta = std::move(next);
        }
    }
    return g;
}

namespace {

struct AdamState {
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
    long long step = 0;

    explicit AdamState(const DenseNet& net) {
        for (const auto& l : net.layers) {
            m_w.emplace_back(l.weights.size(), 0.0);
            v_w.emplace_back(l.weights.size(), 0.0);
            m_b.emplace_back(l.biases.size(), 0.0);
            v_b.emplace_back(l.biases.size(), 0.0);
        }
    }

    void update(DenseNet& net, const NetGradients& g, const TrainConfig& cfg) {
        ++step;
        const double bc1 = 1.0 - std::pow(cfg.beta1, step);
        const double bc2 = 1.0 - std::pow(cfg.beta2, step);
        for (size_t li = 0; li < net.layers.size(); ++li) {
            auto apply = [&](std::vector<double>& p, const std::vector<double>& gr,
                             std::vector<double>& m, std::vector<double>& v) {
                for (size_t i = 0; i < p.size(); ++i) {
                    m[i] = cfg.beta1 * m[i] + (1 - cfg.beta1) * gr[i];
                    v[i] = cfg.beta2 * v[i] + (1 - cfg.beta2) * gr[i] * gr[i];
                    p[i] -= cfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.epsilon);
                }
            };
            apply(net.layers[li].weights, g.layers[li].weights, m_w[li], v_w[li]);
            apply(net.layers[li].biases, g.layers[li].biases, m_b[li], v_b[li]);
        }
    }
};

double mean_loss(const DenseNet& net, const std::vector<TrainPair>& pairs,
                 const std::vector<size_t>& idx, Polarity polarity) {
    if (idx.empty()) return 0.0;
    double acc = 0;
    for (size_t i : idx) acc += grad(net, pairs[i], polarity).loss;
    return acc / idx.size();
}

}  // namespace

TrainResult train(const std::vector<TrainPair>& pairs, const std::vector<int>& dims,
                  const TrainConfig& cfg, Polarity polarity) {
    if (pairs.size() < 2)
        throw std::invalid_argument("train: need at least two pairs");
    if (!(cfg.validation_fraction > 0 && cfg.validation_fraction < 1))
        throw std::invalid_argument("train: validation_fraction outside (0,1)");
    if (cfg.patience >= cfg.max_epochs)
        throw std::invalid_argument("train: patience must be below max_epochs");

    std::mt19937_64 rng(cfg.seed);
    std::vector<size_t> idx(pairs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);

    const size_t n_val = std::max<size_t>(1, static_cast<size_t>(
        std::llround(cfg.validation_fraction * pairs.size())));
    std::vector<size_t> val_idx(idx.begin(), idx.begin() + n_val);
    std::vector<size_t> train_idx(idx.begin() + n_val, idx.end());
    if (train_idx.empty())
        throw std::invalid_argument("train: validation split leaves no training pairs");

    DenseNet net = make_net(dims, cfg.seed);
    AdamState adam(net);

    TrainResult result;
    result.net = net;
    result.best_epoch = 0;
    double best_val = mean_loss(net, pairs, val_idx, polarity);
    result.log.push_back({0, mean_loss(net, pairs, train_idx, polarity), best_val});

    int stale = 0;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(train_idx.begin(), train_idx.end(), rng);
        double epoch_loss = 0;
        for (size_t i : train_idx) {
            NetGradients g = grad(net, pairs[i], polarity);
            epoch_loss += g.loss;
            adam.update(net, g, cfg);
        }
        const double val = mean_loss(net, pairs, val_idx, polarity);
        result.log.push_back({epoch, epoch_loss / train_idx.size(), val});
        if (val < best_val) {
            best_val = val;
            result.net = net;
            result.best_epoch = epoch;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            break;
        }
    }
    return result;
}

std::vector<TrainPair> build_dataset(const std::vector<SequenceData>& sequences,
                                     const FeatureProvider& backbone) {
    std::vector<TrainPair> pairs;
    for (const auto& seq : sequences) {
        if (seq.frames.size() < 2 || seq.frames.size() != seq.truths.size()) {
            std::cerr << "build_dataset: skipping sequence with "
                      << seq.frames.size() << " frames\n";
            continue;
        }
        for (size_t k = 0; k + 1 < seq.frames.size(); ++k) {
            const ImageSize size{seq.frames[k].width, seq.frames[k].height};
            const RoiWindow roi = make_roi(seq.truths[k], size);
            TrainPair p;
            p.feat_k = backbone.extract(seq.frames[k], roi);
            p.feat_k1 = backbone.extract(seq.frames[k + 1], roi);
            p.map_k = make_type_s(roi, seq.truths[k], p.feat_k.rows, p.feat_k.cols);
            p.map_k1 = make_type_s(roi, seq.truths[k + 1], p.feat_k1.rows, p.feat_k1.cols);
            pairs.push_back(std::move(p));
        }
    }
    return pairs;
}

namespace {

constexpr char kNetMagic[4] = {'F', 'W', 'N', '1'};

template <typename T>
void put_le(std::ofstream& out, T v) {
    uint8_t buf[sizeof(T)];
    for (size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<uint8_t>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::ifstream& in, const std::string& path) {
    uint8_t buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
        throw std::runtime_error("FWN1 " + path + ": truncated header");
    T v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
}

void put_f32(std::ofstream& out, const std::vector<double>& vals) {
    std::vector<float> f(vals.begin(), vals.end());
    out.write(reinterpret_cast<const char*>(f.data()),
              static_cast<std::streamsize>(f.size() * 4));
}

std::vector<double> get_f32(std::ifstream& in, size_t n, const std::string& path) {
    std::vector<float> f(n);
    if (!in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(n * 4)))
        throw std::runtime_error("FWN1 " + path + ": truncated payload");
    return {f.begin(), f.end()};
}

}  // namespace

void save_net(const std::string& path, const DenseNet& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("save_net: cannot open " + path);
    out.write(kNetMagic, 4);
    put_le<uint16_t>(out, 1);
    put_le<uint16_t>(out, static_cast<uint16_t>(net.layers.size()));
    for (const auto& l : net.layers) {
        put_le<uint32_t>(out, static_cast<uint32_t>(l.out_dim));  // rows
        put_le<uint32_t>(out, static_cast<uint32_t>(l.in_dim));   // cols
        put_f32(out, l.weights);
        put_f32(out, l.biases);
    }
    if (!out)
        throw std::runtime_error("save_net: write failed for " + path);
}

DenseNet load_net(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_net: cannot open " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kNetMagic, 4) != 0)
        throw std::runtime_error("FWN1 " + path + ": bad magic");
    if (get_le<uint16_t>(in, path) != 1)
        throw std::runtime_error("FWN1 " + path + ": unsupported version");
    const auto n_layers = get_le<uint16_t>(in, path);
    DenseNet net;
    for (int li = 0; li < n_layers; ++li) {
        DenseLayer l;
        l.out_dim = static_cast<int>(get_le<uint32_t>(in, path));
        l.in_dim = static_cast<int>(get_le<uint32_t>(in, path));
        l.weights = get_f32(in, static_cast<size_t>(l.out_dim) * l.in_dim, path);
        l.biases = get_f32(in, static_cast<size_t>(l.out_dim), path);
        net.layers.push_back(std::move(l));
    }
    return net;
}

}  // namespace fmst
