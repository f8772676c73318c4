// Compares the OpenMP kernels against their serial reference counterparts.

#include <random>

#include <benchmark/benchmark.h>

#include "fmst/candidates.hpp"
#include "fmst/reference.hpp"

using namespace fmst;

namespace {

FeatureMapSet random_features(int rows, int cols, int channels, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    FeatureMapSet f;
    f.rows = rows;
    f.cols = cols;
    f.channels = channels;
    f.data.resize(f.plane_size() * channels);
    for (auto& v : f.data) v = dist(rng);
    return f;
}

TargetMap dummy_map(int rows, int cols) {
    const RoiWindow roi = make_roi(Rect{50, 50, 20, 20}, {200, 200});
    return make_type_s(roi, Rect{50, 50, 20, 20}, rows, cols);
}

void bm_score_channels_omp(benchmark::State& state) {
    const auto f = random_features(14, 14, 672, 1);
    const auto m = dummy_map(14, 14);
    for (auto _ : state) benchmark::DoNotOptimize(score_channels(f, m));
}

void bm_score_channels_serial(benchmark::State& state) {
    const auto f = random_features(14, 14, 672, 1);
    const auto m = dummy_map(14, 14);
    for (auto _ : state) benchmark::DoNotOptimize(ref::score_channels(f, m));
}

void bm_prediction_map_omp(benchmark::State& state) {
    const auto f = random_features(14, 14, 672, 2);
    WeightVector w;
    w.weights.assign(672, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(prediction_map(f, w));
}

void bm_prediction_map_serial(benchmark::State& state) {
    const auto f = random_features(14, 14, 672, 2);
    WeightVector w;
    w.weights.assign(672, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(ref::prediction_map(f, w));
}

void bm_candidate_eval(benchmark::State& state) {
    const auto f = random_features(14, 14, 672, 3);
    WeightVector w;
    w.weights.assign(672, 0.5);
    const auto map = normalize01(prediction_map(f, w));
    const Rect prev{50, 50, 20, 20};
    const RoiWindow roi = make_roi(prev, {200, 200});
    SamplerParams p;
    const auto cands = sample_candidates(prev, p);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_all(map, cands, prev, roi, 0.2));
}

BENCHMARK(bm_score_channels_omp);
BENCHMARK(bm_score_channels_serial);
BENCHMARK(bm_prediction_map_omp);
BENCHMARK(bm_prediction_map_serial);
BENCHMARK(bm_candidate_eval);

}  // namespace

BENCHMARK_MAIN();
