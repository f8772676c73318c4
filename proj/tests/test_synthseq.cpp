#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fmst/bench.hpp"
#include "fmst/synthseq.hpp"

using namespace fmst;
namespace fs = std::filesystem;

TEST_CASE("static scene renders identical rects") {
    SceneSpec spec;
    spec.frame_count = 10;
    spec.target.start = Rect{60, 60, 30, 30};
    const RenderedSequence seq = render(spec);
    REQUIRE(seq.truths.size() == 10);
    for (const Rect& r : seq.truths) {
        CHECK(r.x == 60);
        CHECK(r.w == 30);
    }
}

TEST_CASE("linear trajectory advances exactly per frame") {
    SceneSpec spec;
    spec.frame_count = 20;
    spec.target.start = Rect{40, 60, 20, 20};
    spec.target.trajectory = Trajectory::Linear;
    spec.target.vx = 2;
    const RenderedSequence seq = render(spec);
    for (int t = 0; t < 20; ++t) CHECK(seq.truths[t].x == doctest::Approx(40 + 2 * t));
}

TEST_CASE("scale ramp is geometric") {
    SceneSpec spec;
    spec.frame_count = 50;
    spec.width = 400;
    spec.height = 400;
    spec.target.start = Rect{200, 200, 30, 30};
    spec.target.trajectory = Trajectory::ScaleRamp;
    spec.target.scale_per_frame = 1.01;
    const RenderedSequence seq = render(spec);
    CHECK(seq.truths.back().w == doctest::Approx(30 * std::pow(1.01, 49)));
}

TEST_CASE("same seed gives bit-identical frames") {
    SceneSpec spec;
    spec.frame_count = 5;
    spec.background = Background::Noise;
    spec.seed = 99;
    spec.target.start = Rect{60, 60, 30, 30};
    const RenderedSequence a = render(spec);
    const RenderedSequence b = render(spec);
    for (size_t i = 0; i < a.frames.size(); ++i) CHECK(a.frames[i].pixels == b.frames[i].pixels);
}

TEST_CASE("ground truth always stays inside the image") {
    for (const auto& [name, spec] : acceptance_suite(7)) {
        const RenderedSequence seq = render(spec);
        for (const Rect& r : seq.truths) {
            CHECK(r.valid());
            CHECK(r.left() >= 0);
            CHECK(r.top() >= 0);
            CHECK(r.right() <= spec.width);
            CHECK(r.bottom() <= spec.height);
        }
    }
}

TEST_CASE("out-of-bounds trajectory is rejected at construction") {
    SceneSpec spec;
    spec.frame_count = 100;
    spec.target.start = Rect{60, 60, 30, 30};
    spec.target.trajectory = Trajectory::Linear;
    spec.target.vx = 5;  // runs off a 200 px image
    CHECK_THROWS_AS(render(spec), std::invalid_argument);
}

TEST_CASE("otb layout round-trips through the annotation loader") {
    SceneSpec spec;
    spec.frame_count = 6;
    spec.target.start = Rect{60, 60, 30, 30};
    spec.target.trajectory = Trajectory::Linear;
    spec.target.vx = 1.5;
    const RenderedSequence seq = render(spec);

    const fs::path dir = fs::temp_directory_path() / "fmst_synth_otb";
    fs::remove_all(dir);
    write_otb_layout(dir.string(), seq);

    const SequenceAnnotation ann = load_annotations(dir.string());
    REQUIRE(ann.truths.size() == 6);
    REQUIRE(ann.image_files.size() == 6);
    for (size_t i = 0; i < 6; ++i) {
        CHECK(ann.truths[i].x == doctest::Approx(seq.truths[i].x));
        CHECK(ann.truths[i].w == doctest::Approx(seq.truths[i].w));
    }
    const Frame f = load_frame(ann.image_files[0]);
    CHECK(f.width == spec.width);
    CHECK(f.pixels == seq.frames[0].pixels);  // png round-trip is lossless
}
