#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oacam/errors.hpp"
#include "oacam/evaluation.hpp"

using namespace oacam;

TEST_CASE("split trajectory: 100 frames stride 20") {
    auto [train, test] = split_trajectory(100, 20);
    CHECK(train == std::vector<std::uint32_t>{0, 20, 40, 60, 80});
    CHECK(test.size() == 95);
}

TEST_CASE("split trajectory: stride 1 keeps everything in train") {
    auto [train, test] = split_trajectory(10, 1);
    CHECK(train.size() == 10);
    CHECK(test.empty());
}

TEST_CASE("split trajectory: 5 frames stride 2") {
    auto [train, test] = split_trajectory(5, 2);
    CHECK(train == std::vector<std::uint32_t>{0, 2, 4});
    CHECK(test == std::vector<std::uint32_t>{1, 3});
}

TEST_CASE("is_correct boundary behaviour") {
    CHECK(is_correct(20, 30, 30));
    CHECK_FALSE(is_correct(0, 31, 30));
    CHECK(is_correct(7, 7, 0));
    CHECK(is_correct(30, 0, 30));
}

TEST_CASE("natural sort orders numerically") {
    std::vector<std::string> names = {"frame10.pgm", "frame2.pgm", "frame1.pgm"};
    std::sort(names.begin(), names.end(), natural_less);
    CHECK(names == std::vector<std::string>{"frame1.pgm", "frame2.pgm",
                                            "frame10.pgm"});
    CHECK(natural_less("a002", "a0010"));
    CHECK_FALSE(natural_less("a10", "a9"));
}

TEST_CASE("synthetic trajectory shape and determinism") {
    auto frames = synth_trajectory(5, 64, 4, 7);
    CHECK(frames.size() == 5);
    for (const auto& f : frames) {
        CHECK(f.width == 64);
        CHECK(f.height == 64);
    }
    auto again = synth_trajectory(5, 64, 4, 7);
    CHECK(frames[3] == again[3]);
    // panning: frame i+1 shifted left by the step
    for (std::uint32_t y = 0; y < 64; ++y)
        for (std::uint32_t x = 0; x + 4 < 64; ++x)
            CHECK(frames[0].at(x + 4, y) == frames[1].at(x, y));
}

TEST_CASE("evaluate produces the requested cartesian product of rows") {
    auto frames = synth_trajectory(30, 96, 4, 3);
    EvalConfig cfg;
    cfg.stride = 10;
    cfg.tolerance = 15;
    cfg.n_values = {8, 32};
    cfg.curve_kinds = {CurveKind::Line, CurveKind::Circle};
    cfg.modes = {ProgramMode::Fixed};
    cfg.k = 4;
    cfg.seed = 5;
    cfg.r_min = 5;
    cfg.r_max = 20;
    EvalReport report = evaluate_frames(frames, cfg);
    CHECK(report.rows.size() == 4);
    std::set<std::tuple<int, int, unsigned>> combos;
    for (const EvalRow& r : report.rows) {
        combos.insert({static_cast<int>(r.kind), static_cast<int>(r.mode), r.n});
        CHECK(r.queries == 27);
        CHECK(r.accuracy >= 0.0);
        CHECK(r.accuracy <= 1.0);
    }
    CHECK(combos.size() == 4);
}

TEST_CASE("tolerance covering the whole trajectory gives accuracy 1") {
    auto frames = synth_trajectory(20, 96, 4, 11);
    EvalConfig cfg;
    cfg.stride = 5;
    cfg.tolerance = 20;  // >= frame count
    cfg.n_values = {32};
    cfg.curve_kinds = {CurveKind::Circle};
    cfg.modes = {ProgramMode::Fixed};
    cfg.k = 4;
    cfg.seed = 1;
    cfg.r_min = 5;
    cfg.r_max = 20;
    EvalReport report = evaluate_frames(frames, cfg);
    CHECK(report.rows[0].accuracy == 1.0);
}

TEST_CASE("results are identical across worker counts") {
    auto frames = synth_trajectory(24, 96, 4, 13);
    EvalConfig cfg;
    cfg.stride = 6;
    cfg.tolerance = 9;
    cfg.n_values = {16, 64};
    cfg.curve_kinds = {CurveKind::Circle};
    cfg.modes = {ProgramMode::Fixed, ProgramMode::PerImageRandom};
    cfg.k = 8;
    cfg.seed = 21;
    cfg.r_min = 5;
    cfg.r_max = 20;
    cfg.jobs = 1;
    std::string csv1 = report_csv(evaluate_frames(frames, cfg));
    cfg.jobs = 4;
    std::string csv4 = report_csv(evaluate_frames(frames, cfg));
    CHECK(csv1 == csv4);
}

TEST_CASE("report csv layout") {
    EvalReport report;
    report.seed = 7;
    report.rows.push_back({CurveKind::Circle, ProgramMode::Fixed, 64, 16, 0.5, 10});
    std::string csv = report_csv(report);
    CHECK(csv == "kind,mode,n,k,accuracy,queries,seed\n"
                 "circle,fixed,64,16,0.500000,10,7\n");
}

TEST_CASE("empty dataset rejected") {
    EvalConfig cfg;
    cfg.n_values = {4};
    cfg.curve_kinds = {CurveKind::Line};
    cfg.modes = {ProgramMode::Fixed};
    CHECK_THROWS_AS(evaluate_frames({}, cfg), ArgumentError);
}

TEST_CASE("baseline descriptors: flat image has no keypoints") {
    GrayImage img = synth_image(SynthKind::Constant, 64, 64, 100);
    DescriptorSet ds = baseline_descriptors(img);
    CHECK(ds.keypoints.empty());
}

TEST_CASE("baseline descriptors: checkerboard corners are detected") {
    GrayImage img = synth_image(SynthKind::Checker, 64, 64, 0, 8);
    DescriptorSet ds = baseline_descriptors(img);
    CHECK(!ds.keypoints.empty());
    // every keypoint lies within 2 px of an interior cell-corner lattice point
    for (const Keypoint& kp : ds.keypoints) {
        double dx = std::abs(std::remainder(static_cast<double>(kp.x), 8.0));
        double dy = std::abs(std::remainder(static_cast<double>(kp.y), 8.0));
        CHECK(dx <= 2.0);
        CHECK(dy <= 2.0);
    }
}

TEST_CASE("baseline descriptors have unit norm") {
    GrayImage img = synth_image(SynthKind::Checker, 96, 96, 0, 12);
    DescriptorSet ds = baseline_descriptors(img);
    REQUIRE(!ds.descriptors.empty());
    CHECK(ds.descriptors.size() == ds.keypoints.size());
    CHECK(ds.keypoints.size() <= 200);
    for (const auto& d : ds.descriptors) {
        double n2 = 0;
        for (float v : d) n2 += static_cast<double>(v) * v;
        CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-6);
    }
}

TEST_CASE("baseline descriptors reject tiny images") {
    GrayImage img = synth_image(SynthKind::Checker, 16, 16, 0, 4);
    CHECK_THROWS_AS(baseline_descriptors(img), ArgumentError);
}
