#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "oacam/errors.hpp"
#include "oacam/hashing.hpp"
#include "oacam/prng.hpp"

using namespace oacam;

namespace {

GrayImage random_image(std::uint32_t w, std::uint32_t h, std::uint64_t seed) {
    SplitMix64 rng(seed);
    GrayImage img;
    img.width = w;
    img.height = h;
    img.data.resize(static_cast<std::size_t>(w) * h);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.bounded(256));
    return img;
}

}  // namespace

TEST_CASE("constant field traces to equal extrema") {
    GrayImage img = synth_image(SynthKind::Constant, 32, 32, 128);
    auto prog = gen_program(CurveKind::Line, 5, 32, 32, 1);
    for (const Curve& c : prog.curves) {
        ExtremaPair p = trace_extrema(img, c);
        CHECK(p.min == 128);
        CHECK(p.max == 128);
    }
}

TEST_CASE("full-width ramp line spans 0..255") {
    GrayImage img = synth_image(SynthKind::HRamp, 256, 1);
    Curve c;
    c.kind = CurveKind::Line;
    c.p[0] = 0;
    c.p[1] = 0;
    c.p[2] = 255;
    c.p[3] = 0;
    c.pixels = rasterize(c, 256, 1);
    ExtremaPair p = trace_extrema(img, c);
    CHECK(p.min == 0);
    CHECK(p.max == 255);
}

TEST_CASE("fingerprint of constant image is n identical pairs") {
    GrayImage img = synth_image(SynthKind::Constant, 64, 64, 77);
    auto prog = gen_program(CurveKind::Circle, 5, 64, 64, 2, 5, 20);
    Fingerprint fp = fingerprint(img, prog);
    CHECK(fp.pairs.size() == 5);
    for (const ExtremaPair& p : fp.pairs) {
        CHECK(p.min == 77);
        CHECK(p.max == 77);
    }
}

TEST_CASE("3x3 ramp with two frozen lines matches the pixel-walk oracle") {
    // Program seed 7 on 3x3 generates lines (2,1)->(0,0) and (0,1)->(2,2);
    // pixel walks frozen by hand: {(2,1),(1,0),(0,0)} and {(0,1),(1,2),(2,2)}.
    GrayImage img = synth_image(SynthKind::VRamp, 3, 3);  // rows 0,127,255
    auto prog = gen_program(CurveKind::Line, 2, 3, 3, 7);
    REQUIRE(prog.curves[0].p[0] == 2);
    REQUIRE(prog.curves[0].p[1] == 1);
    REQUIRE(prog.curves[1].p[2] == 2);
    REQUIRE(prog.curves[1].p[3] == 2);
    Fingerprint fp = fingerprint(img, prog);
    REQUIRE(fp.pairs.size() == 2);
    CHECK(fp.pairs[0] == ExtremaPair{0, 127});
    CHECK(fp.pairs[1] == ExtremaPair{127, 255});
}

TEST_CASE("dimension mismatch raises") {
    GrayImage img = synth_image(SynthKind::Constant, 16, 16, 1);
    auto prog = gen_program(CurveKind::Line, 2, 32, 32, 0);
    CHECK_THROWS_AS(fingerprint(img, prog), ArgumentError);
}

TEST_CASE("fingerprint pairs are sorted and budget is exactly 2n scalars") {
    GrayImage img = random_image(128, 96, 5);
    auto prog = gen_program(CurveKind::Circle, 300, 128, 96, 6, 5, 30);
    Fingerprint fp = fingerprint(img, prog);
    CHECK(fp.pairs.size() == 300);
    CHECK(std::is_sorted(fp.pairs.begin(), fp.pairs.end()));
    for (const ExtremaPair& p : fp.pairs) CHECK(p.min <= p.max);
}

TEST_CASE("permutation invariance: curve order never matters") {
    GrayImage img = random_image(64, 64, 11);
    auto prog = gen_program(CurveKind::Line, 40, 64, 64, 12);
    Fingerprint fp = fingerprint(img, prog);
    std::mt19937 shuffler(99);
    for (int trial = 0; trial < 20; ++trial) {
        CameraProgram shuffled = prog;
        std::shuffle(shuffled.curves.begin(), shuffled.curves.end(), shuffler);
        Fingerprint fp2 = fingerprint(img, shuffled);
        CHECK(fp2.pairs == fp.pairs);
    }
}

TEST_CASE("monotone remap equivariance") {
    GrayImage img = random_image(48, 48, 21);
    auto prog = gen_program(CurveKind::Circle, 64, 48, 48, 22, 3, 20);
    Fingerprint base = fingerprint(img, prog);

    // monotone intensity remap (extrema commute with any nondecreasing map)
    std::array<std::uint8_t, 256> f;
    for (int i = 0; i < 256; ++i)
        f[i] = static_cast<std::uint8_t>(std::min(255, i * 3 / 4 + 40));

    GrayImage remapped = img;
    for (auto& v : remapped.data) v = f[v];
    Fingerprint mapped = fingerprint(remapped, prog);

    std::vector<ExtremaPair> expect;
    for (const ExtremaPair& p : base.pairs) expect.push_back({f[p.min], f[p.max]});
    std::sort(expect.begin(), expect.end());
    CHECK(mapped.pairs == expect);
}

TEST_CASE("randomized per-image mode depends only on the per-image seed") {
    GrayImage img = random_image(80, 80, 31);
    auto prog = gen_program(CurveKind::Circle, 32, 80, 80, 32, 5, 25);
    Fingerprint a = fingerprint(img, prog, 1001);
    Fingerprint b = fingerprint(img, prog, 1001);
    Fingerprint c = fingerprint(img, prog, 1002);
    CHECK(a.pairs == b.pairs);
    CHECK(a.randomized_per_image);
    CHECK(a.pairs != c.pairs);
}

TEST_CASE("histogram2d puts single pair in the right cell") {
    Fingerprint fp;
    fp.n = 1;
    fp.pairs = {{10, 200}};
    DensityGrid grid = histogram2d(fp, 256);
    CHECK(grid.at(10, 200) == doctest::Approx(1.0));
    double total = 0;
    for (double v : grid.values) total += v;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("histogram2d of constant fingerprint sits on the diagonal") {
    GrayImage img = synth_image(SynthKind::Constant, 32, 32, 90);
    auto prog = gen_program(CurveKind::Line, 10, 32, 32, 3);
    DensityGrid grid = histogram2d(fingerprint(img, prog), 64);
    std::uint32_t cell = 90 * 64 / 256;
    CHECK(grid.at(cell, cell) == doctest::Approx(1.0));
}

TEST_CASE("histogram2d never has mass above the diagonal") {
    GrayImage img = random_image(64, 64, 41);
    auto prog = gen_program(CurveKind::Circle, 256, 64, 64, 42, 4, 20);
    DensityGrid grid = histogram2d(fingerprint(img, prog), 32);
    for (std::uint32_t row = 0; row < 32; ++row)
        for (std::uint32_t col = 0; col < row; ++col)
            CHECK(grid.at(row, col) == 0.0);
}

TEST_CASE("histogram2d rejects empty fingerprints") {
    Fingerprint fp;
    CHECK_THROWS_AS(histogram2d(fp, 16), ArgumentError);
}

TEST_CASE("kde of two identical pairs peaks at their cell") {
    Fingerprint fp;
    fp.n = 2;
    fp.pairs = {{60, 180}, {60, 180}};
    DensityGrid grid = kde_render(fp, 256, 5.0);
    double peak = *std::max_element(grid.values.begin(), grid.values.end());
    CHECK(grid.at(60, 180) == doctest::Approx(peak));
}

TEST_CASE("kde matches the closed-form gaussian mixture") {
    Fingerprint fp;
    fp.n = 2;
    fp.pairs = {{40, 120}, {60, 200}};
    const double h = 6.0;
    const std::uint32_t res = 256;
    DensityGrid grid = kde_render(fp, res, h);

    // independent closed-form evaluation with the same contract: per-axis
    // 4h truncation, zero above the diagonal, normalized to sum 1
    std::vector<double> expect(res * res, 0.0);
    double total = 0;
    for (std::uint32_t row = 0; row < res; ++row) {
        for (std::uint32_t col = 0; col < res; ++col) {
            double y = row + 0.5, x = col + 0.5;
            if (y > x) continue;
            double v = 0;
            for (const ExtremaPair& p : fp.pairs) {
                double dx = (x - p.max) / h, dy = (y - p.min) / h;
                if (std::abs(dx) > 4.0 || std::abs(dy) > 4.0) continue;
                v += std::exp(-0.5 * (dx * dx + dy * dy));
            }
            expect[row * res + col] = v;
            total += v;
        }
    }
    for (double& v : expect) v /= total;
    for (std::size_t i = 0; i < expect.size(); ++i)
        CHECK(std::abs(grid.values[i] - expect[i]) < 1e-9);
}

TEST_CASE("kde zero mass above diagonal and automatic bandwidth") {
    GrayImage img = random_image(96, 96, 51);
    auto prog = gen_program(CurveKind::Circle, 128, 96, 96, 52, 5, 30);
    DensityGrid grid = kde_render(fingerprint(img, prog), 128);
    double total = 0;
    for (std::uint32_t row = 0; row < 128; ++row) {
        for (std::uint32_t col = 0; col < 128; ++col) {
            if (col < row) CHECK(grid.at(row, col) == 0.0);
            total += grid.at(row, col);
        }
    }
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("kde requires n >= 2 for automatic bandwidth") {
    Fingerprint fp;
    fp.n = 1;
    fp.pairs = {{5, 9}};
    CHECK_THROWS_AS(kde_render(fp, 64), ArgumentError);
    CHECK_NOTHROW(kde_render(fp, 64, 2.0));
}

TEST_CASE("fingerprint file round trip and exact size") {
    GrayImage img = random_image(64, 64, 61);
    auto prog = gen_program(CurveKind::Line, 17, 64, 64, 62);
    Fingerprint fp = fingerprint(img, prog);
    auto bytes = save_fingerprint(fp);
    CHECK(bytes.size() == 20 + 2 * 17);
    Fingerprint back = load_fingerprint(bytes);
    CHECK(back.pairs == fp.pairs);
    CHECK(back.program_digest == fp.program_digest);
    CHECK(back.curve_kind == fp.curve_kind);
    CHECK(save_fingerprint(back) == bytes);
}

TEST_CASE("fingerprint load rejects min > max and unsorted pairs") {
    Fingerprint fp;
    fp.n = 2;
    fp.curve_kind = CurveKind::Line;
    fp.pairs = {{3, 8}, {5, 9}};
    auto bytes = save_fingerprint(fp);
    auto bad = bytes;
    bad[20] = 5;  // first pair becomes (5, ...) with max 8? keep min>max
    bad[21] = 3;  // pair (5,3)
    CHECK_THROWS_AS(load_fingerprint(bad), IntegrityError);

    bad = bytes;
    std::swap(bad[20], bad[22]);
    std::swap(bad[21], bad[23]);  // out of order
    CHECK_THROWS_AS(load_fingerprint(bad), IntegrityError);
}

TEST_CASE("fingerprint load rejects bad magic, version, size") {
    Fingerprint fp;
    fp.n = 1;
    fp.pairs = {{1, 2}};
    auto bytes = save_fingerprint(fp);
    auto bad = bytes;
    bad[0] = 'Z';
    CHECK_THROWS_AS(load_fingerprint(bad), FormatError);
    bad = bytes;
    bad[4] = 2;
    CHECK_THROWS_AS(load_fingerprint(bad), FormatError);
    bad = bytes;
    bad.push_back(0);  // appended bytes
    CHECK_THROWS_AS(load_fingerprint(bad), FormatError);
}
