#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oacam/errors.hpp"
#include "oacam/localisation.hpp"
#include "oacam/prng.hpp"

using namespace oacam;

namespace {

Fingerprint make_fp(std::vector<ExtremaPair> pairs) {
    std::sort(pairs.begin(), pairs.end());
    Fingerprint fp;
    fp.n = static_cast<std::uint32_t>(pairs.size());
    fp.pairs = std::move(pairs);
    return fp;
}

}  // namespace

TEST_CASE("k=1 centroid is the mean of all pairs") {
    Fingerprint fp = make_fp({{0, 10}, {10, 20}, {20, 60}});
    Codebook cb = train_codebook({fp}, 1, 0);
    REQUIRE(cb.k == 1);
    CHECK(cb.centroids[0].first == doctest::Approx(10.0));
    CHECK(cb.centroids[0].second == doctest::Approx(30.0));
}

TEST_CASE("two tight clusters recover their means") {
    std::vector<ExtremaPair> pairs;
    for (int d = -1; d <= 1; ++d) {
        pairs.push_back({static_cast<std::uint8_t>(10 + d),
                         static_cast<std::uint8_t>(20 + d)});
        pairs.push_back({static_cast<std::uint8_t>(200 + d),
                         static_cast<std::uint8_t>(240 + d)});
    }
    Codebook cb = train_codebook({make_fp(pairs)}, 2, 1);
    // one centroid near (10,20), the other near (200,240)
    auto dist = [](std::pair<float, float> c, double x, double y) {
        return std::hypot(c.first - x, c.second - y);
    };
    double a = std::min(dist(cb.centroids[0], 10, 20), dist(cb.centroids[1], 10, 20));
    double b = std::min(dist(cb.centroids[0], 200, 240), dist(cb.centroids[1], 200, 240));
    CHECK(a < 2.0);
    CHECK(b < 2.0);
}

TEST_CASE("k equal to distinct point count gives zero quantization error") {
    Fingerprint fp = make_fp({{0, 50}, {100, 150}, {200, 250}});
    Codebook cb = train_codebook({fp}, 3, 5);
    for (const ExtremaPair& p : fp.pairs) {
        double best = 1e9;
        for (const auto& c : cb.centroids)
            best = std::min(best, static_cast<double>(std::hypot(
                                      c.first - p.min, c.second - p.max)));
        CHECK(best == doctest::Approx(0.0));
    }
}

TEST_CASE("degenerate input: fewer distinct points than words") {
    Fingerprint fp = make_fp({{5, 5}, {5, 5}, {5, 5}});
    CHECK_THROWS_AS(train_codebook({fp}, 2, 0), ArgumentError);
}

TEST_CASE("codebook training is deterministic") {
    std::vector<ExtremaPair> pairs;
    SplitMix64 rng(321);
    for (int i = 0; i < 200; ++i) {
        std::uint8_t a = static_cast<std::uint8_t>(rng.bounded(256));
        std::uint8_t b = static_cast<std::uint8_t>(rng.bounded(256));
        pairs.push_back({std::min(a, b), std::max(a, b)});
    }
    Codebook cb1 = train_codebook({make_fp(pairs)}, 16, 9);
    Codebook cb2 = train_codebook({make_fp(pairs)}, 16, 9);
    CHECK(cb1.centroids == cb2.centroids);
}

TEST_CASE("quantize sums to n and assigns to nearest centroid") {
    Codebook cb;
    cb.k = 2;
    cb.centroids = {{0.f, 0.f}, {255.f, 255.f}};
    Fingerprint fp = make_fp({{10, 10}, {250, 250}, {20, 30}});
    auto histo = quantize(fp, cb);
    CHECK(histo[0] + histo[1] == 3);
    CHECK(histo[0] == 2);  // (10,10) and (20,30) nearer the origin
}

TEST_CASE("all-equal pairs land in one bin") {
    Codebook cb;
    cb.k = 3;
    cb.centroids = {{0.f, 0.f}, {120.f, 140.f}, {255.f, 255.f}};
    Fingerprint fp = make_fp({{120, 140}, {120, 140}, {120, 140}});
    auto histo = quantize(fp, cb);
    CHECK(histo[1] == 3);
}

TEST_CASE("idf formula") {
    Codebook cb;
    cb.k = 2;
    cb.centroids = {{0.f, 0.f}, {255.f, 255.f}};
    // word 0 present in all three images, word 1 in one
    std::vector<std::pair<std::uint32_t, Fingerprint>> fps = {
        {0, make_fp({{5, 5}})},
        {1, make_fp({{10, 10}})},
        {2, make_fp({{8, 8}, {250, 250}})},
    };
    RetrievalIndex index = build_index(fps, cb);
    CHECK(index.idf[0] == doctest::Approx(1.0));                     // ln(4/4)+1
    CHECK(index.idf[1] == doctest::Approx(std::log(2.0) + 1.0));     // ln(4/2)+1
}

TEST_CASE("duplicate ids rejected") {
    Codebook cb;
    cb.k = 1;
    cb.centroids = {{0.f, 0.f}};
    std::vector<std::pair<std::uint32_t, Fingerprint>> fps = {
        {3, make_fp({{5, 5}})}, {3, make_fp({{6, 6}})}};
    CHECK_THROWS_AS(build_index(fps, cb), ArgumentError);
}

TEST_CASE("self retrieval at similarity 1") {
    SplitMix64 rng(77);
    std::vector<std::pair<std::uint32_t, Fingerprint>> fps;
    std::vector<Fingerprint> plain;
    for (std::uint32_t i = 0; i < 8; ++i) {
        std::vector<ExtremaPair> pairs;
        for (int j = 0; j < 50; ++j) {
            std::uint8_t a = static_cast<std::uint8_t>(rng.bounded(256));
            std::uint8_t b = static_cast<std::uint8_t>(rng.bounded(256));
            pairs.push_back({std::min(a, b), std::max(a, b)});
        }
        Fingerprint fp = make_fp(pairs);
        fps.push_back({i, fp});
        plain.push_back(fp);
    }
    Codebook cb = train_codebook(plain, 8, 3);
    RetrievalIndex index = build_index(fps, cb);
    for (std::uint32_t i = 0; i < 8; ++i) {
        auto ranked = query(index, plain[i], 1);
        CHECK(ranked[0].first == i);
        CHECK(std::abs(ranked[0].second - 1.0) < 1e-9);
    }
}

TEST_CASE("orthogonal histograms have similarity zero") {
    Codebook cb;
    cb.k = 2;
    cb.centroids = {{0.f, 0.f}, {255.f, 255.f}};
    std::vector<std::pair<std::uint32_t, Fingerprint>> fps = {
        {0, make_fp({{5, 5}})}};
    RetrievalIndex index = build_index(fps, cb);
    auto ranked = query(index, make_fp({{250, 250}}), 1);
    CHECK(ranked[0].second == doctest::Approx(0.0));
}

TEST_CASE("scale invariance of the ranking") {
    // duplicating every pair scales the raw histogram; cosine is unchanged
    SplitMix64 rng(15);
    std::vector<std::pair<std::uint32_t, Fingerprint>> fps;
    std::vector<Fingerprint> plain;
    for (std::uint32_t i = 0; i < 5; ++i) {
        std::vector<ExtremaPair> pairs;
        for (int j = 0; j < 30; ++j) {
            std::uint8_t a = static_cast<std::uint8_t>(rng.bounded(256));
            std::uint8_t b = static_cast<std::uint8_t>(rng.bounded(256));
            pairs.push_back({std::min(a, b), std::max(a, b)});
        }
        Fingerprint fp = make_fp(pairs);
        fps.push_back({i, fp});
        plain.push_back(fp);
    }
    Codebook cb = train_codebook(plain, 6, 8);
    RetrievalIndex index = build_index(fps, cb);

    Fingerprint q1 = plain[2];
    std::vector<ExtremaPair> doubled = q1.pairs;
    doubled.insert(doubled.end(), q1.pairs.begin(), q1.pairs.end());
    Fingerprint q2 = make_fp(doubled);

    auto r1 = query(index, q1, 5);
    auto r2 = query(index, q2, 5);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].first == r2[i].first);
        CHECK(r1[i].second == doctest::Approx(r2[i].second));
    }
}

TEST_CASE("empty index rejected") {
    RetrievalIndex index;
    CHECK_THROWS_AS(query(index, make_fp({{1, 2}}), 1), ArgumentError);
}

TEST_CASE("index file round trip") {
    SplitMix64 rng(99);
    std::vector<std::pair<std::uint32_t, Fingerprint>> fps;
    std::vector<Fingerprint> plain;
    for (std::uint32_t i = 0; i < 4; ++i) {
        std::vector<ExtremaPair> pairs;
        for (int j = 0; j < 20; ++j) {
            std::uint8_t a = static_cast<std::uint8_t>(rng.bounded(256));
            std::uint8_t b = static_cast<std::uint8_t>(rng.bounded(256));
            pairs.push_back({std::min(a, b), std::max(a, b)});
        }
        Fingerprint fp = make_fp(pairs);
        fps.push_back({i * 10, fp});
        plain.push_back(fp);
    }
    Codebook cb = train_codebook(plain, 4, 2);
    RetrievalIndex index = build_index(fps, cb);
    auto bytes = save_index(index);
    RetrievalIndex back = load_index(bytes);
    CHECK(back.codebook.centroids == index.codebook.centroids);
    REQUIRE(back.entries.size() == index.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
        CHECK(back.entries[i].image_id == index.entries[i].image_id);
        for (std::size_t j = 0; j < back.idf.size(); ++j) {
            // weights travel as f32
            CHECK(back.idf[j] == doctest::Approx(index.idf[j]));
            CHECK(back.entries[i].weights[j] ==
                  doctest::Approx(index.entries[i].weights[j]));
        }
    }
    CHECK(save_index(back) == bytes);
}
