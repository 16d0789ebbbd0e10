#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oacam/hashing.hpp"
#include "oacam/image.hpp"
#include "oacam/localisation.hpp"

namespace oacam {

enum class ProgramMode : std::uint8_t { Fixed = 0, PerImageRandom = 1 };

struct EvalConfig {
    std::uint32_t stride = 20;
    std::uint32_t tolerance = 30;
    std::vector<std::uint32_t> n_values;
    std::vector<CurveKind> curve_kinds;
    std::vector<ProgramMode> modes;
    std::uint32_t k = 64;
    std::uint64_t seed = 0;
    std::uint16_t r_min = 15;
    std::uint16_t r_max = 50;
    std::uint32_t jobs = 1;
};

struct EvalRow {
    CurveKind kind;
    ProgramMode mode;
    std::uint32_t n;
    std::uint32_t k;
    double accuracy;  // correct / queries, exactly
    std::uint32_t queries;
};

struct QueryRecord {
    std::uint32_t query_id;
    std::uint32_t predicted_id;
    bool correct;
};

struct EvalReport {
    std::string dataset;
    std::uint64_t seed = 0;
    std::vector<EvalRow> rows;
    std::vector<QueryRecord> per_query;  // last evaluated combination
};

// Reference/query split: train = {0, stride, 2*stride, ...}, test = rest.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
split_trajectory(std::uint32_t frame_count, std::uint32_t stride);

// A retrieval counts as correct when |predicted - true| <= tolerance frames.
bool is_correct(std::uint32_t predicted_id, std::uint32_t true_id,
                std::uint32_t tolerance);

// Runs the full protocol over in-memory frames: per (kind, mode, n), hash
// all frames, train a codebook on the training split only, index it, query
// every test frame.
EvalReport evaluate_frames(const std::vector<GrayImage>& frames,
                           const EvalConfig& config,
                           const std::string& dataset_name = "frames");

// Same, loading PNG/PGM frames from a directory in natural-sort order.
EvalReport evaluate(const std::string& dataset_dir, const EvalConfig& config);

// CSV with header kind,mode,n,k,accuracy,queries,seed.
std::string report_csv(const EvalReport& report);
std::string per_query_csv(const EvalReport& report);

// Numeric-aware filename ordering used for trajectory directories.
bool natural_less(const std::string& a, const std::string& b);
std::vector<std::string> list_frames_sorted(const std::string& dir);

// Shipped synthetic trajectory: a sliding square crop panning across a
// textured mosaic (random gray cells over a horizontal brightness drift).
std::vector<GrayImage> synth_trajectory(std::uint32_t frame_count,
                                        std::uint32_t frame_size,
                                        std::uint32_t step,
                                        std::uint64_t seed);

// Simplified Harris + gradient-histogram local descriptors, a stand-in for
// the conventional keypoint baseline. Each descriptor is 128 values:
// a 4x4 grid of 8-bin orientation histograms over a 16x16 patch,
// L2-normalized, clamped at 0.2, renormalized.
struct Keypoint {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    double response = 0.0;
};

struct DescriptorSet {
    std::vector<Keypoint> keypoints;
    std::vector<std::array<float, 128>> descriptors;
};

DescriptorSet baseline_descriptors(const GrayImage& image);

}  // namespace oacam
