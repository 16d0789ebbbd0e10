#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oacam/hashing.hpp"

namespace oacam {

// k-means visual words over extrema pairs as 2-D points.
struct Codebook {
    std::uint32_t k = 0;
    std::vector<std::pair<float, float>> centroids;  // (min, max) space
    std::uint64_t trained_on = 0;                    // pair count
};

struct IndexEntry {
    std::uint32_t image_id = 0;
    std::vector<double> weights;  // tf-idf, L2-normalized (unless all zero)
};

// Weights are kept in double precision in memory; the file format stores
// them as f32.
struct RetrievalIndex {
    Codebook codebook;
    std::vector<double> idf;         // length k
    std::vector<IndexEntry> entries; // image_ids strictly increasing
};

// Lloyd k-means with probabilistic farthest-point seeding from the
// deterministic splitmix64 stream. Stops when the largest centroid move
// drops below 1e-4 or after 100 iterations; an emptied cluster is re-seeded
// to the point farthest from its current centroid.
Codebook train_codebook(const std::vector<Fingerprint>& fingerprints,
                        std::uint32_t k, std::uint64_t seed);

// Raw word counts, nearest centroid per pair (ties to the lowest index).
std::vector<std::uint32_t> quantize(const Fingerprint& fp, const Codebook& codebook);

// Builds tf-idf entries with idf[w] = ln((1+D)/(1+d_w)) + 1.
RetrievalIndex build_index(
    const std::vector<std::pair<std::uint32_t, Fingerprint>>& fingerprints,
    const Codebook& codebook);

// Cosine-similarity ranking of the query against all entries, descending,
// ties broken by lower image id.
std::vector<std::pair<std::uint32_t, double>> query(const RetrievalIndex& index,
                                                    const Fingerprint& fp,
                                                    std::uint32_t top_m);

// Index file serialization ("OACB").
std::vector<std::uint8_t> save_index(const RetrievalIndex& index);
RetrievalIndex load_index(const std::vector<std::uint8_t>& bytes);

void save_index_file(const RetrievalIndex& index, const std::string& path);
RetrievalIndex load_index_file(const std::string& path);

}  // namespace oacam
