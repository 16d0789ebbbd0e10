#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oacam/curves.hpp"
#include "oacam/image.hpp"

namespace oacam {

// (min, max) intensity observed along one curve. min <= max always.
struct ExtremaPair {
    std::uint8_t min = 0;
    std::uint8_t max = 0;
    bool operator==(const ExtremaPair&) const = default;
    auto operator<=>(const ExtremaPair&) const = default;  // lexicographic
};

// The digitised record: an order-destroyed multiset of extrema pairs.
// Carries no pixel coordinates, no curve indices, no per-curve association.
struct Fingerprint {
    std::uint32_t n = 0;
    CurveKind curve_kind = CurveKind::Line;
    bool randomized_per_image = false;
    std::uint64_t program_digest = 0;
    std::vector<ExtremaPair> pairs;  // sorted (min asc, then max asc)
};

// Normalized density over (max, min) space. x axis = max intensity,
// y axis = min intensity; all mass lies at or below the y <= x diagonal.
struct DensityGrid {
    std::uint32_t resolution = 256;
    std::vector<double> values;  // resolution * resolution, row-major (y, x)

    double at(std::uint32_t y, std::uint32_t x) const {
        return values[static_cast<std::size_t>(y) * resolution + x];
    }
};

// Simulated max/min hold circuits: extrema of the image over one curve.
ExtremaPair trace_extrema(const GrayImage& image, const Curve& curve);

// Hashes an image through a program: one pair per curve, sorted before
// exposure. If per_image_seed is given, a throwaway program with identical
// parameters and that seed is generated and used instead.
Fingerprint fingerprint(const GrayImage& image, const CameraProgram& program,
                        std::optional<std::uint64_t> per_image_seed = std::nullopt);

// Raw (unsmoothed) 2-D histogram of pairs, normalized to sum 1.
DensityGrid histogram2d(const Fingerprint& fp, std::uint32_t bins);

// Gaussian KDE view. Default per-axis bandwidth by Silverman's rule
// h = 1.06 * sigma * n^(-1/5); a zero sample deviation falls back to one
// bin width. Evaluation is truncated at 4h.
DensityGrid kde_render(const Fingerprint& fp, std::uint32_t resolution = 256,
                       std::optional<double> bandwidth = std::nullopt);

// Fingerprint file serialization ("OAHF"), 20-byte header + 2n payload.
std::vector<std::uint8_t> save_fingerprint(const Fingerprint& fp);
Fingerprint load_fingerprint(const std::vector<std::uint8_t>& bytes);

void save_fingerprint_file(const Fingerprint& fp, const std::string& path);
Fingerprint load_fingerprint_file(const std::string& path);

// Grid exports: PGM scaled so the peak maps to 255, and row,col,value CSV.
void save_grid_pgm(const DensityGrid& grid, const std::string& path);
void save_grid_csv(const DensityGrid& grid, const std::string& path);

}  // namespace oacam
