#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oacam/curves.hpp"
#include "oacam/hashing.hpp"
#include "oacam/image.hpp"

namespace oacam {

// Exhaustive hash-collision statistics over a tiny image space.
struct CollisionCensus {
    std::uint64_t image_space_size = 0;
    std::uint64_t distinct_hash_count = 0;
    std::uint64_t max_preimage_size = 0;
    // preimage size -> number of hashes with that many preimages
    std::map<std::uint64_t, std::uint64_t> preimage_histogram;
};

struct CoverageReport {
    GrayImage extrema_location_mask;  // 255 where a pixel fed any min/max
    std::array<std::uint64_t, 256> sampled_intensity_histogram{};
    std::array<std::uint64_t, 256> full_image_histogram{};
    double divergence = 0.0;  // total-variation distance in [0, 1]
};

struct LeakAudit {
    std::uint32_t n = 0;
    std::uint64_t payload_bytes = 0;   // exactly 2n
    std::uint64_t header_bytes = 0;
    std::uint32_t positional_fields = 0;  // zero by format definition
    double payload_to_pixel_ratio = 0.0;  // for the stated image size
};

// Enumerates every image of the given size with `levels` intensity levels
// (mapped evenly onto [0,255]), fingerprints each through the program, and
// counts distinct hashes and preimage sizes. Refuses spaces above 2^24.
CollisionCensus collision_census(std::uint32_t width, std::uint32_t height,
                                 std::uint32_t levels,
                                 const CameraProgram& program);

// Marks the first-encountered argmin/argmax pixel of every curve, tallies
// the 2n sampled extrema intensities, and compares that distribution to the
// full image histogram by total-variation distance.
CoverageReport coverage_map(const GrayImage& image, const CameraProgram& program);

// Structural audit of a serialized fingerprint: header + sorted (min,max)
// bytes and nothing else. Reports the payload-to-pixel ratio for the given
// source image dimensions.
LeakAudit leak_audit(const std::vector<std::uint8_t>& fingerprint_bytes,
                     std::uint32_t image_width, std::uint32_t image_height);

std::string census_report_text(const CollisionCensus& census);
std::string audit_report_text(const LeakAudit& audit);

}  // namespace oacam
