#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oacam {

// 8-bit single-channel raster, row-major. The only place pixel data lives.
struct GrayImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> data;  // width * height values

    std::uint8_t at(std::uint32_t x, std::uint32_t y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(std::uint32_t x, std::uint32_t y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    bool operator==(const GrayImage&) const = default;
};

// Loads a PNG or PGM file as grayscale. Color pixels are converted with
// BT.601 luma weights 0.299/0.587/0.114, rounded half-up; grayscale pixels
// pass through unchanged.
GrayImage load_grayscale(const std::string& path);

// Binary PGM (P5, maxval 255), the canonical bit-exact interchange format.
GrayImage load_pgm(const std::string& path);
void save_pgm(const GrayImage& img, const std::string& path);

enum class SynthKind { Constant, HRamp, VRamp, Checker };

// Deterministic fixtures: constant field, horizontal/vertical ramps, and an
// alternating 0/255 checkerboard with square cells of side `cell`.
GrayImage synth_image(SynthKind kind, std::uint32_t width, std::uint32_t height,
                      std::uint8_t constant = 0, std::uint32_t cell = 1);

// 90-degree counterclockwise rotation (used by analysis and tests).
GrayImage rotate90(const GrayImage& img);

}  // namespace oacam
