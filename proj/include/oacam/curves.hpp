#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oacam {

enum class CurveKind : std::uint8_t { Line = 1, Circle = 2 };

struct PixelPos {
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    bool operator==(const PixelPos&) const = default;
};

// One rasterized mask curve. Line endpoints lie on the frame boundary;
// circles are fully contained in the frame (no clipping, ever).
struct Curve {
    CurveKind kind = CurveKind::Line;
    // line: x0,y0,x1,y1  circle: cx,cy,r (fourth slot unused)
    std::uint16_t p[4] = {0, 0, 0, 0};
    std::vector<PixelPos> pixels;  // rasterization, ordered

    bool operator==(const Curve& o) const {
        return kind == o.kind && p[0] == o.p[0] && p[1] == o.p[1] &&
               p[2] == o.p[2] && p[3] == o.p[3] && pixels == o.pixels;
    }
};

// The simulated camera ROM: a fixed set of n curves plus the parameters
// that regenerate it. Immutable after generation.
struct CameraProgram {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    CurveKind kind = CurveKind::Line;
    std::uint32_t n = 0;
    std::uint64_t seed = 0;
    std::uint16_t r_min = 0;  // circles only, zero for lines
    std::uint16_t r_max = 0;
    std::vector<Curve> curves;
    std::uint64_t digest = 0;  // FNV-1a 64 of the serialized bytes, set at creation
};

// Generates a program from the deterministic splitmix64 stream. Lines join
// two distinct uniform points on the boundary perimeter; circles draw a
// uniform integer radius in [r_min, r_max] and then a uniform center in the
// inset rectangle guaranteeing full containment.
CameraProgram gen_program(CurveKind kind, std::uint32_t n, std::uint32_t width,
                          std::uint32_t height, std::uint64_t seed,
                          std::uint16_t r_min = 0, std::uint16_t r_max = 0);

// Boundary perimeter parameterization used for line endpoints: index
// t in [0, 2(w+h)-4) walks the top row left to right, the right column
// downward, the bottom row right to left, then the left column upward.
PixelPos perimeter_point(std::uint64_t t, std::uint32_t width, std::uint32_t height);

// Integer midpoint (Bresenham) line, endpoints inclusive, ordered from
// (x0,y0) to (x1,y1).
std::vector<PixelPos> rasterize_line(int x0, int y0, int x1, int y1);

// Integer midpoint circle, 8-way points deduplicated and ordered clockwise
// from east (screen coordinates, y down).
std::vector<PixelPos> rasterize_circle(int cx, int cy, int r);

// Rasterizes a curve's parameters, validating against the frame.
std::vector<PixelPos> rasterize(const Curve& curve, std::uint32_t width,
                                std::uint32_t height);

// Program file serialization ("OAPG"). load_program re-derives the curves
// from the stored seed and parameters and fails with IntegrityError on any
// mismatch: a stored program cannot be changed.
std::vector<std::uint8_t> save_program(const CameraProgram& program);
CameraProgram load_program(const std::vector<std::uint8_t>& bytes);

void save_program_file(const CameraProgram& program, const std::string& path);
CameraProgram load_program_file(const std::string& path);

// FNV-1a 64 digest of the serialized program bytes.
std::uint64_t program_digest(const CameraProgram& program);

}  // namespace oacam
