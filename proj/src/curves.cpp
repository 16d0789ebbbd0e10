#include "oacam/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bytes.hpp"
#include "oacam/errors.hpp"
#include "oacam/prng.hpp"

namespace oacam {

PixelPos perimeter_point(std::uint64_t t, std::uint32_t w, std::uint32_t h) {
    // top row: [0, w)
    if (t < w) return {static_cast<std::uint16_t>(t), 0};
    t -= w;
    // right column below the corner: [0, h-1)
    if (t < h - 1)
        return {static_cast<std::uint16_t>(w - 1),
                static_cast<std::uint16_t>(t + 1)};
    t -= h - 1;
    // bottom row right to left, excluding the right corner: [0, w-1)
    if (t < w - 1)
        return {static_cast<std::uint16_t>(w - 2 - t),
                static_cast<std::uint16_t>(h - 1)};
    t -= w - 1;
    // left column bottom to top, excluding both corners: [0, h-2)
    return {0, static_cast<std::uint16_t>(h - 2 - t)};
}

std::vector<PixelPos> rasterize_line(int x0, int y0, int x1, int y1) {
    std::vector<PixelPos> out;
    int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        out.push_back({static_cast<std::uint16_t>(x0),
                       static_cast<std::uint16_t>(y0)});
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return out;
}

std::vector<PixelPos> rasterize_circle(int cx, int cy, int r) {
    if (r == 0) return {{static_cast<std::uint16_t>(cx),
                         static_cast<std::uint16_t>(cy)}};
    std::vector<PixelPos> pts;
    int x = r, y = 0, err = 1 - r;
    while (x >= y) {
        const int octants[8][2] = {{x, y},  {y, x},   {-y, x},  {-x, y},
                                   {-x, -y}, {-y, -x}, {y, -x},  {x, -y}};
        for (auto& o : octants) {
            pts.push_back({static_cast<std::uint16_t>(cx + o[0]),
                           static_cast<std::uint16_t>(cy + o[1])});
        }
        ++y;
        if (err < 0) {
            err += 2 * y + 1;
        } else {
            --x;
            err += 2 * (y - x) + 1;
        }
    }
    // Deduplicate, then order clockwise from east (y grows downward, so
    // increasing atan2 angle in image coordinates is clockwise on screen).
    std::sort(pts.begin(), pts.end(), [](const PixelPos& a, const PixelPos& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto angle_of = [cx, cy](const PixelPos& p) {
        double a = std::atan2(static_cast<double>(p.y) - cy,
                              static_cast<double>(p.x) - cx);
        if (a < 0) a += 2.0 * std::numbers::pi;
        return a;
    };
    std::stable_sort(pts.begin(), pts.end(),
                     [&](const PixelPos& a, const PixelPos& b) {
                         return angle_of(a) < angle_of(b);
                     });
    return pts;
}

std::vector<PixelPos> rasterize(const Curve& curve, std::uint32_t width,
                                std::uint32_t height) {
    if (curve.kind == CurveKind::Line) {
        for (int i = 0; i < 4; i += 2) {
            if (curve.p[i] >= width || curve.p[i + 1] >= height)
                throw ArgumentError("line endpoint outside frame");
        }
        return rasterize_line(curve.p[0], curve.p[1], curve.p[2], curve.p[3]);
    }
    int cx = curve.p[0], cy = curve.p[1], r = curve.p[2];
    if (cx - r < 0 || cy - r < 0 ||
        cx + r >= static_cast<int>(width) || cy + r >= static_cast<int>(height))
        throw ArgumentError("circle not contained in frame");
    return rasterize_circle(cx, cy, r);
}

namespace {

std::vector<Curve> generate_curves(CurveKind kind, std::uint32_t n,
                                   std::uint32_t w, std::uint32_t h,
                                   std::uint64_t seed, std::uint16_t r_min,
                                   std::uint16_t r_max) {
    SplitMix64 rng(seed);
    std::vector<Curve> curves;
    curves.reserve(n);
    const std::uint64_t perimeter = 2ull * (w + h) - 4;
    for (std::uint32_t i = 0; i < n; ++i) {
        Curve c;
        c.kind = kind;
        if (kind == CurveKind::Line) {
            std::uint64_t a = rng.bounded(perimeter);
            std::uint64_t b;
            do {
                b = rng.bounded(perimeter);
            } while (b == a);
            PixelPos p0 = perimeter_point(a, w, h);
            PixelPos p1 = perimeter_point(b, w, h);
            c.p[0] = p0.x;
            c.p[1] = p0.y;
            c.p[2] = p1.x;
            c.p[3] = p1.y;
        } else {
            std::uint16_t r = static_cast<std::uint16_t>(
                r_min + rng.bounded(r_max - r_min + 1ull));
            c.p[0] = static_cast<std::uint16_t>(r + rng.bounded(w - 2ull * r));
            c.p[1] = static_cast<std::uint16_t>(r + rng.bounded(h - 2ull * r));
            c.p[2] = r;
        }
        c.pixels = rasterize(c, w, h);
        curves.push_back(std::move(c));
    }
    return curves;
}

}  // namespace

CameraProgram gen_program(CurveKind kind, std::uint32_t n, std::uint32_t width,
                          std::uint32_t height, std::uint64_t seed,
                          std::uint16_t r_min, std::uint16_t r_max) {
    if (width < 2 || height < 2)
        throw ArgumentError("frame must be at least 2x2");
    if (kind == CurveKind::Line) {
        if (r_min != 0 || r_max != 0)
            throw ArgumentError("radius parameters are circle-only");
    } else {
        if (r_min < 1 || r_min > r_max)
            throw ArgumentError("need 1 <= r_min <= r_max");
        if (2u * r_max >= std::min(width, height))
            throw ArgumentError("r_max too large for frame");
    }
    CameraProgram prog;
    prog.width = width;
    prog.height = height;
    prog.kind = kind;
    prog.n = n;
    prog.seed = seed;
    prog.r_min = r_min;
    prog.r_max = r_max;
    prog.curves = generate_curves(kind, n, width, height, seed, r_min, r_max);
    auto bytes = save_program(prog);
    prog.digest = fnv1a64(bytes.data(), bytes.size());
    return prog;
}

std::vector<std::uint8_t> save_program(const CameraProgram& prog) {
    detail::ByteWriter w;
    w.magic("OAPG");
    w.u8(1);  // version
    w.u8(static_cast<std::uint8_t>(prog.kind));
    w.u32(prog.n);
    w.u32(prog.width);
    w.u32(prog.height);
    w.u64(prog.seed);
    w.u16(prog.r_min);
    w.u16(prog.r_max);
    for (const Curve& c : prog.curves) {
        if (prog.kind == CurveKind::Line) {
            w.u16(c.p[0]);
            w.u16(c.p[1]);
            w.u16(c.p[2]);
            w.u16(c.p[3]);
        } else {
            w.u16(c.p[0]);
            w.u16(c.p[1]);
            w.u16(c.p[2]);
        }
    }
    return w.bytes;
}

CameraProgram load_program(const std::vector<std::uint8_t>& bytes) {
    detail::ByteReader r(bytes, "program file");
    r.expect_magic("OAPG");
    if (r.u8() != 1) throw FormatError("program file: unsupported version");
    std::uint8_t kind_byte = r.u8();
    if (kind_byte != 1 && kind_byte != 2)
        throw FormatError("program file: unknown curve kind");
    CameraProgram prog;
    prog.kind = static_cast<CurveKind>(kind_byte);
    prog.n = r.u32();
    prog.width = r.u32();
    prog.height = r.u32();
    prog.seed = r.u64();
    prog.r_min = r.u16();
    prog.r_max = r.u16();
    prog.curves.reserve(prog.n);
    for (std::uint32_t i = 0; i < prog.n; ++i) {
        Curve c;
        c.kind = prog.kind;
        c.p[0] = r.u16();
        c.p[1] = r.u16();
        if (prog.kind == CurveKind::Line) {
            c.p[2] = r.u16();
            c.p[3] = r.u16();
        } else {
            c.p[2] = r.u16();
        }
        prog.curves.push_back(std::move(c));
    }
    r.expect_end();

    // Stored curves must match regeneration from the stored seed; a camera
    // program cannot be changed after manufacture.
    std::vector<Curve> regen = generate_curves(prog.kind, prog.n, prog.width,
                                               prog.height, prog.seed,
                                               prog.r_min, prog.r_max);
    for (std::uint32_t i = 0; i < prog.n; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (prog.curves[i].p[j] != regen[i].p[j])
                throw IntegrityError("program file: curves do not match seed");
        }
        prog.curves[i].pixels = std::move(regen[i].pixels);
    }
    prog.digest = fnv1a64(bytes.data(), bytes.size());
    return prog;
}

void save_program_file(const CameraProgram& prog, const std::string& path) {
    detail::write_file(save_program(prog), path);
}

CameraProgram load_program_file(const std::string& path) {
    return load_program(detail::read_file(path));
}

std::uint64_t program_digest(const CameraProgram& prog) {
    if (prog.digest != 0) return prog.digest;
    std::vector<std::uint8_t> bytes = save_program(prog);
    return fnv1a64(bytes.data(), bytes.size());
}

}  // namespace oacam
