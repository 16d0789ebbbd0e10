#include "oacam/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bytes.hpp"
#include "oacam/errors.hpp"

namespace oacam {

ExtremaPair trace_extrema(const GrayImage& image, const Curve& curve) {
    if (curve.pixels.empty()) throw ArgumentError("curve has no pixels");
    std::uint8_t lo = 255, hi = 0;
    for (const PixelPos& p : curve.pixels) {
        if (p.x >= image.width || p.y >= image.height)
            throw ArgumentError("curve pixel outside image");
        std::uint8_t v = image.at(p.x, p.y);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

Fingerprint fingerprint(const GrayImage& image, const CameraProgram& program,
                        std::optional<std::uint64_t> per_image_seed) {
    if (image.width != program.width || image.height != program.height)
        throw ArgumentError("image dimensions do not match program");

    const CameraProgram* prog = &program;
    CameraProgram fresh;
    if (per_image_seed) {
        fresh = gen_program(program.kind, program.n, program.width,
                            program.height, *per_image_seed, program.r_min,
                            program.r_max);
        prog = &fresh;
    }

    Fingerprint fp;
    fp.n = prog->n;
    fp.curve_kind = prog->kind;
    fp.randomized_per_image = per_image_seed.has_value();
    fp.program_digest = program_digest(program);
    fp.pairs.reserve(prog->n);
    for (const Curve& c : prog->curves) fp.pairs.push_back(trace_extrema(image, c));
    // Sorting before digitisation destroys curve order and association.
    std::sort(fp.pairs.begin(), fp.pairs.end());
    return fp;
}

DensityGrid histogram2d(const Fingerprint& fp, std::uint32_t bins) {
    if (bins < 1) throw ArgumentError("bins must be >= 1");
    if (fp.pairs.empty()) throw ArgumentError("empty fingerprint");
    DensityGrid grid;
    grid.resolution = bins;
    grid.values.assign(static_cast<std::size_t>(bins) * bins, 0.0);
    for (const ExtremaPair& p : fp.pairs) {
        std::uint32_t col = static_cast<std::uint32_t>(p.max) * bins / 256;  // x = max
        std::uint32_t row = static_cast<std::uint32_t>(p.min) * bins / 256;  // y = min
        grid.values[static_cast<std::size_t>(row) * bins + col] += 1.0;
    }
    for (double& v : grid.values) v /= static_cast<double>(fp.pairs.size());
    return grid;
}

DensityGrid kde_render(const Fingerprint& fp, std::uint32_t resolution,
                       std::optional<double> bandwidth) {
    if (resolution < 1) throw ArgumentError("resolution must be >= 1");
    if (fp.pairs.empty()) throw ArgumentError("empty fingerprint");
    if (fp.pairs.size() < 2 && !bandwidth)
        throw ArgumentError("automatic bandwidth needs n >= 2");

    const double n = static_cast<double>(fp.pairs.size());
    const double bin_width = 256.0 / resolution;

    double hx, hy;
    if (bandwidth) {
        hx = hy = *bandwidth;
        if (hx <= 0) throw ArgumentError("bandwidth must be positive");
    } else {
        // Silverman: h = 1.06 * sigma * n^(-1/5) per axis, sample standard
        // deviation; degenerate axes fall back to one bin width.
        double mean_max = 0, mean_min = 0;
        for (const ExtremaPair& p : fp.pairs) {
            mean_max += p.max;
            mean_min += p.min;
        }
        mean_max /= n;
        mean_min /= n;
        double var_max = 0, var_min = 0;
        for (const ExtremaPair& p : fp.pairs) {
            var_max += (p.max - mean_max) * (p.max - mean_max);
            var_min += (p.min - mean_min) * (p.min - mean_min);
        }
        double sd_max = std::sqrt(var_max / (n - 1));
        double sd_min = std::sqrt(var_min / (n - 1));
        double factor = 1.06 * std::pow(n, -0.2);
        hx = sd_max > 0 ? factor * sd_max : bin_width;
        hy = sd_min > 0 ? factor * sd_min : bin_width;
    }

    DensityGrid grid;
    grid.resolution = resolution;
    grid.values.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

    const int reach_x = static_cast<int>(std::ceil(4.0 * hx / bin_width));
    const int reach_y = static_cast<int>(std::ceil(4.0 * hy / bin_width));
    for (const ExtremaPair& p : fp.pairs) {
        // grid cell centers in intensity units
        int c_col = static_cast<int>(p.max / bin_width);
        int c_row = static_cast<int>(p.min / bin_width);
        int r0 = std::max(0, c_row - reach_y);
        int r1 = std::min(static_cast<int>(resolution) - 1, c_row + reach_y);
        int k0 = std::max(0, c_col - reach_x);
        int k1 = std::min(static_cast<int>(resolution) - 1, c_col + reach_x);
        for (int row = r0; row <= r1; ++row) {
            double y = (row + 0.5) * bin_width;
            double dy = (y - p.min) / hy;
            if (std::abs(dy) > 4.0) continue;
            for (int col = k0; col <= k1; ++col) {
                double x = (col + 0.5) * bin_width;
                double dx = (x - p.max) / hx;
                if (std::abs(dx) > 4.0) continue;
                if (y > x) continue;  // no mass above the diagonal
                grid.values[static_cast<std::size_t>(row) * resolution + col] +=
                    std::exp(-0.5 * (dx * dx + dy * dy));
            }
        }
    }
    double total = 0;
    for (double v : grid.values) total += v;
    if (total > 0)
        for (double& v : grid.values) v /= total;
    return grid;
}

std::vector<std::uint8_t> save_fingerprint(const Fingerprint& fp) {
    detail::ByteWriter w;
    w.magic("OAHF");
    w.u8(1);  // version
    w.u8(static_cast<std::uint8_t>(fp.curve_kind));
    w.u8(fp.randomized_per_image ? 1 : 0);  // flags
    w.u8(0);                                // reserved
    w.u32(fp.n);
    w.u64(fp.program_digest);
    for (const ExtremaPair& p : fp.pairs) {
        w.u8(p.min);
        w.u8(p.max);
    }
    return w.bytes;
}

Fingerprint load_fingerprint(const std::vector<std::uint8_t>& bytes) {
    detail::ByteReader r(bytes, "fingerprint file");
    r.expect_magic("OAHF");
    if (r.u8() != 1) throw FormatError("fingerprint file: unsupported version");
    std::uint8_t kind_byte = r.u8();
    if (kind_byte != 1 && kind_byte != 2)
        throw FormatError("fingerprint file: unknown curve kind");
    Fingerprint fp;
    fp.curve_kind = static_cast<CurveKind>(kind_byte);
    std::uint8_t flags = r.u8();
    if (flags > 1) throw FormatError("fingerprint file: unknown flags");
    fp.randomized_per_image = flags & 1;
    if (r.u8() != 0) throw FormatError("fingerprint file: reserved byte set");
    fp.n = r.u32();
    fp.program_digest = r.u64();
    if (r.remaining() != 2ull * fp.n)
        throw FormatError("fingerprint file: payload size mismatch");
    fp.pairs.reserve(fp.n);
    for (std::uint32_t i = 0; i < fp.n; ++i) {
        ExtremaPair p;
        p.min = r.u8();
        p.max = r.u8();
        if (p.min > p.max)
            throw IntegrityError("fingerprint file: pair with min > max");
        if (i > 0 && p < fp.pairs.back())
            throw IntegrityError("fingerprint file: pairs not sorted");
        fp.pairs.push_back(p);
    }
    return fp;
}

void save_fingerprint_file(const Fingerprint& fp, const std::string& path) {
    detail::write_file(save_fingerprint(fp), path);
}

Fingerprint load_fingerprint_file(const std::string& path) {
    return load_fingerprint(detail::read_file(path));
}

void save_grid_pgm(const DensityGrid& grid, const std::string& path) {
    double peak = 0;
    for (double v : grid.values) peak = std::max(peak, v);
    GrayImage img;
    img.width = grid.resolution;
    img.height = grid.resolution;
    img.data.resize(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        img.data[i] = peak > 0 ? static_cast<std::uint8_t>(
                                     std::lround(grid.values[i] / peak * 255.0))
                               : 0;
    }
    save_pgm(img, path);
}

void save_grid_csv(const DensityGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write: " + path);
    out << "row,col,value\n";
    for (std::uint32_t row = 0; row < grid.resolution; ++row)
        for (std::uint32_t col = 0; col < grid.resolution; ++col)
            out << row << ',' << col << ',' << grid.at(row, col) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace oacam
