#include "oacam/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "oacam/errors.hpp"

namespace oacam {

CollisionCensus collision_census(std::uint32_t width, std::uint32_t height,
                                 std::uint32_t levels,
                                 const CameraProgram& program) {
    if (levels < 2) throw ArgumentError("need at least 2 intensity levels");
    if (program.width != width || program.height != height)
        throw ArgumentError("program dimensions do not match");

    const std::uint64_t pixel_count = static_cast<std::uint64_t>(width) * height;
    // levels^pixels must stay enumerable
    long double space = std::pow(static_cast<long double>(levels),
                                 static_cast<long double>(pixel_count));
    if (space > static_cast<long double>(1ull << 24))
        throw FeasibilityError(
            "image space exceeds 2^24, exhaustive census infeasible");
    const std::uint64_t total = static_cast<std::uint64_t>(space + 0.5L);

    // Scale {0..levels-1} evenly onto [0,255].
    std::vector<std::uint8_t> level_value(levels);
    for (std::uint32_t v = 0; v < levels; ++v)
        level_value[v] = static_cast<std::uint8_t>(
            std::lround(255.0 * v / (levels - 1)));

    GrayImage img;
    img.width = width;
    img.height = height;
    img.data.assign(pixel_count, level_value[0]);
    std::vector<std::uint32_t> digits(pixel_count, 0);

    std::map<std::vector<ExtremaPair>, std::uint64_t> preimages;
    std::vector<ExtremaPair> pairs(program.n);
    for (std::uint64_t idx = 0;; ++idx) {
        for (std::uint32_t c = 0; c < program.n; ++c)
            pairs[c] = trace_extrema(img, program.curves[c]);
        std::sort(pairs.begin(), pairs.end());
        ++preimages[pairs];

        // increment the mixed-radix counter
        std::uint64_t p = 0;
        while (p < pixel_count) {
            if (++digits[p] < levels) {
                img.data[p] = level_value[digits[p]];
                break;
            }
            digits[p] = 0;
            img.data[p] = level_value[0];
            ++p;
        }
        if (p == pixel_count) break;
    }

    CollisionCensus census;
    census.image_space_size = total;
    census.distinct_hash_count = preimages.size();
    for (const auto& [hash, count] : preimages) {
        census.max_preimage_size = std::max(census.max_preimage_size, count);
        ++census.preimage_histogram[count];
    }
    return census;
}

namespace {

double tv_distance(const std::array<std::uint64_t, 256>& a,
                   const std::array<std::uint64_t, 256>& b) {
    double ta = 0, tb = 0;
    for (int i = 0; i < 256; ++i) {
        ta += static_cast<double>(a[i]);
        tb += static_cast<double>(b[i]);
    }
    if (ta == 0 || tb == 0) return 0;
    double d = 0;
    for (int i = 0; i < 256; ++i)
        d += std::abs(a[i] / ta - b[i] / tb);
    return 0.5 * d;
}

}  // namespace

CoverageReport coverage_map(const GrayImage& image, const CameraProgram& program) {
    if (image.width != program.width || image.height != program.height)
        throw ArgumentError("image dimensions do not match program");

    CoverageReport report;
    report.extrema_location_mask.width = image.width;
    report.extrema_location_mask.height = image.height;
    report.extrema_location_mask.data.assign(
        static_cast<std::size_t>(image.width) * image.height, 0);

    for (const Curve& c : program.curves) {
        // first-encountered argmin/argmax in rasterization order
        const PixelPos* argmin = &c.pixels.front();
        const PixelPos* argmax = &c.pixels.front();
        std::uint8_t lo = image.at(argmin->x, argmin->y);
        std::uint8_t hi = lo;
        for (const PixelPos& p : c.pixels) {
            std::uint8_t v = image.at(p.x, p.y);
            if (v < lo) {
                lo = v;
                argmin = &p;
            }
            if (v > hi) {
                hi = v;
                argmax = &p;
            }
        }
        report.extrema_location_mask.at(argmin->x, argmin->y) = 255;
        report.extrema_location_mask.at(argmax->x, argmax->y) = 255;
        ++report.sampled_intensity_histogram[lo];
        ++report.sampled_intensity_histogram[hi];
    }

    for (std::uint8_t v : image.data) ++report.full_image_histogram[v];
    report.divergence = tv_distance(report.sampled_intensity_histogram,
                                    report.full_image_histogram);
    return report;
}

LeakAudit leak_audit(const std::vector<std::uint8_t>& fingerprint_bytes,
                     std::uint32_t image_width, std::uint32_t image_height) {
    // load_fingerprint performs the structural checks: magic, version,
    // sortedness, min <= max, and an exact payload length of 2n bytes.
    Fingerprint fp = load_fingerprint(fingerprint_bytes);

    LeakAudit audit;
    audit.n = fp.n;
    audit.payload_bytes = 2ull * fp.n;
    audit.header_bytes = fingerprint_bytes.size() - audit.payload_bytes;
    audit.positional_fields = 0;  // the format has none
    double pixels = static_cast<double>(image_width) * image_height;
    audit.payload_to_pixel_ratio = pixels > 0 ? audit.payload_bytes / pixels : 0;
    return audit;
}

std::string census_report_text(const CollisionCensus& c) {
    std::ostringstream os;
    os << "image_space_size," << c.image_space_size << "\n"
       << "distinct_hash_count," << c.distinct_hash_count << "\n"
       << "max_preimage_size," << c.max_preimage_size << "\n"
       << "collision_ratio,"
       << static_cast<double>(c.distinct_hash_count) / c.image_space_size << "\n";
    os << "preimage_size,hash_count\n";
    for (const auto& [size, count] : c.preimage_histogram)
        os << size << "," << count << "\n";
    return os.str();
}

std::string audit_report_text(const LeakAudit& a) {
    std::ostringstream os;
    os << "pairs," << a.n << "\n"
       << "payload_bytes," << a.payload_bytes << "\n"
       << "header_bytes," << a.header_bytes << "\n"
       << "positional_fields," << a.positional_fields << "\n"
       << "payload_to_pixel_ratio," << a.payload_to_pixel_ratio << "\n";
    return os.str();
}

}  // namespace oacam
