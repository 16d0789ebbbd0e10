#include "oacam/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <set>
#include <filesystem>
#include <functional>
#include <thread>

#include "oacam/errors.hpp"
#include "oacam/prng.hpp"

namespace fs = std::filesystem;

namespace oacam {

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
split_trajectory(std::uint32_t frame_count, std::uint32_t stride) {
    if (stride < 1) throw ArgumentError("stride must be >= 1");
    std::vector<std::uint32_t> train, test;
    for (std::uint32_t i = 0; i < frame_count; ++i) {
        if (i % stride == 0)
            train.push_back(i);
        else
            test.push_back(i);
    }
    return {train, test};
}

bool is_correct(std::uint32_t predicted_id, std::uint32_t true_id,
                std::uint32_t tolerance) {
    std::uint32_t diff = predicted_id > true_id ? predicted_id - true_id
                                                : true_id - predicted_id;
    return diff <= tolerance;
}

namespace {

// Stateless seed derivation so parallel workers never share PRNG state.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 s(a ^ (b + 0x9E3779B97F4A7C15ULL));
    return s.next();
}

std::uint64_t combo_seed(std::uint64_t seed, CurveKind kind, ProgramMode mode,
                         std::uint32_t n) {
    std::uint64_t tag = (static_cast<std::uint64_t>(kind) << 40) |
                        (static_cast<std::uint64_t>(mode) << 36) | n;
    return mix_seed(seed, tag);
}

void parallel_for(std::uint32_t count, std::uint32_t jobs,
                  const std::function<void(std::uint32_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::uint32_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    std::uint32_t w = std::min(jobs, count);
    for (std::uint32_t t = 0; t < w; ++t) {
        workers.emplace_back([&, t] {
            for (std::uint32_t i = t; i < count; i += w) body(i);
        });
    }
    for (auto& th : workers) th.join();
}

}  // namespace

EvalReport evaluate_frames(const std::vector<GrayImage>& frames,
                           const EvalConfig& config,
                           const std::string& dataset_name) {
    if (frames.empty()) throw ArgumentError("empty dataset");
    if (config.n_values.empty()) throw ArgumentError("no n values");
    if (config.curve_kinds.empty() || config.modes.empty())
        throw ArgumentError("no curve kinds or modes");
    const std::uint32_t w = frames[0].width, h = frames[0].height;
    for (const GrayImage& f : frames)
        if (f.width != w || f.height != h)
            throw ArgumentError("inconsistent frame dimensions");

    const std::uint32_t frame_count = static_cast<std::uint32_t>(frames.size());
    auto [train_ids, test_ids] = split_trajectory(frame_count, config.stride);

    EvalReport report;
    report.dataset = dataset_name;
    report.seed = config.seed;

    for (CurveKind kind : config.curve_kinds) {
        for (ProgramMode mode : config.modes) {
            for (std::uint32_t n : config.n_values) {
                std::uint64_t cseed = combo_seed(config.seed, kind, mode, n);
                std::uint16_t rmin = kind == CurveKind::Circle ? config.r_min : 0;
                std::uint16_t rmax = kind == CurveKind::Circle ? config.r_max : 0;
                CameraProgram prog =
                    gen_program(kind, n, w, h, cseed, rmin, rmax);

                std::vector<Fingerprint> fps(frame_count);
                parallel_for(frame_count, config.jobs, [&](std::uint32_t i) {
                    if (mode == ProgramMode::Fixed) {
                        fps[i] = fingerprint(frames[i], prog);
                    } else {
                        fps[i] = fingerprint(frames[i], prog, mix_seed(cseed, i));
                    }
                });

                std::vector<Fingerprint> train_fps;
                std::vector<std::pair<std::uint32_t, Fingerprint>> indexed;
                for (std::uint32_t id : train_ids) {
                    train_fps.push_back(fps[id]);
                    indexed.push_back({id, fps[id]});
                }
                // Small n can leave fewer distinct training pairs than the
                // requested vocabulary; clamp so tiny sweeps stay runnable.
                std::set<std::pair<std::uint8_t, std::uint8_t>> distinct;
                for (const Fingerprint& fp : train_fps)
                    for (const ExtremaPair& p : fp.pairs)
                        distinct.insert({p.min, p.max});
                std::uint32_t k_eff = std::min<std::uint32_t>(
                    config.k, static_cast<std::uint32_t>(distinct.size()));
                Codebook cb = train_codebook(train_fps, k_eff,
                                             mix_seed(cseed, 0xC0DEB00CULL));
                RetrievalIndex index = build_index(indexed, cb);

                const auto& queries = test_ids.empty() ? train_ids : test_ids;
                std::vector<QueryRecord> records(queries.size());
                parallel_for(static_cast<std::uint32_t>(queries.size()),
                             config.jobs, [&](std::uint32_t qi) {
                                 std::uint32_t id = queries[qi];
                                 auto ranked = query(index, fps[id], 1);
                                 bool ok = is_correct(ranked[0].first, id,
                                                      config.tolerance);
                                 records[qi] = {id, ranked[0].first, ok};
                             });

                std::uint32_t correct = 0;
                for (const QueryRecord& r : records)
                    if (r.correct) ++correct;

                report.rows.push_back(
                    {kind, mode, n, config.k,
                     static_cast<double>(correct) / records.size(),
                     static_cast<std::uint32_t>(records.size())});
                report.per_query = std::move(records);
            }
        }
    }
    return report;
}

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) &&
            std::isdigit(static_cast<unsigned char>(b[j]))) {
            std::size_t i0 = i, j0 = j;
            while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
            while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
            std::string na = a.substr(i0, i - i0), nb = b.substr(j0, j - j0);
            // strip leading zeros, keep "0"
            auto strip = [](const std::string& s) {
                std::size_t p = s.find_first_not_of('0');
                return p == std::string::npos ? std::string("0") : s.substr(p);
            };
            std::string sa = strip(na), sb = strip(nb);
            if (sa.size() != sb.size()) return sa.size() < sb.size();
            if (sa != sb) return sa < sb;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() < b.size();
}

std::vector<std::string> list_frames_sorted(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png" || ext == ".pgm")
            names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end(), natural_less);
    std::vector<std::string> paths;
    for (const std::string& name : names)
        paths.push_back((fs::path(dir) / name).string());
    return paths;
}

EvalReport evaluate(const std::string& dataset_dir, const EvalConfig& config) {
    std::vector<std::string> paths = list_frames_sorted(dataset_dir);
    if (paths.empty()) throw IoError("no frames found in: " + dataset_dir);
    std::vector<GrayImage> frames;
    frames.reserve(paths.size());
    for (const std::string& p : paths) {
        try {
            frames.push_back(load_grayscale(p));
        } catch (const std::exception& e) {
            throw IoError("failed to load frame " + p + ": " + e.what());
        }
    }
    return evaluate_frames(frames, config, dataset_dir);
}

namespace {

const char* kind_name(CurveKind k) {
    return k == CurveKind::Line ? "line" : "circle";
}
const char* mode_name(ProgramMode m) {
    return m == ProgramMode::Fixed ? "fixed" : "random";
}

}  // namespace

std::string report_csv(const EvalReport& report) {
    std::string out = "kind,mode,n,k,accuracy,queries,seed\n";
    char buf[160];
    for (const EvalRow& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%u,%u,%.6f,%u,%llu\n",
                      kind_name(r.kind), mode_name(r.mode), r.n, r.k,
                      r.accuracy, r.queries,
                      static_cast<unsigned long long>(report.seed));
        out += buf;
    }
    return out;
}

std::string per_query_csv(const EvalReport& report) {
    std::string out = "query_id,predicted_id,correct\n";
    char buf[64];
    for (const QueryRecord& q : report.per_query) {
        std::snprintf(buf, sizeof buf, "%u,%u,%d\n", q.query_id, q.predicted_id,
                      q.correct ? 1 : 0);
        out += buf;
    }
    return out;
}

std::vector<GrayImage> synth_trajectory(std::uint32_t frame_count,
                                        std::uint32_t frame_size,
                                        std::uint32_t step,
                                        std::uint64_t seed) {
    if (frame_count < 1 || frame_size < 1) throw ArgumentError("empty trajectory");
    const std::uint32_t mosaic_w = frame_size + (frame_count - 1) * step;
    const std::uint32_t mosaic_h = frame_size;
    const std::uint32_t cell = 32;
    const std::uint32_t cells_x = (mosaic_w + cell - 1) / cell;

    GrayImage mosaic;
    mosaic.width = mosaic_w;
    mosaic.height = mosaic_h;
    mosaic.data.resize(static_cast<std::size_t>(mosaic_w) * mosaic_h);
    for (std::uint32_t y = 0; y < mosaic_h; ++y) {
        for (std::uint32_t x = 0; x < mosaic_w; ++x) {
            std::uint64_t cell_id = (y / cell) * cells_x + (x / cell);
            std::uint32_t cell_v =
                static_cast<std::uint32_t>(mix_seed(seed, cell_id) % 256);
            double grad = 255.0 * x / (mosaic_w - 1);
            std::uint64_t pix_id = static_cast<std::uint64_t>(y) * mosaic_w + x;
            int noise = static_cast<int>(mix_seed(seed ^ 0xFACEULL, pix_id) % 13) - 6;
            int v = static_cast<int>(std::lround(0.55 * cell_v + 0.45 * grad)) + noise;
            mosaic.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }

    std::vector<GrayImage> frames(frame_count);
    for (std::uint32_t i = 0; i < frame_count; ++i) {
        GrayImage& f = frames[i];
        f.width = frame_size;
        f.height = frame_size;
        f.data.resize(static_cast<std::size_t>(frame_size) * frame_size);
        std::uint32_t x0 = i * step;
        for (std::uint32_t y = 0; y < frame_size; ++y)
            for (std::uint32_t x = 0; x < frame_size; ++x)
                f.at(x, y) = mosaic.at(x0 + x, y);
    }
    return frames;
}

DescriptorSet baseline_descriptors(const GrayImage& image) {
    if (image.width < 32 || image.height < 32)
        throw ArgumentError("image must be at least 32x32");
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);

    // Central-difference gradients.
    std::vector<double> gx(static_cast<std::size_t>(w) * h, 0.0);
    std::vector<double> gy(gx.size(), 0.0);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            std::size_t i = static_cast<std::size_t>(y) * w + x;
            gx[i] = 0.5 * (image.at(x + 1, y) - image.at(x - 1, y));
            gy[i] = 0.5 * (image.at(x, y + 1) - image.at(x, y - 1));
        }
    }

    // Harris response with a 3x3 box window, k = 0.04.
    std::vector<double> response(gx.size(), 0.0);
    double max_r = 0;
    for (int y = 2; y < h - 2; ++y) {
        for (int x = 2; x < w - 2; ++x) {
            double sxx = 0, syy = 0, sxy = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    std::size_t i = static_cast<std::size_t>(y + dy) * w + (x + dx);
                    sxx += gx[i] * gx[i];
                    syy += gy[i] * gy[i];
                    sxy += gx[i] * gy[i];
                }
            }
            double det = sxx * syy - sxy * sxy;
            double tr = sxx + syy;
            double r = det - 0.04 * tr * tr;
            response[static_cast<std::size_t>(y) * w + x] = r;
            max_r = std::max(max_r, r);
        }
    }

    DescriptorSet out;
    if (max_r <= 0) return out;  // flat image, no corners
    const double threshold = 0.01 * max_r;
    const int margin = 8;  // 16x16 descriptor patch must fit

    std::vector<Keypoint> candidates;
    for (int y = margin; y < h - margin; ++y) {
        for (int x = margin; x < w - margin; ++x) {
            double r = response[static_cast<std::size_t>(y) * w + x];
            if (r <= threshold) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (response[static_cast<std::size_t>(y + dy) * w + (x + dx)] > r) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                candidates.push_back({static_cast<std::uint32_t>(x),
                                      static_cast<std::uint32_t>(y), r});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Keypoint& a, const Keypoint& b) {
                  if (a.response != b.response) return a.response > b.response;
                  if (a.y != b.y) return a.y < b.y;
                  return a.x < b.x;
              });
    if (candidates.size() > 200) candidates.resize(200);

    const double two_pi = 2.0 * 3.14159265358979323846;
    for (const Keypoint& kp : candidates) {
        std::array<float, 128> desc{};
        for (int dy = -8; dy < 8; ++dy) {
            for (int dx = -8; dx < 8; ++dx) {
                int px = static_cast<int>(kp.x) + dx;
                int py = static_cast<int>(kp.y) + dy;
                std::size_t i = static_cast<std::size_t>(py) * w + px;
                double mag = std::hypot(gx[i], gy[i]);
                if (mag == 0) continue;
                double angle = std::atan2(gy[i], gx[i]);
                if (angle < 0) angle += two_pi;
                int bin = std::min(7, static_cast<int>(angle / two_pi * 8.0));
                int cell_x = (dx + 8) / 4;
                int cell_y = (dy + 8) / 4;
                desc[(cell_y * 4 + cell_x) * 8 + bin] += static_cast<float>(mag);
            }
        }
        auto normalize = [&desc] {
            double n2 = 0;
            for (float v : desc) n2 += static_cast<double>(v) * v;
            if (n2 > 0) {
                float inv = static_cast<float>(1.0 / std::sqrt(n2));
                for (float& v : desc) v *= inv;
            }
        };
        normalize();
        for (float& v : desc) v = std::min(v, 0.2f);
        normalize();
        out.keypoints.push_back(kp);
        out.descriptors.push_back(desc);
    }
    return out;
}

}  // namespace oacam
