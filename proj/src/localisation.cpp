#include "oacam/localisation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bytes.hpp"
#include "oacam/errors.hpp"
#include "oacam/prng.hpp"

namespace oacam {

namespace {

struct Point {
    double x, y;  // (min, max)
};

double sq_dist(const Point& a, const Point& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

std::vector<Point> collect_points(const std::vector<Fingerprint>& fps) {
    std::vector<Point> pts;
    for (const Fingerprint& fp : fps)
        for (const ExtremaPair& p : fp.pairs)
            pts.push_back({static_cast<double>(p.min), static_cast<double>(p.max)});
    return pts;
}

// k-means++ seeding: first center uniform, then each next center drawn with
// probability proportional to squared distance from the nearest chosen one.
std::vector<Point> seed_centroids(const std::vector<Point>& pts, std::uint32_t k,
                                  SplitMix64& rng) {
    std::vector<Point> centers;
    centers.push_back(pts[rng.bounded(pts.size())]);
    std::vector<double> d2(pts.size());
    while (centers.size() < k) {
        double total = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (const Point& c : centers) best = std::min(best, sq_dist(pts[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total <= 0) {
            pick = rng.bounded(pts.size());
        } else {
            double u = rng.unit() * total;
            pick = pts.size() - 1;
            double acc = 0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                acc += d2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pts[pick]);
    }
    return centers;
}

std::size_t nearest_centroid(const Point& p, const std::vector<Point>& centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < centers.size(); ++j) {
        double d = sq_dist(p, centers[j]);
        if (d < best_d) {  // ties keep the lower index
            best_d = d;
            best = j;
        }
    }
    return best;
}

}  // namespace

Codebook train_codebook(const std::vector<Fingerprint>& fingerprints,
                        std::uint32_t k, std::uint64_t seed) {
    if (k < 1) throw ArgumentError("k must be >= 1");
    std::vector<Point> pts = collect_points(fingerprints);
    if (pts.size() < k) throw ArgumentError("fewer pairs than words");

    std::set<std::pair<double, double>> distinct;
    for (const Point& p : pts) distinct.insert({p.x, p.y});
    if (distinct.size() < k)
        throw ArgumentError("fewer distinct points than words");

    SplitMix64 rng(seed);
    std::vector<Point> centers = seed_centroids(pts, k, rng);

    std::vector<std::size_t> assign(pts.size());
    for (int iter = 0; iter < 100; ++iter) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            assign[i] = nearest_centroid(pts[i], centers);

        std::vector<Point> sums(k, {0, 0});
        std::vector<std::uint64_t> counts(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            sums[assign[i]].x += pts[i].x;
            sums[assign[i]].y += pts[i].y;
            ++counts[assign[i]];
        }

        // Re-seed emptied clusters to the point farthest from its centroid.
        for (std::uint32_t j = 0; j < k; ++j) {
            if (counts[j] > 0) continue;
            std::size_t far_i = 0;
            double far_d = -1;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (counts[assign[i]] <= 1) continue;
                double d = sq_dist(pts[i], centers[assign[i]]);
                if (d > far_d) {
                    far_d = d;
                    far_i = i;
                }
            }
            std::size_t old = assign[far_i];
            sums[old].x -= pts[far_i].x;
            sums[old].y -= pts[far_i].y;
            --counts[old];
            assign[far_i] = j;
            sums[j] = pts[far_i];
            counts[j] = 1;
        }

        double max_move = 0;
        for (std::uint32_t j = 0; j < k; ++j) {
            Point next = {sums[j].x / counts[j], sums[j].y / counts[j]};
            max_move = std::max(max_move, std::sqrt(sq_dist(next, centers[j])));
            centers[j] = next;
        }
        if (max_move < 1e-4) break;
    }

    Codebook cb;
    cb.k = k;
    cb.trained_on = pts.size();
    cb.centroids.reserve(k);
    for (const Point& c : centers)
        cb.centroids.push_back({static_cast<float>(c.x), static_cast<float>(c.y)});
    return cb;
}

std::vector<std::uint32_t> quantize(const Fingerprint& fp, const Codebook& cb) {
    std::vector<std::uint32_t> counts(cb.k, 0);
    for (const ExtremaPair& p : fp.pairs) {
        Point q = {static_cast<double>(p.min), static_cast<double>(p.max)};
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::max();
        for (std::size_t j = 0; j < cb.centroids.size(); ++j) {
            Point c = {cb.centroids[j].first, cb.centroids[j].second};
            double d = sq_dist(q, c);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        ++counts[best];
    }
    return counts;
}

namespace {

std::vector<double> weigh_and_normalize(const std::vector<std::uint32_t>& tf,
                                        const std::vector<double>& idf) {
    std::vector<double> w(tf.size());
    double norm2 = 0;
    for (std::size_t j = 0; j < tf.size(); ++j) {
        w[j] = static_cast<double>(tf[j]) * idf[j];
        norm2 += w[j] * w[j];
    }
    if (norm2 > 0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (double& v : w) v *= inv;
    }
    return w;
}

}  // namespace

RetrievalIndex build_index(
    const std::vector<std::pair<std::uint32_t, Fingerprint>>& fingerprints,
    const Codebook& cb) {
    if (fingerprints.empty()) throw ArgumentError("empty fingerprint list");
    {
        std::set<std::uint32_t> ids;
        for (const auto& [id, fp] : fingerprints)
            if (!ids.insert(id).second)
                throw ArgumentError("duplicate image id");
    }

    const std::uint32_t D = static_cast<std::uint32_t>(fingerprints.size());
    std::vector<std::vector<std::uint32_t>> tfs;
    tfs.reserve(D);
    std::vector<std::uint32_t> doc_freq(cb.k, 0);
    for (const auto& [id, fp] : fingerprints) {
        tfs.push_back(quantize(fp, cb));
        for (std::uint32_t j = 0; j < cb.k; ++j)
            if (tfs.back()[j] > 0) ++doc_freq[j];
    }

    RetrievalIndex index;
    index.codebook = cb;
    index.idf.resize(cb.k);
    for (std::uint32_t j = 0; j < cb.k; ++j)
        index.idf[j] = std::log((1.0 + D) / (1.0 + doc_freq[j])) + 1.0;

    for (std::size_t i = 0; i < fingerprints.size(); ++i) {
        index.entries.push_back(
            {fingerprints[i].first, weigh_and_normalize(tfs[i], index.idf)});
    }
    std::sort(index.entries.begin(), index.entries.end(),
              [](const IndexEntry& a, const IndexEntry& b) {
                  return a.image_id < b.image_id;
              });
    return index;
}

std::vector<std::pair<std::uint32_t, double>> query(const RetrievalIndex& index,
                                                    const Fingerprint& fp,
                                                    std::uint32_t top_m) {
    if (top_m < 1) throw ArgumentError("top_m must be >= 1");
    if (index.entries.empty()) throw ArgumentError("empty index");

    std::vector<double> q =
        weigh_and_normalize(quantize(fp, index.codebook), index.idf);

    std::vector<std::pair<std::uint32_t, double>> ranked;
    ranked.reserve(index.entries.size());
    for (const IndexEntry& e : index.entries) {
        double dot = 0;
        for (std::size_t j = 0; j < q.size(); ++j)
            dot += q[j] * e.weights[j];
        ranked.push_back({e.image_id, dot});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > top_m) ranked.resize(top_m);
    return ranked;
}

std::vector<std::uint8_t> save_index(const RetrievalIndex& index) {
    detail::ByteWriter w;
    w.magic("OACB");
    w.u8(1);  // version
    w.u32(index.codebook.k);
    for (const auto& [x, y] : index.codebook.centroids) {
        w.f32(x);
        w.f32(y);
    }
    for (double v : index.idf) w.f32(static_cast<float>(v));
    w.u32(static_cast<std::uint32_t>(index.entries.size()));
    for (const IndexEntry& e : index.entries) {
        w.u32(e.image_id);
        for (double v : e.weights) w.f32(static_cast<float>(v));
    }
    return w.bytes;
}

RetrievalIndex load_index(const std::vector<std::uint8_t>& bytes) {
    detail::ByteReader r(bytes, "index file");
    r.expect_magic("OACB");
    if (r.u8() != 1) throw FormatError("index file: unsupported version");
    RetrievalIndex index;
    index.codebook.k = r.u32();
    index.codebook.centroids.resize(index.codebook.k);
    for (auto& [x, y] : index.codebook.centroids) {
        x = r.f32();
        y = r.f32();
    }
    index.idf.resize(index.codebook.k);
    for (double& v : index.idf) v = r.f32();
    std::uint32_t D = r.u32();
    index.entries.resize(D);
    std::uint32_t prev_id = 0;
    for (std::uint32_t i = 0; i < D; ++i) {
        index.entries[i].image_id = r.u32();
        if (i > 0 && index.entries[i].image_id <= prev_id)
            throw IntegrityError("index file: image ids not increasing");
        prev_id = index.entries[i].image_id;
        index.entries[i].weights.resize(index.codebook.k);
        for (double& v : index.entries[i].weights) v = r.f32();
    }
    r.expect_end();
    return index;
}

void save_index_file(const RetrievalIndex& index, const std::string& path) {
    detail::write_file(save_index(index), path);
}

RetrievalIndex load_index_file(const std::string& path) {
    return load_index(detail::read_file(path));
}

}  // namespace oacam
