// oacam: single-pixel curve-extrema camera simulator and localisation toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "oacam/curves.hpp"
#include "oacam/errors.hpp"
#include "oacam/evaluation.hpp"
#include "oacam/hashing.hpp"
#include "oacam/image.hpp"
#include "oacam/localisation.hpp"
#include "oacam/privacy.hpp"

namespace fs = std::filesystem;
using namespace oacam;

namespace {

// Relative output paths are resolved against OACAM_OUT_DIR when set.
std::string out_path(const std::string& path) {
    const char* dir = std::getenv("OACAM_OUT_DIR");
    if (dir && *dir && fs::path(path).is_relative())
        return (fs::path(dir) / path).string();
    return path;
}

CurveKind parse_kind(const std::string& s) {
    if (s == "line") return CurveKind::Line;
    if (s == "circle") return CurveKind::Circle;
    throw CLI::ValidationError("--kind", "must be 'line' or 'circle'");
}

ProgramMode parse_mode(const std::string& s) {
    if (s == "fixed") return ProgramMode::Fixed;
    if (s == "random" || s == "per-image-random") return ProgramMode::PerImageRandom;
    throw CLI::ValidationError("--mode", "must be 'fixed' or 'random'");
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write: " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oacam - privacy-preserving single-pixel camera simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file mirroring the flags");
    app.allow_config_extras(false);

    // ---- program gen ----
    auto* program_cmd = app.add_subcommand("program", "Camera program tools");
    program_cmd->require_subcommand(1);
    auto* gen = program_cmd->add_subcommand("gen", "Generate a fixed curve set");
    std::string gen_kind = "line", gen_out;
    std::uint32_t gen_n = 1000, gen_w = 1280, gen_h = 720;
    std::uint64_t gen_seed = 0;
    std::uint16_t gen_rmin = 0, gen_rmax = 0;
    gen->add_option("--kind", gen_kind, "Curve kind: line or circle");
    gen->add_option("--n", gen_n, "Number of curves");
    gen->add_option("--width", gen_w, "Frame width in pixels");
    gen->add_option("--height", gen_h, "Frame height in pixels");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--rmin", gen_rmin, "Minimum circle radius");
    gen->add_option("--rmax", gen_rmax, "Maximum circle radius");
    gen->add_option("-o,--output", gen_out, "Output program file")->required();
    gen->callback([&] {
        CameraProgram prog = gen_program(parse_kind(gen_kind), gen_n, gen_w,
                                         gen_h, gen_seed, gen_rmin, gen_rmax);
        std::string path = out_path(gen_out);
        save_program_file(prog, path);
        std::printf("wrote %s: %u %s curves on %ux%u, seed %llu\n", path.c_str(),
                    prog.n, gen_kind.c_str(), prog.width, prog.height,
                    static_cast<unsigned long long>(prog.seed));
    });

    // ---- hash ----
    auto* hash = app.add_subcommand("hash", "Fingerprint an image through a program");
    std::string hash_prog, hash_img, hash_out;
    std::uint64_t hash_pis = 0;
    bool hash_randomized = false;
    hash->add_option("--program", hash_prog, "Program file")->required();
    hash->add_option("--image", hash_img, "PNG or PGM image")->required();
    hash->add_option("--per-image-seed", hash_pis,
                     "Randomize curves for this image with the given seed")
        ->trigger_on_parse();
    hash->add_flag("--randomized", hash_randomized,
                   "Use --per-image-seed randomization");
    hash->add_option("-o,--output", hash_out, "Output fingerprint file")->required();
    hash->callback([&] {
        CameraProgram prog = load_program_file(hash_prog);
        GrayImage img = load_grayscale(hash_img);
        std::optional<std::uint64_t> pis;
        if (hash_randomized || hash->count("--per-image-seed")) pis = hash_pis;
        Fingerprint fp = fingerprint(img, prog, pis);
        std::string path = out_path(hash_out);
        save_fingerprint_file(fp, path);
        std::printf("wrote %s: %u pairs (%llu bytes)\n", path.c_str(), fp.n,
                    static_cast<unsigned long long>(20 + 2ull * fp.n));
    });

    // ---- index build ----
    auto* index_cmd = app.add_subcommand("index", "Retrieval index tools");
    index_cmd->require_subcommand(1);
    auto* build = index_cmd->add_subcommand("build", "Train codebook and build index");
    std::vector<std::string> build_fps;
    std::uint32_t build_k = 64;
    std::uint64_t build_seed = 0;
    std::string build_out;
    build->add_option("fingerprints", build_fps, "Fingerprint files, in trajectory order")
        ->required();
    build->add_option("--k", build_k, "Vocabulary size");
    build->add_option("--seed", build_seed, "Codebook training seed");
    build->add_option("-o,--output", build_out, "Output index file")->required();
    build->callback([&] {
        std::vector<Fingerprint> fps;
        std::vector<std::pair<std::uint32_t, Fingerprint>> indexed;
        for (std::size_t i = 0; i < build_fps.size(); ++i) {
            fps.push_back(load_fingerprint_file(build_fps[i]));
            indexed.push_back({static_cast<std::uint32_t>(i), fps.back()});
        }
        Codebook cb = train_codebook(fps, build_k, build_seed);
        RetrievalIndex index = build_index(indexed, cb);
        std::string path = out_path(build_out);
        save_index_file(index, path);
        std::printf("wrote %s: %zu entries, k=%u\n", path.c_str(),
                    index.entries.size(), cb.k);
    });

    // ---- query ----
    auto* q = app.add_subcommand("query", "Rank index entries against a fingerprint");
    std::string q_index, q_fp;
    std::uint32_t q_top = 5;
    q->add_option("--index", q_index, "Index file")->required();
    q->add_option("--fingerprint", q_fp, "Query fingerprint file")->required();
    q->add_option("--top", q_top, "Number of results");
    q->callback([&] {
        RetrievalIndex index = load_index_file(q_index);
        Fingerprint fp = load_fingerprint_file(q_fp);
        auto ranked = query(index, fp, q_top);
        for (const auto& [id, sim] : ranked)
            std::printf("%u %.6f\n", id, sim);
        std::printf("best match: image %u (similarity %.6f)\n", ranked[0].first,
                    ranked[0].second);
    });

    // ---- eval sweep ----
    auto* eval_cmd = app.add_subcommand("eval", "Evaluation harness");
    eval_cmd->require_subcommand(1);
    auto* sweep = eval_cmd->add_subcommand("sweep", "Accuracy sweep over a trajectory");
    std::string sweep_dir, sweep_n = "4,16,64,256,1024,4096";
    std::string sweep_kinds = "circle", sweep_modes = "fixed", sweep_out;
    std::string sweep_perquery;
    EvalConfig cfg;
    sweep->add_option("--dir", sweep_dir, "Directory of frames in trajectory order")
        ->required();
    sweep->add_option("--stride", cfg.stride, "Training stride in frames");
    sweep->add_option("--tolerance", cfg.tolerance, "Correctness tolerance in frames");
    sweep->add_option("--n", sweep_n, "Comma-separated curve counts");
    sweep->add_option("--kind", sweep_kinds, "Comma-separated curve kinds");
    sweep->add_option("--mode", sweep_modes, "Comma-separated modes (fixed,random)");
    sweep->add_option("--k", cfg.k, "Vocabulary size");
    sweep->add_option("--seed", cfg.seed, "Experiment seed");
    sweep->add_option("--rmin", cfg.r_min, "Minimum circle radius");
    sweep->add_option("--rmax", cfg.r_max, "Maximum circle radius");
    sweep->add_option("--jobs", cfg.jobs, "Worker threads");
    sweep->add_option("-o,--output", sweep_out, "Output report CSV")->required();
    sweep->add_option("--per-query", sweep_perquery, "Per-query CSV output");
    sweep->callback([&] {
        for (const std::string& s : split_csv(sweep_n))
            cfg.n_values.push_back(static_cast<std::uint32_t>(std::stoul(s)));
        for (const std::string& s : split_csv(sweep_kinds))
            cfg.curve_kinds.push_back(parse_kind(s));
        for (const std::string& s : split_csv(sweep_modes))
            cfg.modes.push_back(parse_mode(s));
        EvalReport report = evaluate(sweep_dir, cfg);
        std::string path = out_path(sweep_out);
        write_text(report_csv(report), path);
        if (!sweep_perquery.empty())
            write_text(per_query_csv(report), out_path(sweep_perquery));
        std::printf("wrote %s: %zu rows\n", path.c_str(), report.rows.size());
    });

    // ---- viz kde / viz coverage ----
    auto* viz = app.add_subcommand("viz", "Visualisations");
    viz->require_subcommand(1);
    auto* kde = viz->add_subcommand("kde", "Smoothed extrema-pair density");
    std::string kde_fp, kde_out, kde_csv;
    std::uint32_t kde_res = 256;
    double kde_bw = 0;
    kde->add_option("--fingerprint", kde_fp, "Fingerprint file")->required();
    kde->add_option("--resolution", kde_res, "Grid resolution");
    kde->add_option("--bandwidth", kde_bw, "Explicit kernel bandwidth");
    kde->add_option("-o,--output", kde_out, "Output PGM")->required();
    kde->add_option("--csv", kde_csv, "Optional CSV output");
    kde->callback([&] {
        Fingerprint fp = load_fingerprint_file(kde_fp);
        std::optional<double> bw;
        if (kde->count("--bandwidth")) bw = kde_bw;
        DensityGrid grid = kde_render(fp, kde_res, bw);
        std::string path = out_path(kde_out);
        save_grid_pgm(grid, path);
        if (!kde_csv.empty()) save_grid_csv(grid, out_path(kde_csv));
        std::printf("wrote %s: %ux%u density grid\n", path.c_str(), kde_res, kde_res);
    });

    auto* cov = viz->add_subcommand("coverage", "Extrema location and intensity coverage");
    std::string cov_img, cov_prog, cov_out, cov_report;
    cov->add_option("--image", cov_img, "PNG or PGM image")->required();
    cov->add_option("--program", cov_prog, "Program file")->required();
    cov->add_option("-o,--output", cov_out, "Output mask PGM")->required();
    cov->add_option("--report", cov_report, "Optional text report output");
    cov->callback([&] {
        GrayImage img = load_grayscale(cov_img);
        CameraProgram prog = load_program_file(cov_prog);
        CoverageReport report = coverage_map(img, prog);
        std::string path = out_path(cov_out);
        save_pgm(report.extrema_location_mask, path);
        if (!cov_report.empty()) {
            std::ostringstream os;
            os << "tv_divergence," << report.divergence << "\n";
            os << "intensity,sampled,full\n";
            for (int i = 0; i < 256; ++i)
                os << i << "," << report.sampled_intensity_histogram[i] << ","
                   << report.full_image_histogram[i] << "\n";
            write_text(os.str(), out_path(cov_report));
        }
        std::printf("wrote %s: TV divergence %.4f\n", path.c_str(), report.divergence);
    });

    // ---- census ----
    auto* census = app.add_subcommand("census", "Exhaustive hash-collision census");
    std::string census_prog, census_out;
    std::uint32_t census_w = 3, census_h = 3, census_levels = 4;
    census->add_option("--width", census_w, "Image width");
    census->add_option("--height", census_h, "Image height");
    census->add_option("--levels", census_levels, "Intensity levels");
    census->add_option("--program", census_prog, "Program file")->required();
    census->add_option("-o,--output", census_out, "Output report CSV")->required();
    census->callback([&] {
        CameraProgram prog = load_program_file(census_prog);
        CollisionCensus result = collision_census(census_w, census_h,
                                                  census_levels, prog);
        std::string path = out_path(census_out);
        write_text(census_report_text(result), path);
        std::printf("wrote %s: %llu distinct hashes over %llu images\n",
                    path.c_str(),
                    static_cast<unsigned long long>(result.distinct_hash_count),
                    static_cast<unsigned long long>(result.image_space_size));
    });

    // ---- audit ----
    auto* audit = app.add_subcommand("audit", "Structural leak audit of a fingerprint file");
    std::string audit_file, audit_out;
    std::uint32_t audit_w = 1280, audit_h = 720;
    audit->add_option("--file", audit_file, "Fingerprint file")->required();
    audit->add_option("--width", audit_w, "Source image width");
    audit->add_option("--height", audit_h, "Source image height");
    audit->add_option("-o,--output", audit_out, "Optional report output");
    audit->callback([&] {
        std::ifstream in(audit_file, std::ios::binary);
        if (!in) throw IoError("cannot open: " + audit_file);
        std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
        LeakAudit result = leak_audit(bytes, audit_w, audit_h);
        std::string text = audit_report_text(result);
        if (!audit_out.empty()) write_text(text, out_path(audit_out));
        std::fputs(text.c_str(), stdout);
        std::printf("audit ok: %u pairs, ratio %.6f, no positional fields\n",
                    result.n, result.payload_to_pixel_ratio);
    });

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Write the synthetic panning trajectory");
    std::string synth_dir;
    std::uint32_t synth_frames = 200, synth_size = 512, synth_step = 4;
    std::uint64_t synth_seed = 0;
    synth->add_option("--frames", synth_frames, "Frame count");
    synth->add_option("--size", synth_size, "Square frame side in pixels");
    synth->add_option("--step", synth_step, "Pan step in pixels per frame");
    synth->add_option("--seed", synth_seed, "Texture seed");
    synth->add_option("--dir", synth_dir, "Output directory")->required();
    synth->callback([&] {
        std::string dir = out_path(synth_dir);
        fs::create_directories(dir);
        auto frames = synth_trajectory(synth_frames, synth_size, synth_step,
                                       synth_seed);
        char name[32];
        for (std::size_t i = 0; i < frames.size(); ++i) {
            std::snprintf(name, sizeof name, "frame%04zu.pgm", i);
            save_pgm(frames[i], (fs::path(dir) / name).string());
        }
        std::printf("wrote %zu frames to %s\n", frames.size(), dir.c_str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
