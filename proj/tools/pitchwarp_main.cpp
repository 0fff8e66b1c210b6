// Command-line front end for the pitch-curve alignment toolkit.
// Exit codes: 0 success, 2 usage/input error, 1 internal error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pitchwarp/curve.hpp"
#include "pitchwarp/eval_synth.hpp"
#include "pitchwarp/io.hpp"
#include "pitchwarp/pitch_extract.hpp"
#include "pitchwarp/plot.hpp"
#include "pitchwarp/shape_sadtw.hpp"
#include "pitchwarp/warp_apply.hpp"

namespace pw = pitchwarp;
namespace fs = std::filesystem;

namespace {

struct CurveLoadOptions {
    double csv_hop = 128.0 / 22050.0;
    std::string csv_unit = "hz";
};

pw::PitchCurve load_curve(const fs::path& file, const CurveLoadOptions& opts) {
    if (file.extension() == ".csv")
        return pw::io::read_curve_csv(file, opts.csv_hop, pw::io::unit_from_name(opts.csv_unit));
    return pw::io::read_curve_json(file);
}

void add_template_flags(CLI::App* cmd, pw::TemplateParams& p) {
    cmd->add_option("--n-notes", p.n_notes, "notes per template")->capture_default_str();
    cmd->add_option("--note-len-min", p.note_len_min, "shortest note, frames")->capture_default_str();
    cmd->add_option("--note-len-max", p.note_len_max, "longest note, frames")->capture_default_str();
    cmd->add_option("--scale-degrees", p.scale_degrees,
                    "note pitches, semitones above 55 Hz")->capture_default_str();
    cmd->add_option("--vibrato-depth", p.vibrato_depth_st, "vibrato depth, semitones")->capture_default_str();
    cmd->add_option("--vibrato-rate", p.vibrato_rate_hz, "vibrato rate, Hz")->capture_default_str();
    cmd->add_option("--transition-frames", p.transition_frames, "note transition half-width")->capture_default_str();
    cmd->add_option("--hop-seconds", p.hop_seconds, "frame hop, seconds")->capture_default_str();
}

void add_amateur_flags(CLI::App* cmd, pw::AmateurParams& p) {
    cmd->add_option("--warp-knots", p.warp_knots, "interior warp knots")->capture_default_str();
    cmd->add_option("--warp-strength", p.warp_strength, "max local tempo ratio")->capture_default_str();
    cmd->add_option("--offkey-prob", p.offkey_prob, "per-note off-key probability")->capture_default_str();
    cmd->add_option("--offkey-range", p.offkey_range_st, "off-key range, semitones")->capture_default_str();
    cmd->add_option("--jitter", p.jitter_st, "per-frame jitter sigma, semitones")->capture_default_str();
    cmd->add_option("--drift", p.drift_st, "slow drift amplitude, semitones")->capture_default_str();
}

void add_sadtw_flags(CLI::App* cmd, pw::ShapeParams& p, std::string& freq_scale,
                     double& fixed_scale) {
    cmd->add_option("--time-windows", p.time_windows, "descriptor time windows")->capture_default_str();
    cmd->add_option("--angle-bins", p.angle_bins, "descriptor angle bins")->capture_default_str();
    cmd->add_option("--half-width", p.half_width, "descriptor neighborhood, frames")->capture_default_str();
    cmd->add_option("--freq-scale", freq_scale, "frequency axis scale")
        ->check(CLI::IsMember({"robust_std", "fixed"}))
        ->capture_default_str();
    cmd->add_option("--fixed-scale", fixed_scale, "scale value when --freq-scale fixed")
        ->capture_default_str();
}

void add_ctw_flags(CLI::App* cmd, pw::CtwParams& p) {
    cmd->add_option("--embed-dim", p.dim, "delay embedding dimension")->capture_default_str();
    cmd->add_option("--lag", p.lag, "delay embedding lag, frames")->capture_default_str();
    cmd->add_option("--components", p.components, "CCA components")->capture_default_str();
    cmd->add_option("--reg", p.reg, "CCA ridge")->capture_default_str();
    cmd->add_option("--max-iter", p.max_iter, "CCA/DTW alternations")->capture_default_str();
}

pw::FreqScale resolve_scale_flag(const std::string& freq_scale, double fixed_scale) {
    return freq_scale == "fixed" ? pw::FreqScale::fixed(fixed_scale)
                                 : pw::FreqScale::robust_std();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pitchwarp - pitch-curve time warping toolkit"};
    app.require_subcommand(1);

    // ---- extract-f0 ----
    auto* cmd_extract = app.add_subcommand("extract-f0", "extract an F0 curve from a mono WAV");
    std::string wav_path, extract_out, extract_format = "json";
    pw::YinParams yin;
    cmd_extract->add_option("wav", wav_path, "input WAV (PCM 16-bit mono)")->required();
    cmd_extract->add_option("out", extract_out, "output curve file")->required();
    cmd_extract->add_option("--frame-size", yin.frame_size, "analysis frame, samples")->capture_default_str();
    cmd_extract->add_option("--hop-size", yin.hop_size, "hop, samples")->capture_default_str();
    cmd_extract->add_option("--f0-min", yin.f0_min, "lowest F0, Hz")->capture_default_str();
    cmd_extract->add_option("--f0-max", yin.f0_max, "highest F0, Hz")->capture_default_str();
    cmd_extract->add_option("--voicing-threshold", yin.voicing_threshold,
                            "normalized-difference voicing threshold")->capture_default_str();
    cmd_extract->add_option("--format", extract_format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd_extract->callback([&] {
        const pw::Waveform wav = pw::io::read_wav_mono16(wav_path);
        const pw::PitchCurve curve = pw::extract_f0(wav, yin);
        if (extract_format == "csv")
            pw::io::write_curve_csv(extract_out, curve);
        else
            pw::io::write_curve_json(extract_out, curve);
        std::size_t voiced = 0;
        for (auto v : curve.voiced) voiced += v;
        std::fprintf(stderr, "%zu frames (%zu voiced) -> %s\n", curve.size(), voiced,
                     extract_out.c_str());
    });

    // ---- align ----
    auto* cmd_align = app.add_subcommand("align", "align an amateur curve to a template curve");
    std::string curve_a_path, curve_p_path, algo, align_out, plot_path, cost_image_path;
    bool to_semitones = false;
    double ref_hz = pw::kDefaultSemitoneRefHz;
    double band = 0.0;
    CurveLoadOptions load_opts;
    pw::ShapeParams shape_params;
    std::string freq_scale_flag = "robust_std";
    double fixed_scale = 1.0;
    pw::CtwParams ctw_params;
    cmd_align->add_option("curve_a", curve_a_path, "amateur curve (json or csv)")->required();
    cmd_align->add_option("curve_p", curve_p_path, "template curve (json or csv)")->required();
    cmd_align->add_option("--algo", algo, "alignment algorithm")
        ->check(CLI::IsMember({"dtw", "ndtw", "ctw", "sadtw"}))
        ->required();
    cmd_align->add_option("--out", align_out, "output path json")->required();
    cmd_align->add_option("--plot", plot_path, "write an SVG overlay of curves and warp");
    cmd_align->add_option("--cost-image", cost_image_path,
                          "write the local cost matrix as a PGM image (not for ctw)");
    std::string desc_a_path, desc_p_path;
    cmd_align->add_option("--dump-descriptors-a", desc_a_path,
                          "write the amateur shape descriptors as a JSON array (sadtw)");
    cmd_align->add_option("--dump-descriptors-p", desc_p_path,
                          "write the template shape descriptors as a JSON array (sadtw)");
    cmd_align->add_flag("--semitones", to_semitones, "convert curves to semitones first");
    cmd_align->add_option("--ref-hz", ref_hz, "semitone reference")->capture_default_str();
    cmd_align->add_option("--band", band, "Sakoe-Chiba band fraction for dtw/ndtw (0 = off)")
        ->capture_default_str();
    cmd_align->add_option("--csv-hop", load_opts.csv_hop, "hop seconds for csv input")->capture_default_str();
    cmd_align->add_option("--csv-unit", load_opts.csv_unit, "unit for csv input")
        ->check(CLI::IsMember({"hz", "semitone"}))->capture_default_str();
    add_sadtw_flags(cmd_align, shape_params, freq_scale_flag, fixed_scale);
    add_ctw_flags(cmd_align, ctw_params);
    cmd_align->callback([&] {
        pw::PitchCurve a = load_curve(curve_a_path, load_opts);
        pw::PitchCurve p = load_curve(curve_p_path, load_opts);
        a = pw::interpolate_unvoiced(a);
        p = pw::interpolate_unvoiced(p);
        if (to_semitones) {
            a = pw::hz_to_semitones(a, ref_hz);
            p = pw::hz_to_semitones(p, ref_hz);
        }
        shape_params.freq_scale = resolve_scale_flag(freq_scale_flag, fixed_scale);

        nlohmann::json meta;
        meta["algorithm"] = algo;
        meta["unit"] = pw::io::unit_name(a.unit);
        pw::AlignmentPath path;
        if (algo == "sadtw") {
            path = pw::sadtw(a, p, shape_params);
            meta["params"] = {{"time_windows", shape_params.time_windows},
                              {"angle_bins", shape_params.angle_bins},
                              {"half_width", shape_params.half_width},
                              {"freq_scale", freq_scale_flag == "fixed"
                                                 ? nlohmann::json(fixed_scale)
                                                 : nlohmann::json("robust_std")}};
        } else if (algo == "ctw") {
            const pw::CtwResult res = pw::ctw_align(a, p, ctw_params);
            path = res.path;
            meta["params"] = {{"dim", ctw_params.dim},
                              {"lag", ctw_params.lag},
                              {"components", ctw_params.components},
                              {"reg", ctw_params.reg},
                              {"max_iter", ctw_params.max_iter}};
            meta["iterations"] = res.iterations;
            meta["converged"] = res.converged;
        } else {
            const pw::DtwOptions options{band};
            const bool normed = algo == "ndtw";
            path = pw::dtw(pw::euclidean_cost(normed ? pw::z_normalize(a) : a,
                                              normed ? pw::z_normalize(p) : p),
                           options);
            if (band > 0.0) meta["band_fraction"] = band;
        }
        pw::io::write_path_json(align_out, path, meta);

        if (!desc_a_path.empty() || !desc_p_path.empty()) {
            if (algo != "sadtw")
                throw std::invalid_argument("--dump-descriptors-* requires --algo sadtw");
            if (!desc_a_path.empty())
                pw::io::write_descriptors_json(desc_a_path, pw::shape_descriptors(a, shape_params));
            if (!desc_p_path.empty())
                pw::io::write_descriptors_json(desc_p_path, pw::shape_descriptors(p, shape_params));
        }
        if (!cost_image_path.empty()) {
            if (algo == "sadtw") {
                pw::io::write_cost_pgm(cost_image_path, pw::sadtw_cost_matrix(a, p, shape_params));
            } else if (algo == "dtw") {
                pw::io::write_cost_pgm(cost_image_path, pw::euclidean_cost(a, p));
            } else if (algo == "ndtw") {
                pw::io::write_cost_pgm(cost_image_path,
                                       pw::euclidean_cost(pw::z_normalize(a), pw::z_normalize(p)));
            } else {
                throw std::invalid_argument("--cost-image is not available for ctw");
            }
        }
        if (!plot_path.empty()) pw::io::write_alignment_svg(plot_path, a, p, path);
        std::fprintf(stderr, "%s: %zu pairs, total cost %.6g -> %s\n", algo.c_str(),
                     path.pairs.size(), path.total_cost, align_out.c_str());
    });

    // ---- eval ----
    auto* cmd_eval = app.add_subcommand("eval", "score a path against a ground-truth map (PAA)");
    std::string eval_path_file, eval_gt_file, eval_out;
    double tolerance = 5.0;
    cmd_eval->add_option("path", eval_path_file, "alignment path json")->required();
    cmd_eval->add_option("gt", eval_gt_file, "ground-truth map json")->required();
    cmd_eval->add_option("--tolerance", tolerance, "hit tolerance, frames")->capture_default_str();
    cmd_eval->add_option("--out", eval_out, "also write the result json here");
    cmd_eval->callback([&] {
        const pw::AlignmentPath path = pw::io::read_path_json(eval_path_file);
        const std::vector<int> gt = pw::io::read_gt_map(eval_gt_file);
        const double score = pw::paa(path, gt, tolerance);
        nlohmann::json j{{"paa", score}, {"tolerance_frames", tolerance}, {"frames", gt.size()}};
        std::printf("PAA = %.2f%% (tolerance %.1f frames, %zu frames)\n", score, tolerance,
                    gt.size());
        std::printf("%s\n", j.dump().c_str());
        if (!eval_out.empty()) {
            std::ofstream out(eval_out);
            out << j.dump(2) << "\n";
        }
    });

    // ---- synth ----
    auto* cmd_synth = app.add_subcommand("synth", "generate synthetic template/amateur pairs");
    pw::TemplateParams tmpl_params;
    pw::AmateurParams amateur_params;
    std::uint64_t seed = 0;
    int n_pairs = 1;
    std::string synth_out;
    cmd_synth->add_option("--seed", seed, "master seed")->required();
    cmd_synth->add_option("--n-pairs", n_pairs, "number of pairs")->capture_default_str();
    cmd_synth->add_option("--out", synth_out, "output directory")->required();
    add_template_flags(cmd_synth, tmpl_params);
    add_amateur_flags(cmd_synth, amateur_params);
    cmd_synth->callback([&] {
        if (n_pairs < 1) throw std::invalid_argument("--n-pairs must be >= 1");
        for (int i = 0; i < n_pairs; ++i) {
            const pw::SynthPair pair = pw::make_synth_pair(tmpl_params, amateur_params, seed,
                                                           static_cast<std::uint64_t>(i));
            char name[32];
            std::snprintf(name, sizeof name, "pair_%05d", i);
            pw::io::write_synth_pair(fs::path(synth_out) / name, pair);
        }
        std::fprintf(stderr, "wrote %d pairs under %s\n", n_pairs, synth_out.c_str());
    });

    // ---- warp ----
    auto* cmd_warp = app.add_subcommand("warp", "warp per-frame features through a path");
    std::string features_file, warp_path_file, warp_out, warp_format = "auto", agg = "mean";
    cmd_warp->add_option("features", features_file, "feature matrix (csv or PWF1 binary)")
        ->required();
    cmd_warp->add_option("path", warp_path_file, "alignment path json")->required();
    cmd_warp->add_option("--out", warp_out, "output feature file")->required();
    cmd_warp->add_option("--format", warp_format, "output format")
        ->check(CLI::IsMember({"auto", "csv", "bin"}))
        ->capture_default_str();
    cmd_warp->add_option("--agg", agg, "many-to-one aggregation")
        ->check(CLI::IsMember({"mean", "nearest"}))
        ->capture_default_str();
    cmd_warp->callback([&] {
        const pw::FeatureMatrix features = pw::io::read_features_auto(features_file);
        const pw::AlignmentPath path = pw::io::read_path_json(warp_path_file);
        const std::size_t target = static_cast<std::size_t>(path.pairs.back().second) + 1;
        const pw::FeatureMatrix warped =
            pw::warp_features(features, path, target,
                              agg == "nearest" ? pw::WarpAggregation::Nearest
                                               : pw::WarpAggregation::Mean);
        const bool bin = warp_format == "bin" ||
                         (warp_format == "auto" && fs::path(warp_out).extension() == ".bin");
        if (bin)
            pw::io::write_features_bin(warp_out, warped);
        else
            pw::io::write_features_csv(warp_out, warped);
        std::fprintf(stderr, "warped %zu -> %zu frames (dim %zu) -> %s\n", features.frames,
                     warped.frames, warped.dim, warp_out.c_str());
    });

    // ---- bench ----
    auto* cmd_bench = app.add_subcommand("bench", "run the synthetic alignment benchmark");
    pw::BenchmarkParams bench;
    std::string bench_out;
    int threads = 0;
    std::string bench_freq_scale = "robust_std";
    double bench_fixed_scale = 1.0;
    std::string bench_corpus;
    auto* bench_seed_opt =
        cmd_bench->add_option("--seed", bench.master_seed, "master seed (generated corpus)");
    cmd_bench->add_option("--corpus", bench_corpus,
                          "score an exported pair_* directory instead of generating");
    cmd_bench->add_option("--n", bench.n_pairs, "number of pairs")->capture_default_str();
    cmd_bench->add_option("--algos", bench.algorithms, "algorithms to run")
        ->delimiter(',')->capture_default_str();
    cmd_bench->add_option("--units", bench.units, "curve units to evaluate")
        ->delimiter(',')->capture_default_str();
    cmd_bench->add_option("--tolerance", bench.tolerance, "PAA tolerance, frames")
        ->capture_default_str();
    cmd_bench->add_option("--threads", threads, "worker threads (0 = runtime default)")
        ->capture_default_str();
    cmd_bench->add_option("--out", bench_out, "write the report json here");
    add_template_flags(cmd_bench, bench.tmpl);
    add_amateur_flags(cmd_bench, bench.amateur);
    add_sadtw_flags(cmd_bench, bench.sadtw_params, bench_freq_scale, bench_fixed_scale);
    add_ctw_flags(cmd_bench, bench.ctw_params);
    cmd_bench->callback([&] {
        if (bench_corpus.empty() && bench_seed_opt->count() == 0)
            throw CLI::RequiredError("--seed (or --corpus)");
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        bench.sadtw_params.freq_scale = resolve_scale_flag(bench_freq_scale, bench_fixed_scale);
        const pw::BenchmarkReport report = bench_corpus.empty()
                                               ? pw::run_benchmark(bench)
                                               : pw::io::run_benchmark_on_dir(bench_corpus, bench);
        std::printf("%s", pw::io::render_report_text(report).c_str());
        if (!bench_out.empty()) pw::io::write_report_json(bench_out, report);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
