#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pitchwarp/align_core.hpp"
#include "pitchwarp/ctw.hpp"
#include "pitchwarp/curve.hpp"
#include "pitchwarp/shape_sadtw.hpp"

namespace pitchwarp {

/// Synthetic "professional" template: note pitches drawn from a scale,
/// sigmoid transitions, sinusoidal vibrato. Pitches are semitones above
/// kDefaultSemitoneRefHz; emitted curves are Hz.
struct TemplateParams {
    int n_notes = 8;
    int note_len_min = 30;  // frames
    int note_len_max = 55;
    std::vector<double> scale_degrees = {24, 26, 28, 29, 31, 33, 35, 36};
    double vibrato_depth_st = 0.3;
    double vibrato_rate_hz = 5.5;
    int transition_frames = 8;
    double hop_seconds = 128.0 / 22050.0;
};

/// Amateur rendition: piecewise-linear time warp, per-note off-key offsets,
/// slow drift, per-frame jitter.
struct AmateurParams {
    int warp_knots = 6;
    double warp_strength = 1.8;  // segment rates land in [1/s, s]
    double offkey_prob = 0.5;
    double offkey_range_st = 2.0;
    double jitter_st = 0.05;
    double drift_st = 0.4;
};

struct SynthPair {
    PitchCurve tmpl;
    PitchCurve amateur;
    std::vector<int> gt_map;  // per-amateur-frame template index
    std::uint64_t seed = 0;
    TemplateParams template_params;
    AmateurParams amateur_params;
};

/// Pitch alignment accuracy: percentage of frames whose predicted template
/// index lands within `tolerance` frames of the ground truth.
double paa(const AlignmentPath& pred, const std::vector<int>& gt_map, double tolerance = 5.0);
double paa_from_map(const std::vector<int>& pred_map, const std::vector<int>& gt_map,
                    double tolerance = 5.0);

/// RMSE in Hz over frames voiced in both curves.
double f0_rmse(const PitchCurve& a, const PitchCurve& b);

PitchCurve gen_template(const TemplateParams& params, std::uint64_t seed);
/// Variant that also reports the first frame of each note (needed to apply
/// off-key offsets note by note).
PitchCurve gen_template(const TemplateParams& params, std::uint64_t seed,
                        std::vector<int>& note_starts);

/// Detects note-start frames of a synthetic-style contour from sustained
/// runs between steep transitions. Fallback for when the true boundaries of
/// the template are not available.
std::vector<int> detect_note_starts(const PitchCurve& tmpl, double slope_threshold_st = 0.15,
                                    int min_run = 4);

/// Derives the amateur rendition of `tmpl`. `note_starts` empty means
/// boundaries are detected from the curve.
SynthPair gen_amateur(const PitchCurve& tmpl, const AmateurParams& params, std::uint64_t seed,
                      std::vector<int> note_starts = {});

SynthPair make_synth_pair(const TemplateParams& tp, const AmateurParams& ap,
                          std::uint64_t master_seed, std::uint64_t pair_index);

struct BenchmarkParams {
    TemplateParams tmpl;
    AmateurParams amateur;
    int n_pairs = 200;
    std::uint64_t master_seed = 1;
    double tolerance = 5.0;
    std::vector<std::string> algorithms = {"dtw", "ndtw", "ctw", "sadtw"};
    std::vector<std::string> units = {"semitone", "hz"};
    ShapeParams sadtw_params;
    CtwParams ctw_params;
};

struct BenchmarkRow {
    std::string algorithm;
    std::string unit;
    double mean_paa = 0.0;
    double std_paa = 0.0;
};

struct BenchmarkReport {
    BenchmarkParams params;
    std::vector<BenchmarkRow> rows;
    // per_pair[row][pair] mirrors rows
    std::vector<std::vector<double>> per_pair;
    // set when the pairs came from an exported corpus instead of the generator
    std::string corpus_dir;
};

/// Runs every algorithm/unit combination over n_pairs seeded pairs.
/// Pairs are processed in parallel; per-pair seeds come from the master
/// seed by counter, so the report does not depend on thread count.
BenchmarkReport run_benchmark(const BenchmarkParams& params);

/// Scoring core behind run_benchmark, also used for imported corpora.
BenchmarkReport score_synth_pairs(const BenchmarkParams& params,
                                  const std::vector<SynthPair>& pairs);

/// Aligns `amateur` to `tmpl` with one of dtw|ndtw|ctw|sadtw.
AlignmentPath align_with(const std::string& algorithm, const PitchCurve& amateur,
                         const PitchCurve& tmpl, const ShapeParams& sadtw_params = {},
                         const CtwParams& ctw_params = {});

}  // namespace pitchwarp
