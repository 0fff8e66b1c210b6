#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pitchwarp/align_core.hpp"
#include "pitchwarp/curve.hpp"
#include "pitchwarp/eval_synth.hpp"
#include "pitchwarp/pitch_extract.hpp"
#include "pitchwarp/shape_sadtw.hpp"
#include "pitchwarp/warp_apply.hpp"

namespace pitchwarp::io {

std::string unit_name(Unit unit);
Unit unit_from_name(const std::string& name);

// --- pitch curves ---------------------------------------------------------
// JSON round-trips bit-exactly; CSV keeps 6 decimals and carries no
// hop/unit, so readers supply them.

nlohmann::json curve_to_json(const PitchCurve& curve);
PitchCurve curve_from_json(const nlohmann::json& j);
void write_curve_json(const std::filesystem::path& file, const PitchCurve& curve);
PitchCurve read_curve_json(const std::filesystem::path& file);

void write_curve_csv(const std::filesystem::path& file, const PitchCurve& curve);
PitchCurve read_curve_csv(const std::filesystem::path& file, double hop_seconds,
                          Unit unit = Unit::Hz);

// --- alignment paths ------------------------------------------------------

nlohmann::json path_to_json(const AlignmentPath& path,
                            const nlohmann::json& metadata = nlohmann::json());
AlignmentPath path_from_json(const nlohmann::json& j);
void write_path_json(const std::filesystem::path& file, const AlignmentPath& path,
                     const nlohmann::json& metadata = nlohmann::json());
AlignmentPath read_path_json(const std::filesystem::path& file);

// --- feature matrices -----------------------------------------------------
// CSV: one frame per row, comma-separated, shortest round-trip formatting.
// Binary: "PWF1" magic, u32 frames, u32 dim, little-endian f32 row-major.

void write_features_csv(const std::filesystem::path& file, const FeatureMatrix& features);
FeatureMatrix read_features_csv(const std::filesystem::path& file);
void write_features_bin(const std::filesystem::path& file, const FeatureMatrix& features);
FeatureMatrix read_features_bin(const std::filesystem::path& file);

/// Loads either format, keyed on the magic bytes.
FeatureMatrix read_features_auto(const std::filesystem::path& file);

// --- audio ----------------------------------------------------------------

/// 16-bit PCM mono WAV. Multi-channel, non-PCM or non-16-bit input is
/// rejected with a descriptive error.
Waveform read_wav_mono16(const std::filesystem::path& file);
void write_wav_mono16(const std::filesystem::path& file, const Waveform& wav);

// --- descriptors ----------------------------------------------------------

void write_descriptors_json(const std::filesystem::path& file, const DescriptorSet& set);

// --- synthetic corpus -----------------------------------------------------

nlohmann::json template_params_to_json(const TemplateParams& p);
nlohmann::json amateur_params_to_json(const AmateurParams& p);

/// Writes template.json, amateur.json and gt.json into `dir`.
void write_synth_pair(const std::filesystem::path& dir, const SynthPair& pair);

/// Reads a ground-truth map from gt.json ({"gt_map": [...]}) or a bare
/// JSON array.
std::vector<int> read_gt_map(const std::filesystem::path& file);

/// Loads every pair_* subdirectory written by write_synth_pair (or by an
/// external tool following the same layout).
std::vector<SynthPair> read_synth_corpus(const std::filesystem::path& dir);

/// Scores an exported corpus with the benchmark harness. Generator fields
/// of `params` are ignored; algorithms/units/tolerance apply.
BenchmarkReport run_benchmark_on_dir(const std::filesystem::path& dir,
                                     const BenchmarkParams& params);

// --- benchmark reports ----------------------------------------------------

nlohmann::json report_to_json(const BenchmarkReport& report);
std::string render_report_text(const BenchmarkReport& report);
void write_report_json(const std::filesystem::path& file, const BenchmarkReport& report);

}  // namespace pitchwarp::io
