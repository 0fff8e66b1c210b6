#include "pitchwarp/eval_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pitchwarp/rng.hpp"

namespace pitchwarp {

namespace {

constexpr double kRefHz = kDefaultSemitoneRefHz;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double st_to_hz(double st) { return kRefHz * std::exp2(st / 12.0); }
double hz_to_st(double hz) { return 12.0 * std::log2(hz / kRefHz); }

}  // namespace

double paa_from_map(const std::vector<int>& pred_map, const std::vector<int>& gt_map,
                    double tolerance) {
    if (pred_map.size() != gt_map.size())
        throw std::invalid_argument("paa: predicted map and ground truth differ in length");
    if (pred_map.empty()) throw std::invalid_argument("paa: empty maps");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred_map.size(); ++i)
        if (std::abs(pred_map[i] - gt_map[i]) <= tolerance) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(pred_map.size());
}

double paa(const AlignmentPath& pred, const std::vector<int>& gt_map, double tolerance) {
    return paa_from_map(path_to_map(pred, MapDirection::AmateurToTemplate), gt_map, tolerance);
}

double f0_rmse(const PitchCurve& a, const PitchCurve& b) {
    if (a.size() != b.size()) throw std::invalid_argument("f0_rmse: curve lengths differ");
    if (a.unit != Unit::Hz || b.unit != Unit::Hz)
        throw std::invalid_argument("f0_rmse: both curves must be in Hz");
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.voiced[i] && b.voiced[i]) {
            const double d = a.values[i] - b.values[i];
            acc += d * d;
            ++n;
        }
    }
    if (n == 0) throw std::invalid_argument("f0_rmse: no frames voiced in both curves");
    return std::sqrt(acc / static_cast<double>(n));
}

namespace {

void check_template_params(const TemplateParams& p) {
    if (p.n_notes < 1) throw std::invalid_argument("gen_template: n_notes must be >= 1");
    if (p.note_len_min < 1 || p.note_len_max < p.note_len_min)
        throw std::invalid_argument("gen_template: bad note length range");
    if (p.scale_degrees.empty())
        throw std::invalid_argument("gen_template: scale_degrees must be nonempty");
    if (p.transition_frames < 0)
        throw std::invalid_argument("gen_template: transition_frames must be >= 0");
    if (!(p.hop_seconds > 0.0))
        throw std::invalid_argument("gen_template: hop_seconds must be positive");
    if (p.vibrato_depth_st < 0.0 || p.vibrato_rate_hz < 0.0)
        throw std::invalid_argument("gen_template: vibrato parameters must be >= 0");
}

}  // namespace

PitchCurve gen_template(const TemplateParams& params, std::uint64_t seed,
                        std::vector<int>& note_starts) {
    check_template_params(params);
    Rng rng(seed);

    const int n_scale = static_cast<int>(params.scale_degrees.size());
    constexpr int kMaxStepDegrees = 3;  // melodies move mostly stepwise
    std::vector<double> pitches(params.n_notes);
    std::vector<int> lengths(params.n_notes);
    int prev_idx = -1;
    for (int k = 0; k < params.n_notes; ++k) {
        int idx;
        if (prev_idx < 0 || n_scale == 1) {
            idx = rng.uniform_int(0, n_scale - 1);
        } else {
            const int lo = std::max(0, prev_idx - kMaxStepDegrees);
            const int hi = std::min(n_scale - 1, prev_idx + kMaxStepDegrees);
            idx = rng.uniform_int(lo, hi - 1);  // skip the previous degree
            if (idx >= prev_idx) ++idx;
        }
        prev_idx = idx;
        pitches[k] = params.scale_degrees[static_cast<std::size_t>(idx)];
        lengths[k] = rng.uniform_int(params.note_len_min, params.note_len_max);
    }

    note_starts.assign(1, 0);
    for (int k = 0; k + 1 < params.n_notes; ++k) note_starts.push_back(note_starts.back() + lengths[k]);
    const int total = note_starts.back() + lengths.back();

    std::vector<double> st(total);
    for (int k = 0; k < params.n_notes; ++k) {
        const int start = note_starts[static_cast<std::size_t>(k)];
        for (int f = start; f < start + lengths[k]; ++f) st[static_cast<std::size_t>(f)] = pitches[k];
    }

    const int T = params.transition_frames;
    if (T > 0) {
        for (int k = 1; k < params.n_notes; ++k) {
            const int b = note_starts[static_cast<std::size_t>(k)];
            const double lo = pitches[k - 1], hi = pitches[k];
            const int left = std::max(b - T, note_starts[static_cast<std::size_t>(k - 1)]);
            const int right = std::min(b + T, b + lengths[k]) - 1;
            for (int f = left; f <= right; ++f) {
                const double z = (static_cast<double>(f) + 0.5 - b) / T;
                const double w = 1.0 / (1.0 + std::exp(-6.0 * z));
                st[static_cast<std::size_t>(f)] = lo + (hi - lo) * w;
            }
        }
    }

    const double phase = rng.uniform(0.0, kTwoPi);
    if (params.vibrato_depth_st > 0.0) {
        for (int f = 0; f < total; ++f)
            st[static_cast<std::size_t>(f)] += params.vibrato_depth_st *
                std::sin(kTwoPi * params.vibrato_rate_hz * f * params.hop_seconds + phase);
    }

    PitchCurve curve;
    curve.hop_seconds = params.hop_seconds;
    curve.unit = Unit::Hz;
    curve.values.resize(static_cast<std::size_t>(total));
    curve.voiced.assign(static_cast<std::size_t>(total), 1);
    for (int f = 0; f < total; ++f) curve.values[static_cast<std::size_t>(f)] = st_to_hz(st[static_cast<std::size_t>(f)]);
    return curve;
}

PitchCurve gen_template(const TemplateParams& params, std::uint64_t seed) {
    std::vector<int> starts;
    return gen_template(params, seed, starts);
}

std::vector<int> detect_note_starts(const PitchCurve& tmpl, double slope_threshold_st,
                                    int min_run) {
    const std::size_t n = tmpl.size();
    std::vector<double> st(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double v = tmpl.values[j];
        st[j] = tmpl.unit == Unit::Semitone ? v : hz_to_st(std::max(v, 1e-6));
    }
    std::vector<int> starts{0};
    std::size_t t = 0;
    while (n >= 2 && t < n - 1) {
        if (std::fabs(st[t + 1] - st[t]) > slope_threshold_st) {
            while (t < n - 1 && std::fabs(st[t + 1] - st[t]) > slope_threshold_st) ++t;
            if (t < n && static_cast<int>(t) - starts.back() >= min_run)
                starts.push_back(static_cast<int>(t));
        } else {
            ++t;
        }
    }
    return starts;
}

SynthPair gen_amateur(const PitchCurve& tmpl, const AmateurParams& params, std::uint64_t seed,
                      std::vector<int> note_starts) {
    if (tmpl.empty()) throw std::invalid_argument("gen_amateur: empty template");
    if (tmpl.unit != Unit::Hz) throw std::invalid_argument("gen_amateur: template must be in Hz");
    for (double v : tmpl.values)
        if (!(v > 0.0))
            throw std::invalid_argument("gen_amateur: template must be gap-free (all F0 > 0)");
    if (note_starts.empty()) note_starts = detect_note_starts(tmpl);

    const int np = static_cast<int>(tmpl.size());
    Rng rng(seed);

    std::vector<double> st_t(static_cast<std::size_t>(np));
    for (int j = 0; j < np; ++j) st_t[static_cast<std::size_t>(j)] = hz_to_st(tmpl.values[static_cast<std::size_t>(j)]);

    // Piecewise-linear warp from amateur frame index to template position.
    const double strength = std::max(1.0, params.warp_strength);
    const int segments = std::max(0, params.warp_knots) + 1;
    std::vector<double> weights(static_cast<std::size_t>(segments));
    std::vector<double> rates(static_cast<std::size_t>(segments));
    double weight_sum = 0.0;
    for (int s = 0; s < segments; ++s) {
        weights[static_cast<std::size_t>(s)] = 0.2 + rng.uniform();
        weight_sum += weights[static_cast<std::size_t>(s)];
    }
    const double log_s = std::log(strength);
    for (int s = 0; s < segments; ++s) rates[static_cast<std::size_t>(s)] = std::exp(rng.uniform(-log_s, log_s));

    const double tmpl_span = static_cast<double>(np - 1);
    std::vector<double> tmpl_anchor(static_cast<std::size_t>(segments) + 1, 0.0);
    std::vector<double> amateur_len(static_cast<std::size_t>(segments));
    double amateur_total = 0.0;
    for (int s = 0; s < segments; ++s) {
        const double seg = weights[static_cast<std::size_t>(s)] / weight_sum * tmpl_span;
        tmpl_anchor[static_cast<std::size_t>(s) + 1] = tmpl_anchor[static_cast<std::size_t>(s)] + seg;
        amateur_len[static_cast<std::size_t>(s)] = rates[static_cast<std::size_t>(s)] > 0.0 ? seg / rates[static_cast<std::size_t>(s)] : seg;
        amateur_total += amateur_len[static_cast<std::size_t>(s)];
    }
    tmpl_anchor.back() = tmpl_span;

    int na = np == 1 ? 1 : std::max<int>(2, static_cast<int>(std::lround(amateur_total)) + 1);
    std::vector<double> amateur_anchor(static_cast<std::size_t>(segments) + 1, 0.0);
    if (np > 1) {
        const double scale = static_cast<double>(na - 1) / amateur_total;
        double acc = 0.0;
        for (int s = 0; s < segments; ++s) {
            acc += amateur_len[static_cast<std::size_t>(s)];
            amateur_anchor[static_cast<std::size_t>(s) + 1] = acc * scale;
        }
        amateur_anchor.back() = static_cast<double>(na - 1);
    }

    SynthPair pair;
    pair.seed = seed;
    pair.tmpl = tmpl;
    pair.amateur.hop_seconds = tmpl.hop_seconds;
    pair.amateur.unit = Unit::Hz;
    pair.amateur.values.resize(static_cast<std::size_t>(na));
    pair.amateur.voiced.assign(static_cast<std::size_t>(na), 1);
    pair.gt_map.resize(static_cast<std::size_t>(na));

    // Per-note off-key offsets; a fixed number of draws per note keeps the
    // stream layout stable across parameter settings.
    std::vector<double> note_offset(note_starts.size(), 0.0);
    for (std::size_t k = 0; k < note_starts.size(); ++k) {
        const bool apply = rng.uniform() < params.offkey_prob;
        double delta = rng.uniform(-params.offkey_range_st, params.offkey_range_st);
        const bool quantize = rng.uniform() < 0.5;
        if (quantize) delta = std::round(delta);
        note_offset[k] = apply ? delta : 0.0;
    }
    const double drift_freq = rng.uniform(0.05, 0.15);
    const double drift_phase = rng.uniform(0.0, kTwoPi);

    int seg = 0;
    for (int i = 0; i < na; ++i) {
        double phi;
        if (np == 1) {
            phi = 0.0;
        } else if (i == na - 1) {
            phi = tmpl_span;
        } else {
            while (seg + 1 < segments && static_cast<double>(i) > amateur_anchor[static_cast<std::size_t>(seg) + 1])
                ++seg;
            const double a0 = amateur_anchor[static_cast<std::size_t>(seg)];
            const double a1 = amateur_anchor[static_cast<std::size_t>(seg) + 1];
            const double t0 = tmpl_anchor[static_cast<std::size_t>(seg)];
            const double t1 = tmpl_anchor[static_cast<std::size_t>(seg) + 1];
            phi = a1 > a0 ? t0 + (static_cast<double>(i) - a0) * (t1 - t0) / (a1 - a0) : t0;
        }
        const long rounded = std::lround(phi);
        pair.gt_map[static_cast<std::size_t>(i)] =
            static_cast<int>(std::clamp<long>(rounded, 0, np - 1));

        const bool snapped = std::fabs(phi - static_cast<double>(rounded)) < 1e-9;
        double base_st;
        if (snapped) {
            base_st = st_t[static_cast<std::size_t>(pair.gt_map[static_cast<std::size_t>(i)])];
        } else {
            const int f0 = static_cast<int>(std::floor(phi));
            const int f1 = std::min(f0 + 1, np - 1);
            const double frac = phi - f0;
            base_st = st_t[static_cast<std::size_t>(f0)] * (1.0 - frac) + st_t[static_cast<std::size_t>(f1)] * frac;
        }

        const auto note_it = std::upper_bound(note_starts.begin(), note_starts.end(), phi);
        const std::size_t note = static_cast<std::size_t>(std::distance(note_starts.begin(), note_it)) - 1;
        const double drift =
            params.drift_st * std::sin(kTwoPi * drift_freq * i * tmpl.hop_seconds + drift_phase);
        const double jitter = params.jitter_st * rng.normal();
        const double delta = note_offset[note] + drift + jitter;

        pair.amateur.values[static_cast<std::size_t>(i)] =
            (snapped && delta == 0.0)
                ? tmpl.values[static_cast<std::size_t>(pair.gt_map[static_cast<std::size_t>(i)])]
                : st_to_hz(base_st + delta);
    }
    pair.amateur_params = params;
    return pair;
}

SynthPair make_synth_pair(const TemplateParams& tp, const AmateurParams& ap,
                          std::uint64_t master_seed, std::uint64_t pair_index) {
    const std::uint64_t pair_seed = derive_seed(master_seed, pair_index);
    std::vector<int> note_starts;
    const PitchCurve tmpl = gen_template(tp, splitmix64(pair_seed + 1), note_starts);
    SynthPair pair = gen_amateur(tmpl, ap, splitmix64(pair_seed + 2), std::move(note_starts));
    pair.seed = pair_seed;
    pair.template_params = tp;
    return pair;
}

AlignmentPath align_with(const std::string& algorithm, const PitchCurve& amateur,
                         const PitchCurve& tmpl, const ShapeParams& sadtw_params,
                         const CtwParams& ctw_params) {
    if (algorithm == "dtw") return dtw(euclidean_cost(amateur, tmpl));
    if (algorithm == "ndtw") return dtw(euclidean_cost(z_normalize(amateur), z_normalize(tmpl)));
    if (algorithm == "ctw") return ctw_align(amateur, tmpl, ctw_params).path;
    if (algorithm == "sadtw") return sadtw(amateur, tmpl, sadtw_params);
    throw std::invalid_argument("unknown algorithm '" + algorithm +
                                "' (expected dtw, ndtw, ctw or sadtw)");
}

BenchmarkReport score_synth_pairs(const BenchmarkParams& params,
                                  const std::vector<SynthPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("run_benchmark: no pairs to score");
    for (const auto& unit : params.units)
        if (unit != "hz" && unit != "semitone")
            throw std::invalid_argument("run_benchmark: unknown unit '" + unit + "'");
    for (const auto& algo : params.algorithms)
        if (algo != "dtw" && algo != "ndtw" && algo != "ctw" && algo != "sadtw")
            throw std::invalid_argument("run_benchmark: unknown algorithm '" + algo + "'");

    BenchmarkReport report;
    report.params = params;
    report.params.n_pairs = static_cast<int>(pairs.size());
    for (const auto& algo : params.algorithms)
        for (const auto& unit : params.units)
            report.rows.push_back({algo, unit, 0.0, 0.0});
    report.per_pair.assign(report.rows.size(), std::vector<double>(pairs.size(), 0.0));

    std::string error;
    const long n_pairs = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < n_pairs; ++idx) {
        try {
            const SynthPair& pair = pairs[static_cast<std::size_t>(idx)];
            const PitchCurve amateur_st = hz_to_semitones(pair.amateur);
            const PitchCurve tmpl_st = hz_to_semitones(pair.tmpl);
            std::size_t row = 0;
            for (const auto& algo : params.algorithms) {
                for (const auto& unit : params.units) {
                    const bool hz = unit == "hz";
                    const AlignmentPath path =
                        align_with(algo, hz ? pair.amateur : amateur_st, hz ? pair.tmpl : tmpl_st,
                                   params.sadtw_params, params.ctw_params);
                    report.per_pair[row][static_cast<std::size_t>(idx)] =
                        paa(path, pair.gt_map, params.tolerance);
                    ++row;
                }
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error("run_benchmark: " + error);

    for (std::size_t row = 0; row < report.rows.size(); ++row) {
        const auto& vals = report.per_pair[row];
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size());
        report.rows[row].mean_paa = mean;
        report.rows[row].std_paa = std::sqrt(var);
    }
    return report;
}

BenchmarkReport run_benchmark(const BenchmarkParams& params) {
    if (params.n_pairs < 1) throw std::invalid_argument("run_benchmark: n_pairs must be >= 1");
    std::vector<SynthPair> pairs;
    pairs.reserve(static_cast<std::size_t>(params.n_pairs));
    for (int idx = 0; idx < params.n_pairs; ++idx)
        pairs.push_back(make_synth_pair(params.tmpl, params.amateur, params.master_seed,
                                        static_cast<std::uint64_t>(idx)));
    return score_synth_pairs(params, pairs);
}

}  // namespace pitchwarp
