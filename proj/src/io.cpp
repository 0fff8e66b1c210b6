#include "pitchwarp/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pitchwarp::io {

using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

json parse_json_file(const std::filesystem::path& file) {
    try {
        return json::parse(slurp(file));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(file.string() + ": " + e.what());
    }
}

}  // namespace

std::string unit_name(Unit unit) { return unit == Unit::Hz ? "hz" : "semitone"; }

Unit unit_from_name(const std::string& name) {
    if (name == "hz") return Unit::Hz;
    if (name == "semitone") return Unit::Semitone;
    throw std::runtime_error("unknown unit '" + name + "' (expected hz or semitone)");
}

json curve_to_json(const PitchCurve& curve) {
    json j;
    j["hop_seconds"] = curve.hop_seconds;
    j["unit"] = unit_name(curve.unit);
    j["values"] = curve.values;
    json v = json::array();
    for (auto f : curve.voiced) v.push_back(f != 0);
    j["voiced"] = v;
    return j;
}

PitchCurve curve_from_json(const json& j) {
    PitchCurve curve;
    curve.hop_seconds = j.at("hop_seconds").get<double>();
    curve.unit = unit_from_name(j.at("unit").get<std::string>());
    curve.values = j.at("values").get<std::vector<double>>();
    for (const auto& f : j.at("voiced")) curve.voiced.push_back(f.get<bool>() ? 1 : 0);
    if (curve.values.size() != curve.voiced.size())
        throw std::runtime_error("curve json: values/voiced length mismatch");
    if (!(curve.hop_seconds > 0.0)) throw std::runtime_error("curve json: bad hop_seconds");
    return curve;
}

void write_curve_json(const std::filesystem::path& file, const PitchCurve& curve) {
    spit(file, curve_to_json(curve).dump(2) + "\n");
}

PitchCurve read_curve_json(const std::filesystem::path& file) {
    return curve_from_json(parse_json_file(file));
}

void write_curve_csv(const std::filesystem::path& file, const PitchCurve& curve) {
    std::string out = "frame,f0,voiced\n";
    char buf[64];
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%d\n", i, curve.values[i],
                      curve.voiced[i] ? 1 : 0);
        out += buf;
    }
    spit(file, out);
}

PitchCurve read_curve_csv(const std::filesystem::path& file, double hop_seconds, Unit unit) {
    std::istringstream in(slurp(file));
    std::string line;
    if (!std::getline(in, line) || line != "frame,f0,voiced")
        throw std::runtime_error(file.string() + ": expected header 'frame,f0,voiced'");
    PitchCurve curve;
    curve.hop_seconds = hop_seconds;
    curve.unit = unit;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t c1 = line.find(',');
        std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw std::runtime_error(file.string() + ": malformed row '" + line + "'");
        curve.values.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
        curve.voiced.push_back(std::stoi(line.substr(c2 + 1)) != 0 ? 1 : 0);
    }
    if (!(hop_seconds > 0.0)) throw std::runtime_error("read_curve_csv: bad hop_seconds");
    return curve;
}

json path_to_json(const AlignmentPath& path, const json& metadata) {
    json pairs = json::array();
    for (const auto& [i, j] : path.pairs) pairs.push_back({i, j});
    json out;
    out["pairs"] = pairs;
    out["total_cost"] = path.total_cost;
    if (!metadata.is_null()) out["metadata"] = metadata;
    return out;
}

AlignmentPath path_from_json(const json& j) {
    AlignmentPath path;
    for (const auto& p : j.at("pairs"))
        path.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    path.total_cost = j.at("total_cost").get<double>();
    return path;
}

void write_path_json(const std::filesystem::path& file, const AlignmentPath& path,
                     const json& metadata) {
    spit(file, path_to_json(path, metadata).dump(2) + "\n");
}

AlignmentPath read_path_json(const std::filesystem::path& file) {
    return path_from_json(parse_json_file(file));
}

namespace {

std::string format_float(float v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_features_csv(const std::filesystem::path& file, const FeatureMatrix& features) {
    std::string out;
    for (std::size_t t = 0; t < features.frames; ++t) {
        for (std::size_t c = 0; c < features.dim; ++c) {
            if (c) out += ',';
            out += format_float(features.at(t, c));
        }
        out += '\n';
    }
    spit(file, out);
}

FeatureMatrix read_features_csv(const std::filesystem::path& file) {
    std::istringstream in(slurp(file));
    FeatureMatrix features;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t dim = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            float v;
            const auto res = std::from_chars(line.data() + pos, line.data() + next, v);
            if (res.ec != std::errc())
                throw std::runtime_error(file.string() + ": bad float in '" + line + "'");
            features.data.push_back(v);
            ++dim;
            pos = next + 1;
        }
        if (features.dim == 0) features.dim = dim;
        if (dim != features.dim)
            throw std::runtime_error(file.string() + ": inconsistent column count");
        ++features.frames;
    }
    return features;
}

namespace {

constexpr char kFeatureMagic[4] = {'P', 'W', 'F', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t get_u32(const std::string& s, std::size_t pos) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 3])) << 24;
}

}  // namespace

void write_features_bin(const std::filesystem::path& file, const FeatureMatrix& features) {
    std::string out(kFeatureMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(features.frames));
    put_u32(out, static_cast<std::uint32_t>(features.dim));
    for (float v : features.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
    spit(file, out);
}

FeatureMatrix read_features_bin(const std::filesystem::path& file) {
    const std::string s = slurp(file);
    if (s.size() < 12 || std::string_view(s.data(), 4) != std::string_view(kFeatureMagic, 4))
        throw std::runtime_error(file.string() + ": not a PWF1 feature file");
    FeatureMatrix features;
    features.frames = get_u32(s, 4);
    features.dim = get_u32(s, 8);
    const std::size_t count = features.frames * features.dim;
    if (s.size() != 12 + 4 * count)
        throw std::runtime_error(file.string() + ": truncated feature file");
    features.data.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        features.data[k] = std::bit_cast<float>(get_u32(s, 12 + 4 * k));
    return features;
}

FeatureMatrix read_features_auto(const std::filesystem::path& file) {
    std::ifstream probe(file, std::ios::binary);
    if (!probe) throw std::runtime_error("cannot open " + file.string());
    char magic[4] = {};
    probe.read(magic, 4);
    probe.close();
    if (std::string_view(magic, 4) == std::string_view(kFeatureMagic, 4))
        return read_features_bin(file);
    return read_features_csv(file);
}

// --- WAV ------------------------------------------------------------------

Waveform read_wav_mono16(const std::filesystem::path& file) {
    const std::string s = slurp(file);
    const auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error(file.string() + ": " + why);
    };
    if (s.size() < 12 || s.compare(0, 4, "RIFF") != 0 || s.compare(8, 4, "WAVE") != 0)
        throw fail("not a RIFF/WAVE file");

    int channels = 0, bits = 0, rate = 0, audio_format = 0;
    bool have_fmt = false;
    std::size_t data_pos = 0, data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= s.size()) {
        const std::string id = s.substr(pos, 4);
        const std::uint32_t len = get_u32(s, pos + 4);
        pos += 8;
        if (pos + len > s.size()) throw fail("truncated chunk '" + id + "'");
        if (id == "fmt ") {
            if (len < 16) throw fail("fmt chunk too short");
            audio_format = static_cast<unsigned char>(s[pos]) |
                           (static_cast<unsigned char>(s[pos + 1]) << 8);
            channels = static_cast<unsigned char>(s[pos + 2]) |
                       (static_cast<unsigned char>(s[pos + 3]) << 8);
            rate = static_cast<int>(get_u32(s, pos + 4));
            bits = static_cast<unsigned char>(s[pos + 14]) |
                   (static_cast<unsigned char>(s[pos + 15]) << 8);
            have_fmt = true;
        } else if (id == "data") {
            data_pos = pos;
            data_len = len;
        }
        pos += len + (len % 2);  // chunks are word-aligned
    }
    if (!have_fmt) throw fail("missing fmt chunk");
    if (data_pos == 0 && data_len == 0) throw fail("missing data chunk");
    if (audio_format != 1) throw fail("only PCM wav supported");
    if (channels != 1)
        throw fail("mono required (got " + std::to_string(channels) + " channels)");
    if (bits != 16) throw fail("only 16-bit PCM supported");
    if (rate <= 0) throw fail("bad sample rate");

    Waveform wav;
    wav.sample_rate = rate;
    const std::size_t n = data_len / 2;
    wav.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint16_t raw =
            static_cast<std::uint16_t>(static_cast<unsigned char>(s[data_pos + 2 * k])) |
            static_cast<std::uint16_t>(static_cast<unsigned char>(s[data_pos + 2 * k + 1])) << 8;
        wav.samples[k] = static_cast<double>(static_cast<std::int16_t>(raw)) / 32768.0;
    }
    return wav;
}

void write_wav_mono16(const std::filesystem::path& file, const Waveform& wav) {
    if (wav.sample_rate <= 0) throw std::invalid_argument("write_wav: bad sample rate");
    const std::uint32_t data_len = static_cast<std::uint32_t>(wav.samples.size() * 2);
    std::string out = "RIFF";
    put_u32(out, 36 + data_len);
    out += "WAVEfmt ";
    put_u32(out, 16);
    out.push_back(1);  // PCM
    out.push_back(0);
    out.push_back(1);  // mono
    out.push_back(0);
    put_u32(out, static_cast<std::uint32_t>(wav.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(wav.sample_rate * 2));  // byte rate
    out.push_back(2);  // block align
    out.push_back(0);
    out.push_back(16);  // bits
    out.push_back(0);
    out += "data";
    put_u32(out, data_len);
    for (double v : wav.samples) {
        const long q = std::clamp<long>(std::lround(v * 32768.0), -32768, 32767);
        out.push_back(static_cast<char>(q & 0xFF));
        out.push_back(static_cast<char>((q >> 8) & 0xFF));
    }
    spit(file, out);
}

void write_descriptors_json(const std::filesystem::path& file, const DescriptorSet& set) {
    json arr = json::array();
    for (std::size_t i = 0; i < set.frames; ++i) {
        const auto row = set.row(i);
        arr.push_back(std::vector<double>(row.begin(), row.end()));
    }
    spit(file, arr.dump() + "\n");
}

json template_params_to_json(const TemplateParams& p) {
    return json{{"n_notes", p.n_notes},
                {"note_len_min", p.note_len_min},
                {"note_len_max", p.note_len_max},
                {"scale_degrees", p.scale_degrees},
                {"vibrato_depth_st", p.vibrato_depth_st},
                {"vibrato_rate_hz", p.vibrato_rate_hz},
                {"transition_frames", p.transition_frames},
                {"hop_seconds", p.hop_seconds}};
}

json amateur_params_to_json(const AmateurParams& p) {
    return json{{"warp_knots", p.warp_knots},
                {"warp_strength", p.warp_strength},
                {"offkey_prob", p.offkey_prob},
                {"offkey_range_st", p.offkey_range_st},
                {"jitter_st", p.jitter_st},
                {"drift_st", p.drift_st}};
}

void write_synth_pair(const std::filesystem::path& dir, const SynthPair& pair) {
    std::filesystem::create_directories(dir);
    write_curve_json(dir / "template.json", pair.tmpl);
    write_curve_json(dir / "amateur.json", pair.amateur);
    json gt;
    gt["seed"] = pair.seed;
    gt["gt_map"] = pair.gt_map;
    gt["meta"] = {{"template", template_params_to_json(pair.template_params)},
                  {"amateur", amateur_params_to_json(pair.amateur_params)}};
    spit(dir / "gt.json", gt.dump(2) + "\n");
}

std::vector<int> read_gt_map(const std::filesystem::path& file) {
    const json j = parse_json_file(file);
    if (j.is_array()) return j.get<std::vector<int>>();
    return j.at("gt_map").get<std::vector<int>>();
}

std::vector<SynthPair> read_synth_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error(dir.string() + ": not a directory");
    std::vector<std::filesystem::path> entries;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_directory() && entry.path().filename().string().rfind("pair_", 0) == 0)
            entries.push_back(entry.path());
    std::sort(entries.begin(), entries.end());
    if (entries.empty())
        throw std::runtime_error(dir.string() + ": no pair_* subdirectories found");

    std::vector<SynthPair> pairs;
    pairs.reserve(entries.size());
    for (const auto& p : entries) {
        SynthPair pair;
        pair.tmpl = read_curve_json(p / "template.json");
        pair.amateur = read_curve_json(p / "amateur.json");
        const json gt = parse_json_file(p / "gt.json");
        pair.gt_map = gt.at("gt_map").get<std::vector<int>>();
        pair.seed = gt.value("seed", 0ULL);
        if (pair.gt_map.size() != pair.amateur.size())
            throw std::runtime_error(p.string() + ": gt_map length does not match amateur curve");
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

BenchmarkReport run_benchmark_on_dir(const std::filesystem::path& dir,
                                     const BenchmarkParams& params) {
    BenchmarkReport report = score_synth_pairs(params, read_synth_corpus(dir));
    report.corpus_dir = dir.string();
    return report;
}

json report_to_json(const BenchmarkReport& report) {
    const auto& p = report.params;
    json j;
    j["n_pairs"] = p.n_pairs;
    j["tolerance_frames"] = p.tolerance;
    j["algorithms"] = p.algorithms;
    j["units"] = p.units;
    if (report.corpus_dir.empty()) {
        j["master_seed"] = p.master_seed;
        j["corpus"] = {{"template", template_params_to_json(p.tmpl)},
                       {"amateur", amateur_params_to_json(p.amateur)}};
    } else {
        j["corpus_dir"] = report.corpus_dir;
    }
    j["sadtw_params"] = {{"time_windows", p.sadtw_params.time_windows},
                         {"angle_bins", p.sadtw_params.angle_bins},
                         {"half_width", p.sadtw_params.half_width},
                         {"freq_scale", p.sadtw_params.freq_scale.kind == FreqScale::Kind::RobustStd
                                            ? json("robust_std")
                                            : json(p.sadtw_params.freq_scale.value)}};
    j["ctw_params"] = {{"dim", p.ctw_params.dim},
                       {"lag", p.ctw_params.lag},
                       {"components", p.ctw_params.components},
                       {"reg", p.ctw_params.reg},
                       {"max_iter", p.ctw_params.max_iter}};
    json rows = json::array();
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        rows.push_back({{"algorithm", report.rows[r].algorithm},
                        {"unit", report.rows[r].unit},
                        {"mean_paa", report.rows[r].mean_paa},
                        {"std_paa", report.rows[r].std_paa},
                        {"per_pair_paa", report.per_pair[r]}});
    }
    j["results"] = rows;
    return j;
}

std::string render_report_text(const BenchmarkReport& report) {
    char buf[256];
    std::string out;
    if (report.corpus_dir.empty())
        std::snprintf(buf, sizeof buf, "pairs=%d  tolerance=%.1f frames  seed=%llu\n",
                      report.params.n_pairs, report.params.tolerance,
                      static_cast<unsigned long long>(report.params.master_seed));
    else
        std::snprintf(buf, sizeof buf, "pairs=%d  tolerance=%.1f frames  corpus=%s\n",
                      report.params.n_pairs, report.params.tolerance,
                      report.corpus_dir.c_str());
    out += buf;
    out += "algorithm  unit      mean PAA   std\n";
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%-9s  %-8s  %8.2f  %6.2f\n", row.algorithm.c_str(),
                      row.unit.c_str(), row.mean_paa, row.std_paa);
        out += buf;
    }
    return out;
}

void write_report_json(const std::filesystem::path& file, const BenchmarkReport& report) {
    spit(file, report_to_json(report).dump(2) + "\n");
}

}  // namespace pitchwarp::io
