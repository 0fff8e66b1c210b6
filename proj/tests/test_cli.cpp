// End-to-end checks of the pitchwarp binary: exit codes, file outputs,
// metadata. PITCHWARP_BIN is injected by the build.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "pitchwarp/io.hpp"
#include "pitchwarp/pitch_extract.hpp"

namespace fs = std::filesystem;
namespace pw = pitchwarp;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(PITCHWARP_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path make_temp_dir() {
    const auto dir = fs::temp_directory_path() / "pitchwarp_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("cli pipeline") {
    const fs::path dir = make_temp_dir();

    // A 440 Hz tone to extract from.
    pw::Waveform wav;
    wav.sample_rate = 22050;
    wav.samples.resize(22050);
    for (std::size_t t = 0; t < wav.samples.size(); ++t)
        wav.samples[t] = 0.7 * std::sin(2.0 * std::numbers::pi * 440.0 * t / 22050.0);
    pw::io::write_wav_mono16(dir / "tone.wav", wav);

    SUBCASE("extract-f0 produces a sane curve") {
        REQUIRE(run("extract-f0 " + (dir / "tone.wav").string() + " " +
                    (dir / "tone.json").string()) == 0);
        const auto curve = pw::io::read_curve_json(dir / "tone.json");
        std::vector<double> voiced;
        for (std::size_t i = 0; i < curve.size(); ++i)
            if (curve.voiced[i]) voiced.push_back(curve.values[i]);
        REQUIRE(!voiced.empty());
        std::nth_element(voiced.begin(), voiced.begin() + voiced.size() / 2, voiced.end());
        CHECK(std::fabs(voiced[voiced.size() / 2] - 440.0) < 1.0);
    }

    SUBCASE("stereo and empty wavs exit with code 2") {
        std::string bytes = slurp(dir / "tone.wav");
        bytes[22] = 2;
        std::ofstream(dir / "stereo.wav", std::ios::binary) << bytes;
        CHECK(run("extract-f0 " + (dir / "stereo.wav").string() + " " +
                  (dir / "x.json").string()) == 2);

        std::ofstream(dir / "empty.wav", std::ios::binary).flush();
        CHECK(run("extract-f0 " + (dir / "empty.wav").string() + " " +
                  (dir / "x.json").string()) == 2);
    }

    SUBCASE("synth + align + eval + warp") {
        REQUIRE(run("synth --seed 5 --n-pairs 2 --out " + (dir / "corpus").string()) == 0);
        const fs::path pair = dir / "corpus" / "pair_00001";
        REQUIRE(fs::exists(pair / "gt.json"));

        for (const std::string algo : {"dtw", "ndtw", "ctw", "sadtw"}) {
            const fs::path out = dir / (algo + ".json");
            REQUIRE(run("align " + (pair / "amateur.json").string() + " " +
                        (pair / "template.json").string() + " --algo " + algo +
                        " --semitones --out " + out.string()) == 0);
            const auto j = nlohmann::json::parse(std::ifstream(out));
            CHECK(j.contains("pairs"));
            CHECK(j.at("metadata").at("algorithm") == algo);
            if (algo == "sadtw") {
                CHECK(j.at("metadata").at("params").at("time_windows") == 4);
                CHECK(j.at("metadata").at("params").at("angle_bins") == 6);
            }
            CHECK(run("eval " + out.string() + " " + (pair / "gt.json").string() +
                      " --tolerance 5") == 0);
        }

        REQUIRE(run("align " + (pair / "amateur.json").string() + " " +
                    (pair / "template.json").string() +
                    " --algo sadtw --semitones --out " + (dir / "p.json").string() +
                    " --plot " + (dir / "p.svg").string() + " --cost-image " +
                    (dir / "p.pgm").string()) == 0);
        CHECK(slurp(dir / "p.svg").find("<svg") == 0);
        CHECK(slurp(dir / "p.pgm").substr(0, 2) == "P5");

        // Warp the amateur curve's own values through the path.
        const auto amateur = pw::io::read_curve_json(pair / "amateur.json");
        pw::FeatureMatrix f;
        f.frames = amateur.size();
        f.dim = 1;
        for (double v : amateur.values) f.data.push_back(static_cast<float>(v));
        pw::io::write_features_csv(dir / "amateur.f0.csv", f);
        REQUIRE(run("warp " + (dir / "amateur.f0.csv").string() + " " +
                    (dir / "p.json").string() + " --out " + (dir / "warped.csv").string()) == 0);
        const auto warped = pw::io::read_features_csv(dir / "warped.csv");
        const auto tmpl = pw::io::read_curve_json(pair / "template.json");
        CHECK(warped.frames == tmpl.size());
    }

    SUBCASE("identical curves align to the diagonal with zero cost") {
        REQUIRE(run("synth --seed 9 --out " + (dir / "one").string()) == 0);
        const fs::path t = dir / "one" / "pair_00000" / "template.json";
        for (const std::string algo : {"dtw", "ndtw", "ctw", "sadtw"}) {
            const fs::path out = dir / ("self_" + algo + ".json");
            REQUIRE(run("align " + t.string() + " " + t.string() + " --algo " + algo +
                        " --semitones --out " + out.string()) == 0);
            const auto path = pw::io::read_path_json(out);
            const auto tmpl = pw::io::read_curve_json(t);
            CHECK(path.pairs.size() == tmpl.size());
            CHECK(path.total_cost <= 1e-9);
        }
    }

    SUBCASE("usage errors exit with code 2") {
        CHECK(run("align a.json b.json --algo warp9 --out x.json") == 2);  // bad enum
        CHECK(run("nonsense") == 2);
        CHECK(run("bench --n 3") == 2);  // missing required --seed
        CHECK(run("align " + (dir / "missing.json").string() + " " +
                  (dir / "missing.json").string() + " --algo dtw --out " +
                  (dir / "x.json").string()) == 2);
    }

    SUBCASE("bench scores an exported corpus identically to generating it") {
        const std::string corpus_flags =
            " --n-notes 3 --note-len-min 15 --note-len-max 25";
        REQUIRE(run("synth --seed 41 --n-pairs 3" + corpus_flags + " --out " +
                    (dir / "c").string()) == 0);
        REQUIRE(run("bench --seed 41 --n 3" + corpus_flags +
                    " --half-width 8 --algos dtw,sadtw --units semitone --out " +
                    (dir / "gen.json").string()) == 0);
        REQUIRE(run("bench --corpus " + (dir / "c").string() +
                    " --half-width 8 --algos dtw,sadtw --units semitone --out " +
                    (dir / "imp.json").string()) == 0);
        const auto gen = nlohmann::json::parse(std::ifstream(dir / "gen.json"));
        const auto imp = nlohmann::json::parse(std::ifstream(dir / "imp.json"));
        CHECK(imp.at("corpus_dir") == (dir / "c").string());
        CHECK(gen.at("results") == imp.at("results"));
    }

    SUBCASE("align can dump descriptors") {
        REQUIRE(run("synth --seed 13 --out " + (dir / "d").string()) == 0);
        const fs::path pair = dir / "d" / "pair_00000";
        REQUIRE(run("align " + (pair / "amateur.json").string() + " " +
                    (pair / "template.json").string() +
                    " --algo sadtw --semitones --out " + (dir / "dd.json").string() +
                    " --dump-descriptors-a " + (dir / "da.json").string()) == 0);
        const auto da = nlohmann::json::parse(std::ifstream(dir / "da.json"));
        const auto amateur = pw::io::read_curve_json(pair / "amateur.json");
        CHECK(da.size() == amateur.size());
        CHECK(da.at(0).size() == 24);  // 4 windows x 6 angle bins
        CHECK(run("align " + (pair / "amateur.json").string() + " " +
                  (pair / "template.json").string() + " --algo dtw --semitones --out " +
                  (dir / "dd2.json").string() + " --dump-descriptors-a " +
                  (dir / "da2.json").string()) == 2);
    }

    SUBCASE("bench is reproducible and records its parameters") {
        const std::string flags =
            " --seed 77 --n 3 --n-notes 3 --note-len-min 15 --note-len-max 25 "
            "--half-width 8 --algos dtw,sadtw --units semitone --tolerance 5";
        REQUIRE(run("bench" + flags + " --out " + (dir / "r1.json").string()) == 0);
        REQUIRE(run("bench" + flags + " --threads 3 --out " + (dir / "r2.json").string()) == 0);
        CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));
        const auto j = nlohmann::json::parse(std::ifstream(dir / "r1.json"));
        CHECK(j.at("n_pairs") == 3);
        CHECK(j.at("corpus").at("template").at("n_notes") == 3);
        CHECK(j.at("results").size() == 2);
    }

    SUBCASE("help exits cleanly") {
        CHECK(run("--help") == 0);
        CHECK(run("align --help") == 0);
    }
}
