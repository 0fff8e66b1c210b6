// The OpenMP kernels must match their serial references bitwise, for any
// thread count.

#include <doctest.h>

#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pitchwarp/eval_synth.hpp"
#include "pitchwarp/io.hpp"
#include "pitchwarp/pitch_extract.hpp"
#include "pitchwarp/shape_sadtw.hpp"

using namespace pitchwarp;

namespace {

struct ThreadCount {
#ifdef _OPENMP
    int saved = omp_get_max_threads();
    explicit ThreadCount(int n) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved); }
#else
    explicit ThreadCount(int) {}
#endif
};

}  // namespace

TEST_CASE("extract_f0: omp matches serial for several thread counts") {
    Waveform wav;
    wav.sample_rate = 22050;
    wav.samples.resize(22050);
    for (std::size_t t = 0; t < wav.samples.size(); ++t)
        wav.samples[t] = 0.6 * std::sin(2.0 * std::numbers::pi * 261.63 * t / 22050.0) +
                         0.2 * std::sin(2.0 * std::numbers::pi * 523.25 * t / 22050.0);
    const auto reference = extract_f0_serial(wav);
    for (int threads : {1, 2, 5}) {
        ThreadCount guard(threads);
        const auto parallel = extract_f0(wav);
        CHECK(parallel.values == reference.values);
        CHECK(parallel.voiced == reference.voiced);
    }
}

TEST_CASE("shape descriptors and chi-square matrix: omp matches serial") {
    TemplateParams tp;
    tp.n_notes = 12;
    const auto a = hz_to_semitones(gen_template(tp, 1));
    const auto b = hz_to_semitones(gen_template(tp, 2));
    const ShapeParams params;
    const auto da_ref = shape_descriptors_serial(a, params);
    const auto db_ref = shape_descriptors_serial(b, params);
    const auto cost_ref = chi_square_cost_matrix_serial(da_ref, db_ref);
    for (int threads : {1, 3, 7}) {
        ThreadCount guard(threads);
        const auto da = shape_descriptors(a, params);
        const auto db = shape_descriptors(b, params);
        CHECK(da.data == da_ref.data);
        CHECK(db.data == db_ref.data);
        CHECK(chi_square_cost_matrix(da, db).data() == cost_ref.data());
    }
}

TEST_CASE("run_benchmark: report bytes independent of thread count") {
    BenchmarkParams params;
    params.n_pairs = 4;
    params.tmpl.n_notes = 3;
    params.tmpl.note_len_min = 15;
    params.tmpl.note_len_max = 25;
    params.sadtw_params.half_width = 8;
    std::string reference;
    for (int threads : {1, 2, 4}) {
        ThreadCount guard(threads);
        const std::string bytes = io::report_to_json(run_benchmark(params)).dump();
        if (reference.empty())
            reference = bytes;
        else
            CHECK(bytes == reference);
    }
}
