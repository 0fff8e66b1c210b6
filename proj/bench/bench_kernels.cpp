// Compares the OpenMP kernels against their serial reference implementations:
// wall time plus an equality check over identical inputs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pitchwarp/eval_synth.hpp"
#include "pitchwarp/pitch_extract.hpp"
#include "pitchwarp/shape_sadtw.hpp"

namespace pw = pitchwarp;

namespace {

template <typename F>
double best_ms(F&& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const std::string& name, const std::string& size, double serial_ms,
            double parallel_ms, bool identical) {
    std::printf("%-24s %-16s %10.2f %10.2f %8.2fx   %s\n", name.c_str(), size.c_str(), serial_ms,
                parallel_ms, serial_ms / parallel_ms, identical ? "identical" : "DIFFERS");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernels run serially\n");
#endif
    std::printf("%-24s %-16s %10s %10s %9s\n", "kernel", "size", "serial ms", "omp ms",
                "speedup");

    {  // YIN frame loop
        pw::Waveform wav;
        wav.sample_rate = 22050;
        wav.samples.resize(wav.sample_rate * 5);
        for (std::size_t t = 0; t < wav.samples.size(); ++t)
            wav.samples[t] = 0.7 * std::sin(2.0 * std::numbers::pi * 220.0 * t / wav.sample_rate);
        pw::PitchCurve serial, parallel;
        const double s = best_ms([&] { serial = pw::extract_f0_serial(wav); });
        const double p = best_ms([&] { parallel = pw::extract_f0(wav); });
        report("yin difference fn", std::to_string(serial.size()) + " frames", s, p,
               serial.values == parallel.values && serial.voiced == parallel.voiced);
    }

    pw::TemplateParams tp;
    tp.n_notes = 40;
    const pw::PitchCurve curve_a = pw::gen_template(tp, 11);
    const pw::PitchCurve curve_b = pw::gen_template(tp, 12);
    const pw::ShapeParams shape;

    pw::DescriptorSet da_serial, da_parallel;
    {  // shape descriptors
        const double s = best_ms([&] { da_serial = pw::shape_descriptors_serial(curve_a, shape); });
        const double p = best_ms([&] { da_parallel = pw::shape_descriptors(curve_a, shape); });
        report("shape descriptors", std::to_string(curve_a.size()) + " frames", s, p,
               da_serial.data == da_parallel.data);
    }

    {  // chi-square cost matrix
        const pw::DescriptorSet db = pw::shape_descriptors(curve_b, shape);
        pw::CostMatrix cs(1, 1), cp(1, 1);
        const double s = best_ms([&] { cs = pw::chi_square_cost_matrix_serial(da_parallel, db); });
        const double p = best_ms([&] { cp = pw::chi_square_cost_matrix(da_parallel, db); });
        report("chi-square matrix",
               std::to_string(da_parallel.frames) + "x" + std::to_string(db.frames), s, p,
               cs.data() == cp.data());
    }

    {  // benchmark pair loop (nested kernels run serially inside)
        pw::BenchmarkParams bench;
        bench.n_pairs = 8;
        bench.units = {"semitone"};
        pw::BenchmarkReport r1, r2;
#ifdef _OPENMP
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
#endif
        const double s = best_ms([&] { r1 = pw::run_benchmark(bench); }, 1);
#ifdef _OPENMP
        omp_set_num_threads(saved);
#endif
        const double p = best_ms([&] { r2 = pw::run_benchmark(bench); }, 1);
        report("benchmark pairs", std::to_string(bench.n_pairs) + " pairs", s, p,
               r1.per_pair == r2.per_pair);
    }
    return 0;
}
