#include "pitchwarp/pitch_extract.hpp"

#include <cmath>
#include <stdexcept>

namespace pitchwarp {

namespace {

void check_input(const Waveform& wav, const YinParams& params) {
    if (wav.samples.empty()) throw std::invalid_argument("extract_f0: empty waveform");
    if (wav.sample_rate <= 0) throw std::invalid_argument("extract_f0: sample_rate must be > 0");
    for (double s : wav.samples)
        if (!std::isfinite(s)) throw std::invalid_argument("extract_f0: non-finite sample");
    if (params.frame_size < 4) throw std::invalid_argument("extract_f0: frame_size too small");
    if (params.hop_size < 1) throw std::invalid_argument("extract_f0: hop_size must be >= 1");
    if (!(params.f0_min < params.f0_max) || !(params.f0_min > 0.0))
        throw std::invalid_argument("extract_f0: need 0 < f0_min < f0_max");
}

struct FrameResult {
    double f0 = 0.0;
    bool voiced = false;
};

// nb = frame_size/2 lags of the difference function over a fixed integration
// window of nb samples, then cumulative mean normalization.
FrameResult analyze_frame(const double* x, int frame_size, int sample_rate,
                          const YinParams& params, std::vector<double>& d,
                          std::vector<double>& dn) {
    const int nb = frame_size / 2;
    d.assign(nb, 0.0);
    for (int tau = 1; tau < nb; ++tau) {
        double acc = 0.0;
        for (int t = 0; t < nb; ++t) {
            const double diff = x[t] - x[t + tau];
            acc += diff * diff;
        }
        d[tau] = acc;
    }

    dn.assign(nb, 1.0);
    double running = 0.0;
    for (int tau = 1; tau < nb; ++tau) {
        running += d[tau];
        dn[tau] = running > 0.0 ? d[tau] * static_cast<double>(tau) / running : 1.0;
    }

    int tau = -1;
    double dn_min = dn[1];
    int tau_min = 1;
    for (int t = 1; t < nb; ++t) {
        if (dn[t] < dn_min) {
            dn_min = dn[t];
            tau_min = t;
        }
        if (tau < 0 && dn[t] < params.voicing_threshold) tau = t;
    }
    if (dn_min > params.voicing_threshold) return {};  // unvoiced

    if (tau < 0) {
        tau = tau_min;
    } else {
        while (tau + 1 < nb && dn[tau + 1] < dn[tau]) ++tau;  // settle into the dip
    }

    double refined = static_cast<double>(tau);
    if (tau > 1 && tau + 1 < nb) {
        const double a = dn[tau - 1], b = dn[tau], c = dn[tau + 1];
        const double denom = a - 2.0 * b + c;
        if (denom != 0.0) {
            double delta = 0.5 * (a - c) / denom;
            if (delta > 0.5) delta = 0.5;
            if (delta < -0.5) delta = -0.5;
            refined += delta;
        }
    }
    const double f0 = static_cast<double>(sample_rate) / refined;
    if (f0 < params.f0_min || f0 > params.f0_max) return {};
    return {f0, true};
}

PitchCurve assemble(const Waveform& wav, const YinParams& params,
                    const std::vector<FrameResult>& frames) {
    PitchCurve curve;
    curve.hop_seconds = static_cast<double>(params.hop_size) / wav.sample_rate;
    curve.unit = Unit::Hz;
    curve.values.reserve(frames.size());
    curve.voiced.reserve(frames.size());
    for (const auto& fr : frames) {
        curve.values.push_back(fr.voiced ? fr.f0 : 0.0);
        curve.voiced.push_back(fr.voiced ? 1 : 0);
    }
    return curve;
}

long frame_count(const Waveform& wav, const YinParams& params) {
    const long len = static_cast<long>(wav.samples.size());
    if (len < params.frame_size) return 0;
    return (len - params.frame_size) / params.hop_size + 1;
}

}  // namespace

PitchCurve extract_f0_serial(const Waveform& wav, const YinParams& params) {
    check_input(wav, params);
    const long n_frames = frame_count(wav, params);
    std::vector<FrameResult> frames(n_frames);
    std::vector<double> d, dn;
    for (long f = 0; f < n_frames; ++f)
        frames[f] = analyze_frame(wav.samples.data() + f * params.hop_size, params.frame_size,
                                  wav.sample_rate, params, d, dn);
    return assemble(wav, params, frames);
}

PitchCurve extract_f0(const Waveform& wav, const YinParams& params) {
    check_input(wav, params);
    const long n_frames = frame_count(wav, params);
    std::vector<FrameResult> frames(n_frames);
#pragma omp parallel
    {
        std::vector<double> d, dn;
#pragma omp for schedule(static)
        for (long f = 0; f < n_frames; ++f)
            frames[f] = analyze_frame(wav.samples.data() + f * params.hop_size, params.frame_size,
                                      wav.sample_rate, params, d, dn);
    }
    return assemble(wav, params, frames);
}

}  // namespace pitchwarp
