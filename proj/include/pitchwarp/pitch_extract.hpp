#pragma once

#include <cstdint>
#include <vector>

#include "pitchwarp/curve.hpp"

namespace pitchwarp {

struct Waveform {
    std::vector<double> samples;  // amplitudes in [-1, 1]
    int sample_rate = 0;          // Hz
};

/// YIN-style estimator settings. Defaults follow the 22050 Hz / frame 1024 /
/// hop 128 analysis configuration used throughout the toolkit.
struct YinParams {
    int frame_size = 1024;
    int hop_size = 128;
    double f0_min = 65.0;
    double f0_max = 1000.0;
    double voicing_threshold = 0.15;
};

/// Per-frame F0 via the cumulative-mean-normalized difference function:
/// first lag under the voicing threshold (descending to its local minimum),
/// else the global minimum; parabolic refinement; frame unvoiced when no lag
/// dips under the threshold or the refined F0 leaves [f0_min, f0_max].
/// Lag search covers up to frame_size/2. OpenMP-parallel over frames;
/// bitwise equal to the serial variant.
PitchCurve extract_f0(const Waveform& wav, const YinParams& params = {});
PitchCurve extract_f0_serial(const Waveform& wav, const YinParams& params = {});

}  // namespace pitchwarp
