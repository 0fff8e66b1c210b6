#pragma once

#include <cstdint>
#include <vector>

namespace pitchwarp {

enum class Unit { Hz, Semitone };

/// Framed F0 sequence. Values are Hz (or semitones after conversion),
/// one per analysis frame; `voiced` flags frames that carried a pitch.
/// Unvoiced frames hold value 0 until interpolate_unvoiced() fills them.
struct PitchCurve {
    std::vector<double> values;
    std::vector<std::uint8_t> voiced;
    double hop_seconds = 0.0;
    Unit unit = Unit::Hz;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

/// Builds an Hz curve from raw frame data. Throws std::invalid_argument on
/// length mismatch, non-positive hop, negative values, or a voiced frame
/// with no positive F0.
PitchCurve from_frames(const std::vector<double>& values,
                       const std::vector<std::uint8_t>& voiced,
                       double hop_seconds);

/// Fills unvoiced gaps linearly between flanking voiced frames; leading and
/// trailing gaps are held at the nearest voiced value. Voiced flags are kept
/// unchanged so metrics can still mask on them. Requires at least one voiced
/// frame.
PitchCurve interpolate_unvoiced(const PitchCurve& curve);

constexpr double kDefaultSemitoneRefHz = 55.0;  // A1; offset choice only

/// 12*log2(value/ref_hz) per frame. Requires a gap-free Hz curve (all values
/// positive); run interpolate_unvoiced first.
PitchCurve hz_to_semitones(const PitchCurve& curve,
                           double ref_hz = kDefaultSemitoneRefHz);

/// Zero-mean, unit-variance normalization over voiced frames (population
/// std); unvoiced frames are set to 0. Requires >= 2 voiced frames and
/// nonzero variance.
PitchCurve z_normalize(const PitchCurve& curve);

}  // namespace pitchwarp
