#include "pitchwarp/curve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pitchwarp {

PitchCurve from_frames(const std::vector<double>& values,
                       const std::vector<std::uint8_t>& voiced,
                       double hop_seconds) {
    if (values.size() != voiced.size())
        throw std::invalid_argument("from_frames: values/voiced length mismatch");
    if (!(hop_seconds > 0.0))
        throw std::invalid_argument("from_frames: hop_seconds must be positive");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0)
            throw std::invalid_argument("from_frames: F0 must be finite and non-negative (frame " +
                                        std::to_string(i) + ")");
        if (voiced[i] && values[i] <= 0.0)
            throw std::invalid_argument("from_frames: voiced frame " + std::to_string(i) +
                                        " must carry a positive F0");
    }
    PitchCurve c;
    c.values = values;
    c.voiced = voiced;
    c.hop_seconds = hop_seconds;
    c.unit = Unit::Hz;
    return c;
}

PitchCurve interpolate_unvoiced(const PitchCurve& curve) {
    const std::size_t n = curve.size();
    std::size_t n_voiced = 0;
    for (auto v : curve.voiced) n_voiced += v ? 1 : 0;
    if (n_voiced == 0)
        throw std::invalid_argument("interpolate_unvoiced: curve has no voiced frames");

    PitchCurve out = curve;
    std::size_t first_voiced = 0;
    while (!curve.voiced[first_voiced]) ++first_voiced;
    std::size_t last_voiced = n - 1;
    while (!curve.voiced[last_voiced]) --last_voiced;

    for (std::size_t i = 0; i < first_voiced; ++i) out.values[i] = curve.values[first_voiced];
    for (std::size_t i = last_voiced + 1; i < n; ++i) out.values[i] = curve.values[last_voiced];

    std::size_t prev = first_voiced;
    for (std::size_t i = first_voiced + 1; i <= last_voiced; ++i) {
        if (!curve.voiced[i]) continue;
        const std::size_t gap = i - prev;
        if (gap > 1) {
            const double lo = curve.values[prev];
            const double hi = curve.values[i];
            for (std::size_t k = 1; k < gap; ++k)
                out.values[prev + k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(gap);
        }
        prev = i;
    }
    return out;
}

PitchCurve hz_to_semitones(const PitchCurve& curve, double ref_hz) {
    if (curve.unit != Unit::Hz)
        throw std::invalid_argument("hz_to_semitones: curve is not in Hz");
    if (!(ref_hz > 0.0))
        throw std::invalid_argument("hz_to_semitones: ref_hz must be positive");
    for (double v : curve.values)
        if (!(v > 0.0))
            throw std::invalid_argument(
                "hz_to_semitones: non-positive value present; interpolate_unvoiced first");
    PitchCurve out = curve;
    for (double& v : out.values) v = 12.0 * std::log2(v / ref_hz);
    out.unit = Unit::Semitone;
    return out;
}

PitchCurve z_normalize(const PitchCurve& curve) {
    std::size_t k = 0;
    double mean = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i)
        if (curve.voiced[i]) {
            mean += curve.values[i];
            ++k;
        }
    if (k < 2)
        throw std::invalid_argument("z_normalize: need at least 2 voiced frames");
    mean /= static_cast<double>(k);
    double var = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i)
        if (curve.voiced[i]) {
            const double d = curve.values[i] - mean;
            var += d * d;
        }
    var /= static_cast<double>(k);  // population variance
    if (!(var > 0.0))
        throw std::invalid_argument("z_normalize: zero variance (constant curve)");
    const double inv_std = 1.0 / std::sqrt(var);
    PitchCurve out = curve;
    for (std::size_t i = 0; i < curve.size(); ++i)
        out.values[i] = curve.voiced[i] ? (curve.values[i] - mean) * inv_std : 0.0;
    return out;
}

}  // namespace pitchwarp
