#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pitchwarp/align_core.hpp"
#include "pitchwarp/curve.hpp"

namespace pitchwarp {

/// How to make the frequency axis commensurable with the time axis when
/// computing neighbor angles.
struct FreqScale {
    enum class Kind { RobustStd, Fixed };
    Kind kind = Kind::RobustStd;
    double value = 1.0;  // used when kind == Fixed

    static FreqScale robust_std() { return {Kind::RobustStd, 1.0}; }
    static FreqScale fixed(double v) { return {Kind::Fixed, v}; }
};

struct ShapeParams {
    int time_windows = 4;  // m
    int angle_bins = 6;    // n
    int half_width = 32;   // neighborhood extent in frames, each side
    FreqScale freq_scale = FreqScale::robust_std();
};

/// One histogram per frame, flattened frames x (time_windows*angle_bins),
/// each row L1-normalized (or all-zero when the frame has no neighbors).
struct DescriptorSet {
    std::size_t frames = 0;
    std::size_t bins = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * bins, bins};
    }
};

/// Robust per-curve frequency scale: 1.4826 x the median absolute deviation
/// of frame-to-frame differences. Throws when the result is zero (constant
/// or degenerate curve); use a fixed scale for those.
double resolve_freq_scale(const PitchCurve& curve, const FreqScale& scale);

/// Histogram over the relative positions of the neighbors of each frame:
/// time offset binned into `time_windows`, angle of (dt, df) binned into
/// `angle_bins` equal sectors of (-pi, pi]. Curve must be gap-free.
/// OpenMP-parallel over frames; bitwise equal to the serial variant.
DescriptorSet shape_descriptors(const PitchCurve& curve, const ShapeParams& params);
DescriptorSet shape_descriptors_serial(const PitchCurve& curve, const ShapeParams& params);

/// Chi-square test statistic between two normalized histograms:
/// 0.5 * sum (ha-hp)^2 / (ha+hp), empty bins contributing 0. Symmetric,
/// clamped to [0, 1].
double chi_square_cost(std::span<const double> h_a, std::span<const double> h_p);

/// Full pairwise chi-square matrix between two descriptor sets.
/// OpenMP-parallel over rows; the serial variant applies chi_square_cost
/// cell by cell and is kept as the reference for equality tests.
CostMatrix chi_square_cost_matrix(const DescriptorSet& a, const DescriptorSet& p);
CostMatrix chi_square_cost_matrix_serial(const DescriptorSet& a, const DescriptorSet& p);

/// Shape-aware DTW: descriptor histograms for both curves (each resolving
/// its own robust scale when selected), chi-square local costs, then DTW.
AlignmentPath sadtw(const PitchCurve& amateur, const PitchCurve& tmpl,
                    const ShapeParams& params = {});

/// The cost matrix sadtw aligns over, exposed for inspection/plotting.
CostMatrix sadtw_cost_matrix(const PitchCurve& amateur, const PitchCurve& tmpl,
                             const ShapeParams& params = {});

}  // namespace pitchwarp
