#include "pitchwarp/shape_sadtw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pitchwarp {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
}

void check_params(const ShapeParams& params) {
    if (params.time_windows < 1)
        throw std::invalid_argument("shape_descriptors: time_windows must be >= 1");
    if (params.angle_bins < 2)
        throw std::invalid_argument("shape_descriptors: angle_bins must be >= 2");
    if (params.half_width < 1)
        throw std::invalid_argument("shape_descriptors: half_width must be >= 1");
    if (params.freq_scale.kind == FreqScale::Kind::Fixed && !(params.freq_scale.value > 0.0))
        throw std::invalid_argument("shape_descriptors: fixed scale must be positive");
}

// Angle sectors partition (-pi, pi]; an angle exactly on an edge goes to the
// higher-index bin.
inline int angle_bin(double theta, int n) {
    const double u = (theta + std::numbers::pi) * static_cast<double>(n) /
                     (2.0 * std::numbers::pi);
    int k = static_cast<int>(std::floor(u));
    if (k >= n) k = n - 1;
    if (k < 0) k = 0;
    return k;
}

void descriptor_at(const std::vector<double>& values, std::size_t i, int m, int n,
                   int half_width, double scale, std::vector<int>& counts, double* out) {
    const int bins = m * n;
    counts.assign(bins, 0);
    const long len = static_cast<long>(values.size());
    const long lo = std::max<long>(0, static_cast<long>(i) - half_width);
    const long hi = std::min<long>(len - 1, static_cast<long>(i) + half_width);
    const long window = 2L * half_width + 1;
    int total = 0;
    for (long j = lo; j <= hi; ++j) {
        if (j == static_cast<long>(i)) continue;
        const long offset = j - static_cast<long>(i) + half_width;  // in [0, 2*half_width]
        int w = static_cast<int>((static_cast<long>(m) * offset) / window);
        if (w > m - 1) w = m - 1;
        const double dt = static_cast<double>(j - static_cast<long>(i)) /
                          static_cast<double>(half_width);
        const double df = (values[j] - values[i]) / scale;
        const int k = angle_bin(std::atan2(df, dt), n);
        ++counts[w * n + k];
        ++total;
    }
    if (total == 0) {
        std::fill(out, out + bins, 0.0);
        return;
    }
    const double inv = 1.0 / static_cast<double>(total);
    for (int b = 0; b < bins; ++b) out[b] = static_cast<double>(counts[b]) * inv;
}

}  // namespace

double resolve_freq_scale(const PitchCurve& curve, const FreqScale& scale) {
    if (scale.kind == FreqScale::Kind::Fixed) {
        if (!(scale.value > 0.0))
            throw std::invalid_argument("freq_scale: fixed scale must be positive");
        return scale.value;
    }
    if (curve.size() < 2)
        throw std::invalid_argument(
            "freq_scale: robust scale undefined for curves shorter than 2 frames; "
            "use FreqScale::fixed");
    std::vector<double> diffs(curve.size() - 1);
    for (std::size_t t = 0; t + 1 < curve.size(); ++t)
        diffs[t] = curve.values[t + 1] - curve.values[t];
    const double med = median_of(diffs);
    for (double& d : diffs) d = std::fabs(d - med);
    const double s = 1.4826 * median_of(std::move(diffs));
    if (!(s > 0.0))
        throw std::invalid_argument(
            "freq_scale: robust scale is zero (constant or step-free curve); "
            "use FreqScale::fixed");
    return s;
}

DescriptorSet shape_descriptors_serial(const PitchCurve& curve, const ShapeParams& params) {
    check_params(params);
    const double scale = curve.empty() ? 1.0 : resolve_freq_scale(curve, params.freq_scale);
    DescriptorSet set;
    set.frames = curve.size();
    set.bins = static_cast<std::size_t>(params.time_windows) * params.angle_bins;
    set.data.resize(set.frames * set.bins);
    std::vector<int> counts;
    for (std::size_t i = 0; i < set.frames; ++i)
        descriptor_at(curve.values, i, params.time_windows, params.angle_bins,
                      params.half_width, scale, counts, set.data.data() + i * set.bins);
    return set;
}

DescriptorSet shape_descriptors(const PitchCurve& curve, const ShapeParams& params) {
    check_params(params);
    const double scale = curve.empty() ? 1.0 : resolve_freq_scale(curve, params.freq_scale);
    DescriptorSet set;
    set.frames = curve.size();
    set.bins = static_cast<std::size_t>(params.time_windows) * params.angle_bins;
    set.data.resize(set.frames * set.bins);
    const long frames = static_cast<long>(set.frames);
#pragma omp parallel
    {
        std::vector<int> counts;
#pragma omp for schedule(static)
        for (long i = 0; i < frames; ++i)
            descriptor_at(curve.values, static_cast<std::size_t>(i), params.time_windows,
                          params.angle_bins, params.half_width, scale, counts,
                          set.data.data() + static_cast<std::size_t>(i) * set.bins);
    }
    return set;
}

double chi_square_cost(std::span<const double> h_a, std::span<const double> h_p) {
    if (h_a.size() != h_p.size())
        throw std::invalid_argument("chi_square_cost: descriptor sizes differ");
    double acc = 0.0;
    for (std::size_t k = 0; k < h_a.size(); ++k) {
        const double s = h_a[k] + h_p[k];
        if (s > 0.0) {
            const double d = h_a[k] - h_p[k];
            acc += d * d / s;
        }
    }
    double c = 0.5 * acc;
    if (c < 0.0) c = 0.0;
    if (c > 1.0) c = 1.0;
    return c;
}

CostMatrix chi_square_cost_matrix_serial(const DescriptorSet& a, const DescriptorSet& p) {
    if (a.bins != p.bins)
        throw std::invalid_argument("chi_square_cost_matrix: descriptor sizes differ");
    CostMatrix cost(a.frames, p.frames);
    for (std::size_t i = 0; i < a.frames; ++i)
        for (std::size_t j = 0; j < p.frames; ++j)
            cost(i, j) = chi_square_cost(a.row(i), p.row(j));
    return cost;
}

CostMatrix chi_square_cost_matrix(const DescriptorSet& a, const DescriptorSet& p) {
    if (a.bins != p.bins)
        throw std::invalid_argument("chi_square_cost_matrix: descriptor sizes differ");
    CostMatrix cost(a.frames, p.frames);
    const long rows = static_cast<long>(a.frames);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
        double* out = cost.data().data() + static_cast<std::size_t>(i) * p.frames;
        const auto ha = a.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < p.frames; ++j) out[j] = chi_square_cost(ha, p.row(j));
    }
    return cost;
}

CostMatrix sadtw_cost_matrix(const PitchCurve& amateur, const PitchCurve& tmpl,
                             const ShapeParams& params) {
    if (amateur.empty() || tmpl.empty())
        throw std::invalid_argument("sadtw: curves must be nonempty");
    if (amateur.unit != tmpl.unit)
        throw std::invalid_argument("sadtw: curves must share a unit");
    const DescriptorSet da = shape_descriptors(amateur, params);
    const DescriptorSet dp = shape_descriptors(tmpl, params);
    return chi_square_cost_matrix(da, dp);
}

AlignmentPath sadtw(const PitchCurve& amateur, const PitchCurve& tmpl,
                    const ShapeParams& params) {
    return dtw(sadtw_cost_matrix(amateur, tmpl, params));
}

}  // namespace pitchwarp
