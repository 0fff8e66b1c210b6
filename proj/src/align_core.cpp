#include "pitchwarp/align_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pitchwarp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Backtrace preference keys; lower key wins when predecessors tie.
enum StepKey : std::uint8_t { kDiag = 0, kVert = 1, kHoriz = 2 };
}  // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("CostMatrix: dimensions must be >= 1");
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("CostMatrix: dimensions must be >= 1");
    if (data_.size() != rows * cols)
        throw std::invalid_argument("CostMatrix: value count does not match dimensions");
    validate();
}

void CostMatrix::validate() const {
    for (double v : data_)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("CostMatrix: entries must be finite and >= 0");
}

bool is_valid_path(const AlignmentPath& path, std::size_t rows, std::size_t cols) {
    if (path.pairs.empty()) return false;
    if (path.pairs.front() != std::pair<int, int>{0, 0}) return false;
    if (path.pairs.back() !=
        std::pair<int, int>{static_cast<int>(rows) - 1, static_cast<int>(cols) - 1})
        return false;
    for (std::size_t k = 1; k < path.pairs.size(); ++k) {
        const int di = path.pairs[k].first - path.pairs[k - 1].first;
        const int dj = path.pairs[k].second - path.pairs[k - 1].second;
        const bool ok = (di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1);
        if (!ok) return false;
    }
    return true;
}

void validate_path(const AlignmentPath& path, std::size_t rows, std::size_t cols) {
    if (!is_valid_path(path, rows, cols))
        throw std::invalid_argument("AlignmentPath: boundary/monotonicity/continuity violated");
}

namespace {

// Band half-width in cells around the scaled diagonal, or -1 when disabled.
long band_radius(const DtwOptions& options, std::size_t rows, std::size_t cols) {
    if (options.band_fraction <= 0.0) return -1;
    const double m = static_cast<double>(std::max(rows, cols));
    return std::max<long>(1, static_cast<long>(std::ceil(options.band_fraction * m)));
}

inline bool in_band(long i, long j, std::size_t rows, std::size_t cols, long radius) {
    if (radius < 0) return true;
    const double slope =
        rows > 1 ? static_cast<double>(cols - 1) / static_cast<double>(rows - 1) : 0.0;
    const double center = rows > 1 ? slope * static_cast<double>(i)
                                   : static_cast<double>(cols - 1) / 2.0;
    return std::fabs(static_cast<double>(j) - center) <= static_cast<double>(radius);
}

}  // namespace

AlignmentPath dtw(const CostMatrix& cost, const DtwOptions& options) {
    cost.validate();
    const std::size_t rows = cost.rows();
    const std::size_t cols = cost.cols();
    const long radius = band_radius(options, rows, cols);

    std::vector<double> acc(rows * cols, kInf);
    auto D = [&](std::size_t i, std::size_t j) -> double& { return acc[i * cols + j]; };

    D(0, 0) = cost(0, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (i == 0 && j == 0) continue;
            if (!in_band(static_cast<long>(i), static_cast<long>(j), rows, cols, radius)) continue;
            double best = kInf;
            if (i > 0 && j > 0) best = D(i - 1, j - 1);
            if (i > 0) best = std::min(best, D(i - 1, j));
            if (j > 0) best = std::min(best, D(i, j - 1));
            D(i, j) = best + cost(i, j);
        }
    }

    AlignmentPath path;
    path.total_cost = D(rows - 1, cols - 1);

    std::vector<std::pair<int, int>> rev;
    std::size_t i = rows - 1, j = cols - 1;
    rev.emplace_back(static_cast<int>(i), static_cast<int>(j));
    while (i != 0 || j != 0) {
        const double here = D(i, j);
        const double local = cost(i, j);
        // Predecessor must lie on an optimal prefix: D[p] + cost == D here.
        // Checked in preference order so ties resolve diag, vert, horiz.
        if (i > 0 && j > 0 && D(i - 1, j - 1) + local == here) {
            --i;
            --j;
        } else if (i > 0 && D(i - 1, j) + local == here) {
            --i;
        } else if (j > 0 && D(i, j - 1) + local == here) {
            --j;
        } else {
            // Unreachable for a matrix that satisfies validate().
            throw std::logic_error("dtw: backtrace found no optimal predecessor");
        }
        rev.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    path.pairs.assign(rev.rbegin(), rev.rend());
    return path;
}

namespace {

struct BruteBest {
    bool found = false;
    double total = 0.0;
    std::vector<std::uint8_t> steps;  // forward step keys
};

// Reversed-lexicographic comparison on step keys: decides ties the same way
// the greedy backtrace does, from the last step backward.
bool reversed_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

void enumerate_paths(const CostMatrix& cost, std::size_t i, std::size_t j, double sum,
                     std::vector<std::uint8_t>& steps, BruteBest& best) {
    if (i == cost.rows() - 1 && j == cost.cols() - 1) {
        if (!best.found || sum < best.total ||
            (sum == best.total && reversed_less(steps, best.steps))) {
            best.found = true;
            best.total = sum;
            best.steps = steps;
        }
        return;
    }
    const bool down = i + 1 < cost.rows();
    const bool right = j + 1 < cost.cols();
    if (down && right) {
        steps.push_back(kDiag);
        enumerate_paths(cost, i + 1, j + 1, sum + cost(i + 1, j + 1), steps, best);
        steps.pop_back();
    }
    if (down) {
        steps.push_back(kVert);
        enumerate_paths(cost, i + 1, j, sum + cost(i + 1, j), steps, best);
        steps.pop_back();
    }
    if (right) {
        steps.push_back(kHoriz);
        enumerate_paths(cost, i, j + 1, sum + cost(i, j + 1), steps, best);
        steps.pop_back();
    }
}

}  // namespace

AlignmentPath brute_force_dtw(const CostMatrix& cost) {
    if (cost.rows() > 8 || cost.cols() > 8)
        throw std::invalid_argument("brute_force_dtw: guarded to 8x8 (oracle use only)");
    cost.validate();

    BruteBest best;
    std::vector<std::uint8_t> steps;
    enumerate_paths(cost, 0, 0, cost(0, 0), steps, best);

    AlignmentPath path;
    path.total_cost = best.total;
    int i = 0, j = 0;
    path.pairs.emplace_back(0, 0);
    for (std::uint8_t s : best.steps) {
        if (s == kDiag) {
            ++i;
            ++j;
        } else if (s == kVert) {
            ++i;
        } else {
            ++j;
        }
        path.pairs.emplace_back(i, j);
    }
    return path;
}

CostMatrix euclidean_cost(const PitchCurve& x, const PitchCurve& y) {
    if (x.unit != y.unit)
        throw std::invalid_argument("euclidean_cost: curves must share a unit");
    if (x.empty() || y.empty())
        throw std::invalid_argument("euclidean_cost: curves must be nonempty");
    CostMatrix cost(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            cost(i, j) = std::fabs(x.values[i] - y.values[j]);
    return cost;
}

std::vector<int> path_to_map(const AlignmentPath& path, MapDirection direction) {
    std::vector<int> map;
    // Pairs are grouped by the key index already (paths are monotone), so one
    // pass over runs suffices.
    const bool a_to_p = direction == MapDirection::AmateurToTemplate;
    std::size_t k = 0;
    while (k < path.pairs.size()) {
        const int key = a_to_p ? path.pairs[k].first : path.pairs[k].second;
        std::size_t end = k;
        while (end < path.pairs.size() &&
               (a_to_p ? path.pairs[end].first : path.pairs[end].second) == key)
            ++end;
        const std::size_t count = end - k;
        const std::size_t pick = k + (count - 1) / 2;  // lower median
        map.push_back(a_to_p ? path.pairs[pick].second : path.pairs[pick].first);
        k = end;
    }
    return map;
}

AlignmentPath path_from_map(const std::vector<int>& map, std::size_t cols) {
    if (map.empty()) throw std::invalid_argument("path_from_map: empty map");
    if (map.front() != 0) throw std::invalid_argument("path_from_map: map must start at 0");
    if (map.back() != static_cast<int>(cols) - 1)
        throw std::invalid_argument("path_from_map: map must end at cols-1");
    AlignmentPath path;
    path.pairs.emplace_back(0, 0);
    int j = 0;
    for (std::size_t i = 1; i < map.size(); ++i) {
        if (map[i] < j)
            throw std::invalid_argument("path_from_map: map must be non-decreasing");
        // Skipped columns are filled horizontally in the previous row, so
        // each row's lower-median column stays exactly map[i] for the
        // jump-by-<=2 maps the warp generator produces.
        while (j < map[i] - 1) {
            ++j;
            path.pairs.emplace_back(static_cast<int>(i) - 1, j);
        }
        if (map[i] > j) ++j;  // diagonal step into the new row
        path.pairs.emplace_back(static_cast<int>(i), j);
    }
    return path;
}

AlignmentPath clip_path(const AlignmentPath& path, std::size_t rows, std::size_t cols) {
    AlignmentPath out;
    const int imax = static_cast<int>(rows) - 1;
    const int jmax = static_cast<int>(cols) - 1;
    for (const auto& [i, j] : path.pairs) {
        const std::pair<int, int> p{std::min(i, imax), std::min(j, jmax)};
        if (out.pairs.empty() || out.pairs.back() != p) out.pairs.push_back(p);
    }
    return out;
}

}  // namespace pitchwarp
