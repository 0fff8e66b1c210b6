#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pitchwarp/curve.hpp"

namespace pitchwarp {

/// Dense rows x cols matrix of non-negative, finite local costs.
/// rows index the amateur curve, cols the template curve.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols);
    CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Throws std::invalid_argument unless every entry is finite and >= 0.
    void validate() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Monotone, continuous warping path. Starts at (0,0), ends at
/// (rows-1, cols-1); consecutive steps are (+1,0), (0,+1) or (+1,+1).
struct AlignmentPath {
    std::vector<std::pair<int, int>> pairs;
    double total_cost = 0.0;
};

bool is_valid_path(const AlignmentPath& path, std::size_t rows, std::size_t cols);
void validate_path(const AlignmentPath& path, std::size_t rows, std::size_t cols);

struct DtwOptions {
    /// Sakoe-Chiba band radius as a fraction of max(rows, cols); <= 0 disables
    /// banding. Off by default.
    double band_fraction = 0.0;
};

/// Minimum-cost monotone continuous path over an explicit cost matrix.
/// Co-optimal predecessors tie-break in fixed order during backtrace:
/// diagonal, then vertical (+1,0), then horizontal (0,+1).
AlignmentPath dtw(const CostMatrix& cost, const DtwOptions& options = {});

/// Exhaustive-enumeration oracle for dtw; guarded to rows <= 8 and cols <= 8.
/// Uses the same tie-break order as dtw's backtrace.
AlignmentPath brute_force_dtw(const CostMatrix& cost);

/// cost[i][j] = |x_i - y_j|. Curves must share a unit and be nonempty.
CostMatrix euclidean_cost(const PitchCurve& x, const PitchCurve& y);

enum class MapDirection { AmateurToTemplate, TemplateToAmateur };

/// Collapses a path to one index per frame: the lower median of the indices
/// paired with it. The result is non-decreasing.
std::vector<int> path_to_map(const AlignmentPath& path, MapDirection direction);

/// Rebuilds a valid path from a non-decreasing per-frame map whose first
/// entry is 0; intermediate columns get filled with horizontal steps. The
/// path ends at (map.size()-1, cols-1), so map.back() must be cols-1.
AlignmentPath path_from_map(const std::vector<int>& map, std::size_t cols);

/// Restricts a path to the leading rows x cols block, clamping indices and
/// dropping the duplicate pairs that clamping creates.
AlignmentPath clip_path(const AlignmentPath& path, std::size_t rows, std::size_t cols);

}  // namespace pitchwarp
