#pragma once

#include <cstddef>
#include <vector>

#include "pitchwarp/align_core.hpp"
#include "pitchwarp/curve.hpp"

namespace pitchwarp {

/// Sequence of fixed-dimension feature vectors, row-major.
struct EmbeddedSequence {
    std::size_t frames = 0;
    std::size_t dim = 0;
    std::vector<double> data;

    double at(std::size_t t, std::size_t c) const { return data[t * dim + c]; }
};

/// Delay embedding: frame t maps to (x_t, x_{t+lag}, ..., x_{t+(dim-1)*lag}).
/// Output has length(curve) - (dim-1)*lag frames.
EmbeddedSequence delay_embed(const PitchCurve& curve, int dim, int lag);

struct CcaResult {
    std::vector<double> proj_x;  // dim_x x k, column-major per component
    std::vector<double> proj_y;  // dim_y x k
    std::vector<double> mean_x;
    std::vector<double> mean_y;
    std::vector<double> correlations;  // descending, length k
    std::size_t k = 0;
};

/// Regularized CCA over the paired samples named by `pairs`. Projection
/// vectors have unit canonical variance against the ridged covariances and a
/// deterministic sign (first nonzero component positive).
CcaResult cca_fit(const EmbeddedSequence& x, const EmbeddedSequence& y,
                  const AlignmentPath& pairs, double reg, int k);

/// Projects (frame - mean) onto the fitted components; output is frames x k.
EmbeddedSequence cca_project(const EmbeddedSequence& seq, const std::vector<double>& proj,
                             const std::vector<double>& mean, std::size_t k);

struct CtwParams {
    int dim = 5;
    int lag = 2;
    int components = 2;
    double reg = 1e-4;
    int max_iter = 20;
};

struct CtwResult {
    AlignmentPath path;  // over original frame indices
    int iterations = 0;
    bool converged = false;
};

/// Canonical time warping: z-normalized-DTW initialization, then alternate
/// CCA on the current correspondences with DTW over the squared-Euclidean
/// cost of the projected sequences until the path stops changing (or
/// max_iter). Non-convergence is not an error.
CtwResult ctw_align(const PitchCurve& x, const PitchCurve& y, const CtwParams& params = {});

}  // namespace pitchwarp
