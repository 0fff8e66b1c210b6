#include "pitchwarp/ctw.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace pitchwarp {

EmbeddedSequence delay_embed(const PitchCurve& curve, int dim, int lag) {
    if (dim < 1) throw std::invalid_argument("delay_embed: dim must be >= 1");
    if (lag < 1) throw std::invalid_argument("delay_embed: lag must be >= 1");
    const std::size_t span = static_cast<std::size_t>(dim - 1) * lag;
    if (curve.size() < span + 1)
        throw std::invalid_argument("delay_embed: curve too short for this dim/lag");
    EmbeddedSequence seq;
    seq.frames = curve.size() - span;
    seq.dim = static_cast<std::size_t>(dim);
    seq.data.resize(seq.frames * seq.dim);
    for (std::size_t t = 0; t < seq.frames; ++t)
        for (std::size_t c = 0; c < seq.dim; ++c)
            seq.data[t * seq.dim + c] = curve.values[t + c * lag];
    return seq;
}

namespace {

void fix_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::fabs(v[i]) > 1e-12) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace

CcaResult cca_fit(const EmbeddedSequence& x, const EmbeddedSequence& y,
                  const AlignmentPath& pairs, double reg, int k) {
    if (reg < 0.0) throw std::invalid_argument("cca_fit: reg must be >= 0");
    if (k < 1 || k > static_cast<int>(std::min(x.dim, y.dim)))
        throw std::invalid_argument("cca_fit: k must be in [1, min(dim_x, dim_y)]");
    validate_path(pairs, x.frames, y.frames);

    const Eigen::Index T = static_cast<Eigen::Index>(pairs.pairs.size());
    const Eigen::Index dx = static_cast<Eigen::Index>(x.dim);
    const Eigen::Index dy = static_cast<Eigen::Index>(y.dim);

    Eigen::MatrixXd X(dx, T), Y(dy, T);
    for (Eigen::Index t = 0; t < T; ++t) {
        const auto& [i, j] = pairs.pairs[static_cast<std::size_t>(t)];
        for (Eigen::Index c = 0; c < dx; ++c) X(c, t) = x.at(i, static_cast<std::size_t>(c));
        for (Eigen::Index c = 0; c < dy; ++c) Y(c, t) = y.at(j, static_cast<std::size_t>(c));
    }
    const Eigen::VectorXd mx = X.rowwise().mean();
    const Eigen::VectorXd my = Y.rowwise().mean();
    X.colwise() -= mx;
    Y.colwise() -= my;

    const double invT = 1.0 / static_cast<double>(T);
    Eigen::MatrixXd Sxx = X * X.transpose() * invT;
    Eigen::MatrixXd Syy = Y * Y.transpose() * invT;
    const Eigen::MatrixXd Sxy = X * Y.transpose() * invT;
    Sxx.diagonal().array() += reg;
    Syy.diagonal().array() += reg;

    const Eigen::LLT<Eigen::MatrixXd> lltx(Sxx);
    const Eigen::LLT<Eigen::MatrixXd> llty(Syy);
    if (lltx.info() != Eigen::Success || llty.info() != Eigen::Success)
        throw std::invalid_argument("cca_fit: singular covariance; use reg > 0");

    const Eigen::MatrixXd A = lltx.matrixL().solve(Sxy);             // Lx^-1 Sxy
    Eigen::MatrixXd M = A * llty.solve(A.transpose());               // .. Syy^-1 Syx Lx^-T
    M = 0.5 * (M + M.transpose()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw std::runtime_error("cca_fit: eigensolver failed");

    CcaResult result;
    result.k = static_cast<std::size_t>(k);
    result.mean_x.assign(mx.data(), mx.data() + dx);
    result.mean_y.assign(my.data(), my.data() + dy);
    result.proj_x.resize(static_cast<std::size_t>(dx) * k);
    result.proj_y.resize(static_cast<std::size_t>(dy) * k);
    result.correlations.resize(static_cast<std::size_t>(k));

    for (int c = 0; c < k; ++c) {
        const Eigen::Index idx = es.eigenvalues().size() - 1 - c;  // descending
        const double lambda = es.eigenvalues()[idx];
        result.correlations[static_cast<std::size_t>(c)] =
            lambda > 0.0 ? std::sqrt(lambda) : 0.0;

        Eigen::VectorXd wx =
            lltx.matrixL().transpose().solve(Eigen::VectorXd(es.eigenvectors().col(idx)));
        Eigen::VectorXd wy = llty.solve(Sxy.transpose() * wx);
        const double g = wy.dot(Sxy.transpose() * wx);  // = wy' Syy wy
        if (g > 1e-300) wy /= std::sqrt(g);
        fix_sign(wx);
        fix_sign(wy);
        for (Eigen::Index r = 0; r < dx; ++r)
            result.proj_x[static_cast<std::size_t>(r) + static_cast<std::size_t>(c) * dx] = wx[r];
        for (Eigen::Index r = 0; r < dy; ++r)
            result.proj_y[static_cast<std::size_t>(r) + static_cast<std::size_t>(c) * dy] = wy[r];
    }
    return result;
}

EmbeddedSequence cca_project(const EmbeddedSequence& seq, const std::vector<double>& proj,
                             const std::vector<double>& mean, std::size_t k) {
    if (mean.size() != seq.dim || proj.size() != seq.dim * k)
        throw std::invalid_argument("cca_project: projection shape mismatch");
    EmbeddedSequence out;
    out.frames = seq.frames;
    out.dim = k;
    out.data.resize(out.frames * k);
    for (std::size_t t = 0; t < seq.frames; ++t) {
        for (std::size_t c = 0; c < k; ++c) {
            double acc = 0.0;
            for (std::size_t d = 0; d < seq.dim; ++d)
                acc += (seq.at(t, d) - mean[d]) * proj[d + c * seq.dim];
            out.data[t * k + c] = acc;
        }
    }
    return out;
}

namespace {

CostMatrix squared_euclidean(const EmbeddedSequence& a, const EmbeddedSequence& b) {
    CostMatrix cost(a.frames, b.frames);
    const long rows = static_cast<long>(a.frames);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
        double* out = cost.data().data() + static_cast<std::size_t>(i) * b.frames;
        for (std::size_t j = 0; j < b.frames; ++j) {
            double acc = 0.0;
            for (std::size_t c = 0; c < a.dim; ++c) {
                const double d = a.at(static_cast<std::size_t>(i), c) - b.at(j, c);
                acc += d * d;
            }
            out[j] = acc;
        }
    }
    return cost;
}

}  // namespace

CtwResult ctw_align(const PitchCurve& x, const PitchCurve& y, const CtwParams& params) {
    if (params.max_iter < 1) throw std::invalid_argument("ctw_align: max_iter must be >= 1");
    const EmbeddedSequence ex = delay_embed(x, params.dim, params.lag);
    const EmbeddedSequence ey = delay_embed(y, params.dim, params.lag);
    if (params.components < 1 ||
        params.components > static_cast<int>(std::min(ex.dim, ey.dim)))
        throw std::invalid_argument("ctw_align: components out of range");

    const AlignmentPath init = dtw(euclidean_cost(z_normalize(x), z_normalize(y)));
    AlignmentPath prev = clip_path(init, ex.frames, ey.frames);

    CtwResult result;
    for (int it = 1; it <= params.max_iter; ++it) {
        result.iterations = it;
        const CcaResult cca = cca_fit(ex, ey, prev, params.reg, params.components);
        const EmbeddedSequence px = cca_project(ex, cca.proj_x, cca.mean_x, cca.k);
        const EmbeddedSequence py = cca_project(ey, cca.proj_y, cca.mean_y, cca.k);
        AlignmentPath next = dtw(squared_euclidean(px, py));
        validate_path(next, ex.frames, ey.frames);
        if (next.pairs == prev.pairs) {
            result.converged = true;
            prev = std::move(next);
            break;
        }
        prev = std::move(next);
    }

    // Embedded index t stands for original frame t; the trimmed tail maps to
    // the last embedded frame, which extends the path diagonally.
    const int tail = (params.dim - 1) * params.lag;
    AlignmentPath out = prev;
    const auto [li, lj] = out.pairs.back();
    for (int s = 1; s <= tail; ++s) out.pairs.emplace_back(li + s, lj + s);
    out.total_cost = prev.total_cost;
    result.path = std::move(out);
    return result;
}

}  // namespace pitchwarp
