#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "pitchwarp/ctw.hpp"
#include "pitchwarp/eval_synth.hpp"
#include "pitchwarp/rng.hpp"

using namespace pitchwarp;

namespace {

PitchCurve curve_of(std::vector<double> values) {
    PitchCurve c;
    c.voiced.assign(values.size(), 1);
    c.values = std::move(values);
    c.hop_seconds = 0.01;
    c.unit = Unit::Semitone;
    return c;
}

AlignmentPath identity_path(std::size_t n) {
    AlignmentPath p;
    for (std::size_t i = 0; i < n; ++i)
        p.pairs.emplace_back(static_cast<int>(i), static_cast<int>(i));
    return p;
}

}  // namespace

TEST_CASE("delay_embed") {
    const auto c = curve_of({1, 2, 3, 4});
    const auto identity = delay_embed(c, 1, 3);
    CHECK(identity.frames == 4);
    CHECK(identity.dim == 1);
    CHECK(identity.data == std::vector<double>{1, 2, 3, 4});

    const auto pairs = delay_embed(c, 2, 1);
    CHECK(pairs.frames == 3);
    CHECK(pairs.data == std::vector<double>{1, 2, 2, 3, 3, 4});

    const auto wide = delay_embed(curve_of({1, 2, 3, 4, 5}), 3, 2);
    CHECK(wide.frames == 1);
    CHECK(wide.data == std::vector<double>{1, 3, 5});

    CHECK_THROWS_AS(delay_embed(c, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(delay_embed(c, 0, 1), std::invalid_argument);
}

TEST_CASE("cca: self-correlation is ~1") {
    Rng rng(3);
    PitchCurve c = curve_of({});
    for (int i = 0; i < 150; ++i)
        c.values.push_back(24.0 + 3.0 * std::sin(0.2 * i) + rng.uniform(-0.3, 0.3));
    c.voiced.assign(c.values.size(), 1);
    const auto e = delay_embed(c, 4, 1);
    const auto cca = cca_fit(e, e, identity_path(e.frames), 1e-6, 1);
    CHECK(cca.correlations[0] >= 1.0 - 1e-6);
}

TEST_CASE("cca: negating one side leaves the correlation unchanged") {
    Rng rng(4);
    PitchCurve a = curve_of({}), b = curve_of({});
    for (int i = 0; i < 120; ++i) {
        const double base = std::sin(0.15 * i) + 0.3 * rng.normal();
        a.values.push_back(base + 0.1 * rng.normal());
        b.values.push_back(0.7 * base + 0.1 * rng.normal());
    }
    a.voiced.assign(a.values.size(), 1);
    b.voiced.assign(b.values.size(), 1);
    const auto ea = delay_embed(a, 3, 1);
    auto eb = delay_embed(b, 3, 1);
    const auto base = cca_fit(ea, eb, identity_path(ea.frames), 1e-5, 2);
    for (double& v : eb.data) v = -v;
    const auto negated = cca_fit(ea, eb, identity_path(ea.frames), 1e-5, 2);
    for (std::size_t k = 0; k < base.correlations.size(); ++k)
        CHECK(negated.correlations[k] == doctest::Approx(base.correlations[k]).epsilon(1e-9));
}

TEST_CASE("cca matches the closed form of a constructed 2x2 covariance model") {
    // Build samples whose empirical covariances are exactly (I, B, BB'+CC'):
    // whiten X, take Y = B X + C E with E whitened and orthogonalized
    // against X. Closed-form canonical correlations: b_i / sqrt(b_i^2+c_i^2).
    Rng rng(5);
    const int T = 400;
    Eigen::MatrixXd X(2, T), E(2, T);
    for (int t = 0; t < T; ++t) {
        X(0, t) = rng.normal();
        X(1, t) = rng.normal();
        E(0, t) = rng.normal();
        E(1, t) = rng.normal();
    }
    auto whiten = [&](Eigen::MatrixXd m) {
        m.colwise() -= Eigen::VectorXd(m.rowwise().mean());
        const Eigen::MatrixXd cov = m * m.transpose() / T;
        return Eigen::MatrixXd(Eigen::LLT<Eigen::MatrixXd>(cov).matrixL().solve(m));
    };
    X = whiten(X);
    E.colwise() -= Eigen::VectorXd(E.rowwise().mean());
    E -= (E * X.transpose() / T) * X;  // decorrelate from X (X is whitened)
    E = whiten(E);

    const Eigen::Vector2d b(0.9, 0.4), c(0.3, 0.8);
    const Eigen::MatrixXd Y = b.asDiagonal() * X + c.asDiagonal() * E;

    EmbeddedSequence sx{static_cast<std::size_t>(T), 2, {}};
    EmbeddedSequence sy{static_cast<std::size_t>(T), 2, {}};
    sx.data.resize(2 * T);
    sy.data.resize(2 * T);
    for (int t = 0; t < T; ++t)
        for (int d = 0; d < 2; ++d) {
            sx.data[static_cast<std::size_t>(t) * 2 + d] = X(d, t);
            sy.data[static_cast<std::size_t>(t) * 2 + d] = Y(d, t);
        }
    const auto cca = cca_fit(sx, sy, identity_path(static_cast<std::size_t>(T)), 0.0, 2);

    std::vector<double> expected{b[0] / std::hypot(b[0], c[0]), b[1] / std::hypot(b[1], c[1])};
    std::sort(expected.rbegin(), expected.rend());
    CHECK(cca.correlations[0] == doctest::Approx(expected[0]).epsilon(1e-6));
    CHECK(cca.correlations[1] == doctest::Approx(expected[1]).epsilon(1e-6));
}

TEST_CASE("cca: singular covariance with reg=0 is rejected") {
    EmbeddedSequence x{3, 2, {1, 1, 2, 2, 3, 3}};  // rank-1 rows
    AlignmentPath pairs = identity_path(3);
    CHECK_THROWS_WITH_AS(cca_fit(x, x, pairs, 0.0, 1), doctest::Contains("reg"),
                         std::invalid_argument);
    CHECK_NOTHROW(cca_fit(x, x, pairs, 1e-4, 1));
}

TEST_CASE("ctw_align: identical curves converge to the diagonal immediately") {
    const auto tmpl = gen_template(TemplateParams{}, 9);
    const auto c = hz_to_semitones(tmpl);
    const auto res = ctw_align(c, c);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    REQUIRE(res.path.pairs.size() == c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
        CHECK(res.path.pairs[k] == std::pair{static_cast<int>(k), static_cast<int>(k)});
    CHECK(is_valid_path(res.path, c.size(), c.size()));
}

TEST_CASE("ctw_align: constant offset does not change the path") {
    for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
        const SynthPair pair = make_synth_pair(TemplateParams{}, AmateurParams{}, seed, 0);
        const auto amateur = hz_to_semitones(pair.amateur);
        const auto tmpl = hz_to_semitones(pair.tmpl);
        const auto base = ctw_align(amateur, tmpl);
        PitchCurve shifted = amateur;
        for (double& v : shifted.values) v += 4.0;
        const auto moved = ctw_align(shifted, tmpl);
        CHECK(moved.path.pairs == base.path.pairs);
    }
}

TEST_CASE("ctw_align: iteration cap and path validity on varied inputs") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        AmateurParams ap;
        ap.offkey_prob = 0.7;
        const SynthPair pair = make_synth_pair(TemplateParams{}, ap, 1000 + seed, seed);
        const auto res =
            ctw_align(hz_to_semitones(pair.amateur), hz_to_semitones(pair.tmpl));
        CHECK(res.iterations <= CtwParams{}.max_iter);
        CHECK(is_valid_path(res.path, pair.amateur.size(), pair.tmpl.size()));
    }
}

TEST_CASE("ctw_align rejects curves too short to embed") {
    const auto tiny = curve_of({1, 2, 3});
    CHECK_THROWS_AS(ctw_align(tiny, tiny), std::invalid_argument);
}
