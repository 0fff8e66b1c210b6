#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "pitchwarp/eval_synth.hpp"
#include "pitchwarp/rng.hpp"
#include "pitchwarp/warp_apply.hpp"

using namespace pitchwarp;

namespace {

FeatureMatrix features_of(std::vector<float> data, std::size_t dim) {
    FeatureMatrix f;
    f.dim = dim;
    f.frames = data.size() / dim;
    f.data = std::move(data);
    return f;
}

}  // namespace

TEST_CASE("identity path is a bitwise no-op") {
    const auto f = features_of({1.5f, -2.0f, 3.25f, 0.0f, 7.0f, -1.0f}, 2);
    AlignmentPath path;
    path.pairs = {{0, 0}, {1, 1}, {2, 2}};
    const auto out = warp_features(f, path, 3);
    CHECK(out.data == f.data);
    CHECK(out.dim == 2);
    CHECK(out.frames == 3);
}

TEST_CASE("many-to-one frames are averaged") {
    const auto f = features_of({2.0f, 4.0f}, 1);
    AlignmentPath path;
    path.pairs = {{0, 0}, {1, 0}};
    const auto out = warp_features(f, path, 1);
    REQUIRE(out.frames == 1);
    CHECK(out.data[0] == 3.0f);

    const auto nearest = warp_features(f, path, 1, WarpAggregation::Nearest);
    CHECK(nearest.data[0] == 2.0f);
}

TEST_CASE("one-to-many duplicates the source frame") {
    const auto f = features_of({5.0f}, 1);
    AlignmentPath path;
    path.pairs = {{0, 0}, {0, 1}, {0, 2}};
    const auto out = warp_features(f, path, 3);
    CHECK(out.data == std::vector<float>{5.0f, 5.0f, 5.0f});
}

TEST_CASE("shape checks") {
    const auto f = features_of({1, 2, 3, 4}, 2);
    AlignmentPath path;
    path.pairs = {{0, 0}, {1, 1}};
    CHECK_THROWS_AS(warp_features(f, path, 3), std::invalid_argument);   // endpoint mismatch
    FeatureMatrix empty;
    CHECK_THROWS_AS(warp_features(empty, path, 2), std::invalid_argument);
    AlignmentPath broken;
    broken.pairs = {{0, 0}, {2, 1}};
    CHECK_THROWS_AS(warp_features(f, broken, 2), std::invalid_argument);
}

TEST_CASE("warping amateur F0 through the ground-truth path recovers the template") {
    AmateurParams warp_only;
    warp_only.offkey_prob = 0.0;
    warp_only.jitter_st = 0.0;
    warp_only.drift_st = 0.0;
    const SynthPair pair = make_synth_pair(TemplateParams{}, warp_only, 2718, 4);
    const auto gt_path = path_from_map(pair.gt_map, pair.tmpl.size());

    FeatureMatrix f0;
    f0.frames = pair.amateur.size();
    f0.dim = 1;
    for (double v : pair.amateur.values) f0.data.push_back(static_cast<float>(v));
    const auto warped = warp_features(f0, gt_path, pair.tmpl.size());

    PitchCurve recovered;
    recovered.hop_seconds = pair.tmpl.hop_seconds;
    recovered.unit = Unit::Hz;
    for (float v : warped.data) recovered.values.push_back(v);
    recovered.voiced.assign(recovered.values.size(), 1);
    CHECK(f0_rmse(recovered, pair.tmpl) < 2.0);
}

TEST_CASE("warp_pitch_to_amateur_timeline") {
    const auto tmpl = gen_template(TemplateParams{}, 8);
    AlignmentPath identity;
    for (std::size_t i = 0; i < tmpl.size(); ++i)
        identity.pairs.emplace_back(static_cast<int>(i), static_cast<int>(i));
    const auto same = warp_pitch_to_amateur_timeline(tmpl, identity);
    CHECK(same.values == tmpl.values);

    const SynthPair pair = make_synth_pair(TemplateParams{}, AmateurParams{}, 11, 2);
    const auto gt_path = path_from_map(pair.gt_map, pair.tmpl.size());
    const auto warped = warp_pitch_to_amateur_timeline(pair.tmpl, gt_path);
    REQUIRE(warped.size() == pair.gt_map.size());
    for (std::size_t i = 0; i < warped.size(); ++i)
        CHECK(warped.values[i] ==
              pair.tmpl.values[static_cast<std::size_t>(pair.gt_map[i])]);
}

TEST_CASE("constant template stays constant under any path") {
    PitchCurve tmpl;
    tmpl.values.assign(7, 220.0);
    tmpl.voiced.assign(7, 1);
    tmpl.hop_seconds = 0.01;
    Rng rng(13);
    AlignmentPath path;
    int i = 0, j = 0;
    path.pairs.emplace_back(0, 0);
    while (i < 11 || j < 6) {
        const bool down = i < 11, right = j < 6;
        const double u = rng.uniform();
        if (down && right && u < 0.4) {
            ++i;
            ++j;
        } else if (down && (u < 0.8 || !right)) {
            ++i;
        } else {
            ++j;
        }
        path.pairs.emplace_back(i, j);
    }
    const auto warped = warp_pitch_to_amateur_timeline(tmpl, path);
    CHECK(warped.size() == 12);
    for (double v : warped.values) CHECK(v == 220.0);
}
