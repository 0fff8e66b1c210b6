#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "pitchwarp/curve.hpp"
#include "pitchwarp/rng.hpp"

using namespace pitchwarp;

TEST_CASE("from_frames basics") {
    const auto c = from_frames({220, 0, 220}, {1, 0, 1}, 128.0 / 22050.0);
    CHECK(c.size() == 3);
    CHECK(c.unit == Unit::Hz);
    CHECK(c.hop_seconds == doctest::Approx(0.005805).epsilon(1e-3));

    const auto empty = from_frames({}, {}, 0.01);
    CHECK(empty.empty());

    const auto single = from_frames({440}, {1}, 0.01);
    CHECK(single.size() == 1);

    CHECK_THROWS_AS(from_frames({1, 2}, {1}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(from_frames({440}, {1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(from_frames({-1}, {0}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(from_frames({0}, {1}, 0.01), std::invalid_argument);  // voiced but no F0
}

TEST_CASE("interpolate_unvoiced fills gaps linearly and holds edges") {
    const auto c = from_frames({200, 0, 0, 260}, {1, 0, 0, 1}, 0.01);
    const auto filled = interpolate_unvoiced(c);
    CHECK(filled.values[0] == doctest::Approx(200));
    CHECK(filled.values[1] == doctest::Approx(220));
    CHECK(filled.values[2] == doctest::Approx(240));
    CHECK(filled.values[3] == doctest::Approx(260));
    CHECK(filled.voiced == c.voiced);

    const auto edge = interpolate_unvoiced(from_frames({0, 300}, {0, 1}, 0.01));
    CHECK(edge.values[0] == 300);
    CHECK(edge.values[1] == 300);

    CHECK_THROWS_AS(interpolate_unvoiced(from_frames({0, 0}, {0, 0}, 0.01)),
                    std::invalid_argument);
}

TEST_CASE("interpolate_unvoiced: gap-free and idempotent over random curves") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + rng.uniform_int(0, 60);
        std::vector<double> values(n, 0.0);
        std::vector<std::uint8_t> voiced(n, 0);
        bool any = false;
        for (int i = 0; i < n; ++i) {
            if (rng.uniform() < 0.6) {
                voiced[i] = 1;
                values[i] = rng.uniform(80.0, 800.0);
                any = true;
            }
        }
        if (!any) {
            voiced[n / 2] = 1;
            values[n / 2] = 220.0;
        }
        const auto filled = interpolate_unvoiced(from_frames(values, voiced, 0.01));
        for (double v : filled.values) CHECK(v > 0.0);
        const auto again = interpolate_unvoiced(filled);
        CHECK(again.values == filled.values);
    }
}

TEST_CASE("hz_to_semitones") {
    auto curve = from_frames({440, 880, 466.16}, {1, 1, 1}, 0.01);
    const auto st = hz_to_semitones(curve, 440.0);
    CHECK(st.unit == Unit::Semitone);
    CHECK(st.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(st.values[1] == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(st.values[2] == doctest::Approx(1.0).epsilon(1e-3));

    CHECK_THROWS_AS(hz_to_semitones(from_frames({0, 220}, {0, 1}, 0.01)),
                    std::invalid_argument);
    CHECK_THROWS_AS(hz_to_semitones(curve, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hz_to_semitones(st), std::invalid_argument);  // already semitones
}

TEST_CASE("hz_to_semitones: +k st equals scaling Hz by 2^(k/12)") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const double k = rng.uniform(-12.0, 12.0);
        std::vector<double> hz(30);
        std::vector<std::uint8_t> v(30, 1);
        for (auto& x : hz) x = rng.uniform(100.0, 900.0);
        auto base = hz_to_semitones(from_frames(hz, v, 0.01));
        std::vector<double> scaled = hz;
        for (auto& x : scaled) x *= std::exp2(k / 12.0);
        auto shifted = hz_to_semitones(from_frames(scaled, v, 0.01));
        for (std::size_t i = 0; i < hz.size(); ++i)
            CHECK(shifted.values[i] - base.values[i] == doctest::Approx(k).epsilon(1e-6));
    }
}

TEST_CASE("z_normalize") {
    const auto z = z_normalize(from_frames({1, 2, 3}, {1, 1, 1}, 0.01));
    double mean = 0, var = 0;
    for (double v : z.values) mean += v;
    mean /= 3;
    for (double v : z.values) var += (v - mean) * (v - mean);
    var /= 3;
    CHECK(std::fabs(mean) < 1e-9);
    CHECK(std::fabs(std::sqrt(var) - 1.0) < 1e-9);

    const auto two = z_normalize(from_frames({220, 440}, {1, 1}, 0.01));
    CHECK(two.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(two.values[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto again = z_normalize(two);
    CHECK(again.values[0] == doctest::Approx(two.values[0]).epsilon(1e-9));
    CHECK(again.values[1] == doctest::Approx(two.values[1]).epsilon(1e-9));

    CHECK_THROWS_AS(z_normalize(from_frames({5, 5, 5}, {1, 1, 1}, 0.01)),
                    std::invalid_argument);
    CHECK_THROWS_AS(z_normalize(from_frames({5}, {1}, 0.01)), std::invalid_argument);
}

TEST_CASE("z_normalize masks unvoiced frames") {
    const auto z = z_normalize(from_frames({100, 0, 300}, {1, 0, 1}, 0.01));
    CHECK(z.values[1] == 0.0);
    CHECK(z.values[0] == doctest::Approx(-1.0));
    CHECK(z.values[2] == doctest::Approx(1.0));
}
