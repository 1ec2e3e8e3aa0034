#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavg/rng.hpp"
#include "wavg/schedule.hpp"

using namespace wavg;

TEST_CASE("step length formula") {
    // alpha = 0 gives constant steps regardless of M
    CHECK(step_length({0.0, 0.0, 1.0, 0.3, 500}, 57) == 1.0);
    // alpha = 1, M = 1 (delta = 0): 0.5 * (1/2)^1
    CHECK(step_length({1.0, 0.0, 0.5, 0.0, 100}, 1) == doctest::Approx(0.25).epsilon(1e-15));
    // alpha = 2, delta = 0.1, k_max = 10 => M = 2: (2/5)^2
    CHECK(step_length({2.0, 0.0, 1.0, 0.1, 10}, 3) == doctest::Approx(0.16).epsilon(1e-15));
    // gamma(0) = c always
    CHECK(step_length({1.7, 0.0, 0.37, 0.42, 1000}, 0) == doctest::Approx(0.37).epsilon(1e-15));
}

TEST_CASE("weight formula") {
    CHECK(weight({0.0, 0.0, 1.0, 0.0, 1}, 1000000) == 1.0);
    CHECK(weight({0.0, 1.0, 1.0, 0.0, 1}, 7) == 7.0);
    CHECK(weight({0.0, 0.7, 1.0, 0.0, 1}, 100) == doctest::Approx(25.1189).epsilon(1e-4));
}

TEST_CASE("M is derived from delta and k_max") {
    ScheduleParams p{0.5, 0.0, 1.0, 0.0, 1000};
    CHECK(p.m() == 1.0);
    p.delta = 0.25;
    CHECK(p.m() == 251.0);
}

TEST_CASE("gamma weakly decreasing, w weakly increasing") {
    RngStream rng(20240811);
    for (int trial = 0; trial < 50; ++trial) {
        ScheduleParams p;
        p.alpha = 2.0 * rng.next_unit();
        p.beta = 5.0 * rng.next_unit();
        p.c = 0.1 + 0.9 * rng.next_unit();
        p.delta = rng.next_unit();
        p.k_max = 1 + static_cast<std::int64_t>(rng.next_unit() * 1000);
        for (std::int64_t t = 0; t < 50; ++t) {
            CHECK(step_length(p, t + 1) <= step_length(p, t));
            CHECK(weight(p, t + 2) >= weight(p, t + 1));
        }
    }
}

TEST_CASE("positive delta keeps steps bounded away from zero") {
    ScheduleParams p{1.5, 0.0, 0.8, 0.3, 5000};
    const double bound = p.c * std::pow(p.delta / (1.0 + p.delta), p.alpha);
    CHECK(step_length(p, p.k_max) >= bound);
    // delta = 0 with alpha > 0 decays freely below any such bound
    ScheduleParams q{1.5, 0.0, 0.8, 0.0, 5000};
    CHECK(step_length(q, q.k_max) < bound);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((ScheduleParams{-0.1, 0.0, 1.0, 0.0, 10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ScheduleParams{0.0, -1.0, 1.0, 0.0, 10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ScheduleParams{0.0, 0.0, 0.0, 0.0, 10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ScheduleParams{0.0, 0.0, 1.0, 1.5, 10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ScheduleParams{0.0, 0.0, 1.0, 0.0, 0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((ScheduleParams{2.0, 5.0, 1.0, 1.0, 1}.validate()));
}

TEST_CASE("spectrum model") {
    SpectrumModel s{0.01, 2.0};
    CHECK(s.cond() == doctest::Approx(200.0));
    CHECK(s.cbar(0.5) == doctest::Approx(0.005));
    // cbar at c = 1/d_max equals 1/cond
    CHECK(s.cbar(1.0 / s.d_max) == doctest::Approx(1.0 / s.cond()));
    CHECK_THROWS_AS((SpectrumModel{0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SpectrumModel{0.5, 0.4}.validate()), std::invalid_argument);
}
