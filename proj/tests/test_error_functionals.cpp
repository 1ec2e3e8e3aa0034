#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wavg/error_functionals.hpp"
#include "wavg/rng.hpp"

using namespace wavg;

// relative comparison that also accepts exact zeros on both sides
#define CHECK_REL(a, b, rel)                                                                 \
    do {                                                                                     \
        const double check_a = (a), check_b = (b);                                           \
        CHECK(std::abs(check_a - check_b) <=                                                 \
              (rel) * std::max({std::abs(check_a), std::abs(check_b), 1e-300}));             \
    } while (0)

namespace {

// Brute-force oracles: direct O(k^2) products and double sums, independent
// of the streaming recurrences they check.

double oracle_factor(const ScheduleParams& p, double cbar, std::int64_t ell) {
    return 1.0 - cbar * std::pow(p.m() / (static_cast<double>(ell) + p.m()), p.alpha);
}

double oracle_product(const ScheduleParams& p, double cbar, std::int64_t from, std::int64_t to) {
    double prod = 1.0;  // empty product for from > to
    for (std::int64_t ell = from; ell <= to; ++ell) prod *= oracle_factor(p, cbar, ell);
    return prod;
}

double oracle_gamma(const ScheduleParams& p, std::int64_t t) {
    return p.c * std::pow(p.m() / (static_cast<double>(t) + p.m()), p.alpha);
}

double oracle_weight(const ScheduleParams& p, std::int64_t j) {
    return std::pow(static_cast<double>(j), p.beta);
}

double oracle_g_norm(const ScheduleParams& p, double cbar, std::int64_t i) {
    double sum = 0.0;
    for (std::int64_t j = i + 1; j <= p.k_max; ++j)
        sum += oracle_weight(p, j) * oracle_product(p, cbar, i + 1, j - 1);
    return oracle_gamma(p, i) * sum;
}

double oracle_tau(const ScheduleParams& p, double cbar) {
    double sw = 0.0, swc = 0.0;
    for (std::int64_t j = 1; j <= p.k_max; ++j) {
        sw += oracle_weight(p, j);
        swc += oracle_weight(p, j) * oracle_product(p, cbar, 0, j - 1);
    }
    return swc / sw;
}

double oracle_kappa(const ScheduleParams& p, double cbar) {
    double sw = 0.0, sg2 = 0.0;
    for (std::int64_t j = 1; j <= p.k_max; ++j) sw += oracle_weight(p, j);
    for (std::int64_t i = 0; i < p.k_max; ++i) {
        const double g = oracle_g_norm(p, cbar, i);
        sg2 += g * g;
    }
    return std::sqrt(sg2) / sw;
}

double oracle_theta(const ScheduleParams& p, double cbar) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < p.k_max; ++i) {
        const double g = oracle_gamma(p, i);
        const double c = oracle_product(p, cbar, i + 1, p.k_max - 1);
        sum += g * g * c * c;
    }
    return std::sqrt(sum);
}

ScheduleParams random_params(RngStream& rng, std::int64_t max_k) {
    ScheduleParams p;
    p.alpha = 2.0 * rng.next_unit();
    p.beta = 5.0 * rng.next_unit();
    p.c = 0.1 + 0.9 * rng.next_unit();
    p.delta = rng.next_unit();
    p.k_max = 1 + static_cast<std::int64_t>(rng.next_unit() * static_cast<double>(max_k - 1));
    return p;
}

}  // namespace

TEST_CASE("forward contractions") {
    SUBCASE("cbar = 1 with constant steps zeroes every product") {
        const auto norms = forward_contraction_norms({0.0, 0.0, 1.0, 0.0, 20}, 1.0);
        for (const double v : norms) CHECK(v == 0.0);
    }
    SUBCASE("matches the direct product") {
        // M = 2 via delta = 1/6 at k_max = 6
        ScheduleParams p{1.0, 0.0, 1.0, 1.0 / 6.0, 6};
        const auto norms = forward_contraction_norms(p, 0.3);
        for (std::int64_t j = 0; j < p.k_max; ++j)
            CHECK_REL(norms[static_cast<std::size_t>(j)], oracle_product(p, 0.3, 0, j), 1e-14);
    }
    SUBCASE("strictly decreasing for cbar in (0,1)") {
        const auto norms = forward_contraction_norms({0.7, 0.0, 1.0, 0.2, 50}, 0.4);
        for (std::size_t j = 1; j < norms.size(); ++j) CHECK(norms[j] < norms[j - 1]);
        for (const double v : norms) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("backward contractions") {
    SUBCASE("empty product convention at j = k") {
        const auto norms = backward_contraction_norms({0.3, 0.0, 1.0, 0.0, 9}, 0.5);
        CHECK(norms.back() == 1.0);
        CHECK(norms.size() == 10);
    }
    SUBCASE("constant-step values (0.125, 0.25, 0.5, 1)") {
        const auto norms = backward_contraction_norms({0.0, 0.0, 1.0, 0.0, 3}, 0.5);
        CHECK_REL(norms[0], 0.125, 1e-15);
        CHECK_REL(norms[1], 0.25, 1e-15);
        CHECK_REL(norms[2], 0.5, 1e-15);
        CHECK(norms[3] == 1.0);
    }
    SUBCASE("telescopes against forward products for alpha = 0") {
        ScheduleParams p{0.0, 0.0, 1.0, 0.0, 40};
        const double cbar = 0.2;
        const auto fwd = forward_contraction_norms(p, cbar);
        const auto bwd = backward_contraction_norms(p, cbar);
        for (std::int64_t j = 1; j < p.k_max; ++j)
            CHECK_REL(bwd[static_cast<std::size_t>(j)],
                      fwd[static_cast<std::size_t>(p.k_max - 1)] /
                          fwd[static_cast<std::size_t>(j - 1)],
                      1e-12);
        CHECK_REL(bwd.front(), fwd.back(), 1e-12);
    }
    SUBCASE("non-decreasing in j") {
        const auto norms = backward_contraction_norms({1.3, 0.0, 0.9, 0.4, 60}, 0.7);
        for (std::size_t j = 1; j < norms.size(); ++j) CHECK(norms[j] >= norms[j - 1]);
    }
}

TEST_CASE("theta") {
    SUBCASE("k = 1 returns the single step length") {
        CHECK_REL(theta({1.0, 0.0, 0.7, 0.3, 1}, 0.5), 0.7, 1e-15);
    }
    SUBCASE("cbar = 1 kills all but the last noise term") {
        CHECK(theta({0.0, 0.0, 1.0, 0.0, 5}, 1.0) == 1.0);
    }
    SUBCASE("geometric series for constant steps") {
        // theta^2 = sum_{j=0}^{k-1} (1-cbar)^{2j} at c = 1
        const std::int64_t k = 100;
        const double cbar = 0.1;
        double expected = 0.0;
        for (std::int64_t j = 0; j < k; ++j)
            expected += std::pow(1.0 - cbar, 2.0 * static_cast<double>(j));
        CHECK_REL(theta({0.0, 0.0, 1.0, 0.0, k}, cbar), std::sqrt(expected), 1e-13);
    }
}

TEST_CASE("g-norm sequence") {
    SUBCASE("k = 1 reduces to c") {
        const auto seq = g_norm_seq({0.9, 1.3, 0.42, 0.5, 1}, 0.3);
        REQUIRE(seq.g_norms.size() == 1);
        CHECK_REL(seq.g_norms[0], 0.42, 1e-15);
        CHECK(seq.weight_sum == 1.0);
    }
    SUBCASE("constant-schedule closed form c(1-(1-cbar)^j)/cbar") {
        ScheduleParams p{0.0, 0.0, 0.6, 0.0, 30};
        const double cbar = 0.25;
        const auto seq = g_norm_seq(p, cbar);
        for (std::int64_t j = 1; j <= p.k_max; ++j) {
            const double expected =
                p.c * (1.0 - std::pow(1.0 - cbar, static_cast<double>(j))) / cbar;
            CHECK_REL(seq.g_norms[static_cast<std::size_t>(p.k_max - j)], expected, 1e-12);
        }
    }
    SUBCASE("matches the direct double sum") {
        // M = 2 via delta = 1/8 at k_max = 8
        ScheduleParams p{0.5, 0.7, 1.0, 1.0 / 8.0, 8};
        const auto seq = g_norm_seq(p, 0.3);
        double sw = 0.0;
        for (std::int64_t j = 1; j <= p.k_max; ++j) sw += oracle_weight(p, j);
        CHECK_REL(seq.weight_sum, sw, 1e-14);
        for (std::int64_t i = 0; i < p.k_max; ++i)
            CHECK_REL(seq.g_norms[static_cast<std::size_t>(i)], oracle_g_norm(p, 0.3, i), 1e-12);
    }
}

TEST_CASE("recurrences match brute force on a random grid") {
    RngStream rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        const ScheduleParams p = random_params(rng, 200);
        const double cbar = 0.001 + 0.998 * rng.next_unit();
        CHECK_REL(tau(p, cbar), oracle_tau(p, cbar), 1e-12);
        CHECK_REL(kappa(p, cbar), oracle_kappa(p, cbar), 1e-12);
        CHECK_REL(theta(p, cbar), oracle_theta(p, cbar), 1e-12);
        const auto fwd = forward_contraction_norms(p, cbar);
        const auto bwd = backward_contraction_norms(p, cbar);
        for (std::int64_t j = 0; j < p.k_max; ++j) {
            CHECK_REL(fwd[static_cast<std::size_t>(j)], oracle_product(p, cbar, 0, j), 1e-12);
            CHECK_REL(bwd[static_cast<std::size_t>(j)], oracle_product(p, cbar, j, p.k_max - 1),
                      1e-12);
        }
    }
}

TEST_CASE("closed forms") {
    SUBCASE("edge values") {
        CHECK(tau_closed_form(1.0, 50) == 0.0);
        CHECK_REL(tau_closed_form(0.3, 1), 0.7, 1e-15);
        CHECK_REL(kappa_closed_form(0.42, 0.3, 1), 0.42, 1e-12);
        CHECK_REL(kappa_closed_form(0.5, 1.0, 16), 0.125, 1e-12);
    }
    SUBCASE("match the recurrence path to 1e-10 over a random grid") {
        RngStream rng(31337);
        for (int trial = 0; trial < 50; ++trial) {
            const double cbar = 0.001 + 0.998 * rng.next_unit();
            const std::int64_t k =
                1 + static_cast<std::int64_t>(std::pow(10.0, 4.0 * rng.next_unit()));
            ScheduleParams p{0.0, 0.0, 1.0, 0.0, k};
            p.c = 0.1 + 0.9 * rng.next_unit();
            CHECK_REL(tau_closed_form(cbar, k), tau(p, cbar), 1e-10);
            CHECK_REL(kappa_closed_form(p.c, cbar, k), kappa(p, cbar), 1e-10);
        }
    }
    SUBCASE("published grid cells") {
        // d_min grid entries carry three significant digits, half-power
        // horizons round to the nearest integer
        CHECK_REL(std::log10(tau_closed_form(0.316, 100)), -1.6646, 2e-4);
        CHECK_REL(kappa_closed_form(1.0, 0.316, 100), 0.3109, 2e-3);
        CHECK_REL(tau_closed_form(1e-4, 31623), 0.303, 2e-3);
        CHECK_REL(kappa_closed_form(1.0, 1e-4, 31623), 41.792, 5e-3);
    }
}

TEST_CASE("tau and kappa spot values") {
    SUBCASE("k = 1 trivia") {
        CHECK_REL(tau({0.0, 0.0, 1.0, 0.0, 1}, 0.37), 0.63, 1e-15);
        CHECK_REL(kappa({0.0, 0.0, 0.8, 0.0, 1}, 0.37), 0.8, 1e-15);
    }
    SUBCASE("growing weights cut tau by 97.4% at the generic spectrum") {
        // d_min = 0.03, c = 1, k_max = 1e4: beta = 0.7116 against beta = 0
        const double t0 = tau({0.0, 0.0, 1.0, 0.0, 10000}, 0.03);
        const double t1 = tau({0.0, 0.7116, 1.0, 0.0, 10000}, 0.03);
        CHECK_REL(t0, 3.2333e-3, 1e-3);
        CHECK_REL(t1, 8.74e-5, 2e-2);
        const double k0 = kappa({0.0, 0.0, 1.0, 0.0, 10000}, 0.03);
        const double k1 = kappa({0.0, 0.7116, 1.0, 0.0, 10000}, 0.03);
        CHECK_REL(k0, 0.3325, 1e-3);
        CHECK_REL(k1 / k0, 1.10, 2e-3);
    }
}

TEST_CASE("monotonicity in beta: tau falls, kappa rises") {
    const double cbar = 0.1;
    double prev_tau = 2.0, prev_kappa = -1.0;
    for (const double beta : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        ScheduleParams p{0.0, beta, 1.0, 0.0, 500};
        const double t = tau(p, cbar);
        const double k = kappa(p, cbar);
        CHECK(t <= prev_tau);
        CHECK(k >= prev_kappa);
        prev_tau = t;
        prev_kappa = k;
    }
}

TEST_CASE("scale covariance in c at fixed cbar") {
    RngStream rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
        ScheduleParams p = random_params(rng, 300);
        const double cbar = 0.01 + 0.9 * rng.next_unit();
        const double eta = 0.25 + 3.0 * rng.next_unit();
        ScheduleParams scaled = p;
        scaled.c = eta * p.c;
        CHECK_REL(kappa(scaled, cbar), eta * kappa(p, cbar), 1e-13);
        CHECK_REL(tau(scaled, cbar), tau(p, cbar), 1e-13);
    }
}

TEST_CASE("tau stays inside (0,1) for cbar in (0,1)") {
    RngStream rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const ScheduleParams p = random_params(rng, 500);
        const double cbar = 0.001 + 0.998 * rng.next_unit();
        const double t = tau(p, cbar);
        CHECK(t > 0.0);
        CHECK(t < 1.0);
    }
}

TEST_CASE("r objective") {
    ScheduleParams p{0.0, 0.7, 1.0, 0.0, 2000};
    const double cbar = 0.05;
    SUBCASE("mu = 0 returns tau") {
        const auto rep = r_objective(p, cbar, 0.0);
        CHECK(rep.r == rep.tau);
        CHECK_REL(rep.tau, tau(p, cbar), 1e-15);
    }
    SUBCASE("huge mu approaches kappa") {
        const auto rep = r_objective(p, cbar, 1e9);
        CHECK_REL(rep.r, rep.kappa, 1e-8);
    }
    SUBCASE("no-averaging reference column") {
        // alpha = beta = 0, c = 1, d_min = 1e-4 at k_max = 10^4.5
        const auto rep = r_objective({0.0, 0.0, 1.0, 0.0, 31623}, 1e-4, 1.0);
        CHECK_REL(rep.tau, 0.303, 3.5e-3);
        CHECK_REL(rep.kappa, 41.79, 1.5e-3);
    }
}

TEST_CASE("domain rejections") {
    ScheduleParams p{0.0, 0.0, 1.0, 0.0, 10};
    CHECK_THROWS_AS(tau(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tau(p, -0.2), std::invalid_argument);
    CHECK_THROWS_AS(kappa(p, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(theta(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(forward_contraction_norms(p, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(r_objective(p, 0.5, -1.0), std::invalid_argument);
    ScheduleParams big{0.0, 0.0, 1.0, 0.0, 1000};
    CHECK_THROWS_AS(forward_contraction_norms(big, 0.5, 100), std::length_error);
    CHECK_THROWS_AS(g_norm_seq(big, 0.5, 100), std::length_error);
}
