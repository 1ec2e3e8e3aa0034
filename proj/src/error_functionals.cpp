#include "wavg/error_functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavg {

namespace {

void check_domain(const ScheduleParams& p, double cbar) {
    p.validate();
    if (!(cbar > 0.0) || cbar > 1.0)
        throw std::invalid_argument("cbar must lie in (0, 1], got " + std::to_string(cbar));
}

void check_limit(const ScheduleParams& p, std::size_t limit) {
    if (static_cast<std::size_t>(p.k_max) > limit)
        throw std::length_error("sequence request for k_max = " + std::to_string(p.k_max) +
                                " exceeds the limit of " + std::to_string(limit) + " entries");
}

// (M/(t+M))^alpha, the decay factor of gamma at step t.
inline double decay(double m, double alpha, std::int64_t t) noexcept {
    return std::pow(m / (static_cast<double>(t) + m), alpha);
}

}  // namespace

std::vector<double> forward_contraction_norms(const ScheduleParams& p, double cbar,
                                              std::size_t limit) {
    check_domain(p, cbar);
    check_limit(p, limit);
    std::vector<double> norms(static_cast<std::size_t>(p.k_max));
    double cn = 1.0;
    for (std::int64_t j = 0; j < p.k_max; ++j) {
        cn *= step_contraction(p, cbar, j);
        norms[static_cast<std::size_t>(j)] = cn;
    }
    return norms;
}

std::vector<double> backward_contraction_norms(const ScheduleParams& p, double cbar,
                                               std::size_t limit) {
    check_domain(p, cbar);
    check_limit(p, limit);
    std::vector<double> norms(static_cast<std::size_t>(p.k_max) + 1);
    norms.back() = 1.0;  // empty product
    for (std::int64_t j = p.k_max - 1; j >= 0; --j)
        norms[static_cast<std::size_t>(j)] =
            norms[static_cast<std::size_t>(j) + 1] * step_contraction(p, cbar, j);
    return norms;
}

GNormSeq g_norm_seq(const ScheduleParams& p, double cbar, std::size_t limit) {
    check_domain(p, cbar);
    check_limit(p, limit);
    const std::int64_t k = p.k_max;
    const double m = p.m();
    GNormSeq seq;
    seq.g_norms.resize(static_cast<std::size_t>(k));

    // Anchor ||G_{k-1,k}|| = gamma(k-1) * w(k), then walk the recurrence
    //   ||G_{i,k}|| = gamma(i) w(i+1) + ||C_{i+1}|| (gamma(i)/gamma(i+1)) ||G_{i+1,k}||
    // backwards.  u tracks (M/(i+M))^alpha so each step costs one pow.
    double u_next = (p.alpha == 0.0) ? 1.0 : decay(m, p.alpha, k - 1);
    double g = p.c * u_next * weight(p, k);
    seq.g_norms[static_cast<std::size_t>(k - 1)] = g;
    seq.weight_sum = weight(p, k);
    for (std::int64_t i = k - 2; i >= 0; --i) {
        const double u = (p.alpha == 0.0) ? 1.0 : decay(m, p.alpha, i);
        const double contraction = 1.0 - cbar * u_next;
        g = p.c * u * weight(p, i + 1) + contraction * (u / u_next) * g;
        seq.g_norms[static_cast<std::size_t>(i)] = g;
        seq.weight_sum += weight(p, i + 1);
        u_next = u;
    }
    return seq;
}

double tau(const ScheduleParams& p, double cbar) {
    check_domain(p, cbar);
    double cn = 1.0;       // ||C_{0,j-1}|| as j advances
    double sum_w = 0.0;
    double sum_wc = 0.0;
    for (std::int64_t j = 1; j <= p.k_max; ++j) {
        cn *= step_contraction(p, cbar, j - 1);
        const double wj = weight(p, j);
        sum_w += wj;
        sum_wc += wj * cn;
    }
    return sum_wc / sum_w;
}

double kappa(const ScheduleParams& p, double cbar) {
    check_domain(p, cbar);
    const std::int64_t k = p.k_max;
    const double m = p.m();
    double u_next = (p.alpha == 0.0) ? 1.0 : decay(m, p.alpha, k - 1);
    double g = p.c * u_next * weight(p, k);
    double sum_g2 = g * g;
    double sum_w = weight(p, k);
    for (std::int64_t i = k - 2; i >= 0; --i) {
        const double u = (p.alpha == 0.0) ? 1.0 : decay(m, p.alpha, i);
        const double contraction = 1.0 - cbar * u_next;
        g = p.c * u * weight(p, i + 1) + contraction * (u / u_next) * g;
        sum_g2 += g * g;
        sum_w += weight(p, i + 1);
        u_next = u;
    }
    return std::sqrt(sum_g2) / sum_w;
}

double theta(const ScheduleParams& p, double cbar) {
    check_domain(p, cbar);
    const std::int64_t k = p.k_max;
    double bn = 1.0;  // ||C_{i+1,k-1}|| starting at the empty product for i = k-1
    double g_last = step_length(p, k - 1);
    double sum = g_last * g_last;
    for (std::int64_t i = k - 2; i >= 0; --i) {
        bn *= step_contraction(p, cbar, i + 1);
        const double gi = step_length(p, i);
        sum += gi * gi * bn * bn;
    }
    return std::sqrt(sum);
}

double tau_closed_form(double cbar, std::int64_t k_max) {
    if (!(cbar > 0.0) || cbar > 1.0)
        throw std::invalid_argument("tau_closed_form: cbar must lie in (0, 1]");
    if (k_max < 1) throw std::invalid_argument("tau_closed_form: k_max must be >= 1");
    if (cbar == 1.0) return 0.0;
    const double k = static_cast<double>(k_max);
    const double q = 1.0 - cbar;
    // 1 - q^k via expm1/log1p; q^k underflows harmlessly for huge k
    const double one_minus_qk = -std::expm1(k * std::log1p(-cbar));
    return q * one_minus_qk / (k * cbar);
}

double kappa_closed_form(double c, double cbar, std::int64_t k_max) {
    if (!(c > 0.0)) throw std::invalid_argument("kappa_closed_form: c must be > 0");
    if (!(cbar > 0.0) || cbar > 1.0)
        throw std::invalid_argument("kappa_closed_form: cbar must lie in (0, 1]");
    if (k_max < 1) throw std::invalid_argument("kappa_closed_form: k_max must be >= 1");
    const double k = static_cast<double>(k_max);
    if (cbar == 1.0) return c / std::sqrt(k);  // only the last noise term survives
    const double q = 1.0 - cbar;
    const double lq = std::log1p(-cbar);
    const double one_minus_qk = -std::expm1(k * lq);
    const double one_minus_q2k = -std::expm1(2.0 * k * lq);
    const double s = k - 2.0 * q * one_minus_qk / cbar + q * q * one_minus_q2k / (cbar * (1.0 + q));
    return c / (k * cbar) * std::sqrt(s);
}

ErrorReport r_objective(const ScheduleParams& p, double cbar, double mu) {
    if (!(mu >= 0.0)) throw std::invalid_argument("r_objective: mu must be >= 0");
    ErrorReport report;
    report.mu = mu;
    report.tau = tau(p, cbar);
    report.kappa = kappa(p, cbar);
    report.r = (report.tau + mu * report.kappa) / (1.0 + mu);
    return report;
}

}  // namespace wavg
