#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wavg/schedule.hpp"

namespace wavg {

/// Exact error functionals of the weighted-average SGD iteration on a
/// strongly convex quadratic with reduced contraction rate cbar = c * d_min:
///
///   tau   — contraction factor multiplying the initial error in the
///           expected weighted average,
///   kappa — factor multiplying the noise scale in the standard-deviation
///           bound of the weighted average (exact for isotropic noise),
///   theta — the same noise factor for the plain final iterate (no
///           averaging),
///   r     — the scalar trade-off (tau + mu*kappa) / (1 + mu).
///
/// All quantities are evaluated with O(k_max) streaming recurrences and O(1)
/// extra memory, so horizons up to 10^8 are practical.  The array-returning
/// variants exist for inspection and testing and are capped by an explicit
/// length limit.

struct ErrorReport {
    double tau = 0.0;
    double kappa = 0.0;
    double r = 0.0;
    double mu = 0.0;
    std::optional<double> theta;  // filled only when requested separately
};

/// Norms of the aggregated noise-influence maps together with the weight sum.
struct GNormSeq {
    std::vector<double> g_norms;  // entry i holds ||G_{i,k}|| for i = 0..k-1
    double weight_sum = 0.0;      // sum of w(j) over j = 1..k
};

inline constexpr std::size_t kDefaultSeqLimit = 10'000'000;

/// Norm of one contraction step, ||I - gamma(ell) D|| = 1 - cbar*(M/(ell+M))^alpha.
inline double step_contraction(const ScheduleParams& p, double cbar, std::int64_t ell) noexcept {
    if (p.alpha == 0.0) return 1.0 - cbar;
    const double m = p.m();
    return 1.0 - cbar * std::pow(m / (static_cast<double>(ell) + m), p.alpha);
}

/// Running products of contraction norms from the front: entry j holds
/// prod_{ell=0}^{j} (1 - cbar*(M/(ell+M))^alpha) for j = 0..k_max-1.
std::vector<double> forward_contraction_norms(const ScheduleParams& p, double cbar,
                                              std::size_t limit = kDefaultSeqLimit);

/// Products from the back: entry j holds prod_{ell=j}^{k_max-1} (...) for
/// j = 0..k_max, the last entry being the empty product 1.
std::vector<double> backward_contraction_norms(const ScheduleParams& p, double cbar,
                                               std::size_t limit = kDefaultSeqLimit);

/// All ||G_{i,k}|| via the backward recurrence, plus the weight sum.
GNormSeq g_norm_seq(const ScheduleParams& p, double cbar,
                    std::size_t limit = kDefaultSeqLimit);

/// Optimization-error functional of the weighted average.
double tau(const ScheduleParams& p, double cbar);

/// Stochastic-error functional of the weighted average.
double kappa(const ScheduleParams& p, double cbar);

/// Stochastic-error functional of the plain final iterate.
double theta(const ScheduleParams& p, double cbar);

/// Closed form of tau for alpha = beta = 0:
///   tau = (1-cbar) (1 - (1-cbar)^k) / (k cbar).
/// Exact also in the limit cbar = 1 (returns 0).
double tau_closed_form(double cbar, std::int64_t k_max);

/// Closed form of kappa for alpha = beta = 0; cbar = 1 reduces to c/sqrt(k).
double kappa_closed_form(double c, double cbar, std::int64_t k_max);

/// tau, kappa and the weighted objective r = (tau + mu*kappa)/(1+mu),
/// computed in two streaming passes.
ErrorReport r_objective(const ScheduleParams& p, double cbar, double mu);

}  // namespace wavg
