#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace wavg {

/// Step-length and averaging-weight schedule family
///
///   gamma(t) = c * (M / (t + M))^alpha,   w(j) = j^beta,
///
/// with the step-length offset M = 1 + delta * k_max derived from the
/// fraction delta.  alpha controls how fast the step lengths decay, beta
/// how fast the averaging weights grow; alpha = beta = 0 gives constant
/// steps and the plain arithmetic mean.
struct ScheduleParams {
    double alpha = 0.0;         // step decay exponent, >= 0
    double beta = 0.0;          // weight growth exponent, >= 0
    double c = 1.0;             // base step length, in (0, 1/d_max]
    double delta = 0.0;         // offset fraction in [0, 1]; M = 1 + delta*k_max
    std::int64_t k_max = 1;     // iteration budget, >= 1

    /// Derived offset M = 1 + delta * k_max (callers never set M directly).
    double m() const noexcept { return 1.0 + delta * static_cast<double>(k_max); }

    void validate() const {
        if (!(alpha >= 0.0)) throw std::invalid_argument("ScheduleParams: alpha must be >= 0");
        if (!(beta >= 0.0)) throw std::invalid_argument("ScheduleParams: beta must be >= 0");
        if (!(c > 0.0)) throw std::invalid_argument("ScheduleParams: c must be > 0");
        if (!(delta >= 0.0 && delta <= 1.0))
            throw std::invalid_argument("ScheduleParams: delta must be in [0, 1]");
        if (k_max < 1) throw std::invalid_argument("ScheduleParams: k_max must be >= 1");
    }
};

/// Spectrum summary of the diagonal Hessian: only the extreme eigenvalues
/// enter the error functionals, and they do so through cbar = c * d_min.
struct SpectrumModel {
    double d_min = 1.0;         // smallest Hessian eigenvalue, > 0
    double d_max = 1.0;         // largest Hessian eigenvalue, >= d_min

    double cond() const noexcept { return d_max / d_min; }

    /// Reduced contraction rate for base step length c.
    double cbar(double c) const noexcept { return c * d_min; }

    void validate() const {
        if (!(d_min > 0.0)) throw std::invalid_argument("SpectrumModel: d_min must be > 0");
        if (!(d_max >= d_min)) throw std::invalid_argument("SpectrumModel: d_max must be >= d_min");
    }
};

/// gamma(t) = c * (M/(t+M))^alpha.  Weakly decreasing in t; gamma(0) = c.
inline double step_length(const ScheduleParams& p, std::int64_t t) noexcept {
    if (p.alpha == 0.0) return p.c;
    const double m = p.m();
    return p.c * std::pow(m / (static_cast<double>(t) + m), p.alpha);
}

/// w(j) = j^beta for j >= 1.  Identically 1 for beta = 0.
inline double weight(const ScheduleParams& p, std::int64_t j) noexcept {
    if (p.beta == 0.0) return 1.0;
    if (p.beta == 1.0) return static_cast<double>(j);
    return std::pow(static_cast<double>(j), p.beta);
}

}  // namespace wavg
