#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wavg/error_functionals.hpp"
#include "wavg/schedule.hpp"

namespace wavg {

/// One candidate schedule in the search space (k_max is fixed per problem).
struct ParamPoint {
    double alpha = 0.0;
    double beta = 0.0;
    double c = 1.0;
    double delta = 0.0;
};

/// Box constraints for the derivative-free search over (alpha, beta, c, delta).
struct SearchBox {
    std::array<double, 2> alpha_range{0.0, 2.0};
    std::array<double, 2> beta_range{0.0, 5.0};
    std::array<double, 2> c_range{0.1, 1.0};
    std::array<double, 2> delta_range{0.0, 1.0};

    /// Default box with the c-range scaled by 1/d_max.
    static SearchBox for_spectrum(const SpectrumModel& spectrum);

    bool contains(const ParamPoint& p) const noexcept;
    void validate() const;
};

/// The four canonical multi-start points: (alpha, beta) in
/// {(0,0), (0,2), (1/2,0), (1/2,2)} with delta = 0.1 and c at half the
/// upper step-length bound, clamped into the box.
std::vector<ParamPoint> default_starts(const SearchBox& box);

struct OptimizationResult {
    ScheduleParams params;
    ErrorReport report;
    int start_index = 0;     // which start produced this point
    long evaluations = 0;    // objective evaluations spent on that start
};

struct TradeoffResult {
    ScheduleParams params;
    ErrorReport report;        // tau/kappa at the returned point (mu recorded)
    double v1 = 0.0;           // tau / tau_baseline - 1
    double v2 = 0.0;           // kappa / kappa_baseline - 1
    double objective = 0.0;    // v1 + mu * v2
    double tau_baseline = 0.0;
    double kappa_baseline = 0.0;
    int start_index = 0;
    long evaluations = 0;
};

struct PatternSearchSettings {
    double initial_step = 0.25;  // in normalized box coordinates
    double min_step = 1e-6;      // stop when the polling step falls below this
    long max_evaluations = 5000; // per start
};

/// Minimize r = (tau + mu*kappa)/(1+mu) over the box with multi-start
/// pattern search (coordinate polling with shrinking step; deterministic).
/// Returns the best local minimizer over all starts; ties break toward the
/// lower start index.  Throws if any start lies outside the box.
OptimizationResult minimize_r(const SearchBox& box, const SpectrumModel& spectrum, double mu,
                              std::int64_t k_max, const std::vector<ParamPoint>& starts,
                              const PatternSearchSettings& settings = {});

/// Per-start results of the same search, exposing every basin found.
std::vector<OptimizationResult> minimize_r_multistart(
    const SearchBox& box, const SpectrumModel& spectrum, double mu, std::int64_t k_max,
    const std::vector<ParamPoint>& starts, const PatternSearchSettings& settings = {});

/// Minimize v1 + mu*v2 subject to v1, v2 <= slack, where v1 and v2 are the
/// relative changes of tau and kappa against the equal-weight baseline
/// (alpha = beta = delta = 0, c at the box upper bound).  Solved with an
/// exact penalty on the slack constraints; the baseline itself is feasible,
/// so the result never violates the constraints.
TradeoffResult minimize_tradeoff(const SearchBox& box, const SpectrumModel& spectrum, double mu,
                                 std::int64_t k_max, double slack = 0.1,
                                 const std::vector<ParamPoint>& starts = {},
                                 const PatternSearchSettings& settings = {});

struct RobustnessCell {
    double tau_ratio = 0.0;    // tau(params) / tau(baseline)
    double kappa_ratio = 0.0;  // kappa(params) / kappa(baseline)
};

/// tau/kappa ratios of a fixed schedule against the equal-weight baseline
/// across a grid of condition numbers (d_max = 1) and horizons.
struct RobustnessScan {
    std::vector<double> cond_grid;
    std::vector<std::int64_t> kmax_grid;
    std::vector<std::vector<RobustnessCell>> cells;  // [kmax index][cond index]
};

RobustnessScan parameter_robustness_scan(const ParamPoint& params,
                                         const std::vector<double>& cond_grid,
                                         const std::vector<std::int64_t>& kmax_grid);

}  // namespace wavg
