#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavg/rng.hpp"
#include "wavg/schedule.hpp"

namespace wavg {

/// Contract for producing stochastic gradient samples.  Implementations are
/// immutable after construction; all randomness comes from the caller's
/// stream, so one oracle can be shared across concurrent runs.
class GradientOracle {
  public:
    virtual ~GradientOracle() = default;

    virtual int dimension() const noexcept = 0;

    /// Draw one stochastic gradient at x into g (unbiased: E[g] = grad f(x)).
    virtual void sample(std::span<const double> x, RngStream& rng,
                        std::span<double> g) const = 0;

    virtual bool has_exact_gradient() const noexcept { return false; }

    /// Deterministic full gradient, for diagnostics; throws if unsupported.
    virtual void exact_gradient(std::span<const double> x, std::span<double> g) const;
};

struct RunOptions {
    int batch = 1;                 // samples averaged per step
    bool compensated_sum = false;  // Kahan accumulation of the weighted average
    std::optional<std::vector<double>> x_star;  // reference solution for error norms
};

/// Outcome of one SGD run with streaming weighted averaging.
struct RunRecord {
    std::uint64_t seed = 0;
    ScheduleParams params;
    std::vector<double> x_final_avg;      // weighted average of the iterates
    std::vector<double> x_final_iterate;  // last iterate
    double weight_sum = 0.0;              // sum of w(j), j = 1..k_max
    std::optional<double> error_norm_avg;      // ||x_final_avg - x_star||
    std::optional<double> error_norm_iterate;  // ||x_final_iterate - x_star||
};

/// Run k_max stochastic gradient steps from x0 with the given schedule,
/// maintaining only the current iterate, the weighted-sum accumulator and
/// the weight sum (O(n) memory; no iterate history).  Per-step randomness is
/// keyed by (seed, step), and batches > 1 average that many oracle draws.
/// Throws if an iterate turns non-finite, naming the offending step.
RunRecord run(const GradientOracle& oracle, std::span<const double> x0,
              const ScheduleParams& params, std::uint64_t seed, const RunOptions& options = {});

struct EnsembleStats {
    double mean_error_avg = 0.0;
    double stddev_error_avg = 0.0;
    double mean_error_iterate = 0.0;
    double stddev_error_iterate = 0.0;
    int completed = 0;
};

struct EnsembleResult {
    std::vector<RunRecord> runs;       // runs[i] used seed derive_seed(base_seed, i)
    std::vector<std::string> failures; // failures[i] nonempty if run i aborted
    bool partial = false;              // true when at least one run aborted

    /// Mean/stddev of the error norms over completed runs (requires x_star).
    EnsembleStats stats() const;
};

/// Independent runs with seeds derived deterministically from base_seed,
/// executed on up to `threads` worker threads (0 = hardware concurrency).
/// Aborted runs are recorded and the remaining ones continue.
EnsembleResult run_ensemble(const GradientOracle& oracle, std::span<const double> x0,
                            const ScheduleParams& params, int n_runs, std::uint64_t base_seed,
                            const RunOptions& options = {}, unsigned threads = 0);

}  // namespace wavg
