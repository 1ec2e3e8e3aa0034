#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "wavg/optimizer.hpp"
#include "wavg/table_io.hpp"

namespace wavg {

// Experiment drivers shared by the CLI and the acceptance suite.  Every
// driver is deterministic in (configuration, seed) and embeds the resolved
// configuration in the returned table(s).

/// Round to the given number of significant decimal digits.
double round_significant(double value, int digits);

/// Horizons 10^2, 10^2.5, ..., 10^8, with half powers rounded to integers.
std::vector<std::int64_t> default_kmax_grid();

/// Smallest eigenvalues 10^-0.5 .. 10^-4 (d_max = 1), each rounded to three
/// significant digits: 0.316, 0.1, 0.0316, ..., 1e-4.
std::vector<double> default_dmin_grid();

/// log10(tau) and kappa over a (k_max x d_min) grid at alpha = beta = 0 via
/// the closed forms.  Cells with cbar = 1 produce -inf in the log10 table.
struct TauKappaGrid {
    std::vector<std::int64_t> kmax_values;
    std::vector<double> dmin_values;
    std::vector<std::vector<double>> log10_tau;  // [kmax][dmin]
    std::vector<std::vector<double>> kappa;      // [kmax][dmin]
};

TauKappaGrid tau_kappa_grid(const std::vector<std::int64_t>& kmax_values,
                            const std::vector<double>& dmin_values, double c);

std::vector<TableDoc> tau_kappa_tables(const TauKappaGrid& grid, double c);

/// Common knobs of the stochastic suites.
struct SuiteOptions {
    int ensemble = 10;            // runs per grid cell
    std::uint64_t seed = 1;       // base seed; cell seeds derive from it
    std::int64_t max_kmax = 1'000'000;  // desk-scale cap; larger grid cells are skipped
    unsigned threads = 0;         // 0 = hardware concurrency
};

/// Final error of the diagonal-quadratic run across dimensions
/// (beta = 0.7, k_max fixed, ||x0|| = 1).
TableDoc dimension_suite(const std::vector<int>& dims, std::int64_t k_max,
                         const SuiteOptions& opt);

/// Final error across horizons (n fixed, beta = 0.7, ||x0|| = 1).
TableDoc horizon_suite(const std::vector<std::int64_t>& kmaxes, int n, const SuiteOptions& opt);

/// Final error across initial-error scales for beta in {0, 0.7}.
TableDoc initial_error_suite(const std::vector<double>& x0_norms, int n, std::int64_t k_max,
                             const SuiteOptions& opt);

/// Rank-one suite: final error across initial-error scales (k_max fixed).
TableDoc rank_one_initial_error_suite(const std::vector<double>& x0_norms, int n,
                                      std::int64_t k_max, const SuiteOptions& opt);

/// Rank-one suite: final error across horizons for each requested ||x0||.
TableDoc rank_one_horizon_suite(const std::vector<std::int64_t>& kmaxes, int n,
                                const std::vector<double>& x0_norms, const SuiteOptions& opt);

struct MnistPaths {
    std::filesystem::path train_images;
    std::filesystem::path train_labels;
    std::filesystem::path test_images;
    std::filesystem::path test_labels;
};

/// Logistic-regression suite: gradient norm at the weighted average and the
/// false classification rate on the test split, for beta in {0, 0.7} and
/// c = 16/n, x0 = 0.
TableDoc logistic_suite(const std::vector<std::int64_t>& kmaxes, const MnistPaths& paths,
                        const SuiteOptions& opt);

/// Monte-Carlo and algebraic verification of the rank-one noise covariance.
struct CovarianceCheck {
    int n = 0;
    double rho = 0.0;
    std::int64_t samples = 0;
    double mc_rel_frobenius_at_zero = 0.0;    // empirical vs analytic at x = 0
    double mc_rel_frobenius_random_x = 0.0;   // empirical vs analytic at random x
    double algebraic_identity_error = 0.0;    // analytic vs term-by-term reconstruction
};

CovarianceCheck verify_covariance(int n, double rho, std::int64_t samples, std::uint64_t seed);

TableDoc covariance_table(const CovarianceCheck& check, std::uint64_t seed);

/// Term-by-term reconstruction of the rank-one noise covariance from the
/// nine product expectations (the quartic term via quartic_expectation).
/// Used as the independent algebraic route against noise_covariance.
Matrix covariance_from_expectations(const Matrix& a, double rho, std::span<const double> x);

}  // namespace wavg
