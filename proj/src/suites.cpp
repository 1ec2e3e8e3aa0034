#include "wavg/suites.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "wavg/error_functionals.hpp"
#include "wavg/idx.hpp"
#include "wavg/problems.hpp"
#include "wavg/sgd.hpp"

namespace wavg {

double round_significant(double value, int digits) {
    if (value == 0.0) return 0.0;
    const double scale =
        std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(value))));
    return std::round(value * scale) / scale;
}

std::vector<std::int64_t> default_kmax_grid() {
    std::vector<std::int64_t> grid;
    for (int half = 4; half <= 16; ++half)
        grid.push_back(std::llround(std::pow(10.0, half / 2.0)));
    return grid;
}

std::vector<double> default_dmin_grid() {
    std::vector<double> grid;
    for (int half = 1; half <= 8; ++half)
        grid.push_back(round_significant(std::pow(10.0, -half / 2.0), 3));
    return grid;
}

TauKappaGrid tau_kappa_grid(const std::vector<std::int64_t>& kmax_values,
                            const std::vector<double>& dmin_values, double c) {
    TauKappaGrid grid;
    grid.kmax_values = kmax_values;
    grid.dmin_values = dmin_values;
    grid.log10_tau.resize(kmax_values.size());
    grid.kappa.resize(kmax_values.size());
    for (std::size_t ki = 0; ki < kmax_values.size(); ++ki) {
        grid.log10_tau[ki].resize(dmin_values.size());
        grid.kappa[ki].resize(dmin_values.size());
        for (std::size_t di = 0; di < dmin_values.size(); ++di) {
            const double cbar = c * dmin_values[di];
            if (!(cbar > 0.0) || cbar > 1.0)
                throw std::invalid_argument("tau_kappa_grid: cbar outside (0, 1] for d_min = " +
                                            std::to_string(dmin_values[di]));
            grid.log10_tau[ki][di] = std::log10(tau_closed_form(cbar, kmax_values[ki]));
            grid.kappa[ki][di] = kappa_closed_form(c, cbar, kmax_values[ki]);
        }
    }
    return grid;
}

namespace {

TableDoc grid_table(const TauKappaGrid& grid, const std::vector<std::vector<double>>& values,
                    const char* name, double c) {
    TableDoc doc;
    doc.add_meta("table", name);
    doc.add_meta("c", c);
    doc.columns.push_back("kmax");
    for (const double dmin : grid.dmin_values)
        doc.columns.push_back("dmin=" + format_double(dmin, 6));
    for (std::size_t ki = 0; ki < grid.kmax_values.size(); ++ki) {
        std::vector<std::string> row;
        row.push_back(std::to_string(grid.kmax_values[ki]));
        for (const double v : values[ki]) row.push_back(format_fixed(v, 4));
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

std::vector<double> scaled_ones(int n, double norm) {
    // x0 = norm * e / sqrt(n), so ||x0|| = norm
    const double v = norm / std::sqrt(static_cast<double>(n));
    return std::vector<double>(static_cast<std::size_t>(n), v);
}

std::vector<std::int64_t> apply_kmax_cap(const std::vector<std::int64_t>& kmaxes,
                                         const SuiteOptions& opt, int n) {
    std::vector<std::int64_t> kept;
    for (const std::int64_t k : kmaxes) {
        if (k <= opt.max_kmax) {
            kept.push_back(k);
        } else {
            const double draws = static_cast<double>(k) * n * opt.ensemble;
            std::fprintf(stderr,
                         "suite: skipping k_max=%lld (above the cap %lld; raising it would cost "
                         "roughly %.0f s at this scale)\n",
                         static_cast<long long>(k), static_cast<long long>(opt.max_kmax),
                         draws / 3e7);
        }
    }
    return kept;
}

void append_stats_cells(std::vector<std::string>& row, const EnsembleResult& ensemble) {
    const EnsembleStats stats = ensemble.stats();
    row.push_back(format_double(stats.mean_error_avg, 6));
    row.push_back(format_double(stats.stddev_error_avg, 6));
    row.push_back(format_double(stats.mean_error_iterate, 6));
    row.push_back(std::to_string(stats.completed));
}

const std::vector<std::string> kStatsColumns = {"mean_error_avg", "stddev_error_avg",
                                                "mean_error_iterate", "completed"};

void add_common_meta(TableDoc& doc, const SuiteOptions& opt) {
    doc.add_meta("ensemble", static_cast<std::int64_t>(opt.ensemble));
    doc.add_meta("seed", static_cast<std::uint64_t>(opt.seed));
    doc.add_meta("rng", "splitmix64/polar");
}

}  // namespace

std::vector<TableDoc> tau_kappa_tables(const TauKappaGrid& grid, double c) {
    return {grid_table(grid, grid.log10_tau, "log10_tau", c),
            grid_table(grid, grid.kappa, "kappa", c)};
}

TableDoc dimension_suite(const std::vector<int>& dims, std::int64_t k_max,
                         const SuiteOptions& opt) {
    TableDoc doc;
    doc.add_meta("suite", "dimension");
    doc.add_meta("kmax", k_max);
    doc.add_meta("alpha", 0.0);
    doc.add_meta("beta", 0.7);
    doc.add_meta("c", 1.0);
    add_common_meta(doc, opt);
    doc.columns = {"n"};
    doc.columns.insert(doc.columns.end(), kStatsColumns.begin(), kStatsColumns.end());

    ScheduleParams p{0.0, 0.7, 1.0, 0.0, k_max};
    for (std::size_t ci = 0; ci < dims.size(); ++ci) {
        const int n = dims[ci];
        const auto oracle =
            DiagQuadraticOracle::random(n, 0.1, 1.0, derive_seed(opt.seed, 2 * ci));
        RunOptions ro;
        ro.x_star = std::vector<double>(static_cast<std::size_t>(n), 0.0);
        const auto ensemble = run_ensemble(oracle, scaled_ones(n, 1.0), p, opt.ensemble,
                                           derive_seed(opt.seed, 2 * ci + 1), ro, opt.threads);
        std::vector<std::string> row{std::to_string(n)};
        append_stats_cells(row, ensemble);
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

TableDoc horizon_suite(const std::vector<std::int64_t>& kmaxes, int n, const SuiteOptions& opt) {
    TableDoc doc;
    doc.add_meta("suite", "horizon");
    doc.add_meta("n", static_cast<std::int64_t>(n));
    doc.add_meta("alpha", 0.0);
    doc.add_meta("beta", 0.7);
    doc.add_meta("c", 1.0);
    add_common_meta(doc, opt);
    doc.columns = {"kmax"};
    doc.columns.insert(doc.columns.end(), kStatsColumns.begin(), kStatsColumns.end());

    const auto oracle = DiagQuadraticOracle::random(n, 0.1, 1.0, derive_seed(opt.seed, 0));
    RunOptions ro;
    ro.x_star = std::vector<double>(static_cast<std::size_t>(n), 0.0);
    const auto kept = apply_kmax_cap(kmaxes, opt, n);
    for (std::size_t ci = 0; ci < kept.size(); ++ci) {
        ScheduleParams p{0.0, 0.7, 1.0, 0.0, kept[ci]};
        const auto ensemble = run_ensemble(oracle, scaled_ones(n, 1.0), p, opt.ensemble,
                                           derive_seed(opt.seed, 1000 + ci), ro, opt.threads);
        std::vector<std::string> row{std::to_string(kept[ci])};
        append_stats_cells(row, ensemble);
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

TableDoc initial_error_suite(const std::vector<double>& x0_norms, int n, std::int64_t k_max,
                             const SuiteOptions& opt) {
    TableDoc doc;
    doc.add_meta("suite", "initial-error");
    doc.add_meta("n", static_cast<std::int64_t>(n));
    doc.add_meta("kmax", k_max);
    doc.add_meta("alpha", 0.0);
    doc.add_meta("c", 1.0);
    add_common_meta(doc, opt);
    doc.columns = {"x0_norm", "beta"};
    doc.columns.insert(doc.columns.end(), kStatsColumns.begin(), kStatsColumns.end());

    const auto oracle = DiagQuadraticOracle::random(n, 0.1, 1.0, derive_seed(opt.seed, 0));
    RunOptions ro;
    ro.x_star = std::vector<double>(static_cast<std::size_t>(n), 0.0);
    std::size_t ci = 0;
    for (const double norm : x0_norms) {
        for (const double beta : {0.0, 0.7}) {
            ScheduleParams p{0.0, beta, 1.0, 0.0, k_max};
            const auto ensemble = run_ensemble(oracle, scaled_ones(n, norm), p, opt.ensemble,
                                               derive_seed(opt.seed, 1000 + ci), ro, opt.threads);
            std::vector<std::string> row{format_double(norm, 6), format_double(beta, 6)};
            append_stats_cells(row, ensemble);
            doc.rows.push_back(std::move(row));
            ++ci;
        }
    }
    return doc;
}

TableDoc rank_one_initial_error_suite(const std::vector<double>& x0_norms, int n,
                                      std::int64_t k_max, const SuiteOptions& opt) {
    TableDoc doc;
    doc.add_meta("suite", "rank-one-initial-error");
    doc.add_meta("n", static_cast<std::int64_t>(n));
    doc.add_meta("kmax", k_max);
    doc.add_meta("alpha", 0.0);
    doc.add_meta("c", 1.0);
    add_common_meta(doc, opt);
    doc.columns = {"x0_norm", "beta"};
    doc.columns.insert(doc.columns.end(), kStatsColumns.begin(), kStatsColumns.end());

    const auto oracle = RankOneQuadraticOracle::random_diagonal(n, derive_seed(opt.seed, 0));
    RunOptions ro;
    ro.x_star = std::vector<double>(static_cast<std::size_t>(n), 0.0);
    std::size_t ci = 0;
    for (const double norm : x0_norms) {
        for (const double beta : {0.0, 0.7}) {
            ScheduleParams p{0.0, beta, 1.0, 0.0, k_max};
            const auto ensemble = run_ensemble(oracle, scaled_ones(n, norm), p, opt.ensemble,
                                               derive_seed(opt.seed, 1000 + ci), ro, opt.threads);
            std::vector<std::string> row{format_double(norm, 6), format_double(beta, 6)};
            append_stats_cells(row, ensemble);
            doc.rows.push_back(std::move(row));
            ++ci;
        }
    }
    return doc;
}

TableDoc rank_one_horizon_suite(const std::vector<std::int64_t>& kmaxes, int n,
                                const std::vector<double>& x0_norms, const SuiteOptions& opt) {
    TableDoc doc;
    doc.add_meta("suite", "rank-one-horizon");
    doc.add_meta("n", static_cast<std::int64_t>(n));
    doc.add_meta("alpha", 0.0);
    doc.add_meta("c", 1.0);
    add_common_meta(doc, opt);
    doc.columns = {"x0_norm", "kmax", "beta"};
    doc.columns.insert(doc.columns.end(), kStatsColumns.begin(), kStatsColumns.end());

    const auto oracle = RankOneQuadraticOracle::random_diagonal(n, derive_seed(opt.seed, 0));
    RunOptions ro;
    ro.x_star = std::vector<double>(static_cast<std::size_t>(n), 0.0);
    const auto kept = apply_kmax_cap(kmaxes, opt, n);
    std::size_t ci = 0;
    for (const double norm : x0_norms) {
        for (const std::int64_t k : kept) {
            for (const double beta : {0.0, 0.7}) {
                ScheduleParams p{0.0, beta, 1.0, 0.0, k};
                const auto ensemble =
                    run_ensemble(oracle, scaled_ones(n, norm), p, opt.ensemble,
                                 derive_seed(opt.seed, 1000 + ci), ro, opt.threads);
                std::vector<std::string> row{format_double(norm, 6), std::to_string(k),
                                             format_double(beta, 6)};
                append_stats_cells(row, ensemble);
                doc.rows.push_back(std::move(row));
                ++ci;
            }
        }
    }
    return doc;
}

TableDoc logistic_suite(const std::vector<std::int64_t>& kmaxes, const MnistPaths& paths,
                        const SuiteOptions& opt) {
    const auto train = build_logistic_problem(load_idx_images(paths.train_images),
                                              load_idx_labels(paths.train_labels));
    const auto test = build_logistic_problem(load_idx_images(paths.test_images),
                                             load_idx_labels(paths.test_labels));
    const LogisticOracle oracle(train);
    const double c = 16.0 / static_cast<double>(train.n);

    TableDoc doc;
    doc.add_meta("suite", "logistic");
    doc.add_meta("n", static_cast<std::int64_t>(train.n));
    doc.add_meta("m_train", static_cast<std::int64_t>(train.m));
    doc.add_meta("m_test", static_cast<std::int64_t>(test.m));
    doc.add_meta("c", c);
    add_common_meta(doc, opt);
    doc.columns = {"kmax", "beta", "grad_norm_avg", "fcr_test", "completed"};

    const std::vector<double> x0(static_cast<std::size_t>(train.n), 0.0);
    const auto kept = apply_kmax_cap(kmaxes, opt, train.n);
    std::size_t ci = 0;
    for (const std::int64_t k : kept) {
        for (const double beta : {0.0, 0.7}) {
            ScheduleParams p{0.0, beta, c, 0.0, k};
            const auto ensemble = run_ensemble(oracle, x0, p, opt.ensemble,
                                               derive_seed(opt.seed, 1000 + ci), {}, opt.threads);
            double grad_norm_sum = 0.0;
            double fcr_sum = 0.0;
            int completed = 0;
            std::vector<double> grad(static_cast<std::size_t>(train.n));
            for (std::size_t i = 0; i < ensemble.runs.size(); ++i) {
                if (!ensemble.failures[i].empty()) continue;
                const auto& avg = ensemble.runs[i].x_final_avg;
                oracle.exact_gradient(avg, grad);
                double g2 = 0.0;
                for (const double v : grad) g2 += v * v;
                grad_norm_sum += std::sqrt(g2);
                fcr_sum += false_classification_rate(test, avg);
                ++completed;
            }
            std::vector<std::string> row{std::to_string(k), format_double(beta, 6)};
            row.push_back(completed ? format_double(grad_norm_sum / completed, 6) : "nan");
            row.push_back(completed ? format_double(fcr_sum / completed, 6) : "nan");
            row.push_back(std::to_string(completed));
            doc.rows.push_back(std::move(row));
            ++ci;
        }
    }
    return doc;
}

Matrix covariance_from_expectations(const Matrix& a, double rho, std::span<const double> x) {
    const int n = a.rows();
    const Matrix at = transpose(a);
    const std::vector<double> atx = transposed_matvec(a, x);  // A'x
    const std::vector<double> aatx = matvec(a, atx);          // AA'x

    // xi = u + v + w with u = aa'x, v = b, w = -AA'x; nine product terms.
    const Matrix e_uu = matmul(matmul(a, quartic_expectation(matmul(at, matmul(outer(x, x), a)))), at);
    const Matrix e_uv(n, n), e_vu(n, n), e_vw(n, n), e_wv(n, n);  // independent, zero-mean
    const Matrix e_uw = -1.0 * outer(aatx, aatx);
    const Matrix e_wu = -1.0 * outer(aatx, aatx);
    const Matrix e_vv = (rho * rho) * Matrix::identity(n);
    const Matrix e_ww = outer(aatx, aatx);

    return e_uu + e_uv + e_uw + e_vu + e_vv + e_vw + e_wu + e_wv + e_ww;
}

CovarianceCheck verify_covariance(int n, double rho, std::int64_t samples, std::uint64_t seed) {
    if (n < 1 || n > 10)
        throw std::invalid_argument("verify_covariance: n must lie in [1, 10] for the Monte-Carlo path");
    if (samples < 1) throw std::invalid_argument("verify_covariance: samples must be >= 1");

    RngStream setup(seed);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = setup.next_gaussian();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = setup.next_gaussian();

    const RankOneQuadraticOracle oracle(a, rho);

    const auto mc_rel_error = [&](std::span<const double> at_x, std::uint64_t stream) {
        const Matrix analytic = oracle.noise_covariance(at_x);
        std::vector<double> g(static_cast<std::size_t>(n)), exact(static_cast<std::size_t>(n));
        oracle.exact_gradient(at_x, exact);
        Matrix sum(n, n);
        std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
        RngStream rng(seed, stream);
        for (std::int64_t s = 0; s < samples; ++s) {
            oracle.sample(at_x, rng, g);
            for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] -= exact[static_cast<std::size_t>(i)];
            for (int i = 0; i < n; ++i) {
                mean[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j) sum(i, j) += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
            }
        }
        const double inv = 1.0 / static_cast<double>(samples);
        Matrix empirical = inv * sum;
        for (double& v : mean) v *= inv;
        empirical = empirical - outer(mean, mean);
        return frobenius_norm(empirical - analytic) / frobenius_norm(analytic);
    };

    CovarianceCheck check;
    check.n = n;
    check.rho = rho;
    check.samples = samples;
    const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
    check.mc_rel_frobenius_at_zero = mc_rel_error(zero, 1);
    check.mc_rel_frobenius_random_x = mc_rel_error(x, 2);
    const Matrix analytic = oracle.noise_covariance(x);
    const Matrix rebuilt = covariance_from_expectations(a, rho, x);
    check.algebraic_identity_error =
        frobenius_norm(analytic - rebuilt) / frobenius_norm(analytic);
    return check;
}

TableDoc covariance_table(const CovarianceCheck& check, std::uint64_t seed) {
    TableDoc doc;
    doc.add_meta("command", "verify-covariance");
    doc.add_meta("n", static_cast<std::int64_t>(check.n));
    doc.add_meta("rho", check.rho);
    doc.add_meta("samples", check.samples);
    doc.add_meta("seed", seed);
    doc.columns = {"check", "relative_error"};
    doc.rows = {
        {"mc_frobenius_at_zero", format_double(check.mc_rel_frobenius_at_zero, 6)},
        {"mc_frobenius_random_x", format_double(check.mc_rel_frobenius_random_x, 6)},
        {"algebraic_identity", format_double(check.algebraic_identity_error, 6)},
    };
    return doc;
}

}  // namespace wavg
