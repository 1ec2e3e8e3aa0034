// Command-line front end: closed-form tau/kappa tables, parameter
// optimization, single SGD runs, the stochastic experiment suites, and the
// noise-covariance verification.  Every output embeds the resolved
// configuration, so rerunning a file's header reproduces it byte for byte.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavg/error_functionals.hpp"
#include "wavg/optimizer.hpp"
#include "wavg/problems.hpp"
#include "wavg/sgd.hpp"
#include "wavg/suites.hpp"
#include "wavg/table_io.hpp"

namespace {

using namespace wavg;

struct OutputSink {
    std::string path;       // empty = stdout
    std::string format = "csv";

    void write(const std::vector<TableDoc>& docs) const {
        const OutputFormat fmt = parse_output_format(format);
        if (path.empty()) write_tables(std::cout, docs, fmt);
        else write_tables_file(path, docs, fmt);
    }
};

void add_output_options(CLI::App* cmd, OutputSink& sink) {
    cmd->add_option("--out", sink.path, "output file (default: stdout)");
    cmd->add_option("--format", sink.format, "output format: csv or md")
        ->check(CLI::IsMember({"csv", "md"}));
    cmd->set_config("--config", "", "flat key = value config file; flags override it");
}

void add_schedule_options(CLI::App* cmd, ScheduleParams& p) {
    cmd->add_option("--alpha", p.alpha, "step decay exponent");
    cmd->add_option("--beta", p.beta, "weight growth exponent");
    cmd->add_option("--c", p.c, "base step length");
    cmd->add_option("--delta", p.delta, "step offset fraction; M = 1 + delta*kmax");
    cmd->add_option("--kmax", p.k_max, "iteration budget");
}

int cmd_table_tau_kappa(const std::vector<double>& dmins, const std::vector<double>& conds,
                        const std::vector<std::int64_t>& kmaxes, double c,
                        const ScheduleParams& schedule, const OutputSink& sink) {
    std::vector<double> dmin_grid = dmins.empty() ? default_dmin_grid() : dmins;
    if (!conds.empty()) {
        dmin_grid.clear();
        for (const double cond : conds) dmin_grid.push_back(1.0 / cond);
    }
    const auto kmax_grid = kmaxes.empty() ? default_kmax_grid() : kmaxes;

    std::vector<TableDoc> docs;
    if (schedule.alpha == 0.0 && schedule.beta == 0.0) {
        docs = tau_kappa_tables(tau_kappa_grid(kmax_grid, dmin_grid, c), c);
    } else {
        // general schedules go through the O(k) recurrences
        TauKappaGrid grid;
        grid.kmax_values = kmax_grid;
        grid.dmin_values = dmin_grid;
        grid.log10_tau.resize(kmax_grid.size());
        grid.kappa.resize(kmax_grid.size());
        for (std::size_t ki = 0; ki < kmax_grid.size(); ++ki) {
            for (const double dmin : dmin_grid) {
                ScheduleParams p = schedule;
                p.c = c;
                p.k_max = kmax_grid[ki];
                const double cbar = c * dmin;
                grid.log10_tau[ki].push_back(std::log10(tau(p, cbar)));
                grid.kappa[ki].push_back(kappa(p, cbar));
            }
        }
        docs = tau_kappa_tables(grid, c);
        for (auto& doc : docs) {
            doc.add_meta("alpha", schedule.alpha);
            doc.add_meta("beta", schedule.beta);
            doc.add_meta("delta", schedule.delta);
        }
    }
    sink.write(docs);
    return 0;
}

int cmd_optimize(const std::string& mode, const std::vector<double>& mus, double dmin,
                 double dmax, std::int64_t k_max, double slack, bool all_starts,
                 const OutputSink& sink) {
    const SpectrumModel spectrum{dmin, dmax};
    const SearchBox box = SearchBox::for_spectrum(spectrum);
    const auto starts = default_starts(box);

    TableDoc doc;
    doc.add_meta("command", "optimize");
    doc.add_meta("mode", mode);
    doc.add_meta("dmin", dmin);
    doc.add_meta("dmax", dmax);
    doc.add_meta("kmax", k_max);
    if (mode == "tradeoff") doc.add_meta("slack", slack);
    doc.columns = {"mu", "alpha", "beta", "c", "delta", "tau", "kappa", "r"};
    if (mode == "tradeoff") {
        doc.columns.push_back("v1");
        doc.columns.push_back("v2");
    }
    doc.columns.push_back("start_index");
    doc.columns.push_back("evaluations");

    const auto param_cells = [](const ScheduleParams& p, const ErrorReport& rep) {
        return std::vector<std::string>{
            format_double(p.alpha, 6), format_double(p.beta, 6),   format_double(p.c, 6),
            format_double(p.delta, 6), format_double(rep.tau, 6), format_double(rep.kappa, 6),
            format_double(rep.r, 6)};
    };

    for (const double mu : mus) {
        if (mode == "r") {
            const auto results = minimize_r_multistart(box, spectrum, mu, k_max, starts);
            std::size_t best = 0;
            for (std::size_t i = 1; i < results.size(); ++i)
                if (results[i].report.r < results[best].report.r) best = i;
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (!all_starts && i != best) continue;
                const auto& res = results[i];
                std::vector<std::string> row{format_double(mu, 6)};
                const auto cells = param_cells(res.params, res.report);
                row.insert(row.end(), cells.begin(), cells.end());
                row.push_back(std::to_string(res.start_index));
                row.push_back(std::to_string(res.evaluations));
                doc.rows.push_back(std::move(row));
            }
        } else {
            const auto res = minimize_tradeoff(box, spectrum, mu, k_max, slack, starts);
            std::vector<std::string> row{format_double(mu, 6)};
            const auto cells = param_cells(res.params, res.report);
            row.insert(row.end(), cells.begin(), cells.end());
            row.push_back(format_double(res.v1, 6));
            row.push_back(format_double(res.v2, 6));
            row.push_back(std::to_string(res.start_index));
            row.push_back(std::to_string(res.evaluations));
            doc.rows.push_back(std::move(row));
        }
    }
    sink.write({doc});
    return 0;
}

int cmd_run(const std::string& problem, int n, double dmin, double dmax, double rho,
            bool rho_set, const ScheduleParams& schedule, double x0_norm, int batch,
            std::uint64_t seed, bool kahan, const OutputSink& sink) {
    std::unique_ptr<GradientOracle> oracle;
    if (problem == "diag") {
        const double r = rho_set ? rho : 1.0 / std::sqrt(static_cast<double>(n));
        oracle = std::make_unique<DiagQuadraticOracle>(
            DiagQuadraticOracle::random(n, dmin, dmax, derive_seed(seed, 0), r));
    } else {
        oracle = std::make_unique<RankOneQuadraticOracle>(
            RankOneQuadraticOracle::random_diagonal(n, derive_seed(seed, 0)));
    }

    RunOptions options;
    options.batch = batch;
    options.compensated_sum = kahan;
    options.x_star = std::vector<double>(static_cast<std::size_t>(n), 0.0);
    const double component = x0_norm / std::sqrt(static_cast<double>(n));
    const std::vector<double> x0(static_cast<std::size_t>(n), component);

    const RunRecord record = run(*oracle, x0, schedule, seed, options);

    TableDoc doc;
    doc.add_meta("command", "run");
    doc.add_meta("problem", problem);
    doc.add_meta("n", static_cast<std::int64_t>(n));
    doc.add_meta("dmin", dmin);
    doc.add_meta("dmax", dmax);
    doc.add_meta("x0_norm", x0_norm);
    doc.add_meta("batch", static_cast<std::int64_t>(batch));
    doc.add_meta("kahan", kahan ? "true" : "false");
    doc.add_meta("rng", "splitmix64/polar");
    doc.columns = {"seed",  "alpha", "beta",       "c",
                   "delta", "kmax",  "weight_sum", "error_norm_avg",
                   "error_norm_iterate"};
    doc.rows = {{std::to_string(record.seed), format_double(schedule.alpha, 6),
                 format_double(schedule.beta, 6), format_double(schedule.c, 6),
                 format_double(schedule.delta, 6), std::to_string(schedule.k_max),
                 format_double(record.weight_sum, 12), format_double(*record.error_norm_avg, 12),
                 format_double(*record.error_norm_iterate, 12)}};
    sink.write({doc});
    return 0;
}

// Decade horizons starting at `from`, capped later by SuiteOptions::max_kmax.
std::vector<std::int64_t> default_kmax_grid_from(std::int64_t from) {
    std::vector<std::int64_t> grid;
    for (std::int64_t k = from; k <= 100000000; k *= 10) grid.push_back(k);
    return grid;
}

int cmd_run_suite(const std::string& suite, int n, bool n_set, std::int64_t k_max, bool kmax_set,
                  const SuiteOptions& opt, int max_n, const MnistPaths& mnist,
                  const OutputSink& sink) {
    TableDoc doc;
    if (suite == "table5") {
        std::vector<int> dims;
        for (const int d : {10, 100, 1000, 10000, 100000}) {
            if (d <= max_n) dims.push_back(d);
            else
                std::fprintf(stderr,
                             "suite: skipping n=%d (above --max-n %d; raise it to include)\n", d,
                             max_n);
        }
        if (n_set) dims = {n};
        doc = dimension_suite(dims, kmax_set ? k_max : 100000, opt);
    } else if (suite == "table6") {
        doc = horizon_suite(default_kmax_grid_from(10000), n_set ? n : 100, opt);
    } else if (suite == "table7") {
        doc = initial_error_suite({1.0, 1e2, 1e4, 1e6, 1e8}, n_set ? n : 100,
                                  kmax_set ? k_max : 100000, opt);
    } else if (suite == "table8") {
        doc = rank_one_initial_error_suite({1e-1, 1.0, 10.0, 1e2, 1e3, 1e4}, n_set ? n : 100,
                                           kmax_set ? k_max : 1000, opt);
    } else if (suite == "table9") {
        doc = rank_one_horizon_suite(default_kmax_grid_from(1000), n_set ? n : 100, {1e2, 1e3},
                                     opt);
    } else if (suite == "table10") {
        if (mnist.train_images.empty() || mnist.train_labels.empty() ||
            mnist.test_images.empty() || mnist.test_labels.empty())
            throw CLI::ValidationError(
                "run-suite",
                "table10 needs --mnist-images, --mnist-labels, --mnist-test-images and "
                "--mnist-test-labels");
        std::vector<std::int64_t> kmaxes{1000, 10000, 100000, 1000000, 10000000};
        if (kmax_set) kmaxes = {k_max};
        doc = logistic_suite(kmaxes, mnist, opt);
    } else {
        throw CLI::ValidationError("run-suite", "unknown suite " + suite);
    }
    sink.write({doc});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-average SGD: exact error functionals, schedule optimization and "
                 "experiment suites"};
    app.require_subcommand(1);

    // table-tau-kappa
    auto* table_cmd = app.add_subcommand(
        "table-tau-kappa", "log10(tau) and kappa grids over (kmax, dmin) at fixed c");
    std::vector<double> table_dmins, table_conds;
    std::vector<std::int64_t> table_kmaxes;
    double table_c = 1.0;
    ScheduleParams table_schedule;
    OutputSink table_sink;
    table_cmd->add_option("--dmin", table_dmins, "smallest-eigenvalue grid (default: table grid)");
    table_cmd->add_option("--cond", table_conds, "condition-number grid (overrides --dmin)");
    table_cmd->add_option("--kmax", table_kmaxes, "horizon grid (default: table grid)");
    table_cmd->add_option("--c", table_c, "base step length (default 1)");
    table_cmd->add_option("--alpha", table_schedule.alpha,
                          "step decay exponent (nonzero switches to the recurrence path)");
    table_cmd->add_option("--beta", table_schedule.beta,
                          "weight exponent (nonzero switches to the recurrence path)");
    table_cmd->add_option("--delta", table_schedule.delta, "step offset fraction");
    add_output_options(table_cmd, table_sink);

    // optimize
    auto* opt_cmd =
        app.add_subcommand("optimize", "derivative-free schedule optimization per mu");
    std::string opt_mode = "r";
    std::vector<double> opt_mus;
    double opt_dmin = 1e-4, opt_dmax = 1.0, opt_slack = 0.1;
    std::int64_t opt_kmax = 31623;
    bool opt_all_starts = false;
    OutputSink opt_sink;
    opt_cmd->add_option("--mode", opt_mode, "objective: r or tradeoff")
        ->check(CLI::IsMember({"r", "tradeoff"}));
    opt_cmd->add_option("--mu", opt_mus, "trade-off weights (one row per value)");
    opt_cmd->add_option("--dmin", opt_dmin, "smallest Hessian eigenvalue");
    opt_cmd->add_option("--dmax", opt_dmax, "largest Hessian eigenvalue");
    opt_cmd->add_option("--kmax", opt_kmax, "iteration budget");
    opt_cmd->add_option("--slack", opt_slack, "allowed relative worsening in tradeoff mode");
    opt_cmd->add_flag("--all-starts", opt_all_starts, "emit one row per start, not just the best");
    add_output_options(opt_cmd, opt_sink);

    // run
    auto* run_cmd = app.add_subcommand("run", "one SGD run, one output row");
    std::string run_problem = "diag";
    int run_n = 100, run_batch = 1;
    double run_dmin = 0.1, run_dmax = 1.0, run_rho = 0.0, run_x0_norm = 1.0;
    std::uint64_t run_seed = 1;
    bool run_kahan = false;
    ScheduleParams run_schedule{0.0, 0.7, 1.0, 0.0, 10000};
    OutputSink run_sink;
    run_cmd->add_option("--problem", run_problem, "diag or rankone")
        ->check(CLI::IsMember({"diag", "rankone"}));
    run_cmd->add_option("--n", run_n, "dimension");
    run_cmd->add_option("--dmin", run_dmin, "lower bound of the uniform spectrum (diag)");
    run_cmd->add_option("--dmax", run_dmax, "upper bound of the uniform spectrum (diag)");
    auto* rho_opt = run_cmd->add_option("--rho", run_rho, "noise scale (default 1/sqrt(n))");
    run_cmd->add_option("--x0-norm", run_x0_norm, "norm of the start vector x0 = norm*e/sqrt(n)");
    run_cmd->add_option("--batch", run_batch, "oracle samples averaged per step");
    run_cmd->add_option("--seed", run_seed, "run seed");
    run_cmd->add_flag("--kahan", run_kahan, "compensated summation of the weighted average");
    add_schedule_options(run_cmd, run_schedule);
    add_output_options(run_cmd, run_sink);

    // run-suite
    auto* suite_cmd = app.add_subcommand("run-suite", "stochastic experiment suites");
    std::string suite_name;
    int suite_n = 100, suite_max_n = 1000;
    std::int64_t suite_kmax = 100000;
    SuiteOptions suite_opt;
    MnistPaths mnist;
    OutputSink suite_sink;
    suite_cmd
        ->add_option("--suite", suite_name,
                     "table5|table6|table7|table8|table9|table10")
        ->required()
        ->check(CLI::IsMember({"table5", "table6", "table7", "table8", "table9", "table10"}));
    auto* suite_n_opt = suite_cmd->add_option("--n", suite_n, "dimension override");
    auto* suite_kmax_opt = suite_cmd->add_option("--kmax", suite_kmax, "horizon override");
    auto* suite_ens_opt =
        suite_cmd->add_option("--ensemble", suite_opt.ensemble, "runs per grid cell");
    suite_cmd->add_option("--seed", suite_opt.seed, "base seed");
    suite_cmd->add_option("--max-kmax", suite_opt.max_kmax,
                          "desk-scale cap; grid cells above it are skipped with a warning");
    suite_cmd->add_option("--max-n", suite_max_n, "desk-scale cap on the dimension grid");
    suite_cmd->add_option("--threads", suite_opt.threads, "worker threads (0 = all cores)");
    suite_cmd->add_option("--mnist-images", mnist.train_images, "IDX training images");
    suite_cmd->add_option("--mnist-labels", mnist.train_labels, "IDX training labels");
    suite_cmd->add_option("--mnist-test-images", mnist.test_images, "IDX test images");
    suite_cmd->add_option("--mnist-test-labels", mnist.test_labels, "IDX test labels");
    add_output_options(suite_cmd, suite_sink);

    // verify-covariance
    auto* cov_cmd = app.add_subcommand("verify-covariance",
                                       "Monte-Carlo and algebraic noise-covariance checks");
    int cov_n = 3;
    double cov_rho = 0.3;
    std::int64_t cov_samples = 1000000;
    std::uint64_t cov_seed = 1;
    OutputSink cov_sink;
    cov_cmd->add_option("--n", cov_n, "dimension (<= 10)");
    cov_cmd->add_option("--rho", cov_rho, "additive noise scale");
    cov_cmd->add_option("--samples", cov_samples, "Monte-Carlo sample count");
    cov_cmd->add_option("--seed", cov_seed, "seed");
    add_output_options(cov_cmd, cov_sink);

    CLI11_PARSE(app, argc, argv);

    try {
        if (table_cmd->parsed())
            return cmd_table_tau_kappa(table_dmins, table_conds, table_kmaxes, table_c,
                                       table_schedule, table_sink);
        if (opt_cmd->parsed())
            return cmd_optimize(opt_mode, opt_mus, opt_dmin, opt_dmax, opt_kmax, opt_slack,
                                opt_all_starts, opt_sink);
        if (run_cmd->parsed())
            return cmd_run(run_problem, run_n, run_dmin, run_dmax, run_rho, rho_opt->count() > 0,
                           run_schedule, run_x0_norm, run_batch, run_seed, run_kahan, run_sink);
        if (suite_cmd->parsed())
            return cmd_run_suite(suite_name, suite_n, suite_n_opt->count() > 0, suite_kmax,
                                 suite_kmax_opt->count() > 0, [&] {
                                     SuiteOptions o = suite_opt;
                                     if (suite_name == "table10" && suite_ens_opt->count() == 0)
                                         o.ensemble = 1;
                                     return o;
                                 }(), suite_max_n, mnist, suite_sink);
        if (cov_cmd->parsed()) {
            const auto check = verify_covariance(cov_n, cov_rho, cov_samples, cov_seed);
            cov_sink.write({covariance_table(check, cov_seed)});
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
