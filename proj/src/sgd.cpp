#include "wavg/sgd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wavg {

void GradientOracle::exact_gradient(std::span<const double>, std::span<double>) const {
    throw std::logic_error("this oracle does not provide an exact gradient");
}

namespace {

double l2_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd ms;
    if (values.empty()) return ms;
    double sum = 0.0;
    for (double v : values) sum += v;
    ms.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - ms.mean;
            ss += d * d;
        }
        ms.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return ms;
}

}  // namespace

RunRecord run(const GradientOracle& oracle, std::span<const double> x0,
              const ScheduleParams& params, std::uint64_t seed, const RunOptions& options) {
    params.validate();
    const int n = oracle.dimension();
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("run: x0 dimension does not match the oracle");
    if (options.batch < 1) throw std::invalid_argument("run: batch must be >= 1");
    if (options.x_star && static_cast<int>(options.x_star->size()) != n)
        throw std::invalid_argument("run: x_star dimension does not match the oracle");

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> g(static_cast<std::size_t>(n));
    std::vector<double> g_draw;
    if (options.batch > 1) g_draw.resize(static_cast<std::size_t>(n));

    std::vector<double> avg_acc(static_cast<std::size_t>(n), 0.0);
    std::vector<double> avg_comp;
    if (options.compensated_sum) avg_comp.assign(static_cast<std::size_t>(n), 0.0);
    double sigma = 0.0;
    double sigma_comp = 0.0;

    for (std::int64_t k = 0; k < params.k_max; ++k) {
        RngStream rng(seed, static_cast<std::uint64_t>(k));
        const double gamma = step_length(params, k);

        if (options.batch == 1) {
            oracle.sample(x, rng, g);
        } else {
            std::fill(g.begin(), g.end(), 0.0);
            for (int b = 0; b < options.batch; ++b) {
                oracle.sample(x, rng, g_draw);
                for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] += g_draw[static_cast<std::size_t>(i)];
            }
            const double inv = 1.0 / static_cast<double>(options.batch);
            for (double& gi : g) gi *= inv;
        }

        double probe = 0.0;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] -= gamma * g[static_cast<std::size_t>(i)];
            probe += x[static_cast<std::size_t>(i)];
        }
        if (!std::isfinite(probe))
            throw std::runtime_error("run: non-finite iterate at step " + std::to_string(k) +
                                     " (step length above 1/d_max or oracle blow-up)");

        const double wk = weight(params, k + 1);
        if (!options.compensated_sum) {
            for (int i = 0; i < n; ++i)
                avg_acc[static_cast<std::size_t>(i)] += wk * x[static_cast<std::size_t>(i)];
            sigma += wk;
        } else {
            for (int i = 0; i < n; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                const double y = wk * x[idx] - avg_comp[idx];
                const double t = avg_acc[idx] + y;
                avg_comp[idx] = (t - avg_acc[idx]) - y;
                avg_acc[idx] = t;
            }
            const double y = wk - sigma_comp;
            const double t = sigma + y;
            sigma_comp = (t - sigma) - y;
            sigma = t;
        }
    }

    RunRecord record;
    record.seed = seed;
    record.params = params;
    record.weight_sum = sigma;
    record.x_final_iterate = std::move(x);
    record.x_final_avg.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        record.x_final_avg[static_cast<std::size_t>(i)] =
            avg_acc[static_cast<std::size_t>(i)] / sigma;
    if (options.x_star) {
        record.error_norm_avg = l2_distance(record.x_final_avg, *options.x_star);
        record.error_norm_iterate = l2_distance(record.x_final_iterate, *options.x_star);
    }
    return record;
}

EnsembleStats EnsembleResult::stats() const {
    std::vector<double> avg_errors;
    std::vector<double> iterate_errors;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!failures[i].empty()) continue;
        if (runs[i].error_norm_avg) avg_errors.push_back(*runs[i].error_norm_avg);
        if (runs[i].error_norm_iterate) iterate_errors.push_back(*runs[i].error_norm_iterate);
    }
    EnsembleStats stats;
    const MeanStd a = mean_std(avg_errors);
    const MeanStd b = mean_std(iterate_errors);
    stats.mean_error_avg = a.mean;
    stats.stddev_error_avg = a.stddev;
    stats.mean_error_iterate = b.mean;
    stats.stddev_error_iterate = b.stddev;
    stats.completed = static_cast<int>(avg_errors.size());
    return stats;
}

EnsembleResult run_ensemble(const GradientOracle& oracle, std::span<const double> x0,
                            const ScheduleParams& params, int n_runs, std::uint64_t base_seed,
                            const RunOptions& options, unsigned threads) {
    if (n_runs < 1) throw std::invalid_argument("run_ensemble: n_runs must be >= 1");
    EnsembleResult result;
    result.runs.resize(static_cast<std::size_t>(n_runs));
    result.failures.resize(static_cast<std::size_t>(n_runs));

    const unsigned n_threads =
        std::min<unsigned>(threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                        : threads,
                           static_cast<unsigned>(n_runs));
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_runs) return;
            try {
                result.runs[static_cast<std::size_t>(i)] =
                    run(oracle, x0, params, derive_seed(base_seed, static_cast<std::uint64_t>(i)),
                        options);
            } catch (const std::exception& e) {
                result.failures[static_cast<std::size_t>(i)] = e.what();
            }
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& f : result.failures)
        if (!f.empty()) result.partial = true;
    return result;
}

}  // namespace wavg
