#include "wavg/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace wavg {

namespace {

constexpr double kPenaltyWeight = 1e6;
constexpr double kFeasibilityTol = 1e-9;

using Point4 = std::array<double, 4>;  // normalized (alpha, beta, c, delta)

struct BoxMap {
    std::array<std::array<double, 2>, 4> ranges;

    explicit BoxMap(const SearchBox& box)
        : ranges{box.alpha_range, box.beta_range, box.c_range, box.delta_range} {}

    double width(int i) const noexcept { return ranges[i][1] - ranges[i][0]; }

    ParamPoint to_params(const Point4& z) const noexcept {
        ParamPoint p;
        p.alpha = ranges[0][0] + z[0] * width(0);
        p.beta = ranges[1][0] + z[1] * width(1);
        p.c = ranges[2][0] + z[2] * width(2);
        p.delta = ranges[3][0] + z[3] * width(3);
        return p;
    }

    Point4 to_normalized(const ParamPoint& p) const noexcept {
        Point4 z{};
        const std::array<double, 4> vals{p.alpha, p.beta, p.c, p.delta};
        for (int i = 0; i < 4; ++i)
            z[i] = width(i) > 0.0 ? (vals[i] - ranges[i][0]) / width(i) : 0.0;
        return z;
    }
};

struct PollResult {
    Point4 point{};
    double value = std::numeric_limits<double>::infinity();
    long evaluations = 0;
};

// Coordinate-wise polling with shrinking step on [0,1]^4, clamped to the box.
// Deterministic: axes are polled in a fixed order and the best improving
// neighbor is taken.
PollResult pattern_search(const std::function<double(const Point4&)>& objective,
                          const BoxMap& box, Point4 start,
                          const PatternSearchSettings& settings) {
    PollResult best;
    for (auto& z : start) z = std::clamp(z, 0.0, 1.0);
    best.point = start;
    best.value = objective(start);
    best.evaluations = 1;

    double step = settings.initial_step;
    while (step >= settings.min_step && best.evaluations < settings.max_evaluations) {
        Point4 candidate = best.point;
        double candidate_value = best.value;
        for (int axis = 0; axis < 4; ++axis) {
            if (box.width(axis) <= 0.0) continue;  // collapsed coordinate
            for (const double sign : {+1.0, -1.0}) {
                Point4 trial = best.point;
                trial[axis] = std::clamp(trial[axis] + sign * step, 0.0, 1.0);
                if (trial[axis] == best.point[axis]) continue;  // clamped onto itself
                const double value = objective(trial);
                ++best.evaluations;
                if (value < candidate_value) {
                    candidate = trial;
                    candidate_value = value;
                }
                if (best.evaluations >= settings.max_evaluations) break;
            }
            if (best.evaluations >= settings.max_evaluations) break;
        }
        if (candidate_value < best.value) {
            best.point = candidate;
            best.value = candidate_value;
        } else {
            step *= 0.5;
        }
    }
    return best;
}

// Run one pattern search per start in parallel and keep per-start winners.
std::vector<PollResult> run_starts(const std::function<double(const Point4&)>& objective,
                                   const BoxMap& box, const std::vector<Point4>& starts,
                                   const PatternSearchSettings& settings) {
    std::vector<PollResult> results(starts.size());
    const unsigned n_threads =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(starts.size()));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i)
            results[i] = pattern_search(objective, box, starts[i], settings);
        return results;
    }
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = t; i < starts.size(); i += n_threads)
                results[i] = pattern_search(objective, box, starts[i], settings);
        });
    }
    for (auto& w : workers) w.join();
    return results;
}

ScheduleParams make_params(const ParamPoint& point, std::int64_t k_max) {
    ScheduleParams p;
    p.alpha = point.alpha;
    p.beta = point.beta;
    p.c = point.c;
    p.delta = point.delta;
    p.k_max = k_max;
    return p;
}

void check_starts(const SearchBox& box, const std::vector<ParamPoint>& starts) {
    if (starts.empty()) throw std::invalid_argument("at least one start point is required");
    for (const auto& s : starts)
        if (!box.contains(s))
            throw std::invalid_argument("start point lies outside the search box");
}

}  // namespace

SearchBox SearchBox::for_spectrum(const SpectrumModel& spectrum) {
    spectrum.validate();
    SearchBox box;
    box.c_range = {0.1 / spectrum.d_max, 1.0 / spectrum.d_max};
    return box;
}

bool SearchBox::contains(const ParamPoint& p) const noexcept {
    const auto inside = [](double v, const std::array<double, 2>& r) {
        return v >= r[0] && v <= r[1];
    };
    return inside(p.alpha, alpha_range) && inside(p.beta, beta_range) &&
           inside(p.c, c_range) && inside(p.delta, delta_range);
}

void SearchBox::validate() const {
    const auto ordered = [](const std::array<double, 2>& r) { return r[0] <= r[1]; };
    if (!ordered(alpha_range) || !ordered(beta_range) || !ordered(c_range) ||
        !ordered(delta_range))
        throw std::invalid_argument("SearchBox: every range needs lower <= upper");
    if (!(c_range[0] > 0.0)) throw std::invalid_argument("SearchBox: c lower bound must be > 0");
    if (alpha_range[0] < 0.0 || beta_range[0] < 0.0 || delta_range[0] < 0.0 ||
        delta_range[1] > 1.0)
        throw std::invalid_argument("SearchBox: ranges outside the schedule domain");
}

std::vector<ParamPoint> default_starts(const SearchBox& box) {
    const double c0 = std::clamp(0.5 * box.c_range[1], box.c_range[0], box.c_range[1]);
    const double d0 = std::clamp(0.1, box.delta_range[0], box.delta_range[1]);
    std::vector<ParamPoint> starts;
    for (const auto& [a, b] : {std::pair{0.0, 0.0}, {0.0, 2.0}, {0.5, 0.0}, {0.5, 2.0}}) {
        ParamPoint p;
        p.alpha = std::clamp(a, box.alpha_range[0], box.alpha_range[1]);
        p.beta = std::clamp(b, box.beta_range[0], box.beta_range[1]);
        p.c = c0;
        p.delta = d0;
        starts.push_back(p);
    }
    return starts;
}

std::vector<OptimizationResult> minimize_r_multistart(
    const SearchBox& box, const SpectrumModel& spectrum, double mu, std::int64_t k_max,
    const std::vector<ParamPoint>& starts, const PatternSearchSettings& settings) {
    box.validate();
    spectrum.validate();
    if (!(mu >= 0.0)) throw std::invalid_argument("minimize_r: mu must be >= 0");
    check_starts(box, starts);

    const BoxMap map(box);
    const auto objective = [&](const Point4& z) {
        const ParamPoint point = map.to_params(z);
        return r_objective(make_params(point, k_max), spectrum.cbar(point.c), mu).r;
    };

    std::vector<Point4> normalized;
    normalized.reserve(starts.size());
    for (const auto& s : starts) normalized.push_back(map.to_normalized(s));

    const auto polls = run_starts(objective, map, normalized, settings);
    std::vector<OptimizationResult> results(polls.size());
    for (std::size_t i = 0; i < polls.size(); ++i) {
        const ParamPoint point = map.to_params(polls[i].point);
        results[i].params = make_params(point, k_max);
        results[i].report = r_objective(results[i].params, spectrum.cbar(point.c), mu);
        results[i].start_index = static_cast<int>(i);
        results[i].evaluations = polls[i].evaluations;
    }
    return results;
}

OptimizationResult minimize_r(const SearchBox& box, const SpectrumModel& spectrum, double mu,
                              std::int64_t k_max, const std::vector<ParamPoint>& starts,
                              const PatternSearchSettings& settings) {
    auto results = minimize_r_multistart(box, spectrum, mu, k_max, starts, settings);
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].report.r < results[best].report.r) best = i;
    return results[best];
}

TradeoffResult minimize_tradeoff(const SearchBox& box, const SpectrumModel& spectrum, double mu,
                                 std::int64_t k_max, double slack,
                                 const std::vector<ParamPoint>& starts,
                                 const PatternSearchSettings& settings) {
    box.validate();
    spectrum.validate();
    if (!(mu >= 0.0)) throw std::invalid_argument("minimize_tradeoff: mu must be >= 0");
    if (!(slack >= 0.0)) throw std::invalid_argument("minimize_tradeoff: slack must be >= 0");

    ParamPoint baseline_point;
    baseline_point.alpha = box.alpha_range[0] <= 0.0 ? 0.0 : box.alpha_range[0];
    baseline_point.beta = box.beta_range[0] <= 0.0 ? 0.0 : box.beta_range[0];
    baseline_point.delta = box.delta_range[0] <= 0.0 ? 0.0 : box.delta_range[0];
    baseline_point.c = box.c_range[1];
    const ScheduleParams baseline = make_params(baseline_point, k_max);
    const double tau0 = tau(baseline, spectrum.cbar(baseline_point.c));
    const double kappa0 = kappa(baseline, spectrum.cbar(baseline_point.c));

    const auto starts_used = starts.empty() ? default_starts(box) : starts;
    check_starts(box, starts_used);

    const BoxMap map(box);
    const auto penalized = [&](const Point4& z) {
        const ParamPoint point = map.to_params(z);
        const ScheduleParams p = make_params(point, k_max);
        const double cbar = spectrum.cbar(point.c);
        const double v1 = tau(p, cbar) / tau0 - 1.0;
        const double v2 = kappa(p, cbar) / kappa0 - 1.0;
        return v1 + mu * v2 + kPenaltyWeight * (std::max(0.0, v1 - slack) +
                                                std::max(0.0, v2 - slack));
    };

    std::vector<Point4> normalized;
    normalized.reserve(starts_used.size());
    for (const auto& s : starts_used) normalized.push_back(map.to_normalized(s));
    const auto polls = run_starts(penalized, map, normalized, settings);

    TradeoffResult best;
    best.params = baseline;
    best.report = r_objective(baseline, spectrum.cbar(baseline_point.c), mu);
    best.tau_baseline = tau0;
    best.kappa_baseline = kappa0;
    best.v1 = 0.0;
    best.v2 = 0.0;
    best.objective = 0.0;
    best.start_index = -1;  // baseline fallback
    double best_score = 0.0;

    for (std::size_t i = 0; i < polls.size(); ++i) {
        const ParamPoint point = map.to_params(polls[i].point);
        const ScheduleParams p = make_params(point, k_max);
        const double cbar = spectrum.cbar(point.c);
        const ErrorReport report = r_objective(p, cbar, mu);
        const double v1 = report.tau / tau0 - 1.0;
        const double v2 = report.kappa / kappa0 - 1.0;
        if (v1 > slack + kFeasibilityTol || v2 > slack + kFeasibilityTol) continue;
        const double score = v1 + mu * v2;
        if (score < best_score) {
            best_score = score;
            best.params = p;
            best.report = report;
            best.v1 = v1;
            best.v2 = v2;
            best.objective = score;
            best.start_index = static_cast<int>(i);
            best.evaluations = polls[i].evaluations;
        }
    }
    long total_evals = 0;
    for (const auto& poll : polls) total_evals += poll.evaluations;
    if (best.start_index < 0) best.evaluations = total_evals;
    return best;
}

RobustnessScan parameter_robustness_scan(const ParamPoint& params,
                                         const std::vector<double>& cond_grid,
                                         const std::vector<std::int64_t>& kmax_grid) {
    RobustnessScan scan;
    scan.cond_grid = cond_grid;
    scan.kmax_grid = kmax_grid;
    scan.cells.resize(kmax_grid.size());
    for (std::size_t ki = 0; ki < kmax_grid.size(); ++ki) {
        scan.cells[ki].resize(cond_grid.size());
        for (std::size_t ci = 0; ci < cond_grid.size(); ++ci) {
            const double cond = cond_grid[ci];
            if (!(cond >= 1.0)) throw std::invalid_argument("robustness scan: cond must be >= 1");
            const SpectrumModel spectrum{1.0 / cond, 1.0};
            const ScheduleParams p = make_params(params, kmax_grid[ki]);
            ParamPoint base_point;
            base_point.c = 1.0;
            const ScheduleParams base = make_params(base_point, kmax_grid[ki]);
            RobustnessCell cell;
            cell.tau_ratio = tau(p, spectrum.cbar(p.c)) / tau(base, spectrum.cbar(base.c));
            cell.kappa_ratio = kappa(p, spectrum.cbar(p.c)) / kappa(base, spectrum.cbar(base.c));
            scan.cells[ki][ci] = cell;
        }
    }
    return scan;
}

}  // namespace wavg
