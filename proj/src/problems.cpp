#include "wavg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wavg {

namespace {

// log(sigma(t)) = -softplus(-t), evaluated without overflow.
double log_sigmoid(double t) noexcept {
    const double z = -t;
    return -(std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))));
}

// 1 - sigma(t) = sigma(-t), evaluated without overflow.
double sigmoid_complement(double t) noexcept {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

double sigmoid(double t) noexcept { return 1.0 - sigmoid_complement(t); }

std::vector<double> sorted_uniform(int n, double lo, double hi, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("spectrum dimension must be >= 1");
    RngStream rng(seed);
    std::vector<double> d(static_cast<std::size_t>(n));
    for (double& v : d) v = lo + (hi - lo) * rng.next_unit();
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

DiagQuadraticOracle::DiagQuadraticOracle(std::vector<double> diag, double rho)
    : diag_(std::move(diag)), rho_(rho) {
    if (diag_.empty()) throw std::invalid_argument("DiagQuadraticOracle: empty diagonal");
    if (!std::is_sorted(diag_.begin(), diag_.end()))
        std::sort(diag_.begin(), diag_.end());
    if (!(diag_.front() > 0.0))
        throw std::invalid_argument("DiagQuadraticOracle: diagonal entries must be > 0");
    if (!(rho_ >= 0.0)) throw std::invalid_argument("DiagQuadraticOracle: rho must be >= 0");
}

DiagQuadraticOracle DiagQuadraticOracle::random(int n, double d_lo, double d_hi,
                                                std::uint64_t seed) {
    return random(n, d_lo, d_hi, seed, 1.0 / std::sqrt(static_cast<double>(n)));
}

DiagQuadraticOracle DiagQuadraticOracle::random(int n, double d_lo, double d_hi,
                                                std::uint64_t seed, double rho) {
    return DiagQuadraticOracle(sorted_uniform(n, d_lo, d_hi, seed), rho);
}

void DiagQuadraticOracle::sample(std::span<const double> x, RngStream& rng,
                                 std::span<double> g) const {
    const std::size_t n = diag_.size();
    for (std::size_t i = 0; i < n; ++i)
        g[i] = diag_[i] * x[i] + rho_ * rng.next_gaussian();
}

void DiagQuadraticOracle::exact_gradient(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i < diag_.size(); ++i) g[i] = diag_[i] * x[i];
}

RankOneQuadraticOracle::RankOneQuadraticOracle(Matrix a, double rho)
    : n_(a.rows()), a_(std::move(a)), rho_(rho) {
    if (n_ < 1 || a_.cols() != n_)
        throw std::invalid_argument("RankOneQuadraticOracle: A must be square");
    if (!(rho_ >= 0.0)) throw std::invalid_argument("RankOneQuadraticOracle: rho must be >= 0");
}

RankOneQuadraticOracle::RankOneQuadraticOracle(std::vector<double> diag, double rho)
    : n_(static_cast<int>(diag.size())), diag_(std::move(diag)), rho_(rho) {
    if (n_ < 1) throw std::invalid_argument("RankOneQuadraticOracle: empty diagonal");
    for (double v : diag_)
        if (v == 0.0) throw std::invalid_argument("RankOneQuadraticOracle: singular diagonal");
    if (!(rho_ >= 0.0)) throw std::invalid_argument("RankOneQuadraticOracle: rho must be >= 0");
}

RankOneQuadraticOracle RankOneQuadraticOracle::random_diagonal(int n, std::uint64_t seed) {
    const double hi = 1.0 / std::sqrt(static_cast<double>(n));
    const double lo = hi / std::sqrt(10.0);
    std::vector<double> d = sorted_uniform(n, lo, hi, seed);
    if (n == 1) {
        d[0] = hi;
    } else {
        // affine rescale so the extremes land exactly on [lo, hi]
        const double dmin = d.front(), dmax = d.back();
        for (double& v : d) v = lo + (v - dmin) * (hi - lo) / (dmax - dmin);
    }
    return RankOneQuadraticOracle(std::move(d),
                                  1.0 / std::sqrt(static_cast<double>(n)));
}

void RankOneQuadraticOracle::sample(std::span<const double> x, RngStream& rng,
                                    std::span<double> g) const {
    const std::size_t n = static_cast<std::size_t>(n_);
    static thread_local std::vector<double> a_buf;
    a_buf.resize(n);
    if (is_diagonal()) {
        for (std::size_t i = 0; i < n; ++i) a_buf[i] = diag_[i] * rng.next_gaussian();
    } else {
        static thread_local std::vector<double> r_buf;
        r_buf.resize(n);
        for (std::size_t i = 0; i < n; ++i) r_buf[i] = rng.next_gaussian();
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                s += a_(static_cast<int>(i), static_cast<int>(j)) * r_buf[j];
            a_buf[i] = s;
        }
    }
    double ax = 0.0;
    for (std::size_t i = 0; i < n; ++i) ax += a_buf[i] * x[i];
    for (std::size_t i = 0; i < n; ++i) g[i] = a_buf[i] * ax + rho_ * rng.next_gaussian();
}

void RankOneQuadraticOracle::exact_gradient(std::span<const double> x,
                                            std::span<double> g) const {
    if (is_diagonal()) {
        for (std::size_t i = 0; i < diag_.size(); ++i) g[i] = diag_[i] * diag_[i] * x[i];
        return;
    }
    const std::vector<double> atx = transposed_matvec(a_, x);
    const std::vector<double> y = matvec(a_, atx);
    std::copy(y.begin(), y.end(), g.begin());
}

Matrix RankOneQuadraticOracle::a_matrix() const {
    if (!is_diagonal()) return a_;
    Matrix m(n_, n_);
    for (int i = 0; i < n_; ++i) m(i, i) = diag_[static_cast<std::size_t>(i)];
    return m;
}

Matrix RankOneQuadraticOracle::noise_covariance(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("noise_covariance: dimension mismatch");
    const Matrix a = a_matrix();
    const std::vector<double> atx = transposed_matvec(a, x);   // A'x
    const std::vector<double> aatx = matvec(a, atx);           // AA'x
    double atx_sq = 0.0;
    for (double v : atx) atx_sq += v * v;                      // ||A'x||^2
    const Matrix aat = matmul(a, transpose(a));
    Matrix cov = outer(aatx, aatx) + atx_sq * aat;
    for (int i = 0; i < n_; ++i) cov(i, i) += rho_ * rho_;
    return cov;
}

void LogisticProblem::validate() const {
    if (n < 1 || m < 1) throw std::invalid_argument("LogisticProblem: empty data");
    if (features.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(m))
        throw std::invalid_argument("LogisticProblem: feature buffer size mismatch");
    if (labels.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("LogisticProblem: label count mismatch");
    for (const std::int8_t b : labels)
        if (b != 1 && b != -1)
            throw std::invalid_argument("LogisticProblem: labels must be +1 or -1");
}

namespace {

double margin(const LogisticProblem& prob, std::span<const double> x, int i) {
    const auto a = prob.feature_row(i);
    double t = 0.0;
    for (int j = 0; j < prob.n; ++j)
        t += static_cast<double>(a[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
    return static_cast<double>(prob.labels[static_cast<std::size_t>(i)]) * t;
}

template <class Fn>
void for_each_index(const LogisticProblem& prob, std::span<const int> subset, Fn&& fn) {
    if (subset.empty()) {
        for (int i = 0; i < prob.m; ++i) fn(i);
    } else {
        for (const int i : subset) {
            if (i < 0 || i >= prob.m)
                throw std::out_of_range("logistic subset index " + std::to_string(i));
            fn(i);
        }
    }
}

}  // namespace

double logistic_value(const LogisticProblem& prob, std::span<const double> x,
                      std::span<const int> subset) {
    double sum = 0.0;
    std::size_t count = 0;
    for_each_index(prob, subset, [&](int i) {
        sum -= log_sigmoid(margin(prob, x, i));
        ++count;
    });
    return sum / static_cast<double>(count);
}

std::pair<double, std::vector<double>> logistic_value_grad(const LogisticProblem& prob,
                                                           std::span<const double> x,
                                                           std::span<const int> subset) {
    std::vector<double> grad(static_cast<std::size_t>(prob.n), 0.0);
    double value = 0.0;
    std::size_t count = 0;
    for_each_index(prob, subset, [&](int i) {
        const double bm = margin(prob, x, i);
        value -= log_sigmoid(bm);
        const double coeff =
            -static_cast<double>(prob.labels[static_cast<std::size_t>(i)]) * sigmoid_complement(bm);
        const auto a = prob.feature_row(i);
        for (int j = 0; j < prob.n; ++j)
            grad[static_cast<std::size_t>(j)] +=
                coeff * static_cast<double>(a[static_cast<std::size_t>(j)]);
        ++count;
    });
    const double inv = 1.0 / static_cast<double>(count);
    value *= inv;
    for (double& g : grad) g *= inv;
    return {value, std::move(grad)};
}

Matrix logistic_hessian(const LogisticProblem& prob, std::span<const double> x,
                        int max_dimension) {
    if (prob.n > max_dimension)
        throw std::length_error("logistic_hessian: dimension " + std::to_string(prob.n) +
                                " exceeds the allocation limit " + std::to_string(max_dimension));
    Matrix h(prob.n, prob.n);
    for (int i = 0; i < prob.m; ++i) {
        const double s = sigmoid(margin(prob, x, i));
        const double coeff = s * (1.0 - s) / static_cast<double>(prob.m);
        const auto a = prob.feature_row(i);
        for (int r = 0; r < prob.n; ++r) {
            const double ar = static_cast<double>(a[static_cast<std::size_t>(r)]);
            if (ar == 0.0) continue;
            for (int c = 0; c < prob.n; ++c)
                h(r, c) += coeff * ar * static_cast<double>(a[static_cast<std::size_t>(c)]);
        }
    }
    return h;
}

int classify(std::span<const double> x, std::span<const float> feature) {
    if (x.size() != feature.size()) throw std::invalid_argument("classify: dimension mismatch");
    double t = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) t += x[j] * static_cast<double>(feature[j]);
    return t > 0.0 ? 1 : -1;
}

double false_classification_rate(const LogisticProblem& prob, std::span<const double> x) {
    int wrong = 0;
    for (int i = 0; i < prob.m; ++i)
        if (classify(x, prob.feature_row(i)) != prob.labels[static_cast<std::size_t>(i)]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(prob.m);
}

LogisticOracle::LogisticOracle(const LogisticProblem& prob) : prob_(&prob) {
    prob.validate();
}

void LogisticOracle::sample(std::span<const double> x, RngStream& rng,
                            std::span<double> g) const {
    const int i = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(prob_->m)));
    const double bm = margin(*prob_, x, i);
    const double coeff =
        -static_cast<double>(prob_->labels[static_cast<std::size_t>(i)]) * sigmoid_complement(bm);
    const auto a = prob_->feature_row(i);
    for (int j = 0; j < prob_->n; ++j)
        g[static_cast<std::size_t>(j)] = coeff * static_cast<double>(a[static_cast<std::size_t>(j)]);
}

void LogisticOracle::exact_gradient(std::span<const double> x, std::span<double> g) const {
    const auto [value, grad] = logistic_value_grad(*prob_, x);
    (void)value;
    std::copy(grad.begin(), grad.end(), g.begin());
}

double gaussian_fourth_moment(int i, int j, int p, int q) noexcept {
    if (i == j && j == p && p == q) return 3.0;
    if (i == j && p == q && i != p) return 1.0;
    if (i != j && ((i == p && j == q) || (i == q && j == p))) return 1.0;
    return 0.0;
}

Matrix quartic_expectation(const Matrix& b) {
    if (b.rows() != b.cols()) throw std::invalid_argument("quartic_expectation: B must be square");
    const double tr = trace(b);
    Matrix out(b.rows(), b.cols());
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            out(i, j) = (i == j) ? 2.0 * b(i, i) + tr : 2.0 * b(i, j);
    return out;
}

}  // namespace wavg
