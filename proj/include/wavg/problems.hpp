#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wavg/matrix.hpp"
#include "wavg/sgd.hpp"

namespace wavg {

/// f(x) = 1/2 x'Dx with additive Gaussian noise on the gradient:
/// a sample returns D∘x + b, b ~ N(0, rho^2 I).  Minimizer x* = 0.
class DiagQuadraticOracle final : public GradientOracle {
  public:
    /// diag must be positive; rho >= 0 (rho = 0 gives the exact gradient,
    /// useful in tests).
    DiagQuadraticOracle(std::vector<double> diag, double rho);

    /// Spectrum drawn uniformly from [d_lo, d_hi] and sorted; rho defaults
    /// to 1/sqrt(n) so that E||b||^2 = 1 independent of the dimension.
    static DiagQuadraticOracle random(int n, double d_lo, double d_hi, std::uint64_t seed);
    static DiagQuadraticOracle random(int n, double d_lo, double d_hi, std::uint64_t seed,
                                      double rho);

    int dimension() const noexcept override { return static_cast<int>(diag_.size()); }
    void sample(std::span<const double> x, RngStream& rng, std::span<double> g) const override;
    bool has_exact_gradient() const noexcept override { return true; }
    void exact_gradient(std::span<const double> x, std::span<double> g) const override;

    double d_min() const noexcept { return diag_.front(); }
    double d_max() const noexcept { return diag_.back(); }
    double rho() const noexcept { return rho_; }
    const std::vector<double>& diag() const noexcept { return diag_; }

  private:
    std::vector<double> diag_;  // sorted ascending
    double rho_;
};

/// f_k(x) = 1/2 ((a^k)'x)^2 + (b^k)'x with a^k = A r^k, r^k ~ N(0, I) and
/// b^k ~ N(0, rho^2 I); the expected objective is 1/2 x'AA'x, so the exact
/// gradient is AA'x and each single sample carries rank-one information.
class RankOneQuadraticOracle final : public GradientOracle {
  public:
    RankOneQuadraticOracle(Matrix a, double rho);
    /// Diagonal surrogate: A = Diag(diag); sampling cost O(n) instead of O(n^2).
    RankOneQuadraticOracle(std::vector<double> diag, double rho);

    /// Diagonal spectrum drawn uniformly and rescaled so the extreme entries
    /// are exactly (10n)^{-1/2} and n^{-1/2} (cond(D^2) = 10); rho = 1/sqrt(n).
    static RankOneQuadraticOracle random_diagonal(int n, std::uint64_t seed);

    int dimension() const noexcept override { return n_; }
    void sample(std::span<const double> x, RngStream& rng, std::span<double> g) const override;
    bool has_exact_gradient() const noexcept override { return true; }
    void exact_gradient(std::span<const double> x, std::span<double> g) const override;

    /// Exact noise covariance rho^2 I + AA'xx'AA' + ||A'x||^2 AA'.
    Matrix noise_covariance(std::span<const double> x) const;

    bool is_diagonal() const noexcept { return !diag_.empty(); }
    const std::vector<double>& diag() const noexcept { return diag_; }
    double rho() const noexcept { return rho_; }
    Matrix a_matrix() const;  // materializes Diag(diag) in the diagonal case

  private:
    int n_ = 0;
    Matrix a_;                  // empty when diagonal
    std::vector<double> diag_;  // empty when general
    double rho_;
};

/// Binary logistic regression data: features in [0,1], labels in {-1,+1}.
struct LogisticProblem {
    int n = 0;                    // feature dimension
    int m = 0;                    // sample count
    std::vector<float> features;  // m*n row-major
    std::vector<std::int8_t> labels;

    std::span<const float> feature_row(int i) const noexcept {
        return {features.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n),
                static_cast<std::size_t>(n)};
    }
    void validate() const;
};

/// Mini-batch value and gradient of
///   f_S(x) = -(1/|S|) sum_{i in S} log sigma(b_i a_i'x).
/// The full-batch gradient is the expectation of single-sample gradients.
double logistic_value(const LogisticProblem& prob, std::span<const double> x,
                      std::span<const int> subset = {});
std::pair<double, std::vector<double>> logistic_value_grad(const LogisticProblem& prob,
                                                           std::span<const double> x,
                                                           std::span<const int> subset = {});

/// Full Hessian (1/m) sum a_i a_i' s_i (1-s_i); refuses dimensions whose n*n
/// allocation would exceed max_dimension (test-scale guard).
Matrix logistic_hessian(const LogisticProblem& prob, std::span<const double> x,
                        int max_dimension = 4096);

/// Sign rule: +1 if a'x > 0, else -1 (exact ties map to -1).
int classify(std::span<const double> x, std::span<const float> feature);

/// Fraction of misclassified samples in [0, 1].
double false_classification_rate(const LogisticProblem& prob, std::span<const double> x);

/// Single-sample stochastic gradient oracle over a logistic problem: each
/// draw picks one index uniformly and returns its gradient.
class LogisticOracle final : public GradientOracle {
  public:
    explicit LogisticOracle(const LogisticProblem& prob);

    int dimension() const noexcept override { return prob_->n; }
    void sample(std::span<const double> x, RngStream& rng, std::span<double> g) const override;
    bool has_exact_gradient() const noexcept override { return true; }
    void exact_gradient(std::span<const double> x, std::span<double> g) const override;

  private:
    const LogisticProblem* prob_;  // non-owning; problem outlives the oracle
};

/// E(r_i r_j r_p r_q) for independent standard normals: 3 if all four
/// indices coincide, 1 for two matching pairs, 0 otherwise.
double gaussian_fourth_moment(int i, int j, int p, int q) noexcept;

/// E(r r' B r r') = 2B + tr(B) I for symmetric B (componentwise:
/// 2B_ii + tr(B) on the diagonal, 2B_ij off it).
Matrix quartic_expectation(const Matrix& b);

}  // namespace wavg
