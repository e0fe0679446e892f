#pragma once

// Ritz method for A x = y in the eigenbasis {e_k} of an auxiliary operator B.
//
// The coordinate subspace H_n is spanned by the first n eigenvectors of B.
// x_n minimises F(z) = (Az, z) - 2 Re(y, z) over H_n, i.e. solves the leading
// n x n block of the Gram system. Errors are measured in
//   ||z||_+   = (Az, z)^{1/2}       (energy norm of A)
//   |||z|||_+ = ||B^{1/2} z||        (energy norm of B)

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "specritz/approx_theory.hpp"
#include "specritz/spectral_core.hpp"

namespace specritz::ritz {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Entries a_jk = (A e_j, e_k) of the truncated operator.
class GramProvider {
public:
    virtual ~GramProvider() = default;

    virtual std::size_t size() const = 0;
    virtual Complex entry(std::size_t j, std::size_t k) const = 0;
    /// Leading n x n block.
    virtual Matrix block(std::size_t n) const;
    /// A z for a full-length coefficient vector.
    virtual Vector apply(const Vector& z) const;
    /// Solves the leading n x n system by Cholesky; throws
    /// GramNotPositiveDefinite when the block is not positive definite.
    virtual Vector solve_leading(std::size_t n, const Vector& rhs) const;
};

class DenseGram final : public GramProvider {
public:
    explicit DenseGram(Matrix entries);

    std::size_t size() const override { return static_cast<std::size_t>(entries_.rows()); }
    Complex entry(std::size_t j, std::size_t k) const override {
        return entries_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    }
    Matrix block(std::size_t n) const override;
    Vector apply(const Vector& z) const override;
    const Matrix& matrix() const noexcept { return entries_; }

private:
    Matrix entries_;
};

class DiagonalGram final : public GramProvider {
public:
    explicit DiagonalGram(std::vector<double> diagonal);

    std::size_t size() const override { return diagonal_.size(); }
    Complex entry(std::size_t j, std::size_t k) const override { return j == k ? diagonal_[j] : 0.0; }
    Vector apply(const Vector& z) const override;
    Vector solve_leading(std::size_t n, const Vector& rhs) const override;

private:
    std::vector<double> diagonal_;
};

using GramPtr = std::shared_ptr<const GramProvider>;

struct RitzProblem {
    SpectrumPtr b_spectrum;
    GramPtr gram;
    SpectralVector rhs;
    std::optional<SpectralVector> exact;

    RitzProblem(SpectrumPtr b_spectrum, GramPtr gram, SpectralVector rhs,
                std::optional<SpectralVector> exact = std::nullopt);

    std::size_t truncation_order() const noexcept { return b_spectrum->truncation_order(); }

    /// Solution of the full N x N truncated system.
    SpectralVector full_solution() const;
    /// The exact solution if present, otherwise the full truncated solution.
    SpectralVector reference_solution() const;
    /// Copy with `exact` filled from the full system when absent.
    RitzProblem with_reference_solution() const;
};

struct RitzSolution {
    std::size_t n = 0;
    std::vector<Complex> coefficients;  // length n
    SpectralVector approximant;          // x_n padded to length N
    double energy_error = 0.0;           // ||x - x_n||_+
    double b_energy_error = 0.0;         // |||x - x_n|||_+
    double residual = 0.0;               // ||A x_n - y||
    /// max_{j<n} |(A(x - x_n), e_j)| / ||y||.
    double galerkin_defect = 0.0;
};

RitzSolution solve(const RitzProblem& problem, std::size_t n);

double energy_norm(const GramProvider& gram, const SpectralVector& z);
/// |||z|||_+ = (sum lambda_k |c_k|^2)^{1/2}.
double b_energy_norm(const SpectralVector& z);
/// F(z) = (Az, z) - 2 Re (y, z).
double energy_functional(const RitzProblem& problem, const SpectralVector& z);

/// c1 = ||B^{1/2} A^{-1/2}||, c2 = ||A^{1/2} B^{-1/2}|| on the truncation.
struct EquivalenceConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3() const { return c1 * c2; }
    double c0() const { return c2 * c3(); }
};

/// Extreme eigenvalues of the pencil (A, B). Truncated values are lower bounds
/// of the operator norms.
EquivalenceConstants equivalence_constants(const RitzProblem& problem);

/// |||x - x~_n|||_+ <= |||x - x_n|||_+ <= c3 |||x - x~_n|||_+ with x~_n the
/// truncated eigen-expansion of x.
struct SandwichReport {
    std::size_t n = 0;
    double lower = 0.0;
    double middle = 0.0;
    double upper = 0.0;
    bool lower_holds = false;
    bool upper_holds = false;
    bool satisfied() const { return lower_holds && upper_holds; }
    double slack() const { return std::min(middle - lower, upper - middle); }
};

SandwichReport sandwich_check(const RitzProblem& problem, std::size_t n, const EquivalenceConstants& constants);
SandwichReport sandwich_check(const RitzProblem& problem, std::size_t n);

/// ||x - x_n||_+ <= c0 sqrt(k+1) / (2^k lambda_{n+1}^{alpha - 1/2})
///                  * omega_k(pi / lambda_{n+1}, B^alpha x, B).
approx::InequalityReport apriori_check(const RitzProblem& problem, std::size_t n, double alpha, unsigned k,
                                       const EquivalenceConstants& constants);
approx::InequalityReport apriori_check(const RitzProblem& problem, std::size_t n, double alpha, unsigned k);

/// ||x_N - x_{N/2}||_+ for the problem's own truncation.
double truncation_guard(const RitzProblem& problem);

// ---------------------------------------------------------------------------
// Sine-basis model with A = B = -d^2/dt^2, lambda_k = k^2, and
// x_k = 1 / (k^{2 alpha + 1/2} ln^{1/2} k) for k >= 2: the Ritz errors obey
// the decay of the a priori estimate while x is not in D(B^alpha).

struct CounterexamplePoint {
    std::size_t n = 0;
    double tail_sq = 0.0;       // ||x - x_n||_+^2
    double scaled_error = 0.0;  // lambda_n^{alpha - 1/2} ||x - x_n||_+
    double bound_sq = 0.0;      // 1 / ((4 alpha - 2) n^{4 alpha - 2} ln(n + 1))
    bool bound_holds = false;
};

struct PartialSum {
    std::size_t m = 0;
    double sum = 0.0;     // sum_{k<=M} lambda_k^{2 alpha} x_k^2 = sum 1/(k ln k)
    double log_log = 0.0;  // ln ln M
};

struct CounterexampleReport {
    double alpha = 0.0;
    std::size_t truncation = 0;
    std::vector<CounterexamplePoint> points;
    std::vector<PartialSum> partial_sums;
    bool bound_holds = false;
    bool scaled_error_decreasing = false;
};

/// Tail beyond the truncation is added through int_{N+1/2}^inf of the summand.
CounterexampleReport counterexample(double alpha, std::size_t truncation, std::span<const std::size_t> n_values,
                                    std::span<const std::size_t> partial_sum_points);

/// Diagonal Ritz problem (A = B) carrying the counterexample vector as exact solution.
RitzProblem counterexample_problem(double alpha, std::size_t truncation);

// ---------------------------------------------------------------------------

struct DecaySample {
    std::size_t n = 0;
    double error = 0.0;  // ||x - x_n||_+
};

struct SmoothnessOptions {
    double bounded_factor = 1.5;
    double growth_threshold = 1.05;
};

struct SmoothnessReport {
    double fitted_constant = 0.0;
    bool hypothesis_holds = false;
    std::vector<PartialSum> partial_sums;  // at N/4, N/2, N
    double growth_ratio = 0.0;             // S_N / S_{N/4}
    bool membership_confirmed = false;
};

/// Tests ||x - x_n||_+ <= c omega(1/lambda_{n+1}) / lambda_{n+1}^{alpha - 1/2}
/// against measured errors and checks x in D(B^alpha) through the partial
/// sums of lambda_k^{2 alpha} |c_k|^2.
SmoothnessReport smoothness_from_rate(const RitzProblem& problem, std::span<const DecaySample> decay,
                                      const approx::ModulusDescriptor& omega, double alpha,
                                      const SmoothnessOptions& options = {});

}  // namespace specritz::ritz
