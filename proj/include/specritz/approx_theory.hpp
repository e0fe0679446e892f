#pragma once

// Direct (Jackson-type) and inverse (Bernstein-type) approximation results for
// the diagonal spectral model: inequality verifiers, the Dini-type envelope
// integrals, and the dyadic construction behind the inverse theorem.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specritz/spectral_core.hpp"

namespace specritz::approx {

/// Parameters an inequality was evaluated at.
struct ParameterRecord {
    std::string check;
    unsigned k = 0;
    std::vector<std::pair<std::string, double>> values;
    std::string symbol;
    std::optional<std::size_t> vector_id;

    /// Compact `key=value;...` rendering (no commas, safe inside CSV fields).
    std::string describe() const;
};

/// Relative slack guarding against round-off false violations.
inline constexpr double kRelativeSlack = 1e-10;

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double slack = 0.0;  // rhs - lhs
    ParameterRecord context;

    /// satisfied <=> lhs <= rhs (1 + 1e-10) + abs_tol.
    static InequalityReport evaluate(double lhs, double rhs, ParameterRecord context, double abs_tol = 0.0);
};

/// A function of the type of a modulus of continuity.
struct ModulusDescriptor {
    std::string name;
    std::function<double(double)> evaluate;
    /// c with omega(2t) <= c omega(t).
    double doubling_constant = 0.0;
    /// Analytic value of int_0^eps omega(t)/t dt, used below eps = 1e-12.
    std::function<double(double)> dini_tail;
    /// Set for omega(t) = t^a; selects the row of the rate classification.
    std::optional<double> power_exponent;

    double operator()(double t) const { return evaluate(t); }

    /// omega(t) = t^a with its exact tail certificate eps^a / a.
    static ModulusDescriptor power(double exponent);
};

struct ModulusConditions {
    bool continuous_nondecreasing = false;
    bool vanishes_at_zero = false;
    bool doubling = false;
    bool dini = false;
    double dini_integral = 0.0;  // int_0^1 omega(t)/t dt when finite

    bool modulus_type() const { return continuous_nondecreasing && vanishes_at_zero && doubling; }
    bool all() const { return modulus_type() && dini; }
};

/// Lower end of the quadrature range for Dini integrals.
inline constexpr double kDiniCutoff = 1e-12;

ModulusConditions check_conditions(const ModulusDescriptor& omega);

/// Bernstein-type bound ||Delta_h^k G(B) x|| <= h^k alpha^k G(alpha) ||x|| for
/// x projected onto |lambda| <= alpha.
InequalityReport bernstein_check(const ScalarSymbol& symbol, unsigned k, double h, double alpha,
                                 const SpectralVector& x);

/// E_r(x) <= sqrt(k+1) / (2^k G(r)) * omega_k(pi / r, G(B) x).
InequalityReport jackson_check(const ScalarSymbol& symbol, unsigned k, double r, const SpectralVector& x);

/// int_0^pi (1 - cos(theta t))^k sin t dt.
double kernel_integral(double theta, unsigned k);

/// Closed-form lower bound 2^{k+1} / (k+1) of `kernel_integral`.
double kernel_lower_bound(unsigned k);

/// lhs = lower bound, rhs = integral, absolute tolerance 1e-9.
InequalityReport kernel_check(double theta, unsigned k);

/// u_{2^j} = E([-2^j, 2^j]) x for j = 0..j_max.
std::vector<SpectralVector> dyadic_approximants(const SpectralVector& x, unsigned j_max);

struct InverseBound {
    double lemma_term = 0.0;  // t^k int_t^1 omega(tau) / tau^{k+1} dtau
    double dini_term = 0.0;   // int_0^t omega(tau) / tau dtau
    double envelope() const { return lemma_term + dini_term; }
};

InverseBound inverse_bound(const ModulusDescriptor& omega, unsigned k, double t);

/// t^k int_t^1 omega(tau) / tau^{k+1} dtau (requires conditions 1-3 only).
double lemma_rate_bound(const ModulusDescriptor& omega, unsigned k, double t);

/// Omega(t) = int_0^t omega(u) / u du.
double big_omega(const ModulusDescriptor& omega, double t);

struct BigOmegaProperties {
    bool vanishes_at_zero = false;
    bool monotone = false;
    bool doubling = false;
    double doubling_constant = 0.0;  // sampled sup Omega(2t) / Omega(t)
};

/// Samples Omega on t = 2^{-j}, j = 0..40, and checks its three properties.
BigOmegaProperties check_big_omega(const ModulusDescriptor& omega);

/// Vector on lambda_k = k (k = 1..modes) supported on lambda = 2^j whose tail
/// E_{2^j}(x) equals omega(2^{-j}) / G(2^j) for every level below the top one.
SpectralVector dyadic_target_vector(const ModulusDescriptor& omega, const ScalarSymbol& symbol, std::size_t modes);

enum class RateRegime { BelowSmoothness, Critical, AboveSmoothness, Envelope };

const char* to_string(RateRegime regime) noexcept;

struct InverseSample {
    double t = 0.0;
    double modulus = 0.0;  // omega_k(t, G(B) x)
    InverseBound bound;
    double ratio = 0.0;         // modulus / envelope
    double regime_ratio = 0.0;  // modulus / classification reference
};

struct InverseExperimentOptions {
    double t_min = 1.0 / 4096.0;
    double t_max = 0.5;
    unsigned points_per_octave = 4;
    /// Upper end of the range the classification ratio is judged on.
    double regime_t_max = 0.25;
    /// Bound on sup(small-t half) / sup(large-t half) for "bounded".
    double bounded_factor = 1.5;
};

struct InverseExperimentReport {
    std::size_t modes = 0;
    unsigned k = 0;
    double fitted_constant = 0.0;  // least m_k with omega_k <= m_k (I1 + I2) on the grid
    RateRegime regime = RateRegime::Envelope;
    bool regime_bounded = false;
    std::vector<InverseSample> samples;
};

InverseExperimentReport inverse_theorem_experiment(const ModulusDescriptor& omega, const ScalarSymbol& symbol,
                                                   unsigned k, std::size_t modes,
                                                   const InverseExperimentOptions& options = {});

/// Reference growth of omega_k(t) for omega(t) = t^a.
double regime_reference(RateRegime regime, unsigned k, double exponent, double t);

/// True when the sup of `values` over the second half of the sequence is at
/// most `factor` times the sup over the first half. Order the sequence so that
/// the asymptotic end (small t, large n) comes last.
bool bounded_trend(std::span<const double> values, double factor);

}  // namespace specritz::approx
