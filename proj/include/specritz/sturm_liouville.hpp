#pragma once

// -x'' + q(t) x = y on [0, pi] in the eigenbasis of B.
//
//   Neumann (x'(0) = x'(pi) = 0): e_0 = pi^{-1/2}, e_k = (2/pi)^{1/2} cos kt,
//                                  B = -d^2/dt^2 + 1, lambda_k = k^2 + 1, k >= 0
//   Dirichlet (x(0) = x(pi) = 0):  e_k = (2/pi)^{1/2} sin kt,
//                                  B = -d^2/dt^2,     lambda_k = k^2,     k >= 1
//
// Storage index i maps to k = i (Neumann) or k = i + 1 (Dirichlet).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "specritz/ritz.hpp"

namespace specritz::sturm {

/// f(t) = sum_m a_m cos(m t).
struct CosineSeries {
    std::vector<double> coefficients;

    double operator()(double t) const;
    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

    /// -f''.
    CosineSeries negative_second_derivative() const;
    friend CosineSeries operator+(const CosineSeries& a, const CosineSeries& b);
    friend CosineSeries operator*(const CosineSeries& a, const CosineSeries& b);
};

struct PotentialSpec {
    std::function<double(double)> q;
    std::optional<CosineSeries> cosine;
    /// Declared k with q in C^{2k} and vanishing odd derivatives at 0 and pi.
    unsigned smoothness_order = 0;

    static PotentialSpec constant(double value);
    static PotentialSpec from_cosine(CosineSeries series, unsigned smoothness_order = 8);
    static PotentialSpec from_function(std::function<double(double)> q, unsigned smoothness_order = 0);
};

/// Throws InvalidArgument unless q > 0 on a 10^4-point grid and, when a cosine
/// expansion is given, it matches q pointwise to 1e-10.
void validate(const PotentialSpec& potential);

enum class Basis { NeumannCosine, DirichletSine };

struct BoundaryValueProblem {
    PotentialSpec potential;
    std::function<double(double)> rhs_function;
    /// Basis coefficients (y, e_k); take precedence over rhs_function.
    std::optional<std::vector<double>> rhs_coefficients;
    /// Basis coefficients of a known exact solution.
    std::optional<std::vector<double>> exact_coefficients;
    Basis basis = Basis::NeumannCosine;
    std::size_t truncation = 0;
};

inline constexpr std::size_t kQuadraturePanels = std::size_t{1} << 14;

std::vector<double> eigenvalues(Basis basis, std::size_t truncation);
SpectrumPtr spectrum(Basis basis, std::size_t truncation);
double basis_function(Basis basis, std::size_t index, double t);
/// Basis coefficients (f, e_k) of a cosine series (Neumann only).
std::vector<double> basis_coefficients(const CosineSeries& f, std::size_t truncation);

/// Trapezoid approximations of int_0^pi f(t) cos(p t) dt (or sin) for
/// p = 0..count-1 with `panels` panels. On [0, pi] the trapezoid rule on the
/// even periodic extension is the Clenshaw-Curtis rule in the cosine variable.
std::vector<double> cosine_moments(const std::function<double(double)>& f, std::size_t count,
                                   std::size_t panels = kQuadraturePanels);
std::vector<double> sine_moments(const std::function<double(double)>& f, std::size_t count,
                                 std::size_t panels = kQuadraturePanels);

/// Multiplication block (q e_j, e_k) from the cosine coefficients of q.
ritz::Matrix multiplication_from_series(const CosineSeries& q, Basis basis, std::size_t truncation);
/// Multiplication block (q e_j, e_k) by quadrature; throws QuadratureNotConverged
/// when halving the panel count moves any moment by more than 1e-9.
ritz::Matrix multiplication_from_quadrature(const std::function<double(double)>& q, Basis basis,
                                            std::size_t truncation);

ritz::RitzProblem assemble_gram(const BoundaryValueProblem& bvp);

/// y = -x'' + q x computed symbolically when q has a cosine expansion.
BoundaryValueProblem manufacture(const BoundaryValueProblem& bvp, const CosineSeries& x_exact);

/// Function variant: coefficients of x by quadrature, y = A x on the
/// truncation. The derivative is used only for the boundary check.
BoundaryValueProblem manufacture(const BoundaryValueProblem& bvp, const std::function<double(double)>& x_exact,
                                 const std::function<double(double)>& x_derivative);

struct RateOptions {
    /// Errors below this multiple of ||B x|| are treated as the floor.
    double floor_relative = 1e-12;
    /// Maximum ||x_N - x_{N/2}|| relative to the smallest reported error.
    double guard_fraction = 0.01;
    unsigned max_doublings = 3;
    double slope_tolerance = 0.3;
};

struct RatePoint {
    std::size_t n = 0;
    double graph_error = 0.0;   // ||B (x - x_n)||
    double energy_error = 0.0;  // ||x - x_n||_+
    double scaled = 0.0;        // n^{2k+1} graph_error
    bool at_floor = false;
};

struct RateReport {
    unsigned smoothness = 0;
    std::size_t truncation = 0;
    std::vector<RatePoint> points;
    double slope = 0.0;         // least-squares log-log slope over the last half
    double energy_slope = 0.0;  // same for the energy norm
    bool surrogate_decreasing = false;
    bool floor_reached = false;
    double guard = 0.0;  // ||B (x_N - x_{N/2})||
    double smallest_error = 0.0;
    bool rate_satisfied = false;
};

/// Ritz errors in the B-graph norm (equivalent to W_2^2) over `n_grid`, with
/// a fitted rate and the o(n^{-(2k+1)}) surrogate n^{2k+1} e_n decreasing.
RateReport rate_experiment(const BoundaryValueProblem& bvp, unsigned smoothness, std::span<const std::size_t> n_grid,
                           const RateOptions& options = {});

/// Least-squares slope of log(values) against log(abscissae).
double log_log_slope(std::span<const double> abscissae, std::span<const double> values);

/// Closed form of sum_{m>=1} cos(m t) / m^4 on [0, pi]; a C^2 function with
/// y'(0) = y'(pi) = 0 that is not a cosine polynomial.
double quartic_bernoulli(double t);

}  // namespace specritz::sturm
