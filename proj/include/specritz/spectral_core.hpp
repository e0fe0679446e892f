#pragma once

// Diagonal model of a self-adjoint operator B with a discrete simple spectrum.
//
// A vector is stored through its coefficients in B's eigenbasis, so every
// function of B acts mode by mode: G(B) multiplies coefficient k by G(lambda_k),
// the unitary group U(h) = exp(ihB) by exp(i lambda_k h), and the spectral
// projection E([-r, r]) masks the modes with |lambda_k| > r.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specritz/error.hpp"

namespace specritz {

using Complex = std::complex<double>;

/// Strictly increasing list of simple eigenvalues of B (the truncation order
/// is the number of eigenvalues kept).
class SpectrumModel {
public:
    explicit SpectrumModel(std::vector<double> eigenvalues);

    /// lambda_k = first + k * step for k = 0..count-1.
    static SpectrumModel arithmetic(std::size_t count, double first, double step);

    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    double operator[](std::size_t k) const { return eigenvalues_[k]; }
    std::size_t truncation_order() const noexcept { return eigenvalues_.size(); }
    double max_abs() const noexcept { return max_abs_; }
    bool is_positive() const noexcept { return !eigenvalues_.empty() && eigenvalues_.front() > 0.0; }

    friend bool operator==(const SpectrumModel& a, const SpectrumModel& b) {
        return a.eigenvalues_ == b.eigenvalues_;
    }

private:
    std::vector<double> eigenvalues_;
    double max_abs_ = 0.0;
};

using SpectrumPtr = std::shared_ptr<const SpectrumModel>;

inline SpectrumPtr make_spectrum(std::vector<double> eigenvalues) {
    return std::make_shared<const SpectrumModel>(std::move(eigenvalues));
}

/// Coefficients c_k = (x, e_k) of a vector in the eigenbasis of B.
class SpectralVector {
public:
    SpectralVector(SpectrumPtr spectrum, std::vector<Complex> coefficients);

    static SpectralVector zero(SpectrumPtr spectrum);
    static SpectralVector from_real(SpectrumPtr spectrum, std::span<const double> coefficients);
    /// Unit coefficient on mode `index`, zero elsewhere.
    static SpectralVector mode(SpectrumPtr spectrum, std::size_t index, Complex value = 1.0);

    const SpectrumModel& spectrum() const noexcept { return *spectrum_; }
    const SpectrumPtr& spectrum_ptr() const noexcept { return spectrum_; }
    std::span<const Complex> coefficients() const noexcept { return coefficients_; }
    std::span<Complex> coefficients() noexcept { return coefficients_; }
    std::size_t size() const noexcept { return coefficients_.size(); }
    Complex operator[](std::size_t k) const { return coefficients_[k]; }

    SpectralVector& operator+=(const SpectralVector& other);
    SpectralVector& operator-=(const SpectralVector& other);
    SpectralVector& operator*=(Complex scale);

    friend SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
    friend SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
    friend SpectralVector operator*(Complex s, SpectralVector a) { return a *= s; }

private:
    void require_same_spectrum(const SpectralVector& other) const;

    SpectrumPtr spectrum_;
    std::vector<Complex> coefficients_;
};

/// Scalar function G used in the functional calculus G(B).
struct ScalarSymbol {
    std::string name;
    std::function<double(double)> evaluate;
    bool is_even = false;
    bool is_nondecreasing_on_positives = false;
    /// sup_{lambda > 0} G(2 lambda) / G(lambda), when known.
    std::optional<double> doubling_bound;

    double operator()(double lambda) const { return evaluate(lambda); }

    static ScalarSymbol constant(double value = 1.0);
    /// G(lambda) = |lambda|^power.
    static ScalarSymbol abs_power(double power);
};

/// Spot-checks the evenness and monotonicity flags of `symbol` on a grid of
/// `samples` points in [0, limit]. Returns false if a declared flag is
/// contradicted or a value is negative or non-finite.
bool symbol_flags_consistent(const ScalarSymbol& symbol, double limit, std::size_t samples = 1024);

double norm(const SpectralVector& x);

SpectralVector apply_function(const ScalarSymbol& symbol, const SpectralVector& x);

/// U(h) x with U(h) = exp(ihB).
SpectralVector unitary(double h, const SpectralVector& x);

/// Delta_h^k x = (U(h) - I)^k x, evaluated mode by mode. k = 0 returns x.
SpectralVector difference(unsigned k, double h, const SpectralVector& x);

/// Delta_h^k x through the binomial expansion sum_j (-1)^{k-j} C(k,j) U(jh) x.
SpectralVector difference_binomial(unsigned k, double h, const SpectralVector& x);

/// ||Delta_h^k x|| from |exp(i theta) - 1| = 2 |sin(theta / 2)|.
double difference_norm(unsigned k, double h, const SpectralVector& x);

/// omega_k(t, x, B) = sup_{0 < tau <= t} ||Delta_tau^k x||.
///
/// The supremum is located on a uniform grid of at least 1024 points in (0, t]
/// (densified so that every oscillation of frequency max|lambda| is sampled at
/// least eight times), then the best bracket is refined by golden-section search
/// down to width 1e-10 t.
double modulus(unsigned k, double t, const SpectralVector& x);

/// Grid size used by `modulus` for a given t and spectral radius.
std::size_t modulus_grid_size(double t, double max_abs_lambda);

/// E_r(x, B) = ||x - E([-r, r]) x||.
double best_approx(double r, const SpectralVector& x);

/// E([-alpha, alpha]) x, an exponential-type entire vector of type <= alpha.
SpectralVector project_exp(double alpha, const SpectralVector& x);

/// sigma(x, B) = max{|lambda_k| : c_k != 0}; 0 for the zero vector.
double type_of(const SpectralVector& x);

}  // namespace specritz
