#include "specritz/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace specritz {

SpectrumModel::SpectrumModel(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "spectrum must contain at least one eigenvalue");
    }
    for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
        if (!std::isfinite(eigenvalues_[k])) {
            throw Error(ErrorCode::InvalidArgument, "eigenvalues must be finite");
        }
        if (k > 0 && !(eigenvalues_[k] > eigenvalues_[k - 1])) {
            std::ostringstream msg;
            msg << "eigenvalues must be strictly increasing (index " << k << ")";
            throw Error(ErrorCode::InvalidArgument, msg.str());
        }
    }
    max_abs_ = std::max(std::abs(eigenvalues_.front()), std::abs(eigenvalues_.back()));
}

SpectrumModel SpectrumModel::arithmetic(std::size_t count, double first, double step) {
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) values[k] = first + step * static_cast<double>(k);
    return SpectrumModel(std::move(values));
}

SpectralVector::SpectralVector(SpectrumPtr spectrum, std::vector<Complex> coefficients)
    : spectrum_(std::move(spectrum)), coefficients_(std::move(coefficients)) {
    if (!spectrum_) throw Error(ErrorCode::InvalidArgument, "vector needs a spectrum");
    if (coefficients_.size() != spectrum_->truncation_order()) {
        throw Error(ErrorCode::InvalidArgument, "coefficient count must equal the truncation order");
    }
}

SpectralVector SpectralVector::zero(SpectrumPtr spectrum) {
    const auto n = spectrum->truncation_order();
    return SpectralVector(std::move(spectrum), std::vector<Complex>(n));
}

SpectralVector SpectralVector::from_real(SpectrumPtr spectrum, std::span<const double> coefficients) {
    return SpectralVector(std::move(spectrum), std::vector<Complex>(coefficients.begin(), coefficients.end()));
}

SpectralVector SpectralVector::mode(SpectrumPtr spectrum, std::size_t index, Complex value) {
    auto x = zero(std::move(spectrum));
    x.coefficients_.at(index) = value;
    return x;
}

void SpectralVector::require_same_spectrum(const SpectralVector& other) const {
    if (spectrum_ != other.spectrum_ && !(*spectrum_ == *other.spectrum_)) {
        throw Error(ErrorCode::InvalidArgument, "vectors belong to different spectra");
    }
}

SpectralVector& SpectralVector::operator+=(const SpectralVector& other) {
    require_same_spectrum(other);
    for (std::size_t k = 0; k < coefficients_.size(); ++k) coefficients_[k] += other.coefficients_[k];
    return *this;
}

SpectralVector& SpectralVector::operator-=(const SpectralVector& other) {
    require_same_spectrum(other);
    for (std::size_t k = 0; k < coefficients_.size(); ++k) coefficients_[k] -= other.coefficients_[k];
    return *this;
}

SpectralVector& SpectralVector::operator*=(Complex scale) {
    for (auto& c : coefficients_) c *= scale;
    return *this;
}

ScalarSymbol ScalarSymbol::constant(double value) {
    ScalarSymbol s;
    s.name = value == 1.0 ? "one" : "const";
    s.evaluate = [value](double) { return value; };
    s.is_even = true;
    s.is_nondecreasing_on_positives = true;
    if (value > 0.0) s.doubling_bound = 1.0;
    return s;
}

ScalarSymbol ScalarSymbol::abs_power(double power) {
    if (!(power >= 0.0)) throw Error(ErrorCode::InvalidArgument, "power must be nonnegative");
    ScalarSymbol s;
    std::ostringstream name;
    name << "abs^" << power;
    s.name = name.str();
    s.evaluate = [power](double lambda) { return std::pow(std::abs(lambda), power); };
    s.is_even = true;
    s.is_nondecreasing_on_positives = true;
    s.doubling_bound = std::pow(2.0, power);
    return s;
}

bool symbol_flags_consistent(const ScalarSymbol& symbol, double limit, std::size_t samples) {
    if (samples < 2 || !(limit > 0.0)) return false;
    double previous = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double lambda = limit * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double value = symbol(lambda);
        if (!std::isfinite(value) || value < 0.0) return false;
        if (symbol.is_even) {
            const double mirrored = symbol(-lambda);
            if (std::abs(mirrored - value) > 1e-12 * std::max(1.0, std::abs(value))) return false;
        }
        if (symbol.is_nondecreasing_on_positives && i > 0 && value < previous * (1.0 - 1e-14)) return false;
        previous = value;
    }
    return true;
}

double norm(const SpectralVector& x) {
    double sum = 0.0;
    for (const auto& c : x.coefficients()) sum += std::norm(c);
    return std::sqrt(sum);
}

SpectralVector apply_function(const ScalarSymbol& symbol, const SpectralVector& x) {
    std::vector<Complex> out(x.size());
    const auto lambdas = x.spectrum().eigenvalues();
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double g = symbol(lambdas[k]);
        const Complex value = g * x[k];
        if (!std::isfinite(g) || !std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            std::ostringstream msg;
            msg << symbol.name << " at lambda=" << lambdas[k];
            throw Error(ErrorCode::FunctionalCalculusOverflow, msg.str());
        }
        out[k] = value;
    }
    return SpectralVector(x.spectrum_ptr(), std::move(out));
}

SpectralVector unitary(double h, const SpectralVector& x) {
    std::vector<Complex> out(x.size());
    const auto lambdas = x.spectrum().eigenvalues();
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = std::polar(1.0, lambdas[k] * h) * x[k];
    return SpectralVector(x.spectrum_ptr(), std::move(out));
}

namespace {

// exp(i theta) - 1 without cancellation for small theta.
Complex phase_minus_one(double theta) {
    const double s = std::sin(0.5 * theta);
    return {-2.0 * s * s, std::sin(theta)};
}

double int_pow(double base, unsigned k) {
    double result = 1.0;
    while (k > 0) {
        if (k & 1U) result *= base;
        base *= base;
        k >>= 1U;
    }
    return result;
}

struct ActiveMode {
    double lambda;
    double weight;  // |c|^2
};

std::vector<ActiveMode> active_modes(const SpectralVector& x) {
    std::vector<ActiveMode> modes;
    const auto lambdas = x.spectrum().eigenvalues();
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double w = std::norm(x[k]);
        if (w > 0.0) modes.push_back({lambdas[k], w});
    }
    return modes;
}

double difference_norm_sq(unsigned k, double tau, std::span<const ActiveMode> modes) {
    double sum = 0.0;
    for (const auto& m : modes) {
        const double s = 2.0 * std::sin(0.5 * m.lambda * tau);
        sum += m.weight * int_pow(s * s, k);
    }
    return sum;
}

}  // namespace

SpectralVector difference(unsigned k, double h, const SpectralVector& x) {
    if (k == 0) return x;
    std::vector<Complex> out(x.size());
    const auto lambdas = x.spectrum().eigenvalues();
    for (std::size_t j = 0; j < x.size(); ++j) {
        const Complex d = phase_minus_one(lambdas[j] * h);
        Complex factor = 1.0;
        for (unsigned p = 0; p < k; ++p) factor *= d;
        out[j] = factor * x[j];
    }
    return SpectralVector(x.spectrum_ptr(), std::move(out));
}

SpectralVector difference_binomial(unsigned k, double h, const SpectralVector& x) {
    auto result = SpectralVector::zero(x.spectrum_ptr());
    double binom = 1.0;  // C(k, j)
    for (unsigned j = 0; j <= k; ++j) {
        const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
        auto shifted = unitary(static_cast<double>(j) * h, x);
        shifted *= sign * binom;
        result += shifted;
        binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    return result;
}

double difference_norm(unsigned k, double h, const SpectralVector& x) {
    if (k == 0) return norm(x);
    const auto modes = active_modes(x);
    return std::sqrt(difference_norm_sq(k, h, modes));
}

std::size_t modulus_grid_size(double t, double max_abs_lambda) {
    constexpr std::size_t base = 1024;
    constexpr std::size_t cap = std::size_t{1} << 24;
    const double needed = std::ceil(8.0 * t * max_abs_lambda / std::numbers::pi);
    if (!(needed < static_cast<double>(base))) {
        return needed >= static_cast<double>(cap) ? cap : static_cast<std::size_t>(needed);
    }
    return base;
}

double modulus(unsigned k, double t, const SpectralVector& x) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "modulus needs t > 0");
    if (k == 0) return norm(x);
    const auto modes = active_modes(x);
    if (modes.empty()) return 0.0;

    double lambda_max = 0.0;
    for (const auto& m : modes) lambda_max = std::max(lambda_max, std::abs(m.lambda));
    const std::size_t grid = modulus_grid_size(t, lambda_max);
    const double step = t / static_cast<double>(grid);

    // Grid pass. d_j(tau_i) = exp(i lambda_j tau_i) - 1 is advanced by
    // d <- d + (w - 1)(1 + d) and resynchronised periodically.
    constexpr std::size_t resync = 256;
    std::vector<Complex> rotation(modes.size());
    std::vector<Complex> deviation(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) rotation[j] = phase_minus_one(modes[j].lambda * step);

    double best_value = -1.0;
    std::size_t best_index = 1;
    for (std::size_t i = 1; i <= grid; ++i) {
        const double tau = step * static_cast<double>(i);
        double sum = 0.0;
        if (i == 1 || i % resync == 0) {
            for (std::size_t j = 0; j < modes.size(); ++j) deviation[j] = phase_minus_one(modes[j].lambda * tau);
        } else {
            for (std::size_t j = 0; j < modes.size(); ++j) deviation[j] += rotation[j] * (1.0 + deviation[j]);
        }
        for (std::size_t j = 0; j < modes.size(); ++j) sum += modes[j].weight * int_pow(std::norm(deviation[j]), k);
        if (sum > best_value) {
            best_value = sum;
            best_index = i;
        }
    }

    auto f = [&](double tau) { return difference_norm_sq(k, tau, modes); };
    double a = step * static_cast<double>(best_index - 1);
    double b = std::min(t, step * static_cast<double>(best_index + 1));
    double best = std::max(f(step * static_cast<double>(best_index)), f(b));
    if (a > 0.0) best = std::max(best, f(a));

    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c);
    double fd = f(d);
    const double width = 1e-10 * t;
    while (b - a > width) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    best = std::max({best, fc, fd});
    return std::sqrt(best);
}

double best_approx(double r, const SpectralVector& x) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "best approximation needs r > 0");
    const auto lambdas = x.spectrum().eigenvalues();
    double tail = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (std::abs(lambdas[k]) > r) tail += std::norm(x[k]);
    }
    return std::sqrt(tail);
}

SpectralVector project_exp(double alpha, const SpectralVector& x) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "projection needs alpha > 0");
    std::vector<Complex> out(x.coefficients().begin(), x.coefficients().end());
    const auto lambdas = x.spectrum().eigenvalues();
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (std::abs(lambdas[k]) > alpha) out[k] = 0.0;
    }
    return SpectralVector(x.spectrum_ptr(), std::move(out));
}

double type_of(const SpectralVector& x) {
    double sigma = 0.0;
    const auto lambdas = x.spectrum().eigenvalues();
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] != Complex{0.0, 0.0}) sigma = std::max(sigma, std::abs(lambdas[k]));
    }
    return sigma;
}

}  // namespace specritz
