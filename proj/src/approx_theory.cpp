#include "specritz/approx_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specritz/quadrature.hpp"

namespace specritz::approx {

std::string ParameterRecord::describe() const {
    std::ostringstream out;
    out.precision(17);
    bool first = true;
    auto sep = [&] {
        if (!first) out << ';';
        first = false;
    };
    for (const auto& [key, value] : values) {
        sep();
        out << key << '=' << value;
    }
    if (!symbol.empty()) {
        sep();
        out << "G=" << symbol;
    }
    if (vector_id) {
        sep();
        out << "v=" << *vector_id;
    }
    return out.str();
}

InequalityReport InequalityReport::evaluate(double lhs, double rhs, ParameterRecord context, double abs_tol) {
    InequalityReport report;
    report.lhs = lhs;
    report.rhs = rhs;
    report.slack = rhs - lhs;
    report.satisfied = lhs <= rhs * (1.0 + kRelativeSlack) + abs_tol;
    report.context = std::move(context);
    return report;
}

ModulusDescriptor ModulusDescriptor::power(double exponent) {
    if (!(exponent > 0.0)) throw Error(ErrorCode::InvalidArgument, "power modulus needs a positive exponent");
    ModulusDescriptor omega;
    std::ostringstream name;
    name << "t^" << exponent;
    omega.name = name.str();
    omega.evaluate = [exponent](double t) { return t <= 0.0 ? 0.0 : std::pow(t, exponent); };
    omega.doubling_constant = std::pow(2.0, exponent);
    omega.dini_tail = [exponent](double eps) { return std::pow(eps, exponent) / exponent; };
    omega.power_exponent = exponent;
    return omega;
}

namespace {

// int_lo^hi omega(tau) / tau dtau through tau = exp(s).
QuadratureResult log_dini(const ModulusDescriptor& omega, double lo, double hi, double abs_tol) {
    SimpsonOptions options;
    options.abs_tol = abs_tol;
    return adaptive_simpson([&](double s) { return omega(std::exp(s)); }, std::log(lo), std::log(hi), options);
}

void require_integrable(const ModulusDescriptor& omega, const ModulusConditions& conditions) {
    if (!conditions.modulus_type()) {
        throw Error(ErrorCode::ModulusHypothesisViolated, omega.name);
    }
    if (!conditions.dini) throw Error(ErrorCode::DiniConditionViolated, omega.name);
}

double dini_to(const ModulusDescriptor& omega, double t) {
    if (t <= kDiniCutoff) return omega.dini_tail(t);
    const auto body = log_dini(omega, kDiniCutoff, t, 1e-10);
    if (!body.converged) throw Error(ErrorCode::QuadratureNotConverged, "Dini integral of " + omega.name);
    return omega.dini_tail(kDiniCutoff) + body.value;
}

}  // namespace

ModulusConditions check_conditions(const ModulusDescriptor& omega) {
    ModulusConditions result;
    result.vanishes_at_zero = omega(0.0) == 0.0;

    // Nondecreasing and finite on a mixed linear and logarithmic grid of (0, 1].
    bool monotone = true;
    double previous = 0.0;
    constexpr int log_points = 480;
    for (int i = log_points; i >= 0; --i) {
        const double t = std::pow(2.0, -static_cast<double>(i) / 12.0);
        const double value = omega(t);
        if (!std::isfinite(value) || value < 0.0 || value < previous * (1.0 - 1e-14)) monotone = false;
        previous = value;
    }
    for (int i = 1; i <= 1000 && monotone; ++i) {
        const double a = static_cast<double>(i - 1) / 1000.0;
        const double b = static_cast<double>(i) / 1000.0;
        if (omega(b) < omega(a) * (1.0 - 1e-14)) monotone = false;
    }
    result.continuous_nondecreasing = monotone;

    bool doubling = omega.doubling_constant > 0.0 && std::isfinite(omega.doubling_constant);
    for (int j = 0; j <= 40 && doubling; ++j) {
        const double t = std::ldexp(1.0, -j);
        if (omega(2.0 * t) > omega.doubling_constant * omega(t) * (1.0 + 1e-12)) doubling = false;
    }
    result.doubling = doubling;

    const auto body = log_dini(omega, kDiniCutoff, 1.0, 1e-10);
    if (!body.converged || !std::isfinite(body.value)) return result;
    if (omega.dini_tail) {
        const double tail = omega.dini_tail(kDiniCutoff);
        result.dini = std::isfinite(tail) && tail >= 0.0;
        result.dini_integral = tail + body.value;
    } else {
        // Without a certificate, accept only when the decade band (1e-12, 1e-8]
        // is negligible against the whole integral.
        const auto band = log_dini(omega, kDiniCutoff, 1e-8, 1e-12);
        result.dini = band.converged && band.value <= 1e-3 * body.value;
        result.dini_integral = body.value;
    }
    return result;
}

namespace {

void require_admissible_symbol(const ScalarSymbol& symbol) {
    if (!symbol.is_even || !symbol.is_nondecreasing_on_positives) {
        throw Error(ErrorCode::SymbolHypothesisViolated, symbol.name);
    }
}

}  // namespace

InequalityReport bernstein_check(const ScalarSymbol& symbol, unsigned k, double h, double alpha,
                                 const SpectralVector& x) {
    require_admissible_symbol(symbol);
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "bernstein_check needs h > 0");
    const auto projected = project_exp(alpha, x);
    const double lhs = difference_norm(k, h, apply_function(symbol, projected));
    const double rhs = std::pow(h * alpha, static_cast<double>(k)) * symbol(alpha) * norm(projected);
    ParameterRecord context{"bernstein", k, {{"h", h}, {"alpha", alpha}}, symbol.name, std::nullopt};
    return InequalityReport::evaluate(lhs, rhs, std::move(context));
}

InequalityReport jackson_check(const ScalarSymbol& symbol, unsigned k, double r, const SpectralVector& x) {
    require_admissible_symbol(symbol);
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "jackson_check needs k >= 1");
    const double g = symbol(r);
    if (!(g > 0.0)) {
        std::ostringstream msg;
        msg << "r=" << r;
        throw Error(ErrorCode::BoundDegenerate, msg.str());
    }
    const double lhs = best_approx(r, x);
    const double omega = modulus(k, std::numbers::pi / r, apply_function(symbol, x));
    const double rhs = std::sqrt(static_cast<double>(k) + 1.0) / (std::ldexp(1.0, static_cast<int>(k)) * g) * omega;
    ParameterRecord context{"jackson", k, {{"r", r}}, symbol.name, std::nullopt};
    return InequalityReport::evaluate(lhs, rhs, std::move(context));
}

double kernel_integral(double theta, unsigned k) {
    if (!(theta >= 1.0) || k == 0) throw Error(ErrorCode::InvalidArgument, "kernel_integral needs theta >= 1, k >= 1");
    const double power = static_cast<double>(k);
    auto integrand = [theta, power](double t) { return std::pow(1.0 - std::cos(theta * t), power) * std::sin(t); };
    SimpsonOptions options;
    options.abs_tol = 1e-10;
    // Start with panels narrower than one oscillation of cos(theta t).
    options.initial_panels = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(2.0 * theta)));
    const auto result = adaptive_simpson(integrand, 0.0, std::numbers::pi, options);
    if (!result.converged) throw Error(ErrorCode::QuadratureNotConverged, "kernel integral");
    return result.value;
}

double kernel_lower_bound(unsigned k) {
    return std::ldexp(1.0, static_cast<int>(k) + 1) / (static_cast<double>(k) + 1.0);
}

InequalityReport kernel_check(double theta, unsigned k) {
    ParameterRecord context{"kernel", k, {{"theta", theta}}, "", std::nullopt};
    return InequalityReport::evaluate(kernel_lower_bound(k), kernel_integral(theta, k), std::move(context), 1e-9);
}

std::vector<SpectralVector> dyadic_approximants(const SpectralVector& x, unsigned j_max) {
    std::vector<SpectralVector> out;
    out.reserve(j_max + 1);
    for (unsigned j = 0; j <= j_max; ++j) out.push_back(project_exp(std::ldexp(1.0, static_cast<int>(j)), x));
    return out;
}

InverseBound inverse_bound(const ModulusDescriptor& omega, unsigned k, double t) {
    require_integrable(omega, check_conditions(omega));
    if (!(t > 0.0 && t <= 0.5)) throw Error(ErrorCode::InvalidArgument, "inverse_bound needs t in (0, 1/2]");
    InverseBound bound;
    bound.lemma_term = lemma_rate_bound(omega, k, t);
    bound.dini_term = dini_to(omega, t);
    return bound;
}

double lemma_rate_bound(const ModulusDescriptor& omega, unsigned k, double t) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "lemma_rate_bound needs k >= 1");
    if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "lemma_rate_bound needs t in (0, 1]");
    if (!check_conditions(omega).modulus_type()) throw Error(ErrorCode::ModulusHypothesisViolated, omega.name);
    const double kk = static_cast<double>(k);
    const double scale = std::pow(t, kk);
    // t^k int_{ln t}^0 omega(e^s) e^{-ks} ds; the integral tolerance is scaled
    // so that the product meets 1e-10 absolute.
    SimpsonOptions options;
    options.abs_tol = 1e-10 / scale;
    const auto result =
        adaptive_simpson([&](double s) { return omega(std::exp(s)) * std::exp(-kk * s); }, std::log(t), 0.0, options);
    if (!result.converged) throw Error(ErrorCode::QuadratureNotConverged, "lemma envelope of " + omega.name);
    return scale * result.value;
}

double big_omega(const ModulusDescriptor& omega, double t) {
    require_integrable(omega, check_conditions(omega));
    if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "big_omega needs t >= 0");
    if (t == 0.0) return 0.0;
    return dini_to(omega, t);
}

BigOmegaProperties check_big_omega(const ModulusDescriptor& omega) {
    require_integrable(omega, check_conditions(omega));
    BigOmegaProperties props;
    props.vanishes_at_zero = big_omega(omega, 0.0) == 0.0;
    std::vector<double> values;
    for (int j = 41; j >= 0; --j) values.push_back(dini_to(omega, std::ldexp(1.0, -j)));
    props.monotone = std::is_sorted(values.begin(), values.end());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i] > 0.0) worst = std::max(worst, values[i + 1] / values[i]);
    }
    props.doubling_constant = worst;
    props.doubling = std::isfinite(worst) && worst > 0.0;
    return props;
}

SpectralVector dyadic_target_vector(const ModulusDescriptor& omega, const ScalarSymbol& symbol, std::size_t modes) {
    if (modes < 2) throw Error(ErrorCode::TruncationTooSmall, "need at least two dyadic levels");
    unsigned top = 0;
    while ((std::size_t{1} << (top + 1)) <= modes) ++top;

    auto target = [&](unsigned j) {
        const double r = std::ldexp(1.0, static_cast<int>(j));
        const double g = symbol(r);
        if (!(g > 0.0)) throw Error(ErrorCode::BoundDegenerate, "G vanishes on the dyadic grid");
        return omega(1.0 / r) / g;
    };

    std::vector<Complex> coefficients(modes);
    coefficients[0] = target(0);
    for (unsigned j = 1; j < top; ++j) {
        const double hi = target(j - 1);
        const double lo = target(j);
        const double weight = hi * hi - lo * lo;
        if (weight < -1e-15 * hi * hi) throw Error(ErrorCode::ModulusHypothesisViolated, "target decay increases");
        coefficients[(std::size_t{1} << j) - 1] = std::sqrt(std::max(weight, 0.0));
    }
    coefficients[(std::size_t{1} << top) - 1] = target(top - 1);

    auto spectrum = make_spectrum([modes] {
        std::vector<double> lambdas(modes);
        for (std::size_t k = 0; k < modes; ++k) lambdas[k] = static_cast<double>(k + 1);
        return lambdas;
    }());
    return SpectralVector(std::move(spectrum), std::move(coefficients));
}

const char* to_string(RateRegime regime) noexcept {
    switch (regime) {
        case RateRegime::BelowSmoothness: return "t^k";
        case RateRegime::Critical: return "t^k|ln t|";
        case RateRegime::AboveSmoothness: return "t^alpha";
        case RateRegime::Envelope: return "envelope";
    }
    return "unknown";
}

double regime_reference(RateRegime regime, unsigned k, double exponent, double t) {
    const double kk = static_cast<double>(k);
    switch (regime) {
        case RateRegime::BelowSmoothness: return std::pow(t, kk);
        case RateRegime::Critical: return std::pow(t, kk) * std::abs(std::log(t));
        case RateRegime::AboveSmoothness: return std::pow(t, exponent);
        case RateRegime::Envelope: break;
    }
    throw Error(ErrorCode::InvalidArgument, "envelope regime has no closed-form reference");
}

bool bounded_trend(std::span<const double> values, double factor) {
    if (values.size() < 2) return false;
    const std::size_t half = values.size() / 2;
    const double early = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(half));
    const double late = *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(half), values.end());
    return std::isfinite(late) && late <= factor * early;
}

InverseExperimentReport inverse_theorem_experiment(const ModulusDescriptor& omega, const ScalarSymbol& symbol,
                                                   unsigned k, std::size_t modes,
                                                   const InverseExperimentOptions& options) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "inverse experiment needs k >= 1");
    require_admissible_symbol(symbol);
    if (!symbol.doubling_bound || !std::isfinite(*symbol.doubling_bound)) {
        throw Error(ErrorCode::SymbolHypothesisViolated, symbol.name + " has no finite doubling bound");
    }
    require_integrable(omega, check_conditions(omega));
    if (!(options.t_min > 0.0 && options.t_min < options.t_max && options.t_max <= 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "inverse experiment needs 0 < t_min < t_max <= 1/2");
    }
    if (static_cast<double>(modes) * options.t_min < 1.0) {
        std::ostringstream msg;
        msg << modes << " modes cannot resolve t_min=" << options.t_min;
        throw Error(ErrorCode::TruncationTooSmall, msg.str());
    }

    const auto x = dyadic_target_vector(omega, symbol, modes);
    const auto smoothed = apply_function(symbol, x);

    InverseExperimentReport report;
    report.modes = modes;
    report.k = k;
    if (omega.power_exponent) {
        const double a = *omega.power_exponent;
        const double kk = static_cast<double>(k);
        report.regime = std::abs(kk - a) < 1e-12 ? RateRegime::Critical
                        : kk < a                 ? RateRegime::BelowSmoothness
                                                 : RateRegime::AboveSmoothness;
    }

    // Log grid from t_max down to t_min.
    const double octaves = std::log2(options.t_max / options.t_min);
    const auto steps = static_cast<std::size_t>(std::llround(octaves * options.points_per_octave));
    std::vector<double> regime_ratios;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = options.t_max * std::exp2(-static_cast<double>(i) / options.points_per_octave);
        InverseSample sample;
        sample.t = t;
        sample.modulus = modulus(k, t, smoothed);
        sample.bound = inverse_bound(omega, k, t);
        sample.ratio = sample.modulus / sample.bound.envelope();
        sample.regime_ratio = report.regime == RateRegime::Envelope
                                  ? sample.ratio
                                  : sample.modulus / regime_reference(report.regime, k, *omega.power_exponent, t);
        report.fitted_constant = std::max(report.fitted_constant, sample.ratio);
        if (t <= options.regime_t_max * (1.0 + 1e-12)) regime_ratios.push_back(sample.regime_ratio);
        report.samples.push_back(sample);
    }
    report.regime_bounded = bounded_trend(regime_ratios, options.bounded_factor);
    return report;
}

}  // namespace specritz::approx
