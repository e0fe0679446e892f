#include "specritz/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace specritz::sturm {

namespace {

constexpr double kPi = std::numbers::pi;

double normalisation(Basis basis, std::size_t index) {
    if (basis == Basis::NeumannCosine && index == 0) return 1.0 / std::sqrt(kPi);
    return std::sqrt(2.0 / kPi);
}

std::size_t wave_number(Basis basis, std::size_t index) { return basis == Basis::NeumannCosine ? index : index + 1; }

// Q(p) = int_0^pi q(t) cos(p t) dt for a cosine series.
double series_moment(const CosineSeries& q, std::size_t p) {
    if (p >= q.coefficients.size()) return 0.0;
    return p == 0 ? kPi * q.coefficients[0] : 0.5 * kPi * q.coefficients[p];
}

template <typename Moment>
ritz::Matrix multiplication_block(Moment&& moment, Basis basis, std::size_t truncation) {
    const auto n = static_cast<Eigen::Index>(truncation);
    ritz::Matrix out(n, n);
    for (std::size_t i = 0; i < truncation; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const std::size_t a = wave_number(basis, i);
            const std::size_t b = wave_number(basis, j);
            const double sum = moment(a + b);
            const double diff = moment(a - b);  // a >= b
            const double product = basis == Basis::NeumannCosine ? 0.5 * (diff + sum) : 0.5 * (diff - sum);
            const double value = normalisation(basis, i) * normalisation(basis, j) * product;
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
        }
    }
    return out;
}

enum class Kernel { Cosine, Sine };

std::vector<double> trig_moments(const std::function<double(double)>& f, std::size_t count, std::size_t panels,
                                 Kernel kernel) {
    if (panels < 2) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least two panels");
    const std::size_t period = 2 * panels;
    std::vector<double> table(period);
    for (std::size_t m = 0; m < period; ++m) {
        const double angle = kPi * static_cast<double>(m) / static_cast<double>(panels);
        table[m] = kernel == Kernel::Cosine ? std::cos(angle) : std::sin(angle);
    }
    std::vector<double> samples(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        samples[i] = f(kPi * static_cast<double>(i) / static_cast<double>(panels));
    }
    samples.front() *= 0.5;
    samples.back() *= 0.5;

    const double h = kPi / static_cast<double>(panels);
    std::vector<double> moments(count);
    for (std::size_t p = 0; p < count; ++p) {
        const std::size_t step = p % period;
        std::size_t phase = 0;
        double sum = 0.0;
        for (std::size_t i = 0; i <= panels; ++i) {
            sum += samples[i] * table[phase];
            phase += step;
            if (phase >= period) phase -= period;
        }
        moments[p] = h * sum;
    }
    return moments;
}

std::vector<double> converged_moments(const std::function<double(double)>& f, std::size_t count, Kernel kernel,
                                      const char* what) {
    auto fine = trig_moments(f, count, kQuadraturePanels, kernel);
    const auto coarse = trig_moments(f, count, kQuadraturePanels / 2, kernel);
    double worst = 0.0;
    for (std::size_t p = 0; p < count; ++p) worst = std::max(worst, std::abs(fine[p] - coarse[p]));
    if (!(worst <= 1e-9)) {
        std::ostringstream msg;
        msg << what << " (self-estimate " << worst << ")";
        throw Error(ErrorCode::QuadratureNotConverged, msg.str());
    }
    return fine;
}

ritz::Vector real_to_eigen(std::span<const double> values) {
    ritz::Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) v(static_cast<Eigen::Index>(k)) = values[k];
    return v;
}

}  // namespace

double CosineSeries::operator()(double t) const {
    double sum = 0.0;
    for (std::size_t m = 0; m < coefficients.size(); ++m) sum += coefficients[m] * std::cos(static_cast<double>(m) * t);
    return sum;
}

CosineSeries CosineSeries::negative_second_derivative() const {
    CosineSeries out{coefficients};
    for (std::size_t m = 0; m < out.coefficients.size(); ++m) {
        out.coefficients[m] *= static_cast<double>(m * m);
    }
    return out;
}

CosineSeries operator+(const CosineSeries& a, const CosineSeries& b) {
    CosineSeries out;
    out.coefficients.assign(std::max(a.coefficients.size(), b.coefficients.size()), 0.0);
    for (std::size_t m = 0; m < a.coefficients.size(); ++m) out.coefficients[m] += a.coefficients[m];
    for (std::size_t m = 0; m < b.coefficients.size(); ++m) out.coefficients[m] += b.coefficients[m];
    return out;
}

CosineSeries operator*(const CosineSeries& a, const CosineSeries& b) {
    CosineSeries out;
    if (a.coefficients.empty() || b.coefficients.empty()) return out;
    out.coefficients.assign(a.degree() + b.degree() + 1, 0.0);
    // cos(i t) cos(j t) = (cos((i + j) t) + cos((i - j) t)) / 2
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
        for (std::size_t j = 0; j < b.coefficients.size(); ++j) {
            const double half = 0.5 * a.coefficients[i] * b.coefficients[j];
            out.coefficients[i + j] += half;
            out.coefficients[i > j ? i - j : j - i] += half;
        }
    }
    return out;
}

PotentialSpec PotentialSpec::constant(double value) { return from_cosine(CosineSeries{{value}}); }

PotentialSpec PotentialSpec::from_cosine(CosineSeries series, unsigned smoothness_order) {
    PotentialSpec spec;
    spec.q = [series](double t) { return series(t); };
    spec.cosine = std::move(series);
    spec.smoothness_order = smoothness_order;
    return spec;
}

PotentialSpec PotentialSpec::from_function(std::function<double(double)> q, unsigned smoothness_order) {
    PotentialSpec spec;
    spec.q = std::move(q);
    spec.smoothness_order = smoothness_order;
    return spec;
}

void validate(const PotentialSpec& potential) {
    if (!potential.q) throw Error(ErrorCode::InvalidArgument, "potential has no q");
    constexpr int points = 10000;
    for (int i = 0; i < points; ++i) {
        const double t = kPi * static_cast<double>(i) / (points - 1);
        const double value = potential.q(t);
        if (!(value > 0.0) || !std::isfinite(value)) {
            std::ostringstream msg;
            msg << "q(" << t << ") = " << value << " is not positive";
            throw Error(ErrorCode::InvalidArgument, msg.str());
        }
        if (potential.cosine && std::abs((*potential.cosine)(t) - value) > 1e-10) {
            throw Error(ErrorCode::InvalidArgument, "cosine expansion disagrees with q");
        }
    }
}

std::vector<double> eigenvalues(Basis basis, std::size_t truncation) {
    std::vector<double> lambdas(truncation);
    for (std::size_t i = 0; i < truncation; ++i) {
        const auto k = static_cast<double>(wave_number(basis, i));
        lambdas[i] = basis == Basis::NeumannCosine ? k * k + 1.0 : k * k;
    }
    return lambdas;
}

SpectrumPtr spectrum(Basis basis, std::size_t truncation) { return make_spectrum(eigenvalues(basis, truncation)); }

double basis_function(Basis basis, std::size_t index, double t) {
    const auto k = static_cast<double>(wave_number(basis, index));
    const double trig = basis == Basis::NeumannCosine ? std::cos(k * t) : std::sin(k * t);
    return normalisation(basis, index) * trig;
}

std::vector<double> basis_coefficients(const CosineSeries& f, std::size_t truncation) {
    std::vector<double> out(truncation, 0.0);
    for (std::size_t k = 0; k < truncation && k < f.coefficients.size(); ++k) {
        out[k] = normalisation(Basis::NeumannCosine, k) * series_moment(f, k);
    }
    return out;
}

std::vector<double> cosine_moments(const std::function<double(double)>& f, std::size_t count, std::size_t panels) {
    return trig_moments(f, count, panels, Kernel::Cosine);
}

std::vector<double> sine_moments(const std::function<double(double)>& f, std::size_t count, std::size_t panels) {
    return trig_moments(f, count, panels, Kernel::Sine);
}

ritz::Matrix multiplication_from_series(const CosineSeries& q, Basis basis, std::size_t truncation) {
    return multiplication_block([&q](std::size_t p) { return series_moment(q, p); }, basis, truncation);
}

ritz::Matrix multiplication_from_quadrature(const std::function<double(double)>& q, Basis basis,
                                            std::size_t truncation) {
    const auto moments = converged_moments(q, 2 * truncation + 2, Kernel::Cosine, "potential moments");
    return multiplication_block([&moments](std::size_t p) { return moments[p]; }, basis, truncation);
}

ritz::RitzProblem assemble_gram(const BoundaryValueProblem& bvp) {
    if (bvp.truncation == 0) throw Error(ErrorCode::InvalidArgument, "truncation must be positive");
    validate(bvp.potential);
    const std::size_t n = bvp.truncation;

    ritz::Matrix gram = bvp.potential.cosine ? multiplication_from_series(*bvp.potential.cosine, bvp.basis, n)
                                             : multiplication_from_quadrature(bvp.potential.q, bvp.basis, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<double>(wave_number(bvp.basis, i));
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += k * k;
    }

    std::vector<double> rhs;
    if (bvp.rhs_coefficients) {
        rhs = *bvp.rhs_coefficients;
        rhs.resize(n, 0.0);
    } else if (bvp.rhs_function) {
        const Kernel kernel = bvp.basis == Basis::NeumannCosine ? Kernel::Cosine : Kernel::Sine;
        const auto moments = converged_moments(bvp.rhs_function, n + 1, kernel, "right-hand side moments");
        rhs.resize(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = normalisation(bvp.basis, i) * moments[wave_number(bvp.basis, i)];
    } else {
        throw Error(ErrorCode::InvalidArgument, "boundary value problem has no right-hand side");
    }

    auto b = spectrum(bvp.basis, n);
    std::optional<SpectralVector> exact;
    if (bvp.exact_coefficients) {
        auto coefficients = *bvp.exact_coefficients;
        coefficients.resize(n, 0.0);
        exact = SpectralVector::from_real(b, coefficients);
    }
    auto provider = std::make_shared<const ritz::DenseGram>(std::move(gram));
    return ritz::RitzProblem(b, std::move(provider), SpectralVector::from_real(b, rhs), std::move(exact));
}

BoundaryValueProblem manufacture(const BoundaryValueProblem& bvp, const CosineSeries& x_exact) {
    if (bvp.basis != Basis::NeumannCosine) {
        throw Error(ErrorCode::InvalidArgument, "cosine manufactured solutions need the Neumann basis");
    }
    BoundaryValueProblem out = bvp;
    out.exact_coefficients = basis_coefficients(x_exact, bvp.truncation);
    if (bvp.potential.cosine) {
        const CosineSeries y = x_exact.negative_second_derivative() + (*bvp.potential.cosine) * x_exact;
        out.rhs_function = [y](double t) { return y(t); };
        out.rhs_coefficients = basis_coefficients(y, bvp.truncation);
        return out;
    }
    BoundaryValueProblem shell = bvp;
    shell.rhs_coefficients = std::vector<double>(bvp.truncation, 0.0);
    const auto problem = assemble_gram(shell);
    const ritz::Vector y = problem.gram->apply(real_to_eigen(*out.exact_coefficients));
    out.rhs_function = nullptr;
    out.rhs_coefficients = std::vector<double>(bvp.truncation);
    for (std::size_t k = 0; k < bvp.truncation; ++k) (*out.rhs_coefficients)[k] = y(static_cast<Eigen::Index>(k)).real();
    return out;
}

BoundaryValueProblem manufacture(const BoundaryValueProblem& bvp, const std::function<double(double)>& x_exact,
                                 const std::function<double(double)>& x_derivative) {
    if (bvp.basis != Basis::NeumannCosine) {
        throw Error(ErrorCode::InvalidArgument, "manufactured solutions need the Neumann basis");
    }
    const double left = x_derivative(0.0);
    const double right = x_derivative(kPi);
    if (!(std::abs(left) <= 1e-8 && std::abs(right) <= 1e-8)) {
        std::ostringstream msg;
        msg << "x'(0) = " << left << ", x'(pi) = " << right;
        throw Error(ErrorCode::BoundaryConditionViolated, msg.str());
    }
    const std::size_t n = bvp.truncation;
    const auto moments = converged_moments(x_exact, n, Kernel::Cosine, "solution moments");
    std::vector<double> coefficients(n);
    for (std::size_t k = 0; k < n; ++k) coefficients[k] = normalisation(Basis::NeumannCosine, k) * moments[k];

    BoundaryValueProblem shell = bvp;
    shell.rhs_coefficients = std::vector<double>(n, 0.0);
    const auto problem = assemble_gram(shell);
    const ritz::Vector y = problem.gram->apply(real_to_eigen(coefficients));

    BoundaryValueProblem out = bvp;
    out.exact_coefficients = std::move(coefficients);
    out.rhs_function = nullptr;
    out.rhs_coefficients = std::vector<double>(n);
    for (std::size_t k = 0; k < n; ++k) (*out.rhs_coefficients)[k] = y(static_cast<Eigen::Index>(k)).real();
    return out;
}

double log_log_slope(std::span<const double> abscissae, std::span<const double> values) {
    if (abscissae.size() != values.size() || abscissae.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "slope fit needs two or more matching points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto count = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lx = std::log(abscissae[i]);
        const double ly = std::log(values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double quartic_bernoulli(double t) {
    const double t2 = t * t;
    return std::pow(kPi, 4) / 90.0 - kPi * kPi * t2 / 12.0 + kPi * t2 * t / 12.0 - t2 * t2 / 48.0;
}

namespace {

double graph_norm(const SpectralVector& z) {
    const auto lambdas = z.spectrum().eigenvalues();
    double sum = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) sum += lambdas[k] * lambdas[k] * std::norm(z[k]);
    return std::sqrt(sum);
}

}  // namespace

RateReport rate_experiment(const BoundaryValueProblem& bvp, unsigned smoothness, std::span<const std::size_t> n_grid,
                           const RateOptions& options) {
    if (n_grid.size() < 6) throw Error(ErrorCode::InsufficientGrid, "rate experiment needs at least 6 grid points");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] == 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "n grid must be positive and strictly increasing");
        }
    }
    const double power = 2.0 * smoothness + 1.0;
    BoundaryValueProblem current = bvp;

    for (unsigned attempt = 0;; ++attempt) {
        if (current.truncation < 2 * n_grid.back()) {
            std::ostringstream msg;
            msg << "N=" << current.truncation << " below twice the largest n=" << n_grid.back();
            throw Error(ErrorCode::TruncationTooSmall, msg.str());
        }
        const auto problem = assemble_gram(current).with_reference_solution();
        const SpectralVector& x = *problem.exact;
        const double scale = graph_norm(x);

        RateReport report;
        report.smoothness = smoothness;
        report.truncation = current.truncation;
        const auto full = problem.full_solution();
        const auto half = ritz::solve(problem, current.truncation / 2).approximant;
        report.guard = graph_norm(full - half);

        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t n : n_grid) {
            const auto solution = ritz::solve(problem, n);
            RatePoint point;
            point.n = n;
            point.graph_error = graph_norm(x - solution.approximant);
            point.energy_error = solution.energy_error;
            point.scaled = std::pow(static_cast<double>(n), power) * point.graph_error;
            point.at_floor = point.graph_error <= options.floor_relative * scale;
            if (!point.at_floor) smallest = std::min(smallest, point.graph_error);
            report.points.push_back(point);
        }
        report.smallest_error = std::isfinite(smallest) ? smallest : 0.0;

        if (std::isfinite(smallest) && !(report.guard < options.guard_fraction * smallest)) {
            if (attempt >= options.max_doublings) {
                std::ostringstream msg;
                msg << "guard " << report.guard << " vs smallest error " << smallest << " at N=" << current.truncation;
                throw Error(ErrorCode::TruncationGuardFailed, msg.str());
            }
            current.truncation *= 2;
            continue;
        }

        std::vector<double> ns, graph, energy, scaled;
        for (std::size_t i = report.points.size() / 2; i < report.points.size(); ++i) {
            const auto& p = report.points[i];
            if (p.at_floor) continue;
            ns.push_back(static_cast<double>(p.n));
            graph.push_back(p.graph_error);
            energy.push_back(p.energy_error);
            scaled.push_back(p.scaled);
        }
        report.floor_reached = ns.size() < 3;
        if (report.floor_reached) {
            report.slope = std::numeric_limits<double>::quiet_NaN();
            report.energy_slope = std::numeric_limits<double>::quiet_NaN();
            report.surrogate_decreasing = true;
            report.rate_satisfied = true;
            return report;
        }
        report.slope = log_log_slope(ns, graph);
        report.energy_slope = log_log_slope(ns, energy);
        report.surrogate_decreasing = true;
        for (std::size_t i = 1; i < scaled.size(); ++i) {
            if (!(scaled[i] < scaled[i - 1])) report.surrogate_decreasing = false;
        }
        report.rate_satisfied = report.surrogate_decreasing && report.slope <= -power + options.slope_tolerance;
        return report;
    }
}

}  // namespace specritz::sturm
