#include "specritz/ritz.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace specritz::ritz {

namespace {

Vector to_eigen(const SpectralVector& x) {
    Vector v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) v(static_cast<Eigen::Index>(k)) = x[k];
    return v;
}

SpectralVector from_eigen(const SpectrumPtr& spectrum, const Vector& v) {
    std::vector<Complex> c(spectrum->truncation_order(), Complex{});
    for (Eigen::Index k = 0; k < v.size(); ++k) c[static_cast<std::size_t>(k)] = v(k);
    return SpectralVector(spectrum, std::move(c));
}

}  // namespace

Matrix GramProvider::block(std::size_t n) const {
    const auto m = static_cast<Eigen::Index>(n);
    Matrix out(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k)
            out(j, k) = entry(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    return out;
}

Vector GramProvider::apply(const Vector& z) const {
    const auto n = static_cast<Eigen::Index>(size());
    Vector out = Vector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            out(j) += entry(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) * z(k);
    return out;
}

Vector GramProvider::solve_leading(std::size_t n, const Vector& rhs) const {
    Eigen::LLT<Matrix> llt(block(n));
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "leading block of order " << n;
        throw Error(ErrorCode::GramNotPositiveDefinite, msg.str());
    }
    return llt.solve(rhs.head(static_cast<Eigen::Index>(n)));
}

DenseGram::DenseGram(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw Error(ErrorCode::InvalidArgument, "Gram matrix must be square and nonempty");
    }
    const double scale = entries_.cwiseAbs().maxCoeff();
    if (!((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale)) {
        throw Error(ErrorCode::InvalidArgument, "Gram matrix must be Hermitian");
    }
}

Matrix DenseGram::block(std::size_t n) const {
    const auto m = static_cast<Eigen::Index>(n);
    return entries_.topLeftCorner(m, m);
}

Vector DenseGram::apply(const Vector& z) const { return entries_ * z; }

DiagonalGram::DiagonalGram(std::vector<double> diagonal) : diagonal_(std::move(diagonal)) {
    if (diagonal_.empty()) throw Error(ErrorCode::InvalidArgument, "Gram diagonal must be nonempty");
}

Vector DiagonalGram::apply(const Vector& z) const {
    Vector out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) out(k) = diagonal_[static_cast<std::size_t>(k)] * z(k);
    return out;
}

Vector DiagonalGram::solve_leading(std::size_t n, const Vector& rhs) const {
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        if (!(diagonal_[k] > 0.0)) {
            std::ostringstream msg;
            msg << "diagonal entry " << k;
            throw Error(ErrorCode::GramNotPositiveDefinite, msg.str());
        }
        out(static_cast<Eigen::Index>(k)) = rhs(static_cast<Eigen::Index>(k)) / diagonal_[k];
    }
    return out;
}

RitzProblem::RitzProblem(SpectrumPtr b_spectrum_, GramPtr gram_, SpectralVector rhs_,
                         std::optional<SpectralVector> exact_)
    : b_spectrum(std::move(b_spectrum_)), gram(std::move(gram_)), rhs(std::move(rhs_)), exact(std::move(exact_)) {
    if (!b_spectrum || !gram) throw Error(ErrorCode::InvalidArgument, "Ritz problem needs a spectrum and a Gram");
    if (!b_spectrum->is_positive()) throw Error(ErrorCode::InvalidArgument, "B must be positive definite");
    if (gram->size() != b_spectrum->truncation_order() || rhs.size() != gram->size()) {
        throw Error(ErrorCode::InvalidArgument, "Gram, rhs and spectrum sizes differ");
    }
    if (exact && exact->size() != gram->size()) throw Error(ErrorCode::InvalidArgument, "exact solution size differs");
}

SpectralVector RitzProblem::full_solution() const {
    const std::size_t n = truncation_order();
    return from_eigen(b_spectrum, gram->solve_leading(n, to_eigen(rhs)));
}

SpectralVector RitzProblem::reference_solution() const { return exact ? *exact : full_solution(); }

RitzProblem RitzProblem::with_reference_solution() const {
    RitzProblem copy = *this;
    if (!copy.exact) copy.exact = full_solution();
    return copy;
}

double energy_norm(const GramProvider& gram, const SpectralVector& z) {
    const Vector v = to_eigen(z);
    const double form = v.dot(gram.apply(v)).real();  // dot conjugates the first argument
    return std::sqrt(std::max(form, 0.0));
}

double b_energy_norm(const SpectralVector& z) {
    const auto lambdas = z.spectrum().eigenvalues();
    double sum = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) sum += lambdas[k] * std::norm(z[k]);
    return std::sqrt(sum);
}

double energy_functional(const RitzProblem& problem, const SpectralVector& z) {
    const Vector v = to_eigen(z);
    const Vector y = to_eigen(problem.rhs);
    return v.dot(problem.gram->apply(v)).real() - 2.0 * v.dot(y).real();
}

RitzSolution solve(const RitzProblem& problem, std::size_t n) {
    const std::size_t order = problem.truncation_order();
    if (n == 0 || n > order) {
        std::ostringstream msg;
        msg << "subspace dimension " << n << " outside [1, " << order << "]";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    const Vector y = to_eigen(problem.rhs);
    const Vector c = problem.gram->solve_leading(n, y);

    RitzSolution solution{n, std::vector<Complex>(c.data(), c.data() + c.size()), from_eigen(problem.b_spectrum, c)};

    const SpectralVector reference = problem.reference_solution();
    const SpectralVector error = reference - solution.approximant;
    const Vector e = to_eigen(error);
    const Vector ae = problem.gram->apply(e);
    solution.energy_error = std::sqrt(std::max(e.dot(ae).real(), 0.0));
    solution.b_energy_error = b_energy_norm(error);

    Vector padded = Vector::Zero(y.size());
    padded.head(c.size()) = c;
    solution.residual = (problem.gram->apply(padded) - y).norm();

    const double scale = y.norm();
    const double defect = ae.head(static_cast<Eigen::Index>(n)).cwiseAbs().maxCoeff();
    solution.galerkin_defect = scale > 0.0 ? defect / scale : defect;
    return solution;
}

EquivalenceConstants equivalence_constants(const RitzProblem& problem) {
    const auto lambdas = problem.b_spectrum->eigenvalues();
    const auto n = static_cast<Eigen::Index>(problem.truncation_order());
    // Pencil A z = nu B z with B diagonal: nu = eig(B^{-1/2} A B^{-1/2}).
    Eigen::VectorXd scale(n);
    for (Eigen::Index k = 0; k < n; ++k) scale(k) = 1.0 / std::sqrt(lambdas[static_cast<std::size_t>(k)]);
    Matrix scaled = problem.gram->block(problem.truncation_order());
    scaled = scale.asDiagonal() * scaled * scale.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Matrix> solver(scaled, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::PencilIterationFailed, "eigenvalue solver");
    const double nu_min = solver.eigenvalues().minCoeff();
    const double nu_max = solver.eigenvalues().maxCoeff();
    if (!(nu_min > 0.0)) throw Error(ErrorCode::GramNotPositiveDefinite, "pencil has a nonpositive eigenvalue");

    EquivalenceConstants constants;
    constants.c1 = std::sqrt(1.0 / nu_min);
    constants.c2 = std::sqrt(nu_max);
    return constants;
}

SandwichReport sandwich_check(const RitzProblem& problem, std::size_t n, const EquivalenceConstants& constants) {
    const SpectralVector reference = problem.reference_solution();
    auto truncated = reference;
    auto coefficients = truncated.coefficients();
    for (std::size_t k = n; k < coefficients.size(); ++k) coefficients[k] = 0.0;

    const auto solution = solve(problem, n);
    SandwichReport report;
    report.n = n;
    report.lower = b_energy_norm(reference - truncated);
    report.middle = solution.b_energy_error;
    report.upper = constants.c3() * report.lower;
    report.lower_holds = report.lower <= report.middle * (1.0 + approx::kRelativeSlack) + 1e-15;
    report.upper_holds = report.middle <= report.upper * (1.0 + approx::kRelativeSlack) + 1e-15;
    return report;
}

SandwichReport sandwich_check(const RitzProblem& problem, std::size_t n) {
    return sandwich_check(problem, n, equivalence_constants(problem));
}

approx::InequalityReport apriori_check(const RitzProblem& problem, std::size_t n, double alpha, unsigned k,
                                       const EquivalenceConstants& constants) {
    if (!(alpha >= 1.0)) throw Error(ErrorCode::InvalidArgument, "a priori estimate needs alpha >= 1");
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "a priori estimate needs k >= 1");
    if (n >= problem.truncation_order()) throw Error(ErrorCode::InvalidArgument, "lambda_{n+1} outside the truncation");

    const SpectralVector reference = problem.reference_solution();
    const auto smoothed = apply_function(ScalarSymbol::abs_power(alpha), reference);
    const double next = (*problem.b_spectrum)[n];  // lambda_{n+1}, zero-based storage

    const double lhs = solve(problem, n).energy_error;
    const double omega = modulus(k, std::numbers::pi / next, smoothed);
    const double rhs = constants.c0() * std::sqrt(static_cast<double>(k) + 1.0) /
                       (std::ldexp(1.0, static_cast<int>(k)) * std::pow(next, alpha - 0.5)) * omega;
    approx::ParameterRecord context{"apriori", k, {{"n", static_cast<double>(n)}, {"alpha", alpha}}, "", std::nullopt};
    return approx::InequalityReport::evaluate(lhs, rhs, std::move(context));
}

approx::InequalityReport apriori_check(const RitzProblem& problem, std::size_t n, double alpha, unsigned k) {
    return apriori_check(problem, n, alpha, k, equivalence_constants(problem));
}

double truncation_guard(const RitzProblem& problem) {
    const std::size_t order = problem.truncation_order();
    if (order < 2) throw Error(ErrorCode::TruncationTooSmall, "guard needs at least two modes");
    const SpectralVector full = problem.full_solution();
    const Vector half = problem.gram->solve_leading(order / 2, to_eigen(problem.rhs));
    return energy_norm(*problem.gram, full - from_eigen(problem.b_spectrum, half));
}

// ---------------------------------------------------------------------------

namespace {

double counterexample_coefficient(double alpha, std::size_t k) {
    const double kk = static_cast<double>(k);
    return 1.0 / (std::pow(kk, 2.0 * alpha + 0.5) * std::sqrt(std::log(kk)));
}

std::vector<double> square_spectrum(std::size_t truncation) {
    std::vector<double> lambdas(truncation);
    for (std::size_t k = 0; k < truncation; ++k) lambdas[k] = static_cast<double>((k + 1) * (k + 1));
    return lambdas;
}

}  // namespace

CounterexampleReport counterexample(double alpha, std::size_t truncation, std::span<const std::size_t> n_values,
                                    std::span<const std::size_t> partial_sum_points) {
    if (!(alpha >= 1.0)) throw Error(ErrorCode::InvalidArgument, "counterexample needs alpha >= 1");
    if (truncation < 3) throw Error(ErrorCode::TruncationTooSmall, "counterexample needs N >= 3");

    // suffix[k] = sum_{j >= k} j^2 x_j^2 with the part beyond N from
    // int_{N+1/2}^inf t^{1-4 alpha} / ln t dt = E1((4 alpha - 2) ln(N + 1/2)).
    const double decay = 4.0 * alpha - 2.0;
    const double beyond = -std::expint(-decay * std::log(static_cast<double>(truncation) + 0.5));
    std::vector<double> suffix(truncation + 2, 0.0);
    suffix[truncation + 1] = beyond;
    for (std::size_t k = truncation; k >= 2; --k) {
        const double kk = static_cast<double>(k);
        const double x = counterexample_coefficient(alpha, k);
        suffix[k] = suffix[k + 1] + kk * kk * x * x;
    }

    CounterexampleReport report;
    report.alpha = alpha;
    report.truncation = truncation;
    report.bound_holds = true;
    report.scaled_error_decreasing = true;
    for (std::size_t n : n_values) {
        if (n < 2 || n >= truncation) throw Error(ErrorCode::InvalidArgument, "counterexample n outside [2, N)");
        CounterexamplePoint point;
        point.n = n;
        point.tail_sq = suffix[n + 1];
        const double nn = static_cast<double>(n);
        point.scaled_error = std::pow(nn * nn, alpha - 0.5) * std::sqrt(point.tail_sq);
        point.bound_sq = 1.0 / (decay * std::pow(nn, decay) * std::log(nn + 1.0));
        point.bound_holds = point.tail_sq <= point.bound_sq * (1.0 + approx::kRelativeSlack);
        report.bound_holds = report.bound_holds && point.bound_holds;
        if (!report.points.empty() && !(point.scaled_error < report.points.back().scaled_error)) {
            report.scaled_error_decreasing = false;
        }
        report.points.push_back(point);
    }

    std::vector<std::size_t> marks(partial_sum_points.begin(), partial_sum_points.end());
    std::sort(marks.begin(), marks.end());
    double sum = 0.0;
    std::size_t k = 2;
    for (std::size_t m : marks) {
        if (m < 2 || m > truncation) throw Error(ErrorCode::InvalidArgument, "partial sum point outside [2, N]");
        for (; k <= m; ++k) {
            const double kk = static_cast<double>(k);
            sum += 1.0 / (kk * std::log(kk));
        }
        report.partial_sums.push_back({m, sum, std::log(std::log(static_cast<double>(m)))});
    }
    return report;
}

RitzProblem counterexample_problem(double alpha, std::size_t truncation) {
    if (!(alpha >= 1.0)) throw Error(ErrorCode::InvalidArgument, "counterexample needs alpha >= 1");
    auto lambdas = square_spectrum(truncation);
    auto spectrum = make_spectrum(lambdas);
    std::vector<Complex> x(truncation), y(truncation);
    for (std::size_t i = 1; i < truncation; ++i) {
        x[i] = counterexample_coefficient(alpha, i + 1);
        y[i] = lambdas[i] * x[i];
    }
    auto gram = std::make_shared<const DiagonalGram>(std::move(lambdas));
    SpectralVector exact(spectrum, std::move(x));
    return RitzProblem(spectrum, std::move(gram), SpectralVector(spectrum, std::move(y)), std::move(exact));
}

// ---------------------------------------------------------------------------

SmoothnessReport smoothness_from_rate(const RitzProblem& problem, std::span<const DecaySample> decay,
                                      const approx::ModulusDescriptor& omega, double alpha,
                                      const SmoothnessOptions& options) {
    if (decay.size() < 8) throw Error(ErrorCode::InsufficientData, "need at least 8 decay samples");
    if (!(alpha > 1.0)) throw Error(ErrorCode::InvalidArgument, "smoothness_from_rate needs alpha > 1");
    const auto conditions = approx::check_conditions(omega);
    if (!conditions.modulus_type()) throw Error(ErrorCode::ModulusHypothesisViolated, omega.name);
    if (!conditions.dini) throw Error(ErrorCode::DiniConditionViolated, omega.name);

    const auto lambdas = problem.b_spectrum->eigenvalues();
    SmoothnessReport report;
    std::vector<double> ratios;
    for (const auto& sample : decay) {
        if (sample.n >= lambdas.size()) throw Error(ErrorCode::InvalidArgument, "decay sample beyond the truncation");
        const double next = lambdas[sample.n];
        const double envelope = omega(1.0 / next) / std::pow(next, alpha - 0.5);
        const double ratio = sample.error / envelope;
        ratios.push_back(ratio);
        report.fitted_constant = std::max(report.fitted_constant, ratio);
    }
    report.hypothesis_holds = std::isfinite(report.fitted_constant) && approx::bounded_trend(ratios, options.bounded_factor);

    const std::size_t order = problem.truncation_order();
    if (order < 16) throw Error(ErrorCode::TruncationTooSmall, "membership check needs N >= 16");
    const SpectralVector x = problem.reference_solution();
    const std::size_t marks[] = {order / 4, order / 2, order};
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t m : marks) {
        for (; k < m; ++k) sum += std::pow(lambdas[k], 2.0 * alpha) * std::norm(x[k]);
        report.partial_sums.push_back({m, sum, std::log(std::log(static_cast<double>(m)))});
    }
    const double first = report.partial_sums.front().sum;
    report.growth_ratio = first > 0.0 ? report.partial_sums.back().sum / first : 1.0;
    report.membership_confirmed = std::isfinite(sum) && report.growth_ratio < options.growth_threshold;
    return report;
}

}  // namespace specritz::ritz
