#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "specritz/sturm_liouville.hpp"

using namespace specritz;
using namespace specritz::sturm;

namespace {

constexpr double kPi = std::numbers::pi;

const CosineSeries kTwoPlusCos2{{2.0, 0.0, 1.0}};

BoundaryValueProblem cosine_problem(std::size_t n, Basis basis = Basis::NeumannCosine) {
    BoundaryValueProblem bvp;
    bvp.potential = PotentialSpec::from_cosine(kTwoPlusCos2);
    bvp.basis = basis;
    bvp.truncation = n;
    if (basis == Basis::NeumannCosine) bvp.rhs_function = [](double t) { return std::cos(t); };
    else bvp.rhs_function = [](double t) { return std::sin(t); };
    return bvp;
}

double kronrod(const std::function<double(double)>& f) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, 15, 1e-14);
}

}  // namespace

TEST_CASE("cosine series algebra") {
    const CosineSeries a{{1.0, 2.0}};
    const CosineSeries b{{0.0, 1.0, 3.0}};
    const auto p = a * b;
    for (double t : {0.0, 0.4, 1.9, kPi}) {
        CHECK(p(t) == doctest::Approx(a(t) * b(t)).epsilon(1e-14));
        CHECK((a + b)(t) == doctest::Approx(a(t) + b(t)).epsilon(1e-14));
    }
    CHECK(b.negative_second_derivative().coefficients == std::vector<double>{0.0, 1.0, 12.0});
}

TEST_CASE("potential validation") {
    CHECK_NOTHROW(validate(PotentialSpec::from_cosine(kTwoPlusCos2)));
    CHECK_THROWS_AS(validate(PotentialSpec::constant(-1.0)), Error);
    auto mismatched = PotentialSpec::from_cosine(kTwoPlusCos2);
    mismatched.q = [](double t) { return 2.0 + std::cos(2.0 * t) + 1e-6; };
    CHECK_THROWS_AS(validate(mismatched), Error);
}

TEST_CASE("basis eigenvalues and normalisation") {
    CHECK(eigenvalues(Basis::NeumannCosine, 3) == std::vector<double>{1.0, 2.0, 5.0});
    CHECK(eigenvalues(Basis::DirichletSine, 3) == std::vector<double>{1.0, 4.0, 9.0});
    for (Basis basis : {Basis::NeumannCosine, Basis::DirichletSine}) {
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                const double ip = kronrod([&](double t) { return basis_function(basis, i, t) * basis_function(basis, j, t); });
                CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("trapezoid moments agree with Gauss-Kronrod") {
    // Smooth even (cosine) and odd (sine) periodic extensions.
    auto f = [](double t) { return 1.0 / (1.1 + std::cos(t)); };
    auto g = [](double t) { return std::sin(t) / (1.1 + std::cos(t)); };
    const auto c = cosine_moments(f, 12);
    const auto s = sine_moments(g, 12);
    for (std::size_t p = 0; p < 12; ++p) {
        CHECK(c[p] == doctest::Approx(kronrod([&](double t) { return f(t) * std::cos(p * t); })).epsilon(1e-10).scale(1.0));
        CHECK(s[p] == doctest::Approx(kronrod([&](double t) { return g(t) * std::sin(p * t); })).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("Gram assembly") {
    SUBCASE("q = 1 gives A = B") {
        auto bvp = cosine_problem(8);
        bvp.potential = PotentialSpec::constant(1.0);
        const auto problem = assemble_gram(bvp);
        const auto lambdas = problem.b_spectrum->eigenvalues();
        for (std::size_t j = 0; j < 8; ++j)
            for (std::size_t k = 0; k < 8; ++k)
                CHECK(std::abs(problem.gram->entry(j, k) - (j == k ? lambdas[j] : 0.0)) <= 1e-14);
    }
    SUBCASE("q = 2 + cos 2t has (q e1, e1) = 2.5") {
        const auto problem = assemble_gram(cosine_problem(8));
        CHECK(problem.gram->entry(1, 1).real() == doctest::Approx(1.0 + 2.5).epsilon(1e-14));
    }
    SUBCASE("entries agree with Gauss-Kronrod inner products") {
        for (Basis basis : {Basis::NeumannCosine, Basis::DirichletSine}) {
            const auto m = multiplication_from_series(kTwoPlusCos2, basis, 6);
            for (std::size_t j = 0; j < 6; ++j) {
                for (std::size_t k = 0; k < 6; ++k) {
                    const double oracle = kronrod(
                        [&](double t) { return kTwoPlusCos2(t) * basis_function(basis, j, t) * basis_function(basis, k, t); });
                    CHECK(std::abs(m(j, k).real() - oracle) <= 1e-12);
                }
            }
        }
    }
    SUBCASE("quadrature and series assembly agree") {
        for (Basis basis : {Basis::NeumannCosine, Basis::DirichletSine}) {
            const auto a = multiplication_from_series(kTwoPlusCos2, basis, 64);
            const auto b = multiplication_from_quadrature([](double t) { return 2.0 + std::cos(2.0 * t); }, basis, 64);
            CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
    SUBCASE("symmetric and positive definite") {
        for (Basis basis : {Basis::NeumannCosine, Basis::DirichletSine}) {
            auto bvp = cosine_problem(32, basis);
            bvp.potential = PotentialSpec::from_function([](double t) { return std::exp(std::cos(t)); });
            const auto problem = assemble_gram(bvp);
            const auto block = problem.gram->block(32);
            CHECK((block - block.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
            for (std::size_t n = 1; n <= 32; n += 7) {
                Eigen::SelfAdjointEigenSolver<ritz::Matrix> eig(problem.gram->block(n), Eigen::EigenvaluesOnly);
                CHECK(eig.eigenvalues().minCoeff() > 0.0);
            }
        }
    }
    SUBCASE("quadrature that cannot converge is reported") {
        auto bvp = cosine_problem(8);
        bvp.potential = PotentialSpec::from_function([](double t) { return 1.0 + (t < 1.0 ? 0.0 : 1.0); });
        CHECK_THROWS_AS(assemble_gram(bvp), Error);
    }
}

TEST_CASE("manufactured solutions") {
    SUBCASE("x = cos t gives y = 3.5 cos t + 0.5 cos 3t") {
        const auto bvp = manufacture(cosine_problem(8), CosineSeries{{0.0, 1.0}});
        for (double t : {0.0, 0.7, 2.0}) {
            CHECK(bvp.rhs_function(t) == doctest::Approx(3.5 * std::cos(t) + 0.5 * std::cos(3.0 * t)).epsilon(1e-14));
        }
    }
    SUBCASE("x = 1 gives y = q") {
        const auto bvp = manufacture(cosine_problem(8), CosineSeries{{1.0}});
        for (double t : {0.0, 0.7, 2.0}) CHECK(bvp.rhs_function(t) == doctest::Approx(kTwoPlusCos2(t)));
    }
    SUBCASE("full solve recovers the coefficients") {
        auto fn = [](double t) { return 1.0 / (1.1 + std::cos(t)); };
        auto dfn = [](double t) { return std::sin(t) / std::pow(1.1 + std::cos(t), 2); };
        const auto bvp = manufacture(cosine_problem(128), fn, dfn);
        const auto problem = assemble_gram(bvp);
        const auto x = problem.full_solution();
        for (std::size_t k = 0; k < 128; ++k) CHECK(std::abs(x[k] - (*bvp.exact_coefficients)[k]) <= 1e-8);
    }
    SUBCASE("boundary conditions are enforced") {
        auto fn = [](double t) { return std::sin(t); };
        auto dfn = [](double t) { return std::cos(t); };
        CHECK_THROWS_AS(manufacture(cosine_problem(16), fn, dfn), Error);
    }
}

TEST_CASE("quartic Bernoulli closed form") {
    for (double t : {0.0, 0.5, 2.0, kPi}) {
        double sum = 0.0;
        for (int m = 1; m <= 200000; ++m) sum += std::cos(m * t) / std::pow(static_cast<double>(m), 4);
        CHECK(quartic_bernoulli(t) == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("log-log slope") {
    const double x[] = {1.0, 2.0, 4.0, 8.0};
    const double y[] = {1.0, 0.125, 1.0 / 64.0, 1.0 / 512.0};
    CHECK(log_log_slope(x, y) == doctest::Approx(-3.0));
}

TEST_CASE("rate experiment") {
    SUBCASE("cosine polynomial solutions reach the floor") {
        const auto bvp = manufacture(cosine_problem(128), CosineSeries{{0.0, 1.0, 0.0, 0.0, 0.05}});
        const std::size_t grid[] = {2, 3, 4, 6, 8, 12, 16};
        const auto report = rate_experiment(bvp, 1, grid);
        CHECK(report.floor_reached);
        CHECK(report.rate_satisfied);
    }
    SUBCASE("too few grid points") {
        const std::size_t grid[] = {2, 4, 8};
        CHECK_THROWS_AS(rate_experiment(cosine_problem(64), 1, grid), Error);
    }
    SUBCASE("m^-4 data decays at least like n^-3") {
        auto bvp = cosine_problem(256);
        bvp.rhs_function = quartic_bernoulli;
        std::vector<std::size_t> grid;
        for (std::size_t n = 4; n <= 16; ++n) grid.push_back(n);
        const auto report = rate_experiment(bvp, 1, grid);
        CHECK_FALSE(report.floor_reached);
        CHECK(report.slope <= -3.0 + 0.3);
        CHECK(report.surrogate_decreasing);
        CHECK(report.guard < 0.01 * report.smallest_error);
    }
    SUBCASE("a small truncation is doubled until the guard holds") {
        auto bvp = cosine_problem(32);
        bvp.rhs_function = quartic_bernoulli;
        std::vector<std::size_t> grid{4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
        const auto report = rate_experiment(bvp, 1, grid);
        CHECK(report.truncation > 32);
        CHECK(report.guard < 0.01 * report.smallest_error);
    }
}
