#include <doctest.h>

#include <cmath>
#include <random>

#include "specritz/approx_theory.hpp"
#include "specritz/corpus.hpp"
#include "specritz/ritz.hpp"

using namespace specritz;

namespace {

std::vector<SpectralVector> small_corpus(std::uint64_t seed) {
    CorpusOptions options;
    options.count = 40;
    options.modes = 48;
    options.spectral_radius = 60.0;
    options.seed = seed;
    return random_corpus(options);
}

}  // namespace

TEST_CASE("corpus is deterministic and well formed") {
    const auto a = small_corpus(3);
    const auto b = small_corpus(3);
    const auto c = small_corpus(4);
    REQUIRE(a.size() == 40);
    for (std::size_t v = 0; v < a.size(); ++v) {
        CHECK(a[v].spectrum() == b[v].spectrum());
        CHECK(norm(a[v] - SpectralVector(a[v].spectrum_ptr(), {b[v].coefficients().begin(), b[v].coefficients().end()})) == 0.0);
        CHECK(a[v].spectrum().eigenvalues().front() > 0.0);
        CHECK(a[v].spectrum().max_abs() <= 60.0);
    }
    CHECK_FALSE(a[0].spectrum() == c[0].spectrum());
}

TEST_CASE("group and difference identities over random vectors") {
    for (std::uint64_t seed : {1, 2, 3}) {
        for (const auto& x : small_corpus(seed)) {
            const double n = norm(x);
            CHECK(norm(unitary(1.3, x)) == doctest::Approx(n).epsilon(1e-13));
            // Delta_h^{j+k} = Delta_h^j Delta_h^k
            const auto lhs = difference(3, 0.2, x);
            const auto rhs = difference(1, 0.2, difference(2, 0.2, x));
            CHECK(norm(lhs - rhs) <= 1e-12 * std::max(1.0, n));
            CHECK(difference_norm(2, 0.2, x) <= 4.0 * n * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("modulus properties over random vectors") {
    for (const auto& x : small_corpus(5)) {
        const double n = norm(x);
        for (unsigned k = 1; k <= 2; ++k) {
            const double w1 = modulus(k, 0.05, x);
            const double w2 = modulus(k, 0.1, x);
            CHECK(w1 <= w2 * (1.0 + 1e-12));
            CHECK(w2 <= std::ldexp(n, static_cast<int>(k)) * (1.0 + 1e-12));
        }
        // omega_1(2t) <= 2 omega_1(t)
        CHECK(modulus(1, 0.2, x) <= 2.0 * modulus(1, 0.1, x) * (1.0 + 1e-9));
    }
}

TEST_CASE("best approximation is nonincreasing and vanishes past the type") {
    for (const auto& x : small_corpus(6)) {
        double previous = INFINITY;
        for (double r = 4.0; r <= 64.0; r += 4.0) {
            const double e = best_approx(r, x);
            CHECK(e <= previous);
            previous = e;
        }
        CHECK(best_approx(type_of(x), x) == 0.0);
        CHECK(type_of(project_exp(20.0, x)) <= 20.0);
    }
}

TEST_CASE("Bernstein and Jackson hold on random vectors") {
    const ScalarSymbol symbols[] = {ScalarSymbol::constant(1.0), ScalarSymbol::abs_power(1.0), ScalarSymbol::abs_power(2.0)};
    for (std::uint64_t seed : {11, 12}) {
        for (const auto& x : small_corpus(seed)) {
            for (const auto& g : symbols) {
                for (unsigned k = 0; k <= 3; ++k)
                    for (double h : {0.01, 0.3})
                        for (double alpha : {2.0, 30.0}) CHECK(approx::bernstein_check(g, k, h, alpha, x).satisfied);
                for (unsigned k = 1; k <= 2; ++k)
                    for (double r : {2.0, 17.0}) CHECK(approx::jackson_check(g, k, r, x).satisfied);
            }
        }
    }
}

TEST_CASE("kernel inequality on a random theta sample") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> theta(1.0, 40.0);
    for (int i = 0; i < 60; ++i) {
        const double t = theta(rng);
        for (unsigned k = 1; k <= 4; ++k) CHECK(approx::kernel_check(t, k).satisfied);
    }
}

TEST_CASE("Ritz sandwich on random diagonal-plus-coupling problems") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 32;
        std::vector<double> lambdas(n);
        for (std::size_t k = 0; k < n; ++k) lambdas[k] = 1.0 + k * k;
        ritz::Matrix a = ritz::Matrix::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = 2.0 * lambdas[i];
            for (std::size_t j = 0; j < i; ++j) {
                const double c = 0.2 * u(rng) / (1.0 + std::abs(static_cast<double>(i) - static_cast<double>(j)));
                a(i, j) = c;
                a(j, i) = c;
            }
        }
        auto s = make_spectrum(lambdas);
        std::vector<Complex> y(n);
        for (std::size_t k = 0; k < n; ++k) y[k] = u(rng) / (1.0 + k);
        const auto problem =
            ritz::RitzProblem(s, std::make_shared<const ritz::DenseGram>(a), SpectralVector(s, y)).with_reference_solution();
        const auto c = ritz::equivalence_constants(problem);
        for (std::size_t m = 1; m < n; m += 3) {
            CHECK(ritz::sandwich_check(problem, m, c).satisfied());
            CHECK(ritz::solve(problem, m).galerkin_defect <= 1e-9);
        }
    }
}
