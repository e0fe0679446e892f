#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "specritz/approx_theory.hpp"
#include "specritz/quadrature.hpp"

using namespace specritz;
using namespace specritz::approx;

namespace {

constexpr double kPi = std::numbers::pi;

double kronrod_kernel(double theta, unsigned k) {
    auto f = [&](double t) { return std::pow(1.0 - std::cos(theta * t), k) * std::sin(t); };
    // Split at the zeros of 1 - cos(theta t) so every panel is smooth and small.
    double sum = 0.0;
    const double step = 2.0 * kPi / theta;
    for (double a = 0.0; a < kPi; a += step) {
        sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, std::min(a + step, kPi), 10, 1e-14);
    }
    return sum;
}

SpectrumPtr integers(std::size_t n) { return std::make_shared<const SpectrumModel>(SpectrumModel::arithmetic(n, 1.0, 1.0)); }

SpectralVector decaying(const SpectrumPtr& s, double power) {
    std::vector<Complex> c(s->truncation_order());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = Complex(std::pow(k + 1.0, -power), 0.3 * std::cos(k * 1.0) / (k + 1.0));
    return {s, c};
}

}  // namespace

TEST_CASE("adaptive Simpson on closed forms") {
    const auto r = adaptive_simpson([](double t) { return std::exp(t); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-11));
    const auto s = adaptive_simpson([](double t) { return std::sin(t); }, 0.0, kPi);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("adaptive Simpson reports non-convergence when capped") {
    SimpsonOptions options;
    options.max_intervals = 16;
    const auto r = adaptive_simpson([](double t) { return std::sqrt(t); }, 0.0, 1.0, options);
    CHECK_FALSE(r.converged);
}

TEST_CASE("kernel integral matches Gauss-Kronrod") {
    for (unsigned k = 1; k <= 6; ++k) {
        for (double theta : {1.0, 1.3, 2.0, 7.7, 20.0}) {
            CHECK(kernel_integral(theta, k) == doctest::Approx(kronrod_kernel(theta, k)).epsilon(1e-10));
        }
    }
}

TEST_CASE("kernel integral equals the bound at theta = 1") {
    // int_0^pi (1 - cos t)^k sin t dt = 2^{k+1} / (k + 1)
    for (unsigned k = 1; k <= 6; ++k) {
        CHECK(std::abs(kernel_integral(1.0, k) - kernel_lower_bound(k)) <= 1e-9);
    }
    CHECK(kernel_lower_bound(1) == 2.0);
}

TEST_CASE("parameter record rendering") {
    ParameterRecord r{"jackson", 2, {{"r", 5.0}, {"h", 0.1}}, "abs^2", 17};
    CHECK(r.describe() == "r=5;h=0.10000000000000001;G=abs^2;v=17");
}

TEST_CASE("bernstein check on a single top mode is tight") {
    const auto s = integers(8);
    const auto e = SpectralVector::mode(s, 3);  // lambda = 4
    // ||Delta_h e|| = 2 |sin(2h)| <= 4h
    const auto r = bernstein_check(ScalarSymbol::constant(1.0), 1, 1e-4, 4.0, e);
    CHECK(r.satisfied);
    CHECK(r.lhs / r.rhs == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("bernstein check rejects symbols that break the hypotheses") {
    const auto x = decaying(integers(8), 1.0);
    ScalarSymbol decreasing{"decay", [](double l) { return 1.0 / (1.0 + std::abs(l)); }, true, false, std::nullopt};
    CHECK_THROWS_AS(bernstein_check(decreasing, 1, 0.1, 4.0, x), Error);
}

TEST_CASE("jackson check") {
    const auto x = decaying(integers(64), 1.5);
    for (unsigned k = 1; k <= 3; ++k) {
        for (double r : {1.0, 4.0, 16.0}) {
            for (const auto& g : {ScalarSymbol::constant(1.0), ScalarSymbol::abs_power(1.0)}) {
                const auto report = jackson_check(g, k, r, x);
                CHECK(report.satisfied);
                CHECK(report.lhs == doctest::Approx(best_approx(r, x)));
            }
        }
    }
    CHECK_THROWS_AS(jackson_check(ScalarSymbol::constant(1.0), 0, 1.0, x), Error);
    ScalarSymbol vanishing{"vanish", [](double l) { return std::max(0.0, std::abs(l) - 2.0); }, true, true, 2.0};
    CHECK_THROWS_AS(jackson_check(vanishing, 1, 1.0, x), Error);
}

TEST_CASE("modulus conditions") {
    SUBCASE("powers satisfy all four") {
        for (double a : {0.25, 0.5, 1.0, 2.0}) {
            const auto c = check_conditions(ModulusDescriptor::power(a));
            CHECK(c.all());
            CHECK(c.dini_integral == doctest::Approx(1.0 / a).epsilon(1e-8));
        }
    }
    SUBCASE("1 / |ln t| fails the Dini condition") {
        ModulusDescriptor w;
        w.name = "inv-log";
        w.evaluate = [](double t) { return t <= 0.0 ? 0.0 : 1.0 / (1.0 + std::abs(std::log(t))); };
        w.doubling_constant = 2.0;
        const auto c = check_conditions(w);
        CHECK(c.modulus_type());
        CHECK_FALSE(c.dini);
    }
    SUBCASE("a nonzero limit at zero fails") {
        ModulusDescriptor w;
        w.name = "offset";
        w.evaluate = [](double t) { return 0.1 + t; };
        w.doubling_constant = 2.0;
        CHECK_FALSE(check_conditions(w).vanishes_at_zero);
    }
    SUBCASE("a fast-growing function is not doubling with the declared constant") {
        ModulusDescriptor w;
        w.name = "exp";
        w.evaluate = [](double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); };
        w.doubling_constant = 4.0;
        CHECK_FALSE(check_conditions(w).doubling);
    }
}

TEST_CASE("lemma bound closed forms for t^a") {
    // t^k int_t^1 tau^{a-k-1} = t^k (1 - t^{a-k}) / (a - k) for a != k
    const auto w = ModulusDescriptor::power(0.5);
    for (double t : {0.5, 0.1, 1e-3}) {
        const double expected = t * (1.0 - std::pow(t, -0.5)) / (-0.5);
        CHECK(lemma_rate_bound(w, 1, t) == doctest::Approx(expected).epsilon(1e-9));
    }
    // a = k: t^k |ln t|
    const auto w1 = ModulusDescriptor::power(1.0);
    CHECK(lemma_rate_bound(w1, 1, 0.01) == doctest::Approx(0.01 * std::log(100.0)).epsilon(1e-9));
}

TEST_CASE("big Omega of t^a is t^a / a and doubles like omega") {
    const auto w = ModulusDescriptor::power(0.5);
    CHECK(big_omega(w, 0.25) == doctest::Approx(2.0 * 0.5).epsilon(1e-9));
    const auto p = check_big_omega(w);
    CHECK(p.vanishes_at_zero);
    CHECK(p.monotone);
    CHECK(p.doubling);
    CHECK(p.doubling_constant == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("inverse bound requires the Dini condition") {
    ModulusDescriptor w;
    w.name = "inv-log";
    w.evaluate = [](double t) { return t <= 0.0 ? 0.0 : 1.0 / (1.0 + std::abs(std::log(t))); };
    w.doubling_constant = 2.0;
    CHECK_THROWS_AS(inverse_bound(w, 1, 0.1), Error);
    const auto b = inverse_bound(ModulusDescriptor::power(2.0), 1, 0.25);
    CHECK(b.dini_term == doctest::Approx(0.25 * 0.25 / 2.0).epsilon(1e-9));
}

TEST_CASE("dyadic target vector has the prescribed tails") {
    const auto w = ModulusDescriptor::power(0.5);
    const auto g = ScalarSymbol::abs_power(1.0);
    const auto x = dyadic_target_vector(w, g, 1024);
    for (unsigned j = 0; j < 10; ++j) {
        const double r = std::ldexp(1.0, static_cast<int>(j));
        CHECK(best_approx(r, x) == doctest::Approx(w(1.0 / r) / g(r)).epsilon(1e-12));
    }
    const auto u = dyadic_approximants(x, 4);
    REQUIRE(u.size() == 5);
    CHECK(type_of(u[3]) == 8.0);
}

TEST_CASE("inverse experiment classifies t^a") {
    struct Row {
        double a;
        RateRegime regime;
    };
    for (const Row& row : {Row{0.5, RateRegime::AboveSmoothness}, Row{1.0, RateRegime::Critical},
                           Row{2.0, RateRegime::BelowSmoothness}}) {
        InverseExperimentOptions options;
        options.t_min = 1.0 / 256.0;
        const auto report = inverse_theorem_experiment(ModulusDescriptor::power(row.a), ScalarSymbol::constant(1.0), 1,
                                                       512, options);
        CHECK(report.regime == row.regime);
        CHECK(report.regime_bounded);
        CHECK(std::isfinite(report.fitted_constant));
        for (const auto& s : report.samples) CHECK(s.modulus <= report.fitted_constant * s.bound.envelope() * (1 + 1e-12));
    }
    CHECK_THROWS_AS(inverse_theorem_experiment(ModulusDescriptor::power(1.0), ScalarSymbol::constant(1.0), 1, 64), Error);
}

TEST_CASE("bounded trend") {
    const double flat[] = {1.0, 1.1, 1.2, 1.2, 1.3, 1.1};
    const double growing[] = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    CHECK(bounded_trend(flat, 1.5));
    CHECK_FALSE(bounded_trend(growing, 1.5));
}
