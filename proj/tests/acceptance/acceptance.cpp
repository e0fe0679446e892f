// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "runner.hpp"
#include "specritz/approx_theory.hpp"
#include "specritz/corpus.hpp"
#include "specritz/ritz.hpp"
#include "specritz/sturm_liouville.hpp"

namespace fs = std::filesystem;
using namespace specritz;

namespace {

constexpr double kKernelTolerance = 1e-9;
constexpr std::size_t kCorpusSize = 1000;
constexpr std::size_t kCorpusModes = 128;
constexpr std::uint64_t kCorpusSeed = 7;
constexpr double kStability = 0.20;
constexpr double kExactnessTolerance = 1e-10;
constexpr double kGalerkinTolerance = 1e-9;
constexpr double kDivergenceGrowth = 0.15;
constexpr double kSlopeTolerance = 0.3;
constexpr double kGuardFraction = 0.01;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double seconds_limit;  // <= 0: no limit
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", v);
    return buffer;
}

const std::vector<SpectralVector>& corpus() {
    static const std::vector<SpectralVector> vectors = [] {
        CorpusOptions options;
        options.count = kCorpusSize;
        options.modes = kCorpusModes;
        options.seed = kCorpusSeed;
        return random_corpus(options);
    }();
    return vectors;
}

const std::vector<ScalarSymbol>& symbols() {
    static const std::vector<ScalarSymbol> g{ScalarSymbol::constant(1.0), ScalarSymbol::abs_power(1.0),
                                             ScalarSymbol::abs_power(2.0)};
    return g;
}

Outcome kernel() {
    std::size_t cases = 0, violations = 0;
    double worst_equality = 0.0, min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 190; ++i) {
        const double theta = 1.0 + i / 10.0;
        for (unsigned k = 1; k <= 6; ++k) {
            const double integral = approx::kernel_integral(theta, k);
            const double bound = approx::kernel_lower_bound(k);
            ++cases;
            if (!(integral >= bound - kKernelTolerance)) ++violations;
            min_margin = std::min(min_margin, integral - bound);
            if (i == 0) worst_equality = std::max(worst_equality, std::abs(integral - bound));
        }
    }
    const bool pass = violations == 0 && worst_equality <= kKernelTolerance;
    return {pass, std::to_string(cases) + " cases, " + std::to_string(violations) + " violations, min margin " +
                      fmt(min_margin) + ", |I - 2^{k+1}/(k+1)| at theta=1 <= " + fmt(worst_equality)};
}

Outcome bernstein() {
    std::size_t cases = 0, violations = 0;
    double worst = 0.0;
    for (const auto& x : corpus())
        for (const auto& g : symbols())
            for (double alpha : {1.0, 10.0})
                for (unsigned k = 0; k <= 3; ++k)
                    for (double h : {0.01, 0.1, 1.0}) {
                        const auto r = approx::bernstein_check(g, k, h, alpha, x);
                        ++cases;
                        if (!r.satisfied) ++violations;
                        if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
                    }
    return {violations == 0, std::to_string(cases) + " cases, " + std::to_string(violations) +
                                 " violations, max lhs/rhs " + fmt(worst)};
}

Outcome jackson() {
    std::size_t cases = 0, violations = 0;
    double worst = 0.0;
    for (const auto& x : corpus())
        for (const auto& g : symbols())
            for (double r : {1.0, 5.0, 25.0})
                for (unsigned k = 1; k <= 3; ++k) {
                    const auto report = approx::jackson_check(g, k, r, x);
                    ++cases;
                    if (!report.satisfied) ++violations;
                    if (report.rhs > 0.0) worst = std::max(worst, report.lhs / report.rhs);
                }
    return {violations == 0, std::to_string(cases) + " cases, " + std::to_string(violations) +
                                 " violations, max lhs/rhs " + fmt(worst)};
}

Outcome inverse() {
    struct Row {
        double a;
        approx::RateRegime expected;
    };
    const Row rows[] = {{0.5, approx::RateRegime::AboveSmoothness},
                        {1.0, approx::RateRegime::Critical},
                        {1.5, approx::RateRegime::BelowSmoothness},
                        {2.0, approx::RateRegime::BelowSmoothness}};
    approx::InverseExperimentOptions options;
    options.t_min = std::ldexp(1.0, -12);
    options.t_max = 0.5;
    options.regime_t_max = 0.25;
    bool pass = true;
    std::ostringstream detail;
    for (const auto& row : rows) {
        const auto w = approx::ModulusDescriptor::power(row.a);
        const auto coarse = approx::inverse_theorem_experiment(w, ScalarSymbol::constant(1.0), 1, 4096, options);
        const auto fine = approx::inverse_theorem_experiment(w, ScalarSymbol::constant(1.0), 1, 8192, options);
        const double drift = std::abs(fine.fitted_constant / coarse.fitted_constant - 1.0);
        const bool ok = std::isfinite(coarse.fitted_constant) && std::isfinite(fine.fitted_constant) &&
                        drift <= kStability && coarse.regime == row.expected && fine.regime == row.expected &&
                        coarse.regime_bounded && fine.regime_bounded;
        pass = pass && ok;
        detail << "a=" << row.a << ": m=" << fmt(fine.fitted_constant) << " drift " << fmt(drift) << " "
               << approx::to_string(fine.regime) << (fine.regime_bounded ? " bounded" : " UNBOUNDED") << "; ";
    }
    return {pass, detail.str()};
}

sturm::BoundaryValueProblem cosine_q(std::size_t truncation) {
    sturm::BoundaryValueProblem bvp;
    bvp.potential = sturm::PotentialSpec::from_cosine(sturm::CosineSeries{{2.0, 0.0, 1.0}});
    bvp.truncation = truncation;
    return bvp;
}

sturm::BoundaryValueProblem rational_solution(std::size_t truncation) {
    return sturm::manufacture(
        cosine_q(truncation), [](double t) { return 1.0 / (1.1 + std::cos(t)); },
        [](double t) { return std::sin(t) / std::pow(1.1 + std::cos(t), 2); });
}

sturm::BoundaryValueProblem power_decay_solution(std::size_t truncation) {
    sturm::CosineSeries x;
    x.coefficients.assign(truncation, 0.0);
    for (std::size_t m = 1; m < truncation; ++m) x.coefficients[m] = std::pow(static_cast<double>(m), -6.0);
    return sturm::manufacture(cosine_q(truncation), x);
}

Outcome exactness() {
    std::size_t solves = 0;
    double worst_energy = 0.0, worst_defect = 0.0;
    auto track = [&](const ritz::RitzProblem& problem, std::size_t n, bool exact_inside) {
        const auto s = ritz::solve(problem, n);
        ++solves;
        worst_defect = std::max(worst_defect, s.galerkin_defect);
        if (exact_inside) worst_energy = std::max(worst_energy, s.energy_error);
    };

    // Cosine polynomials of degree d lie in H_n for n > d (Neumann index = frequency).
    const sturm::CosineSeries polys[] = {{{0.0, 1.0}}, {{0.0, 1.0, 0.0, 0.0, 0.05}}, {{1.0, -0.5, 0.25, 0.125, 0.0, 0.3, 0.0, 0.0, -0.2}}};
    for (const auto& x : polys) {
        const auto problem = sturm::assemble_gram(sturm::manufacture(cosine_q(128), x));
        for (std::size_t n = x.degree() + 1; n <= 64; n *= 2) track(problem, n, true);
    }
    // Diagonal and Dirichlet models.
    {
        const auto problem = ritz::counterexample_problem(1.0, 512);
        for (std::size_t n : {2, 16, 256}) track(problem, n, false);
    }
    {
        auto bvp = cosine_q(256);
        bvp.basis = sturm::Basis::DirichletSine;
        bvp.rhs_function = [](double t) { return std::sin(t) / (1.1 + std::cos(t)); };
        const auto problem = sturm::assemble_gram(bvp).with_reference_solution();
        for (std::size_t n : {4, 32, 128}) track(problem, n, false);
    }
    // The solves of the sandwich and rate matrices.
    for (const auto& bvp : {rational_solution(512), power_decay_solution(512)}) {
        const auto problem = sturm::assemble_gram(bvp);
        for (std::size_t n : {2, 4, 8, 16, 32}) track(problem, n, false);
    }
    {
        auto bvp = cosine_q(1024);
        bvp.rhs_function = sturm::quartic_bernoulli;
        const auto problem = sturm::assemble_gram(bvp).with_reference_solution();
        for (std::size_t n = 4; n <= 64; ++n) track(problem, n, false);
    }
    const bool pass = worst_energy <= kExactnessTolerance && worst_defect <= kGalerkinTolerance;
    return {pass, std::to_string(solves) + " solves, worst in-subspace energy error " + fmt(worst_energy) +
                      ", worst Galerkin defect " + fmt(worst_defect)};
}

Outcome sandwich_apriori() {
    bool pass = true;
    std::size_t checks = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    std::ostringstream failures;
    const std::size_t ns[] = {2, 4, 8, 16, 32};
    const std::pair<const char*, sturm::BoundaryValueProblem> cases[] = {{"1/(1.1+cos t)", rational_solution(512)},
                                                                         {"sum m^-6 cos mt", power_decay_solution(512)}};
    for (const auto& [name, bvp] : cases) {
        const auto problem = sturm::assemble_gram(bvp);
        const auto c = ritz::equivalence_constants(problem);
        for (const auto& sw : ns) {
            const auto report = ritz::sandwich_check(problem, sw, c);
            ++checks;
            min_slack = std::min(min_slack, report.slack());
            if (!report.satisfied()) {
                pass = false;
                failures << " sandwich " << name << " n=" << sw;
            }
        }
        for (double alpha : {1.0, 2.0}) {
            for (unsigned k : {1u, 2u}) {
                std::vector<double> scaled;
                for (std::size_t n : ns) {
                    const auto r = ritz::apriori_check(problem, n, alpha, k, c);
                    ++checks;
                    min_slack = std::min(min_slack, r.slack);
                    if (!r.satisfied || r.slack < 0.0) {
                        pass = false;
                        failures << " apriori " << name << " a=" << alpha << " k=" << k << " n=" << n;
                    }
                    scaled.push_back(std::pow((*problem.b_spectrum)[n], alpha - 0.5) * r.lhs);
                }
                const std::size_t m = scaled.size();
                if (!(scaled[m - 1] < scaled[m - 2] && scaled[m - 2] < scaled[m - 3])) {
                    pass = false;
                    failures << " surrogate " << name << " a=" << alpha;
                }
            }
        }
    }
    return {pass, std::to_string(checks) + " checks, min slack " + fmt(min_slack) + failures.str()};
}

Outcome counterexample() {
    std::vector<std::size_t> ns;
    for (std::size_t n = 10; n <= 1000; ++n) ns.push_back(n);
    const std::size_t marks[] = {10000, 100000};
    const auto report = ritz::counterexample(1.0, 100000, ns, marks);
    double worst = 0.0;
    for (const auto& p : report.points) worst = std::max(worst, p.tail_sq / p.bound_sq);
    const double growth = report.partial_sums[1].sum - report.partial_sums[0].sum;
    const bool pass = report.bound_holds && growth >= kDivergenceGrowth && report.scaled_error_decreasing;
    return {pass, "max tail/bound " + fmt(worst) + ", partial-sum growth " + fmt(growth) +
                      (report.scaled_error_decreasing ? ", scaled error decreasing" : ", scaled error NOT decreasing")};
}

Outcome rate() {
    auto bvp = cosine_q(1024);
    bvp.rhs_function = sturm::quartic_bernoulli;
    std::vector<std::size_t> grid;
    for (std::size_t n = 4; n <= 64; ++n) grid.push_back(n);
    sturm::RateOptions options;
    options.guard_fraction = kGuardFraction;
    options.slope_tolerance = kSlopeTolerance;
    const auto report = sturm::rate_experiment(bvp, 1, grid, options);
    const bool pass = !report.floor_reached && report.slope <= -3.0 + kSlopeTolerance && report.surrogate_decreasing &&
                      report.guard < kGuardFraction * report.smallest_error;
    return {pass, "slope " + fmt(report.slope) + (report.surrogate_decreasing ? ", n^3 e_n decreasing" : ", n^3 e_n NOT decreasing") +
                      ", guard " + fmt(report.guard) + " vs smallest error " + fmt(report.smallest_error) + " at N=" +
                      std::to_string(report.truncation)};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path source = SPECRITZ_SOURCE_DIR;
    const auto root = fs::temp_directory_path() / ("specritz_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::pair<const char*, const char*> runs[] = {{"check-inequalities", "kernel.yaml"},
                                                        {"check-inequalities", "corpus_inequalities.yaml"},
                                                        {"ritz-run", "ritz_constant.yaml"},
                                                        {"ritz-run", "ritz_cosine.yaml"},
                                                        {"counterexample", "counterexample.yaml"},
                                                        {"inverse-rate", "inverse_rate.yaml"}};
    std::size_t files = 0;
    std::ostringstream failures;
    bool pass = true;
    for (const auto& [command, config] : runs) {
        const auto first = root / config / "first";
        const auto second = root / config / "second";
        std::ostringstream log, err;
        const int a = cli::run({command, source / "configs" / config, first, 1}, log, err);
        const int b = cli::run({command, source / "configs" / config, second, 2}, log, err);
        if (a != b) {
            pass = false;
            failures << " " << config << " exit " << a << "/" << b;
        }
        for (const auto& entry : fs::directory_iterator(first)) {
            const auto ext = entry.path().extension();
            if (ext != ".csv" && ext != ".json") continue;
            ++files;
            if (slurp(entry.path()) != slurp(second / entry.path().filename())) {
                pass = false;
                failures << " " << config << ":" << entry.path().filename().string();
            }
        }
    }
    fs::remove_all(root);
    return {pass && files > 0, std::to_string(files) + " CSV/JSON files byte-identical across two runs" + failures.str()};
}

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "kernel inequality", 5.0, kernel},
        {2, "Bernstein suite", 30.0, bernstein},
        {3, "Jackson suite", 60.0, jackson},
        {4, "inverse-theorem experiment", 120.0, inverse},
        {5, "Ritz exactness and Galerkin orthogonality", 0.0, exactness},
        {6, "sandwich and a priori bounds", 60.0, sandwich_apriori},
        {7, "counterexample", 10.0, counterexample},
        {8, "rate theorem", 120.0, rate},
        {9, "determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.seconds_limit <= 0.0 || seconds < c.seconds_limit;
        const bool pass = outcome.pass && in_time;
        if (!pass) ++failed;
        std::printf("%s  %d  %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(), seconds,
                    c.seconds_limit > 0.0 ? (in_time ? ", within limit" : ", OVER LIMIT") : "");
        std::fflush(stdout);
    }
    std::printf("%d of 9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
