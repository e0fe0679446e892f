#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <vector>

#include "specritz/approx_theory.hpp"
#include "specritz/corpus.hpp"
#include "specritz/ritz.hpp"
#include "specritz/sturm_liouville.hpp"

namespace py = pybind11;
using namespace specritz;

namespace {

py::array_t<std::complex<double>> as_array(std::span<const Complex> values) {
    return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(values.size()), values.data());
}

py::array_t<double> as_array(std::span<const double> values) {
    return py::array_t<double>(static_cast<py::ssize_t>(values.size()), values.data());
}

ritz::RitzProblem dense_problem(std::vector<double> eigenvalues, const ritz::Matrix& gram, std::vector<Complex> rhs,
                                std::optional<std::vector<Complex>> exact) {
    auto spectrum = make_spectrum(std::move(eigenvalues));
    std::optional<SpectralVector> x;
    if (exact) x.emplace(spectrum, std::move(*exact));
    return ritz::RitzProblem(spectrum, std::make_shared<const ritz::DenseGram>(gram), SpectralVector(spectrum, std::move(rhs)),
                             std::move(x));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral approximation inequalities and the Ritz method in an auxiliary eigenbasis.";

    auto error = py::register_exception<Error>(m, "SpecritzError", PyExc_RuntimeError);
    (void)error;

    py::class_<SpectrumModel, std::shared_ptr<SpectrumModel>>(m, "SpectrumModel")
        .def(py::init<std::vector<double>>(), py::arg("eigenvalues"))
        .def_static("arithmetic", &SpectrumModel::arithmetic, py::arg("count"), py::arg("first"), py::arg("step"))
        .def_property_readonly("eigenvalues", [](const SpectrumModel& s) { return as_array(s.eigenvalues()); })
        .def_property_readonly("truncation_order", &SpectrumModel::truncation_order)
        .def_property_readonly("max_abs", &SpectrumModel::max_abs)
        .def("__len__", &SpectrumModel::truncation_order);

    py::class_<SpectralVector>(m, "SpectralVector")
        .def(py::init([](const SpectrumModel& s, std::vector<Complex> c) {
                 return SpectralVector(std::make_shared<const SpectrumModel>(s), std::move(c));
             }),
             py::arg("spectrum"), py::arg("coefficients"))
        .def(py::init([](std::vector<double> eigenvalues, std::vector<Complex> c) {
                 return SpectralVector(make_spectrum(std::move(eigenvalues)), std::move(c));
             }),
             py::arg("eigenvalues"), py::arg("coefficients"))
        .def_property_readonly("coefficients", [](const SpectralVector& x) { return as_array(x.coefficients()); })
        .def_property_readonly("eigenvalues", [](const SpectralVector& x) { return as_array(x.spectrum().eigenvalues()); })
        .def("__len__", &SpectralVector::size)
        .def("__add__", [](const SpectralVector& a, const SpectralVector& b) { return a + b; })
        .def("__sub__", [](const SpectralVector& a, const SpectralVector& b) { return a - b; })
        .def("__rmul__", [](const SpectralVector& a, Complex s) { return s * a; })
        .def("__mul__", [](const SpectralVector& a, Complex s) { return s * a; });

    py::class_<ScalarSymbol>(m, "ScalarSymbol")
        .def(py::init([](std::string name, std::function<double(double)> f, bool even, bool nondecreasing,
                         std::optional<double> doubling) {
                 return ScalarSymbol{std::move(name), std::move(f), even, nondecreasing, doubling};
             }),
             py::arg("name"), py::arg("evaluate"), py::arg("is_even") = false,
             py::arg("is_nondecreasing_on_positives") = false, py::arg("doubling_bound") = py::none())
        .def_static("constant", &ScalarSymbol::constant, py::arg("value") = 1.0)
        .def_static("abs_power", &ScalarSymbol::abs_power, py::arg("power"))
        .def_readonly("name", &ScalarSymbol::name)
        .def("__call__", &ScalarSymbol::operator(), py::arg("lam"));

    m.def("norm", &norm, py::arg("x"));
    m.def("apply_function", &apply_function, py::arg("symbol"), py::arg("x"));
    m.def("unitary", &unitary, py::arg("h"), py::arg("x"));
    m.def("difference", &difference, py::arg("k"), py::arg("h"), py::arg("x"));
    m.def("difference_norm", &difference_norm, py::arg("k"), py::arg("h"), py::arg("x"));
    m.def("modulus", &modulus, py::arg("k"), py::arg("t"), py::arg("x"));
    m.def("best_approx", &best_approx, py::arg("r"), py::arg("x"));
    m.def("project_exp", &project_exp, py::arg("alpha"), py::arg("x"));
    m.def("type_of", &type_of, py::arg("x"));

    m.def(
        "random_corpus",
        [](std::size_t count, std::size_t modes, double radius, std::uint64_t seed) {
            return random_corpus(CorpusOptions{count, modes, radius, seed});
        },
        py::arg("count") = 1000, py::arg("modes") = 128, py::arg("spectral_radius") = 100.0, py::arg("seed") = 7);

    // Approximation theory.
    py::class_<approx::InequalityReport>(m, "InequalityReport")
        .def_readonly("lhs", &approx::InequalityReport::lhs)
        .def_readonly("rhs", &approx::InequalityReport::rhs)
        .def_readonly("satisfied", &approx::InequalityReport::satisfied)
        .def_readonly("slack", &approx::InequalityReport::slack)
        .def_property_readonly("parameters", [](const approx::InequalityReport& r) { return r.context.describe(); })
        .def("__bool__", [](const approx::InequalityReport& r) { return r.satisfied; });

    py::class_<approx::ModulusDescriptor>(m, "ModulusDescriptor")
        .def_static("power", &approx::ModulusDescriptor::power, py::arg("exponent"))
        .def_readonly("name", &approx::ModulusDescriptor::name)
        .def("__call__", &approx::ModulusDescriptor::operator(), py::arg("t"));

    py::enum_<approx::RateRegime>(m, "RateRegime")
        .value("BELOW_SMOOTHNESS", approx::RateRegime::BelowSmoothness)
        .value("CRITICAL", approx::RateRegime::Critical)
        .value("ABOVE_SMOOTHNESS", approx::RateRegime::AboveSmoothness)
        .value("ENVELOPE", approx::RateRegime::Envelope);

    py::class_<approx::InverseExperimentReport>(m, "InverseExperimentReport")
        .def_readonly("modes", &approx::InverseExperimentReport::modes)
        .def_readonly("fitted_constant", &approx::InverseExperimentReport::fitted_constant)
        .def_readonly("regime", &approx::InverseExperimentReport::regime)
        .def_readonly("regime_bounded", &approx::InverseExperimentReport::regime_bounded)
        .def_property_readonly("t", [](const approx::InverseExperimentReport& r) {
            std::vector<double> t;
            for (const auto& s : r.samples) t.push_back(s.t);
            return as_array(t);
        })
        .def_property_readonly("modulus", [](const approx::InverseExperimentReport& r) {
            std::vector<double> w;
            for (const auto& s : r.samples) w.push_back(s.modulus);
            return as_array(w);
        });

    m.def("kernel_integral", &approx::kernel_integral, py::arg("theta"), py::arg("k"));
    m.def("kernel_lower_bound", &approx::kernel_lower_bound, py::arg("k"));
    m.def("kernel_check", &approx::kernel_check, py::arg("theta"), py::arg("k"));
    m.def("bernstein_check", &approx::bernstein_check, py::arg("symbol"), py::arg("k"), py::arg("h"), py::arg("alpha"),
          py::arg("x"));
    m.def("jackson_check", &approx::jackson_check, py::arg("symbol"), py::arg("k"), py::arg("r"), py::arg("x"));
    m.def(
        "inverse_theorem_experiment",
        [](const approx::ModulusDescriptor& omega, const ScalarSymbol& symbol, unsigned k, std::size_t modes,
           double t_min, double t_max) {
            approx::InverseExperimentOptions options;
            options.t_min = t_min;
            options.t_max = t_max;
            return approx::inverse_theorem_experiment(omega, symbol, k, modes, options);
        },
        py::arg("omega"), py::arg("symbol"), py::arg("k"), py::arg("modes"), py::arg("t_min") = 1.0 / 4096.0,
        py::arg("t_max") = 0.5);

    // Ritz method.
    py::class_<ritz::RitzProblem>(m, "RitzProblem")
        .def_static("dense", &dense_problem, py::arg("eigenvalues"), py::arg("gram"), py::arg("rhs"),
                    py::arg("exact") = py::none())
        .def_property_readonly("truncation_order", &ritz::RitzProblem::truncation_order)
        .def_property_readonly("gram", [](const ritz::RitzProblem& p) { return p.gram->block(p.gram->size()); })
        .def_property_readonly("rhs", [](const ritz::RitzProblem& p) { return as_array(p.rhs.coefficients()); })
        .def("with_reference_solution", &ritz::RitzProblem::with_reference_solution)
        .def("reference_solution", [](const ritz::RitzProblem& p) {
            const auto x = p.reference_solution();
            return as_array(x.coefficients());
        });

    py::class_<ritz::RitzSolution>(m, "RitzSolution")
        .def_readonly("n", &ritz::RitzSolution::n)
        .def_property_readonly("coefficients", [](const ritz::RitzSolution& s) { return as_array(s.coefficients); })
        .def_readonly("energy_error", &ritz::RitzSolution::energy_error)
        .def_readonly("b_energy_error", &ritz::RitzSolution::b_energy_error)
        .def_readonly("residual", &ritz::RitzSolution::residual)
        .def_readonly("galerkin_defect", &ritz::RitzSolution::galerkin_defect);

    py::class_<ritz::EquivalenceConstants>(m, "EquivalenceConstants")
        .def_readonly("c1", &ritz::EquivalenceConstants::c1)
        .def_readonly("c2", &ritz::EquivalenceConstants::c2)
        .def_property_readonly("c3", &ritz::EquivalenceConstants::c3)
        .def_property_readonly("c0", &ritz::EquivalenceConstants::c0);

    py::class_<ritz::SandwichReport>(m, "SandwichReport")
        .def_readonly("n", &ritz::SandwichReport::n)
        .def_readonly("lower", &ritz::SandwichReport::lower)
        .def_readonly("middle", &ritz::SandwichReport::middle)
        .def_readonly("upper", &ritz::SandwichReport::upper)
        .def_property_readonly("satisfied", &ritz::SandwichReport::satisfied);

    py::class_<ritz::CounterexamplePoint>(m, "CounterexamplePoint")
        .def_readonly("n", &ritz::CounterexamplePoint::n)
        .def_readonly("tail_sq", &ritz::CounterexamplePoint::tail_sq)
        .def_readonly("scaled_error", &ritz::CounterexamplePoint::scaled_error)
        .def_readonly("bound_sq", &ritz::CounterexamplePoint::bound_sq)
        .def_readonly("bound_holds", &ritz::CounterexamplePoint::bound_holds);

    py::class_<ritz::PartialSum>(m, "PartialSum")
        .def_readonly("m", &ritz::PartialSum::m)
        .def_readonly("sum", &ritz::PartialSum::sum)
        .def_readonly("log_log", &ritz::PartialSum::log_log);

    py::class_<ritz::CounterexampleReport>(m, "CounterexampleReport")
        .def_readonly("points", &ritz::CounterexampleReport::points)
        .def_readonly("partial_sums", &ritz::CounterexampleReport::partial_sums)
        .def_readonly("bound_holds", &ritz::CounterexampleReport::bound_holds)
        .def_readonly("scaled_error_decreasing", &ritz::CounterexampleReport::scaled_error_decreasing);

    m.def("solve", &ritz::solve, py::arg("problem"), py::arg("n"));
    m.def("equivalence_constants", &ritz::equivalence_constants, py::arg("problem"));
    m.def("sandwich_check", py::overload_cast<const ritz::RitzProblem&, std::size_t>(&ritz::sandwich_check),
          py::arg("problem"), py::arg("n"));
    m.def("apriori_check",
          py::overload_cast<const ritz::RitzProblem&, std::size_t, double, unsigned>(&ritz::apriori_check),
          py::arg("problem"), py::arg("n"), py::arg("alpha"), py::arg("k"));
    m.def("truncation_guard", &ritz::truncation_guard, py::arg("problem"));
    m.def(
        "counterexample",
        [](double alpha, std::size_t truncation, std::vector<std::size_t> n_values, std::vector<std::size_t> marks) {
            return ritz::counterexample(alpha, truncation, n_values, marks);
        },
        py::arg("alpha"), py::arg("truncation"), py::arg("n_values"), py::arg("partial_sum_points"));
    m.def("counterexample_problem", &ritz::counterexample_problem, py::arg("alpha"), py::arg("truncation"));

    // Sturm-Liouville problems on [0, pi].
    py::enum_<sturm::Basis>(m, "Basis")
        .value("NEUMANN_COSINE", sturm::Basis::NeumannCosine)
        .value("DIRICHLET_SINE", sturm::Basis::DirichletSine);

    py::class_<sturm::CosineSeries>(m, "CosineSeries")
        .def(py::init([](std::vector<double> c) { return sturm::CosineSeries{std::move(c)}; }), py::arg("coefficients"))
        .def_readonly("coefficients", &sturm::CosineSeries::coefficients)
        .def("__call__", &sturm::CosineSeries::operator(), py::arg("t"));

    py::class_<sturm::PotentialSpec>(m, "PotentialSpec")
        .def_static("constant", &sturm::PotentialSpec::constant, py::arg("value"))
        .def_static("from_cosine", &sturm::PotentialSpec::from_cosine, py::arg("series"), py::arg("smoothness_order") = 8)
        .def_static("from_function", &sturm::PotentialSpec::from_function, py::arg("q"),
                    py::arg("smoothness_order") = 0);

    py::class_<sturm::BoundaryValueProblem>(m, "BoundaryValueProblem")
        .def(py::init([](sturm::PotentialSpec q, std::size_t truncation, sturm::Basis basis,
                         std::function<double(double)> rhs) {
                 sturm::BoundaryValueProblem bvp;
                 bvp.potential = std::move(q);
                 bvp.truncation = truncation;
                 bvp.basis = basis;
                 bvp.rhs_function = std::move(rhs);
                 return bvp;
             }),
             py::arg("potential"), py::arg("truncation"), py::arg("basis") = sturm::Basis::NeumannCosine,
             py::arg("rhs") = py::none())
        .def_readwrite("truncation", &sturm::BoundaryValueProblem::truncation)
        .def_readwrite("rhs_coefficients", &sturm::BoundaryValueProblem::rhs_coefficients)
        .def_readonly("exact_coefficients", &sturm::BoundaryValueProblem::exact_coefficients);

    py::class_<sturm::RatePoint>(m, "RatePoint")
        .def_readonly("n", &sturm::RatePoint::n)
        .def_readonly("graph_error", &sturm::RatePoint::graph_error)
        .def_readonly("energy_error", &sturm::RatePoint::energy_error)
        .def_readonly("scaled", &sturm::RatePoint::scaled)
        .def_readonly("at_floor", &sturm::RatePoint::at_floor);

    py::class_<sturm::RateReport>(m, "RateReport")
        .def_readonly("truncation", &sturm::RateReport::truncation)
        .def_readonly("points", &sturm::RateReport::points)
        .def_readonly("slope", &sturm::RateReport::slope)
        .def_readonly("energy_slope", &sturm::RateReport::energy_slope)
        .def_readonly("surrogate_decreasing", &sturm::RateReport::surrogate_decreasing)
        .def_readonly("floor_reached", &sturm::RateReport::floor_reached)
        .def_readonly("guard", &sturm::RateReport::guard)
        .def_readonly("rate_satisfied", &sturm::RateReport::rate_satisfied);

    m.def("eigenvalues", &sturm::eigenvalues, py::arg("basis"), py::arg("truncation"));
    m.def("basis_function", &sturm::basis_function, py::arg("basis"), py::arg("index"), py::arg("t"));
    m.def("assemble_gram", &sturm::assemble_gram, py::arg("bvp"));
    m.def("manufacture", py::overload_cast<const sturm::BoundaryValueProblem&, const sturm::CosineSeries&>(&sturm::manufacture),
          py::arg("bvp"), py::arg("x_exact"));
    m.def("manufacture",
          py::overload_cast<const sturm::BoundaryValueProblem&, const std::function<double(double)>&,
                            const std::function<double(double)>&>(&sturm::manufacture),
          py::arg("bvp"), py::arg("x_exact"), py::arg("x_derivative"));
    m.def(
        "rate_experiment",
        [](const sturm::BoundaryValueProblem& bvp, unsigned smoothness, std::vector<std::size_t> n_grid) {
            return sturm::rate_experiment(bvp, smoothness, n_grid);
        },
        py::arg("bvp"), py::arg("smoothness"), py::arg("n_grid"));
    m.def("quartic_bernoulli", &sturm::quartic_bernoulli, py::arg("t"));
}
