#include "runner.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "specritz/approx_theory.hpp"
#include "specritz/corpus.hpp"
#include "specritz/ritz.hpp"
#include "specritz/sturm_liouville.hpp"

namespace specritz::cli {

namespace {

using nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config helpers

template <typename T>
T required(const YAML::Node& node, const std::string& key) {
    const auto value = node[key];
    if (!value) throw ConfigError("missing key '" + key + "'");
    try {
        return value.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

template <typename T>
T optional(const YAML::Node& node, const std::string& key, T fallback) {
    const auto value = node[key];
    if (!value) return fallback;
    try {
        return value.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

// A grid is a list or {from, to, step}; it must be nonempty and strictly increasing.
template <typename T>
std::vector<T> grid(const YAML::Node& node, const std::string& key) {
    const auto value = node[key];
    if (!value) throw ConfigError("missing grid '" + key + "'");
    std::vector<T> out;
    try {
        if (value.IsSequence()) {
            out = value.as<std::vector<T>>();
        } else if (value.IsMap()) {
            const auto from = required<double>(value, "from");
            const auto to = required<double>(value, "to");
            const auto step = required<double>(value, "step");
            if (!(step > 0.0) || to < from) throw ConfigError("grid '" + key + "' has a bad range");
            const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
            for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<T>(from + static_cast<double>(i) * step));
        } else {
            throw ConfigError("grid '" + key + "' must be a list or a range");
        }
    } catch (const YAML::Exception&) {
        throw ConfigError("grid '" + key + "' has the wrong element type");
    }
    if (out.empty()) throw ConfigError("grid '" + key + "' is empty");
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i - 1] < out[i])) throw ConfigError("grid '" + key + "' is not strictly increasing");
    }
    return out;
}

ScalarSymbol symbol_by_name(const std::string& name) {
    if (name == "one") return ScalarSymbol::constant(1.0);
    if (name.rfind("abs^", 0) == 0) {
        double power = 0.0;
        const char* first = name.data() + 4;
        const char* last = name.data() + name.size();
        const auto [ptr, ec] = std::from_chars(first, last, power);
        if (ec == std::errc() && ptr == last && power > 0.0) return ScalarSymbol::abs_power(power);
    }
    throw ConfigError("unknown symbol '" + name + "' (use one or abs^p)");
}

std::vector<ScalarSymbol> symbols(const YAML::Node& node) {
    std::vector<ScalarSymbol> out;
    for (const auto& name : optional<std::vector<std::string>>(node, "symbols", {"one"})) {
        out.push_back(symbol_by_name(name));
    }
    if (out.empty()) throw ConfigError("symbol list is empty");
    return out;
}

// ---------------------------------------------------------------------------
// Output helpers

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const ordered_json& json) { write_text(path, json.dump(2) + "\n"); }

// NaN and infinities are not valid JSON numbers.
ordered_json json_number(double value) {
    if (std::isfinite(value)) return value;
    return format_number(value);
}

std::string plot_script(const std::string& csv, const std::string& title, const std::string& xlabel,
                        const std::string& ylabel, const std::vector<std::pair<int, std::string>>& series,
                        int x_column = 1) {
    std::ostringstream s;
    s << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set title '" << title << "'\n"
      << "set xlabel '" << xlabel << "'\n"
      << "set ylabel '" << ylabel << "'\n"
      << "set key outside right\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output '" << std::filesystem::path(csv).stem().string() << ".png'\n"
      << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) s << ", \\\n     ";
        s << "'" << csv << "' every ::1 using " << x_column << ':' << series[i].first << " with linespoints title '"
          << series[i].second << "'";
    }
    s << '\n';
    return s.str();
}

struct Tally {
    std::size_t pass = 0;
    std::size_t fail = 0;
    double worst_slack = std::numeric_limits<double>::infinity();

    void add(bool ok, double slack) {
        (ok ? pass : fail) += 1;
        worst_slack = std::min(worst_slack, slack);
    }
};

ordered_json summary_header(const std::string& command, std::uint64_t seed, const Tally& tally) {
    ordered_json j;
    j["command"] = command;
    j["seed"] = seed;
    j["pass_count"] = tally.pass;
    j["fail_count"] = tally.fail;
    j["worst_slack"] = json_number(tally.pass + tally.fail ? tally.worst_slack : 0.0);
    return j;
}

std::string bool_field(bool value) { return value ? "1" : "0"; }

// ---------------------------------------------------------------------------
// check-inequalities

struct InequalityRow {
    std::string check;
    unsigned k = 0;
    approx::InequalityReport report;
};

std::vector<InequalityRow> run_kernel(const YAML::Node& node, unsigned jobs) {
    const auto thetas = grid<double>(node, "theta");
    const auto ks = grid<unsigned>(node, "k");
    for (double theta : thetas) {
        if (!(theta >= 1.0)) throw ConfigError("kernel theta must be >= 1");
    }
    std::vector<InequalityRow> rows(thetas.size() * ks.size());
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        const double theta = thetas[i / ks.size()];
        const unsigned k = ks[i % ks.size()];
        rows[i] = {"kernel", k, approx::kernel_check(theta, k)};
    });
    return rows;
}

std::vector<SpectralVector> corpus_from(const YAML::Node& node, std::uint64_t seed) {
    CorpusOptions options;
    options.seed = seed;
    const auto c = node["corpus"];
    if (c) {
        options.count = optional<std::size_t>(c, "count", options.count);
        options.modes = optional<std::size_t>(c, "modes", options.modes);
        options.spectral_radius = optional<double>(c, "radius", options.spectral_radius);
    }
    if (options.count == 0 || options.modes == 0) throw ConfigError("corpus must be nonempty");
    return random_corpus(options);
}

std::vector<InequalityRow> run_bernstein(const YAML::Node& node, std::uint64_t seed, unsigned jobs) {
    const auto corpus = corpus_from(node, seed);
    const auto ks = grid<unsigned>(node, "k");
    const auto hs = grid<double>(node, "h");
    const auto alphas = grid<double>(node, "alpha");
    const auto gs = symbols(node);
    const std::size_t per_vector = ks.size() * hs.size() * alphas.size() * gs.size();
    std::vector<InequalityRow> rows(corpus.size() * per_vector);
    parallel_for(corpus.size(), jobs, [&](std::size_t v) {
        std::size_t i = v * per_vector;
        for (const auto& g : gs)
            for (double alpha : alphas)
                for (unsigned k : ks)
                    for (double h : hs) {
                        auto report = approx::bernstein_check(g, k, h, alpha, corpus[v]);
                        report.context.vector_id = v;
                        rows[i++] = {"bernstein", k, std::move(report)};
                    }
    });
    return rows;
}

std::vector<InequalityRow> run_jackson(const YAML::Node& node, std::uint64_t seed, unsigned jobs) {
    const auto corpus = corpus_from(node, seed);
    const auto ks = grid<unsigned>(node, "k");
    const auto rs = grid<double>(node, "r");
    const auto gs = symbols(node);
    const std::size_t per_vector = ks.size() * rs.size() * gs.size();
    std::vector<InequalityRow> rows(corpus.size() * per_vector);
    parallel_for(corpus.size(), jobs, [&](std::size_t v) {
        std::size_t i = v * per_vector;
        for (const auto& g : gs)
            for (double r : rs)
                for (unsigned k : ks) {
                    auto report = approx::jackson_check(g, k, r, corpus[v]);
                    report.context.vector_id = v;
                    rows[i++] = {"jackson", k, std::move(report)};
                }
    });
    return rows;
}

int check_inequalities(const YAML::Node& config, const std::filesystem::path& out, unsigned jobs, std::ostream& log,
                       std::ostream& err) {
    const auto seed = optional<std::uint64_t>(config, "seed", 7);
    const auto checks = config["checks"];
    if (!checks || !checks.IsMap() || checks.size() == 0) throw ConfigError("missing 'checks' section");

    std::vector<InequalityRow> rows;
    for (const auto& entry : checks) {
        const auto name = entry.first.as<std::string>();
        std::vector<InequalityRow> part;
        if (name == "kernel") part = run_kernel(entry.second, jobs);
        else if (name == "bernstein") part = run_bernstein(entry.second, seed, jobs);
        else if (name == "jackson") part = run_jackson(entry.second, seed, jobs);
        else throw ConfigError("unknown check '" + name + "'");
        log << name << ": " << part.size() << " rows\n";
        rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }

    Tally tally;
    CsvWriter csv(out / "inequalities.csv", {"check", "k", "param", "lhs", "rhs", "slack", "pass"});
    for (const auto& row : rows) {
        const auto& r = row.report;
        const std::vector<std::string> fields{row.check,          std::to_string(row.k), r.context.describe(),
                                              format_number(r.lhs), format_number(r.rhs),  format_number(r.slack),
                                              bool_field(r.satisfied)};
        csv.row(fields);
        tally.add(r.satisfied, r.slack);
        if (!r.satisfied) {
            err << "violation: " << fields[0] << ",k=" << fields[1] << "," << fields[2] << " lhs=" << fields[3]
                << " rhs=" << fields[4] << '\n';
        }
    }

    auto summary = summary_header("check-inequalities", seed, tally);
    summary["slopes"] = ordered_json::object();
    summary["guards"] = ordered_json::object();
    write_json(out / "summary.json", summary);
    write_text(out / "inequalities.plt",
               "set datafile separator ','\n"
               "set title 'inequality slack'\n"
               "set xlabel 'row'\nset ylabel 'rhs - lhs'\n"
               "set terminal pngcairo size 900,600\nset output 'inequalities.png'\n"
               "plot 'inequalities.csv' every ::1 using 0:6 with points pt 7 ps 0.3 title 'slack'\n");
    log << tally.pass << " passed, " << tally.fail << " failed\n";
    return tally.fail == 0 ? kOk : kViolation;
}

// ---------------------------------------------------------------------------
// ritz-run

sturm::BoundaryValueProblem problem_from(const YAML::Node& config) {
    const auto node = config["problem"];
    if (!node) throw ConfigError("missing 'problem' section");
    const auto kind = required<std::string>(node, "kind");

    sturm::BoundaryValueProblem bvp;
    bvp.truncation = required<std::size_t>(config, "truncation");
    if (bvp.truncation < 2) throw ConfigError("truncation must be at least 2");
    const auto basis = optional<std::string>(node, "basis", "neumann");
    if (basis == "neumann") bvp.basis = sturm::Basis::NeumannCosine;
    else if (basis == "dirichlet") bvp.basis = sturm::Basis::DirichletSine;
    else throw ConfigError("basis must be neumann or dirichlet");

    if (kind == "constant-q") {
        bvp.potential = sturm::PotentialSpec::constant(optional<double>(node, "q", 1.0));
    } else if (kind == "cosine-q") {
        bvp.potential = sturm::PotentialSpec::from_cosine(sturm::CosineSeries{{2.0, 0.0, 1.0}});
    } else if (kind == "custom") {
        const auto coefficients = required<std::vector<double>>(node, "potential");
        if (coefficients.empty()) throw ConfigError("custom potential needs coefficients");
        bvp.potential = sturm::PotentialSpec::from_cosine(sturm::CosineSeries{coefficients});
    } else {
        throw ConfigError("unknown problem kind '" + kind + "'");
    }

    const auto solution = node["solution"];
    const auto rhs = node["rhs"];
    if (static_cast<bool>(solution) == static_cast<bool>(rhs)) {
        throw ConfigError("problem needs exactly one of 'solution' or 'rhs'");
    }
    if (rhs) {
        const auto rhs_kind = required<std::string>(rhs, "kind");
        if (rhs_kind == "quartic-bernoulli") {
            bvp.rhs_function = sturm::quartic_bernoulli;
        } else if (rhs_kind == "cosine") {
            const sturm::CosineSeries y{required<std::vector<double>>(rhs, "coefficients")};
            bvp.rhs_function = [y](double t) { return y(t); };
        } else {
            throw ConfigError("unknown rhs kind '" + rhs_kind + "'");
        }
        return bvp;
    }

    if (bvp.basis != sturm::Basis::NeumannCosine) throw ConfigError("manufactured solutions need the neumann basis");
    const auto solution_kind = required<std::string>(solution, "kind");
    if (solution_kind == "cosine") {
        return sturm::manufacture(bvp, sturm::CosineSeries{required<std::vector<double>>(solution, "coefficients")});
    }
    if (solution_kind == "power-decay") {
        const auto exponent = required<double>(solution, "exponent");
        const auto degree = optional<std::size_t>(solution, "degree", bvp.truncation - 1);
        sturm::CosineSeries x;
        x.coefficients.assign(degree + 1, 0.0);
        for (std::size_t m = 1; m <= degree; ++m) x.coefficients[m] = std::pow(static_cast<double>(m), -exponent);
        return sturm::manufacture(bvp, x);
    }
    if (solution_kind == "rational") {
        const auto shift = required<double>(solution, "shift");
        if (!(shift > 1.0)) throw ConfigError("rational solution needs shift > 1");
        return sturm::manufacture(
            bvp, [shift](double t) { return 1.0 / (shift + std::cos(t)); },
            [shift](double t) { return std::sin(t) / ((shift + std::cos(t)) * (shift + std::cos(t))); });
    }
    throw ConfigError("unknown solution kind '" + solution_kind + "'");
}

struct RitzRow {
    ritz::RitzSolution solution;
    ritz::SandwichReport sandwich;
    approx::InequalityReport apriori;
};

double tail_slope(const std::vector<std::size_t>& ns, const std::vector<double>& errors, double floor) {
    std::vector<double> x, y;
    for (std::size_t i = ns.size() / 2; i < ns.size(); ++i) {
        if (errors[i] > floor) {
            x.push_back(static_cast<double>(ns[i]));
            y.push_back(errors[i]);
        }
    }
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return sturm::log_log_slope(x, y);
}

int ritz_run(const YAML::Node& config, const std::filesystem::path& out, unsigned jobs, std::ostream& log,
             std::ostream& err) {
    const auto seed = optional<std::uint64_t>(config, "seed", 0);
    const auto bvp = problem_from(config);
    const auto ns = grid<std::size_t>(config, "n_grid");
    const auto alpha = optional<double>(config, "alpha", 1.0);
    const auto k = optional<unsigned>(config, "k", 1);
    if (ns.front() < 1 || ns.back() >= bvp.truncation) throw ConfigError("n_grid must lie in [1, truncation)");
    if (!(alpha >= 1.0) || k < 1) throw ConfigError("a priori estimate needs alpha >= 1 and k >= 1");

    const auto problem = sturm::assemble_gram(bvp).with_reference_solution();
    const auto constants = ritz::equivalence_constants(problem);
    log << "c1=" << format_number(constants.c1) << " c2=" << format_number(constants.c2) << '\n';

    std::vector<RitzRow> rows(ns.size(), RitzRow{ritz::solve(problem, ns.front()), {}, {}});
    parallel_for(ns.size(), jobs, [&](std::size_t i) {
        rows[i] = {ritz::solve(problem, ns[i]), ritz::sandwich_check(problem, ns[i], constants),
                   ritz::apriori_check(problem, ns[i], alpha, k, constants)};
    });

    Tally tally;
    CsvWriter csv(out / "ritz_errors.csv",
                  {"n", "energy_error", "b_energy_error", "residual", "sandwich_lo", "sandwich_hi", "apriori_rhs"});
    std::vector<double> energy, b_energy;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto& r = rows[i];
        csv.row({std::to_string(ns[i]), format_number(r.solution.energy_error), format_number(r.solution.b_energy_error),
                 format_number(r.solution.residual), format_number(r.sandwich.lower), format_number(r.sandwich.upper),
                 format_number(r.apriori.rhs)});
        energy.push_back(r.solution.energy_error);
        b_energy.push_back(r.solution.b_energy_error);
        tally.add(r.sandwich.satisfied(), r.sandwich.slack());
        tally.add(r.apriori.satisfied, r.apriori.slack);
        if (!r.sandwich.satisfied()) err << "violation: sandwich at n=" << ns[i] << '\n';
        if (!r.apriori.satisfied) err << "violation: a priori bound at n=" << ns[i] << '\n';
    }

    const double scale = ritz::energy_norm(*problem.gram, *problem.exact);
    const double floor = 1e-12 * scale;
    const double guard = ritz::truncation_guard(problem);
    double smallest = std::numeric_limits<double>::infinity();
    for (double e : energy)
        if (e > floor) smallest = std::min(smallest, e);
    const bool guard_ok = !std::isfinite(smallest) || guard < 0.01 * smallest;

    auto summary = summary_header("ritz-run", seed, tally);
    ordered_json slopes;
    slopes["energy"] = json_number(tail_slope(ns, energy, floor));
    slopes["b_energy"] = json_number(tail_slope(ns, b_energy, floor));
    ordered_json guards;
    guards["energy"] = json_number(guard);
    guards["smallest_error"] = json_number(std::isfinite(smallest) ? smallest : 0.0);
    guards["truncation"] = bvp.truncation;

    int status = tally.fail == 0 ? kOk : kViolation;
    if (!guard_ok) {
        err << "truncation guard: ||x_N - x_N/2||_+ = " << format_number(guard) << " is not below 1% of "
            << format_number(smallest) << "; increase truncation\n";
        status = kNumericalGuard;
    }

    if (const auto rate = config["rate"]) {
        const auto smoothness = required<unsigned>(rate, "smoothness");
        const auto rate_grid = grid<std::size_t>(rate, "n_grid");
        const auto report = sturm::rate_experiment(bvp, smoothness, rate_grid);
        slopes["rate_graph"] = json_number(report.slope);
        slopes["rate_energy"] = json_number(report.energy_slope);
        guards["rate"] = json_number(report.guard);
        guards["rate_smallest_error"] = json_number(report.smallest_error);
        guards["rate_truncation"] = report.truncation;
        summary["surrogate_decreasing"] = report.surrogate_decreasing;
        summary["floor_reached"] = report.floor_reached;
        summary["rate_satisfied"] = report.rate_satisfied;

        CsvWriter rate_csv(out / "rate.csv", {"n", "graph_error", "energy_error", "scaled", "at_floor"});
        for (const auto& p : report.points) {
            rate_csv.row({std::to_string(p.n), format_number(p.graph_error), format_number(p.energy_error),
                          format_number(p.scaled), bool_field(p.at_floor)});
        }
        if (!report.rate_satisfied) {
            err << "violation: rate slope " << format_number(report.slope) << " for k=" << smoothness << '\n';
            if (status == kOk) status = kViolation;
        }
    }
    summary["slopes"] = slopes;
    summary["guards"] = guards;
    write_json(out / "rates.json", summary);
    write_text(out / "ritz_errors.plt", plot_script("ritz_errors.csv", "Ritz errors", "n", "error",
                                                    {{2, "energy"}, {3, "B-energy"}, {7, "a priori bound"}}));
    log << tally.pass << " checks passed, " << tally.fail << " failed\n";
    return status;
}

// ---------------------------------------------------------------------------
// counterexample

int counterexample(const YAML::Node& config, const std::filesystem::path& out, std::ostream& log, std::ostream& err) {
    const auto alpha = optional<double>(config, "alpha", 1.0);
    const auto truncation = required<std::size_t>(config, "truncation");
    const auto ns = grid<std::size_t>(config, "n_grid");
    const auto marks = grid<std::size_t>(config, "partial_sums");
    const auto min_growth = optional<double>(config, "min_growth", 0.15);
    if (!(alpha >= 1.0)) throw ConfigError("counterexample needs alpha >= 1");
    if (ns.front() < 2 || ns.back() >= truncation) throw ConfigError("n_grid must lie in [2, truncation)");
    if (marks.front() < 2 || marks.back() > truncation) throw ConfigError("partial_sums must lie in [2, truncation]");

    const auto report = ritz::counterexample(alpha, truncation, ns, marks);

    Tally tally;
    CsvWriter csv(out / "counterexample.csv", {"n", "scaled"});
    for (const auto& p : report.points) {
        csv.row({std::to_string(p.n), format_number(p.scaled_error)});
        tally.add(p.bound_holds, p.bound_sq - p.tail_sq);
        if (!p.bound_holds) err << "violation: tail bound at n=" << p.n << '\n';
    }
    CsvWriter sums(out / "partial_sums.csv", {"m", "sum", "log_log"});
    for (const auto& s : report.partial_sums) {
        sums.row({std::to_string(s.m), format_number(s.sum), format_number(s.log_log)});
    }
    const double growth = report.partial_sums.back().sum - report.partial_sums.front().sum;
    const bool growth_ok = report.partial_sums.size() < 2 || growth >= min_growth;
    tally.add(report.scaled_error_decreasing, 0.0);
    if (!report.scaled_error_decreasing) err << "violation: scaled error not decreasing\n";
    if (!growth_ok) err << "violation: partial sums grew by " << format_number(growth) << '\n';

    auto summary = summary_header("counterexample", optional<std::uint64_t>(config, "seed", 0), tally);
    summary["slopes"] = ordered_json::object();
    summary["guards"] = ordered_json::object();
    summary["alpha"] = alpha;
    summary["truncation"] = truncation;
    summary["partial_sum_growth"] = json_number(growth);
    summary["scaled_error_decreasing"] = report.scaled_error_decreasing;
    write_json(out / "summary.json", summary);
    write_text(out / "counterexample.plt",
               plot_script("counterexample.csv", "scaled Ritz error", "n", "lambda_n^(alpha-1/2) error", {{2, "scaled"}}));
    log << report.points.size() << " points, partial-sum growth " << format_number(growth) << '\n';
    return tally.fail == 0 && growth_ok ? kOk : kViolation;
}

// ---------------------------------------------------------------------------
// inverse-rate

int inverse_rate(const YAML::Node& config, const std::filesystem::path& out, unsigned jobs, std::ostream& log,
                 std::ostream& err) {
    const auto exponents = grid<double>(config, "exponents");
    const auto modes = grid<std::size_t>(config, "modes");
    const auto k = optional<unsigned>(config, "k", 1);
    const auto symbol = symbol_by_name(optional<std::string>(config, "symbol", "one"));
    const auto stability = optional<double>(config, "stability", 0.2);
    approx::InverseExperimentOptions options;
    options.t_min = optional<double>(config, "t_min", options.t_min);
    options.t_max = optional<double>(config, "t_max", options.t_max);
    options.points_per_octave = optional<unsigned>(config, "points_per_octave", options.points_per_octave);
    options.regime_t_max = optional<double>(config, "regime_t_max", options.regime_t_max);
    if (k < 1) throw ConfigError("k must be >= 1");

    std::vector<approx::InverseExperimentReport> reports(exponents.size() * modes.size());
    parallel_for(reports.size(), jobs, [&](std::size_t i) {
        reports[i] = approx::inverse_theorem_experiment(approx::ModulusDescriptor::power(exponents[i / modes.size()]),
                                                        symbol, k, modes[i % modes.size()], options);
    });

    Tally tally;
    CsvWriter csv(out / "inverse_rate.csv",
                  {"exponent", "modes", "t", "modulus", "lemma_term", "dini_term", "ratio", "regime_ratio"});
    ordered_json fitted = ordered_json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const double a = exponents[i / modes.size()];
        for (const auto& s : r.samples) {
            csv.row({format_number(a), std::to_string(r.modes), format_number(s.t), format_number(s.modulus),
                     format_number(s.bound.lemma_term), format_number(s.bound.dini_term), format_number(s.ratio),
                     format_number(s.regime_ratio)});
        }
        const bool finite = std::isfinite(r.fitted_constant);
        tally.add(finite && r.regime_bounded, 0.0);
        if (!r.regime_bounded) {
            err << "violation: regime " << approx::to_string(r.regime) << " unbounded for a=" << format_number(a)
                << " N=" << r.modes << '\n';
        }
        ordered_json entry;
        entry["exponent"] = a;
        entry["modes"] = r.modes;
        entry["regime"] = approx::to_string(r.regime);
        entry["fitted_constant"] = json_number(r.fitted_constant);
        entry["regime_bounded"] = r.regime_bounded;
        fitted.push_back(entry);
    }
    ordered_json stable = ordered_json::array();
    for (std::size_t e = 0; e < exponents.size(); ++e) {
        const double base = reports[e * modes.size()].fitted_constant;
        double drift = 0.0;
        for (std::size_t m = 1; m < modes.size(); ++m) {
            drift = std::max(drift, std::abs(reports[e * modes.size() + m].fitted_constant / base - 1.0));
        }
        const bool ok = drift <= stability;
        tally.add(ok, stability - drift);
        if (!ok) err << "violation: fitted constant drifts by " << format_number(drift) << " for a=" << exponents[e] << '\n';
        stable.push_back({{"exponent", exponents[e]}, {"relative_drift", json_number(drift)}, {"stable", ok}});
    }

    auto summary = summary_header("inverse-rate", optional<std::uint64_t>(config, "seed", 0), tally);
    summary["slopes"] = ordered_json::object();
    summary["guards"] = ordered_json::object();
    summary["fitted"] = fitted;
    summary["stability"] = stable;
    write_json(out / "summary.json", summary);
    write_text(out / "inverse_rate.plt",
               plot_script("inverse_rate.csv", "modulus over classification reference", "t", "ratio", {{8, "regime ratio"}}, 3));
    log << reports.size() << " experiments, " << tally.fail << " failed\n";
    return tally.fail == 0 ? kOk : kViolation;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buffer, ptr);
}

int run(const Invocation& invocation, std::ostream& log, std::ostream& err) {
    YAML::Node config;
    std::filesystem::path out;
    try {
        config = YAML::LoadFile(invocation.config.string());
        if (!config.IsMap()) throw ConfigError("config must be a mapping");
        const auto declared = optional<std::string>(config, "command", invocation.command);
        if (declared != invocation.command) {
            throw ConfigError("config is for '" + declared + "', not '" + invocation.command + "'");
        }
        if (invocation.out) out = *invocation.out;
        else if (config["output"]) out = required<std::string>(config, "output");
        else throw ConfigError("no output directory (set 'output' or pass --out)");
        if (invocation.jobs == 0) throw ConfigError("--jobs must be positive");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const YAML::Exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        std::filesystem::create_directories(out);
        const unsigned jobs = invocation.jobs;
        if (invocation.command == "check-inequalities") return check_inequalities(config, out, jobs, log, err);
        if (invocation.command == "ritz-run") return ritz_run(config, out, jobs, log, err);
        if (invocation.command == "counterexample") return counterexample(config, out, log, err);
        if (invocation.command == "inverse-rate") return inverse_rate(config, out, jobs, log, err);
        err << "config error: unknown command '" << invocation.command << "'\n";
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.code()) {
            case ErrorCode::InvalidArgument:
            case ErrorCode::SymbolHypothesisViolated:
            case ErrorCode::ModulusHypothesisViolated:
            case ErrorCode::DiniConditionViolated:
            case ErrorCode::BoundaryConditionViolated:
            case ErrorCode::InsufficientData:
            case ErrorCode::InsufficientGrid:
                return kConfigError;
            case ErrorCode::TruncationGuardFailed:
            case ErrorCode::TruncationTooSmall:
                err << "increase the truncation order N\n";
                return kNumericalGuard;
            default:
                return kNumericalGuard;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalGuard;
    }
}

}  // namespace specritz::cli
