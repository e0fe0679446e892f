#include <CLI11.hpp>

#include <iostream>

#include "runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral Ritz experiment runner"};
    app.require_subcommand(1);

    specritz::cli::Invocation invocation;
    std::string out;
    for (const char* name : {"check-inequalities", "ritz-run", "counterexample", "inverse-rate"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("config", invocation.config, "YAML experiment file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->add_option("--jobs", invocation.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->callback([&invocation, sub] { invocation.command = sub->get_name(); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : specritz::cli::kConfigError;
    }
    if (!out.empty()) invocation.out = out;
    return specritz::cli::run(invocation, std::cout, std::cerr);
}
