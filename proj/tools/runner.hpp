#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace specritz::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kViolation = 2, kNumericalGuard = 3 };

struct Invocation {
    std::string command;  // check-inequalities | ritz-run | counterexample | inverse-rate
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    unsigned jobs = 1;
};

/// Runs one experiment and writes its tables, summary and plot script.
/// Progress goes to `log`, violations and errors to `err`.
int run(const Invocation& invocation, std::ostream& log, std::ostream& err);

/// 17 significant digits with a '.' decimal point; nan and inf spelled out.
std::string format_number(double value);

}  // namespace specritz::cli
