#pragma once

#include <stdexcept>
#include <string>

namespace specritz {

enum class ErrorCode {
    InvalidArgument,
    FunctionalCalculusOverflow,
    SymbolHypothesisViolated,
    BoundDegenerate,
    ModulusHypothesisViolated,
    DiniConditionViolated,
    TruncationTooSmall,
    QuadratureNotConverged,
    GramNotPositiveDefinite,
    PencilIterationFailed,
    InsufficientData,
    InsufficientGrid,
    BoundaryConditionViolated,
    TruncationGuardFailed,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace specritz
