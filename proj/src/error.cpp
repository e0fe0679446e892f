#include "specritz/error.hpp"

namespace specritz {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::FunctionalCalculusOverflow: return "functional calculus overflow";
        case ErrorCode::SymbolHypothesisViolated: return "symbol hypothesis violated";
        case ErrorCode::BoundDegenerate: return "bound degenerate at r";
        case ErrorCode::ModulusHypothesisViolated: return "modulus hypothesis violated";
        case ErrorCode::DiniConditionViolated: return "Dini condition violated";
        case ErrorCode::TruncationTooSmall: return "truncation too small";
        case ErrorCode::QuadratureNotConverged: return "quadrature not converged";
        case ErrorCode::GramNotPositiveDefinite: return "Gram block not positive definite";
        case ErrorCode::PencilIterationFailed: return "pencil iteration failed";
        case ErrorCode::InsufficientData: return "insufficient data";
        case ErrorCode::InsufficientGrid: return "insufficient grid";
        case ErrorCode::BoundaryConditionViolated: return "boundary condition violated";
        case ErrorCode::TruncationGuardFailed: return "truncation guard failed";
    }
    return "unknown error";
}

}  // namespace specritz
