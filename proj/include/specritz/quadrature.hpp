#pragma once

#include <cstddef>
#include <functional>

namespace specritz {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
};

struct SimpsonOptions {
    double abs_tol = 1e-10;
    std::size_t max_intervals = std::size_t{1} << 20;
    /// Uniform panels the interval is cut into before adaptation starts.
    std::size_t initial_panels = 8;
};

/// Adaptive Simpson rule with Richardson correction. The tolerance is shared
/// between the two halves at every split, so the reported error estimate is a
/// sum of local estimates over the accepted intervals.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const SimpsonOptions& options = {});

}  // namespace specritz
