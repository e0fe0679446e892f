#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "specritz/spectral_core.hpp"

namespace specritz {

struct CorpusOptions {
    std::size_t count = 1000;
    std::size_t modes = 128;
    double spectral_radius = 100.0;
    std::uint64_t seed = 7;
};

/// Random vectors for inequality sweeps. Each vector gets its own spectrum of
/// sorted uniform eigenvalues in (0, spectral_radius] and complex Gaussian
/// coefficients damped by 1 / (1 + lambda). Deterministic for a given seed.
std::vector<SpectralVector> random_corpus(const CorpusOptions& options = {});

}  // namespace specritz
