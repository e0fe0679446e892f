#include "specritz/corpus.hpp"

#include <algorithm>
#include <random>

namespace specritz {

std::vector<SpectralVector> random_corpus(const CorpusOptions& options) {
    if (options.modes == 0 || !(options.spectral_radius > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "corpus needs modes > 0 and a positive spectral radius");
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<SpectralVector> corpus;
    corpus.reserve(options.count);
    for (std::size_t v = 0; v < options.count; ++v) {
        std::vector<double> lambdas;
        lambdas.reserve(options.modes);
        while (lambdas.size() < options.modes) {
            // 1 - U lies in (0, 1].
            lambdas.push_back(options.spectral_radius * (1.0 - uniform(rng)));
            if (lambdas.size() == options.modes) {
                std::sort(lambdas.begin(), lambdas.end());
                lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
            }
        }
        std::vector<Complex> coefficients(options.modes);
        for (std::size_t k = 0; k < options.modes; ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            coefficients[k] = Complex(re, im) / (1.0 + lambdas[k]);
        }
        corpus.emplace_back(make_spectrum(std::move(lambdas)), std::move(coefficients));
    }
    return corpus;
}

}  // namespace specritz
