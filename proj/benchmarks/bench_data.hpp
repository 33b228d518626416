#ifndef CODA_BENCH_DATA_HPP
#define CODA_BENCH_DATA_HPP

#include "coda/composition.hpp"

#include <random>
#include <string>

namespace coda::bench {

inline CompositionMatrix lognormal_composition(int rows, int cols, unsigned seed = 7) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) x(i, j) = std::exp(normal(rng));
    std::vector<std::string> names;
    for (int j = 0; j < cols; ++j) names.push_back("p" + std::to_string(j));
    return close(CompositionMatrix(x, names));
}

}  // namespace coda::bench

#endif
