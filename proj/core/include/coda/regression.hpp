#ifndef CODA_REGRESSION_HPP
#define CODA_REGRESSION_HPP

#include "coda/composition.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace coda {

/// Singular values below this fraction of the largest are treated as zero
/// when deciding the rank of the predictor matrix.
inline constexpr double kRankTolerance = 1e-10;

/**
 * @brief Least-squares fit of every CLR column on a common set of predictors.
 *
 * Coefficients are the minimum-norm solution on the retained column space,
 * so collinear predictors share their effect rather than failing the fit.
 * Rows of `coefficients` for dropped (zero-variance) predictors are zero.
 */
struct RegressionFit {
    Eigen::VectorXd intercepts;     // J
    Eigen::MatrixXd coefficients;   // P x J
    double fitted_variance = 0.0;   // sum_j c_j var(fitted_j)
    double residual_variance = 0.0; // sum_j c_j var(residual_j)
    double total_variance = 0.0;    // TotLogVar
    double explained_fraction = 0.0;
    std::size_t rank = 0;
    std::vector<std::size_t> dropped_predictors;
    std::vector<std::string> warnings;

    double explained_percent() const noexcept { return 100.0 * explained_fraction; }
};

/**
 * @brief Centred CLR responses of one dataset, reusable across many fits.
 *
 * Candidate scoring fits the same responses against hundreds of predictor
 * sets; this holds the centred response matrix and the total variance so
 * each fit only pays for the predictor decomposition and one projection.
 */
class ResponseModel {
public:
    ResponseModel(const CompositionMatrix& m, const PartWeights& w);

    const CompositionMatrix& data() const noexcept { return data_; }
    const PartWeights& weights() const noexcept { return weights_; }
    double total_variance() const noexcept { return total_; }

    /// Full fit; throws DegenerateError when the total variance is zero.
    RegressionFit fit(std::span<const LogratioSpec> predictors) const;
    RegressionFit fit_matrix(const Eigen::MatrixXd& predictors) const;

    /// Explained fraction only (no coefficients).
    double explained_fraction(std::span<const LogratioSpec> predictors) const;

private:
    CompositionMatrix data_;
    PartWeights weights_;
    Eigen::MatrixXd centred_;  // I x J, column-centred CLRs
    Eigen::VectorXd means_;    // J column means of the CLRs
    double total_;
};

/// One-shot fit: CLR responses of `m` regressed on the given logratios.
RegressionFit explained_variance(const CompositionMatrix& m, const PartWeights& w,
                                 std::span<const LogratioSpec> predictors);

}  // namespace coda

#endif  // CODA_REGRESSION_HPP
