#ifndef CODA_VARIANCE_HPP
#define CODA_VARIANCE_HPP

#include "coda/composition.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace coda {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

/// Variance with divisor I (not I-1). Throws InputError on an empty vector.
double variance_population(std::span<const double> v);
double variance_population(const Eigen::VectorXd& v);

enum class VarianceMethod { Pairs, Clr };

struct PairVariance {
    PartIndex numerator;
    PartIndex denominator;
    double variance;
};

/**
 * @brief Total (weighted) logratio variance and its building blocks.
 *
 * `total` is sum_{j<k} c_j c_k var_jk, or equivalently sum_j c_j var_j over
 * the weighted CLRs. The pairs method fills `per_pair` (J(J-1)/2 entries,
 * j<k order); the CLR method fills `per_clr` (J entries) only.
 */
struct VarianceReport {
    double total = 0.0;
    std::vector<double> per_clr;
    std::optional<std::vector<PairVariance>> per_pair;
    PartWeights weights_used;
    std::size_t n_samples = 0;
    VarianceMethod method = VarianceMethod::Clr;
};

VarianceReport total_logratio_variance(const CompositionMatrix& m, const PartWeights& w,
                                       VarianceMethod method = VarianceMethod::Clr);

/// Weighted sum of column population variances: sum_j c_j var(col_j).
double weighted_column_variance(const Eigen::MatrixXd& columns, const Eigen::VectorXd& weights);

/// 100 * explained / total. Throws DegenerateError for a zero total and
/// InputError when explained lies outside [0, total] beyond a 1e-9 slack.
double explained_percentage(double explained, const VarianceReport& report);

}  // namespace coda

#endif  // CODA_VARIANCE_HPP
