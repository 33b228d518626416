#include "coda/variance.hpp"

#include "coda/error.hpp"

#include <cmath>

namespace coda {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        correction_ += (sum_ - t) + x;
    } else {
        correction_ += (x - t) + sum_;
    }
    sum_ = t;
}

double variance_population(std::span<const double> v) {
    if (v.empty()) throw InputError("variance of an empty vector");
    CompensatedSum sum;
    for (double x : v) sum.add(x);
    const double mean = sum.value() / static_cast<double>(v.size());
    CompensatedSum squares;
    for (double x : v) squares.add((x - mean) * (x - mean));
    return squares.value() / static_cast<double>(v.size());
}

double variance_population(const Eigen::VectorXd& v) {
    return variance_population(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

double weighted_column_variance(const Eigen::MatrixXd& columns, const Eigen::VectorXd& weights) {
    CompensatedSum total;
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
        const Eigen::VectorXd col = columns.col(j);
        total.add(weights(j) * variance_population(col));
    }
    return total.value();
}

VarianceReport total_logratio_variance(const CompositionMatrix& m, const PartWeights& w, VarianceMethod method) {
    if (w.size() != m.parts()) throw InputError("weights do not match the number of parts");
    VarianceReport report{0.0, {}, std::nullopt, w, m.samples(), method};

    if (method == VarianceMethod::Clr) {
        const Eigen::MatrixXd clr = clr_matrix(m, w);
        CompensatedSum total;
        report.per_clr.reserve(m.parts());
        for (Eigen::Index j = 0; j < clr.cols(); ++j) {
            const Eigen::VectorXd col = clr.col(j);
            const double var = variance_population(col);
            report.per_clr.push_back(var);
            total.add(w[static_cast<std::size_t>(j)] * var);
        }
        report.total = total.value();
        return report;
    }

    if (!m.strictly_positive()) {
        // reuse the CLR path's error message
        (void)clr_matrix(m, w);
    }
    const Eigen::MatrixXd logs = m.values().array().log().matrix();
    const std::size_t J = m.parts();
    std::vector<PairVariance> pairs;
    pairs.reserve(J * (J - 1) / 2);
    CompensatedSum total;
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = j + 1; k < J; ++k) {
            const Eigen::VectorXd plr =
                logs.col(static_cast<Eigen::Index>(j)) - logs.col(static_cast<Eigen::Index>(k));
            const double var = variance_population(plr);
            pairs.push_back({j, k, var});
            total.add(w[j] * w[k] * var);
        }
    }
    report.total = total.value();
    report.per_pair = std::move(pairs);
    return report;
}

double explained_percentage(double explained, const VarianceReport& report) {
    if (!(report.total > 0.0)) throw DegenerateError("total logratio variance is zero; percentages are undefined");
    const double slack = 1e-9 * report.total;
    if (explained < -slack || explained > report.total + slack) {
        throw InputError("explained variance outside [0, total]");
    }
    return 100.0 * explained / report.total;
}

}  // namespace coda
