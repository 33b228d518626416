#include "oracles.hpp"

#include <cmath>

namespace coda::testing {

double naive_variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size());
}

double brute_total_variance(const Eigen::MatrixXd& x, const std::vector<double>& c) {
    double total = 0.0;
    for (int j = 0; j < x.cols(); ++j) {
        for (int k = j + 1; k < x.cols(); ++k) {
            std::vector<double> plr;
            for (int i = 0; i < x.rows(); ++i) plr.push_back(std::log(x(i, j) / x(i, k)));
            total += c[j] * c[k] * naive_variance(plr);
        }
    }
    return total;
}

std::vector<double> brute_clr_column(const Eigen::MatrixXd& x, const std::vector<double>& c, int j) {
    std::vector<double> out;
    for (int i = 0; i < x.rows(); ++i) {
        double centre = 0.0;
        for (int k = 0; k < x.cols(); ++k) centre += c[k] * std::log(x(i, k));
        out.push_back(std::log(x(i, j)) - centre);
    }
    return out;
}

double per_response_explained_fraction(const Eigen::MatrixXd& x, const std::vector<double>& c,
                                       const Eigen::MatrixXd& predictors) {
    const int rows = static_cast<int>(x.rows());
    Eigen::MatrixXd design(rows, predictors.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(predictors.cols()) = predictors;
    // keep a full-rank subset of the design columns, picked by pivoted QR
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(design);
    pivoted.setThreshold(1e-10);
    Eigen::MatrixXd basis(rows, pivoted.rank());
    for (Eigen::Index r = 0; r < pivoted.rank(); ++r) basis.col(r) = design.col(pivoted.colsPermutation().indices()(r));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);

    double explained = 0.0;
    for (int j = 0; j < x.cols(); ++j) {
        const auto clr = brute_clr_column(x, c, j);
        Eigen::VectorXd y(rows);
        for (int i = 0; i < rows; ++i) y(i) = clr[i];
        const Eigen::VectorXd beta = qr.solve(y);
        const Eigen::VectorXd fitted = basis * beta;
        explained += c[j] * naive_variance(std::vector<double>(fitted.data(), fitted.data() + rows));
    }
    return explained / brute_total_variance(x, c);
}

Eigen::MatrixXd random_positive(std::mt19937_64& rng, int rows, int cols, double spread) {
    std::normal_distribution<double> normal(0.0, spread);
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) out(i, j) = std::exp(normal(rng));
    }
    return out;
}

std::vector<double> random_weights(std::mt19937_64& rng, int parts) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> w(parts);
    double sum = 0.0;
    for (auto& v : w) {
        v = u(rng);
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return w;
}

}  // namespace coda::testing
