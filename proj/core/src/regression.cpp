#include "coda/regression.hpp"

#include "coda/error.hpp"
#include "coda/variance.hpp"

#include <algorithm>
#include <cmath>

namespace coda {

namespace {

struct Projection {
    Eigen::MatrixXd basis;        // I x r orthonormal basis of the predictor column space
    Eigen::MatrixXd solve;        // P' x I, maps centred responses to coefficients
    std::vector<Eigen::Index> kept;
    std::vector<std::size_t> dropped;
};

Projection project_predictors(const Eigen::MatrixXd& predictors) {
    Projection out;
    const Eigen::Index rows = predictors.rows();
    for (Eigen::Index p = 0; p < predictors.cols(); ++p) {
        const Eigen::VectorXd col = predictors.col(p);
        const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
        const double sd = std::sqrt(variance_population(col));
        if (!std::isfinite(sd)) throw InputError("predictor " + std::to_string(p + 1) + " has non-finite values");
        if (sd <= 1e-12 * scale) {
            out.dropped.push_back(static_cast<std::size_t>(p));
        } else {
            out.kept.push_back(p);
        }
    }
    if (out.kept.empty()) {
        out.basis.resize(rows, 0);
        out.solve.resize(0, rows);
        return out;
    }
    Eigen::MatrixXd x(rows, static_cast<Eigen::Index>(out.kept.size()));
    for (std::size_t n = 0; n < out.kept.size(); ++n) x.col(static_cast<Eigen::Index>(n)) = predictors.col(out.kept[n]);
    x.rowwise() -= x.colwise().mean();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index rank = 0;
    const double cutoff = sv.size() > 0 ? kRankTolerance * sv(0) : 0.0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;

    out.basis = svd.matrixU().leftCols(rank);
    out.solve = svd.matrixV().leftCols(rank) * sv.head(rank).cwiseInverse().asDiagonal() * out.basis.transpose();
    return out;
}

}  // namespace

ResponseModel::ResponseModel(const CompositionMatrix& m, const PartWeights& w)
    : data_(m), weights_(w), centred_(clr_matrix(m, w)), means_(centred_.colwise().mean().transpose()), total_(0.0) {
    centred_.rowwise() -= means_.transpose();
    total_ = weighted_column_variance(centred_, weights_.values());
}

RegressionFit ResponseModel::fit_matrix(const Eigen::MatrixXd& predictors) const {
    if (!(total_ > 0.0)) throw DegenerateError("total logratio variance is zero; nothing to explain");
    if (predictors.rows() != centred_.rows()) throw InputError("predictor rows do not match samples");
    const auto samples = static_cast<double>(centred_.rows());
    const Eigen::VectorXd& c = weights_.values();

    const Projection proj = project_predictors(predictors);
    RegressionFit fit;
    fit.total_variance = total_;
    fit.rank = static_cast<std::size_t>(proj.basis.cols());
    fit.dropped_predictors = proj.dropped;
    for (auto p : proj.dropped) {
        fit.warnings.push_back("predictor " + std::to_string(p + 1) + " has zero variance and was dropped");
    }

    const Eigen::MatrixXd fitted = proj.basis * (proj.basis.transpose() * centred_);
    const Eigen::MatrixXd residual = centred_ - fitted;
    CompensatedSum fitted_sum;
    CompensatedSum residual_sum;
    for (Eigen::Index j = 0; j < centred_.cols(); ++j) {
        fitted_sum.add(c(j) * fitted.col(j).squaredNorm() / samples);
        residual_sum.add(c(j) * residual.col(j).squaredNorm() / samples);
    }
    fit.fitted_variance = fitted_sum.value();
    fit.residual_variance = residual_sum.value();
    fit.explained_fraction = fit.fitted_variance / total_;

    fit.coefficients = Eigen::MatrixXd::Zero(predictors.cols(), centred_.cols());
    const Eigen::MatrixXd beta = proj.solve * centred_;
    Eigen::VectorXd predictor_means = Eigen::VectorXd::Zero(predictors.cols());
    for (std::size_t n = 0; n < proj.kept.size(); ++n) {
        const Eigen::Index p = proj.kept[n];
        fit.coefficients.row(p) = beta.row(static_cast<Eigen::Index>(n));
        predictor_means(p) = predictors.col(p).mean();
    }
    fit.intercepts = means_ - fit.coefficients.transpose() * predictor_means;
    return fit;
}

RegressionFit ResponseModel::fit(std::span<const LogratioSpec> predictors) const {
    return fit_matrix(logratio_matrix(data_, predictors));
}

double ResponseModel::explained_fraction(std::span<const LogratioSpec> predictors) const {
    if (!(total_ > 0.0)) throw DegenerateError("total logratio variance is zero; nothing to explain");
    if (predictors.empty()) return 0.0;
    const Projection proj = project_predictors(logratio_matrix(data_, predictors));
    const Eigen::MatrixXd scores = proj.basis.transpose() * centred_;  // r x J
    CompensatedSum fitted;
    for (Eigen::Index j = 0; j < scores.cols(); ++j) fitted.add(weights_.values()(j) * scores.col(j).squaredNorm());
    return fitted.value() / static_cast<double>(centred_.rows()) / total_;
}

RegressionFit explained_variance(const CompositionMatrix& m, const PartWeights& w,
                                 std::span<const LogratioSpec> predictors) {
    return ResponseModel(m, w).fit(predictors);
}

}  // namespace coda
