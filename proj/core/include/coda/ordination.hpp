#ifndef CODA_ORDINATION_HPP
#define CODA_ORDINATION_HPP

#include "coda/composition.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coda {

/// Which side of the biplot carries the singular values.
enum class BiplotScaling {
    RowPrincipal,     // rows principal, variables standard (form biplot)
    ColumnPrincipal,  // rows standard, variables principal (covariance biplot)
};

struct GroupHull {
    std::string group;
    std::vector<std::size_t> vertices;  // sample indices, counter-clockwise
};

/**
 * @brief Coordinates of a low-rank decomposition.
 *
 * Only dimensions with a nonzero singular value are kept, so for a
 * three-part composition `dims() == 2`. Axis signs are fixed by making the
 * largest-magnitude variable loading on each axis positive.
 */
struct OrdinationResult {
    Eigen::MatrixXd row_coords;  // I x D
    Eigen::MatrixXd col_coords;  // V x D
    std::vector<double> dim_variances;
    std::vector<double> dim_percentages;
    std::vector<std::string> variables;
    std::vector<std::string> sample_labels;
    std::optional<std::vector<std::string>> groups;
    std::vector<GroupHull> hulls;  // on the first two dimensions, one per group level
    double total_variance = 0.0;
    BiplotScaling scaling = BiplotScaling::RowPrincipal;

    std::size_t dims() const noexcept { return dim_variances.size(); }
};

/// Logratio analysis: weighted PCA of the CLRs. The squared singular values
/// sum to the total logratio variance.
OrdinationResult lra(const CompositionMatrix& m, const PartWeights& w,
                     BiplotScaling scaling = BiplotScaling::RowPrincipal);

struct PcaOptions {
    bool standardize = false;
    BiplotScaling scaling = BiplotScaling::RowPrincipal;
};

/// PCA of the column-centred logratio values. Needs at least two distinct specs.
OrdinationResult pca_of_logratios(const CompositionMatrix& m, std::span<const LogratioSpec> specs,
                                  const PcaOptions& options = {});

/// Barycentric map of a three-part composition onto the triangle with
/// vertices (0,0), (1,0), (1/2, sqrt(3)/2) for parts 1, 2, 3. Rows are
/// closed before mapping.
Eigen::MatrixXd ternary_coords(const CompositionMatrix& m);

/// Convex hull per group level over the first two columns of `coords`, in
/// order of first appearance of each level.
std::vector<GroupHull> group_hulls(const Eigen::MatrixXd& coords, const std::vector<std::string>& groups);

/// True when no two group hulls of `result` overlap.
bool hulls_disjoint(const OrdinationResult& result);

}  // namespace coda

#endif  // CODA_ORDINATION_HPP
