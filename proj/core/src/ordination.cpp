#include "coda/ordination.hpp"

#include "coda/error.hpp"
#include "coda/geometry.hpp"
#include "coda/variance.hpp"

#include <algorithm>
#include <cmath>

namespace coda {

namespace {

// Weighted SVD of a column-centred matrix: Z diag(sqrt(c)) / sqrt(I).
OrdinationResult decompose(const Eigen::MatrixXd& centred, const Eigen::VectorXd& column_weights,
                           BiplotScaling scaling) {
    const auto samples = static_cast<double>(centred.rows());
    const Eigen::VectorXd root_c = column_weights.cwiseSqrt();
    const Eigen::MatrixXd s = centred * root_c.asDiagonal() / std::sqrt(samples);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv(0) > 0.0)) throw DegenerateError("data have zero variance; no ordination axes exist");

    Eigen::Index dims = 0;
    while (dims < sv.size() && sv(dims) > 1e-10 * sv(0)) ++dims;

    Eigen::MatrixXd u = svd.matrixU().leftCols(dims);
    Eigen::MatrixXd v = svd.matrixV().leftCols(dims);
    for (Eigen::Index d = 0; d < dims; ++d) {
        Eigen::Index arg = 0;
        v.col(d).cwiseAbs().maxCoeff(&arg);
        if (v(arg, d) < 0.0) {
            v.col(d) = -v.col(d);
            u.col(d) = -u.col(d);
        }
    }

    OrdinationResult out;
    out.scaling = scaling;
    const Eigen::VectorXd sigma = sv.head(dims);
    const Eigen::VectorXd inv_root_c = root_c.cwiseInverse();
    if (scaling == BiplotScaling::RowPrincipal) {
        out.row_coords = std::sqrt(samples) * u * sigma.asDiagonal();
        out.col_coords = inv_root_c.asDiagonal() * v;
    } else {
        out.row_coords = std::sqrt(samples) * u;
        out.col_coords = inv_root_c.asDiagonal() * v * sigma.asDiagonal();
    }

    CompensatedSum total;
    for (Eigen::Index d = 0; d < sv.size(); ++d) total.add(sv(d) * sv(d));
    out.total_variance = total.value();
    for (Eigen::Index d = 0; d < dims; ++d) {
        out.dim_variances.push_back(sigma(d) * sigma(d));
        out.dim_percentages.push_back(100.0 * sigma(d) * sigma(d) / out.total_variance);
    }
    return out;
}

void attach_samples(OrdinationResult& out, const CompositionMatrix& m) {
    out.sample_labels = m.sample_labels();
    out.groups = m.group_factor();
    if (out.groups) out.hulls = group_hulls(out.row_coords, *out.groups);
}

}  // namespace

OrdinationResult lra(const CompositionMatrix& m, const PartWeights& w, BiplotScaling scaling) {
    Eigen::MatrixXd clr = clr_matrix(m, w);
    clr.rowwise() -= clr.colwise().mean();
    OrdinationResult out = decompose(clr, w.values(), scaling);
    out.variables = m.part_names();
    attach_samples(out, m);
    return out;
}

OrdinationResult pca_of_logratios(const CompositionMatrix& m, std::span<const LogratioSpec> specs,
                                  const PcaOptions& options) {
    if (specs.size() < 2) throw InputError("PCA of logratios needs at least two logratios");
    for (std::size_t a = 0; a < specs.size(); ++a) {
        for (std::size_t b = a + 1; b < specs.size(); ++b) {
            if (specs[a].same_line(specs[b])) {
                throw InputError("duplicate logratio " + specs[b].name(m.part_names()));
            }
        }
    }
    Eigen::MatrixXd values = logratio_matrix(m, specs);
    values.rowwise() -= values.colwise().mean();
    if (options.standardize) {
        for (Eigen::Index p = 0; p < values.cols(); ++p) {
            const double sd = std::sqrt(values.col(p).squaredNorm() / static_cast<double>(values.rows()));
            if (!(sd > 0.0)) throw DegenerateError("logratio " + specs[static_cast<std::size_t>(p)].name(m.part_names()) +
                                                   " is constant and cannot be standardized");
            values.col(p) /= sd;
        }
    }
    OrdinationResult out =
        decompose(values, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(specs.size())), options.scaling);
    for (const auto& spec : specs) out.variables.push_back(spec.name(m.part_names()));
    attach_samples(out, m);
    return out;
}

Eigen::MatrixXd ternary_coords(const CompositionMatrix& m) {
    if (m.parts() != 3) {
        throw InputError("ternary coordinates need exactly 3 parts, got " + std::to_string(m.parts()));
    }
    const CompositionMatrix closed = close(m, 1.0);
    const auto& x = closed.values();
    Eigen::MatrixXd out(x.rows(), 2);
    const double h = std::sqrt(3.0) / 2.0;
    out.col(0) = x.col(1) + 0.5 * x.col(2);
    out.col(1) = h * x.col(2);
    return out;
}

std::vector<GroupHull> group_hulls(const Eigen::MatrixXd& coords, const std::vector<std::string>& groups) {
    std::vector<GroupHull> out;
    if (coords.rows() != static_cast<Eigen::Index>(groups.size())) throw InputError("group factor length mismatch");
    std::vector<std::string> levels;
    for (const auto& g : groups) {
        if (std::find(levels.begin(), levels.end(), g) == levels.end()) levels.push_back(g);
    }
    for (const auto& level : levels) {
        std::vector<std::size_t> members;
        std::vector<Point2> pts;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (groups[i] != level) continue;
            const auto r = static_cast<Eigen::Index>(i);
            members.push_back(i);
            pts.push_back({coords(r, 0), coords.cols() > 1 ? coords(r, 1) : 0.0});
        }
        GroupHull hull{level, {}};
        for (auto local : convex_hull(pts)) hull.vertices.push_back(members[local]);
        out.push_back(std::move(hull));
    }
    return out;
}

bool hulls_disjoint(const OrdinationResult& result) {
    auto polygon = [&](const GroupHull& h) {
        std::vector<Point2> pts;
        for (auto i : h.vertices) {
            const auto r = static_cast<Eigen::Index>(i);
            pts.push_back({result.row_coords(r, 0), result.row_coords.cols() > 1 ? result.row_coords(r, 1) : 0.0});
        }
        return pts;
    };
    for (std::size_t a = 0; a < result.hulls.size(); ++a) {
        for (std::size_t b = a + 1; b < result.hulls.size(); ++b) {
            if (convex_polygons_overlap(polygon(result.hulls[a]), polygon(result.hulls[b]))) return false;
        }
    }
    return true;
}

}  // namespace coda
