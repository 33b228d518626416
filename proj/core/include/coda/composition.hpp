#ifndef CODA_COMPOSITION_HPP
#define CODA_COMPOSITION_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file composition.hpp
 * @brief Compositional data matrices and the logratio / amalgamation transforms.
 *
 * Logarithms are natural logs throughout. Percentages of explained variance
 * do not depend on the base, only absolute variances do.
 */

namespace coda {

using PartIndex = std::size_t;
using PartSet = std::vector<PartIndex>;

/**
 * @brief I x J nonnegative data matrix with named parts.
 *
 * Rows are samples, columns are parts. Construction validates the shape,
 * that every value is finite and nonnegative, and that part names are
 * unique. Instances are immutable.
 */
class CompositionMatrix {
public:
    CompositionMatrix(Eigen::MatrixXd values,
                      std::vector<std::string> part_names,
                      std::vector<std::string> sample_labels = {},
                      std::optional<std::vector<std::string>> group_factor = std::nullopt);

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    std::size_t samples() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t parts() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    const std::vector<std::string>& part_names() const noexcept { return part_names_; }
    const std::vector<std::string>& sample_labels() const noexcept { return sample_labels_; }
    const std::optional<std::vector<std::string>>& group_factor() const noexcept { return group_factor_; }

    /// Index of a part by name; throws InputError when absent.
    PartIndex part_index(std::string_view name) const;
    std::optional<PartIndex> find_part(std::string_view name) const;

    bool strictly_positive() const;

    /// Same labels and groups, new values (must keep the shape).
    CompositionMatrix with_values(Eigen::MatrixXd values) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> part_names_;
    std::vector<std::string> sample_labels_;
    std::optional<std::vector<std::string>> group_factor_;
};

/**
 * @brief Positive part weights that sum to one.
 */
class PartWeights {
public:
    static PartWeights uniform(std::size_t parts);

    /// Rescales any vector of positive values to sum to one.
    static PartWeights from_values(const Eigen::VectorXd& raw);

    /// Weights equal to the mean closed proportion of each part.
    static PartWeights proportional(const CompositionMatrix& m);

    const Eigen::VectorXd& values() const noexcept { return weights_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
    double operator[](std::size_t j) const { return weights_(static_cast<Eigen::Index>(j)); }

    bool is_uniform() const;

private:
    explicit PartWeights(Eigen::VectorXd w) : weights_(std::move(w)) {}
    Eigen::VectorXd weights_;
};

/**
 * @brief log(sum of numerator parts / sum of denominator parts).
 *
 * Singleton sets on both sides give a pairwise logratio (PLR), anything else
 * a summated logratio (SLR). The optional labels name the amalgamations on
 * each side and take precedence over part names when printing.
 */
struct LogratioSpec {
    PartSet numerator;
    PartSet denominator;
    std::string numerator_label;
    std::string denominator_label;

    bool is_plr() const noexcept { return numerator.size() == 1 && denominator.size() == 1; }

    /// Display name, e.g. `log(PUFA/SFA)` or `log((14:0+18:0)/(16:0+20:0))`.
    std::string name(const std::vector<std::string>& part_names) const;

    /// True when both specs use the same numerator and denominator sets.
    bool same_sets(const LogratioSpec& other) const noexcept;
    /// Same sets in either orientation; such logratios span the same line.
    bool same_line(const LogratioSpec& other) const noexcept;
};

/// Builds a validated spec: sets are sorted, deduplicated, nonempty,
/// disjoint and inside [0, part_count).
LogratioSpec make_logratio(PartSet numerator, PartSet denominator, std::size_t part_count,
                           std::string numerator_label = {}, std::string denominator_label = {});

LogratioSpec make_plr(PartIndex j, PartIndex k, std::size_t part_count);

/// All J(J-1)/2 pairwise logratios among `parts`, in lexicographic index order.
std::vector<LogratioSpec> all_plrs(const PartSet& parts, std::size_t part_count);

struct Amalgamation {
    std::string name;
    PartSet parts;
};

// ---- transforms ----

/// Rescales every row to sum to `constant`. Throws on an all-zero row.
CompositionMatrix close(const CompositionMatrix& m, double constant = 1.0);

struct ZeroReplacement {
    CompositionMatrix matrix;
    std::vector<std::size_t> replaced_per_part;
    std::size_t replaced_total() const;
};

/// Each zero in column j becomes 2/3 of the smallest positive value in column j.
ZeroReplacement replace_zeros(const CompositionMatrix& m);

Eigen::VectorXd plr_values(const CompositionMatrix& m, PartIndex j, PartIndex k);

/// Row-centred logs: log x_ij - sum_k c_k log x_ik.
Eigen::MatrixXd clr_matrix(const CompositionMatrix& m, const PartWeights& w);

Eigen::VectorXd slr_values(const CompositionMatrix& m, const LogratioSpec& spec);

/// I x P matrix, one column of logratio values per spec.
Eigen::MatrixXd logratio_matrix(const CompositionMatrix& m, std::span<const LogratioSpec> specs);

/// One output column per group holding the row sums over the group's parts.
/// Parts not covered by any group are dropped.
CompositionMatrix amalgamate(const CompositionMatrix& m, std::span<const Amalgamation> groups);

}  // namespace coda

#endif  // CODA_COMPOSITION_HPP
