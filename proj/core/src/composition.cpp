#include "coda/composition.hpp"

#include "coda/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace coda {

namespace {

void require_positive(const CompositionMatrix& m, const char* op) {
    const auto& x = m.values();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (!(x(i, j) > 0.0)) {
                throw InputError(std::string(op) + ": nonpositive value in row " + std::to_string(i + 1) +
                                 ", part '" + m.part_names()[static_cast<std::size_t>(j)] +
                                 "' (replace zeros first)");
            }
        }
    }
}

std::string side_name(const PartSet& set, const std::string& label, const std::vector<std::string>& names) {
    if (!label.empty()) return label;
    if (set.size() == 1) return names.at(set.front());
    std::string out = "(";
    for (std::size_t n = 0; n < set.size(); ++n) {
        if (n) out += '+';
        out += names.at(set[n]);
    }
    out += ')';
    return out;
}

PartSet normalize_set(PartSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace

// ---- CompositionMatrix ----

CompositionMatrix::CompositionMatrix(Eigen::MatrixXd values, std::vector<std::string> part_names,
                                     std::vector<std::string> sample_labels,
                                     std::optional<std::vector<std::string>> group_factor)
    : values_(std::move(values)),
      part_names_(std::move(part_names)),
      sample_labels_(std::move(sample_labels)),
      group_factor_(std::move(group_factor)) {
    const auto rows = static_cast<std::size_t>(values_.rows());
    const auto cols = static_cast<std::size_t>(values_.cols());
    if (rows < 2) throw InputError("composition needs at least 2 samples, got " + std::to_string(rows));
    if (cols < 2) throw InputError("composition needs at least 2 parts, got " + std::to_string(cols));
    if (part_names_.size() != cols) {
        throw InputError("expected " + std::to_string(cols) + " part names, got " + std::to_string(part_names_.size()));
    }
    std::set<std::string_view> seen;
    for (const auto& name : part_names_) {
        if (!seen.insert(name).second) throw InputError("duplicate part name '" + name + "'");
    }
    if (sample_labels_.empty()) {
        sample_labels_.reserve(rows);
        for (std::size_t i = 0; i < rows; ++i) sample_labels_.push_back(std::to_string(i + 1));
    } else if (sample_labels_.size() != rows) {
        throw InputError("expected " + std::to_string(rows) + " sample labels, got " +
                         std::to_string(sample_labels_.size()));
    }
    if (group_factor_ && group_factor_->size() != rows) {
        throw InputError("group factor has " + std::to_string(group_factor_->size()) + " entries for " +
                         std::to_string(rows) + " samples");
    }
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
        for (Eigen::Index i = 0; i < values_.rows(); ++i) {
            const double v = values_(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw InputError("invalid value " + std::to_string(v) + " in row " + std::to_string(i + 1) +
                                 ", part '" + part_names_[static_cast<std::size_t>(j)] + "'");
            }
        }
    }
}

std::optional<PartIndex> CompositionMatrix::find_part(std::string_view name) const {
    const auto it = std::find(part_names_.begin(), part_names_.end(), name);
    if (it == part_names_.end()) return std::nullopt;
    return static_cast<PartIndex>(it - part_names_.begin());
}

PartIndex CompositionMatrix::part_index(std::string_view name) const {
    if (auto j = find_part(name)) return *j;
    throw InputError("unknown part '" + std::string(name) + "'");
}

bool CompositionMatrix::strictly_positive() const { return (values_.array() > 0.0).all(); }

CompositionMatrix CompositionMatrix::with_values(Eigen::MatrixXd values) const {
    return CompositionMatrix(std::move(values), part_names_, sample_labels_, group_factor_);
}

// ---- PartWeights ----

PartWeights PartWeights::uniform(std::size_t parts) {
    if (parts == 0) throw InputError("weights need at least one part");
    return PartWeights(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(parts), 1.0 / static_cast<double>(parts)));
}

PartWeights PartWeights::from_values(const Eigen::VectorXd& raw) {
    if (raw.size() == 0) throw InputError("weights need at least one part");
    for (Eigen::Index j = 0; j < raw.size(); ++j) {
        if (!std::isfinite(raw(j)) || !(raw(j) > 0.0)) {
            throw InputError("weight " + std::to_string(j + 1) + " is not a positive number");
        }
    }
    return PartWeights(raw / raw.sum());
}

PartWeights PartWeights::proportional(const CompositionMatrix& m) {
    const CompositionMatrix closed = close(m, 1.0);
    return from_values(closed.values().colwise().mean().transpose());
}

bool PartWeights::is_uniform() const {
    return (weights_.array() == weights_(0)).all();
}

// ---- LogratioSpec ----

std::string LogratioSpec::name(const std::vector<std::string>& part_names) const {
    return "log(" + side_name(numerator, numerator_label, part_names) + "/" +
           side_name(denominator, denominator_label, part_names) + ")";
}

bool LogratioSpec::same_sets(const LogratioSpec& other) const noexcept {
    return numerator == other.numerator && denominator == other.denominator;
}

bool LogratioSpec::same_line(const LogratioSpec& other) const noexcept {
    return same_sets(other) || (numerator == other.denominator && denominator == other.numerator);
}

LogratioSpec make_logratio(PartSet numerator, PartSet denominator, std::size_t part_count,
                           std::string numerator_label, std::string denominator_label) {
    LogratioSpec spec{normalize_set(std::move(numerator)), normalize_set(std::move(denominator)),
                      std::move(numerator_label), std::move(denominator_label)};
    if (spec.numerator.empty() || spec.denominator.empty()) {
        throw InputError("logratio numerator and denominator must be nonempty");
    }
    for (const PartSet* s : {&spec.numerator, &spec.denominator}) {
        if (s->back() >= part_count) {
            throw InputError("part index " + std::to_string(s->back()) + " out of range for " +
                             std::to_string(part_count) + " parts");
        }
    }
    PartSet shared;
    std::set_intersection(spec.numerator.begin(), spec.numerator.end(), spec.denominator.begin(),
                          spec.denominator.end(), std::back_inserter(shared));
    if (!shared.empty()) {
        throw InputError("logratio numerator and denominator share part index " + std::to_string(shared.front()));
    }
    return spec;
}

LogratioSpec make_plr(PartIndex j, PartIndex k, std::size_t part_count) {
    return make_logratio({j}, {k}, part_count);
}

std::vector<LogratioSpec> all_plrs(const PartSet& parts, std::size_t part_count) {
    std::vector<LogratioSpec> out;
    const PartSet sorted = normalize_set(parts);
    for (std::size_t a = 0; a < sorted.size(); ++a) {
        for (std::size_t b = a + 1; b < sorted.size(); ++b) out.push_back(make_plr(sorted[a], sorted[b], part_count));
    }
    return out;
}

// ---- transforms ----

std::size_t ZeroReplacement::replaced_total() const {
    std::size_t n = 0;
    for (auto c : replaced_per_part) n += c;
    return n;
}

CompositionMatrix close(const CompositionMatrix& m, double constant) {
    if (!(constant > 0.0) || !std::isfinite(constant)) throw InputError("closure constant must be positive");
    Eigen::MatrixXd x = m.values();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double sum = x.row(i).sum();
        if (!(sum > 0.0)) {
            throw InputError("row " + std::to_string(i + 1) + " (" + m.sample_labels()[static_cast<std::size_t>(i)] +
                             ") sums to zero and cannot be closed");
        }
        x.row(i) *= constant / sum;
    }
    return m.with_values(std::move(x));
}

ZeroReplacement replace_zeros(const CompositionMatrix& m) {
    Eigen::MatrixXd x = m.values();
    std::vector<std::size_t> counts(m.parts(), 0);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        double min_positive = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (x(i, j) > 0.0) min_positive = std::min(min_positive, x(i, j));
        }
        if (!std::isfinite(min_positive)) {
            throw InputError("part '" + m.part_names()[static_cast<std::size_t>(j)] +
                             "' has no positive value; zeros cannot be replaced");
        }
        const double replacement = 2.0 / 3.0 * min_positive;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (x(i, j) == 0.0) {
                x(i, j) = replacement;
                ++counts[static_cast<std::size_t>(j)];
            }
        }
    }
    return {m.with_values(std::move(x)), std::move(counts)};
}

Eigen::VectorXd plr_values(const CompositionMatrix& m, PartIndex j, PartIndex k) {
    if (j == k) throw InputError("PLR needs two distinct parts");
    if (j >= m.parts() || k >= m.parts()) throw InputError("PLR part index out of range");
    require_positive(m, "plr");
    const auto& x = m.values();
    const auto jj = static_cast<Eigen::Index>(j);
    const auto kk = static_cast<Eigen::Index>(k);
    return x.col(jj).array().log() - x.col(kk).array().log();
}

Eigen::MatrixXd clr_matrix(const CompositionMatrix& m, const PartWeights& w) {
    if (w.size() != m.parts()) throw InputError("weights do not match the number of parts");
    require_positive(m, "clr");
    Eigen::MatrixXd logs = m.values().array().log().matrix();
    const Eigen::VectorXd centre = logs * w.values();
    logs.colwise() -= centre;
    return logs;
}

Eigen::VectorXd slr_values(const CompositionMatrix& m, const LogratioSpec& spec) {
    // re-validate: specs can be assembled by hand
    const LogratioSpec checked = make_logratio(spec.numerator, spec.denominator, m.parts());
    require_positive(m, "slr");
    const auto& x = m.values();
    Eigen::VectorXd num = Eigen::VectorXd::Zero(x.rows());
    Eigen::VectorXd den = Eigen::VectorXd::Zero(x.rows());
    for (auto j : checked.numerator) num += x.col(static_cast<Eigen::Index>(j));
    for (auto k : checked.denominator) den += x.col(static_cast<Eigen::Index>(k));
    return num.array().log() - den.array().log();
}

Eigen::MatrixXd logratio_matrix(const CompositionMatrix& m, std::span<const LogratioSpec> specs) {
    Eigen::MatrixXd out(m.values().rows(), static_cast<Eigen::Index>(specs.size()));
    for (std::size_t p = 0; p < specs.size(); ++p) out.col(static_cast<Eigen::Index>(p)) = slr_values(m, specs[p]);
    return out;
}

CompositionMatrix amalgamate(const CompositionMatrix& m, std::span<const Amalgamation> groups) {
    if (groups.empty()) throw InputError("amalgamate needs at least one group");
    std::vector<int> owner(m.parts(), -1);
    std::vector<std::string> names;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.values().rows(), static_cast<Eigen::Index>(groups.size()));
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].parts.empty()) throw InputError("amalgamation '" + groups[g].name + "' is empty");
        for (auto j : groups[g].parts) {
            if (j >= m.parts()) throw InputError("amalgamation '" + groups[g].name + "' has an out-of-range part");
            if (owner[j] >= 0) {
                throw InputError("part '" + m.part_names()[j] + "' belongs to both '" +
                                 groups[static_cast<std::size_t>(owner[j])].name + "' and '" + groups[g].name + "'");
            }
            owner[j] = static_cast<int>(g);
            out.col(static_cast<Eigen::Index>(g)) += m.values().col(static_cast<Eigen::Index>(j));
        }
        names.push_back(groups[g].name);
    }
    return CompositionMatrix(std::move(out), std::move(names), m.sample_labels(), m.group_factor());
}

}  // namespace coda
