#ifndef CODA_IO_HPP
#define CODA_IO_HPP

#include "coda/composition.hpp"
#include "coda/hierarchy.hpp"
#include "coda/ordination.hpp"
#include "coda/regression.hpp"
#include "coda/selection.hpp"
#include "coda/variance.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

/**
 * @file io.hpp
 * @brief Document formats shared by the command-line tool and the service.
 *
 * All documents are JSON objects with insertion-ordered keys and are
 * written deterministically (doubles in shortest round-trip form), so equal
 * inputs give byte-identical output.
 */

namespace coda {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

// ---- logratio specs in text form ----

/// Parses `A/B`, `A+B/C+D` or `log(A/B)` where each side is a `+`-joined
/// list of part names. Throws InputError naming the unknown part.
LogratioSpec parse_logratio(std::string_view text, const std::vector<std::string>& part_names);

/// One spec per nonblank line; `#` starts a comment. The single word `all`
/// expands to every pairwise logratio.
std::vector<LogratioSpec> parse_logratio_list(std::string_view text, const std::vector<std::string>& part_names);

/// Two-column CSV `part,weight` (header optional); every part must appear
/// once. Weights are rescaled to sum to one.
PartWeights parse_weights(std::string_view text, const std::vector<std::string>& part_names);

// ---- hierarchy document ----

/// `{nodes: [{name, parts: [...]}], splits: [{parent, children: [...]}],
///   slrs: [{step, num, den, manual}]}` with parts referenced by name.
Json hierarchy_to_json(const AmalgamationHierarchy& h, const std::vector<std::string>& part_names);
/// Parses and validates against `part_names`.
AmalgamationHierarchy hierarchy_from_json(const Json& doc, const std::vector<std::string>& part_names);

// ---- reports ----

Json variance_report_to_json(const VarianceReport& report, const std::vector<std::string>& part_names);
Json regression_fit_to_json(const RegressionFit& fit, const std::vector<std::string>& part_names,
                            const std::vector<std::string>& predictor_names);
Json candidate_scores_to_json(std::span<const CandidateScore> scores);
Json trace_to_json(const SelectionTrace& trace);
Json ordination_to_json(const OrdinationResult& result);
Json ternary_to_json(const Eigen::MatrixXd& coords, const CompositionMatrix& m);

/// Table with columns step, chosen, additional_pct, cumulative_pct, tie_set
/// (tie set members joined by `;`).
std::string trace_to_csv(const SelectionTrace& trace);
/// Columns label, group, dim1..dimD.
std::string coordinates_to_csv(const OrdinationResult& result);
std::string ternary_to_csv(const Eigen::MatrixXd& coords, const CompositionMatrix& m);

struct SlrTableRow {
    std::string amalgamations;  // e.g. "SFA, MUFA & PUFA" or "(PUFA) n3, n6 & nX"
    std::string logratio;       // e.g. "log(PUFA/SFA)"
    std::string abbreviation;   // e.g. "PUFA/SFA" or "PUFAn6/n3"
};

/// Summary of the committed SLRs grouped by sibling set, in commit order.
std::vector<SlrTableRow> slr_table(const AmalgamationHierarchy& h);
Json slr_table_to_json(const std::vector<SlrTableRow>& rows);

}  // namespace coda

#endif  // CODA_IO_HPP
