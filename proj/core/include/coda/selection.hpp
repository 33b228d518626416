#ifndef CODA_SELECTION_HPP
#define CODA_SELECTION_HPP

#include "coda/composition.hpp"
#include "coda/hierarchy.hpp"
#include "coda/regression.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace coda {

/// Candidates whose explained fraction is within this distance of the best
/// are tied (fraction units, i.e. 1e-7 percentage points).
inline constexpr double kTieTolerance = 1e-9;

struct CandidateScore {
    LogratioSpec spec;
    std::string name;
    double additional_pct = 0.0;
    double cumulative_pct = 0.0;
    bool duplicate = false;  // same logratio line as an already committed spec
};

/**
 * @brief Scores each candidate by the explained variance it adds to `committed`.
 *
 * The result is sorted by decreasing additional percentage. Scores within
 * kTieTolerance of each other form a tie cluster that is ordered by name,
 * so the output is a total, reproducible order. Increments are clamped at
 * zero.
 */
std::vector<CandidateScore> evaluate_candidates(const ResponseModel& model, std::span<const LogratioSpec> committed,
                                                std::span<const LogratioSpec> candidates);
std::vector<CandidateScore> evaluate_candidates(const CompositionMatrix& m, const PartWeights& w,
                                                std::span<const LogratioSpec> committed,
                                                std::span<const LogratioSpec> candidates);

/// Names of the candidates tied with the best one (front of a sorted list).
std::vector<std::string> tie_set(std::span<const CandidateScore> sorted_scores);

struct SelectionStep {
    std::size_t step = 0;
    std::vector<CandidateScore> candidates;
    LogratioSpec chosen;
    std::string chosen_name;
    std::vector<std::string> tie_set;
    double additional_pct = 0.0;
    double cumulative_pct = 0.0;
    bool manual = false;  // the expert picked something other than the automatic choice
};

enum class StopReason {
    Completed,   // ran the requested number of steps
    BelowFloor,  // best increment fell below the caller's floor
    Collinear,   // every remaining candidate lies in the span of the committed set
    Exhausted,   // no candidates left
};

const char* to_string(StopReason reason) noexcept;

struct SelectionTrace {
    double base_pct = 0.0;  // explained by the seed before the first step
    std::vector<SelectionStep> steps;
    StopReason stop = StopReason::Completed;

    double final_pct() const noexcept { return steps.empty() ? base_pct : steps.back().cumulative_pct; }
};

struct StepwiseOptions {
    std::size_t steps = 1;
    double floor_pct = 0.0;
};

/**
 * @brief Greedy forward selection.
 *
 * Each step scores the remaining candidates against the committed set and
 * commits the first of the sorted list. Stops early when the best
 * increment is below `floor_pct`, when every remaining candidate adds
 * nothing (within the tie tolerance), or when no candidates remain.
 */
SelectionTrace stepwise_select(const ResponseModel& model, std::span<const LogratioSpec> candidates,
                               const StepwiseOptions& options, std::span<const LogratioSpec> seed_committed = {});

struct SlrIncrement {
    int step = 0;
    std::string name;
    LogratioSpec spec;
    double additional_pct = 0.0;
    double cumulative_pct = 0.0;
    bool manual = false;
};

struct HierarchyFit {
    RegressionFit fit;
    std::vector<SlrIncrement> increments;
    std::vector<std::string> warnings;

    double total_pct() const noexcept { return fit.explained_percent(); }
};

/// Explained variance of the committed SLRs of `h`, accumulated in step order.
HierarchyFit hierarchy_explained(const ResponseModel& model, const AmalgamationHierarchy& h);

/**
 * @brief Reconstructs a selection trace from a hierarchy.
 *
 * For each committed SLR the candidates are the SLRs of its sibling group
 * that were not yet committed, scored against the SLRs committed before it.
 * The trace is a pure function of the data and the hierarchy.
 */
SelectionTrace hierarchy_trace(const ResponseModel& model, const AmalgamationHierarchy& h);

}  // namespace coda

#endif  // CODA_SELECTION_HPP
