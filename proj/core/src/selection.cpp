#include "coda/selection.hpp"

#include "coda/error.hpp"

#include <algorithm>

namespace coda {

namespace {

constexpr double kTiePct = 100.0 * kTieTolerance;

void sort_scores(std::vector<CandidateScore>& scores) {
    std::stable_sort(scores.begin(), scores.end(), [](const CandidateScore& a, const CandidateScore& b) {
        if (a.additional_pct != b.additional_pct) return a.additional_pct > b.additional_pct;
        return a.name < b.name;
    });
    // clusters of near-equal scores are ordered by name
    std::size_t start = 0;
    while (start < scores.size()) {
        std::size_t end = start + 1;
        while (end < scores.size() && scores[start].additional_pct - scores[end].additional_pct <= kTiePct) ++end;
        std::stable_sort(scores.begin() + static_cast<std::ptrdiff_t>(start),
                         scores.begin() + static_cast<std::ptrdiff_t>(end),
                         [](const CandidateScore& a, const CandidateScore& b) { return a.name < b.name; });
        start = end;
    }
}

std::vector<LogratioSpec> with(std::span<const LogratioSpec> base, const LogratioSpec& extra) {
    std::vector<LogratioSpec> out(base.begin(), base.end());
    out.push_back(extra);
    return out;
}

}  // namespace

const char* to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::Completed: return "completed";
        case StopReason::BelowFloor: return "below_floor";
        case StopReason::Collinear: return "collinear";
        case StopReason::Exhausted: return "exhausted";
    }
    return "unknown";
}

std::vector<CandidateScore> evaluate_candidates(const ResponseModel& model, std::span<const LogratioSpec> committed,
                                                std::span<const LogratioSpec> candidates) {
    if (candidates.empty()) throw InputError("no candidates to evaluate");
    const auto& names = model.data().part_names();
    const double base = model.explained_fraction(committed);

    std::vector<CandidateScore> scores;
    scores.reserve(candidates.size());
    for (const auto& cand : candidates) {
        // validates index ranges and disjointness
        (void)make_logratio(cand.numerator, cand.denominator, model.data().parts());
        CandidateScore s{cand, cand.name(names), 0.0, 100.0 * base, false};
        s.duplicate = std::any_of(committed.begin(), committed.end(),
                                  [&](const LogratioSpec& c) { return c.same_line(cand); });
        if (!s.duplicate) {
            const auto extended = with(committed, cand);
            const double frac = model.explained_fraction(extended);
            s.additional_pct = std::max(0.0, 100.0 * (frac - base));
            s.cumulative_pct = 100.0 * base + s.additional_pct;
        }
        scores.push_back(std::move(s));
    }
    sort_scores(scores);
    return scores;
}

std::vector<CandidateScore> evaluate_candidates(const CompositionMatrix& m, const PartWeights& w,
                                                std::span<const LogratioSpec> committed,
                                                std::span<const LogratioSpec> candidates) {
    return evaluate_candidates(ResponseModel(m, w), committed, candidates);
}

std::vector<std::string> tie_set(std::span<const CandidateScore> sorted_scores) {
    std::vector<std::string> out;
    if (sorted_scores.empty()) return out;
    const double best = sorted_scores.front().additional_pct;
    for (const auto& s : sorted_scores) {
        if (best - s.additional_pct <= kTiePct) out.push_back(s.name);
    }
    return out;
}

SelectionTrace stepwise_select(const ResponseModel& model, std::span<const LogratioSpec> candidates,
                               const StepwiseOptions& options, std::span<const LogratioSpec> seed_committed) {
    if (options.steps == 0) throw InputError("stepwise selection needs at least one step");
    std::vector<LogratioSpec> committed(seed_committed.begin(), seed_committed.end());
    std::vector<LogratioSpec> pool;
    for (const auto& c : candidates) {
        const bool taken = std::any_of(committed.begin(), committed.end(), [&](const auto& s) { return s.same_line(c); });
        const bool repeated = std::any_of(pool.begin(), pool.end(), [&](const auto& s) { return s.same_line(c); });
        if (!taken && !repeated) pool.push_back(c);
    }

    SelectionTrace trace;
    trace.base_pct = 100.0 * model.explained_fraction(committed);
    trace.stop = StopReason::Completed;
    for (std::size_t step = 1; step <= options.steps; ++step) {
        if (pool.empty()) {
            trace.stop = StopReason::Exhausted;
            break;
        }
        auto scores = evaluate_candidates(model, committed, pool);
        const CandidateScore& best = scores.front();
        if (best.additional_pct < options.floor_pct) {
            trace.stop = StopReason::BelowFloor;
            break;
        }
        if (best.additional_pct <= kTiePct) {
            trace.stop = StopReason::Collinear;
            break;
        }
        SelectionStep rec;
        rec.step = step;
        rec.chosen = best.spec;
        rec.chosen_name = best.name;
        rec.tie_set = tie_set(scores);
        rec.additional_pct = best.additional_pct;
        rec.cumulative_pct = best.cumulative_pct;
        committed.push_back(best.spec);
        pool.erase(std::find_if(pool.begin(), pool.end(), [&](const auto& s) { return s.same_sets(best.spec); }));
        rec.candidates = std::move(scores);
        trace.steps.push_back(std::move(rec));
    }
    return trace;
}

HierarchyFit hierarchy_explained(const ResponseModel& model, const AmalgamationHierarchy& h) {
    const std::size_t parts = model.data().parts();
    HierarchyFit out;
    out.warnings = h.validate(parts);
    const auto specs = h.committed_specs(parts);
    double previous = 0.0;
    for (std::size_t n = 0; n < specs.size(); ++n) {
        const double frac = model.explained_fraction(std::span<const LogratioSpec>(specs.data(), n + 1));
        const double now = std::max(previous, 100.0 * frac);
        const auto& slr = h.slrs()[n];
        out.increments.push_back({slr.step, specs[n].name(model.data().part_names()), specs[n], now - previous, now,
                                  slr.manual});
        previous = now;
    }
    out.fit = model.fit(specs);
    return out;
}

SelectionTrace hierarchy_trace(const ResponseModel& model, const AmalgamationHierarchy& h) {
    const std::size_t parts = model.data().parts();
    h.validate(parts);
    SelectionTrace trace;
    std::vector<LogratioSpec> committed;
    for (const auto& slr : h.slrs()) {
        const LogratioSpec chosen = h.spec_for(slr, parts);
        const auto group = *h.common_parent(slr.numerator, slr.denominator);
        std::vector<LogratioSpec> candidates;
        for (auto& c : h.sibling_candidates(group, parts)) {
            const bool taken =
                std::any_of(committed.begin(), committed.end(), [&](const auto& s) { return s.same_line(c); });
            if (taken) continue;
            // keep the committed orientation for the chosen SLR
            candidates.push_back(c.same_line(chosen) ? chosen : c);
        }
        auto scores = evaluate_candidates(model, committed, candidates);
        const auto chosen_it =
            std::find_if(scores.begin(), scores.end(), [&](const auto& s) { return s.spec.same_sets(chosen); });

        SelectionStep rec;
        rec.step = static_cast<std::size_t>(slr.step);
        rec.chosen = chosen;
        rec.chosen_name = chosen_it->name;
        rec.tie_set = tie_set(scores);
        rec.additional_pct = chosen_it->additional_pct;
        rec.cumulative_pct = chosen_it->cumulative_pct;
        rec.manual = slr.manual;
        rec.candidates = std::move(scores);
        trace.steps.push_back(std::move(rec));
        committed.push_back(chosen);
    }
    return trace;
}

}  // namespace coda
