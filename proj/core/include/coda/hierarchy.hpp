#ifndef CODA_HIERARCHY_HPP
#define CODA_HIERARCHY_HPP

#include "coda/composition.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coda {

struct HierarchyNode {
    std::string name;
    PartSet parts;

    bool operator==(const HierarchyNode&) const = default;
};

/// A parent node divided into children whose part sets partition it.
struct Split {
    std::string parent;
    std::vector<std::string> children;

    bool operator==(const Split&) const = default;
};

/// log(numerator / denominator) between two sibling nodes, committed at `step`.
struct CommittedSlr {
    int step = 0;
    std::string numerator;
    std::string denominator;
    bool manual = false;

    bool operator==(const CommittedSlr&) const = default;
};

/**
 * @brief Tree of amalgamations with the SLRs committed between siblings.
 *
 * Nodes that are nobody's child are roots; the roots are siblings of one
 * another (an implicit top-level split), so a hierarchy can start from a
 * single node holding every part or from several disjoint groups such as
 * SFA / MUFA / PUFA.
 *
 * Rules enforced by `validate()`:
 *  - node names are unique, part sets nonempty and in range;
 *  - roots are pairwise disjoint;
 *  - the children of a split are disjoint and their union is the parent;
 *  - a node is divided at most once and is the child of at most one split;
 *  - every committed SLR links two distinct siblings, appears once (in
 *    either orientation) and steps increase strictly.
 *
 * More than g-1 SLRs over a sibling group of size g is legal but redundant
 * and is reported as a warning.
 */
class AmalgamationHierarchy {
public:
    AmalgamationHierarchy() = default;
    AmalgamationHierarchy(std::vector<HierarchyNode> nodes, std::vector<Split> splits,
                          std::vector<CommittedSlr> slrs);

    const std::vector<HierarchyNode>& nodes() const noexcept { return nodes_; }
    const std::vector<Split>& splits() const noexcept { return splits_; }
    const std::vector<CommittedSlr>& slrs() const noexcept { return slrs_; }
    bool empty() const noexcept { return nodes_.empty(); }

    const HierarchyNode* find_node(std::string_view name) const;
    const HierarchyNode& node(std::string_view name) const;

    std::vector<std::string> roots() const;
    /// Parent of `name`; nullopt for a root.
    std::optional<std::string> parent_of(std::string_view name) const;
    /// All members of the sibling group containing `name` (itself included).
    std::vector<std::string> siblings_of(std::string_view name) const;
    /// Children of `parent`, or the roots when `parent` is nullopt.
    std::vector<std::string> children_of(const std::optional<std::string>& parent) const;

    /// Throws HierarchyError on a rule violation; returns warnings.
    std::vector<std::string> validate(std::size_t part_count) const;

    // ---- edits; each validates and leaves the hierarchy unchanged on error ----
    void add_roots(const std::vector<HierarchyNode>& roots, std::size_t part_count);
    void add_split(const std::string& parent, const std::vector<HierarchyNode>& children, std::size_t part_count);
    /// Appends an SLR with the next step number and returns it.
    const CommittedSlr& commit(const std::string& numerator, const std::string& denominator, bool manual,
                               std::size_t part_count);

    LogratioSpec spec_for(const CommittedSlr& slr, std::size_t part_count) const;
    LogratioSpec spec_between(const std::string& numerator, const std::string& denominator,
                              std::size_t part_count) const;
    std::vector<LogratioSpec> committed_specs(std::size_t part_count) const;

    /// All g(g-1)/2 SLRs among the children of `parent` (roots when nullopt),
    /// oriented later-child over earlier-child.
    std::vector<LogratioSpec> sibling_candidates(const std::optional<std::string>& parent,
                                                 std::size_t part_count) const;

    /// Sibling group containing both nodes (nullopt parent = root group).
    std::optional<std::optional<std::string>> common_parent(std::string_view a, std::string_view b) const;

    bool operator==(const AmalgamationHierarchy&) const = default;

private:
    std::vector<HierarchyNode> nodes_;
    std::vector<Split> splits_;
    std::vector<CommittedSlr> slrs_;
};

/// Composition seen through the hierarchy: `parts` gives `m` unchanged,
/// `roots` amalgamates the roots, and a node name amalgamates its children.
CompositionMatrix amalgamation_view(const CompositionMatrix& m, const AmalgamationHierarchy& h,
                                    std::string_view target);

}  // namespace coda

#endif  // CODA_HIERARCHY_HPP
