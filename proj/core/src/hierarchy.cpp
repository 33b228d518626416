#include "coda/hierarchy.hpp"

#include "coda/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace coda {

namespace {

std::string slr_label(const CommittedSlr& slr) {
    return "log(" + slr.numerator + "/" + slr.denominator + ")";
}

PartSet sorted_parts(PartSet p) {
    std::sort(p.begin(), p.end());
    return p;
}

}  // namespace

AmalgamationHierarchy::AmalgamationHierarchy(std::vector<HierarchyNode> nodes, std::vector<Split> splits,
                                             std::vector<CommittedSlr> slrs)
    : nodes_(std::move(nodes)), splits_(std::move(splits)), slrs_(std::move(slrs)) {
    for (auto& n : nodes_) n.parts = sorted_parts(std::move(n.parts));
}

const HierarchyNode* AmalgamationHierarchy::find_node(std::string_view name) const {
    for (const auto& n : nodes_) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

const HierarchyNode& AmalgamationHierarchy::node(std::string_view name) const {
    if (const auto* n = find_node(name)) return *n;
    throw HierarchyError("unknown amalgamation '" + std::string(name) + "'", std::string(name));
}

std::optional<std::string> AmalgamationHierarchy::parent_of(std::string_view name) const {
    for (const auto& s : splits_) {
        if (std::find(s.children.begin(), s.children.end(), name) != s.children.end()) return s.parent;
    }
    return std::nullopt;
}

std::vector<std::string> AmalgamationHierarchy::roots() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_) {
        if (!parent_of(n.name)) out.push_back(n.name);
    }
    return out;
}

std::vector<std::string> AmalgamationHierarchy::children_of(const std::optional<std::string>& parent) const {
    if (!parent) return roots();
    for (const auto& s : splits_) {
        if (s.parent == *parent) return s.children;
    }
    return {};
}

std::vector<std::string> AmalgamationHierarchy::siblings_of(std::string_view name) const {
    return children_of(parent_of(name));
}

std::optional<std::optional<std::string>> AmalgamationHierarchy::common_parent(std::string_view a,
                                                                               std::string_view b) const {
    if (!find_node(a) || !find_node(b)) return std::nullopt;
    auto pa = parent_of(a);
    auto pb = parent_of(b);
    if (pa != pb) return std::nullopt;
    return pa;
}

std::vector<std::string> AmalgamationHierarchy::validate(std::size_t part_count) const {
    std::vector<std::string> warnings;
    std::set<std::string> names;
    for (const auto& n : nodes_) {
        if (n.name.empty()) throw HierarchyError("amalgamation with an empty name");
        if (!names.insert(n.name).second) throw HierarchyError("duplicate amalgamation name '" + n.name + "'", n.name);
        if (n.parts.empty()) throw HierarchyError("amalgamation '" + n.name + "' has no parts", n.name);
        if (std::adjacent_find(n.parts.begin(), n.parts.end()) != n.parts.end()) {
            throw HierarchyError("amalgamation '" + n.name + "' lists a part twice", n.name);
        }
        if (n.parts.back() >= part_count) {
            throw HierarchyError("amalgamation '" + n.name + "' refers to a part outside the data", n.name);
        }
    }

    std::set<std::string> divided;
    std::set<std::string> placed;
    for (const auto& s : splits_) {
        const HierarchyNode& parent = node(s.parent);
        if (!divided.insert(s.parent).second) {
            throw HierarchyError("amalgamation '" + s.parent + "' is divided more than once", s.parent);
        }
        if (s.children.size() < 2) throw HierarchyError("split of '" + s.parent + "' needs at least two children", s.parent);
        PartSet united;
        for (const auto& child : s.children) {
            if (child == s.parent) throw HierarchyError("'" + child + "' cannot be its own child", child);
            if (!placed.insert(child).second) {
                throw HierarchyError("amalgamation '" + child + "' is the child of more than one split", child);
            }
            const HierarchyNode& c = node(child);
            united.insert(united.end(), c.parts.begin(), c.parts.end());
        }
        std::sort(united.begin(), united.end());
        if (std::adjacent_find(united.begin(), united.end()) != united.end()) {
            throw HierarchyError("children of '" + s.parent + "' overlap", s.parent);
        }
        if (united != parent.parts) {
            throw HierarchyError("children of '" + s.parent + "' do not cover exactly its parts", s.parent);
        }
    }

    // roots pairwise disjoint; following parent links from any node must end at a root
    PartSet root_parts;
    for (const auto& r : roots()) {
        const auto& p = node(r).parts;
        root_parts.insert(root_parts.end(), p.begin(), p.end());
    }
    std::sort(root_parts.begin(), root_parts.end());
    if (std::adjacent_find(root_parts.begin(), root_parts.end()) != root_parts.end()) {
        throw HierarchyError("top-level amalgamations overlap");
    }
    for (const auto& n : nodes_) {
        std::set<std::string> seen{n.name};
        auto p = parent_of(n.name);
        while (p) {
            if (!seen.insert(*p).second) throw HierarchyError("amalgamation '" + n.name + "' sits on a cycle", n.name);
            p = parent_of(*p);
        }
    }

    int last_step = 0;
    std::map<std::optional<std::string>, std::size_t> per_group;
    for (std::size_t n = 0; n < slrs_.size(); ++n) {
        const auto& slr = slrs_[n];
        const std::string label = slr_label(slr);
        if (!find_node(slr.numerator) || !find_node(slr.denominator)) {
            throw HierarchyError("SLR " + label + " refers to an unknown amalgamation", label);
        }
        if (slr.numerator == slr.denominator) throw HierarchyError("SLR " + label + " links a node to itself", label);
        const auto group = common_parent(slr.numerator, slr.denominator);
        if (!group) throw HierarchyError("SLR " + label + " does not link two sibling amalgamations", label);
        if (slr.step <= last_step) throw HierarchyError("SLR " + label + " has a non-increasing step number", label);
        last_step = slr.step;
        for (std::size_t m = 0; m < n; ++m) {
            const auto& other = slrs_[m];
            const bool same = (other.numerator == slr.numerator && other.denominator == slr.denominator) ||
                              (other.numerator == slr.denominator && other.denominator == slr.numerator);
            if (same) throw HierarchyError("SLR " + label + " is already committed", label);
        }
        const std::size_t count = ++per_group[*group];
        const std::size_t g = children_of(*group).size();
        if (count == g) {
            warnings.push_back("SLR " + label + " exceeds the " + std::to_string(g - 1) + " independent SLRs of its " +
                               std::to_string(g) + "-way sibling group and adds no variance");
        }
    }
    return warnings;
}

void AmalgamationHierarchy::add_roots(const std::vector<HierarchyNode>& roots, std::size_t part_count) {
    AmalgamationHierarchy next = *this;
    for (const auto& r : roots) next.nodes_.push_back({r.name, sorted_parts(r.parts)});
    next.validate(part_count);
    *this = std::move(next);
}

void AmalgamationHierarchy::add_split(const std::string& parent, const std::vector<HierarchyNode>& children,
                                      std::size_t part_count) {
    (void)node(parent);
    AmalgamationHierarchy next = *this;
    Split split{parent, {}};
    for (const auto& c : children) {
        next.nodes_.push_back({c.name, sorted_parts(c.parts)});
        split.children.push_back(c.name);
    }
    next.splits_.push_back(std::move(split));
    next.validate(part_count);
    *this = std::move(next);
}

const CommittedSlr& AmalgamationHierarchy::commit(const std::string& numerator, const std::string& denominator,
                                                  bool manual, std::size_t part_count) {
    AmalgamationHierarchy next = *this;
    const int step = slrs_.empty() ? 1 : slrs_.back().step + 1;
    next.slrs_.push_back({step, numerator, denominator, manual});
    next.validate(part_count);
    *this = std::move(next);
    return slrs_.back();
}

LogratioSpec AmalgamationHierarchy::spec_between(const std::string& numerator, const std::string& denominator,
                                                 std::size_t part_count) const {
    const auto& num = node(numerator);
    const auto& den = node(denominator);
    return make_logratio(num.parts, den.parts, part_count, num.name, den.name);
}

LogratioSpec AmalgamationHierarchy::spec_for(const CommittedSlr& slr, std::size_t part_count) const {
    return spec_between(slr.numerator, slr.denominator, part_count);
}

std::vector<LogratioSpec> AmalgamationHierarchy::committed_specs(std::size_t part_count) const {
    std::vector<LogratioSpec> out;
    out.reserve(slrs_.size());
    for (const auto& s : slrs_) out.push_back(spec_for(s, part_count));
    return out;
}

std::vector<LogratioSpec> AmalgamationHierarchy::sibling_candidates(const std::optional<std::string>& parent,
                                                                    std::size_t part_count) const {
    const auto children = children_of(parent);
    std::vector<LogratioSpec> out;
    for (std::size_t b = 1; b < children.size(); ++b) {
        for (std::size_t a = 0; a < b; ++a) out.push_back(spec_between(children[b], children[a], part_count));
    }
    return out;
}

CompositionMatrix amalgamation_view(const CompositionMatrix& m, const AmalgamationHierarchy& h,
                                    std::string_view target) {
    if (target == "parts") return m;
    std::vector<std::string> members;
    if (target == "roots") {
        members = h.roots();
    } else {
        members = h.children_of(h.node(target).name);
        if (members.empty()) throw HierarchyError("amalgamation '" + std::string(target) + "' is not divided", std::string(target));
    }
    if (members.size() < 2) throw HierarchyError("the view '" + std::string(target) + "' needs at least two amalgamations");
    std::vector<Amalgamation> groups;
    for (const auto& name : members) groups.push_back({name, h.node(name).parts});
    return amalgamate(m, groups);
}

}  // namespace coda
