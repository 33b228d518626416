#ifndef CODA_GRAPH_HPP
#define CODA_GRAPH_HPP

#include "coda/composition.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace coda {

/// Undirected graph with one vertex per part mentioned by a set of PLRs and
/// one edge per PLR.
struct LogratioGraph {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // indices into `vertices`
    bool connected = false;
    bool acyclic = true;

    bool is_tree() const noexcept { return connected && acyclic; }
};

/// Throws InputError if any spec is not a PLR. Parallel edges count as a cycle.
LogratioGraph plr_graph(std::span<const LogratioSpec> specs, const std::vector<std::string>& part_names);

/// Disjoint-set forest with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n);
    std::size_t find(std::size_t x);
    /// False when x and y were already in the same set.
    bool unite(std::size_t x, std::size_t y);
    std::size_t components() const noexcept { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t components_;
};

}  // namespace coda

#endif  // CODA_GRAPH_HPP
