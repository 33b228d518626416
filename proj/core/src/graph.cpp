#include "coda/graph.hpp"

#include "coda/error.hpp"

#include <algorithm>
#include <numeric>

namespace coda {

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSets::unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
    --components_;
    return true;
}

LogratioGraph plr_graph(std::span<const LogratioSpec> specs, const std::vector<std::string>& part_names) {
    PartSet mentioned;
    for (const auto& s : specs) {
        if (!s.is_plr()) throw InputError("graph edges must be pairwise logratios, got " + s.name(part_names));
        mentioned.push_back(s.numerator.front());
        mentioned.push_back(s.denominator.front());
    }
    std::sort(mentioned.begin(), mentioned.end());
    mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());

    LogratioGraph g;
    for (auto j : mentioned) g.vertices.push_back(part_names.at(j));
    auto vertex = [&](PartIndex j) {
        return static_cast<std::size_t>(std::lower_bound(mentioned.begin(), mentioned.end(), j) - mentioned.begin());
    };
    DisjointSets sets(mentioned.size());
    for (const auto& s : specs) {
        const auto a = vertex(s.numerator.front());
        const auto b = vertex(s.denominator.front());
        g.edges.emplace_back(a, b);
        if (!sets.unite(a, b)) g.acyclic = false;
    }
    g.connected = !mentioned.empty() && sets.components() == 1;
    return g;
}

}  // namespace coda
