#include "coda/error.hpp"
#include "coda/graph.hpp"
#include "coda/hierarchy.hpp"

#include "fatty_acids.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

namespace coda {
namespace {

AmalgamationHierarchy abc() {
    AmalgamationHierarchy h;
    h.add_roots({{"A", {0, 1}}, {"B", {2}}, {"C", {3, 4}}}, 5);
    return h;
}

std::string offending(const std::function<void()>& f) {
    try {
        f();
    } catch (const HierarchyError& e) {
        return e.offending().value_or("<none>");
    }
    return "<no error>";
}

TEST(Hierarchy, RootsAreSiblings) {
    const auto h = abc();
    EXPECT_EQ(h.roots(), (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_EQ(h.siblings_of("B"), h.roots());
    EXPECT_FALSE(h.parent_of("A"));
    ASSERT_TRUE(h.common_parent("A", "C"));
    EXPECT_FALSE(*h.common_parent("A", "C"));
}

TEST(Hierarchy, SplitMustPartitionParent) {
    auto h = abc();
    EXPECT_THROW(h.add_split("A", {{"a1", {0}}}, 5), HierarchyError);                  // one child
    EXPECT_THROW(h.add_split("A", {{"a1", {0}}, {"a2", {0, 1}}}, 5), HierarchyError);  // overlap
    EXPECT_THROW(h.add_split("A", {{"a1", {0}}, {"a2", {2}}}, 5), HierarchyError);     // outside
    EXPECT_THROW(h.add_split("Z", {{"a1", {0}}, {"a2", {1}}}, 5), HierarchyError);     // unknown parent
    EXPECT_EQ(h, abc());
    h.add_split("A", {{"a1", {0}}, {"a2", {1}}}, 5);
    EXPECT_EQ(h.children_of(std::string("A")), (std::vector<std::string>{"a1", "a2"}));
    EXPECT_EQ(*h.parent_of("a2"), "A");
    EXPECT_THROW(h.add_split("A", {{"x", {0}}, {"y", {1}}}, 5), HierarchyError);  // divided twice
}

TEST(Hierarchy, OverlappingRootsRejected) {
    AmalgamationHierarchy h;
    EXPECT_THROW(h.add_roots({{"A", {0, 1}}, {"B", {1, 2}}}, 3), HierarchyError);
    EXPECT_THROW(h.add_roots({{"A", {0}}, {"A", {1}}}, 3), HierarchyError);
    EXPECT_THROW(h.add_roots({{"A", {}}}, 3), HierarchyError);
    EXPECT_THROW(h.add_roots({{"A", {7}}}, 3), HierarchyError);
}

TEST(Hierarchy, CommitOnlyBetweenSiblings) {
    auto h = abc();
    h.add_split("A", {{"a1", {0}}, {"a2", {1}}}, 5);
    EXPECT_EQ(offending([&] { h.commit("a1", "B", false, 5); }), "log(a1/B)");
    EXPECT_EQ(offending([&] { h.commit("B", "B", false, 5); }), "log(B/B)");
    EXPECT_EQ(offending([&] { h.commit("Q", "B", false, 5); }), "log(Q/B)");
    h.commit("B", "A", false, 5);
    EXPECT_EQ(offending([&] { h.commit("A", "B", false, 5); }), "log(A/B)");  // same line
    const auto& s = h.commit("a2", "a1", true, 5);
    EXPECT_EQ(s.step, 2);
    EXPECT_TRUE(s.manual);
    EXPECT_EQ(h.slrs().size(), 2u);
}

TEST(Hierarchy, StepsMustIncrease) {
    const std::vector<HierarchyNode> nodes{{"A", {0}}, {"B", {1}}, {"C", {2}}};
    const AmalgamationHierarchy h(nodes, {}, {{2, "A", "B", false}, {2, "C", "B", false}});
    EXPECT_THROW(h.validate(3), HierarchyError);
}

TEST(Hierarchy, RedundantSlrIsAWarning) {
    auto h = abc();
    h.commit("B", "A", false, 5);
    h.commit("C", "A", false, 5);
    EXPECT_TRUE(h.validate(5).empty());
    h.commit("C", "B", false, 5);
    EXPECT_EQ(h.validate(5).size(), 1u);
}

TEST(Hierarchy, SiblingCandidatesLaterOverEarlier) {
    const auto h = abc();
    const std::vector<std::string> names{"p", "q", "r", "s", "t"};
    const auto c = h.sibling_candidates(std::nullopt, 5);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].name(names), "log(B/A)");
    EXPECT_EQ(c[1].name(names), "log(C/A)");
    EXPECT_EQ(c[2].name(names), "log(C/B)");
    EXPECT_EQ(c[1].numerator, (PartSet{3, 4}));
}

TEST(CaseStudyHierarchy, TwelveAmalgamationsAndSevenSlrs) {
    const std::vector<std::string> names{"14:0",      "i-15:0",    "a-15:0",    "15:0",     "16:0",
                                         "17:0",      "18:0",      "20:0",      "16:1(n-7)", "18:1(n-9)",
                                         "20:1(n-9)", "22:1(n-11)", "18:2(n-6)", "20:4(n-6)", "18:3(n-3)",
                                         "20:5(n-3)", "22:6(n-3)", "16:2(n-4)"};
    const auto h = testing::case_study_hierarchy(names);
    EXPECT_EQ(h.nodes().size(), 12u);  // 3 roots, 3 + 2 + 4 children
    EXPECT_EQ(h.slrs().size(), 7u);
    EXPECT_TRUE(h.validate(names.size()).empty());
    const auto& n3 = h.node("n3");
    EXPECT_EQ(n3.parts, (PartSet{14, 15, 16}));
    EXPECT_EQ(h.node("nX").parts, (PartSet{17}));
    EXPECT_EQ(h.node("i+a").parts, (PartSet{1, 2}));
    EXPECT_EQ(h.node("long").parts, (PartSet{10, 11}));
}

TEST(FattyAcidNames, Parse) {
    const auto a = testing::parse_fatty_acid("20:5(n-3)");
    ASSERT_TRUE(a);
    EXPECT_EQ(a->carbons, 20);
    EXPECT_EQ(a->double_bonds, 5);
    EXPECT_EQ(a->omega, 3);
    EXPECT_TRUE(testing::parse_fatty_acid("i-15:0")->branched);
    EXPECT_TRUE(testing::parse_fatty_acid("X16.1.n.7"));
    EXPECT_FALSE(testing::parse_fatty_acid("cholesterol"));
}

// ---- PLR graphs ----

TEST(PlrGraph, ChainIsATree) {
    const std::vector<std::string> names{"A", "B", "C", "D"};
    const std::vector<LogratioSpec> chain{make_plr(0, 1, 4), make_plr(1, 2, 4), make_plr(2, 3, 4)};
    const auto g = plr_graph(chain, names);
    EXPECT_TRUE(g.is_tree());
    EXPECT_EQ(g.vertices.size(), 4u);
}

TEST(PlrGraph, CycleAndForest) {
    const std::vector<std::string> names{"A", "B", "C", "D"};
    const std::vector<LogratioSpec> cycle{make_plr(0, 1, 4), make_plr(1, 2, 4), make_plr(2, 0, 4)};
    const auto g = plr_graph(cycle, names);
    EXPECT_FALSE(g.acyclic);
    const std::vector<LogratioSpec> forest{make_plr(0, 1, 4), make_plr(2, 3, 4)};
    const auto f = plr_graph(forest, names);
    EXPECT_TRUE(f.acyclic);
    EXPECT_FALSE(f.connected);
    const std::vector<LogratioSpec> parallel{make_plr(0, 1, 4), make_plr(1, 0, 4)};
    EXPECT_FALSE(plr_graph(parallel, names).acyclic);
    const std::vector<LogratioSpec> slr{make_logratio({0, 1}, {2}, 4)};
    EXPECT_THROW(plr_graph(slr, names), InputError);
}

TEST(PlrGraph, RandomSpanningTreesAreTrees) {
    // a tree on J vertices has J-1 edges and connects all parts
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t J = 4 + trial % 7;
        std::vector<std::string> names;
        for (std::size_t j = 0; j < J; ++j) names.push_back("p" + std::to_string(j));
        std::vector<LogratioSpec> edges;
        for (std::size_t j = 1; j < J; ++j) {
            std::uniform_int_distribution<std::size_t> pick(0, j - 1);
            edges.push_back(make_plr(j, pick(rng), J));
        }
        EXPECT_TRUE(plr_graph(edges, names).is_tree());
    }
}

TEST(DisjointSets, Components) {
    DisjointSets s(5);
    EXPECT_TRUE(s.unite(0, 1));
    EXPECT_TRUE(s.unite(3, 4));
    EXPECT_FALSE(s.unite(1, 0));
    EXPECT_EQ(s.components(), 3u);
    EXPECT_EQ(s.find(0), s.find(1));
    EXPECT_NE(s.find(0), s.find(3));
}

}  // namespace
}  // namespace coda
