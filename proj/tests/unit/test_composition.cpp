#include "coda/composition.hpp"
#include "coda/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace coda {
namespace {

CompositionMatrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) x(i, j++) = v;
        ++i;
    }
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < x.cols(); ++j) names.push_back("p" + std::to_string(j + 1));
    return CompositionMatrix(x, names);
}

CompositionMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::vector<std::string> names;
    for (int j = 0; j < cols; ++j) names.push_back("p" + std::to_string(j));
    return CompositionMatrix(testing::random_positive(rng, rows, cols), names);
}

TEST(CompositionMatrix, RejectsBadShapesAndValues) {
    EXPECT_THROW(matrix({{1.0, 2.0}}), InputError);
    EXPECT_THROW(matrix({{1.0}, {2.0}}), InputError);
    EXPECT_THROW(matrix({{1.0, -2.0}, {1.0, 1.0}}), InputError);
    EXPECT_THROW(CompositionMatrix(Eigen::MatrixXd::Ones(2, 2), {"a", "a"}), InputError);
    EXPECT_THROW(CompositionMatrix(Eigen::MatrixXd::Ones(2, 2), {"a", "b"}, {"only one"}), InputError);
}

TEST(CompositionMatrix, DefaultLabelsAndLookup) {
    const auto m = matrix({{1, 2, 3}, {4, 5, 6}});
    EXPECT_EQ(m.sample_labels(), (std::vector<std::string>{"1", "2"}));
    EXPECT_EQ(m.part_index("p3"), 2u);
    EXPECT_THROW(m.part_index("nope"), InputError);
}

TEST(PartWeights, UniformAndNormalized) {
    const auto w = PartWeights::uniform(4);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(w[j], 0.25);
    EXPECT_TRUE(w.is_uniform());

    const auto v = PartWeights::from_values(Eigen::Vector3d(1, 2, 5));
    EXPECT_NEAR(v.values().sum(), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(v[2], 5.0 / 8.0);
    EXPECT_THROW(PartWeights::from_values(Eigen::Vector2d(1, 0)), InputError);
}

TEST(PartWeights, ProportionalIsMeanClosedProportion) {
    const auto m = matrix({{1, 1, 2}, {2, 1, 1}});
    const auto w = PartWeights::proportional(m);
    EXPECT_NEAR(w[0], (0.25 + 0.5) / 2, 1e-15);
    EXPECT_NEAR(w[1], 0.25, 1e-15);
    EXPECT_NEAR(w[2], (0.5 + 0.25) / 2, 1e-15);
}

TEST(Close, ScalesRows) {
    const auto c = close(matrix({{2, 3, 5}, {1, 1, 2}}), 1.0);
    EXPECT_NEAR(c.values()(0, 0), 0.2, 1e-15);
    EXPECT_NEAR(c.values()(0, 1), 0.3, 1e-15);
    EXPECT_NEAR(c.values()(0, 2), 0.5, 1e-15);

    const auto quarter = close(matrix({{1, 1, 1, 1}, {1, 2, 3, 4}}), 1.0);
    for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(quarter.values()(0, j), 0.25);
}

TEST(Close, PublishedRowsAlreadySumToHundred) {
    // the first two rows of the published table, completed with a remainder part
    const double a[] = {13.854, 0.203, 1.190, 0.446, 0.847, 0.103};
    const double b[] = {11.827, 0.148, 1.236, 0.460, 1.056, 0.084};
    Eigen::MatrixXd x(2, 7);
    double sa = 0, sb = 0;
    for (int j = 0; j < 6; ++j) {
        x(0, j) = a[j];
        x(1, j) = b[j];
        sa += a[j];
        sb += b[j];
    }
    x(0, 6) = 100.0 - sa;
    x(1, 6) = 100.0 - sb;
    const CompositionMatrix m(x, {"14:0", "14:1(n-5)", "i-15:0", "a-15:0", "15:0", "15:1(n-6)", "rest"});
    const auto closed = close(m, 100.0);
    EXPECT_LT((closed.values() - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Close, AllZeroRowIsAnError) {
    try {
        close(CompositionMatrix(Eigen::MatrixXd{{1, 2}, {0, 0}}, {"a", "b"}), 1.0);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(ReplaceZeros, TwoThirdsOfColumnMinimum) {
    // column fragment of 14:1(n-5) from the published table
    Eigen::MatrixXd x(6, 2);
    x.col(0) << 0.203, 0.148, 0.0, 0.148, 0.193, 0.193;
    x.col(1).setConstant(1.0);
    const auto r = replace_zeros(CompositionMatrix(x, {"14:1(n-5)", "other"}));
    EXPECT_NEAR(r.matrix.values()(2, 0), 0.0986667, 1e-7);
    EXPECT_DOUBLE_EQ(r.matrix.values()(2, 0), 2.0 / 3.0 * 0.148);
    EXPECT_EQ(r.replaced_per_part, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(r.replaced_total(), 1u);
    // positive entries untouched
    EXPECT_EQ(r.matrix.values()(0, 0), 0.203);
    EXPECT_EQ(r.matrix.values().col(1), x.col(1));
}

TEST(ReplaceZeros, SinglePositiveMinimum) {
    const auto r = replace_zeros(matrix({{0, 1}, {5, 1}}));
    EXPECT_DOUBLE_EQ(r.matrix.values()(0, 0), 10.0 / 3.0);
    EXPECT_EQ(r.matrix.values()(1, 0), 5.0);
}

TEST(ReplaceZeros, AllZeroColumnNamesThePart) {
    try {
        replace_zeros(CompositionMatrix(Eigen::MatrixXd{{1, 0}, {2, 0}}, {"a", "ghost"}));
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(Plr, Examples) {
    const auto m = matrix({{1, std::exp(1.0)}, {5, 5}});
    const auto v = plr_values(m, 0, 1);
    EXPECT_NEAR(v(0), -1.0, 1e-15);
    EXPECT_EQ(v(1), 0.0);
    EXPECT_THROW(plr_values(m, 0, 0), InputError);
    EXPECT_THROW(plr_values(matrix({{0, 1}, {1, 1}}), 0, 1), InputError);
}

TEST(Clr, Examples) {
    const auto m = matrix({{1, std::exp(2.0)}, {3, 3}});
    const auto clr = clr_matrix(m, PartWeights::uniform(2));
    EXPECT_NEAR(clr(0, 0), -1.0, 1e-15);
    EXPECT_NEAR(clr(0, 1), 1.0, 1e-15);
    EXPECT_NEAR(clr(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(clr(1, 1), 0.0, 1e-15);
    EXPECT_THROW(clr_matrix(m, PartWeights::uniform(3)), InputError);
}

TEST(Slr, Examples) {
    const auto m = matrix({{0.2, 0.3, 0.5}, {0.1, 0.1, 0.8}});
    const auto spec = make_logratio({0, 2}, {1}, 3);
    EXPECT_NEAR(slr_values(m, spec)(0), std::log(0.7 / 0.3), 1e-15);
    EXPECT_NEAR(slr_values(m, spec)(0), 0.8473, 1e-4);
    EXPECT_THROW(make_logratio({0, 1}, {1}, 3), InputError);
    EXPECT_THROW(make_logratio({}, {1}, 3), InputError);
    EXPECT_THROW(make_logratio({0}, {3}, 3), InputError);
}

TEST(LogratioSpec, NamesAndIdentity) {
    const std::vector<std::string> names{"A", "B", "C"};
    EXPECT_EQ(make_plr(0, 1, 3).name(names), "log(A/B)");
    EXPECT_EQ(make_logratio({2, 0}, {1}, 3).name(names), "log((A+C)/B)");
    EXPECT_EQ(make_logratio({0}, {1, 2}, 3, "X", "Y").name(names), "log(X/Y)");
    EXPECT_TRUE(make_plr(0, 1, 3).same_line(make_plr(1, 0, 3)));
    EXPECT_FALSE(make_plr(0, 1, 3).same_sets(make_plr(1, 0, 3)));
    EXPECT_EQ(all_plrs({0, 1, 2, 3}, 4).size(), 6u);
}

TEST(Amalgamate, Examples) {
    const auto m = matrix({{0.2, 0.3, 0.5}, {0.1, 0.6, 0.3}});
    const std::vector<Amalgamation> groups{{"g1", {0, 2}}, {"g2", {1}}};
    const auto a = amalgamate(m, groups);
    EXPECT_EQ(a.part_names(), (std::vector<std::string>{"g1", "g2"}));
    EXPECT_NEAR(a.values()(0, 0), 0.7, 1e-15);
    EXPECT_NEAR(a.values()(0, 1), 0.3, 1e-15);

    const std::vector<Amalgamation> singletons{{"p1", {0}}, {"p2", {1}}, {"p3", {2}}};
    EXPECT_EQ(amalgamate(m, singletons).values(), m.values());

    const std::vector<Amalgamation> overlap{{"g1", {0, 1}}, {"g2", {1, 2}}};
    try {
        amalgamate(m, overlap);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("p2"), std::string::npos);
    }
}

TEST(Amalgamate, DropsUncoveredParts) {
    const auto m = matrix({{1, 2, 3, 4}, {4, 3, 2, 1}});
    const std::vector<Amalgamation> groups{{"a", {0}}, {"b", {1, 2}}};
    const auto a = amalgamate(m, groups);
    EXPECT_EQ(a.parts(), 2u);
    EXPECT_EQ(a.values()(0, 1), 5.0);
}

// ---- properties over random matrices ----

TEST(CompositionProperties, HoldOnRandomMatrices) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> rows(2, 20), cols(2, 12);
    std::uniform_real_distribution<double> scale(0.01, 1000.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_matrix(rng, rows(rng), cols(rng));
        const int J = static_cast<int>(m.parts());
        const auto w = PartWeights::from_values(Eigen::Map<const Eigen::VectorXd>(
            testing::random_weights(rng, J).data(), J));
        const auto closed = close(m, scale(rng));
        const auto clr = clr_matrix(m, w);
        const auto clr_closed = clr_matrix(closed, w);

        // weighted row means of the CLRs vanish
        EXPECT_LT((clr * w.values()).cwiseAbs().maxCoeff(), 1e-10);
        // closure invariance
        EXPECT_LT((clr - clr_closed).cwiseAbs().maxCoeff(), 1e-12);

        for (int j = 0; j < J; ++j) {
            for (int k = 0; k < J; ++k) {
                if (j == k) continue;
                const auto plr = plr_values(m, j, k);
                EXPECT_LT((plr + plr_values(m, k, j)).cwiseAbs().maxCoeff(), 1e-15);
                EXPECT_LT((plr - plr_values(closed, j, k)).cwiseAbs().maxCoeff(), 1e-12);
                EXPECT_EQ(plr, slr_values(m, make_plr(j, k, m.parts())));
                EXPECT_LT((plr - (clr.col(j) - clr.col(k))).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
        if (J >= 3) {
            const auto spec = make_logratio({0, 1}, {2}, m.parts());
            EXPECT_LT((slr_values(m, spec) - slr_values(closed, spec)).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

}  // namespace
}  // namespace coda
