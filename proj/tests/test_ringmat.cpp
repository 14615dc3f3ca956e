#include <gtest/gtest.h>

#include "lzt/ringmat.hpp"

using namespace lzt;

namespace {

std::shared_ptr<const GLGroup> G(int n, int p, int m) { return gl_group(n, make_ring(p, m)); }

}  // namespace

TEST(Ring, Validation) {
    EXPECT_THROW(make_ring(4, 1), std::invalid_argument);
    EXPECT_THROW(make_ring(2, 0), std::invalid_argument);
    const auto R = make_ring(3, 2);
    EXPECT_EQ(R.mod, 9);
    EXPECT_TRUE(R.is_unit(4));
    EXPECT_FALSE(R.is_unit(6));
    EXPECT_EQ(R.unit_count(), 6);
}

// Orders frozen from a brute-force enumeration.
TEST(GLGroup, OrdersMatchEnumeration) {
    EXPECT_EQ(G(2, 2, 1)->order(), 6u);
    EXPECT_EQ(G(2, 3, 1)->order(), 48u);
    EXPECT_EQ(G(3, 2, 1)->order(), 168u);
    EXPECT_EQ(G(2, 2, 2)->order(), 96u);
    EXPECT_EQ(G(2, 3, 2)->order(), 3888u);
    EXPECT_EQ(G(2, 2, 3)->order(), 1536u);
    EXPECT_EQ(gl_order(3, make_ring(2, 2)), 86016u);
    EXPECT_EQ(gl_order(3, make_ring(3, 1)), 11232u);
}

TEST(GLGroup, GroupLaws) {
    const auto g = G(2, 2, 2);
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(g->order()); ++i) {
        EXPECT_EQ(g->mul(i, g->inverse(i)), g->identity());
        EXPECT_EQ(g->mul(g->identity(), i), i);
    }
    EXPECT_EQ(g->index_of(mat::from_rows({{2, 0}, {0, 1}}, 4)), -1);
}

TEST(GLGroup, BudgetExceeded) {
    EXPECT_THROW(GLGroup(4, make_ring(2, 2), 200000), BudgetExceeded);
    EXPECT_THROW(GLGroup(2, make_ring(5, 1), 100), BudgetExceeded);
}

TEST(Mat, TextRoundTripAndInverse) {
    const Mat x = mat::from_rows({{1, 3}, {2, 7}}, 9);
    EXPECT_EQ(mat::parse(mat::to_string(x), 9), x);
    const auto inv = mat::inverse(x, make_ring(3, 2));
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(mat::mul(x, *inv, 9), mat::identity(2));
    EXPECT_FALSE(mat::inverse(mat::from_rows({{3, 0}, {0, 1}}, 9), make_ring(3, 2)).has_value());
}

TEST(Partition, ParseAndCompositions) {
    EXPECT_EQ(Partition::parse("1,2,1").parts, (std::vector<int>{1, 2, 1}));
    EXPECT_EQ(Partition({2, 2}).to_string(), "2,2");
    EXPECT_THROW(Partition({0, 2}), std::invalid_argument);
    for (int n = 1; n <= 4; ++n) EXPECT_EQ(compositions(n).size(), std::size_t{1} << (n - 1));
}

// Subgroup orders frozen from a brute-force enumeration.
TEST(Subgroups, ParabolicOrders) {
    auto order = [](int p, int M, int level) {
        return subgroup(G(2, p, M), {SubgroupKind::Parabolic, Partition({1, 1}), level}).order();
    };
    EXPECT_EQ(order(2, 2, 1), 32u);
    EXPECT_EQ(order(2, 2, 2), 16u);
    EXPECT_EQ(order(3, 2, 1), 972u);
    EXPECT_EQ(order(3, 2, 2), 324u);
    EXPECT_EQ(order(2, 3, 1), 512u);
    EXPECT_EQ(order(2, 3, 2), 256u);
    EXPECT_EQ(order(2, 3, 3), 128u);
}

TEST(Subgroups, ContainmentChain) {
    const auto g = G(3, 2, 1);
    const auto g2 = G(2, 3, 2);
    for (const auto& grp : {g2}) {
        const Partition I({1, 1});
        const auto P1 = subgroup(grp, {SubgroupKind::Parabolic, I, 1});
        const auto P2 = subgroup(grp, {SubgroupKind::Parabolic, I, 2});
        const auto P12 = subgroup(grp, {SubgroupKind::ParabolicOneM, I, 2});
        const auto K = subgroup(grp, {SubgroupKind::KI, I, 1});
        EXPECT_TRUE(P2.is_subgroup_of(P12));
        EXPECT_TRUE(P12.is_subgroup_of(P1));
        EXPECT_TRUE(K.is_subgroup_of(P1));
    }
    EXPECT_EQ(subgroup(g, {SubgroupKind::Borel, Partition({3}), 1}).order(), 8u);
    EXPECT_EQ(subgroup(g, {SubgroupKind::Mirabolic, Partition({3}), 1}).order(), 24u);
}

TEST(Subgroups, Preconditions) {
    const auto g = G(2, 2, 2);
    EXPECT_THROW(make_subgroup(g, {SubgroupKind::Parabolic, Partition({1, 1}), 3}), std::invalid_argument);
    EXPECT_THROW(make_subgroup(g, {SubgroupKind::KI, Partition({2}), 1}), std::invalid_argument);
    EXPECT_THROW(make_subgroup(g, {SubgroupKind::Parabolic, Partition({1, 2}), 1}), std::invalid_argument);
    EXPECT_THROW(Subgroup::generated_by(g, "bad", {mat::from_rows({{2, 0}, {0, 1}}, 4)}), std::invalid_argument);
}

TEST(Iwahori, KnownFactorization) {
    const auto g = G(2, 2, 2);
    const auto H = subgroup(g, {SubgroupKind::Parabolic, Partition({1, 1}), 1});
    const auto f = iwahori_factorize(mat::from_rows({{1, 1}, {2, 1}}, 4), Partition({1, 1}), H);
    EXPECT_EQ(mat::to_string(f.lower), "[1,0;2,1]");
    EXPECT_EQ(mat::to_string(f.levi), "[1,0;0,3]");
    EXPECT_EQ(mat::to_string(f.upper), "[1,1;0,1]");
}

TEST(Iwahori, EveryElementOfPI1mFactors) {
    for (auto [p, M] : {std::pair{2, 3}, std::pair{3, 2}}) {
        const auto g = G(2, p, M);
        for (int m = 1; m <= M; ++m) {
            const auto H = subgroup(g, {SubgroupKind::ParabolicOneM, Partition({1, 1}), m});
            for (auto x : H.elements()) {
                const auto f = iwahori_factorize(g->element(x), Partition({1, 1}), H);
                EXPECT_EQ(mat::mul(mat::mul(f.lower, f.levi, g->ring().mod), f.upper, g->ring().mod), g->element(x));
            }
        }
    }
}

TEST(Iwahori, MissingDecompositionIsReported) {
    const auto g = G(2, 2, 1);
    const auto full = Subgroup::full(g);
    EXPECT_THROW(iwahori_factorize(mat::from_rows({{0, 1}, {1, 0}}, 2), Partition({1, 1}), full), std::invalid_argument);
}

TEST(Lattices, StabilizerEqualsPI1m) {
    const std::vector<std::tuple<std::vector<int>, int, int>> cases{
        {{1, 1}, 2, 2}, {{1, 1}, 2, 3}, {{1, 1}, 3, 2}, {{1, 2}, 2, 1}, {{2, 1}, 2, 1}, {{1, 1, 1}, 2, 1}, {{1, 1, 1}, 3, 1}};
    for (const auto& [parts, p, M] : cases)
        for (int m = 1; m <= M; ++m) EXPECT_TRUE(lattice_stabilizer_check(Partition(parts), m, M, p)) << p << " " << M << " " << m;
}
