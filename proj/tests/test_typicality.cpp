#include <gtest/gtest.h>

#include "lzt/report.hpp"
#include "lzt/typicality.hpp"

using namespace lzt;

namespace {

IrrLabel L(int q, int n, int i) { return {q, n, i}; }

}  // namespace

TEST(InertialClasses, SortedAndCompared) {
    const auto a = inertial_class({L(3, 1, 1), L(3, 1, 0)});
    EXPECT_EQ(a.to_string(), "{(1,0),(1,1)}");
    EXPECT_TRUE(inertial_eq(a, inertial_class({L(3, 1, 0), L(3, 1, 1)})));
    EXPECT_FALSE(inertial_eq(a, inertial_class({L(3, 1, 0), L(3, 1, 0)})));
    EXPECT_THROW(inertial_eq(a, inertial_class({L(2, 1, 0), L(2, 1, 0)})), std::invalid_argument);
    EXPECT_THROW(inertial_eq(a, inertial_class({L(3, 1, 0)})), std::invalid_argument);
    EXPECT_THROW(inertial_class({}), std::invalid_argument);
}

// Counts frozen from a brute-force enumeration.
TEST(InertialClasses, LevelZeroCounts) {
    EXPECT_EQ(level_zero_classes(1, 2).size(), 1u);
    EXPECT_EQ(level_zero_classes(2, 2).size(), 2u);
    EXPECT_EQ(level_zero_classes(2, 3).size(), 6u);
    EXPECT_EQ(level_zero_classes(3, 2).size(), 4u);
    EXPECT_EQ(level_zero_classes(3, 3).size(), 18u);
    const auto c = level_zero_classes(2, 3);
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
}

TEST(TauI, BuildValidation) {
    EXPECT_THROW(build_tau_I(Partition({1, 1}), {L(2, 1, 0)}, 2), std::invalid_argument);
    EXPECT_THROW(build_tau_I(Partition({2}), {L(2, 1, 0)}, 2), std::invalid_argument);
    EXPECT_THROW(build_tau_I(Partition({2}), {L(2, 2, 0)}, 2), std::invalid_argument);
    EXPECT_THROW(build_tau_I(Partition({1, 1}), {L(2, 1, 0), L(3, 1, 0)}, 2), std::invalid_argument);
    const auto t = build_tau_I(Partition({1, 1}), {L(3, 1, 1), L(3, 1, 0)}, 2);
    EXPECT_EQ(t.chi.degree(), 1);
    EXPECT_EQ(t.P1.order(), 972u);
    EXPECT_EQ(inner_product(t.chi, t.chi), Rational(1));
    // tau_I is trivial on the unipotent radical.
    const Subgroup U = subgroup(t.G, {SubgroupKind::Unipotent, t.I, 1});
    EXPECT_EQ(inner_product(restrict_to(t.chi, U), trivial_character(U)), Rational(1));
}

TEST(UmTau, SmallExamples) {
    const auto t = build_tau_I(Partition({1, 1}), {L(2, 1, 0), L(2, 1, 0)}, 2);
    EXPECT_TRUE(u_m_character(t, 1) == zero_function(Subgroup::full(t.G)));
    const auto u2 = u_m_character(t, 2);
    EXPECT_EQ(u2.degree(), 3);
    EXPECT_EQ(inner_product(u2, u2), Rational(1));
    EXPECT_TRUE(multiplicity_one_check(t, 2));
    EXPECT_TRUE(split_identity_check(t, 2));
    EXPECT_THROW(u_m_character(t, 3), std::invalid_argument);
}

// U_m dimensions frozen from the brute-force oracle.
TEST(UmTau, OracleDimensions) {
    EXPECT_EQ(u_m_character(build_tau_I(Partition({1, 1}), {L(3, 1, 0), L(3, 1, 0)}, 2), 2).degree(), 8);
    const auto t = build_tau_I(Partition({1, 1}), {L(2, 1, 0), L(2, 1, 0)}, 3);
    EXPECT_EQ(u_m_character(t, 2).degree(), 3);
    EXPECT_EQ(u_m_character(t, 3).degree(), 9);
}

TEST(Witness, TrivialCharacterPointsAtPrincipalSeries) {
    const Subgroup G = Subgroup::full(gl_group(2, make_ring(2, 2)));
    const auto w = atypicality_witness(trivial_character(G), inertial_class({L(2, 2, 1)}), 2);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->t, inertial_class({L(2, 1, 0), L(2, 1, 0)}));
    EXPECT_EQ(w->mprime, 1);
    EXPECT_GT(w->pairing.numerator(), 0);
}

TEST(Witness, ShadowValidation) {
    EXPECT_THROW(shadow_character(inertial_class({L(2, 1, 0), L(2, 1, 0)}), 3, 2), std::invalid_argument);
    EXPECT_EQ(block_shadow(L(2, 2, 1), 1).degree(), 1);
    EXPECT_EQ(block_shadow(L(2, 2, 1), 2).degree(), 1 + 3);
}

class MainGrid : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(MainGrid, EveryClassPasses) {
    const auto [q, M] = GetParam();
    for (const auto& s : level_zero_classes(2, q))
        for (const auto& [I, labels] : orderings(s)) {
            const auto cor = verify_corollary(I, labels, M);
            EXPECT_TRUE(cor.pass) << s.to_string() << " " << cor.note;
            for (int m = 2; m <= M; ++m) {
                const auto r = verify_main_theorem(I, labels, m, M);
                EXPECT_TRUE(r.pass) << s.to_string() << " m=" << m << " " << r.note;
                if (I.r() < 2) continue;
                EXPECT_FALSE(r.constituents.empty());
                for (const auto& c : r.constituents) {
                    ASSERT_TRUE(c.witness.has_value());
                    EXPECT_FALSE(c.witness->t == s);
                    EXPECT_EQ(c.multiplicities, std::vector<std::int64_t>{1});
                }
            }
        }
}

INSTANTIATE_TEST_SUITE_P(Fast, MainGrid, ::testing::Values(std::make_tuple(2, 2), std::make_tuple(2, 3), std::make_tuple(3, 2)));

TEST(MainTheorem, KnownConstituent) {
    const auto r = verify_main_theorem(Partition({1, 1}), {L(2, 1, 0), L(2, 1, 0)}, 2, 2);
    ASSERT_EQ(r.constituents.size(), 1u);
    EXPECT_EQ(r.constituents[0].irr, 10);
    EXPECT_EQ(r.constituents[0].dimension, 3);
    ASSERT_TRUE(r.constituents[0].witness.has_value());
    EXPECT_EQ(r.constituents[0].witness->t, inertial_class({L(2, 2, 1)}));
    EXPECT_EQ(r.constituents[0].witness->mprime, 2);
}

TEST(MainTheorem, SingleBlockIsVacuous) {
    const auto r = verify_main_theorem(Partition({2}), {L(2, 2, 1)}, 2, 2);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.constituents.empty());
}

TEST(Orderings, DistinctArrangements) {
    EXPECT_EQ(orderings(inertial_class({L(3, 1, 0), L(3, 1, 1)})).size(), 2u);
    EXPECT_EQ(orderings(inertial_class({L(3, 1, 0), L(3, 1, 0)})).size(), 1u);
    EXPECT_EQ(orderings(inertial_class({L(2, 1, 0), L(2, 2, 1)})).size(), 2u);
}

TEST(Iwahori, InductionIdentity) {
    const auto G = gl_group(2, make_ring(2, 3));
    const Partition I({1, 1});
    const Subgroup J = subgroup(G, {SubgroupKind::ParabolicOneM, I, 2});
    EXPECT_TRUE(iwahori_induction_check(J, J, trivial_character(J), I).ok);
    const auto t = build_tau_I(I, {L(2, 1, 0), L(2, 1, 0)}, 3);
    for (int m = 1; m <= 3; ++m) {
        const auto r = iwahori_induction_instance(t, m);
        EXPECT_TRUE(r.ok) << r.detail;
    }
    const auto t3 = build_tau_I(I, {L(3, 1, 0), L(3, 1, 1)}, 2);
    EXPECT_TRUE(iwahori_induction_instance(t3, 2).ok);
}

TEST(Iwahori, RejectsNonContainment) {
    const auto G = gl_group(2, make_ring(2, 2));
    const Partition I({1, 1});
    const Subgroup A = subgroup(G, {SubgroupKind::Parabolic, I, 2});
    const Subgroup B = subgroup(G, {SubgroupKind::Parabolic, I, 1});
    EXPECT_FALSE(iwahori_induction_check(A, B, trivial_character(B), I).ok);
}

TEST(Twists, CommuteWithTypicalConstituents) {
    const auto t = build_tau_I(Partition({1, 1}), {L(3, 1, 0), L(3, 1, 1)}, 2);
    const auto chi = L(3, 1, 1);
    const auto tw = twist_class(t, chi);
    EXPECT_EQ(tw.inertial(), twist_class(t.inertial(), chi));
    const auto T = character_table(Subgroup::full(t.G));
    std::vector<int> moved;
    for (int i : typical_constituents(t)) moved.push_back(twist_irr(*T, i, chi));
    std::sort(moved.begin(), moved.end());
    EXPECT_EQ(moved, typical_constituents(tw));
}

TEST(Report, JsonShape) {
    const auto r = verify_main_theorem(Partition({1, 1}), {L(2, 1, 0), L(2, 1, 0)}, 2, 2);
    const auto j = to_json(r);
    EXPECT_EQ(j["schema"], "lzt.report/1");
    EXPECT_EQ(j["kind"], "main");
    EXPECT_EQ(j["verdict"], "PASS");
    EXPECT_EQ(j["configuration"]["m"], 2);
    EXPECT_EQ(j["constituents"][0]["witness"]["depth"], 2);
    EXPECT_EQ(j["class"].size(), 2u);
}
