#include <gtest/gtest.h>

#include "lzt/clifford.hpp"

using namespace lzt;

namespace {

KMat km(int r, int c, std::vector<int> a) {
    KMat m(r, c);
    m.a = std::move(a);
    return m;
}

}  // namespace

TEST(KMat, KeyRoundTripAndText) {
    const KMat x = km(2, 3, {1, 0, 2, 2, 1, 0});
    EXPECT_EQ(KMat::from_key(x.key(3), 2, 3, 3), x);
    EXPECT_EQ(x.to_string(), "[1,0,2;2,1,0]");
}

TEST(KMat, RankFormAndKernels) {
    const KMat x = km(2, 2, {1, 1, 1, 1});
    const auto rf = kmat::rank_form(x, 2);
    EXPECT_EQ(rf.t, 1);
    EXPECT_EQ(kmat::mul(kmat::mul(rf.P, x, 2), rf.Q, 2), km(2, 2, {1, 0, 0, 0}));
    EXPECT_EQ(kmat::right_kernel(x, 2).size(), 1u);
    EXPECT_EQ(kmat::column_space(x, 2).size(), 1u);
    const KMat g = km(2, 2, {1, 1, 0, 1});
    EXPECT_EQ(kmat::mul(g, kmat::inverse(g, 3), 3), KMat::identity(2));
}

// Orbit counts frozen from a brute-force enumeration, identical for q = 2, 3.
TEST(ResidueOrbits, Counts) {
    const std::vector<std::pair<std::vector<int>, std::size_t>> cases{
        {{1, 1}, 2}, {{1, 2}, 2}, {{2, 1}, 2}, {{1, 1, 1}, 3}, {{2, 2}, 3}, {{1, 3}, 2},
        {{3, 1}, 2}, {{1, 1, 2}, 4}, {{1, 2, 1}, 3}, {{2, 1, 1}, 3}, {{1, 1, 1, 1}, 4}};
    for (int p : {2, 3})
        for (const auto& [parts, count] : cases) EXPECT_EQ(residue_orbits(Partition(parts), p).size(), count) << p;
}

TEST(ResidueOrbits, EveryNonzeroOrbitIsCertified) {
    for (int p : {2, 3})
        for (int n = 2; n <= 4; ++n)
            for (const auto& I : compositions(n)) {
                if (I.r() < 2) continue;
                for (const auto& orb : residue_orbits(I, p)) {
                    if (orb.front().is_zero()) continue;
                    const auto nf = orbit_normal_form(orb.front(), I, p);
                    EXPECT_TRUE(nf.certified) << I.to_string() << " " << nf.certificate;
                    EXPECT_NE(nf.tag, OrbitTag::Zero);
                    for (const auto& A : orb) {
                        const auto other = orbit_normal_form(A, I, p);
                        EXPECT_EQ(other.tag, nf.tag);
                        EXPECT_TRUE(other.certified);
                    }
                }
            }
}

TEST(NormalForm, Examples) {
    const auto a = orbit_normal_form(km(1, 1, {2}), Partition({1, 1}), 3);
    EXPECT_EQ(a.tag, OrbitTag::Cond2);
    EXPECT_EQ(a.rep, km(1, 1, {1}));
    const auto b = orbit_normal_form(km(2, 2, {1, 1, 1, 1}), Partition({2, 2}), 2);
    EXPECT_EQ(b.tag, OrbitTag::Cond1);
    EXPECT_EQ(b.t, 1);
    EXPECT_EQ(b.subspace.size(), 1u);
    const auto c = orbit_normal_form(km(2, 2, {1, 0, 0, 1}), Partition({2, 2}), 2);
    EXPECT_EQ(c.tag, OrbitTag::Cond2);
    EXPECT_THROW(orbit_normal_form(km(1, 1, {0}), Partition({1, 1}), 2), std::invalid_argument);
    EXPECT_THROW(orbit_normal_form(km(1, 2, {1, 0}), Partition({1, 1}), 2), std::invalid_argument);
}

TEST(Clifford, SetupPreconditions) {
    EXPECT_THROW(clifford_setup(Partition({2}), 1, 2, 2), std::invalid_argument);
    EXPECT_THROW(clifford_setup(Partition({1, 1}), 2, 2, 2), std::invalid_argument);
    EXPECT_THROW(clifford_setup(Partition({1, 1}), 0, 2, 2), std::invalid_argument);
}

TEST(Clifford, ZeroOrbitStabilizerIsEverything) {
    const auto s = clifford_setup(Partition({1, 1}), 1, 2, 3);
    const auto orbits = clifford_orbits(s);
    ASSERT_FALSE(orbits.empty());
    EXPECT_TRUE(orbits[0].rep.is_zero());
    EXPECT_EQ(orbits[0].Z.order(), s.P1m.order());
    std::size_t total = 0;
    for (const auto& o : orbits) {
        total += o.members.size();
        EXPECT_EQ(o.members.size() * o.Z.order(), s.P1m.order());
    }
    EXPECT_EQ(total, s.character_count());
}

class CliffordGrid : public ::testing::TestWithParam<std::tuple<std::vector<int>, int, int, int>> {};

TEST_P(CliffordGrid, DecompositionIsExact) {
    const auto& [parts, p, M, m] = GetParam();
    const auto s = clifford_setup(Partition(parts), m, M, p);
    const auto r = clifford_decomposition_check(s);
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_EQ(r.identity_multiplicity, Rational(1));
    EXPECT_EQ(r.orbit_dim_sum, r.index);
    EXPECT_TRUE(r.zero_stabilizer_full);
    EXPECT_TRUE(normality_check(s));
    std::string why;
    EXPECT_TRUE(theta_check(s, &why)) << why;
}

INSTANTIATE_TEST_SUITE_P(Fast, CliffordGrid,
                         ::testing::Values(std::make_tuple(std::vector<int>{1, 1}, 2, 2, 1),
                                           std::make_tuple(std::vector<int>{1, 1}, 2, 3, 1),
                                           std::make_tuple(std::vector<int>{1, 1}, 2, 3, 2),
                                           std::make_tuple(std::vector<int>{1, 1}, 3, 2, 1)));

TEST(TracePairing, Nondegenerate) {
    for (int p : {2, 3})
        for (auto [a, b] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 2}, std::pair{1, 3}})
            EXPECT_TRUE(trace_pairing_check(a, b, p)) << p << " " << a << "x" << b;
}

TEST(UEta, ExtendsEtaAndIsLinear) {
    for (auto [p, m, M] : {std::tuple{2, 1, 2}, std::tuple{3, 1, 2}, std::tuple{2, 2, 3}}) {
        const auto u = u_eta_character_n1(1, p, m, M);
        EXPECT_EQ(u.U.degree(), 1);
        EXPECT_EQ(inner_product(u.U, u.U), Rational(1));
        EXPECT_TRUE(u.setup.K.is_subgroup_of(u.Z));
    }
    EXPECT_THROW(u_eta_character_n1(1, 2, 1, 2, km(1, 1, {0})), std::invalid_argument);
}

// Without dividing by the corner entry the formula is a character only when
// the residue field is F_2, where the corner entry is always 1 mod p.
TEST(UEta, CornerNormalizationIsNeeded) {
    for (int p : {2, 3}) {
        const auto u = u_eta_character_n1(1, p, 1, 2);
        const auto& G = *u.setup.G;
        bool multiplicative = true;
        for (auto x : u.Z.elements())
            for (auto y : u.Z.elements()) {
                const int ex = u.setup.eta_exponent(u.A, G.element(x));
                const int ey = u.setup.eta_exponent(u.A, G.element(y));
                if ((ex + ey) % p != u.setup.eta_exponent(u.A, G.element(G.mul(x, y)))) multiplicative = false;
            }
        EXPECT_EQ(multiplicative, p == 2) << p;
    }
}

TEST(Casselman, PiecesAreIrreducibleAndMatchCliffordForm) {
    // (p, M, i, dimension) frozen from the brute-force oracle.
    for (auto [p, M, i, dim] : {std::tuple{2, 2, 2, 3}, std::tuple{2, 3, 2, 3}, std::tuple{2, 3, 3, 6}, std::tuple{3, 2, 2, 8}})
        for (const auto& varpi : irreducibles(1, p)) {
            const auto u = casselman_u_i(varpi, i, M);
            EXPECT_EQ(inner_product(u, u), Rational(1));
            EXPECT_EQ(u.degree(), dim);
            EXPECT_EQ(u, casselman_clifford_form(varpi, i, M));
        }
}

TEST(Casselman, FirstPieceAndRanges) {
    EXPECT_EQ(casselman_u_i(irreducibles(1, 2)[0], 1, 2).degree(), 3);
    EXPECT_EQ(casselman_u_i(irreducibles(1, 3)[1], 1, 2).degree(), 4);
    EXPECT_THROW(casselman_u_i(irreducibles(1, 2)[0], 3, 2), std::invalid_argument);
    EXPECT_THROW(casselman_clifford_form(irreducibles(1, 2)[0], 1, 2), std::invalid_argument);
    EXPECT_THROW(casselman_u_i(irreducibles(2, 2)[0], 1, 2), std::invalid_argument);
}
