#include <gtest/gtest.h>

#include "lzt/glnfq.hpp"

using namespace lzt;

namespace {

std::vector<std::vector<IrrLabel>> gl1_tuples(int n, int q) {
    const auto chis = irreducibles(1, q);
    std::vector<std::vector<IrrLabel>> out{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<IrrLabel>> next;
        for (const auto& t : out)
            for (const auto& c : chis) {
                auto u = t;
                u.push_back(c);
                next.push_back(u);
            }
        out = std::move(next);
    }
    return out;
}

ZElem product(const std::vector<IrrLabel>& chis, int q) {
    ZElem r = ZElem::one(q);
    for (const auto& c : chis) r = r * ZElem::irr(c);
    return r;
}

}  // namespace

// Cuspidal counts frozen from a brute-force enumeration.
TEST(Cuspidals, Counts) {
    EXPECT_EQ(cuspidals(1, 2).size(), 1u);
    EXPECT_EQ(cuspidals(1, 3).size(), 2u);
    EXPECT_EQ(cuspidals(2, 2).size(), 1u);
    EXPECT_EQ(cuspidals(2, 3).size(), 3u);
    EXPECT_EQ(cuspidals(2, 5).size(), 10u);
    EXPECT_EQ(cuspidals(3, 2).size(), 2u);
    for (const auto& c : cuspidals(2, 3)) EXPECT_EQ(irr_dim(c), 2);
    for (const auto& c : cuspidals(3, 2)) EXPECT_EQ(irr_dim(c), 3);
}

TEST(Cuspidals, SupportMultisets) {
    // GL_2(F_3): pairs of characters of F_3^x, plus the three cuspidals.
    EXPECT_EQ(cuspidal_multisets(2, 3).size(), 6u);
    EXPECT_EQ(cuspidal_multisets(3, 2).size(), 4u);
    for (const auto& pi : irreducibles(2, 3)) {
        const auto s = cuspidal_support(pi);
        EXPECT_GT(support_product(s, 3).coeff(2, pi.index), 0);
    }
}

TEST(Zelevinsky, DerivativeOfPrincipalSeries) {
    for (int q : {2, 3})
        for (int n = 1; n <= 3; ++n)
            for (const auto& chis : gl1_tuples(n, q)) {
                ZElem rhs = ZElem::one(q);
                for (const auto& c : chis) rhs = rhs * (ZElem::irr(c) + ZElem::one(q));
                EXPECT_EQ(D_map(product(chis, q)), rhs) << q << " " << n;
                for (int k = 0; k <= n; ++k) {
                    ZElem part(q);
                    for (const auto& [key, v] : rhs.terms())
                        if (key.first == n - k) part.add(key.first, key.second, v);
                    EXPECT_EQ(part, x_term(chis, k));
                }
            }
}

TEST(Zelevinsky, CuspidalDerivatives) {
    for (auto [n, q] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}})
        for (const auto& pi : cuspidals(n, q)) {
            EXPECT_EQ(derivative(pi, 0), ZElem::irr(pi));
            EXPECT_EQ(derivative(pi, n), ZElem::one(q));
            for (int k = 1; k < n; ++k) EXPECT_TRUE(derivative(pi, k).is_zero());
        }
}

TEST(Zelevinsky, DIsMultiplicative) {
    for (int q : {2, 3}) {
        std::vector<IrrLabel> small;
        for (int n = 1; n <= 2; ++n)
            for (const auto& l : irreducibles(n, q)) small.push_back(l);
        for (const auto& a : small)
            for (const auto& b : small) {
                if (a.n + b.n > 3 || (q == 3 && a.n + b.n > 2)) continue;
                const ZElem x = ZElem::irr(a), y = ZElem::irr(b);
                EXPECT_EQ(D_map(x * y), D_map(x) * D_map(y));
            }
    }
}

TEST(Zelevinsky, ProductIsCommutativeAndGraded) {
    const auto l1 = irreducibles(1, 3);
    const auto c2 = cuspidals(2, 2);
    EXPECT_EQ(ZElem::irr(l1[0]) * ZElem::irr(l1[1]), ZElem::irr(l1[1]) * ZElem::irr(l1[0]));
    const ZElem x = ZElem::irr(irreducibles(1, 2)[0]) * ZElem::irr(c2[0]);
    EXPECT_EQ(x.grades(), std::vector<int>{3});
    EXPECT_EQ(x.dimension(), 7);
    EXPECT_TRUE(x.is_genuine());
}

TEST(ZElem, TextRoundTrip) {
    ZElem x(3);
    x.add(0, 0, 2);
    x.add(2, 5, -1);
    x.add(1, 1, 4);
    EXPECT_EQ(x.to_string(), "3; [(0, 0, 2), (1, 1, 4), (2, 5, -1)]");
    EXPECT_EQ(ZElem::parse(x.to_string()), x);
    EXPECT_EQ(ZElem::parse("2; []"), ZElem(2));
    EXPECT_THROW(ZElem::parse("2 [(1, 0, 1)]"), std::invalid_argument);
    EXPECT_THROW(ZElem::parse("2; [(1, 0)]"), std::invalid_argument);
    EXPECT_THROW(ZElem(2) + ZElem(3), std::invalid_argument);
}

TEST(Derivative, RangeChecked) {
    const auto pi = irreducibles(2, 2)[1];
    EXPECT_THROW(derivative(pi, 3), std::invalid_argument);
    EXPECT_THROW(derivative(pi, -1), std::invalid_argument);
}

TEST(CentralCharacters, EveryCharacterIsCentralForSomeCuspidal) {
    for (int q : {2, 3, 5})
        for (const auto& chi : irreducibles(1, q)) {
            const auto cs = gl2_cuspidals_with_central(q, chi);
            EXPECT_FALSE(cs.empty());
            for (const auto& c : cs) EXPECT_TRUE(is_cuspidal(c));
        }
    // GL_2(F_5) has ten cuspidals spread over four central characters.
    std::size_t total = 0;
    for (const auto& chi : irreducibles(1, 5)) total += gl2_cuspidals_with_central(5, chi).size();
    EXPECT_EQ(total, 10u);
}
