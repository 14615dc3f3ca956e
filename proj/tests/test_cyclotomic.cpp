#include <gtest/gtest.h>

#include "lzt/cyclotomic.hpp"

using namespace lzt;

TEST(Cyclotomic, RootIdentities) {
    EXPECT_EQ(Cyclotomic::root(3, 1) + Cyclotomic::root(3, 2), Cyclotomic::integer(-1));
    EXPECT_EQ(Cyclotomic::root(4, 1) * Cyclotomic::root(4, 1), Cyclotomic::integer(-1));
    EXPECT_EQ(Cyclotomic::root(6, 2), Cyclotomic::root(3, 1));
    EXPECT_EQ(Cyclotomic::root(5, 7), Cyclotomic::root(5, 2));
    EXPECT_EQ(Cyclotomic::root(8, -1), Cyclotomic::root(8, 7));
}

TEST(Cyclotomic, SumOfAllRootsVanishes) {
    for (int e = 2; e <= 24; ++e) {
        Cyclotomic s = Cyclotomic::zero(e);
        for (int j = 0; j < e; ++j) s += Cyclotomic::root(e, j);
        EXPECT_TRUE(s.is_zero()) << e;
    }
}

TEST(Cyclotomic, GaussSumSquares) {
    // (sum_x zeta_p^{x^2})^2 = p * (-1)^{(p-1)/2}
    for (int p : {3, 5, 7, 11}) {
        Cyclotomic g = Cyclotomic::zero(p);
        for (int x = 0; x < p; ++x) g += Cyclotomic::root(p, x * x);
        const std::int64_t sign = ((p - 1) / 2) % 2 ? -1 : 1;
        EXPECT_EQ(g * g, Cyclotomic::integer(sign * p)) << p;
    }
}

TEST(Cyclotomic, ConjugationAndGalois) {
    const Cyclotomic z = Cyclotomic::root(12, 5) + 3 * Cyclotomic::root(12, 2);
    EXPECT_EQ(z.conj().conj(), z);
    EXPECT_EQ(z.galois(-1), z.conj());
    EXPECT_TRUE((z * z.conj()).conj() == z * z.conj());
}

TEST(Cyclotomic, RationalsAndDivision) {
    const Cyclotomic h = Cyclotomic::integer(3).divided_by(6);
    EXPECT_TRUE(h.is_rational());
    EXPECT_FALSE(h.is_integer());
    EXPECT_EQ(h.to_rational(), Rational(1, 2));
    EXPECT_EQ(h + h, Cyclotomic::integer(1));
}

TEST(Cyclotomic, TextRoundTrip) {
    const Cyclotomic vals[] = {Cyclotomic::integer(0), Cyclotomic::integer(-7), Cyclotomic::root(7, 3),
                               (Cyclotomic::root(9, 1) - Cyclotomic::root(9, 4)).divided_by(3)};
    for (const auto& v : vals) EXPECT_EQ(Cyclotomic::parse(v.to_string()), v) << v.to_string();
}

TEST(Cyclotomic, EvaluationIsARingMap) {
    const int e = 12;
    const std::uint64_t P = num::prime_one_mod(e, 1000);
    const std::uint64_t z = num::primitive_root_of_unity(e, P);
    const Cyclotomic a = Cyclotomic::root(e, 1) + 2 * Cyclotomic::root(e, 5);
    const Cyclotomic b = Cyclotomic::root(e, 3) - Cyclotomic::integer(4);
    EXPECT_EQ((a * b).eval_mod(P, z, e), num::mulmod(a.eval_mod(P, z, e), b.eval_mod(P, z, e), P));
    EXPECT_EQ((a + b).eval_mod(P, z, e), (a.eval_mod(P, z, e) + b.eval_mod(P, z, e)) % P);
}

TEST(Cyclotomic, FromExponentsCountsRoots) {
    // multiplicities of zeta_4^j: 1 + 1 + 1 + 1 = 0
    EXPECT_TRUE(Cyclotomic::from_exponents(4, {1, 1, 1, 1}).is_zero());
    EXPECT_EQ(Cyclotomic::from_exponents(4, {2, 0, 1, 0}), Cyclotomic::integer(1));
}
