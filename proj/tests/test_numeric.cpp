#include <gtest/gtest.h>

#include <algorithm>

#include "lzt/modp.hpp"
#include "lzt/numeric.hpp"

using namespace lzt;

TEST(Numeric, ModularArithmetic) {
    EXPECT_EQ(num::powmod(3, 200, 1000000007ull), num::powmod(9, 100, 1000000007ull));
    for (std::uint64_t a = 1; a < 97; ++a) EXPECT_EQ(num::mulmod(a, num::invmod(a, 97), 97), 1u);
    EXPECT_EQ(num::ipow(3, 4), 81);
    EXPECT_EQ(num::lcm64(4, 6), 12);
}

TEST(Numeric, PrimalityAgreesWithTrialDivision) {
    for (std::uint64_t n = 0; n < 2000; ++n) {
        bool trial = n >= 2;
        for (std::uint64_t d = 2; d * d <= n && trial; ++d) trial = n % d != 0;
        EXPECT_EQ(num::is_prime(n), trial) << n;
    }
    EXPECT_TRUE(num::is_prime(2147483647ull));
}

TEST(Numeric, PrimeFactors) {
    EXPECT_EQ(num::prime_factors(360), (std::vector<std::uint64_t>{2, 3, 5}));
    EXPECT_EQ(num::prime_factors(97), (std::vector<std::uint64_t>{97}));
}

TEST(Numeric, PrimeOneModAndRootsOfUnity) {
    for (std::uint64_t e : {1, 2, 6, 12, 24, 60, 168}) {
        const auto P = num::prime_one_mod(e, 1000);
        EXPECT_TRUE(num::is_prime(P));
        EXPECT_EQ(P % e, 1 % e);
        EXPECT_GE(P, 1000u);
        const auto z = num::primitive_root_of_unity(e, P);
        EXPECT_EQ(num::powmod(z, e, P), 1u);
        for (auto f : num::prime_factors(e)) EXPECT_NE(num::powmod(z, e / f, P), 1u);
    }
}

TEST(Numeric, SymmetricRepresentative) {
    for (std::int64_t x = -50; x <= 50; ++x) EXPECT_EQ(num::symmetric(num::to_mod(x, 101), 101), x);
}

TEST(ModP, CharpolyOfCompanionMatrix) {
    const modp::Field F{101};
    // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
    const modp::Poly f{F.neg(6), 11, F.neg(6), 1};
    modp::Matrix C(3, modp::Vec(3, 0));
    C[1][0] = 1;
    C[2][1] = 1;
    for (int i = 0; i < 3; ++i) C[static_cast<std::size_t>(i)][2] = F.neg(f[static_cast<std::size_t>(i)]);
    EXPECT_EQ(modp::charpoly(C, F), f);
    EXPECT_EQ(modp::distinct_roots(f, F), (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(ModP, DistinctRootsDropRepeatsAndIrreducibles) {
    const modp::Field F{7};
    // (x-2)^2 (x^2+1): x^2+1 is irreducible mod 7
    auto f = modp::mul(modp::mul({5, 1}, {5, 1}, F), {1, 0, 1}, F);
    EXPECT_EQ(modp::distinct_roots(f, F), (std::vector<std::uint64_t>{2}));
}

TEST(ModP, KernelVectorsAreAnnihilated) {
    const modp::Field F{13};
    modp::Matrix A{{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 5, 7}};
    const auto K = modp::kernel(A, F);
    EXPECT_EQ(K.size(), 2u);
    for (const auto& v : K)
        for (const auto& row : A) {
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < row.size(); ++j) s = F.add(s, F.mul(row[j], v[j]));
            EXPECT_EQ(s, 0u);
        }
}

TEST(ModP, RrefRank) {
    const modp::Field F{5};
    std::vector<modp::Vec> rows{{1, 2, 3}, {2, 4, 1}, {0, 1, 1}};
    EXPECT_EQ(modp::rref(rows, F).size(), 2u);
    rows = {{1, 2, 3}, {2, 4, 1}, {3, 1, 4}};
    EXPECT_EQ(modp::rref(rows, F).size(), 1u);
}
