#include <gtest/gtest.h>

#include <algorithm>

#include "lzt/chartheory.hpp"

using namespace lzt;

namespace {

Subgroup full(int n, int p, int m) { return Subgroup::full(gl_group(n, make_ring(p, m))); }

std::vector<std::int64_t> degrees(const CharacterTable& T) {
    std::vector<std::int64_t> d;
    for (const auto& x : T.irr) d.push_back(x.degree());
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

// (n, p, m, order, class count), frozen from a brute-force enumeration.
struct TableCase {
    int n, p, m;
    std::size_t order, classes;
};

class Tables : public ::testing::TestWithParam<TableCase> {};

TEST_P(Tables, OrthogonalAndComplete) {
    const auto c = GetParam();
    const auto T = character_table(full(c.n, c.p, c.m));
    EXPECT_EQ(T->group.order(), c.order);
    EXPECT_EQ(T->size(), c.classes);
    std::int64_t s = 0;
    for (const auto& x : T->irr) s += x.degree() * x.degree();
    EXPECT_EQ(static_cast<std::size_t>(s), c.order);
    EXPECT_EQ(orthogonality_defect(*T), "");
    EXPECT_TRUE(T->irr[0] == trivial_character(T->group));
}

TEST_P(Tables, TextRoundTripIsBitExact) {
    const auto c = GetParam();
    const auto T = character_table(full(c.n, c.p, c.m));
    const std::string text = to_text(to_table_file(*T));
    const TableFile back = parse_table_text(text);
    EXPECT_EQ(to_text(back), text);
    EXPECT_EQ(table_file_defect(back), "");
}

INSTANTIATE_TEST_SUITE_P(Grid, Tables,
                         ::testing::Values(TableCase{2, 2, 1, 6, 3}, TableCase{2, 3, 1, 48, 8}, TableCase{3, 2, 1, 168, 6},
                                           TableCase{2, 2, 2, 96, 14}, TableCase{2, 3, 2, 3888, 78},
                                           TableCase{2, 2, 3, 1536, 60}));

TEST(Tables, KnownDegrees) {
    EXPECT_EQ(degrees(*character_table(full(2, 3, 1))), (std::vector<std::int64_t>{1, 1, 2, 2, 2, 3, 3, 4}));
    EXPECT_EQ(degrees(*character_table(full(3, 2, 1))), (std::vector<std::int64_t>{1, 3, 3, 6, 7, 8}));
    // GL_2(F_5): q-1 of degree 1 and q, (q-1)(q-2)/2 of degree q+1, q(q-1)/2 of degree q-1.
    const auto d = degrees(*character_table(full(2, 5, 1)));
    EXPECT_EQ(std::count(d.begin(), d.end(), 1), 4);
    EXPECT_EQ(std::count(d.begin(), d.end(), 5), 4);
    EXPECT_EQ(std::count(d.begin(), d.end(), 6), 6);
    EXPECT_EQ(std::count(d.begin(), d.end(), 4), 10);
}

TEST(Tables, MalformedTextIsRejected) {
    EXPECT_THROW(parse_table_text("lzt-chartab 2\n"), std::invalid_argument);
    const auto T = character_table(full(2, 2, 1));
    std::string text = to_text(to_table_file(*T));
    text.replace(text.find("irr 1 6:1,0"), 11, "irr 1 6:2,0");
    EXPECT_NE(table_file_defect(parse_table_text(text)), "");
}

TEST(Classes, IdentityFirstAndSizesSumToOrder) {
    const auto H = full(2, 2, 2);
    const auto cc = conjugacy_classes(H);
    EXPECT_EQ(cc->reps[0], H.ambient().identity());
    std::int64_t s = 0;
    for (auto x : cc->sizes) s += x;
    EXPECT_EQ(static_cast<std::size_t>(s), H.order());
    for (std::size_t c = 1; c + 1 < cc->count(); ++c) EXPECT_LE(cc->sizes[c], cc->sizes[c + 1]);
}

TEST(Induction, FrobeniusReciprocity) {
    const auto G = gl_group(2, make_ring(3, 2));
    const auto full_g = Subgroup::full(G);
    const auto H = subgroup(G, {SubgroupKind::Parabolic, Partition({1, 1}), 2});
    const auto TG = character_table(full_g);
    const auto TH = character_table(H);
    for (std::size_t i = 0; i < TH->size(); i += 7) {
        const auto ind = induce(H, TH->irr[i], full_g);
        EXPECT_EQ(ind.degree(), TH->irr[i].degree() * static_cast<std::int64_t>(G->order() / H.order()));
        for (std::size_t j = 0; j < TG->size(); j += 5)
            EXPECT_EQ(inner_product(ind, TG->irr[j]), inner_product(TH->irr[i], restrict_to(TG->irr[j], H)));
    }
}

TEST(Decompose, RegularCharacter) {
    const auto H = full(2, 2, 2);
    const auto T = character_table(H);
    const auto d = decompose(regular_character(H), *T);
    EXPECT_TRUE(d.is_character());
    for (std::size_t i = 0; i < T->size(); ++i) EXPECT_EQ(d.multiplicity(i), T->irr[i].degree());
}

TEST(Decompose, DifferenceIsNotACharacter) {
    const auto H = full(2, 3, 1);
    const auto T = character_table(H);
    const auto d = decompose(T->irr[0] - T->irr[1], *T);
    EXPECT_FALSE(d.nonnegative);
    EXPECT_FALSE(d.is_character());
}

TEST(Inflation, ReductionMapIsVerified) {
    const auto H = full(2, 2, 2);
    const auto Q = full(2, 2, 1);
    const auto T = character_table(Q);
    for (const auto& chi : T->irr) {
        const auto inf = inflate(chi, H, reduction_map(2, 1));
        EXPECT_EQ(inner_product(inf, inf), Rational(1));
    }
    // A map that is not a homomorphism is rejected.
    const QuotientMap bad{"transpose", [](const Mat& g) {
                              Mat t = g;
                              std::swap(t(0, 1), t(1, 0));
                              return mat::reduce(t, 2);
                          }};
    EXPECT_THROW(inflate(T->irr[1], H, bad), std::exception);
}

TEST(ClassFunctions, TensorAndDual) {
    const auto T = character_table(full(2, 3, 1));
    for (const auto& x : T->irr) {
        EXPECT_EQ(inner_product(tensor(x, dual(x)), T->irr[0]), Rational(1));
        EXPECT_EQ(dual(dual(x)), x);
    }
}
