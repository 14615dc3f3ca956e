#include <gtest/gtest.h>

#include "lzt/zexpr.hpp"

using namespace lzt;

TEST(ZExpr, Literals) {
    EXPECT_EQ(eval_zexpr("one", 3), ZElem::one(3));
    EXPECT_EQ(eval_zexpr("3", 2), 3 * ZElem::one(2));
    EXPECT_EQ(eval_zexpr("chi2", 3), ZElem::irr({3, 1, 1}));
    EXPECT_EQ(eval_zexpr("irr(2, 1)", 2), ZElem::irr({2, 2, 1}));
}

TEST(ZExpr, ArithmeticAndPrecedence) {
    const ZElem a = ZElem::irr({3, 1, 0}), b = ZElem::irr({3, 1, 1});
    EXPECT_EQ(eval_zexpr("chi1 + chi2 * chi1", 3), a + b * a);
    EXPECT_EQ(eval_zexpr("(chi1 + chi2) * chi1", 3), (a + b) * a);
    EXPECT_EQ(eval_zexpr("chi1 - chi1", 3), ZElem(3));
    EXPECT_EQ(eval_zexpr("ind(chi1, chi2, chi2)", 3), a * b * b);
}

TEST(ZExpr, DerivativesMatchLibrary) {
    const ZElem a = ZElem::irr({3, 1, 0}), b = ZElem::irr({3, 1, 1});
    EXPECT_EQ(eval_zexpr("D( ind(chi1,chi2) )", 3), (a + ZElem::one(3)) * (b + ZElem::one(3)));
    EXPECT_EQ(eval_zexpr("deriv(irr(2,1), 2)", 2), ZElem::one(2));
    EXPECT_EQ(eval_zexpr("deriv(irr(2,1), 1)", 2), ZElem(2));
    EXPECT_EQ(eval_zexpr("deriv(chi1, 2)", 3), ZElem(3));
}

TEST(ZExpr, Errors) {
    EXPECT_THROW(eval_zexpr("chi1", 4), std::invalid_argument);
    EXPECT_THROW(eval_zexpr("chi3", 3), ZExprError);
    EXPECT_THROW(eval_zexpr("chi0", 3), ZExprError);
    EXPECT_THROW(eval_zexpr("irr(2, 99)", 2), ZExprError);
    EXPECT_THROW(eval_zexpr("foo(1)", 2), ZExprError);
    EXPECT_THROW(eval_zexpr("chi1 +", 2), ZExprError);
    EXPECT_THROW(eval_zexpr("(chi1", 2), ZExprError);
    EXPECT_THROW(eval_zexpr("chi1 )", 2), ZExprError);
    try {
        eval_zexpr("one + ?", 2);
        FAIL();
    } catch (const ZExprError& e) {
        EXPECT_EQ(e.pos, 6u);
    }
}
