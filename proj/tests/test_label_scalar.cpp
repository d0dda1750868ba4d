#include <gtest/gtest.h>

#include "support.hpp"

using namespace qcluster;
using qtest::qe;

TEST(Label, OrderIsLexicographicThenLength) {
    EXPECT_LT(Label{1}, Label{2});
    EXPECT_LT((Label{1, 5}), (Label{2, 0}));
    EXPECT_LT(Label{-1}, Label{0});
    EXPECT_LT(Label{1}, (Label{1, 0}));
    EXPECT_EQ(Label({0, 0}), Label({0, 0}));
}

TEST(Label, StringForms) {
    EXPECT_EQ(Label{3}.str(), "3");
    EXPECT_EQ(Label({1, 2}).str(), "(1,2)");
    EXPECT_EQ(Label{3}.var_name(), "x3");
    EXPECT_EQ(parse_label("(1,2)"), Label({1, 2}));
    EXPECT_EQ(parse_label("-4"), Label{-4});
    EXPECT_THROW(parse_label("(1,"), ParseError);
}

TEST(Label, TaggingPrependsAndBounds) {
    EXPECT_EQ(Label({1, 2}).tagged(7), Label({7, 1, 2}));
    EXPECT_THROW(Label({1, 2, 3, 4}).tagged(1), IndexError);
    EXPECT_THROW(Label(std::span<const int>()), IndexError);
}

TEST(ParamExps, ArithmeticAndTrim) {
    ParamExps a{2, 0}, b{-2};
    EXPECT_EQ(a.length(), 1u);
    EXPECT_TRUE((a + b).is_zero());
    EXPECT_EQ(a.scaled(3), ParamExps{6});
    EXPECT_EQ(-a, ParamExps{-2});
    EXPECT_EQ(ParamExps::unit(1, 4)[1], 4);
    EXPECT_EQ(ParamExps::unit(1, 4)[0], 0);
}

TEST(CoeffPoly, RingOperations) {
    const CoeffPoly q = CoeffPoly::monomial(1, qe(2));
    const CoeffPoly qi = CoeffPoly::monomial(1, qe(-2));
    EXPECT_TRUE((q * qi).is_one());
    EXPECT_EQ(q.inverse(), qi);
    EXPECT_TRUE(q.is_unit());
    EXPECT_FALSE(CoeffPoly(2).is_unit());
    EXPECT_TRUE(CoeffPoly(-1).is_unit());
    const CoeffPoly d = q - qi;
    EXPECT_EQ(d.size(), 2u);
    EXPECT_TRUE((d - q + qi).is_zero());
    // (q - q^-1)(q + q^-1) = q^2 - q^-2
    EXPECT_EQ(d * (q + qi), CoeffPoly::monomial(1, qe(4)) - CoeffPoly::monomial(1, qe(-4)));
}

TEST(CoeffPoly, ExactDivision) {
    const CoeffPoly q = CoeffPoly::monomial(1, qe(2));
    const CoeffPoly a = q + CoeffPoly(1);
    const CoeffPoly b = q - CoeffPoly(3);
    EXPECT_EQ((a * b).exact_divide(b), a);
    EXPECT_THROW((a * b + CoeffPoly(1)).exact_divide(b), NotLeftDivisible);
    EXPECT_THROW(a.exact_divide(CoeffPoly()), DivisionByZero);
}

TEST(CoeffPoly, Printing) {
    const ParamSet p({"q"});
    EXPECT_EQ(CoeffPoly::monomial(1, qe(2)).str(p), "q");
    EXPECT_EQ(CoeffPoly::monomial(-3, qe(-4)).str(p), "-3*q^-2");
    EXPECT_EQ(CoeffPoly::monomial(1, qe(1)).str(p), "q^(1/2)");
    EXPECT_EQ(CoeffPoly(1).str(p), "1");
}

TEST(CoeffPoly, MultiParameterGrlex) {
    const ParamSet p({"q", "t"});
    const CoeffPoly x = CoeffPoly::monomial(1, ParamExps{2, 0}) + CoeffPoly::monomial(1, ParamExps{0, 2});
    EXPECT_EQ((x * x).size(), 3u);
    EXPECT_EQ((x * x).exact_divide(x), x);
}
