#include <gtest/gtest.h>

#include <random>

#include "padicheights/laurent.hpp"
#include "test_support.hpp"

using namespace padicheights;
using namespace padicheights::laurent;
using padic::PadicContext;
using testsupport::random_form;
using testsupport::random_integral;
using testsupport::random_log_laurent;

namespace {

const Field F5{5, 24};
constexpr int M = kDefaultWindow;
constexpr int kDigits = 19;

PadicNumber n5(long long v) { return PadicNumber::integer(F5, v); }

}  // namespace

TEST(Differentiate, Examples) {
    auto d_log = differentiate(LogLaurent::log_z(F5, M, n5(1)));
    EXPECT_TRUE(same_to_precision(d_log, LaurentForm::monomial(F5, M, -1, n5(1))));

    auto d_sq = differentiate(LogLaurent::monomial(F5, M, 2, n5(1)));
    EXPECT_TRUE(same_to_precision(d_sq, LaurentForm::monomial(F5, M, 1, n5(2))));

    auto f = LogLaurent::monomial(F5, M, -1, n5(1));
    f.set_log_coefficient(n5(3));
    LaurentForm expected(F5, M);
    expected.set_coeff(-2, n5(-1));
    expected.set_coeff(-1, n5(3));
    EXPECT_TRUE(same_to_precision(differentiate(f), expected));
}

TEST(Residue, Examples) {
    auto dz_z = LaurentForm::monomial(F5, M, -1, n5(1));
    EXPECT_EQ(residue(dz_z, Annulus{}), n5(1));
    EXPECT_EQ(residue(dz_z, Annulus{}.reversed()), n5(-1));
    EXPECT_TRUE(residue(LaurentForm::monomial(F5, M, -3, n5(1)), Annulus{}).is_zero());
}

TEST(Primitive, Examples) {
    auto log_z = primitive(LaurentForm::monomial(F5, M, -1, n5(1)));
    EXPECT_TRUE(same_to_precision(log_z, LogLaurent::log_z(F5, M, n5(1))));

    auto half_sq = primitive(LaurentForm::monomial(F5, M, 1, n5(1)));
    EXPECT_TRUE(same_to_precision(half_sq, LogLaurent::monomial(F5, M, 2, PadicNumber::rational(F5, 1, 2))));

    LaurentForm w(F5, M);
    w.set_coeff(-2, n5(3));
    w.set_coeff(-1, n5(1));
    auto f = primitive(w);
    auto expected = LogLaurent::monomial(F5, M, -1, n5(-3));
    expected.set_log_coefficient(n5(1));
    EXPECT_TRUE(same_to_precision(f, expected));
    EXPECT_TRUE(same_to_precision(differentiate(f), w));
}

TEST(Primitive, LosesDigitsAtMultiplesOfP) {
    auto f = primitive(LaurentForm::monomial(F5, M, 4, n5(1)));
    EXPECT_EQ(f.coeff(5).valuation(), -1);
    EXPECT_EQ(f.coeff(5).known_digits(), F5.cap - 1);
}

TEST(DoubleIndex, Examples) {
    const Annulus e;
    auto one = LogLaurent::monomial(F5, M, 0, n5(1));
    auto log_z = LogLaurent::log_z(F5, M, n5(1));
    EXPECT_EQ(double_index(one, log_z, e), n5(1));
    EXPECT_TRUE(double_index(log_z, log_z, e).is_zero());

    // Oracle for <2 log z + 1/z, 3 log z + z>: by bilinearity this is
    //   <1/z, z> + 3<1/z, log z> + 2<log z, z> + 6<log z, log z>
    // = Res(z^-1 dz) + 3 Res(z^-2 dz) - 2 Res(z dz/z) + 0 = 1.
    auto f = LogLaurent::monomial(F5, M, -1, n5(1));
    f.set_log_coefficient(n5(2));
    auto g = LogLaurent::monomial(F5, M, 1, n5(1));
    g.set_log_coefficient(n5(3));
    EXPECT_EQ(double_index(f, g, e), n5(1));
}

TEST(DoubleIndex, LawsOnRandomPairs) {
    std::mt19937_64 rng(11);
    const Annulus e;
    for (int i = 0; i < 100; ++i) {
        auto f = random_log_laurent(F5, M, rng);
        auto g = random_log_laurent(F5, M, rng);
        EXPECT_TRUE(padic::same_to_precision(double_index(f, g, e), -double_index(g, f, e)));
        EXPECT_TRUE(padic::same_to_precision(double_index(f, g, e.reversed()), -double_index(f, g, e)));
        auto f0 = f.laurent_part();
        EXPECT_TRUE(padic::agrees(double_index(f0, g, e), residue_of_product(f0, differentiate(g)), kDigits));
        // Constant rule: <c, G> = c Res dG.
        auto c = random_integral(F5, rng);
        auto cf = LogLaurent::monomial(F5, M, 0, c);
        EXPECT_TRUE(padic::agrees(double_index(cf, g, e), c * residue(differentiate(g)), kDigits));
    }
}

TEST(DoubleIndex, UnitRescalingInvariance) {
    std::mt19937_64 rng(12);
    const Annulus e;
    for (int i = 0; i < 30; ++i) {
        auto f = random_log_laurent(F5, M, rng);
        auto g = random_log_laurent(F5, M, rng);
        auto u = testsupport::random_unit(F5, rng);
        for (const auto& lam : {n5(0), n5(7)}) {
            EXPECT_TRUE(padic::agrees(double_index(rescale(f, u, lam), rescale(g, u, lam), e),
                                      double_index(f, g, e), kDigits));
        }
    }
}

TEST(DoubleIndex, PrimitiveThenDifferentiateIsIdentity) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 30; ++i) {
        auto w = random_form(F5, M, rng);
        EXPECT_TRUE(same_to_precision(differentiate(primitive(w)), w));
    }
}

TEST(Pullback, Examples) {
    auto q = PadicNumber::p_power(F5, 2);
    auto f = pullback_inversion(LogLaurent::monomial(F5, M, 1, n5(1)), q, n5(0));
    EXPECT_TRUE(same_to_precision(f, LogLaurent::monomial(F5, M, -1, q)));

    const auto lam = n5(3);
    auto g = pullback_inversion(LogLaurent::log_z(F5, M, n5(1)), q, lam);
    auto expected = LogLaurent::log_z(F5, M, n5(-1));
    expected.set_coeff(0, padic::padic_log(q, lam));
    EXPECT_TRUE(same_to_precision(g, expected));
}

TEST(Pullback, NegatesResidues) {
    std::mt19937_64 rng(14);
    auto q = PadicNumber::p_power(F5, 1) * n5(3);
    for (int i = 0; i < 30; ++i) {
        auto w = random_form(F5, M, rng);
        EXPECT_TRUE(padic::same_to_precision(residue(pullback_inversion(w, q)), -residue(w)));
    }
}

TEST(Pullback, CommutesWithDifferentiation) {
    std::mt19937_64 rng(15);
    auto q = PadicNumber::p_power(F5, 2) * n5(2);
    for (int i = 0; i < 20; ++i) {
        auto f = random_log_laurent(F5, M, rng, 4);
        EXPECT_TRUE(same_to_precision(differentiate(pullback_inversion(f, q, n5(1))),
                                      pullback_inversion(differentiate(f), q)));
    }
}

TEST(Annulus, ConstantDifferenceAcrossGluing) {
    std::mt19937_64 rng(16);
    auto q = PadicNumber::p_power(F5, 2) * n5(3);
    const auto lam = n5(2);
    for (int i = 0; i < 20; ++i) {
        auto x = random_log_laurent(F5, M, rng, 5);
        auto y = pullback_inversion(x, q, lam);
        auto c = random_integral(F5, rng);
        y.add_to_coeff(0, c);
        EXPECT_TRUE(padic::agrees(annulus_constant_difference(x, y, q, lam), c, kDigits));
        EXPECT_TRUE(forms_match_on_annulus(differentiate(x), differentiate(y), q));

        auto bad = y;
        bad.add_to_coeff(1, n5(1));
        EXPECT_THROW(annulus_constant_difference(x, bad, q, lam), NotConstantOnAnnulus);
        auto bad_form = differentiate(y);
        bad_form.add_to_coeff(2, n5(1));
        EXPECT_FALSE(forms_match_on_annulus(differentiate(x), bad_form, q));
    }
}

TEST(Window, RejectsOutOfWindowSupport) {
    LogLaurent f(F5, 4);
    EXPECT_THROW(f.set_coeff(5, n5(1)), WindowExceeded);
    EXPECT_NO_THROW(f.set_coeff(5, n5(0)));
}
