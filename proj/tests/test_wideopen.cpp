#include <gtest/gtest.h>

#include <random>

#include "padicheights/wideopen.hpp"
#include "test_support.hpp"

using namespace padicheights;
using namespace padicheights::wideopen;
using laurent::Annulus;
using testsupport::random_form_on;
using testsupport::random_integral;

namespace {

const Field F5{5, 24};
const Field F7{7, 24};
constexpr int M = laurent::kDefaultWindow;
constexpr int kDigits = 19;

PadicNumber n5(long long v) { return PadicNumber::integer(F5, v); }
PadicNumber n7(long long v) { return PadicNumber::integer(F7, v); }
Point pt5(long long v) { return Point::at(n5(v)); }
Point pt7(long long v) { return Point::at(n7(v)); }

std::vector<RationalWideOpen> sample_wide_opens5() {
    return {
        RationalWideOpen({pt5(0), Point::infinity()}, {}),
        RationalWideOpen({pt5(0), Point::infinity(), pt5(1)}, {pt5(2), pt5(3)}),
        RationalWideOpen({pt5(0), pt5(1)}, {pt5(3)}),
        RationalWideOpen({pt5(4)}, {pt5(10 + 1), Point::infinity()}),
    };
}

}  // namespace

TEST(RationalWideOpen, RejectsSharedDiscs) {
    EXPECT_THROW(RationalWideOpen({pt5(0), pt5(5)}, {}), InvariantViolation);
    EXPECT_THROW(RationalWideOpen({pt5(1)}, {pt5(6)}), InvariantViolation);
    EXPECT_THROW(RationalWideOpen({Point::infinity()}, {Point::at(PadicNumber::rational(F5, 1, 5))}),
                 InvariantViolation);
}

TEST(ColemanPrimitive, Examples) {
    const auto lam = n5(0);
    auto dlogx = RationalOneForm::pole_term(F5, n5(0), 1, n5(1));
    auto f = coleman_primitive(dlogx);
    EXPECT_TRUE(laurent::same_to_precision(f.restrict_to(pt5(0), M, lam), LogLaurent::log_z(F5, M, n5(1))));
    EXPECT_TRUE(padic::agrees(f.evaluate(n5(6), lam), padic::padic_log(n5(6), lam), kDigits));

    auto g = coleman_primitive(RationalOneForm::pole_term(F5, n5(1), 2, n5(1)));
    EXPECT_TRUE(padic::agrees(g.evaluate(n5(3), lam), PadicNumber::rational(F5, -1, 2), kDigits));
    EXPECT_TRUE(laurent::same_to_precision(g.restrict_to(pt5(1), M, lam), LogLaurent::monomial(F5, M, -1, n5(-1))));

    // 1/(x(x-1)) = 1/(x-1) - 1/x
    auto w = RationalOneForm::third_kind(F5, {{pt5(1), n5(1)}, {pt5(0), n5(-1)}});
    auto h = coleman_primitive(w);
    for (long long x : {2, 3, 7, 13}) {
        auto expected = padic::padic_log(n5(x - 1), lam) - padic::padic_log(n5(x), lam);
        EXPECT_TRUE(padic::agrees(h.evaluate(n5(x), lam), expected, kDigits));
    }
}

TEST(RestrictToEnd, Examples) {
    const auto lam = n5(2);
    auto f = coleman_primitive(RationalOneForm::pole_term(F5, n5(1), 1, n5(1)));
    auto r = f.restrict_to(pt5(0), M, lam);
    // log(x - 1) at 0: log(-1) + log(1 - z) = -sum z^n / n.
    EXPECT_TRUE(r.coeff(0).is_zero());
    EXPECT_TRUE(r.log_coefficient().is_zero());
    for (int n = 1; n <= 5; ++n) {
        EXPECT_TRUE(padic::agrees(r.coeff(n), PadicNumber::rational(F5, -1, n), kDigits)) << n;
    }
    auto at_inf = RationalOneForm::pole_term(F5, n5(0), 1, n5(1)).expansion_at(Point::infinity(), M);
    EXPECT_TRUE(laurent::same_to_precision(at_inf, LaurentForm::monomial(F5, M, -1, n5(-1))));
    // x^2 dx at infinity is -z^-4 dz.
    auto poly = RationalOneForm::polynomial_term(F5, 2, n5(1)).expansion_at(Point::infinity(), M);
    EXPECT_TRUE(laurent::same_to_precision(poly, LaurentForm::monomial(F5, M, -4, n5(-1))));
}

TEST(RestrictToEnd, CollisionDetected) {
    auto w = RationalOneForm::pole_term(F5, n5(5), 1, n5(1)) - RationalOneForm::pole_term(F5, n5(1), 1, n5(1));
    EXPECT_THROW(w.expansion_at(pt5(0), M), ExpansionCollision);
    EXPECT_THROW(coleman_primitive(w).restrict_to(pt5(0), M, n5(0)), ExpansionCollision);
}

TEST(RestrictToEnd, CommutesWithDifferentiation) {
    std::mt19937_64 rng(31);
    for (const auto& u : sample_wide_opens5()) {
        for (int i = 0; i < 10; ++i) {
            auto w = random_form_on(u, F5, rng);
            auto f = coleman_primitive(w);
            for (const auto& b : u.marked_points()) {
                EXPECT_TRUE(laurent::agrees(laurent::differentiate(f.restrict_to(b, M, n5(3))), w.expansion_at(b, M),
                                            kDigits))
                    << to_string(b);
            }
        }
    }
}

TEST(RestrictToEnd, ResiduesAreClassicalAndSumToZero) {
    std::mt19937_64 rng(32);
    for (const auto& u : sample_wide_opens5()) {
        for (int i = 0; i < 10; ++i) {
            auto w = random_form_on(u, F5, rng);
            PadicNumber total = n5(0);
            for (const auto& b : u.marked_points()) {
                auto r = laurent::residue(w.expansion_at(b, M), Annulus{});
                EXPECT_TRUE(padic::same_to_precision(r, w.residue_at(b)));
                total += r;
            }
            EXPECT_TRUE(total.is_zero());
        }
    }
}

TEST(RestrictToEnd, EvaluationMatchesExpansion) {
    // F(b + z0) from the expansion at b against direct evaluation, z0 = p.
    std::mt19937_64 rng(33);
    const auto lam = n7(1);
    RationalWideOpen u({pt7(0), Point::infinity(), pt7(2)}, {pt7(4)});
    for (int i = 0; i < 5; ++i) {
        auto f = coleman_primitive(random_form_on(u, F7, rng));
        const auto b = pt7(2);
        const auto z0 = n7(7);
        auto series = f.restrict_to(b, M, lam);
        PadicNumber value = series.log_coefficient() * padic::padic_log(z0, lam);
        for (int n = -M; n <= M; ++n) {
            if (laurent::is_exact_zero(series.coeff(n))) continue;
            value += series.coeff(n) * z0.pow(n);
        }
        EXPECT_TRUE(padic::agrees(value, f.evaluate(b.x + z0, lam), 15));
    }
}

TEST(GlobalIndexU, Alternating) {
    std::mt19937_64 rng(34);
    for (const auto& u : sample_wide_opens5()) {
        auto w = random_form_on(u, F5, rng);
        EXPECT_TRUE(global_index_U(w, w, u, M, n5(0)).is_zero());
    }
}

TEST(GlobalIndexU, VanishesOnExactForms) {
    // d(c/(x-a)^m) and d(x^m) for marked a.
    std::mt19937_64 rng(35);
    RationalWideOpen u({pt5(0), Point::infinity(), pt5(1)}, {pt5(2)});
    for (int i = 0; i < 10; ++i) {
        auto c = random_integral(F5, rng);
        auto df = RationalOneForm::pole_term(F5, n5(1), 3, c * -2) + RationalOneForm::polynomial_term(F5, 2, c * 3);
        auto eta = random_form_on(u, F5, rng);
        EXPECT_TRUE(padic::agrees(global_index_U(df, eta, u, M, n5(4)), n5(0), kDigits));
    }
}

TEST(GlobalIndexU, TrivialOnRationalWideOpens) {
    std::mt19937_64 rng(36);
    for (const auto& lam : {n5(0), n5(1)}) {
        for (const auto& u : sample_wide_opens5()) {
            for (int i = 0; i < 10; ++i) {
                auto w = random_form_on(u, F5, rng);
                auto eta = random_form_on(u, F5, rng);
                EXPECT_TRUE(padic::agrees(global_index_U(w, eta, u, M, lam), n5(0), kDigits));
            }
        }
    }
}

TEST(GlobalIndexU, RejectsUnmarkedPoles) {
    RationalWideOpen u({pt5(0), Point::infinity()}, {});
    auto w = RationalOneForm::pole_term(F5, n5(2), 2, n5(1));
    EXPECT_THROW(global_index_U(w, w, u, M, n5(0)), InvariantViolation);
}

TEST(H1BasisU, Examples) {
    EXPECT_TRUE(h1_basis_U(RationalWideOpen({pt5(0)}, {}), F5).empty());
    auto b1 = h1_basis_U(RationalWideOpen({pt5(0), Point::infinity()}, {}), F5);
    ASSERT_EQ(b1.size(), 1u);
    EXPECT_EQ(b1[0].residue_at(pt5(0)), n5(-1));
    RationalWideOpen u({pt5(0), pt5(1), Point::infinity()}, {});
    auto b2 = h1_basis_U(u, F5);
    ASSERT_EQ(b2.size(), 2u);
    padic::PadicMatrix m(F5, 2, 3);
    auto marked = u.marked_points();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = b2[i].residue_at(marked[j]);
    EXPECT_EQ(padic::rank(m), 2u);
}
