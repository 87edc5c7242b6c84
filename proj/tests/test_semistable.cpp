#include <gtest/gtest.h>

#include <random>

#include "model_oracles.hpp"
#include "padicheights/semistable.hpp"
#include "test_support.hpp"

using namespace padicheights;
using namespace padicheights::semistable;
using oracles::at;
using testsupport::agree;

namespace {

constexpr int kDigits = 18;

PadicContext ctx7(long long branch = 0) {
    return PadicContext::make(7, 24, PadicNumber::integer(Field{7, 24}, branch));
}

PadicNumber num(const PadicContext& c, long long v) { return c.integer(v); }

Divisor::Term term(const PadicContext& c, std::size_t v, long long x, long long m) {
    return Divisor::Term{v, at(c, x), m};
}

Divisor::Term term_q(std::size_t v, const PadicNumber& x, long long m) { return Divisor::Term{v, Point::at(x), m}; }

void expect_cochain_agrees(const Cochain1& a, const Cochain1& b, int digits) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t e = 0; e < a.size(); ++e) EXPECT_TRUE(agree(a[e], b[e], digits)) << "edge " << e;
}

}  // namespace

TEST(CurveModel, RejectsUnitGluingParameter) {
    auto c = ctx7();
    try {
        oracles::tate_model(c, num(c, 3), num(c, 7));
        FAIL() << "expected InvariantViolation";
    } catch (const InvariantViolation& e) {
        EXPECT_NE(std::string(e.what()).find("q_e must be topologically nilpotent"), std::string::npos);
    }
}

TEST(CurveModel, RejectsSmallWindow) {
    auto c = ctx7();
    EXPECT_THROW(oracles::tate_model(c, num(c, 7), num(c, 7), {{}, {}}, 10), WindowExceeded);
}

TEST(CurveModel, RejectsPunctureInEndDisc) {
    auto c = ctx7();
    EXPECT_THROW(oracles::tate_model(c, num(c, 7), num(c, 7), {{at(c, 14)}, {}}), InvariantViolation);
}

TEST(CurveModel, CountsGenusAndPunctures) {
    auto c = ctx7();
    auto x = oracles::theta_model(c, num(c, 7), num(c, 49), num(c, 7), {{at(c, 3)}, {at(c, 2), at(c, 4)}});
    EXPECT_EQ(x.genus(), 2u);
    EXPECT_EQ(x.puncture_count(), 3u);
}

TEST(MatchingFamily, TateInvariantDifferentialIsExact) {
    auto c = ctx7();
    auto x = oracles::tate_model(c, num(c, 7 * 3), num(c, 49));
    auto hol = holomorphic_basis(x);
    ASSERT_EQ(hol.size(), 1u);
    // The cycle runs along edge 1 and back along edge 0, so N = (-1, 1).
    const auto& w = hol[0];
    for (std::size_t v = 0; v < 2; ++v) {
        auto expected = RationalOneForm::pole_term(c.field, c.zero(), 1, num(c, -1));
        for (const auto& end : x.component(v).ends()) {
            EXPECT_TRUE(laurent::agrees(w.omega[v].expansion_at(end, x.window()),
                                        expected.expansion_at(end, x.window()), kDigits));
        }
    }
    Cochain1 n = monodromy(w, x);
    EXPECT_TRUE(agree(n[0], num(c, -1), kDigits));
    EXPECT_TRUE(agree(n[1], num(c, 1), kDigits));
}

TEST(Chi, TateCycleClassCarriesLogQ) {
    auto c = ctx7(2);
    const PadicNumber q1 = num(c, 7 * 3);
    const PadicNumber q2 = num(c, 49 * 5);
    auto x = oracles::tate_model(c, q1, q2);
    auto hol = holomorphic_basis(x);
    // For du/u the jumps are (-log q1, log q2); the class here is -du/u.
    Cochain1 expected{{padic::padic_log(q1, c), -padic::padic_log(q2, c)}};
    expect_cochain_agrees(chi(hol[0], x), expected, kDigits);
}

TEST(Chi, GraphClassesAreRecovered) {
    auto c = ctx7();
    auto x = oracles::theta_model(c, num(c, 7), num(c, 49), num(c, 7 * 2));
    Cochain1 kappa{{num(c, 3), num(c, -2), num(c, 5)}};
    auto g = CechCochain::graph_class(x, kappa);
    EXPECT_TRUE(validate_cocycle(g, x));
    expect_cochain_agrees(chi(g, x), kappa, kDigits);
    EXPECT_TRUE(graphs::is_zero(monodromy(g, x)));
}

TEST(MatchingFamily, ResiduesAndCocycle) {
    auto c = ctx7();
    auto x = oracles::theta_model(c, num(c, 7), num(c, 49), num(c, 7 * 2), {{at(c, 3)}, {at(c, 2), at(c, 4)}});
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<PadicNumber> s{testsupport::random_small_integer(c.field, rng),
                                   testsupport::random_small_integer(c.field, rng), c.zero()};
        s[2] = -(s[0] + s[1]);
        graphs::Cochain0 target = graphs::Cochain0::zero(c.field, 2);
        for (std::size_t i = 0; i < 3; ++i) target[x.z_points()[i].vertex] -= s[i];
        Cochain1 r = graphs::tree_flow(x.graph(), target);
        for (const auto& gamma : graphs::cycle_basis(x.graph(), c.field)) {
            r = r + testsupport::random_small_integer(c.field, rng) * gamma;
        }
        auto w = matching_family(x, ResidueData{r, s});
        EXPECT_TRUE(validate_cocycle(w, x));
        expect_cochain_agrees(monodromy(w, x), r, kDigits);
        auto zs = z_residues(w, x);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(agree(zs[i], s[i], kDigits));
    }
}

TEST(MatchingFamily, RejectsUnbalancedResidues) {
    auto c = ctx7();
    auto x = oracles::tate_model(c, num(c, 7), num(c, 7));
    Cochain1 r{{num(c, 1), num(c, 0)}};
    EXPECT_THROW(matching_family(x, ResidueData{r, {}}), Inconsistent);
}

TEST(Cocycle, CoboundariesPairToZero) {
    auto c = ctx7();
    auto x = oracles::tate_model(c, num(c, 7), num(c, 49), {{at(c, 3)}, {at(c, 2)}});
    std::mt19937_64 rng(5);
    std::vector<RationalOneForm> exact;
    for (std::size_t v = 0; v < 2; ++v) {
        RationalOneForm w(c.field);
        for (const auto& pt : x.component(v).marked_points()) {
            for (int k = 2; k <= 3; ++k) {
                PadicNumber a = testsupport::random_integral(c.field, rng);
                if (pt.infinite) {
                    w = w + RationalOneForm::polynomial_term(c.field, k - 2, a);
                } else {
                    w = w + RationalOneForm::pole_term(c.field, pt.x, k, a);
                }
            }
        }
        exact.push_back(w);
    }
    auto d = coboundary_class(x, exact);
    EXPECT_TRUE(validate_cocycle(d, x));
    EXPECT_TRUE(graphs::is_zero(monodromy(d, x)));
    auto basis = h1_basis(x);
    for (const auto& b : basis.classes) EXPECT_TRUE(agree(hybrid_pair(d, b, x), c.zero(), kDigits));
}

TEST(CohBasis, TateCupMatrixIsUnimodular) {
    auto c = ctx7();
    auto x = oracles::tate_model(c, num(c, 7), num(c, 49));
    auto basis = h1_basis(x);
    ASSERT_EQ(basis.dimension(), 2u);
    auto cup = cup_matrix(basis, x);
    EXPECT_TRUE(agree(cup(0, 0), c.zero(), kDigits));
    EXPECT_TRUE(agree(cup(1, 1), c.zero(), kDigits));
    EXPECT_TRUE(agree(cup(0, 1), num(c, 1), kDigits));
    EXPECT_TRUE(agree(cup(1, 0), num(c, -1), kDigits));
}

TEST(CohBasis, ThetaGraphDimensionsAndDuality) {
    auto c = ctx7();
    auto x = oracles::theta_model(c, num(c, 7), num(c, 49), num(c, 7 * 2), {{at(c, 3)}, {at(c, 2), at(c, 4)}});
    auto basis = h1_basis(x);
    EXPECT_EQ(basis.dimension(), 2 * 2 + 3 - 1u);
    auto cup = cup_matrix(basis, x);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(agree(cup(i, j), -cup(j, i), kDigits));
    }
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_TRUE(agree(cup(2 + i, j), num(c, i == j ? -1 : 0), kDigits));
            EXPECT_TRUE(agree(cup(i, j), c.zero(), kDigits));
        }
    }
}

TEST(Monodromy, OperatorIsSkewForThePairing) {
    auto c = ctx7(3);
    auto x = oracles::theta_model(c, num(c, 49), num(c, 7), num(c, 7 * 7 * 7 * 2), {{at(c, 3)}, {at(c, 2), at(c, 4)}});
    auto basis = h1_basis(x);
    for (const auto& a : basis.classes) {
        for (const auto& b : basis.classes) {
            auto lhs = hybrid_pair(monodromy_operator(a, x), b, x) + hybrid_pair(a, monodromy_operator(b, x), x);
            EXPECT_TRUE(agree(lhs, c.zero(), kDigits));
        }
        // N^2 = 0: graph classes have no residues.
        EXPECT_TRUE(graphs::is_zero(monodromy(monodromy_operator(a, x), x)));
    }
}

TEST(Psi, RestrictsToIdentityOnH1X) {
    auto c = ctx7();
    auto x = oracles::theta_model(c, num(c, 7), num(c, 49), num(c, 7 * 2), {{at(c, 3)}, {at(c, 2)}});
    auto basis = h1_basis(x);
    auto psi = psi_matrix(basis, x);
    for (std::size_t i = 0; i < basis.h1x.size(); ++i) {
        for (std::size_t j = 0; j < basis.h1x.size(); ++j) {
            EXPECT_TRUE(agree(psi(i, basis.h1x[j]), num(c, i == j ? 1 : 0), kDigits));
        }
    }
}

TEST(Pairing, AuxiliaryIdentityWithArbitraryConstants) {
    auto c = ctx7(3);
    auto x = oracles::tate_model(c, num(c, 7), num(c, 49), {{at(c, 3), at(c, 5)}, {at(c, 2)}});
    auto basis = h1_basis(x);
    std::mt19937_64 rng(17);
    // Families only: graph classes have nonzero gluing functions.
    for (std::size_t i = basis.genus; i < basis.dimension(); ++i) {
        for (std::size_t j = basis.genus; j < basis.dimension(); ++j) {
            const auto& a = basis.classes[i];
            const auto& b = basis.classes[j];
            Cochain0 ka{{testsupport::random_integral(c.field, rng), testsupport::random_integral(c.field, rng)}};
            Cochain0 kb{{testsupport::random_integral(c.field, rng), testsupport::random_integral(c.field, rng)}};
            auto f = primitives(a, x, ka);
            auto g = primitives(b, x, kb);
            EXPECT_TRUE(agree(aux_pair(f, g, x), aux_pair_expansion(a, b, f, g, x), kDigits)) << i << "," << j;
        }
    }
}

TEST(Pairing, HarmonicConstantsGiveHybridPairing) {
    auto c = ctx7(1);
    auto x = oracles::theta_model(c, num(c, 7), num(c, 49), num(c, 7 * 2), {{at(c, 3)}, {at(c, 2), at(c, 4)}});
    auto basis = h1_basis(x);
    for (std::size_t i = basis.genus; i < basis.dimension(); ++i) {
        for (std::size_t j = basis.genus; j < basis.dimension(); ++j) {
            const auto& a = basis.classes[i];
            const auto& b = basis.classes[j];
            auto f = vologodsky_primitive(a, x);
            auto g = vologodsky_primitive(b, x);
            EXPECT_TRUE(agree(aux_pair(f.per_vertex, g.per_vertex, x), hybrid_pair(a, b, x), kDigits)) << i << "," << j;
        }
    }
}

TEST(Vologodsky, CorrectionIsHarmonic) {
    auto c = ctx7(2);
    auto x = oracles::theta_model(c, num(c, 7), num(c, 49), num(c, 7 * 2), {{at(c, 3)}, {at(c, 2)}});
    auto basis = h1_basis(x);
    for (std::size_t i = basis.genus; i < basis.dimension(); ++i) {
        auto f = vologodsky_primitive(basis.classes[i], x);
        auto star = graphs::weighted_costar(x.graph(), f.correction, x.lengths());
        for (const auto& v : star.values) EXPECT_TRUE(agree(v, c.zero(), kDigits));
    }
}

TEST(OmegaY, TateThetaOracle) {
    auto c = ctx7(2);
    oracles::TateData t{num(c, 7 * 3), num(c, 49)};
    auto x = oracles::tate_model(c, t.q1, t.q2);
    // (2) + (3') - (5') - (6/5) with primes on component 1: the product of
    // the multiplicative coordinates is 1, so the divisor is principal.
    Divisor y{{term(c, 0, 2, 1), term(c, 1, 3, 1), term(c, 1, 5, -1), term_q(0, c.rational(6, 5), -1)}};
    HeightData data{std::nullopt, c.one()};
    auto oy = build_omega_y(y, data, x);
    for (const auto& v : oy.psi) EXPECT_TRUE(agree(v, c.zero(), kDigits));
    auto div = oracles::tate_divisor(t, y);
    for (std::size_t e = 0; e < 2; ++e) {
        const auto& ed = oy.model.edge(e);
        EXPECT_TRUE(laurent::agrees(oy.form.omega[ed.head].expansion_at(ed.head_end, x.window()),
                                    oracles::theta_dlog_at_end(t, div, e, true, x.window()), kDigits))
            << "head of edge " << e;
        EXPECT_TRUE(laurent::agrees(oy.form.omega[ed.tail].expansion_at(ed.tail_end, x.window()),
                                    oracles::theta_dlog_at_end(t, div, e, false, x.window()), kDigits))
            << "tail of edge " << e;
    }
}

TEST(OmegaY, PrincipalDivisorHasVanishingSplitting) {
    auto c = ctx7();
    oracles::TateData t{num(c, 7), num(c, 49 * 2)};
    auto x = oracles::tate_model(c, t.q1, t.q2);
    // The theta quotient is built without the family solver; its Psi vanishes.
    Divisor y{{term(c, 0, 2, 1), term(c, 0, 3, 1), term(c, 0, 4, -1), term_q(0, c.rational(3, 2), -1)}};
    std::vector<std::vector<Point>> punct{{at(c, 2), at(c, 3), at(c, 4), Point::at(c.rational(3, 2))}, {}};
    auto xy = x.with_punctures(punct);
    auto div = oracles::tate_divisor(t, y);
    // Rebuild the global form from the oracle's residues: the residue flow of
    // d log G is read off the oracle expansions.
    Cochain1 flow = Cochain1::zero(c.field, 2);
    for (std::size_t e = 0; e < 2; ++e) flow[e] = oracles::theta_dlog_at_end(t, div, e, true, x.window()).coeff(-1);
    std::vector<PadicNumber> s{c.one(), c.one(), -c.one(), -c.one()};
    auto w = matching_family(xy, ResidueData{flow, s});
    auto basis = h1x_basis(xy);
    for (const auto& v : psi_split(w, basis, xy)) EXPECT_TRUE(agree(v, c.zero(), kDigits));
}

TEST(OmegaY, IndependentOfTheResidueRoute) {
    auto c = ctx7(1);
    auto x = oracles::theta_model(c, num(c, 49), num(c, 7), num(c, 7 * 7 * 7 * 2));
    Divisor y{{term(c, 0, 2, 2), term(c, 1, 3, -1), term(c, 1, 4, -1)}};
    // W = columns e_j + sum_i m_ij e_{g+i}: a class lies in W iff its
    // holomorphic coordinates are M times its graph coordinates.
    const long long m[2][2] = {{1, -2}, {3, 5}};
    PadicMatrix w(c.field, 4, 2);
    for (std::size_t j = 0; j < 2; ++j) {
        w(j, j) = c.one();
        for (std::size_t i = 0; i < 2; ++i) w(2 + i, j) = c.integer(m[i][j]);
    }
    auto oy = build_omega_y(y, HeightData{w, c.one()}, x);
    const auto& xy = oy.model;

    // Route the end residues around the cycles before correcting.
    Cochain0 target = Cochain0::zero(c.field, 2);
    target[0] = c.integer(-2);
    target[1] = c.integer(2);
    auto cycles = graphs::cycle_basis(xy.graph(), c.field);
    Cochain1 flow = graphs::tree_flow(xy.graph(), target) + c.integer(3) * cycles[0] - cycles[1];
    auto other = matching_family(xy, ResidueData{flow, {c.integer(2), -c.one(), -c.one()}});
    auto basis = h1x_basis(xy);
    auto psi = psi_split(other, basis, xy);
    for (std::size_t i = 0; i < 2; ++i) {
        PadicNumber b = psi[2 + i];
        for (std::size_t j = 0; j < 2; ++j) b -= psi[j] * m[i][j];
        other = other - b * basis.classes[basis.h1x[2 + i]];
    }

    for (std::size_t v = 0; v < xy.vertex_count(); ++v) {
        auto diff = other.omega[v] - oy.form.omega[v];
        for (const auto& part : diff.poles()) {
            for (const auto& coeff : part.coeffs) EXPECT_TRUE(agree(coeff, c.zero(), kDigits)) << "vertex " << v;
        }
    }
    for (std::size_t j = 0; j < 2; ++j) {
        PadicNumber hol = oy.psi[2 + j];
        for (std::size_t i = 0; i < 2; ++i) hol -= oy.psi[i] * m[j][i];
        EXPECT_TRUE(agree(hol, c.zero(), kDigits));
    }
}

TEST(OmegaY, ChainOracle) {
    auto c = ctx7(1);
    oracles::ChainData d{num(c, 7), num(c, 49)};
    auto x = oracles::chain_model(c, d.q, d.q_second);
    Divisor y{{term(c, 0, 2, 1), term(c, 1, 3, -2), term(c, 2, 4, 1)}};
    HeightData data{std::nullopt, c.one()};
    auto oy = build_omega_y(y, data, x);
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const auto& ed = x.edge(e);
        const double vt = ed.q.valuation() / 2.0;
        EXPECT_TRUE(laurent::agrees(oy.form.omega[ed.head].expansion_at(ed.head_end, x.window()),
                                    oracles::chain_dlog_at(d, x, y, ed.head, ed.head_end, vt), kDigits));
        EXPECT_TRUE(laurent::agrees(oy.form.omega[ed.tail].expansion_at(ed.tail_end, x.window()),
                                    oracles::chain_dlog_at(d, x, y, ed.tail, ed.tail_end, vt), kDigits));
    }
}

TEST(Height, ChainMatchesLogOfRationalFunction) {
    for (long long branch : {0, 5}) {
        auto c = ctx7(branch);
        oracles::ChainData d{num(c, 7), num(c, 49)};
        auto x = oracles::chain_model(c, d.q, d.q_second);
        Divisor y{{term(c, 0, 2, 1), term(c, 1, 3, -2), term(c, 2, 4, 1)}};
        Divisor z{{term(c, 0, 5, 1), term(c, 2, 2, -1)}};
        HeightData data{std::nullopt, c.one()};
        EXPECT_TRUE(agree(local_height(y, z, data, x), oracles::chain_log_pairing(d, y, z, c.log_branch), kDigits - 2));
    }
}

TEST(Height, TatePrincipalDivisorMatchesTheta) {
    for (long long branch : {0, 3}) {
        auto c = ctx7(branch);
        oracles::TateData t{num(c, 7 * 3), num(c, 49)};
        auto x = oracles::tate_model(c, t.q1, t.q2);
        Divisor y{{term(c, 0, 2, 1), term(c, 1, 3, 1), term(c, 1, 5, -1), term_q(0, c.rational(6, 5), -1)}};
        Divisor z{{term(c, 0, 3, 1), term(c, 1, 2, -1)}};
        HeightData data{std::nullopt, c.integer(2)};
        EXPECT_TRUE(agree(local_height(y, z, data, x),
                          c.integer(2) * oracles::tate_log_pairing(t, y, z, c.log_branch), kDigits - 2));
    }
}

TEST(Height, LinearInBranchAndBilinear) {
    std::vector<PadicNumber> values;
    for (long long branch : {0, 1, 2}) {
        auto c = ctx7(branch);
        auto x = oracles::tate_model(c, num(c, 7), num(c, 49 * 3));
        Divisor y{{term(c, 0, 2, 1), term(c, 1, 3, -1)}};
        Divisor z{{term(c, 0, 4, 1), term(c, 1, 5, -1)}};
        values.push_back(local_height(y, z, HeightData{std::nullopt, c.one()}, x));
    }
    EXPECT_TRUE(agree(values[2] - values[1], values[1] - values[0], kDigits - 2));

    auto c = ctx7(4);
    auto x = oracles::tate_model(c, num(c, 7), num(c, 49 * 3));
    HeightData data{std::nullopt, c.integer(3)};
    Divisor y1{{term(c, 0, 2, 1), term(c, 1, 3, -1)}};
    Divisor y2{{term(c, 1, 3, 1), term(c, 0, 6, -1)}};
    Divisor y12{{term(c, 0, 2, 1), term(c, 0, 6, -1)}};
    Divisor z{{term(c, 0, 4, 1), term(c, 1, 5, -1)}};
    EXPECT_TRUE(agree(local_height(y12, z, data, x), local_height(y1, z, data, x) + local_height(y2, z, data, x),
                      kDigits - 2));
}

TEST(Height, RejectsSharedSupport) {
    auto c = ctx7();
    auto x = oracles::tate_model(c, num(c, 7), num(c, 49));
    Divisor y{{term(c, 0, 2, 1), term(c, 1, 3, -1)}};
    Divisor z{{term(c, 0, 2, 1), term(c, 1, 5, -1)}};
    EXPECT_THROW(local_height(y, z, HeightData{std::nullopt, c.one()}, x), SupportsNotDisjoint);
    Divisor odd{{term(c, 0, 2, 1)}};
    EXPECT_THROW(local_height(odd, z, HeightData{std::nullopt, c.one()}, x), InvariantViolation);
}

TEST(Height, RejectsSplittingThatMeetsHolomorphicForms) {
    auto c = ctx7();
    auto x = oracles::tate_model(c, num(c, 7), num(c, 49));
    PadicMatrix w(c.field, 2, 1);
    w(0, 0) = c.zero();
    w(1, 0) = c.one();
    Divisor y{{term(c, 0, 2, 1), term(c, 1, 3, -1)}};
    EXPECT_THROW(build_omega_y(y, HeightData{w, c.one()}, x), NotComplementary);
}

TEST(Subdivision, GramMatrixIsInvariant) {
    auto c = ctx7(2);
    auto x = oracles::theta_model(c, num(c, 49), num(c, 49), num(c, 7 * 2), {{at(c, 3)}, {at(c, 2)}});
    auto basis = h1_basis(x);
    auto gram = hybrid_gram(basis.classes, x);
    auto s = subdivide(x, 1, num(c, 7 * 3));
    std::vector<CechCochain> moved;
    for (const auto& b : basis.classes) {
        moved.push_back(transport(b, x, s));
        EXPECT_TRUE(validate_cocycle(moved.back(), s.model));
    }
    auto gram2 = hybrid_gram(moved, s.model);
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        for (std::size_t j = 0; j < basis.dimension(); ++j) EXPECT_TRUE(agree(gram(i, j), gram2(i, j), kDigits));
    }
}

TEST(Subdivision, HarmonicCorrectionSplitsEvenly) {
    auto c = ctx7(1);
    auto x = oracles::tate_model(c, num(c, 49 * 3), num(c, 7), {{at(c, 2)}, {at(c, 4)}});
    auto s = subdivide(x, 0, num(c, 7));
    auto basis = h1_basis(x);
    const PadicNumber half = c.rational(1, 2);
    for (std::size_t i = basis.genus; i < basis.dimension(); ++i) {
        auto before = vologodsky_primitive(basis.classes[i], x);
        auto after = vologodsky_primitive(transport(basis.classes[i], x, s), s.model);
        EXPECT_TRUE(agree(after.correction[s.head_half], half * before.correction[0], kDigits));
        EXPECT_TRUE(agree(after.correction[s.tail_half], half * before.correction[0], kDigits));
        EXPECT_TRUE(agree(after.correction[1], before.correction[1], kDigits));
    }
}

TEST(Vologodsky, TateInvariantDifferentialIsFormalGroupLogarithm) {
    // On G_m / q^Z the single-valued integral of du/u is log u - v(u) log q / v(q),
    // so the constant on component 1 exceeds that on component 0 by
    // log q1 - v(q1) log q / v(q).
    for (long long branch : {0, 4}) {
        auto c = ctx7(branch);
        const PadicNumber q1 = num(c, 7 * 3);
        const PadicNumber q2 = num(c, 49 * 5);
        auto x = oracles::tate_model(c, q1, q2);
        auto f = vologodsky_primitive(-holomorphic_basis(x)[0], x);
        const PadicNumber q = q1 * q2;
        const PadicNumber expected = padic::padic_log(q1, c) - c.rational(1, 3) * padic::padic_log(q, c);
        EXPECT_TRUE(agree(f.per_vertex[1].constant() - f.per_vertex[0].constant(), expected, kDigits));
    }
}

TEST(Subdivision, RejectsIndivisibleEdge) {
    auto c = ctx7();
    auto x = oracles::tate_model(c, num(c, 7), num(c, 49));
    EXPECT_THROW(subdivide(x, 0, num(c, 7)), IndivisibleEdge);
    EXPECT_THROW(subdivide(x, 1, num(c, 3)), IndivisibleEdge);
    auto s = subdivide(x, 1, num(c, 7));
    EXPECT_EQ(s.model.vertex_count(), 3u);
    EXPECT_EQ(s.model.genus(), 1u);
}
