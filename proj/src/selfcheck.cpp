#include "padicheights/selfcheck.hpp"

#include <functional>
#include <random>

namespace padicheights::selfcheck {

using graphs::Cochain0;
using graphs::Cochain1;
using padic::Field;
using padic::PadicMatrix;
using padic::PadicNumber;
using semistable::CechCochain;
using semistable::CurveModel;
using wideopen::RationalOneForm;

namespace {

/// Collects the first failure of a check.
class Probe {
public:
    explicit Probe(int digits) : digits_(digits) {}

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (passed_) detail_ = what;
        passed_ = false;
    }
    void agree(const PadicNumber& a, const PadicNumber& b, const std::string& what) {
        expect(padic::agrees(a, b, digits_), what + ": " + padic::to_string(a) + " vs " + padic::to_string(b));
    }
    void vanish(const PadicNumber& a, const std::string& what) { agree(a, PadicNumber::zero(a.field()), what); }

    int digits() const { return digits_; }
    bool passed() const { return passed_; }
    const std::string& detail() const { return detail_; }

private:
    int digits_;
    bool passed_ = true;
    std::string detail_;
};

std::string pair_label(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

PadicNumber random_integral(Field f, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned> digit(0, f.p - 1);
    std::uniform_int_distribution<int> val(0, 3);
    std::vector<unsigned> ds(static_cast<std::size_t>(f.cap));
    for (auto& d : ds) d = digit(rng);
    return PadicNumber::from_digits(f, val(rng), ds);
}

long long small(std::mt19937_64& rng, long long bound) {
    return std::uniform_int_distribution<long long>(-bound, bound)(rng);
}

/// Poles of order up to 3 at the marked points of u only, residues summing to zero.
RationalOneForm random_form_on(const wideopen::RationalWideOpen& u, Field f, std::mt19937_64& rng) {
    RationalOneForm w(f);
    std::uniform_int_distribution<int> order(1, 3);
    bool infinite = false;
    PadicNumber residues = PadicNumber::zero(f);
    std::optional<PadicNumber> last;
    for (const auto& pt : u.marked_points()) {
        if (pt.infinite) {
            infinite = true;
            const int deg = order(rng) - 1;
            for (int m = 0; m < deg; ++m) w = w + RationalOneForm::polynomial_term(f, m, random_integral(f, rng));
            continue;
        }
        const int k = order(rng);
        for (int j = 1; j <= k; ++j) {
            const PadicNumber c = random_integral(f, rng);
            if (j == 1) residues += c;
            w = w + RationalOneForm::pole_term(f, pt.x, j, c);
        }
        last = pt.x;
    }
    if (!infinite && last) w = w + RationalOneForm::pole_term(f, *last, 1, -residues);
    return w;
}

/// A third-kind family with small random residues at Z and around the cycles.
CechCochain random_family(const CurveModel& x, std::mt19937_64& rng) {
    const Field f = x.field();
    const std::size_t nz = x.puncture_count();
    std::vector<PadicNumber> s(nz, PadicNumber::zero(f));
    Cochain0 target = Cochain0::zero(f, x.vertex_count());
    if (nz >= 2) {
        long long total = 0;
        for (std::size_t i = 0; i + 1 < nz; ++i) {
            const long long r = small(rng, 3);
            total += r;
            s[i] = PadicNumber::integer(f, r);
        }
        s[nz - 1] = PadicNumber::integer(f, -total);
        for (std::size_t i = 0; i < nz; ++i) target[x.z_points()[i].vertex] -= s[i];
    }
    Cochain1 flow = graphs::tree_flow(x.graph(), target);
    for (const auto& cycle : graphs::cycle_basis(x.graph(), f)) {
        flow = flow + PadicNumber::integer(f, small(rng, 3)) * cycle;
    }
    return semistable::matching_family(x, semistable::ResidueData{flow, s});
}

Cochain0 random_constants(const CurveModel& x, std::mt19937_64& rng) {
    Cochain0 k = Cochain0::zero(x.field(), x.vertex_count());
    for (auto& v : k.values) v = random_integral(x.field(), rng);
    return k;
}

void check_dimension(Probe& pr, const CurveModel& x, const semistable::CohBasis& basis) {
    const std::size_t g = x.genus();
    const std::size_t nz = x.puncture_count();
    const std::size_t expected = nz == 0 ? 2 * g : 2 * g + nz - 1;
    pr.expect(basis.dimension() == expected, "dimension " + std::to_string(basis.dimension()) + ", expected " +
                                                 std::to_string(expected));
    pr.expect(basis.h1x.size() == 2 * g, "H^1(X) sub-basis has the wrong size");
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        pr.expect(semistable::validate_cocycle(basis.classes[i], x), "class " + basis.labels[i] + " is not a cocycle");
    }
}

void check_harmonic(Probe& pr, const CurveModel& x, std::mt19937_64& rng, int trials) {
    const auto& g = x.graph();
    const Field f = x.field();
    for (int t = 0; t < trials; ++t) {
        Cochain1 c = Cochain1::zero(f, x.edge_count());
        for (auto& v : c.values) v = random_integral(f, rng);
        for (bool weighted : {false, true}) {
            std::span<const long long> lengths;
            if (weighted) lengths = x.lengths();
            auto dec = graphs::harmonic_project(g, c, lengths);
            const std::string tag = weighted ? " (edge lengths)" : " (unit lengths)";
            auto rebuilt = dec.harmonic + graphs::coboundary(g, dec.potential);
            for (std::size_t e = 0; e < c.size(); ++e) pr.agree(rebuilt[e], c[e], "c = h + df" + tag);
            for (const auto& v : graphs::weighted_costar(g, dec.harmonic, lengths).values) {
                pr.vanish(v, "costar of the harmonic part" + tag);
            }
            if (!weighted) {
                Cochain0 k = random_constants(x, rng);
                pr.vanish(graphs::pointwise_product(dec.harmonic, graphs::coboundary(g, k)),
                          "harmonic part against a coboundary");
            }
        }
    }
    PadicMatrix images(f, x.edge_count(), x.edge_count());
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        Cochain1 unit = Cochain1::zero(f, x.edge_count());
        unit[e] = PadicNumber::integer(f, 1);
        auto h = graphs::harmonic_project(g, unit).harmonic;
        for (std::size_t r = 0; r < x.edge_count(); ++r) images(r, e) = h[r];
    }
    pr.expect(x.edge_count() == 0 || padic::rank(images) == x.genus(), "harmonic cochains do not have dimension g");
}

void check_wide_opens(Probe& pr, const CurveModel& x, std::mt19937_64& rng, int trials) {
    const Field f = x.field();
    for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        const auto& u = x.component(v);
        for (int t = 0; t < trials; ++t) {
            auto w = random_form_on(u, f, rng);
            auto eta = random_form_on(u, f, rng);
            auto a = wideopen::global_index_U(w, eta, u, x.window(), x.log_branch());
            auto b = wideopen::global_index_U(eta, w, u, x.window(), x.log_branch());
            pr.agree(a, -b, "global index alternating on vertex " + std::to_string(v));
            pr.vanish(a, "global index vanishes on vertex " + std::to_string(v));
            pr.vanish(wideopen::global_index_U(w, w, u, x.window(), x.log_branch()),
                      "global index of a form with itself on vertex " + std::to_string(v));
        }
    }
}

void check_aux_identity(Probe& pr, const CurveModel& x, std::mt19937_64& rng, int trials) {
    for (int t = 0; t < trials; ++t) {
        auto a = random_family(x, rng);
        auto b = random_family(x, rng);
        auto f = semistable::primitives(a, x, random_constants(x, rng));
        auto g = semistable::primitives(b, x, random_constants(x, rng));
        pr.agree(semistable::aux_pair(f, g, x), semistable::aux_pair_expansion(a, b, f, g, x),
                 "trial " + std::to_string(t));
    }
}

void check_harmonic_constants(Probe& pr, const CurveModel& x, const semistable::CohBasis& basis) {
    std::vector<semistable::VologodskyPrimitive> prims;
    // Families only: graph classes carry their own gluing functions.
    for (std::size_t i = basis.genus; i < basis.dimension(); ++i) {
        prims.push_back(semistable::vologodsky_primitive(basis.classes[i], x));
    }
    for (std::size_t i = basis.genus; i < basis.dimension(); ++i) {
        for (std::size_t j = basis.genus; j < basis.dimension(); ++j) {
            const auto& f = prims[i - basis.genus];
            const auto& g = prims[j - basis.genus];
            pr.agree(semistable::aux_pair(f.per_vertex, g.per_vertex, x),
                     semistable::hybrid_pair(basis.classes[i], basis.classes[j], x), "pair " + pair_label(i, j));
        }
    }
}

void check_cup(Probe& pr, const CurveModel& x, const semistable::CohBasis& basis) {
    if (basis.h1x.empty()) return;
    auto cup = semistable::cup_matrix(basis, x);
    for (std::size_t i = 0; i < cup.rows(); ++i) {
        for (std::size_t j = 0; j < cup.cols(); ++j) pr.agree(cup(i, j), -cup(j, i), "antisymmetry " + pair_label(i, j));
    }
    pr.expect(padic::rank(cup) == 2 * x.genus(), "cup product is degenerate on H^1(X)");
}

void check_monodromy(Probe& pr, const CurveModel& x, const semistable::CohBasis& basis) {
    std::vector<CechCochain> images;
    for (const auto& c : basis.classes) images.push_back(semistable::monodromy_operator(c, x));
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        pr.expect(graphs::is_zero(semistable::monodromy(images[i], x)), "N^2 != 0 on class " + basis.labels[i]);
        for (std::size_t j = 0; j < basis.dimension(); ++j) {
            pr.vanish(semistable::hybrid_pair(images[i], basis.classes[j], x) +
                          semistable::hybrid_pair(basis.classes[i], images[j], x),
                      "<Na, b> + <a, Nb> at " + pair_label(i, j));
        }
    }
}

void check_psi(Probe& pr, const CurveModel& x, const semistable::CohBasis& basis) {
    if (basis.h1x.empty()) return;
    auto psi = semistable::psi_matrix(basis, x);
    const Field f = x.field();
    for (std::size_t k = 0; k < basis.h1x.size(); ++k) {
        for (std::size_t r = 0; r < psi.rows(); ++r) {
            const PadicNumber expected = PadicNumber::integer(f, r == k ? 1 : 0);
            pr.agree(psi(r, basis.h1x[k]), expected, "Psi on H^1(X) basis " + pair_label(r, k));
        }
    }
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        auto image = semistable::combine(basis, psi.column_values(i), x);
        for (std::size_t k = 0; k < basis.h1x.size(); ++k) {
            const auto& beta = basis.classes[basis.h1x[k]];
            pr.agree(semistable::cup_h1X(image, beta, x), semistable::hybrid_pair(basis.classes[i], beta, x),
                     "adjointness " + pair_label(i, k));
        }
    }
}

void check_subdivision(Probe& pr, const CurveModel& x, const semistable::CohBasis& basis, std::string& note) {
    std::optional<std::size_t> edge;
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        if (x.lengths()[e] >= 2) {
            edge = e;
            break;
        }
    }
    if (!edge) {
        note = "skipped: no edge of length >= 2";
        return;
    }
    const Field f = x.field();
    auto s = semistable::subdivide(x, *edge, PadicNumber::p_power(f, 1));
    std::vector<CechCochain> moved;
    for (const auto& c : basis.classes) moved.push_back(semistable::transport(c, x, s));
    auto before = semistable::hybrid_gram(basis.classes, x);
    auto after = semistable::hybrid_gram(moved, s.model);
    for (std::size_t i = 0; i < before.rows(); ++i) {
        for (std::size_t j = 0; j < before.cols(); ++j) {
            pr.agree(before(i, j), after(i, j), "Gram entry " + pair_label(i, j));
        }
    }
    note = "edge " + std::to_string(*edge) + " split";
}

void check_height_branch(Probe& pr, const CurveModel& x, const HeightInput& h) {
    std::vector<PadicNumber> values;
    for (long long lambda : {0, 1, 2}) {
        auto ctx = x.context().with_branch(PadicNumber::integer(x.field(), lambda));
        values.push_back(semistable::local_height(h.y, h.z, h.data, x.with_context(ctx)));
    }
    pr.agree(values[1] - values[0], values[2] - values[1], "difference not linear in the branch");
}

void check_height_constant(Probe& pr, const CurveModel& x, const HeightInput& h) {
    auto oy = semistable::build_omega_y(h.y, h.data, x);
    auto plain = semistable::vologodsky_primitive(oy.form, oy.model);
    auto shifted = semistable::vologodsky_primitive(oy.form, oy.model, PadicNumber::integer(x.field(), 5));
    PadicNumber a = PadicNumber::zero(x.field());
    PadicNumber b = a;
    for (const auto& t : h.z.terms) {
        a += plain.evaluate(t.vertex, t.point, x.log_branch()) * t.multiplicity;
        b += shifted.evaluate(t.vertex, t.point, x.log_branch()) * t.multiplicity;
    }
    pr.agree(a, b, "height depends on the global constant");
    pr.agree(h.data.t * a, semistable::local_height(h.y, h.z, h.data, x), "local height disagrees with its primitive");
}

}  // namespace

std::vector<CheckResult> run(const CurveModel& x, const std::optional<HeightInput>& height, const Options& options) {
    const int digits = x.field().cap - options.slack;
    std::mt19937_64 rng(options.seed);
    std::vector<CheckResult> out;
    std::optional<semistable::CohBasis> basis;

    auto record = [&](const std::string& name, const std::function<void(Probe&, std::string&)>& body) {
        Probe pr(digits);
        std::string note;
        try {
            body(pr, note);
        } catch (const Error& e) {
            pr.expect(false, std::string("error: ") + e.what());
        }
        std::string detail = pr.passed() ? note : pr.detail();
        out.push_back(CheckResult{name, pr.passed(), detail});
    };
    auto need_basis = [&]() -> const semistable::CohBasis& {
        if (!basis) basis = semistable::h1_basis(x);
        return *basis;
    };

    record("cohomology dimension", [&](Probe& pr, std::string&) { check_dimension(pr, x, need_basis()); });
    record("harmonic decomposition", [&](Probe& pr, std::string&) { check_harmonic(pr, x, rng, options.trials); });
    record("global index on components",
           [&](Probe& pr, std::string&) { check_wide_opens(pr, x, rng, options.trials); });
    record("auxiliary pairing identity",
           [&](Probe& pr, std::string&) { check_aux_identity(pr, x, rng, options.trials); });
    record("harmonic constants give the hybrid pairing",
           [&](Probe& pr, std::string&) { check_harmonic_constants(pr, x, need_basis()); });
    record("cup product on H1(X)", [&](Probe& pr, std::string&) { check_cup(pr, x, need_basis()); });
    record("monodromy operator is skew", [&](Probe& pr, std::string&) { check_monodromy(pr, x, need_basis()); });
    record("splitting Psi", [&](Probe& pr, std::string&) { check_psi(pr, x, need_basis()); });
    record("Gram matrix under subdivision",
           [&](Probe& pr, std::string& note) { check_subdivision(pr, x, need_basis(), note); });
    if (height) {
        record("height linear in the branch", [&](Probe& pr, std::string&) { check_height_branch(pr, x, *height); });
        record("height independent of the global constant",
               [&](Probe& pr, std::string&) { check_height_constant(pr, x, *height); });
    }
    return out;
}

}  // namespace padicheights::selfcheck
