#include <cstddef>
#include <utility>
#include <vector>

#include "padicheights/error.hpp"
#include "padicheights/semistable.hpp"

namespace padicheights::semistable {

using laurent::is_exact_zero;

namespace {

bool is_zero_series(const LogLaurent& g) {
    if (!g.log_coefficient().is_zero()) return false;
    for (int n = -g.window(); n <= g.window(); ++n) {
        if (!g.coeff(n).is_zero()) return false;
    }
    return true;
}

bool is_constant_series(const LogLaurent& g) {
    if (!g.log_coefficient().is_zero()) return false;
    for (int n = -g.window(); n <= g.window(); ++n) {
        if (n != 0 && !g.coeff(n).is_zero()) return false;
    }
    return true;
}

}  // namespace

std::vector<ColemanPrimitive> primitives(const CechCochain& c, const CurveModel& x,
                                         const std::optional<Cochain0>& constants) {
    std::vector<ColemanPrimitive> out;
    out.reserve(x.vertex_count());
    for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        ColemanPrimitive g = wideopen::coleman_primitive(c.omega.at(v));
        g.set_constant(constants ? (*constants)[v] : PadicNumber::zero(x.field()));
        out.push_back(std::move(g));
    }
    return out;
}

Cochain1 chi(const CechCochain& c, const CurveModel& x) {
    auto prims = primitives(c, x);
    Cochain1 out = Cochain1::zero(x.field(), x.edge_count());
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const auto& ed = x.edge(e);
        LogLaurent head = prims[ed.head].restrict_to(ed.head_end, x.window(), x.log_branch()) - c.f.at(e);
        LogLaurent tail = prims[ed.tail].restrict_to(ed.tail_end, x.window(), x.log_branch());
        out[e] = laurent::annulus_constant_difference(head, tail, ed.q, x.log_branch());
    }
    return out;
}

Cochain1 monodromy(const CechCochain& c, const CurveModel& x) {
    Cochain1 out = Cochain1::zero(x.field(), x.edge_count());
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const auto& ed = x.edge(e);
        out[e] = c.omega.at(ed.head).residue_at(ed.head_end);
    }
    return out;
}

CechCochain monodromy_operator(const CechCochain& c, const CurveModel& x) {
    Cochain1 n = monodromy(c, x);
    for (std::size_t e = 0; e < n.size(); ++e) n[e] = n[e] * x.lengths()[e];
    return CechCochain::graph_class(x, n);
}

Cochain1 correction_cochain(const std::vector<ColemanPrimitive>& prims, const CurveModel& x) {
    Cochain1 out = Cochain1::zero(x.field(), x.edge_count());
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const auto& ed = x.edge(e);
        LogLaurent head = prims.at(ed.head).restrict_to(ed.head_end, x.window(), x.log_branch());
        LogLaurent tail = prims.at(ed.tail).restrict_to(ed.tail_end, x.window(), x.log_branch());
        out[e] = laurent::annulus_constant_difference(head, tail, ed.q, x.log_branch());
    }
    return out;
}

PadicNumber global_index_sum(const CechCochain& a, const CechCochain& b, const CurveModel& x) {
    PadicNumber s = PadicNumber::zero(x.field());
    for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        s += wideopen::global_index_U(a.omega.at(v), b.omega.at(v), x.component(v), x.window(), x.log_branch());
    }
    return s;
}

PadicNumber hybrid_pair(const CechCochain& a, const CechCochain& b, const CurveModel& x) {
    const auto& g = x.graph();
    return global_index_sum(a, b, x) + graphs::cohomology_product(g, chi(a, x), monodromy(b, x), x.lengths()) -
           graphs::cohomology_product(g, chi(b, x), monodromy(a, x), x.lengths());
}

PadicMatrix hybrid_gram(const std::vector<CechCochain>& classes, const CurveModel& x) {
    const std::size_t n = classes.size();
    std::vector<Cochain1> chis, ns;
    for (const auto& c : classes) {
        chis.push_back(graphs::harmonic_project(x.graph(), chi(c, x), x.lengths()).harmonic);
        ns.push_back(monodromy(c, x));
    }
    PadicMatrix m(x.field(), n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = global_index_sum(classes[i], classes[j], x) + graphs::pointwise_product(chis[i], ns[j]) -
                      graphs::pointwise_product(chis[j], ns[i]);
        }
    }
    return m;
}

PadicNumber aux_pair(const std::vector<ColemanPrimitive>& f, const std::vector<ColemanPrimitive>& g,
                     const CurveModel& x) {
    PadicNumber s = PadicNumber::zero(x.field());
    for (const auto& z : x.z_points()) {
        LogLaurent a = f.at(z.vertex).restrict_to(z.point, x.window(), x.log_branch());
        LogLaurent b = g.at(z.vertex).restrict_to(z.point, x.window(), x.log_branch());
        s += laurent::double_index(a, b, laurent::Annulus::at_point());
    }
    return s;
}

PadicNumber aux_pair_expansion(const CechCochain& omega, const CechCochain& eta,
                               const std::vector<ColemanPrimitive>& f, const std::vector<ColemanPrimitive>& g,
                               const CurveModel& x) {
    PadicNumber s = PadicNumber::zero(x.field());
    for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        s += wideopen::global_index_U(f.at(v), g.at(v), x.component(v), x.window(), x.log_branch());
    }
    Cochain1 c = correction_cochain(f, x);
    Cochain1 d = correction_cochain(g, x);
    Cochain1 res_omega = monodromy(omega, x);
    Cochain1 res_eta = monodromy(eta, x);
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        s += c[e] * res_eta[e] - d[e] * res_omega[e];
    }
    return s;
}

PadicNumber cup_h1X(const CechCochain& a, const CechCochain& b, const CurveModel& x) {
    for (const auto* c : {&a, &b}) {
        for (const auto& r : z_residues(*c, x)) {
            if (!r.is_zero()) throw InvariantViolation("cup product needs classes without residues at Z");
        }
    }
    return hybrid_pair(a, b, x);
}

PadicMatrix cup_matrix(const CohBasis& basis, const CurveModel& x) {
    std::vector<CechCochain> sub;
    for (std::size_t i : basis.h1x) sub.push_back(basis.classes.at(i));
    for (const auto& c : sub) {
        for (const auto& r : z_residues(c, x)) {
            if (!r.is_zero()) throw InvariantViolation("cup product needs classes without residues at Z");
        }
    }
    PadicMatrix m = hybrid_gram(sub, x);
    if (padic::rank(m) != sub.size()) throw DegeneratePairing("cup product on H^1_dR(X) is singular");
    return m;
}

std::vector<PadicNumber> psi_split(const CechCochain& c, const CohBasis& basis, const CurveModel& x) {
    const std::size_t n = basis.h1x.size();
    if (n == 0) return {};
    PadicMatrix cup = cup_matrix(basis, x);
    std::vector<PadicNumber> rhs;
    for (std::size_t i : basis.h1x) rhs.push_back(hybrid_pair(c, basis.classes[i], x));
    auto sol = padic::solve_linear(cup.transposed(), PadicMatrix::column(rhs));
    return sol.solution.column_values(0);
}

PadicMatrix psi_matrix(const CohBasis& basis, const CurveModel& x) {
    const std::size_t n = basis.h1x.size();
    PadicMatrix out(x.field(), n, basis.dimension());
    if (n == 0) return out;
    PadicMatrix cup = cup_matrix(basis, x);
    std::vector<CechCochain> sub;
    for (std::size_t i : basis.h1x) sub.push_back(basis.classes[i]);
    PadicMatrix rhs(x.field(), n, basis.dimension());
    for (std::size_t j = 0; j < basis.dimension(); ++j) {
        for (std::size_t i = 0; i < n; ++i) rhs(i, j) = hybrid_pair(basis.classes[j], sub[i], x);
    }
    return padic::solve_linear(cup.transposed(), rhs).solution;
}

CechCochain combine(const CohBasis& basis, const std::vector<PadicNumber>& h1x_coords, const CurveModel& x) {
    if (h1x_coords.size() != basis.h1x.size()) throw InputError("coordinate vector has the wrong length");
    CechCochain c = CechCochain::zero(x);
    for (std::size_t i = 0; i < h1x_coords.size(); ++i) {
        if (!h1x_coords[i].is_zero()) c = c + h1x_coords[i] * basis.classes[basis.h1x[i]];
    }
    return c;
}

long long Divisor::degree() const {
    long long d = 0;
    for (const auto& t : terms) d += t.multiplicity;
    return d;
}

Divisor Divisor::operator-() const { return scaled(-1); }

Divisor Divisor::scaled(long long k) const {
    Divisor r = *this;
    for (auto& t : r.terms) t.multiplicity *= k;
    return r;
}

namespace {

// Merges repeated points and drops zero multiplicities, grouped by vertex.
std::vector<std::vector<std::pair<Point, long long>>> grouped(const Divisor& d, std::size_t vertex_count) {
    std::vector<std::vector<std::pair<Point, long long>>> out(vertex_count);
    for (const auto& t : d.terms) {
        if (t.vertex >= vertex_count) throw InputError("divisor point on a nonexistent vertex");
        auto& list = out[t.vertex];
        bool merged = false;
        for (auto& [pt, m] : list) {
            if (wideopen::same_point(pt, t.point)) {
                m += t.multiplicity;
                merged = true;
            }
        }
        if (!merged) list.emplace_back(t.point, t.multiplicity);
    }
    for (auto& list : out) {
        std::erase_if(list, [](const auto& pm) { return pm.second == 0; });
    }
    return out;
}

}  // namespace

OmegaY build_omega_y(const Divisor& y, const HeightData& data, const CurveModel& x) {
    if (y.degree() != 0) throw InvariantViolation("the divisor y must have degree zero");
    const Field f = x.field();
    auto groups = grouped(y, x.vertex_count());
    std::vector<std::vector<Point>> punctures(x.vertex_count());
    std::vector<PadicNumber> s;
    Cochain0 target = Cochain0::zero(f, x.vertex_count());
    for (std::size_t v = 0; v < groups.size(); ++v) {
        for (const auto& [pt, m] : groups[v]) {
            punctures[v].push_back(pt);
            s.push_back(PadicNumber::integer(f, m));
            target[v] -= PadicNumber::integer(f, m);
        }
    }
    CurveModel xy = x.with_punctures(std::move(punctures));
    CechCochain omega0 = matching_family(xy, ResidueData{graphs::tree_flow(xy.graph(), target), s});

    const std::size_t g = xy.genus();
    if (g == 0) return OmegaY{std::move(xy), std::move(omega0), {}};

    CohBasis basis = h1x_basis(xy);
    std::vector<PadicNumber> psi = psi_split(omega0, basis, xy);

    PadicMatrix w;
    if (data.w) {
        w = *data.w;
        if (w.rows() != 2 * g || w.cols() != g) throw InputError("W must be given by g columns of length 2g");
    } else {
        w = PadicMatrix(f, 2 * g, g);
        for (std::size_t j = 0; j < g; ++j) w(j, j) = PadicNumber::integer(f, 1);
    }
    PadicMatrix split(f, 2 * g, 2 * g);
    for (std::size_t j = 0; j < g; ++j) {
        split(g + j, j) = PadicNumber::integer(f, 1);
        for (std::size_t i = 0; i < 2 * g; ++i) split(i, g + j) = w(i, j);
    }
    if (padic::rank(split) != 2 * g) throw NotComplementary("W meets the holomorphic forms");
    auto sol = padic::solve_linear(split, PadicMatrix::column(psi));

    CechCochain omega = omega0;
    for (std::size_t j = 0; j < g; ++j) {
        const PadicNumber a = sol.solution(j, 0);
        if (a.is_zero()) continue;
        omega = omega - a * basis.classes[basis.h1x[g + j]];
        psi[g + j] -= a;
    }
    return OmegaY{std::move(xy), std::move(omega), std::move(psi)};
}

PadicNumber VologodskyPrimitive::evaluate(std::size_t vertex, const Point& point,
                                          const PadicNumber& log_branch) const {
    const ColemanPrimitive& g = per_vertex.at(vertex);
    if (!point.infinite) return g.evaluate(point.x, log_branch);
    LogLaurent at_inf = g.restrict_to(point, 1, log_branch);
    if (!at_inf.log_coefficient().is_zero() || !at_inf.coeff(-1).is_zero()) {
        throw ZeroArgument("primitive is singular at infinity");
    }
    // Negative powers of 1/x beyond the first are checked by a wider expansion.
    LogLaurent wide = g.restrict_to(point, laurent::kDefaultWindow, log_branch);
    for (int n = -wide.window(); n < 0; ++n) {
        if (!wide.coeff(n).is_zero()) throw ZeroArgument("primitive is singular at infinity");
    }
    return wide.coeff(0);
}

VologodskyPrimitive vologodsky_primitive(const CechCochain& family, const CurveModel& x,
                                         const std::optional<PadicNumber>& global_constant) {
    for (const auto& g : family.f) {
        if (!is_zero_series(g)) throw InvariantViolation("a Vologodsky primitive needs a family with zero gluing functions");
    }
    auto prims = primitives(family, x);
    auto split = graphs::harmonic_project(x.graph(), correction_cochain(prims, x), x.lengths());
    Cochain0 constants = split.potential;
    if (global_constant) {
        for (auto& k : constants.values) k += *global_constant;
    }
    VologodskyPrimitive out;
    out.per_vertex = primitives(family, x, constants);
    out.correction = correction_cochain(out.per_vertex, x);
    return out;
}

PadicNumber local_height(const Divisor& y, const Divisor& z, const HeightData& data, const CurveModel& x) {
    if (y.degree() != 0 || z.degree() != 0) throw InvariantViolation("divisors must have degree zero");
    auto gy = grouped(y, x.vertex_count());
    auto gz = grouped(z, x.vertex_count());
    for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        for (const auto& [pz, mz] : gz[v]) {
            for (const auto& [py, my] : gy[v]) {
                if (wideopen::same_point(py, pz)) throw SupportsNotDisjoint("y and z share a point");
            }
            for (const auto& end : x.component(v).ends()) {
                if (wideopen::same_residue_disc(end, pz)) {
                    throw InvariantViolation("a point of z lies in a residue disc of an end");
                }
            }
        }
    }
    OmegaY oy = build_omega_y(y, data, x);
    VologodskyPrimitive fy = vologodsky_primitive(oy.form, oy.model);
    PadicNumber s = PadicNumber::zero(x.field());
    for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        for (const auto& [pz, mz] : gz[v]) s += fy.evaluate(v, pz, x.log_branch()) * mz;
    }
    return data.t * s;
}

Subdivision subdivide(const CurveModel& x, std::size_t e, const PadicNumber& q1) {
    if (e >= x.edge_count()) throw InputError("no such edge");
    const EdgeGluing old = x.edge(e);
    if (q1.is_zero() || q1.valuation() < 1 || q1.valuation() >= old.q.valuation()) {
        throw IndivisibleEdge("q1 must satisfy 0 < v(q1) < v(q_e)");
    }
    const Field f = x.field();
    Subdivision s;
    s.new_vertex = x.vertex_count();
    s.head_half = e;
    s.tail_half = x.edge_count();
    std::vector<EdgeGluing> edges = x.edges();
    edges[e] = EdgeGluing{s.new_vertex, old.head, old.head_end, Point::at(PadicNumber::zero(f)), q1};
    edges.push_back(EdgeGluing{old.tail, s.new_vertex, Point::infinity(), old.tail_end, old.q / q1});
    auto punctures = x.punctures();
    punctures.emplace_back();
    s.model = CurveModel(x.context(), x.window(), x.vertex_count() + 1, std::move(edges), std::move(punctures));
    return s;
}

CechCochain transport(const CechCochain& c, const CurveModel& x, const Subdivision& s) {
    for (const auto& g : c.f) {
        if (!is_constant_series(g)) throw InvariantViolation("transport needs constant gluing functions");
    }
    const Field f = x.field();
    const EdgeGluing& old = x.edge(s.head_half);
    const PadicNumber& q1 = s.model.edge(s.head_half).q;
    const PadicNumber& q2 = s.model.edge(s.tail_half).q;
    const int m = x.window();

    // On the new component x = q1 / z_head = zeta_tail / q2: negative powers
    // of x come from the head side, the polynomial part from the tail side.
    LaurentForm head = c.omega.at(old.head).expansion_at(old.head_end, m);
    LaurentForm tail = c.omega.at(old.tail).expansion_at(old.tail_end, m);
    RationalOneForm w(f);
    PadicNumber qk = PadicNumber::integer(f, 1);
    for (int k = 1; k <= m + 1; ++k, qk *= q1) {
        PadicNumber b = head.coeff(k - 2);
        if (is_exact_zero(b) || qk.valuation() >= f.cap) continue;
        w = w + RationalOneForm::pole_term(f, PadicNumber::zero(f), k, -(qk * b));
    }
    qk = q2;
    for (int j = 0; j <= m - 1; ++j, qk *= q2) {
        PadicNumber b = tail.coeff(j);
        if (is_exact_zero(b) || qk.valuation() >= f.cap) continue;
        w = w + RationalOneForm::polynomial_term(f, j, qk * b);
    }

    CechCochain out;
    out.omega = c.omega;
    out.omega.push_back(std::move(w));
    out.f = c.f;
    out.f.push_back(LogLaurent(f, s.model.window()));
    return out;
}

Cochain1 transport_cochain(const Cochain1& c, const Subdivision& s) {
    Cochain1 out = c;
    out.values.resize(s.tail_half + 1, PadicNumber::zero(c.values.empty() ? Field{} : c.values.front().field()));
    return out;
}

}  // namespace padicheights::semistable
