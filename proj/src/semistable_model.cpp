#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "padicheights/error.hpp"
#include "padicheights/semistable.hpp"

namespace padicheights::semistable {

using laurent::is_exact_zero;

CurveModel::CurveModel(PadicContext ctx, int window, std::size_t vertex_count, std::vector<EdgeGluing> edges,
                       std::vector<std::vector<Point>> punctures)
    : ctx_(std::move(ctx)), window_(window), edges_(std::move(edges)), punctures_(std::move(punctures)) {
    if (window_ < 1) throw InputError("truncation must be positive");
    if (punctures_.empty()) punctures_.resize(vertex_count);
    if (punctures_.size() != vertex_count) throw InputError("one puncture list per vertex is required");

    std::vector<graphs::Edge> plain;
    plain.reserve(edges_.size());
    for (const auto& e : edges_) plain.push_back(graphs::Edge{e.tail, e.head});
    graph_ = graphs::Graph(vertex_count, std::move(plain));

    const int cap = ctx_.field.cap;
    for (const auto& e : edges_) {
        if (e.q.field() != ctx_.field) throw InputError("gluing parameter from a different field");
        if (e.q.is_zero() || e.q.valuation() < 1) {
            throw InvariantViolation("q_e must be topologically nilpotent");
        }
        if (static_cast<long long>(window_ + 1) * e.q.valuation() < cap) {
            throw WindowExceeded("truncation too small for the gluing parameters: need (M+1) v(q_e) >= N");
        }
        lengths_.push_back(e.q.valuation());
    }

    std::vector<std::vector<Point>> ends(vertex_count);
    for (const auto& e : edges_) {
        ends[e.head].push_back(e.head_end);
        ends[e.tail].push_back(e.tail_end);
    }
    components_.reserve(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        components_.emplace_back(ends[v], punctures_[v]);
        for (const auto& pt : punctures_[v]) z_points_.push_back(MarkedPoint{v, pt});
    }
}

CurveModel CurveModel::with_punctures(std::vector<std::vector<Point>> punctures) const {
    return CurveModel(ctx_, window_, vertex_count(), edges_, std::move(punctures));
}

CurveModel CurveModel::with_context(const PadicContext& ctx) const {
    return CurveModel(ctx, window_, vertex_count(), edges_, punctures_);
}

CechCochain CechCochain::zero(const CurveModel& x) {
    return from_forms(x, std::vector<RationalOneForm>(x.vertex_count(), RationalOneForm(x.field())));
}

CechCochain CechCochain::graph_class(const CurveModel& x, const Cochain1& kappa) {
    if (kappa.size() != x.edge_count()) throw InputError("graph cochain has the wrong number of edges");
    CechCochain c = zero(x);
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        c.f[e] = LogLaurent::monomial(x.field(), x.window(), 0, kappa[e]);
    }
    return c;
}

CechCochain CechCochain::from_forms(const CurveModel& x, std::vector<RationalOneForm> forms) {
    if (forms.size() != x.vertex_count()) throw InputError("one form per vertex is required");
    CechCochain c;
    c.omega = std::move(forms);
    c.f.assign(x.edge_count(), LogLaurent(x.field(), x.window()));
    return c;
}

CechCochain CechCochain::operator-() const {
    CechCochain r = *this;
    for (auto& w : r.omega) w = -w;
    for (auto& g : r.f) g = -g;
    return r;
}

CechCochain operator+(const CechCochain& a, const CechCochain& b) {
    if (a.omega.size() != b.omega.size() || a.f.size() != b.f.size()) throw InputError("cochains of different models");
    CechCochain r = a;
    for (std::size_t v = 0; v < r.omega.size(); ++v) r.omega[v] = r.omega[v] + b.omega[v];
    for (std::size_t e = 0; e < r.f.size(); ++e) r.f[e] = r.f[e] + b.f[e];
    return r;
}

CechCochain operator-(const CechCochain& a, const CechCochain& b) { return a + (-b); }

CechCochain operator*(const PadicNumber& s, const CechCochain& a) {
    CechCochain r = a;
    for (auto& w : r.omega) w = s * w;
    for (auto& g : r.f) g = s * g;
    return r;
}

CechCochain coboundary_class(const CurveModel& x, const std::vector<RationalOneForm>& exact_forms) {
    if (exact_forms.size() != x.vertex_count()) throw InputError("one form per vertex is required");
    std::vector<ColemanPrimitive> g;
    for (const auto& w : exact_forms) {
        for (const auto& part : w.poles()) {
            if (!w.residue_at(part.pole).is_zero()) throw InvariantViolation("an exact form has no residues");
        }
        g.push_back(wideopen::coleman_primitive(w));
    }
    CechCochain c = CechCochain::from_forms(x, exact_forms);
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const auto& ed = x.edge(e);
        LogLaurent head = g[ed.head].restrict_to(ed.head_end, x.window(), x.log_branch());
        LogLaurent tail = g[ed.tail].restrict_to(ed.tail_end, x.window(), x.log_branch());
        c.f[e] = head - laurent::pullback_inversion(tail, ed.q, x.log_branch());
    }
    return c;
}

bool validate_cocycle(const CechCochain& c, const CurveModel& x) {
    if (c.omega.size() != x.vertex_count() || c.f.size() != x.edge_count()) {
        throw InputError("cochain does not fit the model");
    }
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const auto& ed = x.edge(e);
        LaurentForm head = c.omega[ed.head].expansion_at(ed.head_end, x.window()) - laurent::differentiate(c.f[e]);
        LaurentForm tail = c.omega[ed.tail].expansion_at(ed.tail_end, x.window());
        if (!laurent::forms_match_on_annulus(head, tail, ed.q)) return false;
    }
    return true;
}

namespace {

// c z^-k dz at an end, z the local coordinate there.
RationalOneForm principal_term(Field f, const Point& end, int k, const PadicNumber& c) {
    if (end.infinite) return RationalOneForm::polynomial_term(f, k - 2, -c);
    return RationalOneForm::pole_term(f, end.x, k, c);
}

struct EndSlot {
    std::size_t vertex;
    Point point;
};

}  // namespace

std::vector<CechCochain> matching_families(const CurveModel& x, const std::vector<ResidueData>& data) {
    std::vector<CechCochain> out;
    out.reserve(data.size());
    for (const auto& d : data) out.push_back(matching_family(x, d));
    return out;
}

CechCochain matching_family(const CurveModel& x, const ResidueData& data) {
    const Field f = x.field();
    const std::size_t nv = x.vertex_count();
    const std::size_t ne = x.edge_count();
    if (data.flow.size() != ne) throw InputError("residue flow has the wrong number of edges");
    if (data.z_residues.size() != x.puncture_count()) throw InputError("one residue per point of Z is required");

    // Residue theorem on each component: d*r(v) + s(v) = 0.
    graphs::Cochain0 balance = graphs::costar(x.graph(), data.flow);
    for (std::size_t i = 0; i < x.puncture_count(); ++i) {
        balance[x.z_points()[i].vertex] += data.z_residues[i];
    }
    if (!graphs::is_zero(balance)) throw Inconsistent("residues do not sum to zero on some component");

    std::vector<std::vector<std::pair<Point, PadicNumber>>> simple(nv);
    for (std::size_t e = 0; e < ne; ++e) {
        const auto& ed = x.edge(e);
        simple[ed.head].emplace_back(ed.head_end, data.flow[e]);
        simple[ed.tail].emplace_back(ed.tail_end, -data.flow[e]);
    }
    for (std::size_t i = 0; i < x.puncture_count(); ++i) {
        simple[x.z_points()[i].vertex].emplace_back(x.z_points()[i].point, data.z_residues[i]);
    }
    std::vector<RationalOneForm> base;
    base.reserve(nv);
    for (auto& list : simple) {
        std::vector<std::pair<Point, PadicNumber>> finite;
        for (auto& [pt, r] : list) {
            if (!pt.infinite) finite.emplace_back(pt, r);
        }
        // The residue at infinity, if any, is implied.
        RationalOneForm w(f);
        for (auto& [pt, r] : finite) w = w + RationalOneForm::pole_term(f, pt.x, 1, r);
        base.push_back(std::move(w));
    }

    // Principal parts of order >= 2 at both ends of each edge, found as the
    // fixed point of c_{E,k} = -q^(k-1) [z^(k-2)] (partner expansion). Each
    // pass gains v(q_e) digits.
    const int max_order = x.window() + 1;
    int min_val = x.field().cap;
    for (const auto& ed : x.edges()) min_val = std::min(min_val, ed.q.valuation());
    const int passes = x.field().cap / std::max(min_val, 1) + 3;

    std::vector<std::vector<PadicNumber>> head_pp(ne), tail_pp(ne);
    auto build = [&]() {
        std::vector<RationalOneForm> forms = base;
        for (std::size_t e = 0; e < ne; ++e) {
            const auto& ed = x.edge(e);
            for (std::size_t i = 0; i < head_pp[e].size(); ++i) {
                if (!is_exact_zero(head_pp[e][i])) {
                    forms[ed.head] = forms[ed.head] + principal_term(f, ed.head_end, static_cast<int>(i) + 2, head_pp[e][i]);
                }
            }
            for (std::size_t i = 0; i < tail_pp[e].size(); ++i) {
                if (!is_exact_zero(tail_pp[e][i])) {
                    forms[ed.tail] = forms[ed.tail] + principal_term(f, ed.tail_end, static_cast<int>(i) + 2, tail_pp[e][i]);
                }
            }
        }
        return forms;
    };
    auto solve_side = [&](const LaurentForm& partner, const PadicNumber& q) {
        std::vector<PadicNumber> c;
        PadicNumber qk = q;
        for (int k = 2; k <= max_order; ++k, qk *= q) {
            if (qk.valuation() >= f.cap) break;
            PadicNumber s = partner.coeff(k - 2);
            c.push_back(is_exact_zero(s) ? PadicNumber::zero(f) : -(qk * s));
        }
        return c;
    };

    std::vector<RationalOneForm> forms = build();
    for (int pass = 0; pass < passes; ++pass) {
        bool changed = false;
        for (std::size_t e = 0; e < ne; ++e) {
            const auto& ed = x.edge(e);
            auto h = solve_side(forms[ed.tail].expansion_at(ed.tail_end, x.window()), ed.q);
            auto t = solve_side(forms[ed.head].expansion_at(ed.head_end, x.window()), ed.q);
            if (h != head_pp[e] || t != tail_pp[e]) changed = true;
            head_pp[e] = std::move(h);
            tail_pp[e] = std::move(t);
        }
        forms = build();
        if (!changed) break;
    }

    CechCochain c = CechCochain::from_forms(x, std::move(forms));
    if (!validate_cocycle(c, x)) {
        throw AnsatzTooSmall("principal parts at the ends do not converge within the truncation window");
    }
    return c;
}

namespace {

std::vector<Cochain1> graph_cochains(const CurveModel& x) {
    std::vector<Cochain1> out;
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        if (x.graph().is_tree_edge(e)) continue;
        Cochain1 k = Cochain1::zero(x.field(), x.edge_count());
        k[e] = PadicNumber::integer(x.field(), 1);
        out.push_back(std::move(k));
    }
    return out;
}

}  // namespace

std::vector<CechCochain> holomorphic_basis(const CurveModel& x) {
    std::vector<ResidueData> data;
    for (auto& gamma : graphs::cycle_basis(x.graph(), x.field())) {
        data.push_back(ResidueData{gamma, std::vector<PadicNumber>(x.puncture_count(), PadicNumber::zero(x.field()))});
    }
    return matching_families(x, data);
}

std::vector<PadicNumber> z_residues(const CechCochain& c, const CurveModel& x) {
    std::vector<PadicNumber> out;
    for (const auto& z : x.z_points()) out.push_back(c.omega.at(z.vertex).residue_at(z.point));
    return out;
}

namespace {

CohBasis assemble_basis(const CurveModel& x, bool with_third_kind) {
    const Field f = x.field();
    CohBasis b;
    b.genus = x.genus();
    b.cycles = graphs::cycle_basis(x.graph(), f);
    b.graph_cochains = graph_cochains(x);

    for (std::size_t i = 0; i < b.graph_cochains.size(); ++i) {
        b.h1x.push_back(b.classes.size());
        b.classes.push_back(CechCochain::graph_class(x, b.graph_cochains[i]));
        b.labels.push_back("graph[" + std::to_string(i) + "]");
    }
    if (with_third_kind && x.puncture_count() > 1) {
        for (std::size_t i = 1; i < x.puncture_count(); ++i) {
            std::vector<PadicNumber> s(x.puncture_count(), PadicNumber::zero(f));
            s[0] = PadicNumber::integer(f, -1);
            s[i] = PadicNumber::integer(f, 1);
            graphs::Cochain0 target = graphs::Cochain0::zero(f, x.vertex_count());
            for (std::size_t j = 0; j < s.size(); ++j) target[x.z_points()[j].vertex] -= s[j];
            b.classes.push_back(matching_family(x, ResidueData{graphs::tree_flow(x.graph(), target), s}));
            b.labels.push_back("third_kind[" + std::to_string(i) + "]");
            ++b.third_kind_count;
        }
    }
    auto hol = holomorphic_basis(x);
    for (std::size_t i = 0; i < hol.size(); ++i) {
        b.h1x.push_back(b.classes.size());
        b.classes.push_back(std::move(hol[i]));
        b.labels.push_back("holomorphic[" + std::to_string(i) + "]");
    }
    return b;
}

}  // namespace

CohBasis h1x_basis(const CurveModel& x) { return assemble_basis(x, false); }

CohBasis h1_basis(const CurveModel& x) {
    CohBasis b = assemble_basis(x, true);
    const Field f = x.field();
    const std::size_t nz = x.puncture_count();
    const std::size_t ne = x.edge_count();

    // Independence through the coordinates (Z-residues, N, harmonic chi).
    PadicMatrix coords(f, nz + 2 * ne, b.dimension());
    for (std::size_t j = 0; j < b.dimension(); ++j) {
        const auto& c = b.classes[j];
        auto s = z_residues(c, x);
        Cochain1 n = monodromy(c, x);
        Cochain1 h = graphs::harmonic_project(x.graph(), chi(c, x), x.lengths()).harmonic;
        for (std::size_t i = 0; i < nz; ++i) coords(i, j) = s[i];
        for (std::size_t e = 0; e < ne; ++e) {
            coords(nz + e, j) = n[e];
            coords(nz + ne + e, j) = h[e];
        }
    }
    if (padic::rank(coords) != b.dimension()) throw DegenerateModel("cohomology classes are not independent");
    try {
        cup_matrix(b, x);
    } catch (const DegeneratePairing&) {
        throw DegenerateModel("cup product on H^1_dR(X) is degenerate for this model");
    }
    return b;
}

}  // namespace padicheights::semistable
