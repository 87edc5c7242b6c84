#pragma once

// Curves with semi-stable reduction whose components are all rational: the
// dual graph with per-vertex wide opens and gluing parameters, Cech-de Rham
// classes of H^1_dR(X - Z), the operators chi and N, the auxiliary and hybrid
// pairings, the splitting Psi, Vologodsky primitives and the local height.

#include <optional>
#include <string>
#include <vector>

#include "padicheights/graphs.hpp"
#include "padicheights/laurent.hpp"
#include "padicheights/padic.hpp"
#include "padicheights/wideopen.hpp"

namespace padicheights::semistable {

using graphs::Cochain0;
using graphs::Cochain1;
using laurent::LaurentForm;
using laurent::LogLaurent;
using padic::Field;
using padic::PadicContext;
using padic::PadicMatrix;
using padic::PadicNumber;
using wideopen::ColemanPrimitive;
using wideopen::Point;
using wideopen::RationalOneForm;
using wideopen::RationalWideOpen;

/// An annulus between two components. With z the coordinate of the head
/// component at head_end and zeta that of the tail component at tail_end,
/// the annulus is identified by zeta = q / z.
struct EdgeGluing {
    std::size_t tail = 0;
    std::size_t head = 0;
    Point head_end;
    Point tail_end;
    PadicNumber q;
};

/// A point of Z (or of a divisor) on a component.
struct MarkedPoint {
    std::size_t vertex = 0;
    Point point;
};

class CurveModel {
public:
    CurveModel() = default;
    CurveModel(PadicContext ctx, int window, std::size_t vertex_count, std::vector<EdgeGluing> edges,
               std::vector<std::vector<Point>> punctures);

    const PadicContext& context() const { return ctx_; }
    Field field() const { return ctx_.field; }
    const PadicNumber& log_branch() const { return ctx_.log_branch; }
    int window() const { return window_; }
    const graphs::Graph& graph() const { return graph_; }
    std::size_t vertex_count() const { return graph_.vertex_count(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<EdgeGluing>& edges() const { return edges_; }
    const EdgeGluing& edge(std::size_t e) const { return edges_.at(e); }
    const RationalWideOpen& component(std::size_t v) const { return components_.at(v); }
    const std::vector<std::vector<Point>>& punctures() const { return punctures_; }
    std::size_t genus() const { return graph_.betti_number(); }
    /// Edge lengths v(q_e); harmonicity of graph cochains is taken with respect to them.
    const std::vector<long long>& lengths() const { return lengths_; }
    /// Points of Z in a fixed order: by vertex, then as listed.
    const std::vector<MarkedPoint>& z_points() const { return z_points_; }
    std::size_t puncture_count() const { return z_points_.size(); }

    CurveModel with_punctures(std::vector<std::vector<Point>> punctures) const;
    CurveModel with_context(const PadicContext& ctx) const;

private:
    PadicContext ctx_;
    int window_ = laurent::kDefaultWindow;
    graphs::Graph graph_;
    std::vector<EdgeGluing> edges_;
    std::vector<long long> lengths_;
    std::vector<std::vector<Point>> punctures_;
    std::vector<RationalWideOpen> components_;
    std::vector<MarkedPoint> z_points_;
};

/// ((omega_v), (f_e)): a rational form per component and a function per edge
/// in the head coordinate of that edge.
struct CechCochain {
    std::vector<RationalOneForm> omega;
    std::vector<LogLaurent> f;

    static CechCochain zero(const CurveModel& x);
    /// The class of the graph cochain kappa: zero forms, constant gluing functions.
    static CechCochain graph_class(const CurveModel& x, const Cochain1& kappa);
    /// A family of forms with zero gluing functions.
    static CechCochain from_forms(const CurveModel& x, std::vector<RationalOneForm> forms);

    CechCochain operator-() const;
    friend CechCochain operator+(const CechCochain& a, const CechCochain& b);
    friend CechCochain operator-(const CechCochain& a, const CechCochain& b);
    friend CechCochain operator*(const PadicNumber& s, const CechCochain& a);
};

/// The coboundary of the functions g_v = integral of exact_forms[v]:
/// omega_v = d g_v and f_e = g_head - g_tail on the annulus. Throws
/// InvariantViolation if some form has a residue.
CechCochain coboundary_class(const CurveModel& x, const std::vector<RationalOneForm>& exact_forms);

/// d f_e = omega_head|e - omega_tail|e on every edge, to working precision.
bool validate_cocycle(const CechCochain& c, const CurveModel& x);

/// Residues of a global third-kind family: flow(e) at the head end of e
/// (minus that at the tail end) and one residue per point of Z.
struct ResidueData {
    Cochain1 flow;
    std::vector<PadicNumber> z_residues;
};

/// The unique family of forms with the given residues and no other poles
/// than ends and Z, matching across every annulus. Principal parts at ends
/// are solved for up to an order bound that grows until the matching holds.
/// Throws Inconsistent if the residues violate the residue theorem on some
/// component and AnsatzTooSmall if no order bound within the window works.
std::vector<CechCochain> matching_families(const CurveModel& x, const std::vector<ResidueData>& data);
CechCochain matching_family(const CurveModel& x, const ResidueData& data);

/// Families with residue flow along each cycle of the cycle basis and no
/// residues at Z; they span the holomorphic forms.
std::vector<CechCochain> holomorphic_basis(const CurveModel& x);

/// Basis of H^1_dR(X - Z): graph classes, then third-kind families, then
/// holomorphic families. The first and last blocks span H^1_dR(X).
struct CohBasis {
    std::vector<CechCochain> classes;
    std::vector<std::string> labels;
    std::size_t genus = 0;
    std::size_t third_kind_count = 0;
    /// Indices of the H^1_dR(X) sub-basis: graph classes then holomorphic families.
    std::vector<std::size_t> h1x;
    std::vector<Cochain1> graph_cochains;
    std::vector<Cochain1> cycles;

    std::size_t dimension() const { return classes.size(); }
};

/// Throws DegenerateModel if the classes are not independent or the cup
/// product on the H^1_dR(X) sub-basis is degenerate.
CohBasis h1_basis(const CurveModel& x);
/// The H^1_dR(X) part alone: graph classes then holomorphic families.
CohBasis h1x_basis(const CurveModel& x);

std::vector<PadicNumber> z_residues(const CechCochain& c, const CurveModel& x);

/// Coleman primitives of each omega_v, shifted by the given constants.
std::vector<ColemanPrimitive> primitives(const CechCochain& c, const CurveModel& x,
                                         const std::optional<Cochain0>& constants = std::nullopt);

/// chi(e) = f_e - (F_head|e - F_tail|e); throws NotConstantOnAnnulus.
Cochain1 chi(const CechCochain& c, const CurveModel& x);
/// N(e) = Res_e(omega_head).
Cochain1 monodromy(const CechCochain& c, const CurveModel& x);

/// The monodromy operator on classes: the graph class of length(e) * N(e).
/// With unit lengths this is the graph class of the annular residues.
CechCochain monodromy_operator(const CechCochain& c, const CurveModel& x);

/// c(e) = F_tail|e - F_head|e for the given primitives.
Cochain1 correction_cochain(const std::vector<ColemanPrimitive>& prims, const CurveModel& x);

/// Sum over components of the wide-open global index of the restrictions.
PadicNumber global_index_sum(const CechCochain& a, const CechCochain& b, const CurveModel& x);

/// <a, b>_h = sum_v gpair_v + chi(a) . N(b) - chi(b) . N(a), the products
/// taken with the harmonic representative of chi for the edge lengths.
PadicNumber hybrid_pair(const CechCochain& a, const CechCochain& b, const CurveModel& x);
PadicMatrix hybrid_gram(const std::vector<CechCochain>& classes, const CurveModel& x);

/// Sum of double indices at the points of Z of the given primitives.
PadicNumber aux_pair(const std::vector<ColemanPrimitive>& f, const std::vector<ColemanPrimitive>& g,
                     const CurveModel& x);
/// The right-hand side of the identity relating the auxiliary pairing to the
/// global indices on components and the correction cochains:
///   sum_v gpair_v(F_v, G_v) + sum_e (c(e) Res_e eta - d(e) Res_e omega).
PadicNumber aux_pair_expansion(const CechCochain& omega, const CechCochain& eta,
                               const std::vector<ColemanPrimitive>& f, const std::vector<ColemanPrimitive>& g,
                               const CurveModel& x);

/// Cup product of classes without residues at Z. Throws InvariantViolation
/// when a class has a residue at Z.
PadicNumber cup_h1X(const CechCochain& a, const CechCochain& b, const CurveModel& x);
/// Cup matrix on the H^1_dR(X) sub-basis; throws DegeneratePairing if singular.
PadicMatrix cup_matrix(const CohBasis& basis, const CurveModel& x);

/// Coordinates of Psi(c) in the H^1_dR(X) sub-basis, defined by
/// Psi(c) u beta_j = <c, beta_j>_h for every sub-basis element beta_j.
std::vector<PadicNumber> psi_split(const CechCochain& c, const CohBasis& basis, const CurveModel& x);
/// Column j holds the coordinates of Psi(basis class j).
PadicMatrix psi_matrix(const CohBasis& basis, const CurveModel& x);
CechCochain combine(const CohBasis& basis, const std::vector<PadicNumber>& h1x_coords, const CurveModel& x);

struct Divisor {
    struct Term {
        std::size_t vertex = 0;
        Point point;
        long long multiplicity = 0;
    };
    std::vector<Term> terms;

    long long degree() const;
    Divisor operator-() const;
    Divisor scaled(long long k) const;
};

/// The splitting subspace W (coordinates in the H^1_dR(X) sub-basis, one
/// column per generator) and the trace multiplier t. An empty W means the
/// span of the graph classes.
struct HeightData {
    std::optional<PadicMatrix> w;
    PadicNumber t;
};

struct OmegaY {
    /// The model with Z replaced by the support of y.
    CurveModel model;
    CechCochain form;
    /// Coordinates of Psi(form) in the H^1_dR(X) sub-basis; they lie in W.
    std::vector<PadicNumber> psi;
};

/// The third-kind family with residue divisor y whose splitting lies in W.
/// Throws NotComplementary if W meets the holomorphic forms.
OmegaY build_omega_y(const Divisor& y, const HeightData& data, const CurveModel& x);

struct VologodskyPrimitive {
    std::vector<ColemanPrimitive> per_vertex;
    /// The correction cochain F_tail - F_head, harmonic for the edge lengths.
    Cochain1 correction;

    PadicNumber evaluate(std::size_t vertex, const Point& point, const PadicNumber& log_branch) const;
};

/// Adjusts the primitive constants so that the correction cochain is
/// harmonic; `global_constant` is added on every component.
VologodskyPrimitive vologodsky_primitive(const CechCochain& family, const CurveModel& x,
                                         const std::optional<PadicNumber>& global_constant = std::nullopt);

/// t * sum_j n_j F(z_j) with F the Vologodsky primitive of omega_y.
PadicNumber local_height(const Divisor& y, const Divisor& z, const HeightData& data, const CurveModel& x);

/// Splits edge e into two by a new rational component: the head half gets
/// gluing parameter q1, the tail half q_e / q1.
struct Subdivision {
    CurveModel model;
    std::size_t new_vertex = 0;
    std::size_t head_half = 0;
    std::size_t tail_half = 0;
};
Subdivision subdivide(const CurveModel& x, std::size_t e, const PadicNumber& q1);
/// Carries a class whose gluing functions are constants to the subdivided model.
CechCochain transport(const CechCochain& c, const CurveModel& x, const Subdivision& s);
Cochain1 transport_cochain(const Cochain1& c, const Subdivision& s);

}  // namespace padicheights::semistable
