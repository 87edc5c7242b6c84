#pragma once

// Rational wide opens (P^1 minus residue discs), rational 1-forms with
// K-rational poles in partial-fraction form, their elementary Coleman
// primitives, restriction to annulus ends and the wide-open global index.

#include <optional>
#include <string>
#include <vector>

#include "padicheights/laurent.hpp"

namespace padicheights::wideopen {

using laurent::LaurentForm;
using laurent::LogLaurent;
using padic::Field;
using padic::PadicNumber;

/// A K-rational point of P^1.
struct Point {
    bool infinite = false;
    PadicNumber x;

    static Point at(const PadicNumber& x) { return Point{false, x}; }
    static Point infinity() { return Point{true, PadicNumber()}; }
};

bool same_point(const Point& a, const Point& b);
/// Reduction mod p: the digit x mod p, or -1 for the disc around infinity.
long residue_disc(const Point& a);
bool same_residue_disc(const Point& a, const Point& b);
std::string to_string(const Point& a);

/// P^1 minus the residue discs of its ends, further punctured at finitely
/// many points. Every marked point lies in its own residue disc.
class RationalWideOpen {
public:
    RationalWideOpen() = default;
    RationalWideOpen(std::vector<Point> ends, std::vector<Point> punctures);

    const std::vector<Point>& ends() const { return ends_; }
    const std::vector<Point>& punctures() const { return punctures_; }
    /// Ends followed by punctures.
    std::vector<Point> marked_points() const;
    bool is_marked(const Point& a) const;

private:
    std::vector<Point> ends_;
    std::vector<Point> punctures_;
};

/// The principal part sum_k c_k z^-k dz at a pole, z the local coordinate
/// (x - a, or 1/x at infinity). coeffs[k-1] holds c_k.
struct PrincipalPart {
    Point pole;
    std::vector<PadicNumber> coeffs;
};

/// A rational 1-form in partial-fraction normal form. The polynomial part
/// P(x) dx is carried by the principal part at infinity; the residue at
/// infinity is always minus the sum of the finite residues.
class RationalOneForm {
public:
    RationalOneForm() = default;
    explicit RationalOneForm(Field f) : field_(f) {}

    /// c dx / (x - a)^k for finite a, k >= 1.
    static RationalOneForm pole_term(Field f, const PadicNumber& a, int k, const PadicNumber& c);
    /// c x^m dx, m >= 0.
    static RationalOneForm polynomial_term(Field f, int m, const PadicNumber& c);
    /// Simple poles with the given residues (which must sum to zero when
    /// infinity is listed, and then the residue at infinity is checked).
    static RationalOneForm third_kind(Field f, const std::vector<std::pair<Point, PadicNumber>>& residues);
    /// dx/(x - a) - dx/(x - b): residue +1 at a and -1 at b.
    static RationalOneForm dlog_difference(Field f, const Point& a, const Point& b);

    Field field() const { return field_; }
    /// Finite poles then, if present, infinity.
    std::vector<PrincipalPart> poles() const;
    PadicNumber residue_at(const Point& a) const;
    /// Coefficient of z^-k dz at the given pole in its local coordinate.
    PadicNumber principal_coeff(const Point& a, int k) const;
    bool has_pole_at(const Point& a) const;

    /// Laurent expansion at a point in its local coordinate, truncated to the
    /// window. Throws ExpansionCollision if a different pole shares the disc.
    LaurentForm expansion_at(const Point& b, int window) const;

    RationalOneForm operator-() const;
    friend RationalOneForm operator+(const RationalOneForm& a, const RationalOneForm& b);
    friend RationalOneForm operator-(const RationalOneForm& a, const RationalOneForm& b);
    friend RationalOneForm operator*(const PadicNumber& s, const RationalOneForm& a);

private:
    void add_finite(const PadicNumber& a, int k, const PadicNumber& c);
    void add_infinite(int k, const PadicNumber& c);

    Field field_{};
    std::vector<PrincipalPart> finite_;
    /// Coefficients c_k, k >= 2, of z^-k dz at infinity; index 0 unused.
    std::vector<PadicNumber> infinite_;
};

/// An antiderivative of a rational form:
///   sum_a L_a log(x - a) + sum_{a,m} R_{a,m} (x - a)^-m + sum_m P_m x^m + constant.
class ColemanPrimitive {
public:
    ColemanPrimitive() = default;

    Field field() const { return field_; }
    const PadicNumber& constant() const { return constant_; }
    void set_constant(const PadicNumber& c) { constant_ = c; }

    /// Expansion at a point in its local coordinate.
    LogLaurent restrict_to(const Point& b, int window, const PadicNumber& log_branch) const;
    /// Value at a finite point that is not a pole.
    PadicNumber evaluate(const PadicNumber& x, const PadicNumber& log_branch) const;

    friend ColemanPrimitive coleman_primitive(const RationalOneForm& w);

private:
    struct FinitePart {
        PadicNumber pole;
        PadicNumber log_coeff;
        /// inverse[m-1] is the coefficient of (x - a)^-m.
        std::vector<PadicNumber> inverse;
    };

    Field field_{};
    std::vector<FinitePart> finite_;
    /// polynomial[m] is the coefficient of x^m, m >= 1.
    std::vector<PadicNumber> polynomial_;
    PadicNumber constant_;
};

/// Term-by-term antiderivative with constant 0.
ColemanPrimitive coleman_primitive(const RationalOneForm& w);

LaurentForm restrict_to_end(const RationalOneForm& w, const Point& end, int window);
LogLaurent restrict_to_end(const ColemanPrimitive& f, const Point& end, int window, const PadicNumber& log_branch);

/// Sum of double indices of the primitives over the ends and punctures of U,
/// each taken in its own coordinate with the canonical orientation.
PadicNumber global_index_U(const RationalOneForm& w, const RationalOneForm& eta, const RationalWideOpen& u,
                           int window, const PadicNumber& log_branch);
/// Same with explicitly chosen primitives.
PadicNumber global_index_U(const ColemanPrimitive& f, const ColemanPrimitive& g, const RationalWideOpen& u,
                           int window, const PadicNumber& log_branch);

/// dlog classes spanning H^1_dR of U minus its punctures: residue +1 at each
/// marked point after the first, -1 at the first.
std::vector<RationalOneForm> h1_basis_U(const RationalWideOpen& u, Field f);

/// Throws InvariantViolation unless every pole of w is an end or puncture of u.
void require_poles_marked(const RationalOneForm& w, const RationalWideOpen& u);

/// (-1)^n binom(k + n - 1, n), the coefficient of t^n in (1 + t)^-k.
mpz_class negative_binomial(int k, int n);

}  // namespace padicheights::wideopen
