#pragma once

// Truncated Laurent series plus a log term on oriented annuli, their
// differentials, residues, the double index and the inversion gluing z -> q/z.

#include <string>
#include <vector>

#include "padicheights/padic.hpp"

namespace padicheights::laurent {

using padic::Field;
using padic::PadicNumber;

inline constexpr int kDefaultWindow = 40;

struct Annulus {
    enum class Kind { finite_width, width_zero_at_point };

    Kind kind = Kind::finite_width;
    std::string coordinate = "z";
    int orientation = 1;

    static Annulus at_point(std::string coordinate = "z") {
        return Annulus{Kind::width_zero_at_point, std::move(coordinate), 1};
    }
    Annulus reversed() const { return Annulus{kind, coordinate, -orientation}; }
};

/// F0 + a log z with F0 = sum_{|n| <= M} c_n z^n.
class LogLaurent {
public:
    LogLaurent() = default;
    LogLaurent(Field f, int window);

    static LogLaurent monomial(Field f, int window, int n, const PadicNumber& c);
    static LogLaurent log_z(Field f, int window, const PadicNumber& c);

    Field field() const { return field_; }
    int window() const { return window_; }
    /// Zero outside the window.
    PadicNumber coeff(int n) const;
    void set_coeff(int n, const PadicNumber& c);
    void add_to_coeff(int n, const PadicNumber& c);
    const PadicNumber& log_coefficient() const { return log_; }
    void set_log_coefficient(const PadicNumber& c) { log_ = c; }
    /// The same series with the log term dropped.
    LogLaurent laurent_part() const;
    /// Smallest absolute precision over all coefficients.
    int precision() const;

    LogLaurent operator-() const;
    friend LogLaurent operator+(const LogLaurent& a, const LogLaurent& b);
    friend LogLaurent operator-(const LogLaurent& a, const LogLaurent& b);
    friend LogLaurent operator*(const PadicNumber& s, const LogLaurent& a);

private:
    Field field_{};
    int window_ = 0;
    std::vector<PadicNumber> coeffs_;
    PadicNumber log_;
};

/// (sum_n b_n z^n) dz with n in [-M-1, M-1].
class LaurentForm {
public:
    LaurentForm() = default;
    LaurentForm(Field f, int window);

    static LaurentForm monomial(Field f, int window, int n, const PadicNumber& c);

    Field field() const { return field_; }
    int window() const { return window_; }
    int min_exponent() const { return -window_ - 1; }
    int max_exponent() const { return window_ - 1; }
    PadicNumber coeff(int n) const;
    void set_coeff(int n, const PadicNumber& c);
    void add_to_coeff(int n, const PadicNumber& c);
    int precision() const;

    LaurentForm operator-() const;
    friend LaurentForm operator+(const LaurentForm& a, const LaurentForm& b);
    friend LaurentForm operator-(const LaurentForm& a, const LaurentForm& b);
    friend LaurentForm operator*(const PadicNumber& s, const LaurentForm& a);

private:
    Field field_{};
    int window_ = 0;
    std::vector<PadicNumber> coeffs_;
};

bool is_exact_zero(const PadicNumber& x);

bool same_to_precision(const LogLaurent& a, const LogLaurent& b);
bool same_to_precision(const LaurentForm& a, const LaurentForm& b);
bool agrees(const LogLaurent& a, const LogLaurent& b, int digits);
bool agrees(const LaurentForm& a, const LaurentForm& b, int digits);

LaurentForm differentiate(const LogLaurent& f);

/// Coefficient of z^-1 dz.
PadicNumber residue(const LaurentForm& w);
/// Orientation sign times the coefficient of z^-1 dz.
PadicNumber residue(const LaurentForm& w, const Annulus& e);

/// Antiderivative with zero constant term. The z^-1 dz term becomes the log
/// coefficient; integrating z^n loses v(n+1) digits.
LogLaurent primitive(const LaurentForm& w);

/// Res(F0 w) for the log-free part F0 of F, without forming the product.
PadicNumber residue_of_product(const LogLaurent& f, const LaurentForm& w);

/// The antisymmetric bilinear extension of (F, G) -> Res F dG from pairs with
/// Res dF = 0 to all of Laurent-plus-log.
PadicNumber double_index(const LogLaurent& f, const LogLaurent& g, const Annulus& e);

/// Substitutes z -> q/z; log z -> log q - log z on the given branch.
LogLaurent pullback_inversion(const LogLaurent& f, const PadicNumber& q, const PadicNumber& log_branch);
/// Substitutes z -> q/z in a form, using d(q/z) = -q z^-2 dz.
LaurentForm pullback_inversion(const LaurentForm& w, const PadicNumber& q);

/// Substitutes z -> u z for a unit u.
LogLaurent rescale(const LogLaurent& f, const PadicNumber& u, const PadicNumber& log_branch);

/// For X in the coordinate z and Y in zeta = q/z on the same annulus, checks
/// that Y(q/z) - X(z) is constant and returns it. Coefficients are compared as
/// zeta^-n = q^-n z^n without dividing by powers of q, so no digits are lost.
/// Throws NotConstantOnAnnulus otherwise.
PadicNumber annulus_constant_difference(const LogLaurent& x, const LogLaurent& y, const PadicNumber& q,
                                        const PadicNumber& log_branch);

/// Whether w (in z) and eta (in zeta = q/z) are the same form on the annulus,
/// compared without dividing by powers of q.
bool forms_match_on_annulus(const LaurentForm& w, const LaurentForm& eta, const PadicNumber& q);

}  // namespace padicheights::laurent
