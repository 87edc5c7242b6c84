#include "padicheights/laurent.hpp"

#include <algorithm>

namespace padicheights::laurent {

namespace {

void require_compatible(Field a, int wa, Field b, int wb) {
    if (a != b) throw Error("Laurent operands from different fields");
    if (wa != wb) throw Error("Laurent operands with different truncation windows");
}

}  // namespace

bool is_exact_zero(const PadicNumber& x) { return x.is_zero() && x.precision() >= x.field().cap; }

LogLaurent::LogLaurent(Field f, int window)
    : field_(f), window_(window), coeffs_(static_cast<std::size_t>(2 * window + 1), PadicNumber::zero(f)),
      log_(PadicNumber::zero(f)) {
    if (window < 1) throw InputError("truncation window must be positive");
}

LogLaurent LogLaurent::monomial(Field f, int window, int n, const PadicNumber& c) {
    LogLaurent r(f, window);
    r.set_coeff(n, c);
    return r;
}

LogLaurent LogLaurent::log_z(Field f, int window, const PadicNumber& c) {
    LogLaurent r(f, window);
    r.log_ = c;
    return r;
}

PadicNumber LogLaurent::coeff(int n) const {
    if (n < -window_ || n > window_) return PadicNumber::zero(field_);
    return coeffs_[static_cast<std::size_t>(n + window_)];
}

void LogLaurent::set_coeff(int n, const PadicNumber& c) {
    if (n < -window_ || n > window_) {
        if (is_exact_zero(c)) return;
        throw WindowExceeded("exponent " + std::to_string(n) + " outside truncation window " +
                             std::to_string(window_));
    }
    coeffs_[static_cast<std::size_t>(n + window_)] = c;
}

void LogLaurent::add_to_coeff(int n, const PadicNumber& c) {
    if (is_exact_zero(c)) return;
    set_coeff(n, coeff(n) + c);
}

LogLaurent LogLaurent::laurent_part() const {
    LogLaurent r = *this;
    r.log_ = PadicNumber::zero(field_);
    return r;
}

int LogLaurent::precision() const {
    int m = log_.precision();
    for (const auto& c : coeffs_) m = std::min(m, c.precision());
    return m;
}

LogLaurent LogLaurent::operator-() const {
    LogLaurent r = *this;
    for (auto& c : r.coeffs_) c = -c;
    r.log_ = -r.log_;
    return r;
}

LogLaurent operator+(const LogLaurent& a, const LogLaurent& b) {
    require_compatible(a.field_, a.window_, b.field_, b.window_);
    LogLaurent r = a;
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
    r.log_ += b.log_;
    return r;
}

LogLaurent operator-(const LogLaurent& a, const LogLaurent& b) { return a + (-b); }

LogLaurent operator*(const PadicNumber& s, const LogLaurent& a) {
    LogLaurent r = a;
    for (auto& c : r.coeffs_) {
        if (!is_exact_zero(c)) c = s * c;
    }
    if (!is_exact_zero(r.log_)) r.log_ = s * r.log_;
    return r;
}

LaurentForm::LaurentForm(Field f, int window)
    : field_(f), window_(window), coeffs_(static_cast<std::size_t>(2 * window + 1), PadicNumber::zero(f)) {
    if (window < 1) throw InputError("truncation window must be positive");
}

LaurentForm LaurentForm::monomial(Field f, int window, int n, const PadicNumber& c) {
    LaurentForm r(f, window);
    r.set_coeff(n, c);
    return r;
}

PadicNumber LaurentForm::coeff(int n) const {
    if (n < min_exponent() || n > max_exponent()) return PadicNumber::zero(field_);
    return coeffs_[static_cast<std::size_t>(n - min_exponent())];
}

void LaurentForm::set_coeff(int n, const PadicNumber& c) {
    if (n < min_exponent() || n > max_exponent()) {
        if (is_exact_zero(c)) return;
        throw WindowExceeded("form exponent " + std::to_string(n) + " outside truncation window " +
                             std::to_string(window_));
    }
    coeffs_[static_cast<std::size_t>(n - min_exponent())] = c;
}

void LaurentForm::add_to_coeff(int n, const PadicNumber& c) {
    if (is_exact_zero(c)) return;
    set_coeff(n, coeff(n) + c);
}

int LaurentForm::precision() const {
    int m = field_.cap;
    for (const auto& c : coeffs_) m = std::min(m, c.precision());
    return m;
}

LaurentForm LaurentForm::operator-() const {
    LaurentForm r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

LaurentForm operator+(const LaurentForm& a, const LaurentForm& b) {
    require_compatible(a.field_, a.window_, b.field_, b.window_);
    LaurentForm r = a;
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
    return r;
}

LaurentForm operator-(const LaurentForm& a, const LaurentForm& b) { return a + (-b); }

LaurentForm operator*(const PadicNumber& s, const LaurentForm& a) {
    LaurentForm r = a;
    for (auto& c : r.coeffs_) {
        if (!is_exact_zero(c)) c = s * c;
    }
    return r;
}

bool same_to_precision(const LogLaurent& a, const LogLaurent& b) {
    require_compatible(a.field(), a.window(), b.field(), b.window());
    if (!padic::same_to_precision(a.log_coefficient(), b.log_coefficient())) return false;
    for (int n = -a.window(); n <= a.window(); ++n) {
        if (!padic::same_to_precision(a.coeff(n), b.coeff(n))) return false;
    }
    return true;
}

bool same_to_precision(const LaurentForm& a, const LaurentForm& b) {
    require_compatible(a.field(), a.window(), b.field(), b.window());
    for (int n = a.min_exponent(); n <= a.max_exponent(); ++n) {
        if (!padic::same_to_precision(a.coeff(n), b.coeff(n))) return false;
    }
    return true;
}

bool agrees(const LogLaurent& a, const LogLaurent& b, int digits) {
    require_compatible(a.field(), a.window(), b.field(), b.window());
    if (!padic::agrees(a.log_coefficient(), b.log_coefficient(), digits)) return false;
    for (int n = -a.window(); n <= a.window(); ++n) {
        if (!padic::agrees(a.coeff(n), b.coeff(n), digits)) return false;
    }
    return true;
}

bool agrees(const LaurentForm& a, const LaurentForm& b, int digits) {
    require_compatible(a.field(), a.window(), b.field(), b.window());
    for (int n = a.min_exponent(); n <= a.max_exponent(); ++n) {
        if (!padic::agrees(a.coeff(n), b.coeff(n), digits)) return false;
    }
    return true;
}

LaurentForm differentiate(const LogLaurent& f) {
    LaurentForm w(f.field(), f.window());
    for (int n = -f.window(); n <= f.window(); ++n) {
        if (n == 0) continue;
        const PadicNumber c = f.coeff(n);
        if (is_exact_zero(c)) continue;
        w.set_coeff(n - 1, c * n);
    }
    w.add_to_coeff(-1, f.log_coefficient());
    return w;
}

PadicNumber residue(const LaurentForm& w) { return w.coeff(-1); }

PadicNumber residue(const LaurentForm& w, const Annulus& e) {
    return e.orientation > 0 ? residue(w) : -residue(w);
}

LogLaurent primitive(const LaurentForm& w) {
    LogLaurent f(w.field(), w.window());
    for (int n = w.min_exponent(); n <= w.max_exponent(); ++n) {
        const PadicNumber c = w.coeff(n);
        if (is_exact_zero(c)) continue;
        if (n == -1) {
            f.set_log_coefficient(c);
            continue;
        }
        f.set_coeff(n + 1, c / PadicNumber::integer(w.field(), n + 1));
    }
    return f;
}

PadicNumber residue_of_product(const LogLaurent& f, const LaurentForm& w) {
    PadicNumber s = PadicNumber::zero(f.field());
    for (int n = -f.window(); n <= f.window(); ++n) {
        const PadicNumber a = f.coeff(n);
        const PadicNumber b = w.coeff(-1 - n);
        if (is_exact_zero(a) || is_exact_zero(b)) continue;
        s += a * b;
    }
    return s;
}

PadicNumber double_index(const LogLaurent& f, const LogLaurent& g, const Annulus& e) {
    // With F = F0 + a log z and G = G0 + b log z:
    //   <F, G> = Res(F0 dG0) + b [z^0]F0 - a [z^0]G0.
    const LogLaurent f0 = f.laurent_part();
    const LogLaurent g0 = g.laurent_part();
    PadicNumber value = residue_of_product(f0, differentiate(g0));
    if (!is_exact_zero(g.log_coefficient())) value += g.log_coefficient() * f0.coeff(0);
    if (!is_exact_zero(f.log_coefficient())) value -= f.log_coefficient() * g0.coeff(0);
    return e.orientation > 0 ? value : -value;
}

LogLaurent pullback_inversion(const LogLaurent& f, const PadicNumber& q, const PadicNumber& log_branch) {
    if (q.is_zero() || q.valuation() < 1) throw InvariantViolation("gluing parameter must have positive valuation");
    LogLaurent r(f.field(), f.window());
    const PadicNumber q_inv = q.inverse();
    for (int n = -f.window(); n <= f.window(); ++n) {
        const PadicNumber c = f.coeff(n);
        if (is_exact_zero(c)) continue;
        r.set_coeff(-n, c * (n >= 0 ? q.pow(n) : q_inv.pow(-n)));
    }
    const PadicNumber a = f.log_coefficient();
    if (!is_exact_zero(a)) {
        r.add_to_coeff(0, a * padic::padic_log(q, log_branch));
        r.set_log_coefficient(-a);
    }
    return r;
}

LaurentForm pullback_inversion(const LaurentForm& w, const PadicNumber& q) {
    if (q.is_zero() || q.valuation() < 1) throw InvariantViolation("gluing parameter must have positive valuation");
    LaurentForm r(w.field(), w.window());
    const PadicNumber q_inv = q.inverse();
    for (int n = w.min_exponent(); n <= w.max_exponent(); ++n) {
        const PadicNumber c = w.coeff(n);
        if (is_exact_zero(c)) continue;
        // (q/z)^n * (-q z^-2) dz = -q^(n+1) z^(-n-2) dz
        const int k = n + 1;
        r.set_coeff(-n - 2, -(c * (k >= 0 ? q.pow(k) : q_inv.pow(-k))));
    }
    return r;
}

LogLaurent rescale(const LogLaurent& f, const PadicNumber& u, const PadicNumber& log_branch) {
    if (u.is_zero() || u.valuation() != 0) throw InvariantViolation("rescaling factor must be a unit");
    LogLaurent r(f.field(), f.window());
    for (int n = -f.window(); n <= f.window(); ++n) {
        const PadicNumber c = f.coeff(n);
        if (is_exact_zero(c)) continue;
        r.set_coeff(n, c * u.pow(n));
    }
    const PadicNumber a = f.log_coefficient();
    r.set_log_coefficient(a);
    if (!is_exact_zero(a)) r.add_to_coeff(0, a * padic::padic_log(u, log_branch));
    return r;
}

PadicNumber annulus_constant_difference(const LogLaurent& x, const LogLaurent& y, const PadicNumber& q,
                                        const PadicNumber& log_branch) {
    require_compatible(x.field(), x.window(), y.field(), y.window());
    if (!padic::same_to_precision(x.log_coefficient(), -y.log_coefficient())) {
        throw NotConstantOnAnnulus("log terms do not cancel across the annulus");
    }
    const int m = x.window();
    // zeta^-n = q^-n z^n: compare y_{-n} with q^n x_n (n > 0) and x_{-n} with q^n y_n.
    // A coefficient below the cap may be stored as an exact zero although the
    // primitive divided it by n, so only cap - v(n) digits are compared.
    const unsigned p = x.field().p;
    auto close = [&](const PadicNumber& a, const PadicNumber& b, int n) {
        int loss = 0;
        for (int k = n; k % static_cast<int>(p) == 0; k /= static_cast<int>(p)) ++loss;
        return (a - b).with_precision(x.field().cap - loss).is_zero();
    };
    PadicNumber qn = PadicNumber::integer(x.field(), 1);
    for (int n = 1; n <= m; ++n) {
        qn *= q;
        if (!close(y.coeff(-n), qn * x.coeff(n), n) || !close(x.coeff(-n), qn * y.coeff(n), n)) {
            throw NotConstantOnAnnulus("difference across the annulus has a nonconstant z^" + std::to_string(n) +
                                       " or z^-" + std::to_string(n) + " term");
        }
    }
    PadicNumber value = y.coeff(0) - x.coeff(0);
    if (!is_exact_zero(y.log_coefficient())) value += y.log_coefficient() * padic::padic_log(q, log_branch);
    return value;
}

bool forms_match_on_annulus(const LaurentForm& w, const LaurentForm& eta, const PadicNumber& q) {
    require_compatible(w.field(), w.window(), eta.field(), eta.window());
    // With w = sum a_n z^n dz/z and eta = sum b_m zeta^m dzeta/zeta: b_{-n} = -q^n a_n.
    if (!padic::same_to_precision(w.coeff(-1), -eta.coeff(-1))) return false;
    PadicNumber qn = PadicNumber::integer(w.field(), 1);
    for (int n = 1; n <= w.window(); ++n) {
        qn *= q;
        if (!padic::same_to_precision(eta.coeff(-n - 1), -(qn * w.coeff(n - 1)))) return false;
        if (!padic::same_to_precision(w.coeff(-n - 1), -(qn * eta.coeff(n - 1)))) return false;
    }
    return true;
}

}  // namespace padicheights::laurent
