#include "padicheights/wideopen.hpp"

#include <algorithm>

namespace padicheights::wideopen {

using laurent::is_exact_zero;

bool same_point(const Point& a, const Point& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return padic::same_to_precision(a.x, b.x);
}

long residue_disc(const Point& a) {
    if (a.infinite) return -1;
    if (a.x.is_zero() || a.x.valuation() > 0) return 0;
    if (a.x.valuation() < 0) return -1;
    return static_cast<long>(a.x.digits().front());
}

bool same_residue_disc(const Point& a, const Point& b) { return residue_disc(a) == residue_disc(b); }

std::string to_string(const Point& a) { return a.infinite ? std::string("inf") : padic::to_string(a.x); }

mpz_class negative_binomial(int k, int n) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(k + n - 1), static_cast<unsigned long>(n));
    return (n % 2 == 0) ? r : mpz_class(-r);
}

namespace {

mpz_class binomial(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

/// Coefficients of (z + d)^-k = sum_n binom(-k, n) d^(-k-n) z^n for n in [0, count).
std::vector<PadicNumber> shifted_inverse_power(const PadicNumber& d, int k, int count) {
    std::vector<PadicNumber> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    const PadicNumber d_inv = d.inverse();
    PadicNumber power = d_inv.pow(k);
    const Field f = d.field();
    for (int n = 0; n < count; ++n) {
        out.push_back(PadicNumber::integer(f, negative_binomial(k, n)) * power);
        power *= d_inv;
    }
    return out;
}

/// Coefficients of (1 - a z)^-k = sum_n binom(-k, n) (-a)^n z^n for n in [0, count).
std::vector<PadicNumber> geometric_power(const PadicNumber& a, int k, int count) {
    std::vector<PadicNumber> out;
    const Field f = a.field();
    PadicNumber power = PadicNumber::integer(f, 1);
    const PadicNumber minus_a = -a;
    for (int n = 0; n < count; ++n) {
        out.push_back(PadicNumber::integer(f, negative_binomial(k, n)) * power);
        power *= minus_a;
    }
    return out;
}

bool all_exact_zero(const std::vector<PadicNumber>& xs, std::size_t from = 0) {
    for (std::size_t i = from; i < xs.size(); ++i) {
        if (!is_exact_zero(xs[i]) && !xs[i].is_zero()) return false;
    }
    return true;
}

}  // namespace

RationalWideOpen::RationalWideOpen(std::vector<Point> ends, std::vector<Point> punctures)
    : ends_(std::move(ends)), punctures_(std::move(punctures)) {
    auto all = marked_points();
    if (ends_.empty()) throw InvariantViolation("a wide open needs at least one end");
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (same_residue_disc(all[i], all[j])) {
                throw InvariantViolation("marked points " + to_string(all[i]) + " and " + to_string(all[j]) +
                                         " share a residue disc");
            }
        }
    }
}

std::vector<Point> RationalWideOpen::marked_points() const {
    std::vector<Point> all = ends_;
    all.insert(all.end(), punctures_.begin(), punctures_.end());
    return all;
}

bool RationalWideOpen::is_marked(const Point& a) const {
    for (const auto& m : marked_points()) {
        if (same_point(m, a)) return true;
    }
    return false;
}

void RationalOneForm::add_finite(const PadicNumber& a, int k, const PadicNumber& c) {
    if (k < 1) throw InputError("pole order must be positive");
    if (a.field() != field_ || c.field() != field_) throw Error("form coefficient from a different field");
    auto it = std::find_if(finite_.begin(), finite_.end(),
                           [&](const PrincipalPart& p) { return padic::same_to_precision(p.pole.x, a); });
    if (it == finite_.end()) {
        finite_.push_back(PrincipalPart{Point::at(a), {}});
        it = finite_.end() - 1;
    }
    if (it->coeffs.size() < static_cast<std::size_t>(k)) {
        it->coeffs.resize(static_cast<std::size_t>(k), PadicNumber::zero(field_));
    }
    it->coeffs[static_cast<std::size_t>(k - 1)] += c;
}

void RationalOneForm::add_infinite(int k, const PadicNumber& c) {
    if (k < 2) throw InputError("the residue at infinity is implied by the finite residues");
    if (infinite_.size() < static_cast<std::size_t>(k + 1)) {
        infinite_.resize(static_cast<std::size_t>(k + 1), PadicNumber::zero(field_));
    }
    infinite_[static_cast<std::size_t>(k)] += c;
}

RationalOneForm RationalOneForm::pole_term(Field f, const PadicNumber& a, int k, const PadicNumber& c) {
    RationalOneForm w(f);
    w.add_finite(a, k, c);
    return w;
}

RationalOneForm RationalOneForm::polynomial_term(Field f, int m, const PadicNumber& c) {
    if (m < 0) throw InputError("polynomial degree must be nonnegative");
    RationalOneForm w(f);
    // x^m dx = -z^(-m-2) dz with z = 1/x.
    w.add_infinite(m + 2, -c);
    return w;
}

RationalOneForm RationalOneForm::third_kind(Field f, const std::vector<std::pair<Point, PadicNumber>>& residues) {
    RationalOneForm w(f);
    PadicNumber total = PadicNumber::zero(f);
    bool has_infinity = false;
    for (const auto& [pt, r] : residues) {
        total += r;
        if (pt.infinite) {
            has_infinity = true;
            continue;
        }
        w.add_finite(pt.x, 1, r);
    }
    if (!total.is_zero()) {
        throw Inconsistent(has_infinity ? "residues of a rational form must sum to zero"
                                        : "finite residues must sum to zero when infinity is not a pole");
    }
    return w;
}

RationalOneForm RationalOneForm::dlog_difference(Field f, const Point& a, const Point& b) {
    return third_kind(f, {{a, PadicNumber::integer(f, 1)}, {b, PadicNumber::integer(f, -1)}});
}

PadicNumber RationalOneForm::residue_at(const Point& a) const {
    if (a.infinite) {
        PadicNumber s = PadicNumber::zero(field_);
        for (const auto& p : finite_) s -= p.coeffs.front();
        return s;
    }
    return principal_coeff(a, 1);
}

PadicNumber RationalOneForm::principal_coeff(const Point& a, int k) const {
    if (a.infinite) {
        if (k == 1) return residue_at(a);
        if (static_cast<std::size_t>(k) < infinite_.size()) return infinite_[static_cast<std::size_t>(k)];
        return PadicNumber::zero(field_);
    }
    for (const auto& p : finite_) {
        if (padic::same_to_precision(p.pole.x, a.x)) {
            if (static_cast<std::size_t>(k) <= p.coeffs.size()) return p.coeffs[static_cast<std::size_t>(k - 1)];
            return PadicNumber::zero(field_);
        }
    }
    return PadicNumber::zero(field_);
}

bool RationalOneForm::has_pole_at(const Point& a) const {
    if (a.infinite) return !residue_at(a).is_zero() || !all_exact_zero(infinite_);
    for (const auto& p : finite_) {
        if (padic::same_to_precision(p.pole.x, a.x)) return !all_exact_zero(p.coeffs);
    }
    return false;
}

std::vector<PrincipalPart> RationalOneForm::poles() const {
    std::vector<PrincipalPart> out;
    for (const auto& p : finite_) {
        if (!all_exact_zero(p.coeffs)) out.push_back(p);
    }
    if (has_pole_at(Point::infinity())) {
        PrincipalPart inf{Point::infinity(), {residue_at(Point::infinity())}};
        for (std::size_t k = 2; k < infinite_.size(); ++k) inf.coeffs.push_back(infinite_[k]);
        out.push_back(std::move(inf));
    }
    return out;
}

LaurentForm RationalOneForm::expansion_at(const Point& b, int window) const {
    LaurentForm out(field_, window);
    const int top = out.max_exponent();
    for (const auto& part : finite_) {
        if (all_exact_zero(part.coeffs)) continue;
        if (same_point(part.pole, b)) {
            for (std::size_t k = 1; k <= part.coeffs.size(); ++k) {
                out.add_to_coeff(-static_cast<int>(k), part.coeffs[k - 1]);
            }
            continue;
        }
        if (same_residue_disc(part.pole, b)) {
            throw ExpansionCollision("pole " + to_string(part.pole) + " shares the residue disc of " + to_string(b));
        }
        for (std::size_t kk = 1; kk <= part.coeffs.size(); ++kk) {
            const PadicNumber& c = part.coeffs[kk - 1];
            if (is_exact_zero(c)) continue;
            const int k = static_cast<int>(kk);
            if (!b.infinite) {
                auto series = shifted_inverse_power(b.x - part.pole.x, k, top + 1);
                for (int n = 0; n <= top; ++n) out.add_to_coeff(n, c * series[static_cast<std::size_t>(n)]);
            } else {
                // c dx/(x-a)^k = -c z^(k-2) (1 - a z)^-k dz
                const int count = top - (k - 2) + 1;
                auto series = geometric_power(part.pole.x, k, count);
                for (int n = 0; n < count; ++n) {
                    const int e = k - 2 + n;
                    if (e == -1) continue;  // carried by the residue at infinity
                    out.add_to_coeff(e, -(c * series[static_cast<std::size_t>(n)]));
                }
            }
        }
    }
    const bool pole_at_infinity = has_pole_at(Point::infinity());
    if (b.infinite) {
        out.add_to_coeff(-1, residue_at(b));
        for (std::size_t k = 2; k < infinite_.size(); ++k) out.add_to_coeff(-static_cast<int>(k), infinite_[k]);
    } else if (pole_at_infinity) {
        if (residue_disc(b) == -1) {
            throw ExpansionCollision("pole at infinity shares the residue disc of " + to_string(b));
        }
        // -c x^m dx with x = z + b.
        for (std::size_t k = 2; k < infinite_.size(); ++k) {
            const PadicNumber& c = infinite_[k];
            if (is_exact_zero(c)) continue;
            const int m = static_cast<int>(k) - 2;
            PadicNumber bpow = PadicNumber::integer(field_, 1);
            std::vector<PadicNumber> bpows;
            for (int j = 0; j <= m; ++j) {
                bpows.push_back(bpow);
                bpow *= b.x;
            }
            for (int j = 0; j <= m; ++j) {
                out.add_to_coeff(j, -(c * PadicNumber::integer(field_, binomial(m, j)) *
                                      bpows[static_cast<std::size_t>(m - j)]));
            }
        }
    }
    return out;
}

RationalOneForm RationalOneForm::operator-() const { return PadicNumber::integer(field_, -1) * *this; }

RationalOneForm operator+(const RationalOneForm& a, const RationalOneForm& b) {
    if (a.field_ != b.field_) throw Error("forms from different fields");
    RationalOneForm r = a;
    for (const auto& part : b.finite_) {
        for (std::size_t k = 1; k <= part.coeffs.size(); ++k) {
            r.add_finite(part.pole.x, static_cast<int>(k), part.coeffs[k - 1]);
        }
    }
    for (std::size_t k = 2; k < b.infinite_.size(); ++k) r.add_infinite(static_cast<int>(k), b.infinite_[k]);
    return r;
}

RationalOneForm operator-(const RationalOneForm& a, const RationalOneForm& b) { return a + (-b); }

RationalOneForm operator*(const PadicNumber& s, const RationalOneForm& a) {
    RationalOneForm r = a;
    for (auto& part : r.finite_) {
        for (auto& c : part.coeffs) {
            if (!is_exact_zero(c)) c = s * c;
        }
    }
    for (auto& c : r.infinite_) {
        if (!is_exact_zero(c)) c = s * c;
    }
    return r;
}

ColemanPrimitive coleman_primitive(const RationalOneForm& w) {
    ColemanPrimitive f;
    const Field field = w.field();
    f.field_ = field;
    f.constant_ = PadicNumber::zero(field);
    for (const auto& part : w.poles()) {
        if (part.pole.infinite) {
            // stored c_k at infinity is the polynomial -c_k x^(k-2) dx
            for (std::size_t i = 1; i < part.coeffs.size(); ++i) {
                const int k = static_cast<int>(i) + 1;
                const PadicNumber& c = part.coeffs[i];
                if (is_exact_zero(c)) continue;
                const auto deg = static_cast<std::size_t>(k - 1);
                if (f.polynomial_.size() <= deg) f.polynomial_.resize(deg + 1, PadicNumber::zero(field));
                f.polynomial_[deg] -= c / PadicNumber::integer(field, k - 1);
            }
            continue;
        }
        ColemanPrimitive::FinitePart fp{part.pole.x, part.coeffs.front(), {}};
        for (std::size_t i = 1; i < part.coeffs.size(); ++i) {
            const int m = static_cast<int>(i);
            const PadicNumber& c = part.coeffs[i];
            fp.inverse.push_back(is_exact_zero(c) ? PadicNumber::zero(field) : c / PadicNumber::integer(field, -m));
        }
        f.finite_.push_back(std::move(fp));
    }
    return f;
}

LogLaurent ColemanPrimitive::restrict_to(const Point& b, int window, const PadicNumber& log_branch) const {
    LogLaurent out(field_, window);
    out.add_to_coeff(0, constant_);
    PadicNumber log_total = PadicNumber::zero(field_);
    for (const auto& part : finite_) {
        log_total += part.log_coeff;
        const Point a = Point::at(part.pole);
        const bool trivial = is_exact_zero(part.log_coeff) && all_exact_zero(part.inverse);
        if (trivial) continue;
        if (!b.infinite && same_point(a, b)) {
            out.set_log_coefficient(out.log_coefficient() + part.log_coeff);
            for (std::size_t m = 1; m <= part.inverse.size(); ++m) {
                out.add_to_coeff(-static_cast<int>(m), part.inverse[m - 1]);
            }
            continue;
        }
        if (same_residue_disc(a, b)) {
            throw ExpansionCollision("singularity " + to_string(a) + " shares the residue disc of " + to_string(b));
        }
        if (!b.infinite) {
            const PadicNumber d = b.x - part.pole;
            if (!is_exact_zero(part.log_coeff)) {
                // log(x - a) = log d + sum (-1)^(n+1) z^n / (n d^n)
                out.add_to_coeff(0, part.log_coeff * padic::padic_log(d, log_branch));
                const PadicNumber d_inv = d.inverse();
                PadicNumber power = d_inv;
                for (int n = 1; n <= window; ++n) {
                    PadicNumber term = part.log_coeff * power / PadicNumber::integer(field_, n);
                    out.add_to_coeff(n, n % 2 == 1 ? term : -term);
                    power *= d_inv;
                }
            }
            for (std::size_t mm = 1; mm <= part.inverse.size(); ++mm) {
                const PadicNumber& r = part.inverse[mm - 1];
                if (is_exact_zero(r)) continue;
                auto series = shifted_inverse_power(d, static_cast<int>(mm), window + 1);
                for (int n = 0; n <= window; ++n) out.add_to_coeff(n, r * series[static_cast<std::size_t>(n)]);
            }
        } else {
            if (!is_exact_zero(part.log_coeff)) {
                // log(x - a) = -log z - sum a^n z^n / n
                out.set_log_coefficient(out.log_coefficient() - part.log_coeff);
                PadicNumber power = part.pole;
                for (int n = 1; n <= window; ++n) {
                    out.add_to_coeff(n, -(part.log_coeff * power / PadicNumber::integer(field_, n)));
                    power *= part.pole;
                }
            }
            for (std::size_t mm = 1; mm <= part.inverse.size(); ++mm) {
                const PadicNumber& r = part.inverse[mm - 1];
                if (is_exact_zero(r)) continue;
                const int m = static_cast<int>(mm);
                // (x - a)^-m = z^m (1 - a z)^-m
                auto series = geometric_power(part.pole, m, window - m + 1);
                for (int n = 0; m + n <= window; ++n) out.add_to_coeff(m + n, r * series[static_cast<std::size_t>(n)]);
            }
        }
    }
    const bool singular_at_infinity = !log_total.is_zero() || !all_exact_zero(polynomial_);
    if (b.infinite) {
        for (std::size_t m = 1; m < polynomial_.size(); ++m) out.add_to_coeff(-static_cast<int>(m), polynomial_[m]);
    } else if (!all_exact_zero(polynomial_) || singular_at_infinity) {
        if (residue_disc(b) == -1) {
            throw ExpansionCollision("singularity at infinity shares the residue disc of " + to_string(b));
        }
        for (std::size_t m = 1; m < polynomial_.size(); ++m) {
            const PadicNumber& c = polynomial_[m];
            if (is_exact_zero(c)) continue;
            PadicNumber bpow = PadicNumber::integer(field_, 1);
            std::vector<PadicNumber> bpows;
            for (std::size_t j = 0; j <= m; ++j) {
                bpows.push_back(bpow);
                bpow *= b.x;
            }
            for (std::size_t j = 0; j <= m; ++j) {
                out.add_to_coeff(static_cast<int>(j), c * PadicNumber::integer(field_, binomial(static_cast<int>(m),
                                                                                               static_cast<int>(j))) *
                                                          bpows[m - j]);
            }
        }
    }
    return out;
}

PadicNumber ColemanPrimitive::evaluate(const PadicNumber& x, const PadicNumber& log_branch) const {
    PadicNumber value = constant_;
    for (const auto& part : finite_) {
        const PadicNumber d = x - part.pole;
        if (d.is_zero()) throw ZeroArgument("primitive evaluated at its singularity " + padic::to_string(part.pole));
        if (!is_exact_zero(part.log_coeff)) value += part.log_coeff * padic::padic_log(d, log_branch);
        const PadicNumber d_inv = d.inverse();
        PadicNumber power = d_inv;
        for (const auto& r : part.inverse) {
            if (!is_exact_zero(r)) value += r * power;
            power *= d_inv;
        }
    }
    PadicNumber power = x;
    for (std::size_t m = 1; m < polynomial_.size(); ++m) {
        if (!is_exact_zero(polynomial_[m])) value += polynomial_[m] * power;
        power *= x;
    }
    return value;
}

LaurentForm restrict_to_end(const RationalOneForm& w, const Point& end, int window) {
    return w.expansion_at(end, window);
}

LogLaurent restrict_to_end(const ColemanPrimitive& f, const Point& end, int window, const PadicNumber& log_branch) {
    return f.restrict_to(end, window, log_branch);
}

void require_poles_marked(const RationalOneForm& w, const RationalWideOpen& u) {
    for (const auto& part : w.poles()) {
        if (!u.is_marked(part.pole)) {
            throw InvariantViolation("form has a pole at " + to_string(part.pole) +
                                     ", which is not an end or puncture of the wide open");
        }
    }
}

PadicNumber global_index_U(const ColemanPrimitive& f, const ColemanPrimitive& g, const RationalWideOpen& u,
                           int window, const PadicNumber& log_branch) {
    PadicNumber total = PadicNumber::zero(f.field());
    const laurent::Annulus end_annulus;
    const laurent::Annulus point_annulus = laurent::Annulus::at_point();
    for (const auto& e : u.ends()) {
        total += laurent::double_index(f.restrict_to(e, window, log_branch), g.restrict_to(e, window, log_branch),
                                       end_annulus);
    }
    for (const auto& x : u.punctures()) {
        total += laurent::double_index(f.restrict_to(x, window, log_branch), g.restrict_to(x, window, log_branch),
                                       point_annulus);
    }
    return total;
}

PadicNumber global_index_U(const RationalOneForm& w, const RationalOneForm& eta, const RationalWideOpen& u,
                           int window, const PadicNumber& log_branch) {
    require_poles_marked(w, u);
    require_poles_marked(eta, u);
    return global_index_U(coleman_primitive(w), coleman_primitive(eta), u, window, log_branch);
}

std::vector<RationalOneForm> h1_basis_U(const RationalWideOpen& u, Field f) {
    std::vector<RationalOneForm> out;
    auto marked = u.marked_points();
    for (std::size_t i = 1; i < marked.size(); ++i) {
        out.push_back(RationalOneForm::dlog_difference(f, marked[i], marked[0]));
    }
    return out;
}

}  // namespace padicheights::wideopen
