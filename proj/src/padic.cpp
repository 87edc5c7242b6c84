#include "padicheights/padic.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace padicheights::padic {

namespace {

void require_same_field(const PadicNumber& a, const PadicNumber& b) {
    if (a.field() != b.field()) {
        throw Error("p-adic operands from different fields (p=" + std::to_string(a.prime()) + " vs p=" +
                    std::to_string(b.prime()) + ")");
    }
}

/// Strips the p-part of a nonzero integer; returns the valuation.
int remove_p(mpz_class& x, unsigned p) {
    if (x == 0) return PadicNumber::kInfinity;
    mpz_class pp(p);
    return static_cast<int>(mpz_remove(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
}

mpz_class mod_power(const mpz_class& x, unsigned p, int k) {
    if (k <= 0) return 0;
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), prime_power(p, k).get_mpz_t());
    return r;
}

mpz_class inverse_mod_power(const mpz_class& u, unsigned p, int k) {
    if (k <= 0) return 0;
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), prime_power(p, k).get_mpz_t()) == 0) {
        throw DivisionByZero("unit is not invertible modulo p^k");
    }
    return r;
}

}  // namespace

const mpz_class& prime_power(unsigned p, int k) {
    thread_local std::map<std::pair<unsigned, int>, mpz_class> cache;
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (k < 0) throw Error("negative prime power requested");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(k));
    return cache.emplace(key, std::move(r)).first->second;
}

PadicNumber PadicNumber::normalized(Field f, mpz_class x, int shift, int precision) {
    PadicNumber r;
    r.field_ = f;
    precision = std::min(precision, f.cap);
    if (x != 0) {
        int v = remove_p(x, f.p);
        if (v != kInfinity && shift + v < precision) {
            r.valuation_ = shift + v;
            r.precision_ = precision;
            r.unit_ = mod_power(x, f.p, precision - r.valuation_);
            return r;
        }
    }
    r.valuation_ = kInfinity;
    r.precision_ = precision;
    r.unit_ = 0;
    if (precision < 1) {
        throw PrecisionExhausted("p-adic result has no known digits (precision O(p^" + std::to_string(precision) +
                                 "))");
    }
    return r;
}

PadicNumber PadicNumber::zero(Field f) { return zero(f, f.cap); }

PadicNumber PadicNumber::zero(Field f, int precision) {
    PadicNumber r;
    r.field_ = f;
    r.precision_ = std::min(precision, f.cap);
    return r;
}

PadicNumber PadicNumber::integer(Field f, long long n) { return integer(f, mpz_class(static_cast<long>(n))); }

PadicNumber PadicNumber::integer(Field f, const mpz_class& n) { return normalized(f, n, 0, f.cap); }

PadicNumber PadicNumber::rational(Field f, const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DivisionByZero("rational literal with zero denominator");
    if (num == 0) return zero(f);
    mpz_class n = num, d = den;
    int vn = remove_p(n, f.p);
    int vd = remove_p(d, f.p);
    int v = vn - vd;
    if (v >= f.cap) return zero(f);
    int k = f.cap - v;
    mpz_class u = mod_power(n * inverse_mod_power(mod_power(d, f.p, k), f.p, k), f.p, k);
    return normalized(f, u, v, f.cap);
}

PadicNumber PadicNumber::p_power(Field f, int k) {
    if (k >= f.cap) return zero(f);
    PadicNumber r;
    r.field_ = f;
    r.valuation_ = k;
    r.precision_ = f.cap;
    r.unit_ = 1;
    return r;
}

PadicNumber PadicNumber::from_digits(Field f, int valuation, std::span<const unsigned> digits,
                                     std::optional<int> precision) {
    mpz_class x = 0;
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (digits[i] >= f.p) throw InputError("p-adic digit out of range: " + std::to_string(digits[i]));
        x = x * f.p + digits[i];
    }
    return normalized(f, x, valuation, precision.value_or(f.cap));
}

std::vector<unsigned> PadicNumber::digits() const {
    std::vector<unsigned> out;
    if (is_zero()) return out;
    mpz_class x = unit_;
    int n = relative_precision();
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        mpz_class d;
        mpz_fdiv_qr_ui(x.get_mpz_t(), d.get_mpz_t(), x.get_mpz_t(), field_.p);
        out.push_back(static_cast<unsigned>(d.get_ui()));
    }
    return out;
}

PadicNumber PadicNumber::with_precision(int m) const {
    if (m >= precision_) return *this;
    if (is_zero()) return zero(field_, m);
    return normalized(field_, unit_, valuation_, m);
}

PadicNumber PadicNumber::shifted(int k) const {
    PadicNumber r = *this;
    if (is_zero()) {
        return zero(field_, std::min(field_.cap, precision_ + k));
    }
    return normalized(field_, unit_, valuation_ + k, precision_ + k);
}

PadicNumber PadicNumber::operator-() const {
    if (is_zero()) return *this;
    PadicNumber r = *this;
    r.unit_ = mod_power(-unit_, field_.p, relative_precision());
    return r;
}

PadicNumber PadicNumber::inverse() const { return integer(field_, 1) / *this; }

PadicNumber PadicNumber::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    PadicNumber result = integer(field_, 1);
    PadicNumber base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e > 0) base *= base;
    }
    return result;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    require_same_field(a, b);
    const Field f = a.field_;
    int prec = std::min(a.precision_, b.precision_);
    if (a.is_zero()) return b.with_precision(prec);
    if (b.is_zero()) return a.with_precision(prec);
    int m = std::min(a.valuation_, b.valuation_);
    if (m >= prec) return PadicNumber::zero(f, prec);
    mpz_class x = a.unit_ * prime_power(f.p, a.valuation_ - m) + b.unit_ * prime_power(f.p, b.valuation_ - m);
    return PadicNumber::normalized(f, mod_power(x, f.p, prec - m), m, prec);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    require_same_field(a, b);
    const Field f = a.field_;
    if (a.is_zero() || b.is_zero()) {
        long long va = a.is_zero() ? a.precision_ : a.valuation_;
        long long vb = b.is_zero() ? b.precision_ : b.valuation_;
        long long prec = std::min<long long>(a.precision_ + vb, b.precision_ + va);
        prec = std::min<long long>(prec, f.cap);
        return PadicNumber::normalized(f, 0, 0, static_cast<int>(prec));
    }
    int val = a.valuation_ + b.valuation_;
    int rel = std::min(a.relative_precision(), b.relative_precision());
    int prec = std::min(val + rel, f.cap);
    if (prec <= val) return PadicNumber::normalized(f, 0, 0, prec);
    return PadicNumber::normalized(f, mod_power(a.unit_ * b.unit_, f.p, prec - val), val, prec);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    require_same_field(a, b);
    const Field f = a.field_;
    if (b.is_zero()) throw DivisionByZero("division by a p-adic number that is zero to known precision");
    if (a.is_zero()) return PadicNumber::normalized(f, 0, 0, a.precision_ - b.valuation_);
    int val = a.valuation_ - b.valuation_;
    int rel = std::min(a.relative_precision(), b.relative_precision());
    int prec = std::min(val + rel, f.cap);
    if (prec <= val) return PadicNumber::normalized(f, 0, 0, prec);
    int k = prec - val;
    return PadicNumber::normalized(f, mod_power(a.unit_ * inverse_mod_power(b.unit_, f.p, k), f.p, k), val, prec);
}

PadicNumber PadicNumber::operator*(long long n) const { return *this * integer(field_, n); }

bool operator==(const PadicNumber& a, const PadicNumber& b) {
    return a.field_ == b.field_ && a.valuation_ == b.valuation_ && a.precision_ == b.precision_ &&
           a.unit_ == b.unit_;
}

bool same_to_precision(const PadicNumber& a, const PadicNumber& b) { return (a - b).is_zero(); }

bool agrees(const PadicNumber& a, const PadicNumber& b, int digits) {
    if (a.precision() < digits || b.precision() < digits) return false;
    PadicNumber d = a - b;
    return d.is_zero() || d.valuation() >= digits;
}

std::string to_string(const PadicNumber& x) {
    std::ostringstream os;
    const unsigned p = x.prime();
    if (x.is_zero()) {
        os << "0 + O(" << p << "^" << x.precision() << ")";
        return os.str();
    }
    os << p << "^" << x.valuation() << " x [";
    auto ds = x.digits();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i) os << ",";
        os << ds[i];
    }
    os << "] + O(" << p << "^" << x.precision() << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const PadicNumber& x) { return os << to_string(x); }

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

PadicContext PadicContext::make(unsigned p, int precision, std::optional<PadicNumber> log_branch) {
    if (!is_prime(p) || p < 3) throw InvariantViolation("p must be an odd prime, got " + std::to_string(p));
    if (precision < kMinimumPrecision) {
        throw PrecisionExhausted("working precision " + std::to_string(precision) + " is below the minimum of " +
                                 std::to_string(kMinimumPrecision) + " digits");
    }
    PadicContext ctx;
    ctx.field = Field{p, precision};
    if (log_branch) {
        if (log_branch->prime() != p) throw InvariantViolation("log branch lives in a different field");
        ctx.log_branch = log_branch->is_zero() ? PadicNumber::zero(ctx.field)
                                               : PadicNumber::from_digits(ctx.field, log_branch->valuation(),
                                                                          log_branch->digits(),
                                                                          log_branch->precision());
    } else {
        ctx.log_branch = PadicNumber::zero(ctx.field);
    }
    return ctx;
}

PadicContext PadicContext::with_branch(const PadicNumber& lambda) const {
    PadicContext c = *this;
    c.log_branch = lambda;
    return c;
}

namespace {

/// log0 of a unit known modulo p^prec, returned modulo p^prec.
mpz_class log_of_unit(const mpz_class& unit, unsigned p, int prec) {
    if (prec <= 0) return 0;
    // Enough terms that n - v_p(n) >= prec for every omitted term.
    int nmax = prec + 2;
    while (true) {
        int vn = 0;
        for (long long m = nmax; m % p == 0; m /= p) ++vn;
        if (nmax - vn >= prec + 1) break;
        ++nmax;
    }
    int extra = 1;
    for (long long pk = p; pk <= nmax; pk *= p) ++extra;
    const int work = prec + extra;
    const mpz_class& modulus = prime_power(p, work);

    mpz_class w;
    mpz_powm_ui(w.get_mpz_t(), unit.get_mpz_t(), p - 1, modulus.get_mpz_t());
    mpz_class x = w - 1;
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());

    mpz_class sum = 0;
    mpz_class xn = 1;
    for (int n = 1; n <= nmax; ++n) {
        xn = (xn * x) % modulus;
        int vn = 0;
        long long m = n;
        while (m % p == 0) {
            m /= p;
            ++vn;
        }
        mpz_class term = xn / prime_power(p, vn);
        term = term * inverse_mod_power(mpz_class(static_cast<long>(m)), p, work);
        if (n % 2 == 0) term = -term;
        sum += term;
    }
    sum = sum * inverse_mod_power(mpz_class(static_cast<long>(p - 1)), p, work);
    return mod_power(sum, p, prec);
}

}  // namespace

PadicNumber padic_log(const PadicNumber& x, const PadicNumber& log_branch) {
    if (x.is_zero()) throw ZeroArgument("logarithm of a p-adic number that is zero to known precision");
    const Field f = x.field();
    int prec = std::min(x.relative_precision(), f.cap);
    PadicNumber log_unit = PadicNumber::integer(f, log_of_unit(x.unit(), f.p, prec)).with_precision(prec);
    if (x.valuation() == 0) return log_unit;
    return log_branch * x.valuation() + log_unit;
}

PadicNumber padic_log(const PadicNumber& x, const PadicContext& ctx) { return padic_log(x, ctx.log_branch); }

PadicMatrix::PadicMatrix(Field f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, PadicNumber::zero(f)) {}

PadicMatrix PadicMatrix::identity(Field f, std::size_t n) {
    PadicMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = PadicNumber::integer(f, 1);
    return m;
}

PadicMatrix PadicMatrix::column(std::span<const PadicNumber> values) {
    if (values.empty()) throw Error("cannot build a column from no values");
    PadicMatrix m(values.front().field(), values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
    return m;
}

std::vector<PadicNumber> PadicMatrix::column_values(std::size_t c) const {
    std::vector<PadicNumber> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return out;
}

PadicMatrix PadicMatrix::transposed() const {
    PadicMatrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

int PadicMatrix::precision() const {
    int m = field_.cap;
    for (const auto& x : data_) m = std::min(m, x.precision());
    return m;
}

PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix dimension mismatch in product");
    PadicMatrix out(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t j = 0; j < b.cols_; ++j) {
            PadicNumber s = PadicNumber::zero(a.field_);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero() && a(i, k).precision() >= a.field_.cap) continue;
                s += a(i, k) * b(k, j);
            }
            out(i, j) = s;
        }
    }
    return out;
}

PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix dimension mismatch in difference");
    PadicMatrix out = a;
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
    return out;
}

PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix dimension mismatch in sum");
    PadicMatrix out = a;
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
}

namespace {

struct Echelon {
    PadicMatrix aug;
    std::vector<std::size_t> pivot_cols;
};

/// Gauss-Jordan on [A | B]; only the first `a_cols` columns are pivoted.
Echelon eliminate(PadicMatrix aug, std::size_t a_cols) {
    const std::size_t rows = aug.rows();
    const std::size_t cols = aug.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a_cols && r < rows; ++c) {
        std::size_t best = rows;
        int best_val = PadicNumber::kInfinity;
        for (std::size_t i = r; i < rows; ++i) {
            const auto& x = aug(i, c);
            if (!x.is_zero() && x.valuation() < best_val) {
                best_val = x.valuation();
                best = i;
            }
        }
        if (best == rows) continue;
        if (best != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(aug(r, j), aug(best, j));
        }
        const PadicNumber pivot_inv = aug(r, c).inverse();
        for (std::size_t j = c; j < cols; ++j) aug(r, j) = aug(r, j) * pivot_inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const PadicNumber factor = aug(i, c);
            if (factor.is_zero() && factor.precision() >= aug.field().cap) continue;
            for (std::size_t j = c; j < cols; ++j) {
                if (aug(r, j).is_zero() && aug(r, j).precision() >= aug.field().cap) continue;
                aug(i, j) = aug(i, j) - factor * aug(r, j);
            }
            aug(i, c) = PadicNumber::zero(aug.field());
        }
        pivots.push_back(c);
        ++r;
    }
    return Echelon{std::move(aug), std::move(pivots)};
}

}  // namespace

LinearSolution solve_linear(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.rows() != b.rows()) throw Error("solve_linear: row count mismatch");
    const Field f = a.field();
    const std::size_t n = a.cols();
    const std::size_t k = b.cols();
    PadicMatrix aug(f, a.rows(), n + k);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < k; ++j) aug(i, n + j) = b(i, j);
    }
    Echelon ech = eliminate(std::move(aug), n);
    const std::size_t rank = ech.pivot_cols.size();
    for (std::size_t i = rank; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!ech.aug(i, n + j).is_zero()) {
                throw Inconsistent("linear system has no solution to working precision (residual " +
                                   to_string(ech.aug(i, n + j)) + ")");
            }
        }
    }
    LinearSolution sol;
    sol.rank = rank;
    sol.solution = PadicMatrix(f, n, k);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t i = 0; i < rank; ++i) {
        is_pivot[ech.pivot_cols[i]] = true;
        for (std::size_t j = 0; j < k; ++j) sol.solution(ech.pivot_cols[i], j) = ech.aug(i, n + j);
    }
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<PadicNumber> v(n, PadicNumber::zero(f));
        v[free] = PadicNumber::integer(f, 1);
        for (std::size_t i = 0; i < rank; ++i) v[ech.pivot_cols[i]] = -ech.aug(i, free);
        sol.kernel.push_back(std::move(v));
    }
    sol.precision = k == 0 ? f.cap : sol.solution.precision();
    return sol;
}

std::size_t rank(const PadicMatrix& a) { return eliminate(a, a.cols()).pivot_cols.size(); }

PadicMatrix inverse(const PadicMatrix& a) {
    if (a.rows() != a.cols()) throw Error("inverse of a non-square matrix");
    auto sol = solve_linear(a, PadicMatrix::identity(a.field(), a.rows()));
    if (sol.rank != a.rows()) throw DivisionByZero("matrix is singular to working precision");
    return sol.solution;
}

}  // namespace padicheights::padic
