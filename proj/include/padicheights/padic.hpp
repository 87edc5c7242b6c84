#pragma once

// Capped absolute precision arithmetic in Q_p (p odd), the branched p-adic
// logarithm, and valuation-pivoted linear algebra.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "padicheights/error.hpp"

namespace padicheights::padic {

/// The prime and the absolute precision cap shared by a family of numbers.
struct Field {
    unsigned p = 0;
    int cap = 0;

    friend bool operator==(const Field&, const Field&) = default;
};

/// p^k as a GMP integer; cached per thread.
const mpz_class& prime_power(unsigned p, int k);

/// An element p^v * u + O(p^m) of Q_p.
///
/// The unit u is stored modulo p^(m - v). A number whose known digits are
/// all zero is represented as zero with absolute precision m. Every result
/// is capped at the field's absolute precision and never claims more digits
/// than its inputs justify.
class PadicNumber {
public:
    static constexpr int kInfinity = std::numeric_limits<int>::max();

    PadicNumber() = default;

    static PadicNumber zero(Field f);
    static PadicNumber zero(Field f, int precision);
    static PadicNumber integer(Field f, long long n);
    static PadicNumber integer(Field f, const mpz_class& n);
    static PadicNumber rational(Field f, const mpz_class& num, const mpz_class& den);
    static PadicNumber p_power(Field f, int k);
    /// p^valuation * sum digits[i] p^i, known to absolute precision `precision`
    /// (defaults to the cap).
    static PadicNumber from_digits(Field f, int valuation, std::span<const unsigned> digits,
                                   std::optional<int> precision = std::nullopt);

    Field field() const { return field_; }
    unsigned prime() const { return field_.p; }
    bool is_zero() const { return valuation_ == kInfinity; }
    int valuation() const { return valuation_; }
    int precision() const { return precision_; }
    int relative_precision() const { return is_zero() ? 0 : precision_ - valuation_; }
    /// Digits known: the zero digits of an O(p^m) zero, otherwise the relative precision.
    int known_digits() const { return is_zero() ? precision_ : precision_ - valuation_; }
    const mpz_class& unit() const { return unit_; }
    /// Base-p digits of the unit, least significant first.
    std::vector<unsigned> digits() const;

    /// Same value with absolute precision lowered to at most `m`.
    PadicNumber with_precision(int m) const;
    /// Multiplication by p^k, exact.
    PadicNumber shifted(int k) const;

    PadicNumber operator-() const;
    PadicNumber inverse() const;
    PadicNumber pow(long long e) const;

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    PadicNumber& operator+=(const PadicNumber& b) { return *this = *this + b; }
    PadicNumber& operator-=(const PadicNumber& b) { return *this = *this - b; }
    PadicNumber& operator*=(const PadicNumber& b) { return *this = *this * b; }
    PadicNumber& operator/=(const PadicNumber& b) { return *this = *this / b; }

    PadicNumber operator*(long long n) const;

    /// Representation equality (value, valuation and precision).
    friend bool operator==(const PadicNumber& a, const PadicNumber& b);

private:
    static PadicNumber normalized(Field f, mpz_class x, int shift, int precision);

    Field field_{};
    int valuation_ = kInfinity;
    int precision_ = 0;
    mpz_class unit_{0};
};

/// a - b is zero to its known precision.
bool same_to_precision(const PadicNumber& a, const PadicNumber& b);
/// Both are known to at least p^digits and agree modulo p^digits.
bool agrees(const PadicNumber& a, const PadicNumber& b, int digits);

std::string to_string(const PadicNumber& x);
std::ostream& operator<<(std::ostream& os, const PadicNumber& x);

/// Run-wide p-adic configuration: the field and the branch of the logarithm
/// (the value assigned to log p).
struct PadicContext {
    Field field;
    PadicNumber log_branch;

    /// Validates p odd prime, precision >= 8. Default branch is log p = 0.
    static PadicContext make(unsigned p, int precision,
                             std::optional<PadicNumber> log_branch = std::nullopt);

    PadicNumber zero() const { return PadicNumber::zero(field); }
    PadicNumber one() const { return PadicNumber::integer(field, 1); }
    PadicNumber integer(long long n) const { return PadicNumber::integer(field, n); }
    PadicNumber rational(long long num, long long den) const {
        return PadicNumber::rational(field, mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    }
    PadicContext with_branch(const PadicNumber& lambda) const;
};

inline constexpr int kMinimumPrecision = 8;

bool is_prime(unsigned n);

/// log(x) = v(x) * log_branch + log0(u), with log0 vanishing on roots of unity.
PadicNumber padic_log(const PadicNumber& x, const PadicNumber& log_branch);
PadicNumber padic_log(const PadicNumber& x, const PadicContext& ctx);

class PadicMatrix {
public:
    PadicMatrix() = default;
    PadicMatrix(Field f, std::size_t rows, std::size_t cols);

    static PadicMatrix identity(Field f, std::size_t n);
    static PadicMatrix column(std::span<const PadicNumber> values);

    Field field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    PadicNumber& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const PadicNumber& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<PadicNumber> column_values(std::size_t c) const;
    PadicMatrix transposed() const;
    /// Smallest absolute precision among the entries.
    int precision() const;

    friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b);
    friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b);
    friend PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b);

private:
    Field field_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<PadicNumber> data_;
};

struct LinearSolution {
    /// One particular solution per right-hand side column (free variables set to 0).
    PadicMatrix solution;
    /// Basis of the kernel of A.
    std::vector<std::vector<PadicNumber>> kernel;
    std::size_t rank = 0;
    /// Smallest absolute precision among the solution entries.
    int precision = 0;
};

/// Solves A x = b by Gauss-Jordan elimination, choosing in each column the
/// pivot of least valuation. Throws Inconsistent when some right-hand side is
/// not in the column space to working precision.
LinearSolution solve_linear(const PadicMatrix& a, const PadicMatrix& b);

std::size_t rank(const PadicMatrix& a);
PadicMatrix inverse(const PadicMatrix& a);

}  // namespace padicheights::padic
