#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <vector>

namespace sicta {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Arbitrary-precision binary float with an explicit, per-object precision.
///
/// Thin RAII wrapper over an mpfr_t. Binary operations produce a result at
/// the larger of the two operand precisions, so a computation started at
/// some precision stays there without any global state.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits = 128);
    BigFloat(long value, mpfr_prec_t bits);
    BigFloat(double value, mpfr_prec_t bits);
    BigFloat(const Rational& value, mpfr_prec_t bits);
    BigFloat(const BigInt& value, mpfr_prec_t bits);

    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    BigFloat& operator+=(const BigFloat& rhs);
    BigFloat& operator-=(const BigFloat& rhs);
    BigFloat& operator*=(const BigFloat& rhs);
    BigFloat& operator/=(const BigFloat& rhs);
    BigFloat& mul_ui(unsigned long k);
    BigFloat& div_ui(unsigned long k);

    friend BigFloat operator+(BigFloat lhs, const BigFloat& rhs) { return lhs += rhs; }
    friend BigFloat operator-(BigFloat lhs, const BigFloat& rhs) { return lhs -= rhs; }
    friend BigFloat operator*(BigFloat lhs, const BigFloat& rhs) { return lhs *= rhs; }
    friend BigFloat operator/(BigFloat lhs, const BigFloat& rhs) { return lhs /= rhs; }
    BigFloat operator-() const;

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    BigFloat abs() const;
    /// Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
    long exponent() const;

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    /// Decimal rendering with `digits` significant digits.
    std::string to_string(int digits = 20) const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
};

BigFloat exp(const BigFloat& x);
BigFloat pow_ui(const BigFloat& x, unsigned long k);

/// Decimal digits to binary bits, rounding up.
mpfr_prec_t bits_for_digits(int digits10);

/// "num/den" (or "num" when the denominator is one).
std::string to_string(const Rational& q);
double to_double(const Rational& q);
long double to_long_double(const Rational& q);

/// Exact binary value of a finite double.
Rational exact_rational(double x);

/// Parse "a/b", an integer, or a finite decimal like "0.125" / "1e-3" exactly.
Rational parse_rational(const std::string& text);

BigInt binomial(unsigned n, unsigned k);
/// Rational q^k for small k by repeated squaring.
Rational pow(const Rational& q, unsigned k);

/// Powers q^0..q^n of a single rational.
std::vector<Rational> powers(const Rational& q, unsigned n);

}  // namespace sicta
