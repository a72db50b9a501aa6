#include "sicta/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "sicta/errors.hpp"

namespace sicta {

BigFloat::BigFloat(mpfr_prec_t bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long value, mpfr_prec_t bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(double value, mpfr_prec_t bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const Rational& value, mpfr_prec_t bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigInt& value, mpfr_prec_t bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other)
{
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept
{
    // Swap in a minimal placeholder so the moved-from object stays valid.
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other)
{
    if (this != &other) {
        mpfr_set_prec(v_, other.precision());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept
{
    mpfr_swap(v_, other.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

namespace {

void widen_to(mpfr_ptr v, mpfr_prec_t bits)
{
    if (mpfr_get_prec(v) < bits) {
        mpfr_prec_round(v, bits, MPFR_RNDN);
    }
}

}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& rhs)
{
    widen_to(v_, rhs.precision());
    mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs)
{
    widen_to(v_, rhs.precision());
    mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs)
{
    widen_to(v_, rhs.precision());
    mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs)
{
    widen_to(v_, rhs.precision());
    mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::mul_ui(unsigned long k)
{
    mpfr_mul_ui(v_, v_, k, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::div_ui(unsigned long k)
{
    mpfr_div_ui(v_, v_, k, MPFR_RNDN);
    return *this;
}

BigFloat BigFloat::operator-() const
{
    BigFloat out(*this);
    mpfr_neg(out.v_, out.v_, MPFR_RNDN);
    return out;
}

BigFloat BigFloat::abs() const
{
    BigFloat out(*this);
    mpfr_abs(out.v_, out.v_, MPFR_RNDN);
    return out;
}

long BigFloat::exponent() const
{
    if (mpfr_zero_p(v_)) {
        return std::numeric_limits<long>::min() / 2;
    }
    return mpfr_get_exp(v_);
}

std::string BigFloat::to_string(int digits) const
{
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(std::max(1, digits - 1)) + "Re";
    if (mpfr_asprintf(&buf, fmt.c_str(), v_) < 0) {
        throw std::runtime_error("mpfr_asprintf failed");
    }
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

BigFloat exp(const BigFloat& x)
{
    BigFloat out(x.precision());
    mpfr_exp(out.raw(), x.raw(), MPFR_RNDN);
    return out;
}

BigFloat pow_ui(const BigFloat& x, unsigned long k)
{
    BigFloat out(x.precision());
    mpfr_pow_ui(out.raw(), x.raw(), k, MPFR_RNDN);
    return out;
}

mpfr_prec_t bits_for_digits(int digits10)
{
    return static_cast<mpfr_prec_t>(std::ceil(digits10 * 3.321928094887362)) + 1;
}

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q)
{
    // mpq_get_d truncates; go through mpfr for round-to-nearest.
    BigFloat f(q, 64);
    return f.to_double();
}

long double to_long_double(const Rational& q)
{
    BigFloat f(q, 80);
    return f.to_long_double();
}

Rational exact_rational(double x)
{
    if (!std::isfinite(x)) {
        throw InvalidArgument("non-finite value has no rational form");
    }
    Rational q(x);  // mpq_set_d is exact
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& raw)
{
    std::string text;
    for (char ch : raw) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            text.push_back(ch);
        }
    }
    if (text.empty()) {
        throw InvalidArgument("empty number");
    }
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) {
            throw InvalidArgument("zero denominator in '" + raw + "'");
        }
        Rational q = num / den;
        q.canonicalize();
        return q;
    }

    // Decimal with optional exponent: [sign] digits [. digits] [e [sign] digits]
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    long scale = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char ch = text[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_point) {
                --scale;
            }
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) {
        throw InvalidArgument("not a number: '" + raw + "'");
    }
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') {
            throw InvalidArgument("not a number: '" + raw + "'");
        }
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(text.substr(pos + 1), &used);
        } catch (const std::exception&) {
            throw InvalidArgument("bad exponent in '" + raw + "'");
        }
        if (pos + 1 + used != text.size()) {
            throw InvalidArgument("not a number: '" + raw + "'");
        }
        scale += e;
    }
    BigInt mant(digits, 10);
    BigInt ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational q = scale < 0 ? Rational(mant, ten_pow) : Rational(mant * ten_pow);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

BigInt binomial(unsigned n, unsigned k)
{
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

Rational pow(const Rational& q, unsigned k)
{
    BigInt num;
    BigInt den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), k);
    return Rational(num, den);  // already canonical: gcd is preserved under powers
}

std::vector<Rational> powers(const Rational& q, unsigned n)
{
    std::vector<Rational> out(n + 1);
    out[0] = 1;
    for (unsigned i = 1; i <= n; ++i) {
        out[i] = out[i - 1] * q;
    }
    return out;
}

}  // namespace sicta
