#include "sicta/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sicta/errors.hpp"

namespace sicta {

std::string observable_name(Observable obs)
{
    switch (obs) {
    case Observable::Length:
        return "L";
    case Observable::Collisions:
        return "C";
    case Observable::Successes:
        return "S";
    case Observable::Idle:
        return "I";
    }
    return "?";
}

Observable parse_observable(const std::string& text)
{
    if (text == "L") {
        return Observable::Length;
    }
    if (text == "C") {
        return Observable::Collisions;
    }
    if (text == "S") {
        return Observable::Successes;
    }
    if (text == "I") {
        return Observable::Idle;
    }
    throw InvalidArgument("unknown observable '" + text + "' (expected L, C, S or I)");
}

namespace {

constexpr int kRationalLimit = 64;

// Scalar adaptors so one kernel serves both arithmetic modes.
struct RationalOps {
    using T = Rational;
    T from(const Rational& q) const { return q; }
    T from(long v) const { return T(v); }
    T from(const BigInt& v) const { return T(v); }
};

struct FloatOps {
    using T = BigFloat;
    mpfr_prec_t bits;
    T from(const Rational& q) const { return T(q, bits); }
    T from(long v) const { return T(v, bits); }
    T from(const BigInt& v) const { return T(v, bits); }
};

long magnitude_exponent(const Rational& q)
{
    if (q == 0) {
        return std::numeric_limits<long>::min() / 2;
    }
    BigFloat f(q, 64);
    return f.exponent();
}

long magnitude_exponent(const BigFloat& f) { return f.exponent(); }

template <class Ops>
struct Evaluation {
    typename Ops::T value;
    long max_term_exponent = std::numeric_limits<long>::min() / 2;
};

// Incremental powers p_j^i, Fbar(k)^i and Fbar(k)^{i-1} for i = 2, 3, ...
template <class Ops>
class PowerTable {
public:
    using T = typename Ops::T;

    PowerTable(const SplitDistribution& dist, const Ops& ops) : d_(dist.d())
    {
        for (int j = 1; j <= d_; ++j) {
            p_.push_back(ops.from(dist.p_exact(j)));
            p_pow_.push_back(p_.back() * p_.back());
        }
        for (int k = 0; k < d_; ++k) {
            tail_.push_back(ops.from(dist.tail_exact(k)));
            tail_prev_.push_back(tail_.back());
            tail_pow_.push_back(tail_.back() * tail_.back());
        }
    }

    void advance()
    {
        for (int j = 0; j < d_; ++j) {
            p_pow_[static_cast<std::size_t>(j)] *= p_[static_cast<std::size_t>(j)];
        }
        for (int k = 0; k < d_; ++k) {
            tail_prev_[static_cast<std::size_t>(k)] = tail_pow_[static_cast<std::size_t>(k)];
            tail_pow_[static_cast<std::size_t>(k)] *= tail_[static_cast<std::size_t>(k)];
        }
    }

    const T& p(int j) const { return p_[static_cast<std::size_t>(j - 1)]; }           // p_j
    const T& p_pow(int j) const { return p_pow_[static_cast<std::size_t>(j - 1)]; }   // p_j^i
    const T& tail_pow(int k) const { return tail_pow_[static_cast<std::size_t>(k)]; } // Fbar(k)^i
    const T& tail_prev(int k) const { return tail_prev_[static_cast<std::size_t>(k)]; } // Fbar(k)^{i-1}

private:
    int d_;
    std::vector<T> p_, p_pow_, tail_, tail_prev_, tail_pow_;
};

template <class Ops>
Evaluation<Ops> evaluate_sum(const SplitDistribution& dist, Observable obs, int n, bool literal, const Ops& ops)
{
    using T = typename Ops::T;
    const int d = dist.d();
    Evaluation<Ops> out{ops.from(0L)};

    // Constant terms: the i = 0 and i = 1 parts of the binomial expansion.
    switch (obs) {
    case Observable::Length:
        out.value = ops.from(1L);
        break;
    case Observable::Collisions:
        out.value = ops.from(0L);
        break;
    case Observable::Successes:
        out.value = ops.from(literal ? 1L : static_cast<long>(n));
        break;
    case Observable::Idle:
        out.value = ops.from(literal ? 0L : 1L - n);
        break;
    }

    PowerTable<Ops> pw(dist, ops);
    BigInt binom = BigInt(n) * (n - 1) / 2;
    const T one = ops.from(1L);
    for (int i = 2; i <= n; ++i) {
        if (i > 2) {
            pw.advance();
            binom *= (n - i + 1);
            binom /= i;
        }
        // Building blocks of the per-observable numerators.
        T tails_from0 = ops.from(0L);  // sum_{k=0}^{d-2} Fbar(k)^i
        for (int k = 0; k <= d - 2; ++k) {
            tails_from0 += pw.tail_pow(k);
        }
        const T not_last = one - pw.p_pow(d);  // 1 - p_d^i
        T skip_mass = ops.from(0L);            // sum_k p_k Fbar(k-1)^{i-1}
        for (int k = 1; k <= d; ++k) {
            skip_mass += pw.p(k) * pw.tail_prev(k - 1);
        }
        const T im1 = ops.from(static_cast<long>(i - 1));
        const T ii = ops.from(static_cast<long>(i));
        const T h_length = im1 * tails_from0;
        const T h_coll = im1 * not_last;
        const T h_succ = -(ii * (one - skip_mass));

        T h = ops.from(0L);
        switch (obs) {
        case Observable::Length:
            h = h_length;
            break;
        case Observable::Collisions:
            h = h_coll;
            break;
        case Observable::Successes:
            h = h_succ;
            break;
        case Observable::Idle:
            if (literal) {
                T inner = ops.from(0L);
                for (int k = 1; k <= d - 2; ++k) {
                    inner += pw.tail_pow(k);
                }
                h = im1 * (inner + pw.p_pow(d)) + ii * skip_mass;
            } else {
                h = h_length - h_coll - h_succ;
            }
            break;
        }

        T denom = one;
        for (int j = 1; j <= d; ++j) {
            denom -= pw.p_pow(j);
        }
        T term = ops.from(binom) * h / denom;
        out.max_term_exponent = std::max(out.max_term_exponent, magnitude_exponent(term));
        if (i % 2 == 0) {
            out.value += term;
        } else {
            out.value -= term;
        }
    }
    return out;
}

Rational base_case(Observable obs, int n)
{
    switch (obs) {
    case Observable::Length:
        return 1;
    case Observable::Collisions:
        return 0;
    case Observable::Successes:
        return n;
    case Observable::Idle:
        return 1 - n;
    }
    return 0;
}

}  // namespace

ClosedFormValue closed_form(const SplitDistribution& dist, Observable obs, int n, const ClosedFormOptions& options)
{
    if (n < 0) {
        throw InvalidArgument("n must be nonnegative");
    }
    ClosedFormValue result;
    result.observable = obs;
    result.n = n;

    if (n <= 1) {
        result.mode = ArithmeticMode::Rational;
        result.exact = base_case(obs, n);
        result.value = BigFloat(*result.exact, 128);
        return result;
    }

    ArithmeticMode mode = options.mode;
    if (mode == ArithmeticMode::Auto) {
        mode = n <= kRationalLimit ? ArithmeticMode::Rational : ArithmeticMode::HighPrecision;
    }

    if (mode == ArithmeticMode::Rational) {
        auto eval = evaluate_sum(dist, obs, n, options.paper_literal, RationalOps{});
        result.mode = ArithmeticMode::Rational;
        result.exact = eval.value;
        result.value = BigFloat(eval.value, 128);
        return result;
    }

    // Binomials reach 2^n, so about n bits cancel; start there and verify.
    const double worst_p = *std::max_element(dist.values().begin(), dist.values().end());
    const long guard = 64 + 16 + static_cast<long>(std::ceil(std::log2(static_cast<double>(n) * dist.d() + 1.0)));
    auto bits = static_cast<mpfr_prec_t>(n + guard + static_cast<long>(std::ceil(-std::log2(1.0 - worst_p))));
    bool zero_before = false;
    while (true) {
        if (bits > options.max_bits) {
            throw PrecisionExhausted("closed form for n = " + std::to_string(n) + " needs more than " +
                                     std::to_string(options.max_bits) + " bits");
        }
        auto eval = evaluate_sum(dist, obs, n, options.paper_literal, FloatOps{bits});
        // An exact zero has no relative error to control; accept it once it
        // survives a precision increase.
        const bool zero = eval.value.is_zero();
        const long lost = zero ? 0 : eval.max_term_exponent - eval.value.exponent();
        if ((!zero && lost + guard <= bits) || (zero && zero_before)) {
            result.mode = ArithmeticMode::HighPrecision;
            result.precision_bits = bits;
            result.value = std::move(eval.value);
            return result;
        }
        zero_before = zero;
        bits = std::max<mpfr_prec_t>(2 * bits, static_cast<mpfr_prec_t>(lost + guard + 64));
    }
}

ClosedFormValue mean_cri_length(const SplitDistribution& dist, int n, const ClosedFormOptions& options)
{
    return closed_form(dist, Observable::Length, n, options);
}

ClosedFormValue mean_collisions(const SplitDistribution& dist, int n, const ClosedFormOptions& options)
{
    return closed_form(dist, Observable::Collisions, n, options);
}

ClosedFormValue mean_successes(const SplitDistribution& dist, int n, const ClosedFormOptions& options)
{
    return closed_form(dist, Observable::Successes, n, options);
}

ClosedFormValue mean_idle(const SplitDistribution& dist, int n, const ClosedFormOptions& options)
{
    return closed_form(dist, Observable::Idle, n, options);
}

}  // namespace sicta
