#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "sicta/errors.hpp"
#include "sicta/numeric.hpp"

namespace sicta {

/// Finite sum  sum coeff * x^a * e^{-b x}.
///
/// Terms sharing a decay b form one component whose coefficients are stored
/// densely over a band of powers [low, low + size). Scalar is Rational for
/// exact work or long double for the pruned numeric recursion.
template <class Scalar>
class ExpPoly {
public:
    struct Component {
        Scalar decay;
        int low = 0;
        std::vector<Scalar> coeffs;  ///< coeffs[i] multiplies x^(low + i)
    };

    ExpPoly() = default;

    static ExpPoly term(const Scalar& coeff, int power, const Scalar& decay)
    {
        ExpPoly out;
        if (coeff != Scalar(0)) {
            out.parts_.push_back(Component{decay, power, {coeff}});
        }
        return out;
    }

    static ExpPoly constant(const Scalar& value) { return term(value, 0, Scalar(0)); }

    const std::vector<Component>& components() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }

    std::size_t term_count() const
    {
        std::size_t n = 0;
        for (const auto& c : parts_) {
            n += c.coeffs.size();
        }
        return n;
    }

    /// Coefficient of x^power e^{-decay x}.
    Scalar coefficient(int power, const Scalar& decay) const
    {
        for (const auto& c : parts_) {
            if (same_decay(c.decay, decay)) {
                const int i = power - c.low;
                if (i >= 0 && i < static_cast<int>(c.coeffs.size())) {
                    return c.coeffs[static_cast<std::size_t>(i)];
                }
            }
        }
        return Scalar(0);
    }

    ExpPoly& operator+=(const ExpPoly& rhs)
    {
        for (const auto& c : rhs.parts_) {
            accumulate(c, Scalar(1));
        }
        return *this;
    }

    ExpPoly& operator-=(const ExpPoly& rhs)
    {
        for (const auto& c : rhs.parts_) {
            accumulate(c, Scalar(-1));
        }
        return *this;
    }

    friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
    friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }

    friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b)
    {
        ExpPoly out;
        for (const auto& ca : a.parts_) {
            for (const auto& cb : b.parts_) {
                Component prod{ca.decay + cb.decay, ca.low + cb.low,
                               std::vector<Scalar>(ca.coeffs.size() + cb.coeffs.size() - 1, Scalar(0))};
                for (std::size_t i = 0; i < ca.coeffs.size(); ++i) {
                    if (ca.coeffs[i] == Scalar(0)) {
                        continue;
                    }
                    for (std::size_t k = 0; k < cb.coeffs.size(); ++k) {
                        prod.coeffs[i + k] += ca.coeffs[i] * cb.coeffs[k];
                    }
                }
                out.accumulate(prod, Scalar(1));
            }
        }
        return out;
    }

    /// Multiply every coefficient by s.
    ExpPoly& operator*=(const Scalar& s)
    {
        if (s == Scalar(0)) {
            parts_.clear();
            return *this;
        }
        for (auto& c : parts_) {
            for (auto& v : c.coeffs) {
                v *= s;
            }
        }
        return *this;
    }

    /// The function x -> f(p x): (a, b, coeff) -> (a, b p, coeff p^a).
    ExpPoly scaled(const Scalar& p) const
    {
        ExpPoly out;
        if (p == Scalar(0)) {
            // f(0): only the x^0 terms survive, with e^0 = 1.
            Scalar total(0);
            for (const auto& c : parts_) {
                if (c.low == 0) {
                    total += c.coeffs[0];
                }
            }
            return constant(total);
        }
        for (const auto& c : parts_) {
            Component s{c.decay * p, c.low, c.coeffs};
            Scalar pw = power_of(p, c.low);
            for (auto& v : s.coeffs) {
                v *= pw;
                pw *= p;
            }
            out.parts_.push_back(std::move(s));
        }
        return out;
    }

    /// Value at x >= 0. Every term is formed in log space, so large powers
    /// and strong decays do not overflow.
    long double evaluate(long double x) const
    {
        long double total = 0.0L;
        const long double log_x = x > 0.0L ? std::log(x) : 0.0L;
        for (const auto& c : parts_) {
            const long double decay = to_ld(c.decay);
            for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
                const long double coeff = to_ld(c.coeffs[i]);
                if (coeff == 0.0L) {
                    continue;
                }
                const int a = c.low + static_cast<int>(i);
                if (a == 0) {
                    total += coeff * std::exp(-decay * x);
                } else if (x > 0.0L) {
                    const long double mag = std::log(std::fabs(coeff)) + a * log_x - decay * x;
                    total += std::copysign(std::exp(mag), coeff);
                }
            }
        }
        return total;
    }

    /// n! [x^n] e^{x} f(x) for n = 0..n_max. For a q_j these are P(l_n = j).
    std::vector<Scalar> poisson_coefficients(int n_max) const
    {
        std::vector<Scalar> out(static_cast<std::size_t>(n_max) + 1, Scalar(0));
        // e^{(1-b) x} x^a contributes (1-b)^{n-a} n! / (n-a)!.
        for (const auto& c : parts_) {
            const Scalar shift = Scalar(1) - c.decay;
            for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
                const int a = c.low + static_cast<int>(i);
                if (a > n_max || c.coeffs[i] == Scalar(0)) {
                    continue;
                }
                Scalar falling(1);  // n! / (n-a)!
                for (int k = 1; k <= a; ++k) {
                    falling *= Scalar(k);
                }
                Scalar pw(1);
                for (int n = a; n <= n_max; ++n) {
                    if (n > a) {
                        falling *= Scalar(n);
                        falling /= Scalar(n - a);
                        pw *= shift;
                    }
                    out[static_cast<std::size_t>(n)] += c.coeffs[i] * falling * pw;
                    if (shift == Scalar(0)) {
                        break;
                    }
                }
            }
        }
        return out;
    }

    /// Drop terms whose weight |coeff| * a! / b^a is below `threshold` and trim
    /// the bands. The weight is the Poisson-scale size of the term after its
    /// argument is rescaled to unit decay. Exact (Rational) polynomials are
    /// never pruned.
    void prune(long double threshold)
    {
        if constexpr (std::is_floating_point_v<Scalar>) {
            const long double log_thr = std::log(threshold);
            std::vector<Component> kept;
            for (auto& c : parts_) {
                auto small = [&](std::size_t i) {
                    const Scalar v = c.coeffs[i];
                    if (v == Scalar(0)) {
                        return true;
                    }
                    const int a = c.low + static_cast<int>(i);
                    const long double rescale = (a > 0 && c.decay > 0) ? a * std::log(c.decay) : 0.0L;
                    return std::log(std::fabs(v)) + std::lgamma(static_cast<long double>(a) + 1.0L) - rescale <
                           log_thr;
                };
                for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
                    if (small(i)) {
                        c.coeffs[i] = Scalar(0);
                    }
                }
                trim(c);
                if (!c.coeffs.empty()) {
                    kept.push_back(std::move(c));
                }
            }
            parts_ = std::move(kept);
        } else {
            (void)threshold;
        }
    }

private:
    static bool same_decay(const Scalar& a, const Scalar& b)
    {
        if constexpr (std::is_floating_point_v<Scalar>) {
            return std::fabs(a - b) <= 1e-15L * std::max<Scalar>(Scalar(1), std::fabs(a));
        } else {
            return a == b;
        }
    }

    static long double to_ld(const Scalar& v)
    {
        if constexpr (std::is_floating_point_v<Scalar>) {
            return v;
        } else {
            return sicta::to_long_double(v);
        }
    }

    static Scalar power_of(const Scalar& p, int k)
    {
        Scalar out(1);
        for (int i = 0; i < k; ++i) {
            out *= p;
        }
        return out;
    }

    static void trim(Component& c)
    {
        std::size_t first = 0;
        while (first < c.coeffs.size() && c.coeffs[first] == Scalar(0)) {
            ++first;
        }
        std::size_t last = c.coeffs.size();
        while (last > first && c.coeffs[last - 1] == Scalar(0)) {
            --last;
        }
        if (first == last) {
            c.coeffs.clear();
            return;
        }
        c.coeffs = std::vector<Scalar>(c.coeffs.begin() + static_cast<std::ptrdiff_t>(first),
                                       c.coeffs.begin() + static_cast<std::ptrdiff_t>(last));
        c.low += static_cast<int>(first);
    }

    void accumulate(const Component& add, const Scalar& sign)
    {
        auto it = std::find_if(parts_.begin(), parts_.end(),
                               [&](const Component& c) { return same_decay(c.decay, add.decay); });
        if (it == parts_.end()) {
            Component c = add;
            if (sign != Scalar(1)) {
                for (auto& v : c.coeffs) {
                    v *= sign;
                }
            }
            trim(c);
            if (!c.coeffs.empty()) {
                parts_.push_back(std::move(c));
            }
            return;
        }
        Component& c = *it;
        const int low = std::min(c.low, add.low);
        const int high = std::max(c.low + static_cast<int>(c.coeffs.size()),
                                  add.low + static_cast<int>(add.coeffs.size()));
        if (low < c.low || high > c.low + static_cast<int>(c.coeffs.size())) {
            std::vector<Scalar> grown(static_cast<std::size_t>(high - low), Scalar(0));
            std::copy(c.coeffs.begin(), c.coeffs.end(), grown.begin() + (c.low - low));
            c.coeffs = std::move(grown);
            c.low = low;
        }
        for (std::size_t i = 0; i < add.coeffs.size(); ++i) {
            c.coeffs[static_cast<std::size_t>(add.low - c.low) + i] += sign * add.coeffs[i];
        }
        trim(c);
        if (c.coeffs.empty()) {
            parts_.erase(it);
        }
    }

    std::vector<Component> parts_;
};

}  // namespace sicta
