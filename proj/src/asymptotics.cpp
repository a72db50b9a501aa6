#include "sicta/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sicta/errors.hpp"

namespace sicta {

using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7,
};

// log sin(pi s) without overflow for large |Im s|; any branch will do since
// callers exponentiate.
cplx log_sin_pi(cplx s)
{
    if (std::abs(s.imag()) < 15.0) {
        return std::log(std::sin(kPi * s));
    }
    if (s.imag() < 0.0) {
        return std::conj(log_sin_pi(std::conj(s)));
    }
    // sin(pi s) = (i/2) e^{-i pi s} (1 - e^{2 i pi s}), the last factor ~ 1.
    const cplx i(0.0, 1.0);
    return cplx(-std::numbers::ln2, kPi / 2) - i * kPi * s + std::log(1.0 - std::exp(2.0 * i * kPi * s));
}

}  // namespace

cplx complex_log_gamma(cplx s)
{
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real())) {
        throw PoleOfGamma("Gamma has a pole at " + std::to_string(s.real()));
    }
    if (s.real() < 0.5) {
        return std::log(kPi) - log_sin_pi(s) - complex_log_gamma(1.0 - s);
    }
    const cplx z = s - 1.0;
    cplx x = kLanczos[0];
    for (int k = 1; k < 9; ++k) {
        x += kLanczos[k] / (z + static_cast<double>(k));
    }
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx complex_gamma(cplx s)
{
    // Exact factorials keep integer arguments clean.
    if (s.imag() == 0.0 && s.real() >= 1.0 && s.real() <= 20.0 && s.real() == std::floor(s.real())) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(s.real()); ++k) {
            f *= k;
        }
        return f;
    }
    return std::exp(complex_log_gamma(s));
}

namespace {

// Best rational approximation h/k of r with k <= k_cap, if one is within tol.
std::optional<std::pair<long long, long long>> small_fraction(double r, double tol, int k_cap)
{
    long long h_prev = 1, h = static_cast<long long>(std::floor(r));
    long long k_prev = 0, k = 1;
    double frac = r - std::floor(r);
    while (true) {
        if (std::abs(r - static_cast<double>(h) / static_cast<double>(k)) <= tol * std::max(1.0, std::abs(r))) {
            return std::make_pair(h, k);
        }
        if (frac < 1e-15) {
            return std::nullopt;
        }
        const double inv = 1.0 / frac;
        const auto a = static_cast<long long>(std::floor(inv));
        frac = inv - std::floor(inv);
        const long long h_next = a * h + h_prev;
        const long long k_next = a * k + k_prev;
        if (k_next > k_cap) {
            return std::nullopt;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
}

}  // namespace

std::optional<LatticeStructure> detect_lattice(const SplitDistribution& dist, double tol, int k_cap)
{
    const int d = dist.d();
    int ref = 1;  // the largest entry, so every ratio below is >= 1
    for (int j = 2; j <= d; ++j) {
        if (dist.p(j) > dist.p(ref)) {
            ref = j;
        }
    }
    const double log_ref = std::log(dist.p(ref));

    std::vector<std::pair<long long, long long>> fractions(static_cast<std::size_t>(d), {0, 1});
    long long denom_lcm = 1;
    for (int j = 1; j <= d; ++j) {
        if (dist.p(j) <= 0.0) {
            continue;
        }
        const double r = std::log(dist.p(j)) / log_ref;
        auto f = small_fraction(r, tol, k_cap);
        if (!f) {
            return std::nullopt;
        }
        fractions[static_cast<std::size_t>(j - 1)] = *f;
        denom_lcm = std::lcm(denom_lcm, f->second);
        if (denom_lcm > (1LL << 40)) {
            return std::nullopt;
        }
    }

    std::vector<long long> k(static_cast<std::size_t>(d), 0);
    long long g = 0;
    for (int j = 1; j <= d; ++j) {
        const auto& [num, den] = fractions[static_cast<std::size_t>(j - 1)];
        if (dist.p(j) <= 0.0) {
            continue;
        }
        k[static_cast<std::size_t>(j - 1)] = num * (denom_lcm / den);
        g = std::gcd(g, k[static_cast<std::size_t>(j - 1)]);
    }
    LatticeStructure out;
    const long long k_ref = denom_lcm / g;
    out.base = std::exp(log_ref / static_cast<double>(k_ref));
    for (auto v : k) {
        if (v / g > k_cap * static_cast<long long>(k_cap)) {
            return std::nullopt;
        }
        out.exponents.push_back(static_cast<int>(v / g));
    }
    out.y_step = 2.0 * kPi / std::abs(std::log(out.base));
    return out;
}

double entropy(const SplitDistribution& dist)
{
    double h = 0.0;
    for (double p : dist.values()) {
        if (p > 0.0) {
            h -= p * std::log(p);
        }
    }
    if (!(h > 0.0)) {
        throw DegenerateDistribution("splitting entropy is zero");
    }
    return h;
}

double leading_term(const SplitDistribution& dist, Observable obs, bool paper_literal)
{
    const int d = dist.d();
    const double h = entropy(dist);
    double tails = 0.0;  // sum_{k=0}^{d-2} Fbar(k)
    for (int k = 0; k <= d - 2; ++k) {
        tails += dist.tail(k);
    }
    double skip = 0.0;  // sum_{k=2}^d p_k ln Fbar(k-1)
    for (int k = 2; k <= d; ++k) {
        if (dist.p(k) > 0.0) {
            skip += dist.p(k) * std::log(dist.tail(k - 1));
        }
    }
    const double length = tails / h;
    const double collisions = (1.0 - dist.p(d)) / h;
    const double successes = paper_literal ? -skip / h : 1.0 + skip / h;
    switch (obs) {
    case Observable::Length:
        return length;
    case Observable::Collisions:
        return collisions;
    case Observable::Successes:
        return successes;
    case Observable::Idle:
        if (paper_literal) {
            double inner = dist.p(d);
            for (int k = 1; k <= d - 2; ++k) {
                inner += dist.tail(k);
            }
            return (inner + skip) / h;
        }
        return length - collisions - successes;
    }
    return 0.0;
}

double mst(const SplitDistribution& dist) { return 1.0 / leading_term(dist, Observable::Length); }

namespace {

// One pole of the counted-slot type: -(alpha/H) (alpha n)^{-iy} (iy) Gamma(-1+iy).
cplx length_pole(double alpha, double n, double y, double h)
{
    if (alpha <= 0.0) {
        return 0.0;
    }
    const cplx iy(0.0, y);
    const cplx log_term = -iy * std::log(alpha * n) + complex_log_gamma(cplx(-1.0, y));
    return -(alpha / h) * iy * std::exp(log_term);
}

// One pole of the successes term: (1/H) n^{-iy} Gamma(iy) sum_{k>=2} p_k (1 - Fbar(k-1)^{-iy}).
cplx success_pole(const SplitDistribution& dist, double n, double y, double h)
{
    const cplx iy(0.0, y);
    cplx weight = 0.0;
    for (int k = 2; k <= dist.d(); ++k) {
        if (dist.p(k) > 0.0) {
            weight += dist.p(k) * (1.0 - std::exp(-iy * std::log(dist.tail(k - 1))));
        }
    }
    return std::exp(-iy * std::log(n) + complex_log_gamma(iy)) * weight / h;
}

cplx pole_term(const SplitDistribution& dist, Observable obs, double n, double y, double h)
{
    const int d = dist.d();
    auto length = [&] {
        cplx acc = 0.0;
        for (int k = 0; k <= d - 2; ++k) {
            acc += length_pole(dist.tail(k), n, y, h);
        }
        return acc;
    };
    auto collisions = [&] { return length_pole(1.0, n, y, h) - length_pole(dist.p(d), n, y, h); };
    switch (obs) {
    case Observable::Length:
        return length();
    case Observable::Collisions:
        return collisions();
    case Observable::Successes:
        return success_pole(dist, n, y, h);
    case Observable::Idle:
        return length() - collisions() - success_pole(dist, n, y, h);
    }
    return 0.0;
}

// Bound on 2 |T(y)| / |Gamma(iy)| for the observable's pole terms.
double pole_amplitude(const SplitDistribution& dist, Observable obs, double h)
{
    const int d = dist.d();
    double tails = 0.0;
    for (int k = 0; k <= d - 2; ++k) {
        tails += dist.tail(k);
    }
    const double length = 2.0 * tails / h;
    const double collisions = 2.0 * (1.0 + dist.p(d)) / h;
    const double successes = 4.0 * (1.0 - dist.p(1)) / h;
    switch (obs) {
    case Observable::Length:
        return length;
    case Observable::Collisions:
        return collisions;
    case Observable::Successes:
        return successes;
    case Observable::Idle:
        return length + collisions + successes;
    }
    return 0.0;
}

// |Gamma(iy)| = sqrt(pi / (y sinh(pi y))), in log form.
double log_abs_gamma_imag(double y)
{
    const double log_sinh = kPi * y + std::log1p(-std::exp(-2.0 * kPi * y)) - std::numbers::ln2;
    return 0.5 * (std::log(kPi) - std::log(y) - log_sinh);
}

}  // namespace

AsymptoticResult oscillation(const SplitDistribution& dist, Observable obs, int n, const OscillationOptions& options)
{
    if (n < 2) {
        throw InvalidArgument("oscillation needs n >= 2");
    }
    if (options.m_max < 1) {
        throw InvalidArgument("m_max must be at least 1");
    }
    AsymptoticResult result;
    result.observable = obs;
    result.n = n;
    result.leading = leading_term(dist, obs);

    const auto lattice = detect_lattice(dist);
    if (!lattice) {
        return result;  // no poles on the line: the correction vanishes
    }
    result.lattice = true;
    const double h = entropy(dist);
    const double step = lattice->y_step;
    const double amplitude = pole_amplitude(dist, obs, h);
    // Consecutive |Gamma(iy_m)| shrink at least by this factor.
    const double log_ratio = -kPi * step / 2.0;
    auto tail_after = [&](int m) {
        const double first = log_abs_gamma_imag(step * (m + 1));
        return amplitude * std::exp(first) / -std::expm1(log_ratio);
    };

    int m_max = options.m_max;
    while (tail_after(m_max) >= options.tail_target && m_max < options.m_cap) {
        m_max = std::min(2 * m_max, options.m_cap);
    }
    const double tail = tail_after(m_max);
    if (tail >= options.tail_target) {
        throw TailBoundTooLarge("pole-sum tail " + std::to_string(tail) + " after " + std::to_string(m_max) + " poles");
    }

    cplx sum = 0.0;
    const auto nd = static_cast<double>(n);
    for (int m = 1; m <= m_max; ++m) {
        const double y = step * m;
        sum += pole_term(dist, obs, nd, y, h) + pole_term(dist, obs, nd, -y, h);
    }
    result.oscillation = sum.real();
    result.imag_residual = std::abs(sum.imag());
    result.m_max = m_max;
    result.tail_bound = tail;
    return result;
}

}  // namespace sicta
