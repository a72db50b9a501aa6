#include "sicta/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "sicta/asymptotics.hpp"
#include "sicta/closed_form.hpp"
#include "sicta/errors.hpp"

namespace sicta {

namespace {

// Extent and largest rescaled weight log(|c| a! / b^a) of one component.
struct Extent {
    long double decay;
    int low;
    int high;
    long double log_weight;
};

template <class Scalar>
std::vector<Extent> extents(const ExpPoly<Scalar>& f)
{
    std::vector<Extent> out;
    if constexpr (std::is_floating_point_v<Scalar>) {
        for (const auto& c : f.components()) {
            Extent e{c.decay, c.low, c.low + static_cast<int>(c.coeffs.size()) - 1, -INFINITY};
            for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
                if (c.coeffs[i] == 0) {
                    continue;
                }
                const int a = c.low + static_cast<int>(i);
                const long double rescale = (a > 0 && c.decay > 0) ? a * std::log(c.decay) : 0.0L;
                e.log_weight = std::max(e.log_weight, std::log(std::fabs(c.coeffs[i])) +
                                                          std::lgamma(static_cast<long double>(a) + 1.0L) - rescale);
            }
            out.push_back(e);
        }
    }
    return out;
}

long double log_binomial_pmf(int k, int n, long double p)
{
    if (p <= 0.0L || p >= 1.0L) {
        return (p <= 0.0L ? k == 0 : k == n) ? 0.0L : -INFINITY;
    }
    return std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L) + k * std::log(p) +
           (n - k) * std::log1p(-p);
}

// Upper bound on the log rescaled weight of any term of a product. A term
// x^{a1+a2} e^{-(b1+b2)x} weighs W1(a1) + W2(a2) plus the log of a binomial
// probability, which over a box is largest at the corner nearest its ridge
// a2 / a1 = b2 / b1.
long double product_bound(const std::vector<Extent>& left, const std::vector<Extent>& right)
{
    long double best = -INFINITY;
    for (const auto& l : left) {
        for (const auto& r : right) {
            const long double total = l.decay + r.decay;
            long double bin = 0.0L;
            if (l.decay > 0 && r.decay > 0) {
                const long double ratio = r.decay / l.decay;
                // One step of slack on each side covers the discrete mode.
                const int lo1 = std::max(0, l.low - 1), hi1 = l.high + 1;
                const int lo2 = std::max(0, r.low - 1), hi2 = r.high + 1;
                if (lo2 > ratio * hi1) {
                    bin = log_binomial_pmf(hi1, hi1 + lo2, l.decay / total);
                } else if (hi2 < ratio * lo1) {
                    bin = log_binomial_pmf(lo1, lo1 + hi2, l.decay / total);
                }
            }
            best = std::max(best, l.log_weight + r.log_weight + bin);
        }
    }
    return best;
}

// q_j(x) = Q(d,x,j) + sum_{k=0}^{d-2} f_k(x) [Q(k,x,j-1) - Q(k,x,j-2)], with
// Q(k,x,j) the sum over compositions of j into k parts of prod_i q_{mu_i}(p_i x)
// and f_k(x) = (1 + Fbar(k) x) e^{-Fbar(k) x}. Q is built by convolution:
// Q(k,.,j) = sum_{m>=1} Q(k-1,.,j-m) q_m(p_k .). Since q_0 = 0, Q(d,.,j)
// only involves q_m with m <= j - d + 1, so the recursion is explicit.
template <class Scalar, class Convert, class Prune>
std::vector<ExpPoly<Scalar>> build_pgf_coefficients(const SplitDistribution& dist, int j_max, Convert to_scalar,
                                                    Prune prune, std::size_t term_cap, long double log_cut)
{
    constexpr bool numeric = std::is_floating_point_v<Scalar>;
    using Poly = ExpPoly<Scalar>;
    if (j_max < 1) {
        throw InvalidArgument("j_max must be at least 1");
    }
    const int d = dist.d();
    const auto J = static_cast<std::size_t>(j_max);

    std::vector<Scalar> p(static_cast<std::size_t>(d) + 1);
    for (int k = 1; k <= d; ++k) {
        p[static_cast<std::size_t>(k)] = to_scalar(dist.p_exact(k));
    }
    std::vector<Poly> f;
    for (int k = 0; k <= d - 2; ++k) {
        const Scalar tail = to_scalar(dist.tail_exact(k));
        f.push_back(Poly::term(Scalar(1), 0, tail) + Poly::term(tail, 1, tail));
    }

    std::vector<Poly> q(J + 1);
    // scaled[k][m] = q_m(p_k x)
    std::vector<std::vector<Poly>> scaled(static_cast<std::size_t>(d) + 1, std::vector<Poly>(J + 1));
    // Q[k][j]; Q[0][j] = 1{j=0} and Q[k][0] = 0 for k >= 1.
    std::vector<std::vector<Poly>> Q(static_cast<std::size_t>(d) + 1, std::vector<Poly>(J + 1));
    Q[0][0] = Poly::constant(Scalar(1));
    // Extents of the above, for skipping products that would be pruned anyway.
    std::vector<std::vector<std::vector<Extent>>> scaled_ext(static_cast<std::size_t>(d) + 1,
                                                             std::vector<std::vector<Extent>>(J + 1));
    std::vector<std::vector<std::vector<Extent>>> Q_ext = scaled_ext;
    Q_ext[0][0] = extents(Q[0][0]);
    auto negligible = [&](const std::vector<Extent>& a, const std::vector<Extent>& b) {
        return numeric && product_bound(a, b) < log_cut;
    };
    q[1] = Poly::term(Scalar(1), 0, Scalar(1)) + Poly::term(Scalar(1), 1, Scalar(1));

    auto fill_Q = [&](std::size_t k, std::size_t j) {
        Poly acc;
        for (std::size_t m = 1; m <= j; ++m) {
            const Poly& left = Q[k - 1][j - m];
            const Poly& right = scaled[k][m];
            if (left.is_zero() || right.is_zero() || negligible(Q_ext[k - 1][j - m], scaled_ext[k][m])) {
                continue;
            }
            acc += left * right;
        }
        prune(acc);
        Q[k][j] = std::move(acc);
        Q_ext[k][j] = extents(Q[k][j]);
    };

    std::size_t stored = 0;
    for (std::size_t j = 1; j <= J; ++j) {
        if (j == 1) {
            for (std::size_t k = 1; k <= static_cast<std::size_t>(d); ++k) {
                scaled[k][1] = q[1].scaled(p[k]);
                scaled_ext[k][1] = extents(scaled[k][1]);
            }
            continue;
        }
        // Rows j-1 of every Q[k] are now computable from q_1..q_{j-1}.
        // Q(d, ., j) is only needed inside q_j, so it is never stored.
        for (std::size_t k = 1; k < static_cast<std::size_t>(d); ++k) {
            fill_Q(k, j - 1);
        }
        Poly qj;
        // Q(d, x, j) needs Q[d-1][j-m] for m >= 1 only.
        for (std::size_t m = 1; m < j; ++m) {
            const Poly& left = Q[static_cast<std::size_t>(d) - 1][j - m];
            const Poly& right = scaled[static_cast<std::size_t>(d)][m];
            if (!left.is_zero() && !right.is_zero() &&
                !negligible(Q_ext[static_cast<std::size_t>(d) - 1][j - m], scaled_ext[static_cast<std::size_t>(d)][m])) {
                qj += left * right;
            }
        }
        for (std::size_t k = 0; k + 2 <= static_cast<std::size_t>(d); ++k) {
            Poly diff = Q[k][j - 1] - Q[k][j - 2];
            if (!diff.is_zero()) {
                qj += f[k] * diff;
            }
        }
        prune(qj);
        q[j] = std::move(qj);
        for (std::size_t k = 1; k <= static_cast<std::size_t>(d); ++k) {
            scaled[k][j] = q[j].scaled(p[k]);
            prune(scaled[k][j]);
            scaled_ext[k][j] = extents(scaled[k][j]);
            stored += scaled[k][j].term_count();
        }
        for (std::size_t k = 0; k <= static_cast<std::size_t>(d); ++k) {
            stored += Q[k][j - 1].term_count();
        }
        stored += q[j].term_count();
        if (stored > term_cap) {
            throw TermBlowup("q_j recursion holds " + std::to_string(stored) + " terms at j = " + std::to_string(j));
        }
    }
    return q;
}

}  // namespace

std::vector<ExpPoly<Rational>> cri_length_pgf_coefficients(const SplitDistribution& dist, int j_max)
{
    return build_pgf_coefficients<Rational>(
        dist, j_max, [](const Rational& v) { return v; }, [](ExpPoly<Rational>&) {},
        PgfNumericOptions{}.term_cap, 0.0L);
}

std::vector<ExpPoly<long double>> cri_length_pgf_coefficients_numeric(const SplitDistribution& dist, int j_max,
                                                                       const PgfNumericOptions& options)
{
    return build_pgf_coefficients<long double>(
        dist, j_max, [](const Rational& v) { return to_long_double(v); },
        [&](ExpPoly<long double>& f) { f.prune(options.prune_below); }, options.term_cap,
        std::log(options.prune_below));
}

namespace {

bool unit_decay(long double b) { return std::fabs(b - 1.0L) <= 1e-12L; }

// Poisson(x) probabilities for 0..a_max, built outward from the mode so that
// nothing is formed from an overflowing power.
std::vector<long double> poisson_row(long double x, int a_max)
{
    std::vector<long double> out(static_cast<std::size_t>(a_max) + 1, 0.0L);
    if (x <= 0.0L) {
        out[0] = 1.0L;
        return out;
    }
    const int mode = std::min(a_max, static_cast<int>(std::floor(x)));
    const long double at_mode = std::exp(mode * std::log(x) - x - std::lgamma(static_cast<long double>(mode) + 1.0L));
    out[static_cast<std::size_t>(mode)] = at_mode;
    for (int a = mode + 1; a <= a_max; ++a) {
        out[static_cast<std::size_t>(a)] = out[static_cast<std::size_t>(a - 1)] * x / a;
    }
    for (int a = mode - 1; a >= 0; --a) {
        out[static_cast<std::size_t>(a)] = out[static_cast<std::size_t>(a + 1)] * (a + 1) / x;
    }
    return out;
}

}  // namespace

DelayModel transition_matrix(const SplitDistribution& dist, double lambda, int i_max, int j_max,
                             std::optional<double> max_row_deficit)
{
    if (j_max < 1) {
        throw InvalidArgument("j_max must be at least 1");
    }
    const auto q = cri_length_pgf_coefficients_numeric(dist, j_max);
    return transition_matrix(dist, lambda, i_max, j_max, q, max_row_deficit);
}

DelayModel transition_matrix(const SplitDistribution& dist, double lambda, int i_max, int j_max,
                             const std::vector<ExpPoly<long double>>& q, std::optional<double> max_row_deficit)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("arrival rate must be positive");
    }
    if (i_max < 1 || j_max < 1) {
        throw InvalidArgument("truncation bounds must be at least 1");
    }
    if (q.size() < static_cast<std::size_t>(j_max) + 1) {
        throw InvalidArgument("not enough q_j for j_max");
    }
    DelayModel model{dist, lambda, i_max, j_max, {}, {}, {}, {}, 0, {}};
    const auto rows = static_cast<std::size_t>(i_max) + 1;
    const auto cols = static_cast<std::size_t>(j_max) + 1;
    model.P.assign(rows, std::vector<double>(cols, 0.0));
    model.row_deficit.assign(rows, 0.0);

    // Poisson weights w[j][a] = P(l_a = j) for the unit-decay part of each q_j;
    // any other component is evaluated directly.
    struct Band {
        int low = 0;
        std::vector<long double> w;
        std::vector<const ExpPoly<long double>::Component*> other;
    };
    std::vector<Band> bands(cols);
    int a_max = 0;
    for (std::size_t j = 1; j < cols; ++j) {
        for (const auto& c : q[j].components()) {
            if (!unit_decay(c.decay)) {
                bands[j].other.push_back(&c);
                continue;
            }
            bands[j].low = c.low;
            bands[j].w.resize(c.coeffs.size());
            for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
                const long double v = c.coeffs[i];
                const int a = c.low + static_cast<int>(i);
                bands[j].w[i] = v == 0.0L ? 0.0L
                                          : std::copysign(std::exp(std::log(std::fabs(v)) +
                                                                   std::lgamma(static_cast<long double>(a) + 1.0L)),
                                                          v);
            }
            a_max = std::max(a_max, c.low + static_cast<int>(c.coeffs.size()) - 1);
        }
    }

    for (std::size_t i = 0; i < rows; ++i) {
        const long double x = static_cast<long double>(lambda) * static_cast<long double>(i);
        const auto pois = poisson_row(x, a_max);
        long double total = 0.0L;
        for (std::size_t j = 1; j < cols; ++j) {
            long double v = 0.0L;
            const Band& b = bands[j];
            for (std::size_t k = 0; k < b.w.size(); ++k) {
                v += b.w[k] * pois[static_cast<std::size_t>(b.low) + k];
            }
            for (const auto* c : b.other) {
                ExpPoly<long double> single;
                for (std::size_t k = 0; k < c->coeffs.size(); ++k) {
                    single += ExpPoly<long double>::term(c->coeffs[k], c->low + static_cast<int>(k), c->decay);
                }
                v += single.evaluate(x);
            }
            // Pruned and rounded terms can leave tiny negative values.
            v = std::max(v, 0.0L);
            model.P[i][j] = static_cast<double>(v);
            total += v;
        }
        model.row_deficit[i] = std::max(0.0, static_cast<double>(1.0L - total));
        if (i >= 1 && max_row_deficit && model.row_deficit[i] > *max_row_deficit) {
            throw TruncationTooTight("row " + std::to_string(i) + " loses " + std::to_string(model.row_deficit[i]) +
                                     " beyond j_max = " + std::to_string(j_max));
        }
    }
    return model;
}

std::vector<double> length_biased(const std::vector<double>& pi)
{
    double norm = 0.0;
    for (std::size_t n = 0; n < pi.size(); ++n) {
        norm += static_cast<double>(n) * pi[n];
    }
    if (!(norm > 0.0)) {
        throw InvalidArgument("length-biasing needs positive mean length");
    }
    std::vector<double> out(pi.size(), 0.0);
    for (std::size_t n = 0; n < pi.size(); ++n) {
        out[n] = static_cast<double>(n) * pi[n] / norm;
    }
    return out;
}

DelayModel stationary_distribution(const DelayModel& model, double tol, int max_iterations)
{
    const double limit = mst(model.dist);
    if (model.lambda >= limit) {
        throw NotStationary("arrival rate " + std::to_string(model.lambda) + " is not below the MST " +
                            std::to_string(limit));
    }
    const int n = std::min(model.i_max, model.j_max);
    const auto N = static_cast<std::size_t>(n);

    // Nonzero band of each row.
    std::vector<std::pair<std::size_t, std::size_t>> band(N + 1, {1, 0});
    for (std::size_t i = 1; i <= N; ++i) {
        std::size_t lo = N + 1, hi = 0;
        for (std::size_t j = 1; j <= N; ++j) {
            if (model.P[i][j] > 0.0) {
                lo = std::min(lo, j);
                hi = j;
            }
        }
        band[i] = {lo, hi};
    }

    DelayModel out = model;
    std::vector<double> pi(N + 1, 0.0), next(N + 1, 0.0);
    pi[1] = 1.0;
    for (int it = 1; it <= max_iterations; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 1; i <= N; ++i) {
            if (pi[i] == 0.0) {
                continue;
            }
            const auto& row = model.P[i];
            for (std::size_t j = band[i].first; j <= band[i].second; ++j) {
                next[j] += pi[i] * row[j];
            }
        }
        const double mass = std::accumulate(next.begin(), next.end(), 0.0);
        double change = 0.0;
        for (std::size_t j = 1; j <= N; ++j) {
            next[j] /= mass;
            change += std::fabs(next[j] - pi[j]);
        }
        pi.swap(next);
        if (change < tol) {
            out.pi = pi;
            out.pi_tagged = length_biased(pi);
            out.iterations = it;
            return out;
        }
    }
    throw NonConvergent("power iteration did not settle in " + std::to_string(max_iterations) + " steps");
}

namespace {

struct PowerSums {
    Rational tails;  // sum_{k=0}^{d-2} Fbar(k)^n
    Rational all;    // sum_k p_k^n
};

PowerSums power_sums(const SplitDistribution& dist, unsigned n)
{
    PowerSums out;
    for (int k = 0; k <= dist.d() - 2; ++k) {
        out.tails += pow(dist.tail_exact(k), n);
    }
    for (int k = 1; k <= dist.d(); ++k) {
        out.all += pow(dist.p_exact(k), n);
    }
    return out;
}

BigInt factorial(unsigned n)
{
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

Rational alpha_coefficient(const SplitDistribution& dist, unsigned n)
{
    if (n == 0) {
        return Rational(1);
    }
    if (n == 1) {
        return Rational(0);
    }
    const auto sums = power_sums(dist, n);
    Rational out = Rational(BigInt(n - 1)) * sums.tails / (Rational(factorial(n)) * (1 - sums.all));
    out.canonicalize();
    return n % 2 == 0 ? out : Rational(-out);
}

Rational delay_coefficient(const SplitDistribution& dist, unsigned n)
{
    if (n == 0) {
        return Rational(1);
    }
    const int d = dist.d();
    const Rational alpha = alpha_coefficient(dist, n);
    const Rational sign(n % 2 == 1 ? 1 : -1);
    const Rational inv_fact = Rational(BigInt(1), factorial(n));
    Rational numerator, prefix;  // prefix = sum_{i<k} p_i^n
    for (int k = 1; k <= d; ++k) {
        const Rational& pk = dist.p_exact(k);
        const Rational weight(k - (k == d ? 1 : 0));
        numerator += pk * (sign * weight * inv_fact + alpha * prefix);
        prefix += pow(pk, n);
    }
    Rational denom = 1 - power_sums(dist, n + 1).all;
    Rational out = numerator / denom;
    out.canonicalize();
    return out;
}

}  // namespace

std::vector<Rational> length_poisson_coefficients(const SplitDistribution& dist, int n_max)
{
    if (n_max < 0) {
        throw InvalidArgument("n_max must be nonnegative");
    }
    std::vector<Rational> out;
    for (int n = 0; n <= n_max; ++n) {
        out.push_back(alpha_coefficient(dist, static_cast<unsigned>(n)));
    }
    return out;
}

std::vector<Rational> delay_series_coefficients(const SplitDistribution& dist, int n_max)
{
    if (n_max < 0) {
        throw InvalidArgument("n_max must be nonnegative");
    }
    std::vector<Rational> out;
    for (int n = 0; n <= n_max; ++n) {
        out.push_back(delay_coefficient(dist, static_cast<unsigned>(n)));
    }
    return out;
}

std::vector<BigFloat> delay_series_coefficients_hp(const SplitDistribution& dist, int n_max, mpfr_prec_t bits)
{
    if (n_max < 0) {
        throw InvalidArgument("n_max must be nonnegative");
    }
    const int d = dist.d();
    std::vector<BigFloat> p, tails;
    for (int k = 1; k <= d; ++k) {
        p.emplace_back(dist.p_exact(k), bits);
    }
    for (int k = 0; k <= d - 2; ++k) {
        tails.emplace_back(dist.tail_exact(k), bits);
    }
    const BigFloat one(1L, bits);
    std::vector<BigFloat> out;
    out.push_back(one);
    // Running powers p_k^n and Fbar(k)^n, and 1/n!.
    std::vector<BigFloat> pp = p, tp = tails;
    BigFloat inv_fact = one;
    for (int n = 1; n <= n_max; ++n) {
        inv_fact.div_ui(static_cast<unsigned long>(n));
        BigFloat alpha(0L, bits);
        if (n >= 2) {
            BigFloat ts(0L, bits), ps(0L, bits);
            for (const auto& v : tp) {
                ts += v;
            }
            for (const auto& v : pp) {
                ps += v;
            }
            alpha = ts * inv_fact / (one - ps);
            alpha.mul_ui(static_cast<unsigned long>(n - 1));
            if (n % 2 == 1) {
                alpha = -alpha;
            }
        }
        BigFloat numerator(0L, bits), prefix(0L, bits), next_sum(0L, bits);
        for (int k = 1; k <= d; ++k) {
            const auto kk = static_cast<std::size_t>(k - 1);
            BigFloat first = inv_fact;
            first.mul_ui(static_cast<unsigned long>(k - (k == d ? 1 : 0)));
            if (n % 2 == 0) {
                first = -first;
            }
            numerator += p[kk] * (first + alpha * prefix);
            prefix += pp[kk];
            next_sum += pp[kk] * p[kk];
        }
        out.push_back(numerator / (one - next_sum));
        for (std::size_t k = 0; k < pp.size(); ++k) {
            pp[k] *= p[k];
        }
        for (std::size_t k = 0; k < tp.size(); ++k) {
            tp[k] *= tails[k];
        }
    }
    return out;
}

namespace {

// Sums T(x) from coefficients rounded to a working precision, checking
// afterwards that the cancellation did not eat the guard bits.
class SeriesEvaluator {
public:
    SeriesEvaluator(const SplitDistribution& dist, std::vector<Rational>& coefficients, const SeriesOptions& options)
        : dist_(dist), t_(coefficients), options_(options)
    {
    }

    double value(double x)
    {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw InvalidArgument("series argument must be finite and nonnegative");
        }
        if (x == 0.0) {
            return to_double(coefficient(0));
        }
        // Terms peak near |t_m| x^m ~ e^{2x}; start with that many guard bits.
        auto bits = static_cast<mpfr_prec_t>(128 + 3.0 * x);
        while (true) {
            if (bits > cached_bits_) {
                cached_bits_ = bits;
                cache_.clear();
            }
            long loss = 0;
            const double v = sum(x, loss);
            if (loss + 64 <= cached_bits_) {
                return v;
            }
            bits = cached_bits_ + loss + 64;
        }
    }

private:
    const Rational& coefficient(int m)
    {
        while (static_cast<int>(t_.size()) <= m) {
            t_.push_back(delay_coefficient(dist_, static_cast<unsigned>(t_.size())));
        }
        return t_[static_cast<std::size_t>(m)];
    }

    const BigFloat& cached(int m)
    {
        while (static_cast<int>(cache_.size()) <= m) {
            cache_.emplace_back(coefficient(static_cast<int>(cache_.size())), cached_bits_);
        }
        return cache_[static_cast<std::size_t>(m)];
    }

    double sum(double x, long& loss)
    {
        const BigFloat bx(x, cached_bits_);
        BigFloat power(1L, cached_bits_);
        BigFloat total = cached(0);
        long largest = total.exponent();
        int quiet = 0;
        for (int m = 1; m <= options_.n_cap; ++m) {
            power *= bx;
            const BigFloat term = cached(m) * power;
            total += term;
            if (!term.is_zero()) {
                largest = std::max(largest, term.exponent());
            }
            const double ratio = (term.abs() / total.abs()).to_double();
            quiet = (term.is_zero() || ratio < options_.epsilon) ? quiet + 1 : 0;
            // Past the peak of the terms, five quiet terms in a row end the sum.
            if (quiet >= 5 && m > 2.0 * x) {
                loss = total.is_zero() ? cached_bits_ : largest - total.exponent();
                return total.to_double();
            }
        }
        throw SeriesNotConverged("delay series at x = " + std::to_string(x) + " did not settle in " +
                                 std::to_string(options_.n_cap) + " terms");
    }

    const SplitDistribution& dist_;
    std::vector<Rational>& t_;
    SeriesOptions options_;
    mpfr_prec_t cached_bits_ = 0;
    std::vector<BigFloat> cache_;
};

}  // namespace

double delay_series_value(const SplitDistribution& dist, std::vector<Rational>& coefficients, double x,
                          const SeriesOptions& options)
{
    SeriesEvaluator eval(dist, coefficients, options);
    return eval.value(x);
}

double mean_resolution_delay(DelayModel& model, int n, const SeriesOptions& options)
{
    if (n < 0) {
        throw InvalidArgument("CRI length must be nonnegative");
    }
    return delay_series_value(model.dist, model.t, model.lambda * n, options);
}

TotalDelay mean_total_delay(DelayModel& model, const SeriesOptions& options)
{
    if (model.pi.empty()) {
        throw InvalidArgument("stationary distribution has not been solved");
    }
    TotalDelay out;
    SeriesEvaluator eval(model.dist, model.t, options);
    // Skipped tail mass contributes below 1e-18 * n, far under the truncation error.
    constexpr double negligible = 1e-18;
    for (std::size_t n = 1; n < model.pi_tagged.size(); ++n) {
        const double w = model.pi_tagged[n];
        out.stationary_mean_cri += static_cast<double>(n) * model.pi[n];
        if (n < model.row_deficit.size()) {
            out.weighted_deficit += model.pi[n] * model.row_deficit[n];
        }
        if (w < negligible) {
            continue;
        }
        const double wait = static_cast<double>(n) / 2.0;
        const double resolution = eval.value(model.lambda * static_cast<double>(n));
        out.mean_wait += w * wait;
        out.mean_resolution += w * resolution;
    }
    out.mean = out.mean_wait + out.mean_resolution;
    return out;
}

DelayAnalysis analyze_delay(const SplitDistribution& dist, double lambda, const DelayAnalysisOptions& options)
{
    if (options.initial_states < 1 || options.max_states < options.initial_states) {
        throw InvalidArgument("state-space bounds are inconsistent");
    }
    const double limit = mst(dist);
    if (lambda >= limit) {
        throw NotStationary("arrival rate " + std::to_string(lambda) + " is not below the MST " +
                            std::to_string(limit));
    }
    int states = options.initial_states;
    while (true) {
        const auto q = cri_length_pgf_coefficients_numeric(dist, states);
        DelayModel model = transition_matrix(dist, lambda, states, states, q);
        model = stationary_distribution(model, options.stationary_tol);
        double deficit = 0.0;
        for (std::size_t n = 1; n < model.pi.size(); ++n) {
            deficit += model.pi[n] * model.row_deficit[n];
        }
        if (deficit <= options.deficit_target || states >= options.max_states) {
            TotalDelay delay = mean_total_delay(model);
            return DelayAnalysis{std::move(model), delay, limit};
        }
        states = std::min(options.max_states, 2 * states);
    }
}

PgfResidual pgf_functional_residual(const SplitDistribution& dist, double x, double z, int j_max)
{
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw InvalidArgument("x must be finite and nonnegative");
    }
    if (!(std::fabs(z) <= 1.0)) {
        throw InvalidArgument("|z| must be at most 1");
    }
    if (j_max < 1) {
        throw InvalidArgument("j_max must be at least 1");
    }
    // Exact coefficient functions while they are cheap, pruned ones beyond.
    std::vector<ExpPoly<long double>> q;
    if (j_max <= 40) {
        for (const auto& f : cri_length_pgf_coefficients(dist, j_max)) {
            ExpPoly<long double> g;
            for (const auto& c : f.components()) {
                for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
                    g += ExpPoly<long double>::term(to_long_double(c.coeffs[i]), c.low + static_cast<int>(i),
                                                    to_long_double(c.decay));
                }
            }
            q.push_back(std::move(g));
        }
    } else {
        q = cri_length_pgf_coefficients_numeric(dist, j_max);
    }

    struct Side {
        long double value;  // truncated Q(y, z)
        long double error;  // bound on the dropped part
    };
    const long double zz = z;
    auto truncated = [&](long double y) {
        long double sum = 0.0L, mass = 0.0L, zp = 1.0L;
        for (std::size_t j = 1; j < q.size(); ++j) {
            zp *= zz;
            const long double v = q[j].evaluate(y);
            sum += v * zp;
            mass += v;
        }
        const long double scale = std::exp(y);
        const long double tail = std::pow(std::fabs(zz), static_cast<long double>(j_max) + 1.0L);
        return Side{scale * sum, scale * tail * std::max(0.0L, 1.0L - mass)};
    };

    const int d = dist.d();
    const long double X = x;
    std::vector<Side> parts;
    for (int i = 1; i <= d; ++i) {
        parts.push_back(truncated(static_cast<long double>(dist.p(i)) * X));
    }
    // Product of the first k parts with its error, using |Q(p_i x, z)| <= e^{p_i x}.
    auto product = [&](int k) {
        long double value = 1.0L, error = 0.0L, cap = 0.0L;
        for (int i = 1; i <= k; ++i) {
            cap += static_cast<long double>(dist.p(i)) * X;
        }
        for (int i = 1; i <= k; ++i) {
            const auto& part = parts[static_cast<std::size_t>(i - 1)];
            value *= part.value;
            error += part.error * std::exp(cap - static_cast<long double>(dist.p(i)) * X);
        }
        return Side{value, error};
    };

    const Side lhs = truncated(X);
    Side rhs = product(d);
    for (int k = 0; k <= d - 2; ++k) {
        const long double factor = (zz - zz * zz) * (1.0L + static_cast<long double>(dist.tail(k)) * X);
        const Side prefix = product(k);
        rhs.value += factor * prefix.value;
        rhs.error += std::fabs(factor) * prefix.error;
    }
    return PgfResidual{static_cast<double>(std::fabs(lhs.value - rhs.value)), static_cast<double>(lhs.error + rhs.error)};
}

}  // namespace sicta
