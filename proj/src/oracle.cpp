#include "sicta/oracle.hpp"

#include <array>

#include "sicta/detail/compositions.hpp"
#include "sicta/errors.hpp"

namespace sicta {

namespace {

// Multinomial weights n!/prod(mu_j!) * prod(p_j^mu_j) with cached pieces.
class MultinomialWeights {
public:
    MultinomialWeights(const SplitDistribution& dist, int n_max)
    {
        const int d = dist.d();
        factorial_.resize(static_cast<std::size_t>(n_max) + 1);
        factorial_[0] = 1;
        for (int k = 1; k <= n_max; ++k) {
            factorial_[static_cast<std::size_t>(k)] = factorial_[static_cast<std::size_t>(k - 1)] * k;
        }
        for (int j = 1; j <= d; ++j) {
            powers_.push_back(powers(dist.p_exact(j), static_cast<unsigned>(n_max)));
        }
    }

    // Returns zero when some occupied slot has p_j = 0.
    Rational weight(const std::vector<int>& mu, int n) const
    {
        Rational w = 1;
        BigInt denom = 1;
        for (std::size_t j = 0; j < mu.size(); ++j) {
            if (mu[j] == 0) {
                continue;
            }
            const Rational& pw = powers_[j][static_cast<std::size_t>(mu[j])];
            if (pw == 0) {
                return 0;
            }
            w *= pw;
            denom *= factorial_[static_cast<std::size_t>(mu[j])];
        }
        Rational coeff(factorial_[static_cast<std::size_t>(n)], denom);
        coeff.canonicalize();
        w *= coeff;
        return w;
    }

private:
    std::vector<BigInt> factorial_;
    std::vector<std::vector<Rational>> powers_;
};

// The only outcome that puts all n >= 2 packets back into a counted slot is
// n * e_g, and then M = g.
int self_reference_slot(const std::vector<int>& mu, int n)
{
    for (std::size_t j = 0; j < mu.size(); ++j) {
        if (mu[j] == n) {
            return static_cast<int>(j) + 1;
        }
        if (mu[j] != 0) {
            return 0;
        }
    }
    return 0;
}

}  // namespace

ExpectationTable exact_expectations(const SplitDistribution& dist, int n_max)
{
    if (n_max < 0) {
        throw InvalidArgument("n_max must be nonnegative");
    }
    const int d = dist.d();
    ExpectationTable table{dist, n_max, {}, {}, {}, {}};
    const auto rows = static_cast<std::size_t>(std::max(n_max, 1)) + 1;
    table.L.assign(rows, 0);
    table.C.assign(rows, 0);
    table.S.assign(rows, 0);
    table.I.assign(rows, 0);
    table.L[0] = 1;
    table.L[1] = 1;
    table.S[1] = 1;
    table.I[0] = 1;

    std::array<std::vector<Rational>*, 4> obs{&table.L, &table.C, &table.S, &table.I};
    // Counted-slot and collision totals pick up the extra 1{M<d} slot.
    constexpr std::array<bool, 4> has_local{true, true, false, false};

    MultinomialWeights weights(dist, std::max(n_max, 1));
    for (int n = 2; n <= n_max; ++n) {
        Rational a = 0;
        std::array<Rational, 4> b{0, 0, 0, 0};
        detail::for_each_composition(n, d, 0, [&](const std::vector<int>& mu) {
            Rational w = weights.weight(mu, n);
            if (w == 0) {
                return;
            }
            const int m = last_counted_slot(mu, n);
            const int local = m < d ? 1 : 0;
            const bool self = self_reference_slot(mu, n) != 0;
            if (self) {
                a += w;
            }
            for (std::size_t o = 0; o < obs.size(); ++o) {
                Rational acc = has_local[o] ? Rational(local) : Rational(0);
                for (int j = 0; j < m; ++j) {
                    const int sub = mu[static_cast<std::size_t>(j)];
                    if (sub == n) {
                        continue;  // the unknown itself, collected in `a`
                    }
                    acc += (*obs[o])[static_cast<std::size_t>(sub)];
                }
                b[o] += w * acc;
            }
        });
        const Rational scale = Rational(1) / (Rational(1) - a);
        for (std::size_t o = 0; o < obs.size(); ++o) {
            (*obs[o])[static_cast<std::size_t>(n)] = b[o] * scale;
        }
    }
    for (auto* v : obs) {
        v->resize(static_cast<std::size_t>(n_max) + 1);
    }
    return table;
}

namespace {

void convolve_into(std::vector<Rational>& acc, const std::vector<Rational>& other)
{
    const std::size_t size = acc.size();
    std::vector<Rational> out(size, 0);
    for (std::size_t i = 0; i < size; ++i) {
        if (acc[i] == 0) {
            continue;
        }
        for (std::size_t k = 0; i + k < size; ++k) {
            if (other[k] != 0) {
                out[i + k] += acc[i] * other[k];
            }
        }
    }
    acc.swap(out);
}

}  // namespace

std::vector<CriLengthDistribution> exact_cri_distributions(const SplitDistribution& dist, int n_max,
                                                           int j_max)
{
    if (n_max < 0 || j_max < 1) {
        throw InvalidArgument("need n_max >= 0 and j_max >= 1");
    }
    const int d = dist.d();
    const auto width = static_cast<std::size_t>(j_max) + 1;
    std::vector<std::vector<Rational>> law(static_cast<std::size_t>(n_max) + 1,
                                           std::vector<Rational>(width, 0));
    for (int n = 0; n <= std::min(n_max, 1); ++n) {
        law[static_cast<std::size_t>(n)][1] = 1;
    }

    MultinomialWeights weights(dist, std::max(n_max, 1));
    for (int n = 2; n <= n_max; ++n) {
        std::vector<Rational> b(width, 0);
        std::vector<std::pair<Rational, int>> self_terms;  // (weight, length shift)
        detail::for_each_composition(n, d, 0, [&](const std::vector<int>& mu) {
            Rational w = weights.weight(mu, n);
            if (w == 0) {
                return;
            }
            const int m = last_counted_slot(mu, n);
            const int local = m < d ? 1 : 0;
            if (const int g = self_reference_slot(mu, n); g != 0) {
                // Empty slots left of g cost one idle slot each.
                self_terms.emplace_back(w, local + (g - 1));
                return;
            }
            std::vector<Rational> conv(width, 0);
            conv[static_cast<std::size_t>(local)] = 1;
            for (int j = 0; j < m; ++j) {
                convolve_into(conv, law[static_cast<std::size_t>(mu[static_cast<std::size_t>(j)])]);
            }
            for (std::size_t k = 0; k < width; ++k) {
                b[k] += w * conv[k];
            }
        });
        // Every shift is >= 1, so the system is triangular in the length.
        auto& row = law[static_cast<std::size_t>(n)];
        for (std::size_t j = 0; j < width; ++j) {
            Rational v = b[j];
            for (const auto& [w, shift] : self_terms) {
                if (static_cast<std::size_t>(shift) <= j) {
                    v += w * row[j - static_cast<std::size_t>(shift)];
                }
            }
            row[j] = v;
        }
    }

    std::vector<CriLengthDistribution> out;
    out.reserve(law.size());
    for (int n = 0; n <= n_max; ++n) {
        CriLengthDistribution entry;
        entry.n = n;
        entry.probs = std::move(law[static_cast<std::size_t>(n)]);
        Rational total = 0;
        for (const auto& q : entry.probs) {
            total += q;
        }
        entry.residual = Rational(1) - total;
        out.push_back(std::move(entry));
    }
    return out;
}

CriLengthDistribution exact_cri_distribution(const SplitDistribution& dist, int n, int j_max,
                                             std::optional<Rational> residual_bound)
{
    if (n < 0) {
        throw InvalidArgument("n must be nonnegative");
    }
    auto all = exact_cri_distributions(dist, n, j_max);
    CriLengthDistribution result = std::move(all.back());
    if (residual_bound && result.residual > *residual_bound) {
        throw TruncationTooTight("residual mass " + std::to_string(to_double(result.residual)) +
                                 " of l_" + std::to_string(n) + " beyond j_max = " + std::to_string(j_max));
    }
    return result;
}

std::vector<Rational> exact_resolution_delays(const SplitDistribution& dist, int m_max)
{
    if (m_max < 0) {
        throw InvalidArgument("m_max must be nonnegative");
    }
    const int d = dist.d();
    const ExpectationTable table = exact_expectations(dist, m_max);
    MultinomialWeights weights(dist, std::max(m_max, 1) + 1);
    std::vector<Rational> tau(static_cast<std::size_t>(m_max) + 1, 0);
    tau[0] = 1;
    for (int m = 1; m <= m_max; ++m) {
        Rational a = 0;
        Rational b = 0;
        detail::for_each_composition(m, d, 0, [&](const std::vector<int>& mu) {
            Rational w = weights.weight(mu, m);
            if (w == 0) {
                return;
            }
            Rational prefix = 0;  // expected slots spent on groups left of the tag
            for (int g = 1; g <= d; ++g) {
                const int others = mu[static_cast<std::size_t>(g - 1)];
                const Rational& pg = dist.p_exact(g);
                if (pg != 0) {
                    Rational wg = w * pg;
                    Rational cost = Rational(g < d ? 1 : 0) + prefix;
                    if (others == m) {
                        a += wg;
                    } else {
                        cost += tau[static_cast<std::size_t>(others)];
                    }
                    b += wg * cost;
                }
                prefix += table.L[static_cast<std::size_t>(others)];
            }
        });
        tau[static_cast<std::size_t>(m)] = b / (Rational(1) - a);
    }
    return tau;
}

std::vector<Rational> poisson_series_coefficients(const std::vector<Rational>& a)
{
    const std::size_t n_max = a.size();
    std::vector<BigInt> fact(n_max + 1);
    fact[0] = 1;
    for (std::size_t k = 1; k <= n_max; ++k) {
        fact[k] = fact[k - 1] * static_cast<unsigned long>(k);
    }
    std::vector<Rational> t(n_max, 0);
    for (std::size_t n = 0; n < n_max; ++n) {
        Rational acc = 0;
        for (std::size_t m = 0; m <= n; ++m) {
            Rational term(a[m] / Rational(fact[m] * fact[n - m]));
            if ((n - m) % 2 == 1) {
                acc -= term;
            } else {
                acc += term;
            }
        }
        t[n] = acc;
    }
    return t;
}

}  // namespace sicta
