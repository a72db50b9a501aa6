#pragma once

#include <optional>
#include <vector>

#include "sicta/numeric.hpp"
#include "sicta/split_model.hpp"

namespace sicta {

/// Exact per-n expectations of the counted slots and their kinds.
struct ExpectationTable {
    SplitDistribution dist;
    int n_max = 0;
    std::vector<Rational> L;  ///< counted slots
    std::vector<Rational> C;  ///< collision slots
    std::vector<Rational> S;  ///< success slots
    std::vector<Rational> I;  ///< idle slots
};

/// Brute-force expectations by enumerating every multinomial split of n
/// packets. Outcomes that put all n packets back into one counted slot refer
/// to the unknown row itself; that single linear equation is solved exactly.
/// Cost grows like C(n+d-1, d-1) per row, so keep n_max around 30 or below.
ExpectationTable exact_expectations(const SplitDistribution& dist, int n_max);

/// P(l_n = j) for 0 <= j <= j_max, plus the mass beyond j_max.
struct CriLengthDistribution {
    int n = 0;
    std::vector<Rational> probs;  ///< index j
    Rational residual;            ///< 1 - sum(probs)
};

/// Exact law of l_n truncated at j_max. Throws TruncationTooTight when the
/// residual mass is above `residual_bound`.
CriLengthDistribution exact_cri_distribution(const SplitDistribution& dist, int n, int j_max,
                                             std::optional<Rational> residual_bound = std::nullopt);

/// The same for every n in 0..n_max (row m is the law of l_m).
std::vector<CriLengthDistribution> exact_cri_distributions(const SplitDistribution& dist, int n_max,
                                                           int j_max);

/// tau_m: expected resolution time of a tagged packet that collides with m
/// others, counted the way the tagged-packet recursion counts it
/// (tau_0 = 1). Used to cross-check the delay series.
std::vector<Rational> exact_resolution_delays(const SplitDistribution& dist, int m_max);

/// Poisson-transform coefficients of a sequence:
/// e^{-x} sum_m a_m x^m / m! = sum_n t_n x^n.
std::vector<Rational> poisson_series_coefficients(const std::vector<Rational>& a);

}  // namespace sicta
