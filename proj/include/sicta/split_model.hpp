#pragma once

#include <span>
#include <string>
#include <vector>

#include "sicta/numeric.hpp"

namespace sicta {

/// Splitting distribution p over d >= 2 groups.
///
/// Every instance carries an exact rational form of p. Rational inputs are
/// kept as given; floating inputs are converted to their exact binary value
/// with the (tiny) rounding residue folded into the largest entry so that
/// the probabilities sum to exactly one. Double copies and the tail masses
/// Fbar(k) = sum_{j>k} p_j are cached for fast numerics.
class SplitDistribution {
public:
    /// Validates: d >= 2, p_j >= 0, sum p_j == 1 exactly, max p_j < 1.
    static SplitDistribution from_rationals(std::vector<Rational> p);
    /// Validates as above with |sum - 1| <= tol before exact renormalization.
    static SplitDistribution from_doubles(std::span<const double> p, double tol = 1e-9);

    int d() const { return static_cast<int>(exact_.size()); }

    /// 1-based access, matching the usual p_1..p_d indexing.
    const Rational& p_exact(int j) const { return exact_[static_cast<std::size_t>(j - 1)]; }
    double p(int j) const { return values_[static_cast<std::size_t>(j - 1)]; }

    std::span<const Rational> exact() const { return exact_; }
    std::span<const double> values() const { return values_; }

    /// Fbar(k) for k = 0..d (Fbar(0) = 1, Fbar(d) = 0).
    const Rational& tail_exact(int k) const { return tail_exact_[static_cast<std::size_t>(k)]; }
    double tail(int k) const { return tail_[static_cast<std::size_t>(k)]; }

    /// True when constructed from rationals (as opposed to floating input).
    bool rational_input() const { return rational_input_; }

    /// Smallest strictly positive entry.
    double min_positive() const;

    std::string to_string() const;

    friend bool operator==(const SplitDistribution& a, const SplitDistribution& b)
    {
        return a.exact_ == b.exact_;
    }

private:
    SplitDistribution(std::vector<Rational> p, bool rational_input);

    std::vector<Rational> exact_;
    std::vector<double> values_;
    std::vector<Rational> tail_exact_;
    std::vector<double> tail_;
    bool rational_input_ = true;
};

SplitDistribution make_split_distribution(std::vector<Rational> p);
SplitDistribution make_split_distribution(std::span<const double> p);

/// p_i = 2^{-min(i, d-1)}: the throughput-optimal split for every d.
SplitDistribution pbi(int d);
/// Uniform split 1/d.
SplitDistribution fair(int d);

/// Parse "1/2,1/4,1/4", "0.3,0.7", "pbi:<d>" or "fair:<d>".
SplitDistribution parse_distribution(const std::string& text);

/// Counted-slot totals for one collision resolution interval.
struct CriOutcome {
    long l = 0;  ///< counted slots
    long c = 0;  ///< collision slots
    long s = 0;  ///< success slots
    long i = 0;  ///< idle slots

    bool conserved() const { return l == c + s + i; }
    friend bool operator==(const CriOutcome&, const CriOutcome&) = default;
};

/// Last non-skipped child slot M (1-based): the smallest k with
/// counts[0] + ... + counts[k-1] >= n - 1. Children right of M hold at most
/// one packet in total and are recovered by interference cancellation.
/// Only defined for n >= 2; throws InvalidOccupancy if the counts do not
/// sum to n.
int last_counted_slot(std::span<const int> counts, int n);

}  // namespace sicta
