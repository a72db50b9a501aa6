#pragma once

#include <optional>
#include <string>

#include "sicta/numeric.hpp"
#include "sicta/split_model.hpp"

namespace sicta {

enum class Observable { Length, Collisions, Successes, Idle };

/// "L", "C", "S", "I".
std::string observable_name(Observable obs);
Observable parse_observable(const std::string& text);

enum class ArithmeticMode {
    Auto,           ///< rational for n <= 64, high precision above
    Rational,       ///< exact
    HighPrecision,  ///< MPFR with automatic precision growth
};

struct ClosedFormValue {
    Observable observable = Observable::Length;
    int n = 0;
    ArithmeticMode mode = ArithmeticMode::Rational;
    mpfr_prec_t precision_bits = 0;  ///< working precision in high-precision mode
    std::optional<Rational> exact;   ///< set in rational mode
    BigFloat value{128};

    double to_double() const { return value.to_double(); }
};

struct ClosedFormOptions {
    ArithmeticMode mode = ArithmeticMode::Auto;
    /// Evaluate the printed successes/idle formulas verbatim (leading "1 +"
    /// for S_n, the printed coefficients for I_n). For comparison only; both
    /// disagree with the recursions already at n = 2.
    bool paper_literal = false;
    /// High-precision mode gives up above this working precision.
    mpfr_prec_t max_bits = mpfr_prec_t{1} << 22;
};

/// Mean of an observable for an initial collision of n packets via the
/// alternating binomial sums
///   X_n = const(n) + sum_{i=2}^n C(n,i) (-1)^i h_X(i) / (1 - sum_j p_j^i).
/// High-precision results carry relative error below 2^-64. Rows n <= 1 are
/// the base cases of the recursions in every variant.
ClosedFormValue closed_form(const SplitDistribution& dist, Observable obs, int n,
                            const ClosedFormOptions& options = {});

ClosedFormValue mean_cri_length(const SplitDistribution& dist, int n, const ClosedFormOptions& options = {});
ClosedFormValue mean_collisions(const SplitDistribution& dist, int n, const ClosedFormOptions& options = {});
/// Uses the constant term n (the i = 1 term of the binomial expansion).
ClosedFormValue mean_successes(const SplitDistribution& dist, int n, const ClosedFormOptions& options = {});
/// L_n - C_n - S_n.
ClosedFormValue mean_idle(const SplitDistribution& dist, int n, const ClosedFormOptions& options = {});

/// |LHS - RHS| of the exponential generating function identity
///   Q(x,z) = prod_i Q(p_i x, z) + sum_{k=0}^{d-2} (z - z^2)(1 + Fbar(k) x) prod_{i<=k} Q(p_i x, z),
/// with Q(x,z) = e^x sum_{j<=j_max} q_j(x) z^j assembled from the CRI-length
/// coefficient functions. `truncation_bound` bounds the part of the
/// difference that comes from dropping j > j_max.
struct PgfResidual {
    double residual = 0.0;
    double truncation_bound = 0.0;
};

PgfResidual pgf_functional_residual(const SplitDistribution& dist, double x, double z, int j_max);

}  // namespace sicta
