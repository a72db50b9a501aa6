#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "sicta/closed_form.hpp"
#include "sicta/split_model.hpp"

namespace sicta {

/// Gamma function on the complex plane, about 14 significant digits.
/// Lanczos (g = 7) in log form on Re(s) >= 1/2, reflection elsewhere, so it
/// stays finite for large |Im s| where Gamma itself is tiny.
/// Throws PoleOfGamma at 0, -1, -2, ...
std::complex<double> complex_gamma(std::complex<double> s);
std::complex<double> complex_log_gamma(std::complex<double> s);

/// p_j = c^{k_j} for every positive p_j, with gcd(k) = 1. Entries with
/// p_j = 0 carry k_j = 0 and are not part of the condition.
struct LatticeStructure {
    double base = 0.0;
    std::vector<int> exponents;
    double y_step = 0.0;  ///< pole spacing 2 pi / |ln c| on Re(s) = -1
};

/// Continued-fraction test of ln p_j / ln p_ref for every positive entry.
std::optional<LatticeStructure> detect_lattice(const SplitDistribution& dist, double tol = 1e-12, int k_cap = 64);

/// -sum_j p_j ln p_j (zero entries dropped). Throws DegenerateDistribution at 0.
double entropy(const SplitDistribution& dist);

/// Per-packet leading constant lim X_n / n.
/// Successes use 1 + sum_{k>=2} p_k ln Fbar(k-1) / H; idle is the remainder
/// L - C - S. With `paper_literal` the printed successes and idle constants
/// are returned instead (they coincide with these only for special p).
double leading_term(const SplitDistribution& dist, Observable obs, bool paper_literal = false);

/// Maximum stable throughput 1 / leading_term(L).
double mst(const SplitDistribution& dist);

struct AsymptoticResult {
    Observable observable = Observable::Length;
    double leading = 0.0;
    double oscillation = 0.0;  ///< exactly 0 off the lattice
    int n = 0;
    int m_max = 0;             ///< poles used per half-line
    double tail_bound = 0.0;   ///< bound on the dropped poles
    double imag_residual = 0.0;  ///< |Im| of the conjugate-paired sum
    bool lattice = false;
};

struct OscillationOptions {
    int m_max = 16;
    int m_cap = 256;
    double tail_target = 1e-10;
};

/// Periodic correction g(n) to X_n / n from the poles s = -1 + i m y_step,
/// m != 0. The pole count grows from m_max until the tail bound falls below
/// the target; TailBoundTooLarge if m_cap is reached first.
AsymptoticResult oscillation(const SplitDistribution& dist, Observable obs, int n,
                             const OscillationOptions& options = {});

}  // namespace sicta
