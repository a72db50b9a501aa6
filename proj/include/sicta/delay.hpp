#pragma once

#include <optional>
#include <vector>

#include "sicta/exp_poly.hpp"
#include "sicta/numeric.hpp"
#include "sicta/split_model.hpp"

namespace sicta {

/// q_0 .. q_{j_max} with q_j(x) = sum_n P(l_n = j) e^{-x} x^n / n!, exact.
std::vector<ExpPoly<Rational>> cri_length_pgf_coefficients(const SplitDistribution& dist, int j_max);

struct PgfNumericOptions {
    long double prune_below = 1e-30L;   ///< Poisson-scale weight cut
    std::size_t term_cap = 50'000'000;  ///< TermBlowup beyond this many stored terms
};

/// Same recursion in long double with pruning, for large j_max.
std::vector<ExpPoly<long double>> cri_length_pgf_coefficients_numeric(const SplitDistribution& dist, int j_max,
                                                                       const PgfNumericOptions& options = {});

/// Gated-access chain on CRI lengths, truncated to 1..n_states.
struct DelayModel {
    SplitDistribution dist;
    double lambda = 0.0;
    int i_max = 0;
    int j_max = 0;
    /// P[i][j] = q_j(lambda i) for 0 <= i <= i_max, 0 <= j <= j_max.
    std::vector<std::vector<double>> P;
    /// 1 - sum_j P[i][j].
    std::vector<double> row_deficit;
    /// Stationary law over lengths (index = length) once solved.
    std::vector<double> pi;
    /// Length-biased law n pi_n / sum_j j pi_j.
    std::vector<double> pi_tagged;
    int iterations = 0;
    /// Delay-series coefficients, extended on demand.
    std::vector<Rational> t;
};

/// Fill P from the numeric q_j. Throws TruncationTooTight if a row deficit
/// exceeds `max_row_deficit`.
DelayModel transition_matrix(const SplitDistribution& dist, double lambda, int i_max, int j_max,
                             std::optional<double> max_row_deficit = std::nullopt);

/// Same, reusing precomputed q_j (at least j_max + 1 of them).
DelayModel transition_matrix(const SplitDistribution& dist, double lambda, int i_max, int j_max,
                             const std::vector<ExpPoly<long double>>& q,
                             std::optional<double> max_row_deficit = std::nullopt);

/// Power iteration on the truncated chain (mass lost to truncation is
/// renormalized each step) until the L1 change drops below tol.
/// NotStationary if lambda >= MST, NonConvergent past max_iterations.
DelayModel stationary_distribution(const DelayModel& model, double tol = 1e-12, int max_iterations = 200000);

/// Length-biased reweighting of a law indexed by length.
std::vector<double> length_biased(const std::vector<double>& pi);

/// Coefficients of T(x) = sum_n t_n x^n, the mean tagged-packet resolution
/// time when Poisson(x) other packets share its collision. t_0 = 1; for
/// n >= 1
///   t_n = [sum_k p_k ((-1)^{n+1} (k - 1{k=d}) / n! + alpha_n sum_{i<k} p_i^n)] / (1 - sum_k p_k^{n+1}),
/// where alpha_n are the Poisson-transform coefficients of L_n.
std::vector<Rational> delay_series_coefficients(const SplitDistribution& dist, int n_max);

/// The same coefficients evaluated directly in MPFR at `bits` precision.
std::vector<BigFloat> delay_series_coefficients_hp(const SplitDistribution& dist, int n_max, mpfr_prec_t bits);

/// Poisson-transform coefficients alpha_n of the mean CRI length.
std::vector<Rational> length_poisson_coefficients(const SplitDistribution& dist, int n_max);

struct SeriesOptions {
    double epsilon = 1e-12;  ///< stop after 5 consecutive terms below epsilon * |sum|
    int n_cap = 20000;
};

/// T(x) summed in MPFR with enough guard bits for the alternating series.
/// `coefficients` is extended as needed. SeriesNotConverged past n_cap.
double delay_series_value(const SplitDistribution& dist, std::vector<Rational>& coefficients, double x,
                          const SeriesOptions& options = {});

/// T_2(lambda n): mean resolution time of a packet that arrived during a
/// CRI of length n.
double mean_resolution_delay(DelayModel& model, int n, const SeriesOptions& options = {});

struct TotalDelay {
    double mean = 0.0;             ///< E[t0 + t2]
    double mean_wait = 0.0;        ///< E[t0] = sum pi~_n n / 2
    double mean_resolution = 0.0;  ///< E[t2]
    double stationary_mean_cri = 0.0;
    /// Heuristic bound from truncation: stationary mass that the truncated
    /// chain loses per step.
    double weighted_deficit = 0.0;
};

/// sum_n pi~_n (n / 2 + T_2(lambda n)) on a solved model.
TotalDelay mean_total_delay(DelayModel& model, const SeriesOptions& options = {});

struct DelayAnalysisOptions {
    int initial_states = 200;
    int max_states = 800;
    double deficit_target = 1e-9;  ///< on the pi-weighted row deficit
    double stationary_tol = 1e-12;
};

struct DelayAnalysis {
    DelayModel model;
    TotalDelay delay;
    double mst = 0.0;
};

/// Builds, solves and evaluates the chain, growing the state space until the
/// pi-weighted deficit meets the target (or max_states is reached).
DelayAnalysis analyze_delay(const SplitDistribution& dist, double lambda, const DelayAnalysisOptions& options = {});

}  // namespace sicta
