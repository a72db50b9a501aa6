#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sicta/split_model.hpp"

namespace sicta {

struct OptimizeOptions {
    double tol = 1e-9;       ///< gradient tolerance of the inner solves
    int starts = 8;          ///< multi-start count (the given init counts as one)
    int max_iterations = 2000;
    std::uint64_t seed = 7;  ///< for the random interior starts
    int threads = 1;
};

struct ThroughputOptimum {
    SplitDistribution dist;
    double value = 0.0;       ///< sum_{k<=d-2} Fbar(k) / H at the optimum
    double throughput = 0.0;  ///< 1 / value
    double stationarity = 0.0;  ///< sup-norm gradient in logit coordinates
    int iterations = 0;
};

/// Minimizes the leading counted-slot constant over the open simplex.
/// NonConvergent if no start reaches the gradient tolerance.
ThroughputOptimum maximize_throughput(int d, const std::optional<SplitDistribution>& init = std::nullopt,
                                      const OptimizeOptions& options = {});

/// First-order conditions of the throughput problem: p_{d-1} = p_d and
/// p_{i+1} / p_i = 1/2 for i < d - 1, each within tol.
bool verify_lagrange_conditions(const SplitDistribution& dist, double tol = 1e-8);

struct TradeoffPoint {
    double reduction = 0.0;       ///< x: allowed fractional throughput loss
    double collision_rate = 0.0;  ///< minimized (1 - p_d) / H
    SplitDistribution argmin;
    bool constraint_active = false;
    double constraint_violation = 0.0;  ///< max(0, (1 - x) ln 2 - MST)
    double stationarity = 0.0;          ///< KKT residual in logit coordinates
    double multiplier = 0.0;
    int solver_iterations = 0;
};

/// Minimal leading collision constant subject to MST >= (1 - x) ln 2, for
/// each x in `reductions` (sorted ascending internally, returned in input
/// order). Continuation carries each solution to the next x.
std::vector<TradeoffPoint> tradeoff_curve(int d, const std::vector<double>& reductions,
                                          const OptimizeOptions& options = {});

}  // namespace sicta
