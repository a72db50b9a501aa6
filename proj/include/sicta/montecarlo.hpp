#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "sicta/closed_form.hpp"
#include "sicta/split_model.hpp"

namespace sicta {

/// splitmix64 finalizer: decorrelates (seed, stream index) pairs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Per-run random stream. Every run gets its own engine seeded from
/// mix_seed(seed, run), so results do not depend on how runs are scheduled.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

    /// Uniform on [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

struct SimulationConfig {
    SplitDistribution dist;
    std::uint64_t seed = 1;
    long runs = 1;
    int threads = 1;
    /// Per-CRI mode: initial collision size.
    int n = 0;
    /// Gated mode: arrival rate and CRI counts.
    double lambda = 0.0;
    long horizon_cri = 10000;
    long warmup_cri = 1000;
    int batches = 50;  ///< batch means for standard errors in gated mode
    /// Gated mode: a single CRI with more packets than this is divergence.
    long backlog_cap = 100000;
};

/// One realized CRI for n initial packets.
CriOutcome simulate_cri(const SplitDistribution& dist, int n, Rng& rng);

struct ObservableStats {
    double mean = 0.0;
    double variance = 0.0;        ///< unbiased; 0 when runs = 1
    double standard_error = 0.0;  ///< sqrt(variance / runs); NaN when unavailable
};

struct SampleStats {
    std::array<ObservableStats, 4> observables;  ///< indexed by Observable
    long runs = 0;
    std::uint64_t seed = 0;
    bool standard_error_available = false;

    const ObservableStats& at(Observable o) const { return observables[static_cast<std::size_t>(o)]; }
};

/// Means of (l, c, s, i) over config.runs independent CRIs of config.n
/// packets. Bit-for-bit identical for any thread count.
SampleStats monte_carlo_means(const SimulationConfig& config);

/// Raw realized CRI lengths, run order, for distributional checks.
std::vector<long> sample_cri_lengths(const SplitDistribution& dist, int n, long runs, std::uint64_t seed);

/// Resolution time of a tagged packet colliding with Poisson(x) others,
/// averaged over `runs`. Its mean is T(x).
ObservableStats simulate_resolution_delay(const SplitDistribution& dist, double x, long runs, std::uint64_t seed,
                                          int threads = 1);

struct DelaySample {
    std::vector<double> t0;  ///< wait for the arrival CRI to end, per packet
    std::vector<long> t2;    ///< resolution time, per packet
    /// Post-warmup CRI-length frequencies.
    std::map<long, double> histogram;
    double mean_total = 0.0;
    double mean_wait = 0.0;
    double mean_resolution = 0.0;
    double standard_error_total = 0.0;  ///< batch means; NaN without packets
};

struct GatedResult {
    DelaySample delay;
    ObservableStats cri_length;  ///< post-warmup CRIs, batch-means SE
    long cris = 0;
};

/// Gated access: packets arriving during a CRI wait for it to finish and
/// form the next collision. Throws UnstableSystem when the backlog diverges.
GatedResult simulate_gated_system(const SimulationConfig& config);

}  // namespace sicta
