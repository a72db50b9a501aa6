#include "sicta/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "sicta/errors.hpp"

namespace sicta {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Splitter {
public:
    explicit Splitter(const SplitDistribution& dist)
    {
        double acc = 0.0;
        for (double p : dist.values()) {
            acc += p;
            cumulative_.push_back(acc);
        }
        cumulative_.back() = 1.0;
    }

    int d() const { return static_cast<int>(cumulative_.size()); }

    /// 0-based slot of one packet.
    int draw(Rng& rng) const
    {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(), d() - 1));
    }

private:
    std::vector<double> cumulative_;
};

CriOutcome resolve_counts(const Splitter& split, int n, Rng& rng)
{
    if (n == 0) {
        return {1, 0, 0, 1};
    }
    if (n == 1) {
        return {1, 0, 1, 0};
    }
    const int d = split.d();
    std::vector<int> counts(static_cast<std::size_t>(d), 0);
    for (int k = 0; k < n; ++k) {
        ++counts[static_cast<std::size_t>(split.draw(rng))];
    }
    const int M = last_counted_slot(counts, n);
    // The slot that carried the collision is counted unless SIC skips it.
    CriOutcome out;
    if (M < d) {
        out.l = 1;
        out.c = 1;
    }
    for (int j = 0; j < M; ++j) {
        const CriOutcome child = resolve_counts(split, counts[static_cast<std::size_t>(j)], rng);
        out.l += child.l;
        out.c += child.c;
        out.s += child.s;
        out.i += child.i;
    }
    return out;
}

// Resolves `packets` and writes each packet's resolution time into t2.
// A packet in child g waits 1{g<d} plus the lengths of all children left of
// g before its own subtree starts; a packet alone needs one slot. Returns
// the counted length of this subtree.
long resolve_tagged(const Splitter& split, const std::vector<int>& packets, long base, Rng& rng,
                    std::vector<long>& t2)
{
    const auto n = static_cast<int>(packets.size());
    if (n == 0) {
        return 1;
    }
    if (n == 1) {
        t2[static_cast<std::size_t>(packets[0])] = base + 1;
        return 1;
    }
    const int d = split.d();
    std::vector<std::vector<int>> children(static_cast<std::size_t>(d));
    std::vector<int> counts(static_cast<std::size_t>(d), 0);
    for (int id : packets) {
        const int g = split.draw(rng);
        children[static_cast<std::size_t>(g)].push_back(id);
        ++counts[static_cast<std::size_t>(g)];
    }
    const int M = last_counted_slot(counts, n);
    long length = M < d ? 1 : 0;
    long prefix = 0;
    for (int g = 0; g < d; ++g) {
        const long offset = base + (g < d - 1 ? 1 : 0) + prefix;
        const long child = resolve_tagged(split, children[static_cast<std::size_t>(g)], offset, rng, t2);
        prefix += child;
        if (g < M) {
            length += child;
        }
    }
    return length;
}

template <class Fn>
void parallel_for(long count, int threads, Fn fn)
{
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<long>(count, 1024))));
    if (threads == 1) {
        for (long r = 0; r < count; ++r) {
            fn(r);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (long r = t; r < count; r += threads) {
                fn(r);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

ObservableStats summarize(const std::vector<double>& values)
{
    ObservableStats out;
    const auto n = static_cast<long double>(values.size());
    long double sum = 0.0L;
    for (double v : values) {
        sum += v;
    }
    const long double mean = sum / n;
    long double sq = 0.0L;
    for (double v : values) {
        sq += (v - mean) * (v - mean);
    }
    out.mean = static_cast<double>(mean);
    if (values.size() > 1) {
        out.variance = static_cast<double>(sq / (n - 1));
        out.standard_error = std::sqrt(out.variance / static_cast<double>(values.size()));
    } else {
        out.standard_error = kNaN;
    }
    return out;
}

void check_runs(long runs)
{
    if (runs < 1) {
        throw InvalidArgument("runs must be at least 1");
    }
}

}  // namespace

CriOutcome simulate_cri(const SplitDistribution& dist, int n, Rng& rng)
{
    if (n < 0) {
        throw InvalidArgument("n must be nonnegative");
    }
    return resolve_counts(Splitter(dist), n, rng);
}

SampleStats monte_carlo_means(const SimulationConfig& config)
{
    check_runs(config.runs);
    if (config.n < 0) {
        throw InvalidArgument("n must be nonnegative");
    }
    const Splitter split(config.dist);
    std::vector<CriOutcome> outcomes(static_cast<std::size_t>(config.runs));
    parallel_for(config.runs, config.threads, [&](long r) {
        Rng rng(config.seed, static_cast<std::uint64_t>(r));
        outcomes[static_cast<std::size_t>(r)] = resolve_counts(split, config.n, rng);
    });

    SampleStats out;
    out.runs = config.runs;
    out.seed = config.seed;
    out.standard_error_available = config.runs > 1;
    std::vector<double> column(outcomes.size());
    auto fill = [&](Observable o, auto get) {
        for (std::size_t r = 0; r < outcomes.size(); ++r) {
            column[r] = static_cast<double>(get(outcomes[r]));
        }
        out.observables[static_cast<std::size_t>(o)] = summarize(column);
    };
    fill(Observable::Length, [](const CriOutcome& c) { return c.l; });
    fill(Observable::Collisions, [](const CriOutcome& c) { return c.c; });
    fill(Observable::Successes, [](const CriOutcome& c) { return c.s; });
    fill(Observable::Idle, [](const CriOutcome& c) { return c.i; });
    return out;
}

std::vector<long> sample_cri_lengths(const SplitDistribution& dist, int n, long runs, std::uint64_t seed)
{
    check_runs(runs);
    const Splitter split(dist);
    std::vector<long> out(static_cast<std::size_t>(runs));
    for (long r = 0; r < runs; ++r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        out[static_cast<std::size_t>(r)] = resolve_counts(split, n, rng).l;
    }
    return out;
}

ObservableStats simulate_resolution_delay(const SplitDistribution& dist, double x, long runs, std::uint64_t seed,
                                          int threads)
{
    check_runs(runs);
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw InvalidArgument("x must be finite and nonnegative");
    }
    const Splitter split(dist);
    std::vector<double> values(static_cast<std::size_t>(runs));
    parallel_for(runs, threads, [&](long r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        int m = 0;
        if (x > 0.0) {
            std::poisson_distribution<int> others(x);
            m = others(rng.engine());
        }
        std::vector<int> packets(static_cast<std::size_t>(m) + 1);
        std::iota(packets.begin(), packets.end(), 0);
        std::vector<long> t2(packets.size(), 0);
        resolve_tagged(split, packets, 0, rng, t2);
        values[static_cast<std::size_t>(r)] = static_cast<double>(t2[0]);
    });
    return summarize(values);
}

GatedResult simulate_gated_system(const SimulationConfig& config)
{
    if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
        throw InvalidArgument("arrival rate must be finite and nonnegative");
    }
    if (config.warmup_cri < 0 || config.horizon_cri <= config.warmup_cri) {
        throw InvalidArgument("horizon must exceed warmup");
    }
    if (config.batches < 2 || config.batches > config.horizon_cri - config.warmup_cri) {
        throw InvalidArgument("need at least two batches and one CRI per batch");
    }
    const Splitter split(config.dist);
    Rng rng(config.seed, 0);

    const long kept = config.horizon_cri - config.warmup_cri;
    const auto B = static_cast<std::size_t>(config.batches);
    std::vector<long double> batch_delay(B, 0.0L), batch_count(B, 0.0L), batch_length(B, 0.0L),
        batch_cris(B, 0.0L);
    std::vector<double> backlog;  // packets per CRI, whole horizon
    backlog.reserve(static_cast<std::size_t>(config.horizon_cri));

    GatedResult out;
    std::vector<double> lengths;
    long current = 1;  // the first CRI resolves nobody
    std::vector<long> t2;
    std::vector<int> packets;
    for (long k = 0; k < config.horizon_cri; ++k) {
        long a = 0;
        if (config.lambda > 0.0) {
            std::poisson_distribution<long> arrivals(config.lambda * static_cast<double>(current));
            a = arrivals(rng.engine());
        }
        if (a > config.backlog_cap) {
            throw UnstableSystem("backlog of " + std::to_string(a) + " packets after " + std::to_string(k) +
                                 " CRIs");
        }
        backlog.push_back(static_cast<double>(a));
        packets.resize(static_cast<std::size_t>(a));
        std::iota(packets.begin(), packets.end(), 0);
        t2.assign(static_cast<std::size_t>(a), 0);
        std::vector<double> wait(static_cast<std::size_t>(a));
        for (auto& w : wait) {
            // arrival instant uniform over the CRI; the wait is what remains of it
            w = static_cast<double>(current) * (1.0 - rng.uniform());
        }
        const long next = resolve_tagged(split, packets, 0, rng, t2);
        if (k >= config.warmup_cri) {
            const auto b = static_cast<std::size_t>((k - config.warmup_cri) * config.batches / kept);
            for (long p = 0; p < a; ++p) {
                const auto i = static_cast<std::size_t>(p);
                out.delay.t0.push_back(wait[i]);
                out.delay.t2.push_back(t2[i]);
                batch_delay[b] += wait[i] + static_cast<long double>(t2[i]);
                batch_count[b] += 1.0L;
            }
            lengths.push_back(static_cast<double>(next));
            out.delay.histogram[next] += 1.0;
            batch_length[b] += static_cast<long double>(next);
            batch_cris[b] += 1.0L;
        }
        current = next;
    }

    // Trend test on batch means of the backlog over the second half.
    {
        const std::size_t half = backlog.size() / 2;
        const std::size_t groups = 20;
        const std::size_t per = (backlog.size() - half) / groups;
        if (per >= 1) {
            std::vector<double> means(groups, 0.0);
            for (std::size_t g = 0; g < groups; ++g) {
                for (std::size_t i = 0; i < per; ++i) {
                    means[g] += backlog[half + g * per + i];
                }
                means[g] /= static_cast<double>(per);
            }
            const double xbar = (groups - 1) / 2.0;
            const double ybar = std::accumulate(means.begin(), means.end(), 0.0) / groups;
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t g = 0; g < groups; ++g) {
                sxx += (g - xbar) * (g - xbar);
                sxy += (g - xbar) * (means[g] - ybar);
            }
            const double slope = sxy / sxx;
            double rss = 0.0;
            for (std::size_t g = 0; g < groups; ++g) {
                const double r = means[g] - ybar - slope * (g - xbar);
                rss += r * r;
            }
            const double se = std::sqrt(rss / (groups - 2) / sxx);
            if (slope > 3.0 * se && slope > 0.0 && means.back() > 2.0 * std::max(means.front(), 1.0)) {
                throw UnstableSystem("backlog grows by " + std::to_string(slope) + " packets per batch");
            }
        }
    }

    out.cris = kept;
    for (auto& [len, freq] : out.delay.histogram) {
        freq /= static_cast<double>(kept);
    }
    out.cri_length = summarize(lengths);
    // Batch means for the length SE: CRIs are autocorrelated.
    {
        std::vector<double> means;
        for (std::size_t b = 0; b < B; ++b) {
            means.push_back(static_cast<double>(batch_length[b] / batch_cris[b]));
        }
        out.cri_length.standard_error = summarize(means).standard_error;
    }

    auto& delay = out.delay;
    if (delay.t0.empty()) {
        delay.mean_total = delay.mean_wait = delay.mean_resolution = delay.standard_error_total = kNaN;
        return out;
    }
    long double wait = 0.0L, res = 0.0L;
    for (std::size_t p = 0; p < delay.t0.size(); ++p) {
        wait += delay.t0[p];
        res += static_cast<long double>(delay.t2[p]);
    }
    const auto count = static_cast<long double>(delay.t0.size());
    delay.mean_wait = static_cast<double>(wait / count);
    delay.mean_resolution = static_cast<double>(res / count);
    delay.mean_total = delay.mean_wait + delay.mean_resolution;
    std::vector<double> means;
    for (std::size_t b = 0; b < B; ++b) {
        if (batch_count[b] > 0) {
            means.push_back(static_cast<double>(batch_delay[b] / batch_count[b]));
        }
    }
    delay.standard_error_total = means.size() > 1 ? summarize(means).standard_error : kNaN;
    return out;
}

}  // namespace sicta
