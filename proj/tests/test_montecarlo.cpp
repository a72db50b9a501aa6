#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sicta/asymptotics.hpp"
#include "sicta/delay.hpp"
#include "sicta/errors.hpp"
#include "sicta/montecarlo.hpp"
#include "sicta/oracle.hpp"

using namespace sicta;

TEST_CASE("single CRI base cases")
{
    Rng rng(1, 0);
    CHECK(simulate_cri(fair(2), 0, rng) == CriOutcome{1, 0, 0, 1});
    CHECK(simulate_cri(fair(2), 1, rng) == CriOutcome{1, 0, 1, 0});
    CHECK_THROWS_AS(simulate_cri(fair(2), -1, rng), InvalidArgument);
}

TEST_CASE("two packets in a fair binary tree")
{
    // A (1, 1) split costs the root collision and one success; the right
    // packet is recovered by cancellation.
    long shortest = 0;
    for (std::uint64_t r = 0; r < 2000; ++r) {
        Rng rng(3, r);
        const auto o = simulate_cri(fair(2), 2, rng);
        CHECK(o.conserved());
        CHECK(o.l >= 2);
        if (o.l == 2) {
            CHECK(o == CriOutcome{2, 1, 1, 0});
            ++shortest;
        }
    }
    CHECK(std::abs(shortest - 1000) < 4 * std::sqrt(500.0));
}

TEST_CASE("every sample conserves slots")
{
    for (const auto& dist : {fair(2), pbi(3), parse_distribution("0.2,0.5,0.3")}) {
        for (std::uint64_t r = 0; r < 200000; ++r) {
            Rng rng(11, r);
            const auto o = simulate_cri(dist, static_cast<int>(r % 13), rng);
            REQUIRE(o.conserved());
            // packets recovered by cancellation never occupy a success slot
            REQUIRE(o.s <= static_cast<long>(r % 13));
        }
    }
}

TEST_CASE("sample means against exact values")
{
    SimulationConfig config{fair(2)};
    config.n = 2;
    config.runs = 100000;
    config.seed = 42;
    const auto stats = monte_carlo_means(config);
    CHECK(stats.standard_error_available);
    const auto& l = stats.at(Observable::Length);
    CHECK(std::abs(l.mean - 3.0) < 4 * l.standard_error);
    CHECK(std::abs(stats.at(Observable::Collisions).mean - 1.5) < 4 * stats.at(Observable::Collisions).standard_error);
    CHECK(stats.at(Observable::Successes).mean == 1.0);
    CHECK(stats.at(Observable::Successes).variance == 0.0);

    config.dist = pbi(3);
    config.n = 1000;
    config.runs = 10000;
    const auto big = monte_carlo_means(config);
    const double expected = 1.0 / std::log(2.0) + oscillation(pbi(3), Observable::Length, 1000).oscillation;
    CHECK(std::abs(big.at(Observable::Length).mean / 1000 - expected) <
          4 * big.at(Observable::Length).standard_error / 1000);
}

TEST_CASE("single run has no standard error")
{
    SimulationConfig config{fair(2)};
    config.n = 5;
    config.runs = 1;
    const auto stats = monte_carlo_means(config);
    CHECK_FALSE(stats.standard_error_available);
    CHECK(stats.at(Observable::Length).variance == 0.0);
    CHECK(std::isnan(stats.at(Observable::Length).standard_error));
}

TEST_CASE("results do not depend on the thread count")
{
    SimulationConfig config{pbi(3)};
    config.n = 40;
    config.runs = 5000;
    config.seed = 9;
    const auto one = monte_carlo_means(config);
    config.threads = 4;
    const auto four = monte_carlo_means(config);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(one.observables[k].mean == four.observables[k].mean);
        CHECK(one.observables[k].variance == four.observables[k].variance);
    }
    const auto a = simulate_resolution_delay(fair(2), 2.0, 3000, 5, 1);
    const auto b = simulate_resolution_delay(fair(2), 2.0, 3000, 5, 3);
    CHECK(a.mean == b.mean);
}

TEST_CASE("length law passes a Kolmogorov-Smirnov check")
{
    const long runs = 1000000;
    // 99% band for the one-sample statistic; conservative for discrete laws.
    const double band = 1.628 / std::sqrt(static_cast<double>(runs));
    for (int n = 0; n <= 6; ++n) {
        auto samples = sample_cri_lengths(fair(2), n, runs, 100 + static_cast<std::uint64_t>(n));
        const long top = *std::max_element(samples.begin(), samples.end());
        std::vector<long> counts(static_cast<std::size_t>(top) + 1, 0);
        for (long v : samples) {
            ++counts[static_cast<std::size_t>(v)];
        }
        const auto law = exact_cri_distribution(fair(2), n, static_cast<int>(top));
        double empirical = 0, exact = 0, worst = 0;
        for (long j = 0; j <= top; ++j) {
            empirical += static_cast<double>(counts[static_cast<std::size_t>(j)]) / runs;
            exact += to_double(law.probs[static_cast<std::size_t>(j)]);
            worst = std::max(worst, std::abs(empirical - exact));
        }
        CHECK(worst < band);
    }
}

TEST_CASE("tagged resolution time")
{
    const auto sim = simulate_resolution_delay(fair(2), 0.0, 10, 1);
    CHECK(sim.mean == 1.0);
    const auto stats = simulate_resolution_delay(fair(2), 1.0, 200000, 77);
    std::vector<Rational> t;
    const double analytic = delay_series_value(fair(2), t, 1.0);
    CHECK(std::abs(stats.mean - analytic) < 3 * stats.standard_error);
}

TEST_CASE("gated system without arrivals")
{
    SimulationConfig config{fair(2)};
    config.lambda = 0.0;
    config.horizon_cri = 200;
    config.warmup_cri = 10;
    config.batches = 10;
    const auto out = simulate_gated_system(config);
    CHECK(out.delay.t0.empty());
    CHECK(std::isnan(out.delay.mean_total));
    CHECK(out.delay.histogram.size() == 1);
    CHECK(out.delay.histogram.at(1) == 1.0);
    CHECK(out.cri_length.mean == 1.0);
}

TEST_CASE("gated system against the stationary analysis")
{
    SimulationConfig config{fair(2)};
    config.lambda = 0.5;
    config.horizon_cri = 101000;
    config.warmup_cri = 1000;
    config.seed = 2024;
    const auto sim = simulate_gated_system(config);
    double mass = 0;
    for (const auto& [len, f] : sim.delay.histogram) {
        mass += f;
    }
    CHECK(mass == doctest::Approx(1.0));
    for (std::size_t p = 0; p < sim.delay.t0.size(); ++p) {
        REQUIRE(sim.delay.t0[p] >= 0.0);
        REQUIRE(sim.delay.t2[p] >= 1);
    }

    const auto analysis = analyze_delay(fair(2), 0.5);
    CHECK(std::abs(sim.delay.mean_total / analysis.delay.mean - 1.0) < 0.05);
    CHECK(std::abs(sim.delay.mean_total - analysis.delay.mean) < 4 * sim.delay.standard_error_total);
    CHECK(std::abs(sim.cri_length.mean - analysis.delay.stationary_mean_cri) < 3 * sim.cri_length.standard_error);
}

TEST_CASE("gated system detects instability")
{
    SimulationConfig config{fair(2)};
    config.lambda = 0.75;
    config.horizon_cri = 20000;
    config.warmup_cri = 1000;
    CHECK_THROWS_AS(simulate_gated_system(config), UnstableSystem);

    config.lambda = 0.6;  // stable, and must not be flagged
    CHECK_NOTHROW(simulate_gated_system(config));
}
