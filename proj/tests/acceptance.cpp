// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "sicta/asymptotics.hpp"
#include "sicta/cli.hpp"
#include "sicta/closed_form.hpp"
#include "sicta/delay.hpp"
#include "sicta/errors.hpp"
#include "sicta/montecarlo.hpp"
#include "sicta/optimize.hpp"
#include "sicta/oracle.hpp"

using namespace sicta;

namespace {

const double kInvLn2 = 1.0 / std::numbers::ln2;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

SplitDistribution random_rational(std::mt19937_64& rng, int d)
{
    std::uniform_int_distribution<int> u(1, 12);
    std::vector<Rational> p;
    Rational total;
    for (int k = 0; k < d; ++k) {
        p.emplace_back(u(rng));
        total += p.back();
    }
    for (auto& v : p) {
        v /= total;
    }
    return make_split_distribution(p);
}

SplitDistribution random_simplex(std::mt19937_64& rng, int d)
{
    std::gamma_distribution<double> g(1.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(d));
    double total = 0;
    for (auto& v : p) {
        v = g(rng) + 1e-3;
        total += v;
    }
    for (auto& v : p) {
        v /= total;
    }
    return make_split_distribution(std::span<const double>(p));
}

const std::vector<Rational>& oracle_column(const ExpectationTable& t, Observable o)
{
    switch (o) {
    case Observable::Length:
        return t.L;
    case Observable::Collisions:
        return t.C;
    case Observable::Successes:
        return t.S;
    default:
        return t.I;
    }
}

constexpr Observable kAll[] = {Observable::Length, Observable::Collisions, Observable::Successes, Observable::Idle};

Outcome oracle_equivalence()
{
    Outcome out;
    std::mt19937_64 rng(1);
    int compared = 0;
    for (int d : {2, 3, 4}) {
        std::vector<SplitDistribution> cases{fair(d), pbi(d)};
        for (int k = 0; k < 3; ++k) {
            cases.push_back(random_rational(rng, d));
        }
        for (const auto& dist : cases) {
            const auto table = exact_expectations(dist, 12);
            ClosedFormOptions options;
            options.mode = ArithmeticMode::Rational;
            for (Observable o : kAll) {
                for (int n = 0; n <= 12; ++n) {
                    const auto v = closed_form(dist, o, n, options);
                    ++compared;
                    out.require(v.exact && *v.exact == oracle_column(table, o)[static_cast<std::size_t>(n)],
                                observable_name(o) + " differs at " + dist.to_string() + ", n=" + std::to_string(n));
                }
            }
        }
    }
    if (out.pass) {
        out.detail = std::to_string(compared) + " exact comparisons";
    }
    return out;
}

Outcome erratum_adjudication()
{
    Outcome out;
    const auto dist = fair(2);
    const auto table = exact_expectations(dist, 2);
    ClosedFormOptions corrected, literal;
    corrected.mode = literal.mode = ArithmeticMode::Rational;
    literal.paper_literal = true;
    const auto s_lit = *closed_form(dist, Observable::Successes, 2, literal).exact;
    const auto s_cor = *closed_form(dist, Observable::Successes, 2, corrected).exact;
    const auto i_lit = *closed_form(dist, Observable::Idle, 2, literal).exact;
    const auto i_cor = *closed_form(dist, Observable::Idle, 2, corrected).exact;
    out.require(s_lit == 0, "printed S_2 is " + to_string(s_lit));
    out.require(table.S[2] == 1 && s_cor == 1, "oracle or corrected S_2 is not 1");
    out.require(i_lit == Rational(7, 2), "printed I_2 is " + to_string(i_lit));
    out.require(table.I[2] == Rational(1, 2) && i_cor == Rational(1, 2), "oracle or corrected I_2 is not 1/2");
    out.require(table.L[2] - table.C[2] - table.S[2] == table.I[2], "I_2 != L_2 - C_2 - S_2");

    // The CLI run must flag exactly S and I at n = 2 and nothing at n <= 1.
    std::ostringstream csv, err;
    const int code = run_cli({"validate", "--dist", "1/2,1/2", "--nmax", "2", "--paper-literal"}, csv, err);
    out.require(code == kExitValidationFailed, "validate --paper-literal exit code " + std::to_string(code));
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    const std::vector<std::string> expected{"0,1,1,0,0,0,0,0,0,0,1,1,0", "1,1,1,0,0,0,0,1,1,0,0,0,0",
                                            "2,3,3,0,3/2,3/2,0,1,0,1,1/2,7/2,3"};
    for (const auto& want : expected) {
        std::getline(lines, line);
        out.require(line == want, "validate row '" + line + "'");
    }
    if (out.pass) {
        out.detail = "printed S_2 = 0 vs 1, printed I_2 = 7/2 vs 1/2";
    }
    return out;
}

Outcome asymptotic_throughput()
{
    Outcome out;
    double worst = 0, worst_g = 0;
    ClosedFormOptions hp;
    hp.mode = ArithmeticMode::HighPrecision;
    for (int d : {2, 3, 4}) {
        for (int n : {1 << 10, 1 << 12, 1 << 14}) {
            const double ratio = closed_form(pbi(d), Observable::Length, n, hp).to_double() / n;
            const double g = oscillation(pbi(d), Observable::Length, n).oscillation;
            worst = std::max(worst, std::abs(ratio - kInvLn2));
            worst_g = std::max(worst_g, std::abs(g));
        }
    }
    out.require(worst <= 2e-3, "max |L_n/n - 1/ln2| = " + fmt("%.3g", worst));
    out.require(worst_g <= 1e-3, "max |g_1| = " + fmt("%.3g", worst_g));
    if (out.pass) {
        out.detail = "max |L_n/n - 1/ln2| = " + fmt("%.3g", worst) + ", max |g_1| = " + fmt("%.3g", worst_g);
    }
    return out;
}

Outcome leading_constants()
{
    Outcome out;
    const double ln2 = std::numbers::ln2;
    const double want[] = {1 / ln2, 1 / (2 * ln2), 0.5, (1 - ln2) / (2 * ln2)};
    for (Observable o : kAll) {
        const double got = leading_term(pbi(2), o);
        out.require(std::abs(got - want[static_cast<int>(o)]) <= 1e-12,
                    observable_name(o) + " constant " + fmt("%.17g", got));
    }
    std::mt19937_64 rng(4);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const auto dist = random_simplex(rng, 2 + k % 5);
        const double sum = leading_term(dist, Observable::Collisions) + leading_term(dist, Observable::Successes) +
                           leading_term(dist, Observable::Idle);
        worst = std::max(worst, std::abs(sum - leading_term(dist, Observable::Length)));
    }
    out.require(worst <= 1e-12, "conservation gap " + fmt("%.3g", worst));
    if (out.pass) {
        out.detail = "constants to 1e-12, conservation gap " + fmt("%.3g", worst);
    }
    return out;
}

Outcome oscillation_dichotomy()
{
    Outcome out;
    const auto smooth = parse_distribution("0.3,0.7");
    out.require(!detect_lattice(smooth), "(0.3, 0.7) detected as lattice");
    double lo = INFINITY, hi = 0;
    for (int e = 8; e <= 16; ++e) {
        for (Observable o : kAll) {
            out.require(oscillation(smooth, o, 1 << e).oscillation == 0.0, "nonzero g off the lattice");
        }
        const double g = std::abs(oscillation(pbi(2), Observable::Length, 1 << e).oscillation);
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    out.require(hi >= 1e-6 && hi <= 1e-3, "pbi(2) max |g_1| = " + fmt("%.3g", hi));
    if (out.pass) {
        out.detail = "g = 0 for (0.3, 0.7); pbi(2) |g_1| in [" + fmt("%.3g", lo) + ", " + fmt("%.3g", hi) + "]";
    }
    return out;
}

Outcome monte_carlo_agreement()
{
    Outcome out;
    const auto dist = pbi(3);
    const int n = 1000;
    const long runs = 10000;
    double sum = 0, sum_sq = 0;
    long broken = 0;
    for (long r = 0; r < runs; ++r) {
        Rng rng(2024, static_cast<std::uint64_t>(r));
        const auto o = simulate_cri(dist, n, rng);
        broken += !o.conserved();
        const double ratio = static_cast<double>(o.l) / n;
        sum += ratio;
        sum_sq += ratio * ratio;
    }
    const double mean = sum / runs;
    const double se = std::sqrt((sum_sq - sum * mean) / (runs - 1) / runs);
    ClosedFormOptions hp;
    hp.mode = ArithmeticMode::HighPrecision;
    const double exact = closed_form(dist, Observable::Length, n, hp).to_double() / n;
    const double z = std::abs(mean - exact) / se;
    out.require(broken == 0, std::to_string(broken) + " runs with l != c + s + i");
    out.require(z <= 4.0, "off by " + fmt("%.2f", z) + " standard errors");
    out.detail = "mean l/n = " + fmt("%.6f", mean) + ", L_n/n = " + fmt("%.6f", exact) + ", " + fmt("%.2f", z) +
                 " SE" + (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome optimizer()
{
    Outcome out;
    std::mt19937_64 rng(99);
    double worst_p = 0, worst_v = 0;
    OptimizeOptions options;
    options.starts = 1;
    for (int d : {2, 3, 4}) {
        for (int k = 0; k < 20; ++k) {
            const auto opt = maximize_throughput(d, random_simplex(rng, d), options);
            for (int j = 1; j <= d; ++j) {
                worst_p = std::max(worst_p, std::abs(opt.dist.p(j) - pbi(d).p(j)));
            }
            worst_v = std::max(worst_v, std::abs(opt.value - kInvLn2));
        }
    }
    out.require(worst_p <= 1e-4, "argmin off by " + fmt("%.3g", worst_p));
    out.require(worst_v <= 1e-10, "value off by " + fmt("%.3g", worst_v));
    if (out.pass) {
        out.detail = "argmin within " + fmt("%.2g", worst_p) + ", value within " + fmt("%.2g", worst_v);
    }
    return out;
}

Outcome tradeoff()
{
    Outcome out;
    std::vector<double> xs;
    for (int i = 0; i <= 10; ++i) {
        xs.push_back(i * 0.05);
    }
    const auto two = tradeoff_curve(2, xs);
    const auto three = tradeoff_curve(3, xs);
    out.require(std::abs(two[0].collision_rate - 0.72) <= 0.01, "x=0 rate " + fmt("%.4f", two[0].collision_rate));
    out.require(std::abs(two[4].collision_rate - 0.44) <= 0.02, "x=0.2 rate " + fmt("%.4f", two[4].collision_rate));
    double gap = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
            out.require(two[i].collision_rate <= two[i - 1].collision_rate, "curve increases at x=" + fmt("%.2f", xs[i]));
        }
        gap = std::max(gap, std::abs(two[i].collision_rate - three[i].collision_rate));
    }
    out.require(gap <= 1e-3, "d=2 and d=3 differ by " + fmt("%.3g", gap));
    if (out.pass) {
        out.detail = "x=0: " + fmt("%.4f", two[0].collision_rate) + ", x=0.2: " + fmt("%.4f", two[4].collision_rate) +
                     ", d=2 vs d=3 gap " + fmt("%.2g", gap);
    }
    return out;
}

Outcome delay_consistency()
{
    Outcome out;
    const auto dist = fair(2);
    const auto analysis = analyze_delay(dist, 0.5);
    SimulationConfig config{dist};
    config.lambda = 0.5;
    config.warmup_cri = 1000;
    config.horizon_cri = 1000 + 10000;
    config.seed = 1;
    const auto sim = simulate_gated_system(config);
    const double rel = std::abs(sim.delay.mean_total / analysis.delay.mean - 1.0);
    out.require(rel <= 0.05, "relative gap " + fmt("%.4f", rel));

    // Exactly (1 + x) e^{-x} as an exponential polynomial, and to rounding in the matrix.
    const auto q = cri_length_pgf_coefficients(dist, 1);
    out.require(q[1].term_count() == 2 && q[1].coefficient(0, 1) == 1 && q[1].coefficient(1, 1) == 1,
                "q_1 is not (1 + x) e^{-x}");
    const auto model = transition_matrix(dist, 0.5, 60, 80);
    for (int i = 1; i <= 60; ++i) {
        const double x = 0.5 * i;
        const double want = (1 + x) * std::exp(-x);
        out.require(std::abs(model.P[static_cast<std::size_t>(i)][1] - want) <= 1e-15 * want,
                    "P_{" + std::to_string(i) + ",1} off");
    }

    bool unstable = false;
    config.lambda = 0.75;
    try {
        simulate_gated_system(config);
    } catch (const UnstableSystem&) {
        unstable = true;
    }
    out.require(unstable, "lambda = 0.75 not flagged");
    out.detail = "analytic " + fmt("%.4f", analysis.delay.mean) + ", simulated " + fmt("%.4f", sim.delay.mean_total) +
                 " (" + fmt("%.1f", 100 * rel) + "%)" + (out.pass ? "" : "; " + out.detail);
    return out;
}

Outcome pgf_crosscheck()
{
    Outcome out;
    std::mt19937_64 rng(10);
    std::vector<SplitDistribution> cases{fair(2), pbi(3), random_rational(rng, 3), random_rational(rng, 4)};
    for (const auto& dist : cases) {
        const auto q = cri_length_pgf_coefficients(dist, 12);
        const auto law = exact_cri_distributions(dist, 8, 12);
        for (int j = 0; j <= 12; ++j) {
            const auto coeffs = q[static_cast<std::size_t>(j)].poisson_coefficients(8);
            for (int n = 0; n <= 8; ++n) {
                out.require(coeffs[static_cast<std::size_t>(n)] ==
                                law[static_cast<std::size_t>(n)].probs[static_cast<std::size_t>(j)],
                            "q_" + std::to_string(j) + " differs at n=" + std::to_string(n));
            }
        }
    }
    struct Point {
        SplitDistribution dist;
        double x, z;
    };
    const auto mixed = parse_distribution("1/3,1/2,1/6");
    const std::vector<Point> points{{fair(2), 0.5, 0.5},  {fair(2), 1.0, 0.9},   {fair(2), 2.0, -0.5},
                                    {fair(2), 4.0, 0.3},  {pbi(3), 0.5, -0.9},   {pbi(3), 1.5, 0.7},
                                    {pbi(3), 3.0, 1.0},   {mixed, 0.2, 0.6},     {mixed, 1.0, -0.3},
                                    {mixed, 2.5, 0.95}};
    double worst = 0;
    for (const auto& p : points) {
        worst = std::max(worst, pgf_functional_residual(p.dist, p.x, p.z, 60).residual);
    }
    out.require(worst <= 1e-8, "residual " + fmt("%.3g", worst));
    if (out.pass) {
        out.detail = "coefficients exact; max residual " + fmt("%.3g", worst);
    }
    return out;
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;  // 0: no runtime requirement
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "oracle equivalence", 60, oracle_equivalence},
        {2, "erratum adjudication", 0, erratum_adjudication},
        {3, "asymptotic throughput", 120, asymptotic_throughput},
        {4, "leading constants", 0, leading_constants},
        {5, "oscillation dichotomy", 0, oscillation_dichotomy},
        {6, "Monte Carlo agreement", 60, monte_carlo_agreement},
        {7, "throughput optimizer", 0, optimizer},
        {8, "tradeoff curve", 300, tradeoff},
        {9, "delay consistency", 180, delay_consistency},
        {10, "coefficient functions", 0, pgf_crosscheck},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const Error& e) {
            o.pass = false;
            o.detail = std::string(e.kind()) + ": " + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
            o.pass = false;
            o.detail += "; took longer than " + fmt("%.0f", c.limit_seconds) + " s";
        }
        failures += !o.pass;
        std::printf("criterion %2d %s: %s (%s, %.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                    seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
