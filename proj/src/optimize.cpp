#include "sicta/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "sicta/errors.hpp"
#include "sicta/montecarlo.hpp"

namespace sicta {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Simplex point from d-1 free logits (the last logit is pinned at 0).
std::vector<double> softmax(const std::vector<double>& theta)
{
    std::vector<double> p(theta.size() + 1);
    const double top = std::max(0.0, *std::max_element(theta.begin(), theta.end()));
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = std::exp((j < theta.size() ? theta[j] : 0.0) - top);
        total += p[j];
    }
    for (auto& v : p) {
        v /= total;
    }
    return p;
}

std::vector<double> logits(std::span<const double> p)
{
    std::vector<double> theta(p.size() - 1);
    const double last = std::log(std::max(p.back(), 1e-300));
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        theta[j] = std::log(std::max(p[j], 1e-300)) - last;
    }
    return theta;
}

// Value and simplex gradient of one smooth function of p.
struct Eval {
    double value = 0.0;
    std::vector<double> grad;
};

// The pieces every objective is built from: A = sum_k Fbar(k) = sum_j min(j, d-1) p_j and H.
struct Parts {
    double A = 0.0;
    double H = 0.0;
    std::vector<double> dA, dH;
};

Parts parts(const std::vector<double>& p)
{
    const auto d = p.size();
    Parts out;
    out.dA.resize(d);
    out.dH.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double w = static_cast<double>(std::min(j + 1, d - 1));
        out.A += w * p[j];
        out.dA[j] = w;
        // The clamp keeps ln p finite for iterates at the edge of the simplex.
        const double lp = std::log(std::max(p[j], 1e-9));
        out.H -= p[j] * lp;
        out.dH[j] = -(lp + 1.0);
    }
    return out;
}

Eval length_constant(const std::vector<double>& p)
{
    const Parts q = parts(p);
    Eval e{q.A / q.H, std::vector<double>(p.size())};
    for (std::size_t j = 0; j < p.size(); ++j) {
        e.grad[j] = (q.dA[j] * q.H - q.A * q.dH[j]) / (q.H * q.H);
    }
    return e;
}

Eval collision_constant(const std::vector<double>& p)
{
    const Parts q = parts(p);
    const double num = 1.0 - p.back();
    Eval e{num / q.H, std::vector<double>(p.size())};
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double dnum = j + 1 == p.size() ? -1.0 : 0.0;
        e.grad[j] = (dnum * q.H - num * q.dH[j]) / (q.H * q.H);
    }
    return e;
}

// (1 - x) ln 2 - MST(p); feasible when <= 0.
Eval throughput_gap(const std::vector<double>& p, double x)
{
    const Parts q = parts(p);
    Eval e{(1.0 - x) * kLn2 - q.H / q.A, std::vector<double>(p.size())};
    for (std::size_t j = 0; j < p.size(); ++j) {
        e.grad[j] = -(q.dH[j] * q.A - q.H * q.dA[j]) / (q.A * q.A);
    }
    return e;
}

// Chain rule through the softmax: d/dtheta_j = p_j (v_j - sum_i p_i v_i).
std::vector<double> to_logit_gradient(const std::vector<double>& p, const std::vector<double>& v)
{
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mean += p[i] * v[i];
    }
    std::vector<double> g(p.size() - 1);
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        g[j] = p[j] * (v[j] - mean);
    }
    return g;
}

double sup_norm(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

using Objective = std::function<Eval(const std::vector<double>&)>;

struct Solve {
    std::vector<double> theta;
    double value = 0.0;
    int iterations = 0;
};

std::vector<double> read(const gsl_vector* v)
{
    std::vector<double> out(v->size);
    for (std::size_t i = 0; i < v->size; ++i) {
        out[i] = gsl_vector_get(v, i);
    }
    return out;
}

double gsl_f(const gsl_vector* v, void* params)
{
    const auto& f = *static_cast<const Objective*>(params);
    return f(softmax(read(v))).value;
}

void gsl_df(const gsl_vector* v, void* params, gsl_vector* g)
{
    const auto& f = *static_cast<const Objective*>(params);
    const auto p = softmax(read(v));
    const auto grad = to_logit_gradient(p, f(p).grad);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        gsl_vector_set(g, i, grad[i]);
    }
}

void gsl_fdf(const gsl_vector* v, void* params, double* value, gsl_vector* g)
{
    const auto& f = *static_cast<const Objective*>(params);
    const auto p = softmax(read(v));
    const Eval e = f(p);
    *value = e.value;
    const auto grad = to_logit_gradient(p, e.grad);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        gsl_vector_set(g, i, grad[i]);
    }
}

// BFGS on the logits, then a Nelder-Mead polish kept only if it improves.
Solve minimize(const Objective& f, std::vector<double> theta, double tol, int max_iterations)
{
    const std::size_t n = theta.size();
    Objective fn = f;
    gsl_vector* x = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, theta[i]);
    }
    Solve out;

    gsl_multimin_function_fdf fdf{&gsl_f, &gsl_df, &gsl_fdf, n, &fn};
    gsl_multimin_fdfminimizer* bfgs = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
    gsl_multimin_fdfminimizer_set(bfgs, &fdf, x, 0.05, 0.1);
    int it = 0;
    for (; it < max_iterations; ++it) {
        if (gsl_multimin_fdfminimizer_iterate(bfgs) != GSL_SUCCESS) {
            break;  // no further progress along the search direction
        }
        if (gsl_multimin_test_gradient(bfgs->gradient, tol) == GSL_SUCCESS) {
            break;
        }
    }
    out.theta = read(bfgs->x);
    out.value = bfgs->f;
    out.iterations = it + 1;
    gsl_multimin_fdfminimizer_free(bfgs);

    gsl_multimin_function plain{&gsl_f, n, &fn};
    gsl_multimin_fminimizer* nm = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, out.theta[i]);
    }
    gsl_vector* step = gsl_vector_alloc(n);
    gsl_vector_set_all(step, 1e-4);
    gsl_multimin_fminimizer_set(nm, &plain, x, step);
    for (int k = 0; k < 500; ++k) {
        if (gsl_multimin_fminimizer_iterate(nm) != GSL_SUCCESS) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm), 1e-12) == GSL_SUCCESS) {
            break;
        }
    }
    if (nm->fval < out.value) {
        out.theta = read(nm->x);
        out.value = nm->fval;
    }
    out.iterations += static_cast<int>(nm->fval < out.value);
    gsl_multimin_fminimizer_free(nm);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return out;
}

std::vector<std::vector<double>> starting_points(int d, const std::vector<double>& first, const OptimizeOptions& options)
{
    std::vector<std::vector<double>> starts{first};
    Rng rng(options.seed, static_cast<std::uint64_t>(d));
    std::normal_distribution<double> normal(0.0, 1.5);
    while (static_cast<int>(starts.size()) < std::max(1, options.starts)) {
        std::vector<double> theta(static_cast<std::size_t>(d - 1));
        for (auto& t : theta) {
            t = normal(rng.engine());
        }
        starts.push_back(std::move(theta));
    }
    return starts;
}

template <class Fn>
void for_each_parallel(std::size_t count, int threads, Fn fn)
{
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < count; i += static_cast<std::size_t>(threads)) {
                fn(i);
            }
        });
    }
    for (std::size_t i = 0; i < count; i += static_cast<std::size_t>(threads)) {
        fn(i);
    }
    for (auto& th : pool) {
        th.join();
    }
}

void check_options(int d, const OptimizeOptions& options)
{
    if (d < 2) {
        throw InvalidArgument("d must be at least 2");
    }
    if (!(options.tol > 0.0)) {
        throw InvalidArgument("tolerance must be positive");
    }
}

SplitDistribution as_distribution(const std::vector<double>& theta)
{
    const auto p = softmax(theta);
    return make_split_distribution(std::span<const double>(p));
}

}  // namespace

ThroughputOptimum maximize_throughput(int d, const std::optional<SplitDistribution>& init,
                                      const OptimizeOptions& options)
{
    check_options(d, options);
    std::vector<double> first(static_cast<std::size_t>(d - 1), 0.0);
    if (init) {
        if (init->d() != d) {
            throw InvalidArgument("initial distribution has the wrong number of branches");
        }
        first = logits(init->values());
    }
    const auto starts = starting_points(d, first, options);
    const Objective f = length_constant;
    std::vector<Solve> solves(starts.size());
    for_each_parallel(starts.size(), options.threads,
                      [&](std::size_t i) { solves[i] = minimize(f, starts[i], options.tol, options.max_iterations); });
    const auto best = std::min_element(solves.begin(), solves.end(),
                                       [](const Solve& a, const Solve& b) { return a.value < b.value; });
    const auto p = softmax(best->theta);
    const double stationarity = sup_norm(to_logit_gradient(p, length_constant(p).grad));
    if (stationarity > 1e3 * options.tol) {
        throw NonConvergent("throughput optimization stalled with gradient " + std::to_string(stationarity));
    }
    ThroughputOptimum out{as_distribution(best->theta), best->value, 1.0 / best->value, stationarity,
                          best->iterations};
    return out;
}

bool verify_lagrange_conditions(const SplitDistribution& dist, double tol)
{
    const int d = dist.d();
    for (int j = 1; j <= d; ++j) {
        if (!(dist.p(j) > 0.0)) {
            return false;  // the conditions are for interior points
        }
    }
    if (std::abs(dist.p(d - 1) - dist.p(d)) > tol) {
        return false;
    }
    for (int i = 1; i + 1 <= d - 1; ++i) {
        if (std::abs(dist.p(i + 1) / dist.p(i) - 0.5) > tol) {
            return false;
        }
    }
    return true;
}

std::vector<TradeoffPoint> tradeoff_curve(int d, const std::vector<double>& reductions,
                                          const OptimizeOptions& options)
{
    check_options(d, options);
    for (double x : reductions) {
        if (!(x >= 0.0 && x <= 0.5)) {
            throw InvalidArgument("reductions must lie in [0, 0.5]");
        }
    }
    std::vector<std::size_t> order(reductions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return reductions[a] < reductions[b]; });

    const auto bi = pbi(d);
    std::vector<TradeoffPoint> out(reductions.size(), TradeoffPoint{0.0, 0.0, bi});
    std::vector<double> carry = logits(bi.values());
    double carry_mu = 0.0;

    for (std::size_t idx : order) {
        const double x = reductions[idx];
        TradeoffPoint& point = out[idx];
        point.reduction = x;
        if (x == 0.0) {
            // Only pbi reaches ln 2, so the feasible set is a single point.
            const std::vector<double> p(bi.values().begin(), bi.values().end());
            point.collision_rate = collision_constant(p).value;
            point.argmin = bi;
            point.constraint_active = true;
            point.constraint_violation = std::max(0.0, throughput_gap(p, 0.0).value);
            continue;
        }

        struct Candidate {
            Solve solve;
            double mu = 0.0;
            double violation = 0.0;
            double stationarity = 0.0;
            int iterations = 0;
        };
        // Augmented Lagrangian on the single inequality, one run per start.
        auto run = [&](std::vector<double> theta, double mu) {
            double rho = 10.0;
            double previous = INFINITY;
            Candidate c;
            for (int outer = 0; outer < 60; ++outer) {
                const Objective phi = [&, mu, rho](const std::vector<double>& p) {
                    Eval f = collision_constant(p);
                    const Eval g = throughput_gap(p, x);
                    const double shifted = std::max(0.0, mu + rho * g.value);
                    f.value += (shifted * shifted - mu * mu) / (2.0 * rho);
                    for (std::size_t j = 0; j < p.size(); ++j) {
                        f.grad[j] += shifted * g.grad[j];
                    }
                    return f;
                };
                c.solve = minimize(phi, theta, options.tol, options.max_iterations);
                c.iterations += c.solve.iterations;
                theta = c.solve.theta;
                const auto p = softmax(theta);
                const double gap = throughput_gap(p, x).value;
                mu = std::max(0.0, mu + rho * gap);
                const double violation = std::max(gap, -mu / rho);
                if (std::abs(violation) > 0.25 * previous) {
                    rho = std::min(rho * 10.0, 1e10);
                }
                previous = std::abs(violation);
                if (std::max(0.0, gap) <= 1e-10 && std::abs(mu * gap) <= 1e-10) {
                    break;
                }
            }
            const auto p = softmax(theta);
            const Eval f = collision_constant(p);
            const Eval g = throughput_gap(p, x);
            std::vector<double> kkt(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) {
                kkt[j] = f.grad[j] + mu * g.grad[j];
            }
            c.solve.value = f.value;
            c.mu = mu;
            c.violation = std::max(0.0, g.value);
            c.stationarity = sup_norm(to_logit_gradient(p, kkt));
            return c;
        };

        const auto starts = starting_points(d, carry, options);
        std::vector<Candidate> results(starts.size());
        for_each_parallel(starts.size(), options.threads,
                          [&](std::size_t i) { results[i] = run(starts[i], i == 0 ? carry_mu : 0.0); });
        const auto best = std::min_element(results.begin(), results.end(), [](const Candidate& a, const Candidate& b) {
            const bool fa = a.violation <= 1e-8, fb = b.violation <= 1e-8;
            if (fa != fb) {
                return fa;
            }
            return a.solve.value < b.solve.value;
        });
        if (best->violation > 1e-8) {
            throw NonConvergent("no start met the throughput constraint at x = " + std::to_string(x));
        }
        carry = best->solve.theta;
        carry_mu = best->mu;
        point.collision_rate = best->solve.value;
        point.argmin = as_distribution(best->solve.theta);
        point.constraint_violation = best->violation;
        point.stationarity = best->stationarity;
        point.multiplier = best->mu;
        point.constraint_active = best->mu > 0.0;
        point.solver_iterations = best->iterations;
    }
    return out;
}

}  // namespace sicta
