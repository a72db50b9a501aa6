#include "sicta/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "sicta/asymptotics.hpp"
#include "sicta/closed_form.hpp"
#include "sicta/delay.hpp"
#include "sicta/errors.hpp"
#include "sicta/montecarlo.hpp"
#include "sicta/optimize.hpp"
#include "sicta/oracle.hpp"

namespace sicta {

namespace {

using Json = nlohmann::ordered_json;

// Shortest text that reads back to the same double.
std::string num(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json json_num(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            text_ << (i ? "," : "") << csv_field(cells[i]);
        }
        text_ << '\n';
    }
    std::string str() const { return text_.str(); }

private:
    std::ostringstream text_;
};

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            if (colon == std::string::npos) {
                out.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, colon));
                const int hi = std::stoi(item.substr(colon + 1));
                if (hi < lo) {
                    throw InvalidArgument("empty range " + item);
                }
                for (int n = lo; n <= hi; ++n) {
                    out.push_back(n);
                }
            }
        } catch (const std::logic_error&) {
            throw InvalidArgument("expected integers or a:b ranges, got '" + item + "'");
        }
    }
    if (out.empty()) {
        throw InvalidArgument("empty integer list");
    }
    return out;
}

std::vector<Observable> parse_observables(const std::vector<std::string>& names)
{
    std::vector<Observable> out;
    for (const auto& name : names) {
        out.push_back(parse_observable(name));
    }
    return out;
}

std::string short_name(Observable o)
{
    static const char* names[] = {"L", "C", "S", "I"};
    return names[static_cast<int>(o)];
}

constexpr Observable kAll[] = {Observable::Length, Observable::Collisions, Observable::Successes, Observable::Idle};

// One emitted file: its path (empty for the primary output on stdout) and text.
struct Artifact {
    std::string path;
    std::string text;
};

struct Result {
    Artifact primary;
    std::vector<Artifact> extra;
    std::string arithmetic_mode = "binary64";
    Json seeds = Json::array();
    int exit_code = kExitOk;
};

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InvalidArgument("cannot open '" + path + "' for writing");
    }
    f << text;
}

Json parameters(const CLI::App& sub)
{
    Json p = Json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") {
            continue;
        }
        const auto& name = opt->get_lnames().front();
        if (opt->get_type_size() == 0) {
            p[name] = opt->count() > 0;
        } else if (opt->count() > 0) {
            const auto& r = opt->results();
            p[name] = r.size() == 1 ? Json(r.front()) : Json(r);
        } else if (!opt->get_default_str().empty()) {
            p[name] = opt->get_default_str();
        }
    }
    return p;
}

bool is_usage_error(const Error& e)
{
    return e.kind() == "InvalidArgument" || e.kind() == "RejectedDistribution";
}

// ---- subcommands -------------------------------------------------------

struct Common {
    std::string out;
    int threads = 1;
};

Result run_closed(const std::string& dist_text, const std::vector<std::string>& obs_names, const std::string& n_text,
                  const std::string& mode_text, bool literal)
{
    const auto dist = parse_distribution(dist_text);
    const auto ns = parse_int_list(n_text);
    ClosedFormOptions options;
    options.paper_literal = literal;
    if (mode_text == "rational") {
        options.mode = ArithmeticMode::Rational;
    } else if (mode_text == "high-precision") {
        options.mode = ArithmeticMode::HighPrecision;
    }
    const auto obs = parse_observables(obs_names);
    std::vector<std::string> header{"n", "value", "value_exact"};
    if (obs.size() > 1) {
        header.insert(header.begin(), "observable");
    }
    Csv csv(header);
    bool any_hp = false, any_rational = false;
    for (Observable o : obs) {
        for (int n : ns) {
            const auto v = closed_form(dist, o, n, options);
            std::vector<std::string> cells{std::to_string(n), v.value.to_string(20), v.exact ? to_string(*v.exact) : ""};
            if (obs.size() > 1) {
                cells.insert(cells.begin(), short_name(o));
            }
            csv.row(cells);
            (v.exact ? any_rational : any_hp) = true;
        }
    }
    Result r;
    r.primary.text = csv.str();
    r.arithmetic_mode = any_hp ? (any_rational ? "mixed" : "high-precision") : "rational";
    return r;
}

Result run_exact(const std::string& dist_text, int n_max, std::optional<int> law_n, int j_max)
{
    const auto dist = parse_distribution(dist_text);
    Result r;
    r.arithmetic_mode = "rational";
    if (law_n) {
        const auto law = exact_cri_distribution(dist, *law_n, j_max);
        Csv csv({"j", "probability", "probability_exact"});
        for (std::size_t j = 0; j < law.probs.size(); ++j) {
            csv.row({std::to_string(j), num(to_double(law.probs[j])), to_string(law.probs[j])});
        }
        csv.row({">" + std::to_string(j_max), num(to_double(law.residual)), to_string(law.residual)});
        r.primary.text = csv.str();
        return r;
    }
    const auto table = exact_expectations(dist, n_max);
    Csv csv({"n", "L", "L_exact", "C", "C_exact", "S", "S_exact", "I", "I_exact"});
    for (int n = 0; n <= n_max; ++n) {
        std::vector<std::string> cells{std::to_string(n)};
        for (const auto* seq : {&table.L, &table.C, &table.S, &table.I}) {
            const Rational& q = (*seq)[static_cast<std::size_t>(n)];
            cells.push_back(num(to_double(q)));
            cells.push_back(to_string(q));
        }
        csv.row(cells);
    }
    r.primary.text = csv.str();
    return r;
}

Result run_asymptotic(const std::string& dist_text, const std::vector<std::string>& obs_names,
                      const std::string& n_text, int m_max, bool literal)
{
    const auto dist = parse_distribution(dist_text);
    const auto ns = n_text.empty() ? std::vector<int>{} : parse_int_list(n_text);
    Csv csv({"observable", "leading", "n", "g_n", "tail_bound"});
    for (Observable o : parse_observables(obs_names)) {
        const std::string leading = num(leading_term(dist, o, literal));
        if (ns.empty()) {
            csv.row({short_name(o), leading, "", "", ""});
        }
        for (int n : ns) {
            OscillationOptions options;
            options.m_max = m_max;
            const auto a = oscillation(dist, o, n, options);
            csv.row({short_name(o), leading, std::to_string(n), num(a.oscillation), num(a.tail_bound)});
        }
    }
    Result r;
    r.primary.text = csv.str();
    return r;
}

std::string histogram_csv(const std::map<long, double>& histogram)
{
    Csv csv({"length", "frequency"});
    for (const auto& [len, f] : histogram) {
        csv.row({std::to_string(len), num(f)});
    }
    return csv.str();
}

Json histogram_json(const std::map<long, double>& histogram)
{
    Json h = Json::object();
    for (const auto& [len, f] : histogram) {
        h[std::to_string(len)] = f;
    }
    return h;
}

Result run_simulate(const std::string& dist_text, int n, long runs, std::uint64_t seed, int threads,
                    const std::string& histogram_path)
{
    SimulationConfig config{parse_distribution(dist_text)};
    config.n = n;
    config.runs = runs;
    config.seed = seed;
    config.threads = threads;
    const auto stats = monte_carlo_means(config);
    std::map<long, double> histogram;
    for (long l : sample_cri_lengths(config.dist, n, runs, seed)) {
        histogram[l] += 1.0 / static_cast<double>(runs);
    }
    Json means = Json::object(), errors = Json::object(), variances = Json::object();
    for (Observable o : kAll) {
        means[short_name(o)] = stats.at(o).mean;
        errors[short_name(o)] = json_num(stats.at(o).standard_error);
        variances[short_name(o)] = stats.at(o).variance;
    }
    Json j = {{"n", n},         {"runs", runs},
              {"seed", seed},   {"means", means},
              {"variances", variances}, {"standard_errors", errors},
              {"histogram", histogram_json(histogram)}};
    Result r;
    r.primary.text = j.dump(2) + "\n";
    r.seeds.push_back(seed);
    if (!histogram_path.empty()) {
        r.extra.push_back({histogram_path, histogram_csv(histogram)});
    }
    return r;
}

Result run_simulate_gated(const std::string& dist_text, double lambda, long cris, long warmup, int batches,
                          long backlog_cap, std::uint64_t seed, const std::string& histogram_path)
{
    SimulationConfig config{parse_distribution(dist_text)};
    config.lambda = lambda;
    config.horizon_cri = warmup + cris;
    config.warmup_cri = warmup;
    config.batches = batches;
    config.backlog_cap = backlog_cap;
    config.seed = seed;
    const auto sim = simulate_gated_system(config);
    Json means = {{"total_delay", json_num(sim.delay.mean_total)},
                  {"wait", json_num(sim.delay.mean_wait)},
                  {"resolution", json_num(sim.delay.mean_resolution)},
                  {"cri_length", sim.cri_length.mean}};
    Json errors = {{"total_delay", json_num(sim.delay.standard_error_total)},
                   {"cri_length", json_num(sim.cri_length.standard_error)}};
    Json j = {{"lambda", lambda},
              {"cris", cris},
              {"warmup", warmup},
              {"seed", seed},
              {"packets", sim.delay.t2.size()},
              {"means", means},
              {"standard_errors", errors},
              {"histogram", histogram_json(sim.delay.histogram)}};
    Result r;
    r.primary.text = j.dump(2) + "\n";
    r.seeds.push_back(seed);
    if (!histogram_path.empty()) {
        r.extra.push_back({histogram_path, histogram_csv(sim.delay.histogram)});
    }
    return r;
}

Json probabilities(const SplitDistribution& dist)
{
    return Json(std::vector<double>(dist.values().begin(), dist.values().end()));
}

Result run_optimize(int d, const std::string& init_text, const OptimizeOptions& options)
{
    std::optional<SplitDistribution> init;
    if (!init_text.empty()) {
        init = parse_distribution(init_text);
    }
    const auto opt = maximize_throughput(d, init, options);
    Json j = {{"d", d},
              {"argmin", probabilities(opt.dist)},
              {"value", opt.value},
              {"throughput", opt.throughput},
              {"stationarity", opt.stationarity},
              {"iterations", opt.iterations},
              {"lagrange_conditions", verify_lagrange_conditions(opt.dist, 1e-6)}};
    Result r;
    r.primary.text = j.dump(2) + "\n";
    r.seeds.push_back(options.seed);
    return r;
}

Result run_tradeoff(int d, int grid, const std::vector<double>& xs_given, const OptimizeOptions& options)
{
    std::vector<double> xs = xs_given;
    if (xs.empty()) {
        if (grid < 1) {
            throw InvalidArgument("--grid must be at least 1");
        }
        for (int i = 0; i <= grid; ++i) {
            xs.push_back(static_cast<double>(i) / (2.0 * grid));
        }
    }
    const auto curve = tradeoff_curve(d, xs, options);
    std::vector<std::string> header{"x", "collision_rate"};
    for (int j = 1; j <= d; ++j) {
        header.push_back("p_" + std::to_string(j));
    }
    Csv csv(header);
    for (const auto& point : curve) {
        std::vector<std::string> cells{num(point.reduction), num(point.collision_rate)};
        for (double p : point.argmin.values()) {
            cells.push_back(num(p));
        }
        csv.row(cells);
    }
    Result r;
    r.primary.text = csv.str();
    r.seeds.push_back(options.seed);
    return r;
}

Result run_delay(const std::string& dist_text, double lambda, std::optional<int> i_max, std::optional<int> j_max,
                 int max_states, const std::string& pi_path)
{
    const auto dist = parse_distribution(dist_text);
    auto [model, delay] = [&]() -> std::pair<DelayModel, TotalDelay> {
        if (i_max || j_max) {
            const int i = i_max.value_or(j_max.value_or(0));
            const int j = j_max.value_or(i);
            if (!(mst(dist) > lambda)) {
                throw NotStationary("arrival rate is not below the maximum stable throughput");
            }
            auto fixed = stationary_distribution(transition_matrix(dist, lambda, i, j));
            const auto total = mean_total_delay(fixed);
            return {std::move(fixed), total};
        }
        DelayAnalysisOptions options;
        options.max_states = max_states;
        auto analysis = analyze_delay(dist, lambda, options);
        return {std::move(analysis.model), analysis.delay};
    }();
    const double max_deficit =
        model.row_deficit.empty() ? 0.0 : *std::max_element(model.row_deficit.begin() + 1, model.row_deficit.end());
    Json report = {{"i_max", model.i_max},
                   {"j_max", model.j_max},
                   {"weighted_deficit", delay.weighted_deficit},
                   {"max_row_deficit", max_deficit},
                   {"stationary_iterations", model.iterations}};
    Json j = {{"lambda", lambda},
              {"mst", mst(dist)},
              {"stationary_mean_cri", delay.stationary_mean_cri},
              {"mean_total_delay", delay.mean},
              {"mean_wait", delay.mean_wait},
              {"mean_resolution_delay", delay.mean_resolution},
              {"truncation_report", report}};
    Result r;
    r.primary.text = j.dump(2) + "\n";
    r.arithmetic_mode = "binary64 with MPFR delay series";
    if (!pi_path.empty()) {
        Csv csv({"i", "pi", "pi_tagged"});
        for (std::size_t i = 1; i < model.pi.size(); ++i) {
            csv.row({std::to_string(i), num(model.pi[i]), num(model.pi_tagged[i])});
        }
        r.extra.push_back({pi_path, csv.str()});
    }
    return r;
}

Result run_validate(const std::string& dist_text, int n_max, bool literal)
{
    const auto dist = parse_distribution(dist_text);
    const auto table = exact_expectations(dist, n_max);
    ClosedFormOptions options;
    options.mode = ArithmeticMode::Rational;
    options.paper_literal = literal;
    std::vector<std::string> header{"n"};
    for (Observable o : kAll) {
        const auto s = short_name(o);
        header.insert(header.end(), {s + "_oracle", s + "_closed", s + "_abs_diff"});
    }
    Csv csv(header);
    bool mismatch = false;
    for (int n = 0; n <= n_max; ++n) {
        std::vector<std::string> cells{std::to_string(n)};
        for (Observable o : kAll) {
            const std::vector<Rational>* seq[] = {&table.L, &table.C, &table.S, &table.I};
            const Rational& oracle = (*seq[static_cast<int>(o)])[static_cast<std::size_t>(n)];
            const Rational closed = *closed_form(dist, o, n, options).exact;
            const Rational diff = abs(oracle - closed);
            mismatch = mismatch || diff != 0;
            cells.insert(cells.end(), {to_string(oracle), to_string(closed), to_string(diff)});
        }
        csv.row(cells);
    }
    Result r;
    r.primary.text = csv.str();
    r.arithmetic_mode = "rational";
    r.exit_code = mismatch ? kExitValidationFailed : kExitOk;
    return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"SICTA tree random-access observables", "sicta"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kLibraryVersion));

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out, "write the output here (plus FILE.manifest.json) instead of stdout");
        sub->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    };

    std::string dist, n_text, mode = "auto", init, histogram, pi_path;
    std::vector<std::string> obs{"L"};
    bool literal = false;
    int n_max = 10, n = 0, j_max = 30, m_max = 16, d = 2, grid = 10, batches = 50, max_states = 800;
    std::optional<int> law_n, i_max, j_max_opt;
    long runs = 1000, cris = 10000, warmup = 1000, backlog_cap = 100000;
    double lambda = 0.0;
    std::uint64_t seed = 1;
    std::vector<double> xs;
    OptimizeOptions opt;

    auto* closed = app.add_subcommand("closed", "closed-form expectations");
    closed->add_option("--dist", dist, "splitting distribution, e.g. 1/2,1/4,1/4 or pbi:3")->required();
    closed->add_option("--obs", obs, "observables among L, C, S, I")->capture_default_str()->delimiter(',');
    closed->add_option("--n", n_text, "n values: list and a:b ranges, e.g. 0:20,64")->required();
    closed->add_option("--mode", mode, "arithmetic")
        ->check(CLI::IsMember({"auto", "rational", "high-precision"}))
        ->capture_default_str();
    closed->add_flag("--paper-literal", literal, "use the formulas as printed for S and I");

    auto* exact = app.add_subcommand("exact", "exact expectations or CRI-length law by enumeration");
    exact->add_option("--dist", dist, "splitting distribution")->required();
    exact->add_option("--nmax", n_max, "largest n")->capture_default_str();
    exact->add_option("--law-n", law_n, "emit the law of the CRI length for this n instead");
    exact->add_option("--jmax", j_max, "largest length in the law")->capture_default_str();

    auto* asym = app.add_subcommand("asymptotic", "leading constants and oscillations");
    asym->add_option("--dist", dist, "splitting distribution")->required();
    asym->add_option("--obs", obs, "observables among L, C, S, I")->capture_default_str()->delimiter(',');
    asym->add_option("--n", n_text, "n values for the oscillation term");
    asym->add_option("--mmax", m_max, "poles per half-line")->capture_default_str();
    asym->add_flag("--paper-literal", literal, "use the printed successes constant");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo CRIs for a fixed collision size");
    sim->add_option("--dist", dist, "splitting distribution")->required();
    sim->add_option("--n", n, "initial collision size")->required();
    sim->add_option("--runs", runs, "independent CRIs")->capture_default_str();
    sim->add_option("--seed", seed, "master seed")->capture_default_str();
    sim->add_option("--histogram", histogram, "also write the length histogram as CSV");

    auto* gated = app.add_subcommand("simulate-gated", "gated-access system simulation");
    gated->add_option("--dist", dist, "splitting distribution")->required();
    gated->add_option("--lambda", lambda, "arrival rate per slot")->required();
    gated->add_option("--cris", cris, "CRIs after warm-up")->capture_default_str();
    gated->add_option("--warmup", warmup, "discarded CRIs")->capture_default_str();
    gated->add_option("--batches", batches, "batch means for standard errors")->capture_default_str();
    gated->add_option("--backlog-cap", backlog_cap, "collision size treated as divergence")->capture_default_str();
    gated->add_option("--seed", seed, "master seed")->capture_default_str();
    gated->add_option("--histogram", histogram, "also write the CRI-length histogram as CSV");

    auto add_optimizer = [&](CLI::App* sub) {
        sub->add_option("--d", d, "number of branches")->required();
        sub->add_option("--starts", opt.starts, "multi-start count")->capture_default_str();
        sub->add_option("--tol", opt.tol, "gradient tolerance")->capture_default_str();
        sub->add_option("--seed", opt.seed, "seed for the random starts")->capture_default_str();
    };
    auto* optimize = app.add_subcommand("optimize", "throughput-optimal splitting distribution");
    add_optimizer(optimize);
    optimize->add_option("--init", init, "initial distribution");

    auto* tradeoff = app.add_subcommand("tradeoff", "minimal collision rate against throughput loss");
    add_optimizer(tradeoff);
    tradeoff->add_option("--grid", grid, "x = 0, 0.5/k, ..., 0.5")->capture_default_str();
    tradeoff->add_option("--x", xs, "explicit x values in [0, 0.5]")->delimiter(',');

    auto* delay_cmd = app.add_subcommand("delay", "stationary mean delay under gated access");
    delay_cmd->add_option("--dist", dist, "splitting distribution")->required();
    delay_cmd->add_option("--lambda", lambda, "arrival rate per slot")->required();
    delay_cmd->add_option("--imax", i_max, "fixed number of states (disables adaptive growth)");
    delay_cmd->add_option("--jmax", j_max_opt, "fixed largest successor length");
    delay_cmd->add_option("--max-states", max_states, "cap of the adaptive state space")->capture_default_str();
    delay_cmd->add_option("--pi", pi_path, "also write the stationary law as CSV");

    auto* validate = app.add_subcommand("validate", "closed forms against the enumeration oracle");
    validate->add_option("--dist", dist, "splitting distribution")->required();
    validate->add_option("--nmax", n_max, "largest n")->capture_default_str();
    validate->add_flag("--paper-literal", literal, "use the formulas as printed for S and I");

    for (auto* sub : app.get_subcommands({})) {
        add_common(sub);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const auto start = std::chrono::steady_clock::now();
    try {
        opt.threads = common.threads;
        Result r;
        const std::string name = sub->get_name();
        if (name == "closed") {
            r = run_closed(dist, obs, n_text, mode, literal);
        } else if (name == "exact") {
            r = run_exact(dist, n_max, law_n, j_max);
        } else if (name == "asymptotic") {
            r = run_asymptotic(dist, obs, n_text, m_max, literal);
        } else if (name == "simulate") {
            r = run_simulate(dist, n, runs, seed, common.threads, histogram);
        } else if (name == "simulate-gated") {
            r = run_simulate_gated(dist, lambda, cris, warmup, batches, backlog_cap, seed, histogram);
        } else if (name == "optimize") {
            r = run_optimize(d, init, opt);
        } else if (name == "tradeoff") {
            r = run_tradeoff(d, grid, xs, opt);
        } else if (name == "delay") {
            r = run_delay(dist, lambda, i_max, j_max_opt, max_states, pi_path);
        } else {
            r = run_validate(dist, n_max, literal);
        }
        r.primary.path = common.out;

        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        Json outputs = Json::array();
        if (!r.primary.path.empty()) {
            outputs.push_back(r.primary.path);
        }
        for (const auto& a : r.extra) {
            outputs.push_back(a.path);
        }
        Json manifest = {{"subcommand", name},
                         {"arguments", args},
                         {"parameters", parameters(*sub)},
                         {"seeds", r.seeds},
                         {"library_version", kLibraryVersion},
                         {"arithmetic_mode", r.arithmetic_mode},
                         {"outputs", outputs},
                         {"exit_code", r.exit_code},
                         {"wall_clock_seconds", seconds}};
        const std::string manifest_text = manifest.dump(2) + "\n";

        if (r.primary.path.empty()) {
            out << r.primary.text;
        } else {
            write_file(r.primary.path, r.primary.text);
            write_file(r.primary.path + ".manifest.json", manifest_text);
        }
        for (const auto& a : r.extra) {
            write_file(a.path, a.text);
            write_file(a.path + ".manifest.json", manifest_text);
        }
        return r.exit_code;
    } catch (const Error& e) {
        err << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return is_usage_error(e) ? kExitUsage : kExitValidationFailed;
    } catch (const std::exception& e) {
        err << Json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return kExitValidationFailed;
    }
}

int run_cli(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace sicta
