#include "erwd/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "erwd/bounds.hpp"
#include "erwd/coupling.hpp"
#include "erwd/errors.hpp"
#include "erwd/estimator.hpp"
#include "erwd/expansion.hpp"
#include "erwd/greens.hpp"
#include "erwd/parallel.hpp"
#include "erwd/rng.hpp"
#include "erwd/three_step.hpp"

namespace erwd {

const char* library_version() { return ERWD_VERSION; }

namespace {

using json = nlohmann::ordered_json;

/// Raised for malformed configs and unsupported flag combinations.
class UsageError : public Error {
public:
    using Error::Error;
};

struct Output {
    std::string body;
    std::string extension;
};

std::string format_of(const json& config) { return config.at("format").get<std::string>(); }

void require_format(const json& config, std::initializer_list<const char*> allowed) {
    const std::string f = format_of(config);
    for (const char* a : allowed) {
        if (f == a) return;
    }
    throw UsageError("format '" + f + "' is not available for " + config.at("command").get<std::string>());
}

/// Comment lines that open every CSV and text output.
std::string comment_header(const json& config) {
    return "# erwd " + std::string(library_version()) + "\n# config: " + config.dump() + "\n";
}

Output json_output(const json& config, json result) {
    json doc;
    doc["tool"] = "erwd";
    doc["version"] = library_version();
    doc["config"] = config;
    doc["result"] = std::move(result);
    return {doc.dump(2) + "\n", "json"};
}

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

json estimate_json(const VelocityEstimate& e) {
    return {{"v1_hat", e.v1_hat},        {"stderr", e.std_error}, {"n_walks", e.n_walks},
            {"n_steps", e.n_steps},      {"verdict", to_string(e.verdict)}, {"seed", e.seed},
            {"z", e.z}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

WalkParams params_of(const json& c) {
    return WalkParams(c.at("d").get<int>(), c.at("beta").get<double>(), c.at("mu").get<double>());
}

// ---------------------------------------------------------------- simulate

Output cmd_simulate(const json& c, int workers) {
    require_format(c, {"json", "csv"});
    const auto e = estimate_velocity(params_of(c), c.at("walks").get<std::int64_t>(), c.at("steps").get<std::int64_t>(),
                                     c.at("seed").get<std::uint64_t>(), workers, c.at("z").get<double>());
    if (format_of(c) == "json") return json_output(c, estimate_json(e));
    PhaseGrid g{c.at("d").get<int>(), {c.at("beta").get<double>()}, {c.at("mu").get<double>()}, {e}};
    std::ostringstream os;
    os << comment_header(c);
    write_phase_csv(g, os);
    return {os.str(), "csv"};
}

// ---------------------------------------------------------------- sweep

Output cmd_sweep(const json& c, int workers) {
    require_format(c, {"csv", "json"});
    const auto grid = phase_sweep(c.at("d").get<int>(), unit_grid(c.at("beta_points").get<int>()),
                                  unit_grid(c.at("mu_points").get<int>()), c.at("walks").get<std::int64_t>(),
                                  c.at("steps").get<std::int64_t>(), c.at("seed").get<std::uint64_t>(), workers,
                                  c.at("z").get<double>());
    if (format_of(c) == "csv") {
        std::ostringstream os;
        os << comment_header(c);
        write_phase_csv(grid, os);
        return {os.str(), "csv"};
    }
    json cells = json::array();
    for (std::size_t im = 0; im < grid.mu_grid.size(); ++im) {
        for (std::size_t ib = 0; ib < grid.beta_grid.size(); ++ib) {
            json cell = estimate_json(grid.at(ib, im));
            cell["beta"] = grid.beta_grid[ib];
            cell["mu"] = grid.mu_grid[im];
            cells.push_back(std::move(cell));
        }
    }
    return json_output(c, {{"d", grid.d}, {"beta_grid", grid.beta_grid}, {"mu_grid", grid.mu_grid}, {"cells", cells}});
}

// ---------------------------------------------------------------- greens

Output cmd_greens(const json& c, int) {
    require_format(c, {"json", "csv"});
    const int d = c.at("d").get<int>();
    const int n = c.at("n").get<int>();
    const std::string method = c.at("method").get<std::string>();
    if (!greens_finite(d, n)) {
        throw DivergenceError("G_d^{*n} diverges for d <= 2n (d = " + std::to_string(d) + ", n = " + std::to_string(n) + ")");
    }
    json result{{"d", d}, {"n", n}};
    std::optional<double> best;
    if (method == "integral" || method == "both") {
        const auto g = greens_power_integral(d, n);
        result["integral"] = {{"value", g.value}, {"error_estimate", g.error_estimate}};
        best = g.value;
    }
    if (method == "series" || method == "both") {
        const auto s = greens_power_series(d, n, c.at("K").get<int>(), c.at("target").get<double>());
        result["series"] = {{"K", s.K},
                            {"value", s.value()},
                            {"partial_sum", s.value_lower},
                            {"tail_estimate", s.tail_estimate},
                            {"upper", s.upper()}};
        if (!best) best = s.value();
    }
    if (result.contains("integral") && result.contains("series")) {
        result["method_difference"] = std::abs(result["integral"]["value"].get<double>() - result["series"]["value"].get<double>());
    }
    const auto published = GreensTable::published();
    if (published.contains(d, n)) {
        const double bound = published.value(d, n);
        result["published_bound"] = bound;
        result["within_published_bound"] = *best <= bound + 1e-6;
    } else {
        result["published_bound"] = nullptr;
    }
    if (format_of(c) == "json") return json_output(c, result);

    std::ostringstream os;
    os << comment_header(c) << "d,n,method,value,error\n";
    if (result.contains("integral")) {
        os << d << ',' << n << ",integral," << num(result["integral"]["value"].get<double>()) << ','
           << num(result["integral"]["error_estimate"].get<double>()) << '\n';
    }
    if (result.contains("series")) {
        const double v = result["series"]["value"].get<double>();
        os << d << ',' << n << ",series," << num(v) << ',' << num(result["series"]["upper"].get<double>() - v) << '\n';
    }
    return {os.str(), "csv"};
}

// ---------------------------------------------------------------- bounds

GreensTable table_for(int d, const std::string& source) {
    GreensTable t = d >= 3 ? GreensTable::computed(d - 1, d - 1, 3) : GreensTable{};
    if (source == "published") {
        const auto published = GreensTable::published();
        for (const auto& [key, entry] : published.entries()) t.set(key.first, key.second, entry);
    }
    return t;
}

json verdict_json(const Verdict& v) {
    json j{{"evaluable", v.evaluable}};
    if (v.evaluable) {
        j["value"] = v.value;
        j["margin"] = v.margin;
        j["pass"] = v.pass;
    } else {
        j["note"] = v.note;
    }
    return j;
}

Output cmd_bounds(const json& c, int) {
    require_format(c, {"json", "text"});
    const int d = c.at("d").get<int>();
    const auto table = table_for(d, c.at("greens").get<std::string>());
    const auto r = bound_report(d, c.at("beta").get<double>(), c.at("mu").get<double>(), table);

    json greens_used = json::array();
    for (const auto& [key, e] : table.entries()) {
        if (key.first != d - 1) continue;
        greens_used.push_back({{"d", key.first}, {"n", key.second}, {"value", e.value}, {"method", to_string(e.method)}});
    }
    json result{{"d", d},
                {"beta", r.beta},
                {"mu", r.mu},
                {"greens", greens_used},
                {"E0", optional_json(r.constants.E0)},
                {"E1", optional_json(r.constants.E1)},
                {"a_d", optional_json(r.constants.a_d)},
                {"epsilon", optional_json(r.constants.epsilon)},
                {"pi_total_N1", optional_json(r.pi_total_N1)},
                {"pi_total_tail", optional_json(r.pi_total_tail)}};
    if (r.derivative) {
        result["derivative"] = {{"rho_total", r.derivative->rho_total},
                                {"chi_total", r.derivative->chi_total},
                                {"gamma_total", r.derivative->gamma_total},
                                {"grand_total", r.derivative->grand_total}};
    } else {
        result["derivative"] = nullptr;
    }
    result["certificates"] = {{"two_a_d_below_one", verdict_json(r.certificates.continuity_d6)},
                              {"derivative_total_below_one", verdict_json(r.certificates.monotonicity_d12)},
                              {"positivity_below_one", verdict_json(r.certificates.positivity_d9)}};
    if (format_of(c) == "json") return json_output(c, result);

    std::ostringstream os;
    os << comment_header(c) << std::setprecision(9);
    auto line = [&](const char* name, const std::optional<double>& v) {
        os << name << " = ";
        if (v) {
            os << *v;
        } else {
            os << "undefined";
        }
        os << '\n';
    };
    os << "d = " << d << "\n";
    for (const auto& g : greens_used) {
        os << "G_" << g["d"].get<int>() << "^{*" << g["n"].get<int>() << "} = " << g["value"].get<double>() << " ("
           << g["method"].get<std::string>() << ")\n";
    }
    line("E0", r.constants.E0);
    line("E1", r.constants.E1);
    line("a_d", r.constants.a_d);
    line("epsilon", r.constants.epsilon);
    line("pi_total_N1", r.pi_total_N1);
    line("pi_total_tail", r.pi_total_tail);
    if (r.derivative) {
        os << "rho_total = " << r.derivative->rho_total << "\n"
           << "chi_total = " << r.derivative->chi_total << "\n"
           << "gamma_total = " << r.derivative->gamma_total << "\n"
           << "grand_total = " << r.derivative->grand_total << "\n";
    }
    auto cert = [&](const char* name, const Verdict& v) {
        os << name << ": ";
        if (!v.evaluable) {
            os << "not evaluable (" << v.note << ")\n";
            return;
        }
        os << (v.pass ? "PASS" : "FAIL") << " value = " << v.value << " margin = " << v.margin << "\n";
    };
    cert("certificate 2 a_d < 1", r.certificates.continuity_d6);
    cert("certificate derivative grand_total < 1", r.certificates.monotonicity_d12);
    cert("certificate positivity expression < 1", r.certificates.positivity_d9);
    return {os.str(), "txt"};
}

// ---------------------------------------------------------------- find-beta0

Output cmd_find_beta0(const json& c, int workers) {
    require_format(c, {"json"});
    RootBudget b;
    b.base_walks = c.at("walks").get<std::int64_t>();
    b.base_steps = c.at("steps").get<std::int64_t>();
    b.max_multiplier = c.at("max_multiplier").get<int>();
    b.z = c.at("z").get<double>();
    const auto r = find_beta0(c.at("d").get<int>(), c.at("mu").get<double>(), c.at("width").get<double>(), b,
                              c.at("seed").get<std::uint64_t>(), workers);
    json evals = json::array();
    for (const auto& e : r.evaluations) {
        json j = estimate_json(e.estimate);
        j["beta"] = e.beta;
        evals.push_back(std::move(j));
    }
    json result{{"d", r.d}, {"mu", r.mu}, {"found", r.found}};
    result["beta0_interval"] = r.found ? json::array({r.lo, r.hi}) : json(nullptr);
    result["width"] = r.found ? json(r.width()) : json(nullptr);
    result["confidence_note"] = r.confidence_note;
    result["evaluations"] = evals;
    return json_output(c, result);
}

// ---------------------------------------------------------------- enumerate

json law_json(const ThreeStepLaw<Rational>& law) {
    json probs = json::object();
    for (int k = -3; k <= 3; ++k) {
        probs[std::to_string(k)] = {{"exact", law.prob(k).str()}, {"value", static_cast<double>(law.prob(k))}};
    }
    return {{"probs", probs}, {"mean_exact", law.mean.str()}, {"mean", static_cast<double>(law.mean)}};
}

Output cmd_enumerate(const json& c, int) {
    require_format(c, {"json", "csv"});
    const WalkParams p = params_of(c);
    const int d = p.d();
    if (c.at("three_step").get<bool>()) {
        require_format(c, {"json"});
        const auto kp = exact_kernel_params(p);
        const CookieField empty(d, 8);
        const CookieView view(empty);
        const auto closed = three_step_distribution(kp, view);
        const auto brute = brute_force_three_step(kp, view);
        const Rational cube = Rational(2 * d) * Rational(2 * d) * Rational(2 * d);
        json result{{"d", d},
                    {"closed_form", law_json(closed)},
                    {"brute_force", law_json(brute)},
                    {"identical", closed.probs == brute.probs},
                    {"scaled_mean_exact", Rational(cube * closed.mean).str()}};
        return json_output(c, result);
    }

    const int m = c.at("m").get<int>();
    const int N = c.at("N").get<int>();
    const double budget = c.at("work_units").get<double>();
    json rows = json::array();
    double abs_sum = 0.0;
    double drift_sum = 0.0;
    for (int mm = N + 1; mm <= m; ++mm) {
        const auto pi = expansion_coefficient(p, mm, N, budget);
        abs_sum += pi.abs_total;
        drift_sum += pi.signed_drift;
        rows.push_back({{"m", mm},
                        {"abs_total", pi.abs_total},
                        {"signed_drift", pi.signed_drift},
                        {"support", pi.value_by_displacement.size()},
                        {"work_units", enumeration_cost(d, mm, N)}});
    }
    json bound = nullptr;
    try {
        const auto table = table_for(d, "computed");
        bound = pi_bound_for_order(d, p.beta() + p.mu(), N, table);
    } catch (const DomainError&) {
    }
    if (format_of(c) == "csv") {
        std::ostringstream os;
        os << comment_header(c) << "d,beta,mu,N,m,abs_total,signed_drift,cumulative_abs,bound\n";
        double cum = 0.0;
        for (const auto& r : rows) {
            cum += r["abs_total"].get<double>();
            os << d << ',' << num(p.beta()) << ',' << num(p.mu()) << ',' << N << ',' << r["m"].get<int>() << ','
               << num(r["abs_total"].get<double>()) << ',' << num(r["signed_drift"].get<double>()) << ',' << num(cum)
               << ',' << (bound.is_null() ? std::string() : num(bound.get<double>())) << '\n';
        }
        return {os.str(), "csv"};
    }
    json result{{"d", d}, {"beta", p.beta()}, {"mu", p.mu()}, {"N", N}, {"m_max", m}, {"coefficients", rows},
                {"abs_total_sum", abs_sum}, {"signed_drift_sum", drift_sum}, {"order_bound", bound}};
    result["within_bound"] = bound.is_null() ? json(nullptr) : json(abs_sum <= bound.get<double>());
    return json_output(c, result);
}

// ---------------------------------------------------------------- couple

Output cmd_couple(const json& c, int workers) {
    require_format(c, {"json"});
    const WalkParams p = params_of(c);
    const int runs = c.at("runs").get<int>();
    const int blocks = c.at("blocks").get<int>();
    const auto seed = c.at("seed").get<std::uint64_t>();
    if (runs < 1 || blocks < 1) throw DomainError("runs and blocks must be >= 1");

    struct RunSummary {
        bool dominated;
        std::int64_t min_gap;
        std::int64_t final_gap;
        std::int64_t nu_sum;
        std::int64_t omega_sum;
    };
    std::vector<RunSummary> summaries(static_cast<std::size_t>(runs));
    parallel_for(static_cast<std::size_t>(runs), workers, [&](std::size_t i, int) {
        const auto pair = run_coupled(p, blocks, derive_seed(seed, i));
        RunSummary s{pair.dominated(), 0, pair.gaps.back(), 0, 0};
        s.min_gap = *std::min_element(pair.gaps.begin(), pair.gaps.end());
        for (int x : pair.nu_blocks) s.nu_sum += x;
        for (int x : pair.omega_blocks) s.omega_sum += x;
        summaries[i] = s;
    });
    int dominated = 0;
    std::int64_t min_gap = summaries.front().min_gap;
    std::int64_t nu_total = 0;
    std::int64_t omega_total = 0;
    double gap_total = 0.0;
    for (const auto& s : summaries) {
        dominated += s.dominated ? 1 : 0;
        min_gap = std::min(min_gap, s.min_gap);
        nu_total += s.nu_sum;
        omega_total += s.omega_sum;
        gap_total += static_cast<double>(s.final_gap);
    }
    const double n_blocks_total = static_cast<double>(runs) * blocks;
    const auto exact = full_cookie_law(exact_kernel_params(p));
    json result{{"d", p.d()},
                {"beta", p.beta()},
                {"mu", p.mu()},
                {"runs", runs},
                {"blocks", blocks},
                {"dominated_runs", dominated},
                {"all_dominated", dominated == runs},
                {"min_gap", min_gap},
                {"mean_final_gap", gap_total / runs},
                {"nu_block_mean", static_cast<double>(nu_total) / n_blocks_total},
                {"nu_block_mean_exact", static_cast<double>(exact.mean)},
                {"omega_block_mean", static_cast<double>(omega_total) / n_blocks_total}};
    if (p.mu() > 0.0 && p.d() >= 2) {
        result["beta_star"] = beta_star_bound(p.d(), p.mu());
    } else {
        result["beta_star"] = nullptr;
    }
    return json_output(c, result);
}

// ---------------------------------------------------------------- dispatch

Output execute(const json& config, int workers) {
    const std::string cmd = config.at("command").get<std::string>();
    if (cmd == "simulate") return cmd_simulate(config, workers);
    if (cmd == "sweep") return cmd_sweep(config, workers);
    if (cmd == "greens") return cmd_greens(config, workers);
    if (cmd == "bounds") return cmd_bounds(config, workers);
    if (cmd == "find-beta0") return cmd_find_beta0(config, workers);
    if (cmd == "enumerate") return cmd_enumerate(config, workers);
    if (cmd == "couple") return cmd_couple(config, workers);
    throw UsageError("unknown command '" + cmd + "' in config");
}

/// Recovers the config recorded in a previous output.
json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const json doc = json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.contains("config")) throw UsageError(path + " has no recorded config");
        return doc["config"];
    }
    std::istringstream lines(text);
    std::string line;
    const std::string tag = "# config: ";
    while (std::getline(lines, line)) {
        if (line.rfind(tag, 0) == 0) {
            const json c = json::parse(line.substr(tag.size()), nullptr, false);
            if (c.is_discarded()) break;
            return c;
        }
    }
    throw UsageError(path + " has no recorded config");
}

void emit(const Output& o, const std::string& command, const std::string& out_path, std::ostream& out,
          std::ostream& err) {
    std::string path = out_path;
    if (path.empty()) {
        if (const char* dir = std::getenv("ERWD_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
            std::filesystem::create_directories(dir);
            path = (std::filesystem::path(dir) / (command + "." + o.extension)).string();
        }
    }
    if (path.empty()) {
        out << o.body;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << o.body;
    if (!f) throw Error("write failed for " + path);
    err << "wrote " << path << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Excited random walk with opposing drifts: simulation, enumeration and bounds", "erwd"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version()));

    std::string out_path;
    int workers = 0;
    std::string budget = "quick";
    std::string format;
    auto common = [&](CLI::App* sub, const char* default_format, std::vector<std::string> formats, bool budgeted) {
        sub->add_option("--out", out_path, "Output file");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember(formats))->default_str(default_format);
        if (budgeted) {
            sub->add_option("--budget", budget, "quick (demo scale) or full (1000 walks x 7000 steps)")
                ->check(CLI::IsMember({"quick", "full"}));
        }
    };
    auto with_workers = [&](CLI::App* sub) {
        sub->add_option("--workers", workers, "Worker threads (0 = one per hardware thread)")
            ->check(CLI::NonNegativeNumber);
    };

    int d = 0;
    double beta = 0.0;
    double mu = 0.0;
    std::uint64_t seed = 1;
    double z = kDefaultZ;
    std::optional<std::int64_t> walks;
    std::optional<std::int64_t> steps;

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo velocity estimate");
    simulate->add_option("--d", d, "Dimension")->required();
    simulate->add_option("--beta", beta, "Drift on first visits, in [0,1]");
    simulate->add_option("--mu", mu, "Drift on later visits, in [0,1]");
    simulate->add_option("--walks", walks, "Number of walks");
    simulate->add_option("--steps", steps, "Steps per walk");
    simulate->add_option("--seed", seed, "Seed");
    simulate->add_option("--z", z, "Sign threshold in standard errors");
    common(simulate, "json", {"json", "csv"}, true);
    with_workers(simulate);

    int beta_points = 21;
    int mu_points = 21;
    auto* sweep = app.add_subcommand("sweep", "Sign of the velocity over a (beta, mu) grid");
    sweep->add_option("--d", d, "Dimension")->required();
    sweep->add_option("--beta-points", beta_points, "Grid points in beta")->check(CLI::Range(2, 1001));
    sweep->add_option("--mu-points", mu_points, "Grid points in mu")->check(CLI::Range(2, 1001));
    sweep->add_option("--walks", walks, "Walks per cell");
    sweep->add_option("--steps", steps, "Steps per walk");
    sweep->add_option("--seed", seed, "Base seed");
    sweep->add_option("--z", z, "Sign threshold in standard errors");
    common(sweep, "csv", {"csv", "json"}, true);
    with_workers(sweep);

    int n = 1;
    int K = 10000;
    double target = 1e-6;
    std::string method = "both";
    auto* greens = app.add_subcommand("greens", "Green's function convolution power G_d^{*n}(0)");
    greens->add_option("--d", d, "Dimension")->required();
    greens->add_option("--n", n, "Convolution power")->check(CLI::PositiveNumber);
    greens->add_option("--method", method, "integral, series or both")
        ->check(CLI::IsMember({"integral", "series", "both"}));
    greens->add_option("--K", K, "Series truncation");
    greens->add_option("--target", target, "Series tail uncertainty target");
    common(greens, "json", {"json", "csv"}, false);

    std::string greens_source = "computed";
    double bounds_beta = 1.0;
    double bounds_mu = 1.0;
    auto* bounds = app.add_subcommand("bounds", "Structural constants, coefficient bounds and certificates");
    bounds->add_option("--d", d, "Dimension")->required();
    bounds->add_option("--beta", bounds_beta, "beta for the coefficient bounds");
    bounds->add_option("--mu", bounds_mu, "mu for the coefficient bounds");
    bounds->add_option("--greens", greens_source, "computed or published Green's values")
        ->check(CLI::IsMember({"computed", "published"}));
    common(bounds, "text", {"text", "json"}, false);

    double width = 0.05;
    std::optional<int> max_multiplier;
    auto* find = app.add_subcommand("find-beta0", "Bracket the zero of the velocity in beta");
    find->add_option("--d", d, "Dimension")->required();
    find->add_option("--mu", mu, "mu in (0,1]")->required();
    find->add_option("--width", width, "Target interval width (>= 0.005)");
    find->add_option("--walks", walks, "Base walks per point");
    find->add_option("--steps", steps, "Steps per walk");
    find->add_option("--max-multiplier", max_multiplier, "Largest multiple of the base walks per point");
    find->add_option("--seed", seed, "Seed");
    find->add_option("--z", z, "Sign threshold in standard errors");
    common(find, "json", {"json"}, true);
    with_workers(find);

    int m = 5;
    int order = 1;
    double work_units = kDefaultEnumerationBudget;
    bool three_step = false;
    double enum_beta = 1.0;
    double enum_mu = 1.0;
    auto* enumerate = app.add_subcommand("enumerate", "Exact expansion coefficients or three-step law");
    enumerate->add_option("--d", d, "Dimension")->required();
    enumerate->add_option("--beta", enum_beta, "beta");
    enumerate->add_option("--mu", enum_mu, "mu");
    enumerate->add_option("--m", m, "Largest length index");
    enumerate->add_option("--N", order, "Expansion order")->check(CLI::PositiveNumber);
    enumerate->add_option("--work-units", work_units, "Enumeration budget");
    enumerate->add_flag("--three-step", three_step, "Print the exact three-step law with all cookies present");
    common(enumerate, "json", {"json", "csv"}, false);

    std::optional<int> runs;
    int blocks = 100;
    auto* couple = app.add_subcommand("couple", "Coupled walk and block comparison walk");
    couple->add_option("--d", d, "Dimension")->required();
    couple->add_option("--beta", beta, "beta");
    couple->add_option("--mu", mu, "mu");
    couple->add_option("--runs", runs, "Number of coupled runs");
    couple->add_option("--blocks", blocks, "Three-step blocks per run");
    couple->add_option("--seed", seed, "Base seed");
    common(couple, "json", {"json"}, true);
    with_workers(couple);

    std::string replay_file;
    auto* replay = app.add_subcommand("replay", "Re-run the config recorded in an earlier output");
    replay->add_option("file", replay_file, "Output file of an earlier run")->required();
    replay->add_option("--out", out_path, "Output file");
    with_workers(replay);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto fmt_or = [&](const char* dflt) { return format.empty() ? std::string(dflt) : format; };
    const bool full = budget == "full";
    json config;
    std::string command;
    try {
        if (simulate->parsed()) {
            command = "simulate";
            config = {{"command", command}, {"d", d}, {"beta", beta}, {"mu", mu},
                      {"walks", walks.value_or(full ? 1000 : 200)}, {"steps", steps.value_or(full ? 7000 : 2000)},
                      {"seed", seed}, {"z", z}, {"budget", budget}, {"format", fmt_or("json")}};
        } else if (sweep->parsed()) {
            command = "sweep";
            config = {{"command", command}, {"d", d}, {"beta_points", beta_points}, {"mu_points", mu_points},
                      {"walks", walks.value_or(full ? 1000 : 100)}, {"steps", steps.value_or(full ? 7000 : 1000)},
                      {"seed", seed}, {"z", z}, {"budget", budget}, {"format", fmt_or("csv")}};
        } else if (greens->parsed()) {
            command = "greens";
            config = {{"command", command}, {"d", d}, {"n", n}, {"method", method}, {"K", K},
                      {"target", target}, {"format", fmt_or("json")}};
        } else if (bounds->parsed()) {
            command = "bounds";
            config = {{"command", command}, {"d", d}, {"beta", bounds_beta}, {"mu", bounds_mu},
                      {"greens", greens_source}, {"format", fmt_or("text")}};
        } else if (find->parsed()) {
            command = "find-beta0";
            const RootBudget standard;
            config = {{"command", command}, {"d", d}, {"mu", mu}, {"width", width},
                      {"walks", walks.value_or(full ? standard.base_walks : 200)},
                      {"steps", steps.value_or(full ? standard.base_steps : 2000)},
                      {"max_multiplier", max_multiplier.value_or(full ? standard.max_multiplier : 16)},
                      {"seed", seed}, {"z", z}, {"budget", budget}, {"format", fmt_or("json")}};
        } else if (enumerate->parsed()) {
            command = "enumerate";
            config = {{"command", command}, {"d", d}, {"beta", enum_beta}, {"mu", enum_mu}, {"m", m},
                      {"N", order}, {"work_units", work_units}, {"three_step", three_step},
                      {"format", fmt_or("json")}};
        } else if (couple->parsed()) {
            command = "couple";
            config = {{"command", command}, {"d", d}, {"beta", beta}, {"mu", mu},
                      {"runs", runs.value_or(full ? 10000 : 200)}, {"blocks", blocks}, {"seed", seed},
                      {"budget", budget}, {"format", fmt_or("json")}};
        } else if (replay->parsed()) {
            config = load_config(replay_file);
            command = config.at("command").get<std::string>();
        }
        emit(execute(config, workers), command, out_path, out, err);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "usage error: malformed config: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const BudgetError& e) {
        err << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return kExitAccuracy;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace erwd
