#include "qpbo/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace qpbo {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) known = true;
        if (!known) fail("unknown key \"" + where + "." + item.key() + "\"");
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + " must be a number");
    return v.get<double>();
}

// Positive value, with the string "inf" accepted for an infinite one.
double as_positive_or_inf(const json& v, const std::string& where) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        fail(where + ": the only accepted string is \"inf\"");
    }
    const double x = as_number(v, where);
    if (!(x > 0.0)) fail(where + " must be > 0 or \"inf\"");
    return x;
}

bool as_bool(const json& v, const std::string& where) {
    if (!v.is_boolean()) fail(where + " must be true or false");
    return v.get<bool>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where + " must be an integer");
    return v.get<int>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where + " must be a string");
    return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) fail(where + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_number(e, where + " entry"));
    return out;
}

void parse_basis(const json& j, RunConfig& c) {
    check_keys(j, "basis", {"N", "alpha", "K"});
    if (j.contains("N")) {
        c.dim = as_int(j["N"], "basis.N");
        if (c.dim < 1) fail("basis.N must be >= 1");
    }
    if (j.contains("alpha")) {
        c.alpha = as_number_list(j["alpha"], "basis.alpha");
        for (double a : c.alpha)
            if (!std::isfinite(a)) fail("basis.alpha entries must be finite");
    }
    if (j.contains("K")) {
        c.box_radius = as_int(j["K"], "basis.K");
        if (c.box_radius < 1) fail("basis.K must be >= 1");
    }
}

void parse_initial(const json& j, RunConfig& c) {
    check_keys(j, "initial",
               {"preset", "modes", "decay_s", "support", "amplitude", "mean_zero"});
    if (j.contains("preset")) c.initial.preset = as_string(j["preset"], "initial.preset");
    const std::string& p = c.initial.preset;
    if (p != "two-cosine" && p != "modes" && p != "random")
        fail("initial.preset must be one of \"two-cosine\", \"modes\", \"random\"");
    if (p == "modes") {
        if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty())
            fail("initial.modes must be a non-empty array when preset is \"modes\"");
        for (const auto& m : j["modes"]) {
            if (!m.is_object()) fail("initial.modes entries must be objects");
            check_keys(m, "initial.modes[]", {"k", "re", "im"});
            if (!m.contains("k") || !m["k"].is_array())
                fail("initial.modes[].k must be an integer array");
            Mode mode;
            for (const auto& ki : m["k"])
                mode.k.push_back(as_int(ki, "initial.modes[].k entry"));
            const double re = m.contains("re") ? as_number(m["re"], "initial.modes[].re") : 0.0;
            const double im = m.contains("im") ? as_number(m["im"], "initial.modes[].im") : 0.0;
            mode.amplitude = {re, im};
            c.initial.modes.push_back(std::move(mode));
        }
    }
    if (j.contains("decay_s")) {
        c.initial.decay_s = as_number(j["decay_s"], "initial.decay_s");
        if (!(c.initial.decay_s >= 0.0)) fail("initial.decay_s must be >= 0");
    }
    if (j.contains("support"))
        c.initial.support = as_positive_or_inf(j["support"], "initial.support");
    if (j.contains("amplitude")) {
        c.initial.amplitude = as_number(j["amplitude"], "initial.amplitude");
        if (!(c.initial.amplitude > 0.0)) fail("initial.amplitude must be > 0");
    }
    if (j.contains("mean_zero"))
        c.initial.mean_zero = as_bool(j["mean_zero"], "initial.mean_zero");
}

void parse_flow(const json& j, RunConfig& c) {
    check_keys(j, "flow",
               {"n", "delta", "s", "dt", "t_end", "integrator", "route",
                "enable_nonlinear", "enable_linear"});
    if (j.contains("n")) c.flow.n = as_positive_or_inf(j["n"], "flow.n");
    if (j.contains("delta")) {
        if (j["delta"].is_string()) {
            c.flow.delta = as_positive_or_inf(j["delta"], "flow.delta");
        } else {
            c.flow.delta = as_number(j["delta"], "flow.delta");
            if (c.flow.delta < 0.0)
                fail("flow.delta must be >= 0 (0 disables data regularization)");
        }
    }
    if (j.contains("s")) c.flow.s = as_number(j["s"], "flow.s");
    if (j.contains("dt")) {
        c.flow.dt = as_number(j["dt"], "flow.dt");
        if (!(c.flow.dt > 0.0)) fail("flow.dt must be > 0");
    }
    if (j.contains("t_end")) {
        c.flow.t_end = as_number(j["t_end"], "flow.t_end");
        if (!(c.flow.t_end >= 0.0)) fail("flow.t_end must be >= 0");
    }
    if (j.contains("integrator")) {
        const std::string v = as_string(j["integrator"], "flow.integrator");
        if (v == "rk4")
            c.flow.integrator = Integrator::rk4;
        else if (v == "ifrk4")
            c.flow.integrator = Integrator::ifrk4;
        else
            fail("flow.integrator must be \"rk4\" or \"ifrk4\"");
    }
    if (j.contains("route")) {
        const std::string v = as_string(j["route"], "flow.route");
        if (v == "fft")
            c.flow.route = ConvRoute::fft;
        else if (v == "direct")
            c.flow.route = ConvRoute::direct;
        else if (v == "aliased")
            c.flow.route = ConvRoute::aliased;
        else
            fail("flow.route must be \"fft\", \"direct\", or \"aliased\"");
    }
    if (j.contains("enable_nonlinear"))
        c.flow.enable_nonlinear = as_bool(j["enable_nonlinear"], "flow.enable_nonlinear");
    if (j.contains("enable_linear"))
        c.flow.enable_linear = as_bool(j["enable_linear"], "flow.enable_linear");
}

void parse_diagnostics(const json& j, RunConfig& c) {
    check_keys(j, "diagnostics", {"s_list", "snapshot_stride"});
    if (j.contains("s_list")) {
        c.diag_s_list = as_number_list(j["s_list"], "diagnostics.s_list");
        for (double s : c.diag_s_list)
            if (!(s >= 0.0)) fail("diagnostics.s_list entries must be >= 0");
    }
    if (j.contains("snapshot_stride")) {
        c.snapshot_stride = as_int(j["snapshot_stride"], "diagnostics.snapshot_stride");
        if (c.snapshot_stride < 1) fail("diagnostics.snapshot_stride must be >= 1");
    }
}

void parse_identities(const json& j, RunConfig& c) {
    check_keys(j, "identities", {"trials", "s", "exact_products"});
    if (j.contains("trials")) {
        c.identity_trials = as_int(j["trials"], "identities.trials");
        if (c.identity_trials < 1) fail("identities.trials must be >= 1");
    }
    if (j.contains("s")) {
        c.identity_s = as_number(j["s"], "identities.s");
        if (!(c.identity_s >= 0.0)) fail("identities.s must be >= 0");
    }
    if (j.contains("exact_products"))
        c.exact_products = as_bool(j["exact_products"], "identities.exact_products");
}

void parse_study(const json& j, RunConfig& c) {
    check_keys(j, "study",
               {"n_list", "epsilon", "l", "delta_list", "dt_list", "gronwall_C",
                "lockfile"});
    if (j.contains("n_list")) {
        c.study.n_list = as_number_list(j["n_list"], "study.n_list");
        for (double n : c.study.n_list)
            if (!(n > 0.0)) fail("study.n_list entries must be > 0");
    }
    if (j.contains("epsilon")) {
        c.study.epsilon = as_number(j["epsilon"], "study.epsilon");
        if (c.study.epsilon < 0.0)
            fail("study.epsilon must be > 0 (omit it to use the interval midpoint)");
    }
    if (j.contains("l")) {
        c.study.l = as_number(j["l"], "study.l");
        if (!(c.study.l >= 0.0)) fail("study.l must be >= 0");
    }
    if (j.contains("delta_list")) {
        c.study.delta_list = as_number_list(j["delta_list"], "study.delta_list");
        for (double d : c.study.delta_list)
            if (!(d > 0.0)) fail("study.delta_list entries must be > 0");
    }
    if (j.contains("dt_list")) {
        c.study.dt_list = as_number_list(j["dt_list"], "study.dt_list");
        for (std::size_t i = 0; i < c.study.dt_list.size(); ++i) {
            if (!(c.study.dt_list[i] > 0.0)) fail("study.dt_list entries must be > 0");
            if (i > 0 && !(c.study.dt_list[i] < c.study.dt_list[i - 1]))
                fail("study.dt_list must be strictly decreasing");
        }
    }
    if (j.contains("gronwall_C")) {
        c.study.gronwall_C = as_number(j["gronwall_C"], "study.gronwall_C");
        if (c.study.gronwall_C < 0.0)
            fail("study.gronwall_C must be >= 0 (0 defers to the lockfile)");
    }
    if (j.contains("lockfile")) {
        c.study.lockfile = as_string(j["lockfile"], "study.lockfile");
        if (c.study.lockfile.empty()) fail("study.lockfile must be non-empty");
    }
}

json encode_extended(double v) {
    if (std::isinf(v)) return json("inf");
    return json(v);
}

void print_result(const std::string& status, const std::string& summary_path) {
    json r;
    r["status"] = status;
    r["summary_path"] = summary_path;
    std::printf("RESULT %s\n", r.dump().c_str());
    std::fflush(stdout);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
}

void write_lockfile(const RunConfig& c, double C, const std::string& hash) {
    fs::create_directories(c.output_dir);
    json j;
    j["config_hash"] = hash;
    j["gronwall_C"] = C;
    write_text(fs::path(c.output_dir) / c.study.lockfile, j.dump(2) + "\n");
}

double resolve_gronwall_C(const RunConfig& c, const RunSetup& setup,
                          const std::string& hash) {
    if (c.study.gronwall_C > 0.0) return c.study.gronwall_C;
    const fs::path lock = fs::path(c.output_dir) / c.study.lockfile;
    if (fs::exists(lock)) {
        std::ifstream f(lock);
        json j = json::parse(f, nullptr, false);
        if (!j.is_discarded() && j.contains("gronwall_C") && j["gronwall_C"].is_number()) {
            const double C = j["gronwall_C"].get<double>();
            if (C > 0.0) return C;
        }
        fail("lockfile " + lock.string() + " does not hold a positive gronwall_C");
    }
    const double C = calibrate_gronwall_C(setup, c.study.n_list);
    write_lockfile(c, C, hash);
    return C;
}

} // namespace

RunConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("config root must be a JSON object");
    check_keys(j, "config",
               {"basis", "initial", "flow", "diagnostics", "identities", "study",
                "output_dir", "seed"});

    RunConfig c;
    if (j.contains("basis")) parse_basis(j["basis"], c);
    if (c.alpha.empty()) {
        if (c.dim == 2)
            c.alpha = {1.0, std::sqrt(2.0)};
        else
            fail("basis.alpha is required when N != 2");
    }
    if (static_cast<int>(c.alpha.size()) != c.dim)
        fail("basis.alpha must list exactly N = " + std::to_string(c.dim) + " entries");

    if (j.contains("initial")) parse_initial(j["initial"], c);
    if (c.initial.preset == "two-cosine" && c.dim < 2)
        fail("initial.preset \"two-cosine\" requires N >= 2");
    if (c.initial.preset == "modes")
        for (const Mode& m : c.initial.modes)
            if (static_cast<int>(m.k.size()) != c.dim)
                fail("initial.modes[].k must have exactly N = " + std::to_string(c.dim) +
                     " entries");

    if (j.contains("flow")) parse_flow(j["flow"], c);
    const double s_min = 0.5 * c.dim + 1.0;
    if (!(c.flow.s > s_min))
        fail("flow.s must satisfy s > N/2 + 1 (need s > " + fmt(s_min) + ", got " +
             fmt(c.flow.s) + ")");

    if (j.contains("diagnostics")) parse_diagnostics(j["diagnostics"], c);
    if (j.contains("identities")) parse_identities(j["identities"], c);
    if (j.contains("study")) parse_study(j["study"], c);

    if (j.contains("output_dir")) {
        c.output_dir = as_string(j["output_dir"], "output_dir");
        if (c.output_dir.empty()) fail("output_dir must be non-empty");
    }
    if (j.contains("seed")) {
        const json& v = j["seed"];
        if (!v.is_number_integer()) fail("seed must be a non-negative integer");
        if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
            fail("seed must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    return c;
}

RunConfig load_config(const std::string& path, const CliOverrides& overrides) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    RunConfig c = parse_config_text(ss.str());
    if (overrides.out) {
        if (overrides.out->empty()) fail("--out must be non-empty");
        c.output_dir = *overrides.out;
    }
    if (overrides.seed) c.seed = *overrides.seed;
    return c;
}

std::string canonical_config(const RunConfig& c) {
    json j;
    j["basis"] = {{"N", c.dim}, {"alpha", c.alpha}, {"K", c.box_radius}};
    json init;
    init["preset"] = c.initial.preset;
    json modes = json::array();
    for (const Mode& m : c.initial.modes)
        modes.push_back({{"k", m.k}, {"re", m.amplitude.real()}, {"im", m.amplitude.imag()}});
    init["modes"] = modes;
    init["decay_s"] = c.initial.decay_s;
    init["support"] = encode_extended(c.initial.support);
    init["amplitude"] = c.initial.amplitude;
    init["mean_zero"] = c.initial.mean_zero;
    j["initial"] = init;
    j["flow"] = {{"n", encode_extended(c.flow.n)},
                 {"delta", encode_extended(c.flow.delta)},
                 {"s", c.flow.s},
                 {"dt", c.flow.dt},
                 {"t_end", c.flow.t_end},
                 {"integrator", c.flow.integrator == Integrator::rk4 ? "rk4" : "ifrk4"},
                 {"route", c.flow.route == ConvRoute::fft
                               ? "fft"
                               : (c.flow.route == ConvRoute::direct ? "direct" : "aliased")},
                 {"enable_nonlinear", c.flow.enable_nonlinear},
                 {"enable_linear", c.flow.enable_linear}};
    j["diagnostics"] = {{"s_list", c.diag_s_list}, {"snapshot_stride", c.snapshot_stride}};
    j["identities"] = {{"trials", c.identity_trials},
                       {"s", c.identity_s},
                       {"exact_products", c.exact_products}};
    j["study"] = {{"n_list", c.study.n_list},
                  {"epsilon", c.study.epsilon},
                  {"l", c.study.l},
                  {"delta_list", c.study.delta_list},
                  {"dt_list", c.study.dt_list},
                  {"gronwall_C", c.study.gronwall_C},
                  {"lockfile", c.study.lockfile}};
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    return j.dump();
}

std::string config_hash(const RunConfig& c) {
    const std::string text = canonical_config(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

BasisPtr build_basis(const RunConfig& c) {
    try {
        return make_basis(c.alpha, c.box_radius);
    } catch (const std::invalid_argument& e) {
        fail(std::string("basis rejected: ") + e.what());
    }
}

QpField build_initial_data(const RunConfig& c) {
    BasisPtr basis = build_basis(c);
    if (c.initial.preset == "two-cosine") {
        LatticePoint e1(static_cast<std::size_t>(c.dim), 0);
        LatticePoint e2(static_cast<std::size_t>(c.dim), 0);
        e1[0] = 1;
        e2[1] = 1;
        return make_field(basis, {{e1, 0.5}, {e2, 0.5}});
    }
    if (c.initial.preset == "modes") {
        try {
            return make_field(basis, c.initial.modes);
        } catch (const std::out_of_range& e) {
            fail(std::string("initial.modes rejected: ") + e.what());
        }
    }
    return random_field(basis, c.seed, c.initial.decay_s, c.initial.support,
                        c.initial.mean_zero, c.initial.amplitude);
}

int cmd_simulate(const RunConfig& c) {
    try {
        const QpField u0 = build_initial_data(c);
        const EvolveOutcome out = evolve(u0, c.flow, c.snapshot_stride, c.diag_s_list);
        const auto& traj = out.trajectory;

        fs::create_directories(c.output_dir);
        std::string csv = report_csv_header(traj.reports.front());
        for (const DiagnosticsReport& r : traj.reports) csv += report_csv_row(r);
        const fs::path csv_path = fs::path(c.output_dir) / "trajectory.csv";
        write_text(csv_path, csv);
        const fs::path state_path = fs::path(c.output_dir) / "final_state.qpf";
        save_field(state_path.string(), traj.states.back());

        const std::string status = out.blew_up ? "blow-up" : "ok";
        json summary;
        summary["command"] = "simulate";
        summary["config_hash"] = config_hash(c);
        summary["status"] = status;
        summary["blew_up"] = out.blew_up;
        if (out.blew_up) summary["blowup_time"] = out.blowup_time;
        summary["final_time"] = traj.times.back();
        summary["snapshots"] = traj.times.size();
        summary["trajectory_csv"] = csv_path.string();
        summary["final_state"] = state_path.string();
        const fs::path summary_path = fs::path(c.output_dir) / "run_summary.json";
        write_text(summary_path, summary.dump(2) + "\n");

        std::printf("simulate: %zu snapshots to t = %.17g%s\n", traj.times.size(),
                    traj.times.back(), out.blew_up ? " (blow-up, partial)" : "");
        print_result(status, summary_path.string());
        return out.blew_up ? kExitBlowup : kExitOk;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        print_result("config-error", "");
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        print_result("fail", "");
        return kExitProperty;
    }
}

int cmd_identities(const RunConfig& c) {
    try {
        BasisPtr basis = build_basis(c);
        // Band-limited trial fields keep every product chain inside the box,
        // so the exact routes sit at rounding level; the aliased negative
        // control instead needs support out to the box edge to wrap.
        const double support = c.exact_products
                                   ? c.box_radius / 3.0
                                   : std::numeric_limits<double>::infinity();
        const ConvRoute route = c.exact_products ? ConvRoute::fft : ConvRoute::aliased;

        std::map<std::string, double> worst;
        for (int i = 0; i < c.identity_trials; ++i) {
            const QpField u = random_field(basis, c.seed + static_cast<std::uint64_t>(i),
                                           c.identity_s, support, true, 1.0);
            for (const auto& [name, res] : identity_suite(u, c.identity_s, route))
                worst[name] = std::max(worst[name], res);
        }
        bool identities_ok = true;
        for (const auto& [name, res] : worst) {
            std::printf("identity %-22s worst residual %.3e\n", name.c_str(), res);
            if (!(res <= 1e-12)) identities_ok = false;
        }

        const InequalityAudit audit =
            inequality_audit(basis, c.seed, c.identity_trials, c.identity_s);
        for (const auto& [name, ratio] : audit.worst_ratio)
            std::printf("inequality %-20s worst ratio %.6g\n", name.c_str(), ratio);
        std::printf("inequality exact set: %s\n", audit.exact_pass ? "PASS" : "FAIL");

        const bool pass = identities_ok && audit.exact_pass;
        fs::create_directories(c.output_dir);
        json summary;
        summary["command"] = "identities";
        summary["config_hash"] = config_hash(c);
        summary["status"] = pass ? "ok" : "fail";
        summary["trials"] = c.identity_trials;
        summary["route"] = c.exact_products ? "fft" : "aliased";
        json jw;
        for (const auto& [name, res] : worst) jw[name] = res;
        summary["identity_worst"] = jw;
        json ja;
        for (const auto& [name, ratio] : audit.worst_ratio) ja[name] = ratio;
        summary["inequality_worst_ratio"] = ja;
        summary["inequality_exact_pass"] = audit.exact_pass;
        const fs::path summary_path = fs::path(c.output_dir) / "identities_summary.json";
        write_text(summary_path, summary.dump(2) + "\n");

        print_result(pass ? "ok" : "fail", summary_path.string());
        return pass ? kExitOk : kExitProperty;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        print_result("config-error", "");
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        print_result("fail", "");
        return kExitProperty;
    }
}

int cmd_study(const std::string& study_name, const RunConfig& c) {
    try {
        static const std::set<std::string> known = {
            "uniform-bound", "refined-bound", "cauchy", "conservation-drift",
            "calibrate-C"};
        if (!known.count(study_name))
            fail("unknown study \"" + study_name +
                 "\" (expected uniform-bound, refined-bound, cauchy, "
                 "conservation-drift, or calibrate-C)");

        const std::string hash = config_hash(c);
        RunSetup setup{build_initial_data(c), c.flow, c.snapshot_stride, {}};

        StudyResult result;
        if (study_name == "calibrate-C") {
            const double C = calibrate_gronwall_C(setup, c.study.n_list);
            std::printf("gronwall C = %.17g\n", C);
            result.study = "calibrate-C";
            result.pass = true;
            result.metrics["gronwall_C"] = C;
            result.table.columns = {"gronwall_C"};
            result.table.rows = {{C}};
            write_lockfile(c, C, hash);
        } else if (study_name == "uniform-bound") {
            const double C = resolve_gronwall_C(c, setup, hash);
            result = uniform_bound_study(setup, c.study.n_list, C);
        } else if (study_name == "refined-bound") {
            result = refined_bound_study(setup, c.study.l, c.study.delta_list);
        } else if (study_name == "cauchy") {
            const double lo = (2.0 / 3.0) * (c.flow.s - 2.0) / c.flow.s;
            const double hi = (c.flow.s - 2.0) / c.flow.s;
            // An omitted epsilon defaults to the midpoint of the admissible
            // interval, which maximizes margin on both coupling conditions.
            const double eps = c.study.epsilon > 0.0 ? c.study.epsilon : 0.5 * (lo + hi);
            if (!(eps > lo && eps < hi))
                fail("study.epsilon must satisfy (2/3)(s-2)/s < epsilon < (s-2)/s "
                     "(need (" + fmt(lo) + ", " + fmt(hi) + "), got " + fmt(eps) + ")");
            result = cauchy_study(setup, eps, c.study.n_list);
        } else {
            result = conservation_drift_study(setup, c.study.dt_list);
        }

        const std::string summary_path = write_study_outputs(result, c.output_dir, hash);
        std::printf("study %s: %s\n", result.study.c_str(), result.pass ? "PASS" : "FAIL");
        for (const auto& [name, value] : result.metrics)
            std::printf("  %s = %.17g\n", name.c_str(), value);
        for (const std::string& note : result.notes) std::printf("  note: %s\n", note.c_str());

        print_result(result.pass ? "ok" : "fail", summary_path);
        return result.pass ? kExitOk : kExitProperty;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        print_result("config-error", "");
        return kExitConfig;
    } catch (const BlowupError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        print_result("blow-up", "");
        return kExitBlowup;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        print_result("fail", "");
        return kExitProperty;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"spectral workbench for the quasiperiodic Benjamin-Ono flow"};
    app.require_subcommand(1);
    std::string config_path, out_dir, study_name;
    std::uint64_t seed_val = 0;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    CLI::Option* out_opt = app.add_option("--out", out_dir, "override output_dir");
    CLI::Option* seed_opt = app.add_option("--seed", seed_val, "override seed");
    CLI::App* sim = app.add_subcommand(
        "simulate", "integrate the flow; write trajectory CSV and final state");
    CLI::App* idn = app.add_subcommand(
        "identities", "run the exact-identity suite and the inequality audit");
    CLI::App* stu = app.add_subcommand("study", "run a named study");
    stu->add_option("name", study_name,
                    "uniform-bound | refined-bound | cauchy | conservation-drift | "
                    "calibrate-C")
        ->required();
    for (CLI::App* sub : {sim, idn, stu}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        if (rc == 0) {
            print_result("ok", "");
            return kExitOk;
        }
        print_result("config-error", "");
        return kExitConfig;
    }

    CliOverrides ov;
    if (out_opt->count() > 0) ov.out = out_dir;
    if (seed_opt->count() > 0) ov.seed = seed_val;

    RunConfig cfg;
    try {
        cfg = load_config(config_path, ov);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        print_result("config-error", "");
        return kExitConfig;
    }

    if (sim->parsed()) return cmd_simulate(cfg);
    if (idn->parsed()) return cmd_identities(cfg);
    return cmd_study(study_name, cfg);
}

} // namespace qpbo
