/**
 * cli.hpp: config parsing, run orchestration, and artifact emission.
 *
 * A run is configured by a single JSON document (no environment variables),
 * validated before any computation starts; violated constraints are reported
 * with the constraint quoted. The effective config (after --out/--seed
 * overrides) is hashed with FNV-1a over its canonical dump, and that hash is
 * stamped into every summary so artifacts can be traced to their inputs.
 *
 * Every command finishes by printing one machine-parseable line:
 *   RESULT {"status":"...","summary_path":"..."}
 * Exit codes: 0 pass, 1 config error, 2 blow-up, 3 identity/property failure.
 */

#ifndef QPBO_CLI_HPP
#define QPBO_CLI_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpbo/experiments.hpp"
#include "qpbo/serialization.hpp"

namespace qpbo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBlowup = 2;
inline constexpr int kExitProperty = 3;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Initial data selector: a named preset, an explicit mode list, or a seeded
// random field with the H^s-style decay profile <k>^-(decay_s+1).
struct InitialData {
    std::string preset = "two-cosine"; // "two-cosine" | "modes" | "random"
    std::vector<Mode> modes;
    double decay_s = 2.5;
    double support = 8.0;
    double amplitude = 1.0;
    bool mean_zero = true;
};

struct StudyParams {
    std::vector<double> n_list = {4.0, 8.0, 16.0, 32.0};
    double epsilon = 0.0; // 0: midpoint of the admissible interval for flow.s
    double l = 1.0;
    std::vector<double> delta_list = {2.0, 4.0, 8.0, 16.0};
    std::vector<double> dt_list = {4e-3, 2e-3, 1e-3};
    double gronwall_C = 0.0; // 0: read the lockfile, calibrating if absent
    std::string lockfile = "gronwall_C.lock";
};

struct RunConfig {
    int dim = 2;
    std::vector<double> alpha; // defaults to (1, sqrt 2) when dim == 2
    int box_radius = 32;
    InitialData initial;
    FlowParams flow;
    std::vector<double> diag_s_list = {2.5};
    int snapshot_stride = 10;
    int identity_trials = 50;
    double identity_s = 2.5;
    bool exact_products = true; // false switches the suite to the aliased route
    StudyParams study;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
};

struct CliOverrides {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
};

// Parse + validate. Throws ConfigError with the violated constraint quoted
// (e.g. "flow.s must satisfy s > N/2 + 1").
RunConfig parse_config_text(const std::string& json_text);
RunConfig load_config(const std::string& path, const CliOverrides& overrides = {});

// Canonical JSON dump of the effective config (sorted keys, 17-digit reals)
// and its 64-bit FNV-1a hash as 16 hex digits.
std::string canonical_config(const RunConfig& c);
std::string config_hash(const RunConfig& c);

BasisPtr build_basis(const RunConfig& c);
QpField build_initial_data(const RunConfig& c);

int cmd_simulate(const RunConfig& c);
int cmd_identities(const RunConfig& c);
int cmd_study(const std::string& study_name, const RunConfig& c);

// argv-level driver behind main(): subcommands simulate | identities |
// study <name>, each with --config <path>, --out <dir>, --seed <int>.
int run_cli(int argc, const char* const* argv);

} // namespace qpbo

#endif // QPBO_CLI_HPP
