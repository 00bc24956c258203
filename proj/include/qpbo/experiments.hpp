/**
 * experiments.hpp: scripted studies that exercise the flow against its
 * quantitative claims at desk scale. Every study is deterministic (fixed
 * configuration in, identical table out) and returns its full table plus a
 * pass/fail verdict and fitted scalars; writing CSV/JSON artifacts is a
 * separate step so the harness can also consume results in-process.
 */

#ifndef QPBO_EXPERIMENTS_HPP
#define QPBO_EXPERIMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "qpbo/dynamics.hpp"

namespace qpbo {

// One run template: initial data (pre-regularization) plus flow parameters.
// Studies copy it and vary single knobs (cutoff level, radius, step size).
struct RunSetup {
    QpField u0;
    FlowParams flow;
    int snapshot_stride = 10;
    std::vector<double> diag_s_list;
};

struct StudyTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct StudyResult {
    std::string study;
    bool pass = false;
    std::map<std::string, double> metrics; // fitted exponents, worst ratios
    std::vector<std::string> notes;
    StudyTable table;
};

// Least-squares slope of y against x in log-log coordinates.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/**
 * Smallest C on the power-of-two grid 2^-20..2^39 such that along every
 * cutoff level in n_list both growth envelopes hold at every snapshot:
 * the D^s-norm envelope anchored at each run's regularized initial state,
 * and the H^s-norm envelope anchored at the un-regularized datum. Throws
 * std::runtime_error if no grid point works.
 */
double calibrate_gronwall_C(const RunSetup& setup, const std::vector<double>& n_list);

// Sweeps the cutoff level and checks the H^s majorant
// ||u0||_{H^s} + 1/((||u0||_{H^s})^-1 - C t) at every snapshot.
// Table columns: t, n, hs_norm, envelope.
StudyResult uniform_bound_study(const RunSetup& setup,
                                const std::vector<double>& n_list, double C);

// Sweeps the regularization radius and fits the growth exponent of
// max_t ||u_{n,delta}||_{H^{s+l}} against delta (pass iff slope <= l + 0.2,
// and the explicit t = 0 constant (2 delta^2)^{l/2} holds for delta > 1).
// Table columns: delta, max_hs_plus_l, ratio_vs_delta_l, t0_const_ratio.
StudyResult refined_bound_study(const RunSetup& setup, double l,
                                const std::vector<double>& delta_list);

/**
 * Couples delta_i = n_i^((s-2)/s - epsilon) to the cutoff ladder n_list and
 * measures sup-over-snapshots differences of consecutive solutions in L2,
 * H^{s-1}, H^s. Pass iff every difference column is non-increasing within a
 * 1.2 slack factor and the L2 column at least halves per level (the
 * predicted rate n^-(s-2) within a factor-2 envelope). epsilon must lie in
 * ((2/3)(s-2)/s, (s-2)/s). Contraction onset is reported, not asserted.
 * Table columns: n_lo, n_hi, diff_l2, diff_hs_minus_1, diff_hs.
 */
StudyResult cauchy_study(const RunSetup& setup, double epsilon,
                         const std::vector<double>& n_list);

// Runs the dt ladder (descending) and fits convergence orders of the
// conserved-functional drifts (max over snapshots of |Q(t) - Q(0)|; relative
// except for mass). Pass iff mass stays <= 1e-13 absolute at every dt and
// the momentum and energy orders are >= 3.5 (both are exact invariants of
// the truncated flow, so their drift is pure integrator error). The two H1
// law columns are reported with fitted orders but not gated: they carry a
// dt-independent truncation defect that only (n, K) refinement shrinks.
// Table columns: dt, mass_drift, momentum_drift, energy_drift,
// h1_stated_drift, h1_variant_drift.
StudyResult conservation_drift_study(const RunSetup& setup,
                                     const std::vector<double>& dt_list);

// CSV text of a study table (header row + 17-significant-digit values).
std::string table_csv(const StudyTable& table);

// Write <study>.csv and <study>_summary.json into out_dir (created if
// needed); returns the summary path. The summary carries the study name,
// the caller's config hash, pass/fail, metrics, and notes.
std::string write_study_outputs(const StudyResult& result, const std::string& out_dir,
                                const std::string& config_hash);

} // namespace qpbo

#endif // QPBO_EXPERIMENTS_HPP
