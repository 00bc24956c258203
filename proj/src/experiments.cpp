#include "qpbo/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace qpbo {

namespace {

constexpr double kTiny = 1e-300;

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Evolve one study run; studies treat blow-up as a hard error since every
// configured run is expected to stay finite.
EvolveOutcome run_or_throw(const QpField& u0, const FlowParams& p, int stride,
                           const std::vector<double>& s_list) {
    EvolveOutcome out = evolve(u0, p, stride, s_list);
    if (out.blew_up) throw BlowupError(out.blowup_time);
    return out;
}

double max_over_snapshots(const EvolveOutcome& out,
                          const std::function<double(const QpField&)>& f) {
    double m = 0.0;
    for (const QpField& u : out.trajectory.states) m = std::max(m, f(u));
    return m;
}

} // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 matched points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(std::max(x[i], kTiny)));
        ly.push_back(std::log(std::max(y[i], kTiny)));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

double calibrate_gronwall_C(const RunSetup& setup, const std::vector<double>& n_list) {
    if (n_list.empty()) throw std::invalid_argument("calibrate_gronwall_C: empty level list");
    const double s = setup.flow.s;
    const double hs0_pre = sobolev_norm(setup.u0, s);

    struct RunData {
        double ds0;
        std::vector<double> t, ds_norm, hs_norm;
    };
    std::vector<RunData> runs;
    for (double n : n_list) {
        FlowParams p = setup.flow;
        p.n = n;
        EvolveOutcome out = run_or_throw(setup.u0, p, setup.snapshot_stride, {});
        RunData rd;
        const QpField& init = out.trajectory.states.front();
        rd.ds0 = l2_norm(frac_deriv(init, s)) + l2_norm(init);
        for (std::size_t i = 0; i < out.trajectory.states.size(); ++i) {
            const QpField& u = out.trajectory.states[i];
            rd.t.push_back(out.trajectory.times[i]);
            rd.ds_norm.push_back(l2_norm(frac_deriv(u, s)));
            rd.hs_norm.push_back(sobolev_norm(u, s));
        }
        runs.push_back(std::move(rd));
    }

    for (int j = -20; j < 40; ++j) {
        const double C = std::ldexp(1.0, j);
        bool ok = true;
        for (const RunData& rd : runs) {
            for (std::size_t i = 0; ok && i < rd.t.size(); ++i) {
                const double t = rd.t[i];
                // Envelopes must stay finite through the run and dominate the
                // measured norms; growth_envelope throws past blow-up.
                if (C * t >= 1.0 / rd.ds0 || C * t >= 1.0 / hs0_pre) {
                    ok = false;
                    break;
                }
                if (rd.ds_norm[i] > growth_envelope(rd.ds0, C, t)) ok = false;
                if (rd.hs_norm[i] > hs0_pre + growth_envelope(hs0_pre, C, t)) ok = false;
            }
            if (!ok) break;
        }
        if (ok) return C;
    }
    throw std::runtime_error("calibrate_gronwall_C: no grid constant satisfies the envelopes");
}

StudyResult uniform_bound_study(const RunSetup& setup,
                                const std::vector<double>& n_list, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("uniform_bound_study: C must be > 0");
    StudyResult r;
    r.study = "uniform-bound";
    r.table.columns = {"t", "n", "hs_norm", "envelope"};
    const double s = setup.flow.s;
    const double hs0 = sobolev_norm(setup.u0, s);

    double worst_ratio = 0.0;
    bool ok = true;
    for (double n : n_list) {
        FlowParams p = setup.flow;
        p.n = n;
        EvolveOutcome out = run_or_throw(setup.u0, p, setup.snapshot_stride, {});
        for (std::size_t i = 0; i < out.trajectory.states.size(); ++i) {
            const double t = out.trajectory.times[i];
            // The majorant is only defined while C t < 1/||u0||; a constant so
            // large that the envelope expires inside the window cannot certify
            // the claimed interval, so the level fails instead of throwing.
            if (!(C * t < 1.0 / hs0)) {
                ok = false;
                r.notes.push_back("envelope expires before t_end at level n = " +
                                  std::to_string(n) + " (C too large)");
                break;
            }
            const double norm = sobolev_norm(out.trajectory.states[i], s);
            const double env = hs0 + growth_envelope(hs0, C, t);
            worst_ratio = std::max(worst_ratio, norm / env);
            if (norm > env) ok = false;
            r.table.rows.push_back({t, n, norm, env});
        }
    }
    r.metrics["worst_envelope_ratio"] = worst_ratio;
    r.metrics["gronwall_C"] = C;
    r.pass = ok;
    return r;
}

StudyResult refined_bound_study(const RunSetup& setup, double l,
                                const std::vector<double>& delta_list) {
    if (!(l >= 0.0)) throw std::invalid_argument("refined_bound_study: l must be >= 0");
    if (delta_list.size() < 2)
        throw std::invalid_argument("refined_bound_study: need >= 2 radii");
    StudyResult r;
    r.study = "refined-bound";
    r.table.columns = {"delta", "max_hs_plus_l", "ratio_vs_delta_l", "t0_const_ratio"};
    const double s = setup.flow.s;
    const double hs0 = sobolev_norm(setup.u0, s);

    std::vector<double> maxima;
    double worst_t0 = 0.0;
    for (double delta : delta_list) {
        FlowParams p = setup.flow;
        p.delta = delta;
        EvolveOutcome out = run_or_throw(setup.u0, p, setup.snapshot_stride, {});
        const double max_norm =
            max_over_snapshots(out, [&](const QpField& u) { return sobolev_norm(u, s + l); });
        maxima.push_back(max_norm);

        // Explicit regularization constant at t = 0 (valid for delta > 1):
        // ||u_delta||_{H^{s+l}} <= (2 delta^2)^{l/2} ||u_delta||_{H^s}.
        const QpField& init = out.trajectory.states.front();
        double t0_ratio = 0.0;
        if (delta > 1.0) {
            t0_ratio = sobolev_norm(init, s + l) /
                       std::max(std::pow(2.0 * delta * delta, 0.5 * l) *
                                    sobolev_norm(init, s),
                                kTiny);
            worst_t0 = std::max(worst_t0, t0_ratio);
        }
        r.table.rows.push_back(
            {delta, max_norm,
             max_norm / std::max(std::pow(delta, l) * hs0, kTiny), t0_ratio});
    }

    const double slope = loglog_slope(delta_list, maxima);
    r.metrics["fitted_exponent"] = slope;
    r.metrics["exponent_bound"] = l + 0.2;
    r.metrics["worst_t0_const_ratio"] = worst_t0;
    r.pass = slope <= l + 0.2 && worst_t0 <= 1.0 + 1e-12;
    return r;
}

StudyResult cauchy_study(const RunSetup& setup, double epsilon,
                         const std::vector<double>& n_list) {
    const double s = setup.flow.s;
    const double lo = (2.0 / 3.0) * (s - 2.0) / s;
    const double hi = (s - 2.0) / s;
    if (!(epsilon > lo && epsilon < hi))
        throw std::invalid_argument(
            "cauchy_study: epsilon must lie in ((2/3)(s-2)/s, (s-2)/s) = (" +
            std::to_string(lo) + ", " + std::to_string(hi) + ")");
    if (n_list.size() < 3)
        throw std::invalid_argument("cauchy_study: need >= 3 cutoff levels");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (!(n_list[i] > n_list[i - 1]))
            throw std::invalid_argument("cauchy_study: n_list must be strictly increasing");

    StudyResult r;
    r.study = "cauchy";
    r.table.columns = {"n_lo", "n_hi", "diff_l2", "diff_hs_minus_1", "diff_hs"};

    const double coupling = hi - epsilon; // delta_i = n_i^((s-2)/s - epsilon)
    std::vector<EvolveOutcome> levels;
    for (double n : n_list) {
        FlowParams p = setup.flow;
        p.n = n;
        p.delta = std::pow(n, coupling);
        levels.push_back(run_or_throw(setup.u0, p, setup.snapshot_stride, {}));
    }

    const std::size_t snaps = levels.front().trajectory.states.size();
    for (const auto& lv : levels)
        if (lv.trajectory.states.size() != snaps)
            throw std::runtime_error("cauchy_study: snapshot grids misaligned");

    std::vector<double> d_l2, d_hs1, d_hs, n_lo_list;
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
        double m0 = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < snaps; ++i) {
            const QpField diff =
                levels[j].trajectory.states[i] - levels[j + 1].trajectory.states[i];
            m0 = std::max(m0, l2_norm(diff));
            m1 = std::max(m1, sobolev_norm(diff, s - 1.0));
            m2 = std::max(m2, sobolev_norm(diff, s));
        }
        d_l2.push_back(m0);
        d_hs1.push_back(m1);
        d_hs.push_back(m2);
        n_lo_list.push_back(n_list[j]);
        r.table.rows.push_back({n_list[j], n_list[j + 1], m0, m1, m2});
    }

    bool ok = true;
    double worst_slack = 0.0;
    for (const auto* col : {&d_l2, &d_hs1, &d_hs}) {
        for (std::size_t j = 0; j + 1 < col->size(); ++j) {
            const double slack = (*col)[j + 1] / std::max((*col)[j], kTiny);
            worst_slack = std::max(worst_slack, slack);
            if (slack > 1.2) ok = false;
        }
    }
    double worst_halving = 0.0;
    for (std::size_t j = 0; j + 1 < d_l2.size(); ++j) {
        const double ratio = d_l2[j + 1] / std::max(d_l2[j], kTiny);
        worst_halving = std::max(worst_halving, ratio);
        if (ratio > 0.5) ok = false;
    }

    r.metrics["l2_rate"] = -loglog_slope(n_lo_list, d_l2);
    r.metrics["worst_monotonicity_slack"] = worst_slack;
    r.metrics["worst_l2_halving_ratio"] = worst_halving;
    r.notes.push_back(d_l2.size() > 1 && d_l2[1] < d_l2[0]
                          ? "contraction onset: first level pair already contracts"
                          : "contraction onset: not yet contracting at the first level pair");
    r.pass = ok;
    return r;
}

StudyResult conservation_drift_study(const RunSetup& setup,
                                     const std::vector<double>& dt_list) {
    if (dt_list.size() < 2)
        throw std::invalid_argument("conservation_drift_study: need >= 2 step sizes");
    for (std::size_t i = 1; i < dt_list.size(); ++i)
        if (!(dt_list[i] < dt_list[i - 1]))
            throw std::invalid_argument(
                "conservation_drift_study: dt ladder must be strictly decreasing");
    StudyResult r;
    r.study = "conservation-drift";
    r.table.columns = {"dt", "mass_drift", "momentum_drift", "energy_drift",
                       "h1_stated_drift", "h1_variant_drift"};

    std::vector<double> mom, ene, h1s, h1v;
    double mass_max = 0.0;
    for (double dt : dt_list) {
        FlowParams p = setup.flow;
        p.dt = dt;
        EvolveOutcome out = run_or_throw(setup.u0, p, setup.snapshot_stride, {});
        const auto& reports = out.trajectory.reports;
        const DiagnosticsReport& r0 = reports.front();
        double dm = 0.0, dp = 0.0, de = 0.0, dh1 = 0.0, dh2 = 0.0;
        for (const DiagnosticsReport& rep : reports) {
            dm = std::max(dm, std::abs(rep.mass - r0.mass));
            dp = std::max(dp, std::abs(rep.momentum - r0.momentum) /
                                  std::max(std::abs(r0.momentum), kTiny));
            de = std::max(de, std::abs(rep.energy - r0.energy) /
                                  std::max(std::abs(r0.energy), kTiny));
            dh1 = std::max(dh1, std::abs(rep.h1_stated - r0.h1_stated) /
                                    std::max(std::abs(r0.h1_stated), kTiny));
            dh2 = std::max(dh2, std::abs(rep.h1_variant - r0.h1_variant) /
                                    std::max(std::abs(r0.h1_variant), kTiny));
        }
        mass_max = std::max(mass_max, dm);
        mom.push_back(dp);
        ene.push_back(de);
        h1s.push_back(dh1);
        h1v.push_back(dh2);
        r.table.rows.push_back({dt, dm, dp, de, dh1, dh2});
    }

    r.metrics["mass_drift_max"] = mass_max;
    r.metrics["momentum_order"] = loglog_slope(dt_list, mom);
    r.metrics["energy_order"] = loglog_slope(dt_list, ene);
    r.metrics["h1_stated_order"] = loglog_slope(dt_list, h1s);
    r.metrics["h1_variant_order"] = loglog_slope(dt_list, h1v);
    r.metrics["momentum_drift_finest"] = mom.back();
    r.metrics["energy_drift_finest"] = ene.back();
    r.metrics["h1_stated_drift_finest"] = h1s.back();
    r.metrics["h1_variant_drift_finest"] = h1v.back();

    // Mass, momentum, and energy are exact invariants of the truncated flow
    // (their projection defects cancel by k <-> -k antisymmetry), so their
    // measured drifts must be pure integrator error. The H1 laws carry a
    // dt-independent truncation defect that only refinement in (n, K) can
    // shrink, so at a single level their columns are reported, not gated;
    // the note records which regime the variant law sits in.
    r.pass = mass_max <= 1e-13 && r.metrics["momentum_order"] >= 3.5 &&
             r.metrics["energy_order"] >= 3.5;
    r.notes.push_back(r.metrics["h1_variant_order"] >= 3.5
                          ? "h1 variant law: integrator-dominated (4th-order in dt)"
                          : "h1 variant law: truncation-defect-dominated at this level");
    return r;
}

std::string table_csv(const StudyTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ",";
        out += table.columns[c];
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += format_value(row[c]);
        }
        out += "\n";
    }
    return out;
}

std::string write_study_outputs(const StudyResult& result, const std::string& out_dir,
                                const std::string& config_hash) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const std::string csv_path = (fs::path(out_dir) / (result.study + ".csv")).string();
    {
        std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("write_study_outputs: cannot open " + csv_path);
        f << table_csv(result.table);
    }

    nlohmann::json summary;
    summary["study"] = result.study;
    summary["config_hash"] = config_hash;
    summary["pass"] = result.pass;
    nlohmann::json metrics;
    for (const auto& [k, v] : result.metrics) metrics[k] = v;
    summary["metrics"] = metrics;
    summary["notes"] = result.notes;

    const std::string summary_path =
        (fs::path(out_dir) / (result.study + "_summary.json")).string();
    std::ofstream f(summary_path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_study_outputs: cannot open " + summary_path);
    f << summary.dump(2) << "\n";
    return summary_path;
}

} // namespace qpbo
