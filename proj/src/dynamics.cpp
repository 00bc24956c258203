#include "qpbo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpbo {

namespace {

constexpr double kTiny = 1e-300;

bool all_finite(const QpField& u) {
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!std::isfinite(u[i].real()) || !std::isfinite(u[i].imag())) return false;
    return true;
}

// exp(t * lambda_n) per mode, lambda_n(k) = i sgn(alpha.k) (alpha.k)^2
// masked by |alpha.k| < n. Modes at or above the cutoff are frozen by the
// flow, so their factor is exactly 1.
Coeffs phase_factors(const FrequencyBasis& b, double t, double n, bool enabled) {
    Coeffs ph(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double f = b.physical_frequency(i);
        if (!enabled || !(std::abs(f) < n)) {
            ph[i] = {1.0, 0.0};
            continue;
        }
        const double sgn = (f > 0.0) - (f < 0.0);
        const double theta = sgn * f * f * t;
        ph[i] = {std::cos(theta), std::sin(theta)};
    }
    return ph;
}

QpField apply_phase(const QpField& u, const Coeffs& ph) {
    QpField w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= ph[i];
    return w;
}

QpField nonlinear_or_zero(const QpField& u, const FlowParams& p) {
    if (!p.enable_nonlinear) return QpField(u.basis_ptr(), u.is_real());
    return nonlinear_term(u, p.n, p.route);
}

QpField finish_step(QpField w, double t_next) {
    symmetrize(w);
    if (!all_finite(w)) throw BlowupError(t_next);
    return w;
}

double effective_lambda(const FrequencyBasis& b, double n) {
    return std::min(n, b.max_physical_frequency());
}

} // namespace

QpField nonlinear_term(const QpField& u, double n, ConvRoute route) {
    const QpField v = chi_cutoff(u, n);
    QpField w = chi_cutoff(multiply(v, d_dx(v), route), n);
    // The integrand is (1/2) d/dx (chi_n u)^2: its mean vanishes identically,
    // so pin the rounding residue to the exact value.
    w[w.size() / 2] = {0.0, 0.0};
    return w;
}

QpField linear_term(const QpField& u, double n) {
    return chi_cutoff(hilbert(d_dx(d_dx(u))), n);
}

QpField bo_rhs(const QpField& u, double n, ConvRoute route) {
    return nonlinear_term(u, n, route) + linear_term(u, n);
}

QpField flow_rhs(const QpField& u, const FlowParams& p) {
    QpField w = nonlinear_or_zero(u, p);
    if (p.enable_linear) w = w + linear_term(u, p.n);
    return w;
}

QpField linear_phase(const QpField& u, double t) {
    return apply_phase(u, phase_factors(u.basis(), t,
                                        std::numeric_limits<double>::infinity(), true));
}

QpField step_rk4(const QpField& u, const FlowParams& p, double t_now) {
    const double h = p.dt;
    const QpField k1 = flow_rhs(u, p);
    const QpField k2 = flow_rhs(u + 0.5 * h * k1, p);
    const QpField k3 = flow_rhs(u + 0.5 * h * k2, p);
    const QpField k4 = flow_rhs(u + h * k3, p);
    QpField w = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return finish_step(std::move(w), t_now + h);
}

QpField step_ifrk4(const QpField& u, const FlowParams& p, double t_now) {
    const double h = p.dt;
    const Coeffs e_full = phase_factors(u.basis(), h, p.n, p.enable_linear);
    const Coeffs e_half = phase_factors(u.basis(), 0.5 * h, p.n, p.enable_linear);

    const QpField k1 = nonlinear_or_zero(u, p);
    const QpField k2 = nonlinear_or_zero(apply_phase(u + 0.5 * h * k1, e_half), p);
    const QpField k3 = nonlinear_or_zero(apply_phase(u, e_half) + 0.5 * h * k2, p);
    const QpField k4 =
        nonlinear_or_zero(apply_phase(u, e_full) + h * apply_phase(k3, e_half), p);

    QpField w = apply_phase(u, e_full) +
                (h / 6.0) * (apply_phase(k1, e_full) +
                             apply_phase(2.0 * (k2 + k3), e_half) + k4);
    return finish_step(std::move(w), t_now + h);
}

double default_dt(const FrequencyBasis& basis, double n, Integrator integrator) {
    const double lam = effective_lambda(basis, n);
    const double base = 0.5 / std::max(lam * lam, kTiny);
    return integrator == Integrator::ifrk4 ? 10.0 * base : base;
}

EvolveOutcome evolve(const QpField& u0, const FlowParams& p, int snapshot_stride,
                     const std::vector<double>& diag_s_list) {
    if (!(p.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (!(p.t_end >= 0.0)) throw std::invalid_argument("evolve: t_end must be >= 0");
    if (snapshot_stride < 1) throw std::invalid_argument("evolve: stride must be >= 1");

    QpField u = u0;
    if (p.delta > 0.0 && std::isfinite(p.delta)) u = delta_regularize(u0, p.delta);

    const long nsteps = std::max<long>(
        0, static_cast<long>(std::ceil(p.t_end / p.dt - 1e-9)));

    EvolveOutcome out;
    auto snapshot = [&](const QpField& state, double t) {
        std::map<std::string, double> res;
        const QpField r = flow_rhs(state, p);
        res["rhs_mean_defect"] = std::abs(r[r.size() / 2]);
        res["rhs_momentum_defect"] =
            std::abs(pair(r, state)) /
            std::max(l2_norm(r) * l2_norm(state), kTiny);
        out.trajectory.times.push_back(t);
        out.trajectory.states.push_back(state);
        out.trajectory.reports.push_back(
            compute_report(state, t, diag_s_list, std::move(res)));
    };

    snapshot(u, 0.0);
    for (long k = 0; k < nsteps; ++k) {
        const double t_now = static_cast<double>(k) * p.dt;
        const bool last = (k == nsteps - 1);
        FlowParams step_p = p;
        if (last) step_p.dt = p.t_end - t_now; // land exactly on t_end
        const double t_next = last ? p.t_end : t_now + p.dt;
        try {
            u = (p.integrator == Integrator::rk4) ? step_rk4(u, step_p, t_now)
                                                  : step_ifrk4(u, step_p, t_now);
        } catch (const BlowupError& e) {
            out.blew_up = true;
            out.blowup_time = e.time;
            return out;
        }
        if (last || (k + 1) % snapshot_stride == 0) snapshot(u, t_next);
    }
    return out;
}

PicardResult picard_iterate(const QpField& u0, const FlowParams& p, double t, int iters) {
    if (!(t > 0.0)) throw std::invalid_argument("picard_iterate: t must be > 0");
    if (iters < 1) throw std::invalid_argument("picard_iterate: iters must be >= 1");

    // Contraction heuristic: the integral map is Lipschitz on [0,t] with
    // constant roughly lambda^2 (dispersive symbol) + 2 lambda ||u0||_l1
    // (product term); require t below its reciprocal.
    const double lam = effective_lambda(u0.basis(), p.n);
    const double lip = (p.enable_linear ? lam * lam : 0.0) +
                       (p.enable_nonlinear ? 2.0 * lam * l1_coeff_norm(u0) : 0.0);
    if (t * lip > 1.0)
        throw std::invalid_argument(
            "picard_iterate: t = " + std::to_string(t) +
            " exceeds the contraction bound 1/(lambda^2 + 2 lambda ||u0||_l1) = " +
            std::to_string(1.0 / lip));

    constexpr int kSub = 16;             // composite Simpson subintervals
    constexpr int kNodes = 2 * kSub + 1; // tau_i = i h, h = t / (2 kSub)
    const double h = t / (kNodes - 1);

    std::vector<QpField> cur(kNodes, u0);
    PicardResult result{u0, {}};
    int growth_streak = 0;
    // Below this the sweep-to-sweep distance is rounding noise; stop instead
    // of letting the noise wander into the divergence guard.
    const double converged_floor = 1e-16 * (1.0 + sobolev_norm(u0, p.s));

    for (int m = 0; m < iters; ++m) {
        std::vector<QpField> rhs;
        rhs.reserve(kNodes);
        for (int i = 0; i < kNodes; ++i) rhs.push_back(flow_rhs(cur[i], p));

        std::vector<QpField> next;
        next.reserve(kNodes);
        next.push_back(u0); // I_0 = 0
        for (int i = 1; i < kNodes; ++i) {
            if (i % 2 == 0) {
                // Simpson over [tau_{i-2}, tau_i]
                next.push_back(next[i - 2] +
                               (h / 3.0) * (rhs[i - 2] + 4.0 * rhs[i - 1] + rhs[i]));
            } else {
                // open 3-point rule over [tau_{i-1}, tau_i] keeps odd nodes
                // at 4th order
                next.push_back(next[i - 1] +
                               (h / 12.0) * (5.0 * rhs[i - 1] + 8.0 * rhs[i] - rhs[i + 1]));
            }
        }

        double res = 0.0;
        for (int i = 0; i < kNodes; ++i)
            res = std::max(res, sobolev_norm(next[i] - cur[i], p.s));
        if (!result.residuals.empty() && res > result.residuals.back()) {
            if (++growth_streak >= 3)
                throw std::runtime_error(
                    "picard_iterate: residual grew three sweeps in a row (diverging)");
        } else {
            growth_streak = 0;
        }
        result.residuals.push_back(res);
        cur = std::move(next);
        if (res <= converged_floor) break;
    }
    result.final_state = cur.back();
    return result;
}

double time_of_existence(const QpField& u0, double s, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("time_of_existence: C must be > 0");
    const double base = l2_norm(frac_deriv(u0, s)) + l2_norm(u0);
    if (base == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (C * base);
}

double growth_envelope(double base, double C, double t) {
    if (!(base > 0.0)) throw std::invalid_argument("growth_envelope: base must be > 0");
    const double inv = 1.0 / base - C * t;
    if (!(inv > 0.0))
        throw std::domain_error("growth_envelope: t is at or beyond the blow-up time 1/(C base)");
    return 1.0 / inv;
}

double apriori_envelope(const QpField& u0, double s, double C, double t) {
    const double hs = sobolev_norm(u0, s);
    return hs + growth_envelope(hs, C, t);
}

} // namespace qpbo
