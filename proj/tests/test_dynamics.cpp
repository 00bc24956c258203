#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "qpbo/dynamics.hpp"
#include "test_helpers.hpp"

using namespace qpbo;
using namespace qpbo::testing;
using cx = std::complex<double>;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
} // namespace

TEST_CASE("right-hand side of the untruncated equation on cos(x)") {
    auto basis = desk_basis(8);
    auto u = cos_field(basis);
    // u u_x + H u_xx = -sin(2x)/2 - sin(x)
    auto oracle = make_field(basis, {{{1, 0}, cx(0.0, 0.5)}, {{2, 0}, cx(0.0, 0.25)}});
    auto rhs = bo_rhs(u, kInf);
    CHECK(max_abs_diff(rhs, oracle) <= 1e-15);
    CHECK(max_abs_diff(bo_rhs(u, kInf, ConvRoute::direct), oracle) <= 1e-15);

    // the two halves reassemble the whole
    auto parts = nonlinear_term(u, kInf) + linear_term(u, kInf);
    CHECK(max_abs_diff(parts, rhs) <= 1e-15);

    // mean defect is pinned exactly; momentum defect is rounding
    CHECK(mass(rhs) == 0.0);
    CHECK(std::abs(pair(rhs, u)) <= 1e-15);
}

TEST_CASE("flow_rhs honors the enable flags") {
    auto basis = desk_basis(8);
    auto u = two_cosine(basis);
    FlowParams p;
    p.n = 4.0;
    p.enable_linear = false;
    CHECK(max_abs_diff(flow_rhs(u, p), nonlinear_term(u, 4.0)) == 0.0);
    p.enable_linear = true;
    p.enable_nonlinear = false;
    CHECK(max_abs_diff(flow_rhs(u, p), linear_term(u, 4.0)) == 0.0);
}

TEST_CASE("linear phase rotation is exact and unitary") {
    auto basis = desk_basis(8);
    auto u = two_cosine(basis);
    CHECK(max_abs_diff(linear_phase(u, 0.0), u) == 0.0);

    const double t = 0.37;
    auto v = linear_phase(u, t);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(std::abs(v[i]) == doctest::Approx(std::abs(u[i])).epsilon(1e-15));
    // mode (1,0): alpha.k = 1 > 0, so the factor is exp(i t)
    CHECK(v.at({1, 0}) == cx(0.5 * std::cos(t), 0.5 * std::sin(t)));
}

TEST_CASE("integrating-factor stepper reproduces the free dispersive flow") {
    auto basis = desk_basis(8);
    auto u0 = random_field(basis, 3, 2.5, 1e9);
    FlowParams p;
    p.n = kInf;
    p.enable_nonlinear = false;
    p.dt = 1e-3;
    p.t_end = 0.02;
    auto out = evolve(u0, p, 5);
    REQUIRE_FALSE(out.blew_up);
    auto expect = linear_phase(u0, p.t_end);
    CHECK(max_abs_diff(out.trajectory.states.back(), expect) <= 1e-12);
}

TEST_CASE("modes at or above the cutoff are frozen bit-exactly") {
    auto basis = desk_basis(8);
    // |alpha.(2,0)| = 2 is frozen at n = 2; the low pair evolves.
    auto u0 = make_field(basis, {{{1, 0}, 0.5}, {{0, 1}, 0.5}, {{2, 0}, 0.25}});
    CHECK(bo_rhs(u0, 2.0).at({2, 0}) == cx(0.0, 0.0));

    FlowParams p;
    p.n = 2.0;
    p.dt = 1e-3;
    p.t_end = 0.01;
    for (auto method : {Integrator::ifrk4, Integrator::rk4}) {
        p.integrator = method;
        auto out = evolve(u0, p, 100);
        REQUIRE_FALSE(out.blew_up);
        const auto& fin = out.trajectory.states.back();
        CHECK(fin.at({2, 0}) == cx(0.25, 0.0));
        CHECK(fin.at({-2, 0}) == cx(0.25, 0.0));
        CHECK(std::abs(fin.at({1, 0}) - cx(0.5, 0.0)) > 1e-6); // low mode moved
    }
}

TEST_CASE("evolve lands exactly on t_end and snapshots on the stride") {
    auto basis = desk_basis(8);
    auto u0 = two_cosine(basis);
    FlowParams p;
    p.n = 4.0;
    p.dt = 1e-3;
    p.t_end = 0.0105; // ten full steps plus a short one
    auto out = evolve(u0, p, 10, {2.5});
    REQUIRE_FALSE(out.blew_up);
    const auto& tr = out.trajectory;
    REQUIRE(tr.times.size() == 3);
    CHECK(tr.times[0] == 0.0);
    CHECK(tr.times[1] == doctest::Approx(0.010).epsilon(1e-12));
    CHECK(tr.times.back() == doctest::Approx(0.0105).epsilon(1e-12));
    CHECK(tr.states.size() == tr.times.size());
    REQUIRE(tr.reports.size() == tr.times.size());

    for (const auto& rep : tr.reports) {
        CHECK(rep.sobolev_norms.count(2.5) == 1);
        REQUIRE(rep.identity_residuals.count("rhs_mean_defect") == 1);
        REQUIRE(rep.identity_residuals.count("rhs_momentum_defect") == 1);
        CHECK(rep.identity_residuals.at("rhs_mean_defect") == 0.0);
        CHECK(rep.identity_residuals.at("rhs_momentum_defect") <= 1e-13);
    }
}

TEST_CASE("delta regularization is applied to the initial datum") {
    auto basis = desk_basis(8);
    auto u0 = make_field(basis, {{{1, 0}, 0.5}, {{0, 1}, 0.5}, {{3, 4}, 0.1}});
    FlowParams p;
    p.n = 4.0;
    p.delta = 2.0; // |(3,4)| = 5 > 2 is stripped before stepping
    p.dt = 1e-3;
    p.t_end = 0.002;
    auto out = evolve(u0, p, 1);
    const auto& first = out.trajectory.states.front();
    CHECK(first.at({3, 4}) == cx(0.0, 0.0));
    CHECK(first.at({1, 0}) == cx(0.5, 0.0));
}

TEST_CASE("classic rk4 beyond its stability limit is reported as blow-up") {
    auto basis = desk_basis(8);
    auto u0 = two_cosine(basis);
    FlowParams p;
    p.n = kInf; // lambda_max ~ 19.3, so dt = 0.1 is far outside stability
    p.integrator = Integrator::rk4;
    p.dt = 0.1;
    p.t_end = 5.0;
    auto out = evolve(u0, p, 1);
    CHECK(out.blew_up);
    CHECK(out.blowup_time > 0.0);
    CHECK(out.blowup_time < 5.0);
    CHECK(out.trajectory.times.size() >= 1); // partial trajectory survives
}

TEST_CASE("default_dt follows the cutoff-capped stability rule") {
    auto basis = desk_basis(32);
    CHECK(default_dt(*basis, 8.0, Integrator::rk4) ==
          doctest::Approx(0.5 / 64.0).epsilon(1e-15));
    CHECK(default_dt(*basis, 8.0, Integrator::ifrk4) ==
          doctest::Approx(5.0 / 64.0).epsilon(1e-15));
    const double lam = basis->max_physical_frequency();
    CHECK(default_dt(*basis, kInf, Integrator::rk4) ==
          doctest::Approx(0.5 / (lam * lam)).epsilon(1e-14));
}

TEST_CASE("picard iteration contracts geometrically inside its window") {
    auto basis = desk_basis(8);
    auto u0 = two_cosine(basis);
    FlowParams p;
    p.n = 4.0;
    p.s = 2.5;

    // contraction heuristic: 1/(lambda^2 + 2 lambda ||u0||_l1) = 1/32 here
    CHECK_THROWS_AS(picard_iterate(u0, p, 0.05, 8), std::invalid_argument);

    auto res = picard_iterate(u0, p, 0.01, 12);
    REQUIRE(res.residuals.size() >= 6);
    for (std::size_t i = 0; i + 1 < 5; ++i)
        CHECK(res.residuals[i + 1] <= 0.6 * res.residuals[i]);
    CHECK(res.residuals.back() <= 1e-6);
    CHECK(l2_norm(res.final_state) > 0.9); // sanity: nothing collapsed
}

TEST_CASE("one integrator step agrees with the picard solution to fifth order") {
    auto basis = desk_basis(8);
    auto u0 = two_cosine(basis);
    FlowParams p;
    p.n = 4.0;
    p.dt = 1e-3;

    auto ref = picard_iterate(u0, p, p.dt, 20).final_state;
    auto one = step_ifrk4(u0, p);
    CHECK(l2_norm(one - ref) <= 1e-13);

    // halving the step shrinks the defect by roughly 2^4 (global order four)
    FlowParams big = p;
    big.dt = 8e-3;
    auto ref_big = picard_iterate(u0, big, big.dt, 24).final_state;
    auto coarse = step_ifrk4(u0, big);
    FlowParams half = p;
    half.dt = 4e-3;
    auto fine = step_ifrk4(step_ifrk4(u0, half), half, half.dt);
    const double e_big = l2_norm(coarse - ref_big);
    const double e_half = l2_norm(fine - ref_big);
    REQUIRE(e_half > 0.0);
    const double ratio = e_big / e_half;
    CHECK(ratio > 8.0);
    CHECK(ratio < 40.0);
}

TEST_CASE("existence time and growth envelopes") {
    auto basis = desk_basis(8);
    auto u0 = two_cosine(basis);
    // ||D^2.5 u0|| = ||u0|| = 1, so T = 1/(C * 2)
    CHECK(time_of_existence(u0, 2.5, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(time_of_existence(u0, 2.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    QpField zero(basis);
    CHECK(time_of_existence(zero, 2.5, 1.0) == kInf);

    CHECK(growth_envelope(2.0, 1.0, 0.25) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(growth_envelope(2.0, 1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(growth_envelope(2.0, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(growth_envelope(2.0, 1.0, 0.6), std::domain_error);

    const double hs0 = sobolev_norm(u0, 2.5);
    CHECK(apriori_envelope(u0, 2.5, 1.0, 0.0) ==
          doctest::Approx(2.0 * hs0).epsilon(1e-14));
}
