#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "qpbo/field.hpp"
#include "test_helpers.hpp"

using namespace qpbo;
using namespace qpbo::testing;
using cx = std::complex<double>;

TEST_CASE("make_field closes mode lists under Hermitian symmetry") {
    auto basis = desk_basis(4);
    auto u = make_field(basis, {{{1, 0}, cx(0.3, 0.4)}});
    CHECK(u.at({1, 0}) == cx(0.3, 0.4));
    CHECK(u.at({-1, 0}) == cx(0.3, -0.4));
    CHECK(hermitian_defect(u) == 0.0);
    CHECK(u.is_real());

    // mean coefficient of a real field is forced real
    auto v = make_field(basis, {{{0, 0}, cx(0.2, 0.7)}});
    CHECK(v.at({0, 0}).imag() == 0.0);
    CHECK(v.at({0, 0}).real() == doctest::Approx(0.2));

    // complex fields keep exactly what was listed
    auto w = make_field(basis, {{{1, 0}, cx(1.0, 0.0)}}, false);
    CHECK(w.at({-1, 0}) == cx(0.0, 0.0));
    CHECK_FALSE(w.is_real());

    CHECK_THROWS_AS(make_field(basis, {{{5, 0}, 1.0}}), std::out_of_range);
}

TEST_CASE("evaluate reconstructs the almost periodic profile") {
    auto basis = desk_basis(8);
    auto u = two_cosine(basis);
    CHECK(evaluate(u, 0.0).real() == doctest::Approx(2.0).epsilon(1e-15));
    const double x = 0.7;
    CHECK(evaluate(u, x).real() ==
          doctest::Approx(std::cos(x) + std::cos(std::sqrt(2.0) * x)).epsilon(1e-14));
    CHECK(std::abs(evaluate(u, x).imag()) <= 1e-15);

    auto e = make_field(basis, {{{1, 0}, 1.0}}, false);
    auto val = evaluate(e, 0.5);
    CHECK(val.real() == doctest::Approx(std::cos(0.5)).epsilon(1e-15));
    CHECK(val.imag() == doctest::Approx(std::sin(0.5)).epsilon(1e-15));
}

TEST_CASE("hilbert transform: -i sgn(alpha.k), mean killed, H^2 = -(1 - mean)") {
    auto basis = desk_basis(8);
    auto u = cos_field(basis);
    auto hu = hilbert(u);
    // H cos = sin
    auto sin_field = make_field(basis, {{{1, 0}, cx(0.0, -0.5)}});
    CHECK(max_abs_diff(hu, sin_field) == 0.0);

    auto with_mean = make_field(basis, {{{0, 0}, 0.3}, {{1, 0}, 0.5}, {{0, 1}, 0.5}});
    CHECK(hilbert(with_mean).at({0, 0}) == cx(0.0, 0.0));
    auto twice = hilbert(hilbert(with_mean));
    auto expect = -1.0 * mean_zero(with_mean);
    CHECK(max_abs_diff(twice, expect) <= 1e-16);
}

TEST_CASE("d_dx multiplies by i alpha.k") {
    auto basis = desk_basis(8);
    auto du = d_dx(cos_field(basis));
    // d/dx cos(x) = -sin(x), whose +e1 coefficient is i/2
    CHECK(du.at({1, 0}) == cx(0.0, 0.5));
    CHECK(du.at({-1, 0}) == cx(0.0, -0.5));
    auto dv = d_dx(make_field(basis, {{{0, 1}, 0.5}}));
    CHECK(dv.at({0, 1}).imag() == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("fractional derivative weights and the s = 0 convention") {
    auto basis = desk_basis(8);
    auto u = make_field(basis, {{{0, 0}, 0.4}, {{1, 2}, cx(0.1, 0.2)}});

    auto d0 = frac_deriv(u, 0.0);
    CHECK(max_abs_diff(d0, u) == 0.0); // identity, mean included

    auto d2 = frac_deriv(u, 2.0);
    CHECK(d2.at({1, 2}) == cx(0.5, 1.0));  // |k|^2 = 5
    CHECK(d2.at({0, 0}) == cx(0.0, 0.0));  // mean killed for s > 0

    CHECK_THROWS_AS(frac_deriv(u, -0.5), std::domain_error);
}

TEST_CASE("sharp cutoff chi_n is strict in the physical frequency") {
    auto basis = desk_basis(8);
    auto u = make_field(basis, {{{1, 0}, 0.5}, {{0, 1}, 0.5}, {{2, 0}, 0.25}});

    // |alpha.(2,0)| = 2 is not < 2, so n = 2 removes it; sqrt(2) < 2 stays.
    auto cut = chi_cutoff(u, 2.0);
    CHECK(cut.at({2, 0}) == cx(0.0, 0.0));
    CHECK(cut.at({1, 0}) == cx(0.5, 0.0));
    CHECK(cut.at({0, 1}) == cx(0.5, 0.0));

    auto id = chi_cutoff(u, std::numeric_limits<double>::infinity());
    CHECK(max_abs_diff(id, u) == 0.0);

    CHECK_THROWS_AS(chi_cutoff(u, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chi_cutoff(u, -1.0), std::invalid_argument);
}

TEST_CASE("delta regularizer keeps the closed Euclidean ball") {
    auto basis = desk_basis(8);
    auto u = make_field(basis, {{{0, 0}, 0.3}, {{3, 4}, cx(0.1, 0.0)}});

    auto kept = delta_regularize(u, 5.0); // |(3,4)| = 5, non-strict
    CHECK(kept.at({3, 4}) == cx(0.1, 0.0));
    CHECK(kept.at({0, 0}) == cx(0.3, 0.0)); // mean always inside

    auto cut = delta_regularize(u, 4.999);
    CHECK(cut.at({3, 4}) == cx(0.0, 0.0));
    CHECK(cut.at({0, 0}) == cx(0.3, 0.0));

    CHECK_THROWS_AS(delta_regularize(u, 0.0), std::invalid_argument);
}

TEST_CASE("multiply matches the cos^2 oracle on both exact routes") {
    auto basis = desk_basis(8);
    auto u = cos_field(basis);
    // cos^2 x = 1/2 + cos(2x)/2
    auto oracle = make_field(basis, {{{0, 0}, 0.5}, {{2, 0}, 0.25}});
    CHECK(max_abs_diff(multiply(u, u, ConvRoute::fft), oracle) <= 1e-15);
    CHECK(max_abs_diff(multiply(u, u, ConvRoute::direct), oracle) <= 1e-15);
    CHECK(hermitian_defect(multiply(u, u)) == 0.0);
}

TEST_CASE("multiply projects while multiply_full keeps the carrier box") {
    auto basis = desk_basis(1);
    auto u = cos_field(basis);
    auto projected = multiply(u, u);
    CHECK(projected.basis().box_radius() == 1);
    CHECK(projected.at({0, 0}).real() == doctest::Approx(0.5).epsilon(1e-15));
    // the cos(2x)/2 component fell outside the radius-1 box

    auto full = multiply_full(u, u);
    CHECK(full.basis().box_radius() == 2);
    CHECK(full.at({2, 0}).real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(full.at({0, 0}).real() == doctest::Approx(0.5).epsilon(1e-15));

    // refitting the carrier product back equals the projected product
    CHECK(max_abs_diff(refit(full, u.basis_ptr()), projected) <= 1e-15);
}

TEST_CASE("pairing form and norms on the two-cosine datum") {
    auto basis = desk_basis(8);
    auto u = two_cosine(basis);

    auto self = pair(u, u);
    CHECK(self.real() == doctest::Approx(1.0).epsilon(1e-15)); // = l2 norm squared
    CHECK(std::abs(self.imag()) <= 1e-16);

    CHECK(std::abs(pair(d_dx(u), u)) <= 1e-14); // antisymmetric pairing

    CHECK(l2_norm(u) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(l1_coeff_norm(u) == doctest::Approx(2.0).epsilon(1e-15));
    // each mode has (1+1)^{2.5} weight: norm = 2^{1.25}
    CHECK(sobolev_norm(u, 2.5) ==
          doctest::Approx(2.37841423000544213).epsilon(1e-15));
    CHECK(sobolev_norm(u, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("leibniz commutator on a single mode pair") {
    auto basis = desk_basis(4);
    auto u = make_field(basis, {{{1, 0}, 1.0}}, false);
    auto v = make_field(basis, {{{0, 1}, 1.0}}, false);
    const double s = 2.0;
    auto c = leibniz_commutator(u, v, s);
    // D^s(uv) - u D^s v at (1,1): |(1,1)|^2 - |(0,1)|^2 = 2 - 1 = 1
    CHECK(c.at({1, 1}).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(c.at({1, 1}).imag()) <= 1e-15);
    CHECK(c.basis().box_radius() == 8); // carrier box
}

TEST_CASE("refit and embed_enlarged round trip bit-exactly") {
    auto basis = desk_basis(6);
    auto u = random_field(basis, 5, 2.5, 1e9);
    auto big = embed_enlarged(u, 2);
    CHECK(big.basis().box_radius() == 12);
    auto back = refit(big, u.basis_ptr());
    CHECK(max_abs_diff(back, u) == 0.0);

    // refit to a smaller box truncates
    auto small = refit(u, make_basis(basis->alpha(), 2));
    CHECK(small.basis().box_radius() == 2);
    CHECK(small.at({1, 1}) == u.at({1, 1}));
}

TEST_CASE("field arithmetic") {
    auto basis = desk_basis(4);
    auto u = two_cosine(basis);
    auto v = cos_field(basis);
    auto w = u - v;
    CHECK(w.at({1, 0}) == cx(0.0, 0.0));
    CHECK(w.at({0, 1}) == cx(0.5, 0.0));
    auto sum = w + v;
    CHECK(max_abs_diff(sum, u) == 0.0);
    auto twice = 2.0 * u;
    CHECK(twice.at({0, 1}) == cx(1.0, 0.0));
}

TEST_CASE("symmetrize repairs a perturbed real field") {
    auto basis = desk_basis(4);
    auto u = two_cosine(basis);
    u[basis->to_index({1, 0})] += cx(1e-3, 2e-3);
    CHECK(hermitian_defect(u) > 1e-4);
    symmetrize(u);
    CHECK(hermitian_defect(u) == 0.0);
}

TEST_CASE("random fields are deterministic with the advertised profile") {
    auto basis = desk_basis(8);
    auto u1 = random_field(basis, 42, 2.5, 1e9);
    auto u2 = random_field(basis, 42, 2.5, 1e9);
    CHECK(max_abs_diff(u1, u2) == 0.0);
    auto u3 = random_field(basis, 43, 2.5, 1e9);
    CHECK(max_abs_diff(u1, u3) > 0.0);

    CHECK(hermitian_defect(u1) == 0.0);
    CHECK(u1.at({0, 0}) == cx(0.0, 0.0));

    // support radius is honored and amplitudes follow the decay profile
    auto v = random_field(basis, 7, 3.0, 3.0, true, 2.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto k = basis->point_at(i);
        const auto n2 = basis->norm2(i);
        if (n2 > 9) {
            CHECK(v[i] == cx(0.0, 0.0));
        } else if (n2 > 0) {
            const double profile = japanese_bracket(n2, -(3.0 + 1.0) / 2.0);
            CHECK(std::abs(v[i]) <= 2.0 * profile * (1.0 + 1e-12));
            CHECK(std::abs(v[i]) >= 0.5 * 2.0 * profile * (1.0 - 1e-12));
        }
    }

    // mean_zero = false keeps a mean coefficient
    auto w = random_field(basis, 7, 3.0, 3.0, false, 1.0);
    CHECK(std::abs(w.at({0, 0})) > 0.0);
}
