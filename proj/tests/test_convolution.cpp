#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "qpbo/convolution.hpp"

using namespace qpbo;
using cx = std::complex<double>;

namespace {

int box_len(int k, int nd) {
    int len = 1;
    for (int d = 0; d < nd; ++d) len *= 2 * k + 1;
    return len;
}

Coeffs random_coeffs(int k, int nd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Coeffs out(static_cast<std::size_t>(box_len(k, nd)));
    for (auto& c : out) c = cx(u(rng), u(rng));
    return out;
}

double max_diff(const Coeffs& a, const Coeffs& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("next_fast_size returns the least 7-smooth length") {
    CHECK(next_fast_size(1) == 1);
    CHECK(next_fast_size(7) == 7);
    CHECK(next_fast_size(11) == 12);
    CHECK(next_fast_size(13) == 14);
    CHECK(next_fast_size(129) == 135);
    CHECK(next_fast_size(121) == 125);
    CHECK(next_fast_size(128) == 128);
}

TEST_CASE("direct convolution matches the 1D hand oracle") {
    // (1,2,3) * (4,5,6) as polynomial coefficient sequences.
    Coeffs a = {cx(1), cx(2), cx(3)};
    Coeffs b = {cx(4), cx(5), cx(6)};
    auto c = convolve_direct(a, 1, b, 1, 1);
    REQUIRE(c.size() == 5);
    CHECK(c[0].real() == doctest::Approx(4.0));
    CHECK(c[1].real() == doctest::Approx(13.0));
    CHECK(c[2].real() == doctest::Approx(28.0));
    CHECK(c[3].real() == doctest::Approx(27.0));
    CHECK(c[4].real() == doctest::Approx(18.0));
    for (const auto& v : c) CHECK(std::abs(v.imag()) == 0.0);
}

TEST_CASE("convolving with a delta at the origin is the identity") {
    auto a = random_coeffs(4, 2, 11);
    Coeffs delta = {cx(1.0)}; // box radius 0 in 2D is the single point k = 0
    auto direct = convolve_direct(a, 4, delta, 0, 2);
    auto fft = convolve_fft(a, 4, delta, 0, 2);
    CHECK(max_diff(direct, a) == 0.0);
    CHECK(max_diff(fft, a) <= 1e-14);
}

TEST_CASE("fft route equals the direct oracle on seeded full-box pairs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto a = random_coeffs(6, 2, 100 + seed);
        auto b = random_coeffs(6, 2, 200 + seed);
        auto d = convolve_direct(a, 6, b, 6, 2);
        auto f = convolve_fft(a, 6, b, 6, 2);
        CHECK(max_diff(d, f) <= 1e-13);
    }
    // Mixed radii and 1D / 3D shapes.
    {
        auto a = random_coeffs(5, 1, 7);
        auto b = random_coeffs(9, 1, 8);
        CHECK(max_diff(convolve_direct(a, 5, b, 9, 1), convolve_fft(a, 5, b, 9, 1)) <= 1e-13);
    }
    {
        auto a = random_coeffs(2, 3, 9);
        auto b = random_coeffs(3, 3, 10);
        CHECK(max_diff(convolve_direct(a, 2, b, 3, 3), convolve_fft(a, 2, b, 3, 3)) <= 1e-13);
    }
}

TEST_CASE("convolution commutes") {
    auto a = random_coeffs(3, 2, 21);
    auto b = random_coeffs(5, 2, 22);
    CHECK(max_diff(convolve_fft(a, 3, b, 5, 2), convolve_fft(b, 5, a, 3, 2)) <= 1e-13);
    CHECK(max_diff(convolve_direct(a, 3, b, 5, 2), convolve_direct(b, 5, a, 3, 2)) <= 1e-13);
}

TEST_CASE("aliased cyclic product wraps exactly when it should") {
    const int k = 8;
    const int nd = 2;

    // Operands supported inside radius k/2: products stay inside the box, so
    // the un-padded cyclic route agrees with the central slab of the exact one.
    auto a = random_coeffs(4, nd, 31);
    auto b = random_coeffs(4, nd, 32);
    const int len = box_len(k, nd);
    Coeffs a_in(static_cast<std::size_t>(len)), b_in(static_cast<std::size_t>(len));
    // embed radius-4 arrays in the radius-8 box
    for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) {
            auto src = static_cast<std::size_t>((i + 4) * 9 + (j + 4));
            auto dst = static_cast<std::size_t>((i + 8) * 17 + (j + 8));
            a_in[dst] = a[src];
            b_in[dst] = b[src];
        }
    auto aliased = convolve_cyclic_aliased(a_in, b_in, k, nd);
    auto exact_full = convolve_fft(a_in, k, b_in, k, nd); // radius 2k
    // central radius-k slab of the exact result
    Coeffs exact_central(static_cast<std::size_t>(len));
    for (int i = -k; i <= k; ++i)
        for (int j = -k; j <= k; ++j) {
            auto src = static_cast<std::size_t>((i + 2 * k) * (4 * k + 1) + (j + 2 * k));
            auto dst = static_cast<std::size_t>((i + k) * (2 * k + 1) + (j + k));
            exact_central[dst] = exact_full[src];
        }
    CHECK(max_diff(aliased, exact_central) <= 1e-13);

    // Full-box operands must disagree: wraparound folds real mass back in.
    auto a_full = random_coeffs(k, nd, 41);
    auto b_full = random_coeffs(k, nd, 42);
    auto wrapped = convolve_cyclic_aliased(a_full, b_full, k, nd);
    auto exact2 = convolve_fft(a_full, k, b_full, k, nd);
    Coeffs exact2_central(static_cast<std::size_t>(len));
    for (int i = -k; i <= k; ++i)
        for (int j = -k; j <= k; ++j) {
            auto src = static_cast<std::size_t>((i + 2 * k) * (4 * k + 1) + (j + 2 * k));
            auto dst = static_cast<std::size_t>((i + k) * (2 * k + 1) + (j + k));
            exact2_central[dst] = exact2[src];
        }
    CHECK(max_diff(wrapped, exact2_central) > 1e-3);
}
