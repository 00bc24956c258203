/**
 * convolution.hpp: low-level lattice convolutions behind coefficient
 * products. Arrays are flat row-major complex coefficients over symmetric
 * boxes [-K,K]^N in the FrequencyBasis enumeration order.
 *
 * Two independent routes compute the exact (dealiased) convolution:
 *
 *  - convolve_direct: the O(Ma*Mb) double sum. Slow, obviously correct; this
 *    is the oracle the fast path is checked against.
 *  - convolve_fft: zero-padded cyclic convolution on a grid of at least
 *    2(Ka+Kb)+1 points per axis (>= 4K+1 for same-box operands), so the
 *    cyclic wrap never touches occupied modes and the result equals the
 *    linear convolution to rounding.
 *
 * convolve_cyclic_aliased is the classic un-padded pseudospectral product on
 * the (2K+1)^N grid; its wraparound error is deliberate (negative controls).
 */

#ifndef QPBO_CONVOLUTION_HPP
#define QPBO_CONVOLUTION_HPP

#include <complex>
#include <vector>

namespace qpbo {

using Coeffs = std::vector<std::complex<double>>;

// Exact convolution of a (box radius ka) with b (box radius kb), both in
// dimension nd; the result lives on the Minkowski-sum box of radius ka+kb.
Coeffs convolve_direct(const Coeffs& a, int ka, const Coeffs& b, int kb, int nd);
Coeffs convolve_fft(const Coeffs& a, int ka, const Coeffs& b, int kb, int nd);

// Cyclic convolution of two same-box arrays on the (2k+1)^N grid without
// padding: frequencies beyond the box wrap around (aliasing).
Coeffs convolve_cyclic_aliased(const Coeffs& a, const Coeffs& b, int k, int nd);

// Smallest grid length >= n whose prime factors are all in {2,3,5,7}.
int next_fast_size(int n);

} // namespace qpbo

#endif // QPBO_CONVOLUTION_HPP
