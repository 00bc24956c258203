/**
 * field.hpp: coefficient fields over a truncated frequency lattice and the
 * Fourier-multiplier / product operations on them.
 *
 * A QpField is a dense array of complex coefficients u_hat(k) over the box of
 * its FrequencyBasis, together with a reality flag. Real fields keep the
 * Hermitian constraint u_hat(-k) = conj(u_hat(k)) with a real mean
 * coefficient; operations that can disturb it at rounding level (products)
 * re-symmetrize their result.
 *
 * All operators are value-semantic free functions: multipliers act
 * coefficientwise, products are exact dealiased convolutions (the cyclic
 * grid is padded so no occupied mode wraps), and the pairing sum
 * pair(u,v) = sum_k u_hat(k) v_hat(-k) is the bilinear form every identity
 * and conserved functional reduces to.
 */

#ifndef QPBO_FIELD_HPP
#define QPBO_FIELD_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "qpbo/convolution.hpp"
#include "qpbo/lattice.hpp"

namespace qpbo {

class QpField {
  public:
    // Zero field on the given basis.
    explicit QpField(BasisPtr basis, bool is_real = true);
    // Take ownership of a coefficient array (must match basis size).
    QpField(BasisPtr basis, Coeffs coeffs, bool is_real);

    const FrequencyBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    bool is_real() const { return is_real_; }
    std::size_t size() const { return c_.size(); }

    const Coeffs& coeffs() const { return c_; }
    Coeffs& coeffs() { return c_; }
    std::complex<double> operator[](std::size_t i) const { return c_[i]; }
    std::complex<double>& operator[](std::size_t i) { return c_[i]; }

    std::complex<double> at(const LatticePoint& k) const { return c_[basis_->to_index(k)]; }

  private:
    BasisPtr basis_;
    Coeffs c_;
    bool is_real_;
};

// One prescribed mode for make_field.
struct Mode {
    LatticePoint k;
    std::complex<double> amplitude;
};

/**
 * Field with exactly the given coefficients, all others zero. With is_real,
 * the list is closed under Hermitian symmetry: a mode whose mirror is not
 * itself listed gets the conjugate amplitude at -k (so a single entry
 * (k, 1/2) spells cos((alpha.k)x)), and the result is then symmetrized.
 * Throws std::out_of_range if a point lies outside the box.
 */
QpField make_field(BasisPtr basis, const std::vector<Mode>& modes, bool is_real = true);

// u(x) = sum_k u_hat(k) exp(i (alpha.k) x); for real fields the imaginary
// part is rounding residue the caller can inspect.
std::complex<double> evaluate(const QpField& u, double x);

// Hilbert transform: multiplier -i sgn(alpha.k), sgn(0) = 0 (kills the mean).
QpField hilbert(const QpField& u);

// d/dx: multiplier i (alpha.k).
QpField d_dx(const QpField& u);

// D^s: multiplier |k|^s (Euclidean; weight 0 at k = 0). s = 0 is the
// identity, mean included. Throws std::domain_error for s < 0.
QpField frac_deriv(const QpField& u, double s);

// Sharp cutoff chi_n: keeps modes with |alpha.k| < n (strict). n = +infinity
// acts as the identity. Throws std::invalid_argument unless n > 0.
QpField chi_cutoff(const QpField& u, double n);

// Data regularizer: keeps modes with Euclidean |k| <= delta (non-strict).
// Throws std::invalid_argument unless delta > 0.
QpField delta_regularize(const QpField& u, double delta);

// Which convolution engine a product uses. `fft` and `direct` are exact
// (dealiased) and agree to rounding; `aliased` is the un-padded cyclic
// product kept for negative controls.
enum class ConvRoute { fft, direct, aliased };

// Product projected back onto the operands' box: exact convolution on the
// Minkowski-sum box, then truncation. Operands must share a basis (same
// alpha, same radius).
QpField multiply(const QpField& u, const QpField& v, ConvRoute route = ConvRoute::fft);

// Product on the full Minkowski-sum box (radius Ka+Kb carrier basis), for
// callers that need exactness downstream (functionals, commutators).
QpField multiply_full(const QpField& u, const QpField& v, ConvRoute route = ConvRoute::fft);

// sqrt(sum (1+|k|^2)^s |u_hat|^2).
double sobolev_norm(const QpField& u, double s);
double l2_norm(const QpField& u);

// sum |u_hat(k)|.
double l1_coeff_norm(const QpField& u);

// Pairing sum_k u_hat(k) v_hat(-k); real (up to rounding) when both fields
// are real. Fields must share a basis.
std::complex<double> pair(const QpField& u, const QpField& v);

// D^s(uv) - u D^s v with both products exact; the result lives on the
// Minkowski-sum carrier box.
QpField leibniz_commutator(const QpField& u, const QpField& v, double s);

// Copy u onto another box with the same alpha: coefficients shared with the
// target box are kept, the rest are zero-padded or truncated away.
QpField refit(const QpField& u, const BasisPtr& target);

// Zero-pad u onto its basis' factor-enlarged carrier box.
QpField embed_enlarged(const QpField& u, int factor);

// Arithmetic (same basis required).
QpField operator+(const QpField& u, const QpField& v);
QpField operator-(const QpField& u, const QpField& v);
QpField operator*(double a, const QpField& u);

// Enforce the Hermitian constraint by averaging u_hat(k) with
// conj(u_hat(-k)) (and making the mean real). No-op for complex fields.
void symmetrize(QpField& u);

// max_k |u_hat(k) - conj(u_hat(-k))|: how far a field is from Hermitian.
double hermitian_defect(const QpField& u);

// Subtract the mean coefficient.
QpField mean_zero(const QpField& u);

/**
 * Deterministic seeded field with decay profile |u_hat(k)| ~ (1+|k|^2)^
 * (-(decay_s+1)/2), random phases, unit-order amplitudes in [amplitude/2,
 * amplitude]. Modes outside Euclidean radius `support_radius` stay zero
 * (pass +infinity for full-box support). Mean-zero unless mean_zero = false.
 * The generator is hand-rolled from mt19937_64 bits so outputs are stable
 * across standard libraries.
 */
QpField random_field(const BasisPtr& basis, std::uint64_t seed, double decay_s,
                     double support_radius, bool mean_zero = true,
                     double amplitude = 1.0);

} // namespace qpbo

#endif // QPBO_FIELD_HPP
