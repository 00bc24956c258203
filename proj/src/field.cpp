#include "qpbo/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace qpbo {

namespace {

void require_same_basis(const QpField& u, const QpField& v, const char* op) {
    if (!u.basis().same_as(v.basis()))
        throw std::invalid_argument(std::string(op) + ": operands live on different bases");
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Extract the central [-kt,kt]^nd sub-box from an array over [-kc,kc]^nd.
Coeffs central_box(const Coeffs& big, int kc, int nd, int kt) {
    const std::size_t side_c = 2 * static_cast<std::size_t>(kc) + 1;
    Coeffs out;
    out.reserve(static_cast<std::size_t>(std::pow(2.0 * kt + 1.0, nd)));
    std::vector<int> c(nd, -kt);
    const std::size_t total_t = [&] {
        std::size_t t = 1;
        for (int d = 0; d < nd; ++d) t *= 2 * static_cast<std::size_t>(kt) + 1;
        return t;
    }();
    for (std::size_t i = 0; i < total_t; ++i) {
        std::size_t g = 0;
        for (int d = 0; d < nd; ++d)
            g = g * side_c + static_cast<std::size_t>(c[d] + kc);
        out.push_back(big[g]);
        for (int d = nd - 1; d >= 0; --d) {
            if (++c[d] <= kt) break;
            c[d] = -kt;
        }
    }
    return out;
}

Coeffs run_convolution(const QpField& u, const QpField& v, ConvRoute route, int kout) {
    const int k = u.basis().box_radius();
    const int nd = u.basis().dim();
    switch (route) {
        case ConvRoute::fft: {
            Coeffs full = convolve_fft(u.coeffs(), k, v.coeffs(), k, nd);
            return kout == 2 * k ? full : central_box(full, 2 * k, nd, kout);
        }
        case ConvRoute::direct: {
            Coeffs full = convolve_direct(u.coeffs(), k, v.coeffs(), k, nd);
            return kout == 2 * k ? full : central_box(full, 2 * k, nd, kout);
        }
        case ConvRoute::aliased: {
            Coeffs same = convolve_cyclic_aliased(u.coeffs(), v.coeffs(), k, nd);
            if (kout != k)
                throw std::invalid_argument("multiply: aliased route has no enlarged result");
            return same;
        }
    }
    throw std::logic_error("multiply: unknown route");
}

} // namespace

QpField::QpField(BasisPtr basis, bool is_real)
    : basis_(std::move(basis)), c_(basis_->size(), {0.0, 0.0}), is_real_(is_real) {}

QpField::QpField(BasisPtr basis, Coeffs coeffs, bool is_real)
    : basis_(std::move(basis)), c_(std::move(coeffs)), is_real_(is_real) {
    if (c_.size() != basis_->size())
        throw std::invalid_argument("QpField: coefficient array does not match basis");
}

QpField make_field(BasisPtr basis, const std::vector<Mode>& modes, bool is_real) {
    QpField u(basis, is_real);
    std::set<std::size_t> given;
    for (const Mode& m : modes) {
        const std::size_t i = u.basis().to_index(m.k);
        u[i] = m.amplitude;
        given.insert(i);
    }
    if (is_real) {
        for (std::size_t i : given) {
            const std::size_t j = u.basis().mirror_index(i);
            if (i != j && given.count(j) == 0) u[j] = std::conj(u[i]);
        }
        symmetrize(u);
    }
    return u;
}

std::complex<double> evaluate(const QpField& u, double x) {
    std::complex<double> sum(0.0, 0.0);
    const FrequencyBasis& b = u.basis();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double phase = b.physical_frequency(i) * x;
        sum += u[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return sum;
}

QpField hilbert(const QpField& u) {
    QpField w = u;
    const FrequencyBasis& b = u.basis();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double s = sgn(b.physical_frequency(i));
        const std::complex<double> c = w[i];
        // (-i s) * (re + i im) = s*im - i s*re
        w[i] = std::complex<double>(s * c.imag(), -s * c.real());
    }
    return w;
}

QpField d_dx(const QpField& u) {
    QpField w = u;
    const FrequencyBasis& b = u.basis();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double f = b.physical_frequency(i);
        const std::complex<double> c = w[i];
        w[i] = std::complex<double>(-f * c.imag(), f * c.real());
    }
    return w;
}

QpField frac_deriv(const QpField& u, double s) {
    if (s < 0.0) throw std::domain_error("frac_deriv: order must be >= 0");
    if (s == 0.0) return u; // identity, mean included
    QpField w = u;
    const FrequencyBasis& b = u.basis();
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] *= euclid_weight(b.norm2(i), s);
    return w;
}

QpField chi_cutoff(const QpField& u, double n) {
    if (!(n > 0.0)) throw std::invalid_argument("chi_cutoff: level must satisfy n > 0");
    QpField w = u;
    const FrequencyBasis& b = u.basis();
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(std::abs(b.physical_frequency(i)) < n)) w[i] = {0.0, 0.0};
    return w;
}

QpField delta_regularize(const QpField& u, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta_regularize: radius must satisfy delta > 0");
    QpField w = u;
    const FrequencyBasis& b = u.basis();
    const double d2 = delta * delta;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (static_cast<double>(b.norm2(i)) > d2) w[i] = {0.0, 0.0};
    return w;
}

QpField multiply(const QpField& u, const QpField& v, ConvRoute route) {
    require_same_basis(u, v, "multiply");
    const int k = u.basis().box_radius();
    QpField w(u.basis_ptr(), run_convolution(u, v, route, k), u.is_real() && v.is_real());
    if (w.is_real()) symmetrize(w);
    return w;
}

QpField multiply_full(const QpField& u, const QpField& v, ConvRoute route) {
    require_same_basis(u, v, "multiply_full");
    if (route == ConvRoute::aliased)
        throw std::invalid_argument("multiply_full: aliased route has no enlarged result");
    const int k = u.basis().box_radius();
    QpField w(u.basis().enlarged(2), run_convolution(u, v, route, 2 * k),
              u.is_real() && v.is_real());
    if (w.is_real()) symmetrize(w);
    return w;
}

double sobolev_norm(const QpField& u, double s) {
    const FrequencyBasis& b = u.basis();
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sum += japanese_bracket(b.norm2(i), s) * std::norm(u[i]);
    return std::sqrt(sum);
}

double l2_norm(const QpField& u) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += std::norm(u[i]);
    return std::sqrt(sum);
}

double l1_coeff_norm(const QpField& u) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += std::abs(u[i]);
    return sum;
}

std::complex<double> pair(const QpField& u, const QpField& v) {
    require_same_basis(u, v, "pair");
    std::complex<double> sum(0.0, 0.0);
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) sum += u[i] * v[n - 1 - i];
    return sum;
}

QpField leibniz_commutator(const QpField& u, const QpField& v, double s) {
    require_same_basis(u, v, "leibniz_commutator");
    QpField lhs = frac_deriv(multiply_full(u, v), s);
    QpField rhs = multiply_full(u, frac_deriv(v, s));
    return lhs - rhs;
}

QpField refit(const QpField& u, const BasisPtr& target) {
    if (target->alpha() != u.basis().alpha() || target->dim() != u.basis().dim())
        throw std::invalid_argument("refit: target basis has different alpha");
    QpField w(target, u.is_real());
    const int kin = u.basis().box_radius();
    const int kshared = std::min(kin, target->box_radius());
    const int nd = u.basis().dim();
    std::vector<int> c(nd, -kshared);
    std::size_t count = 1;
    for (int d = 0; d < nd; ++d) count *= 2 * static_cast<std::size_t>(kshared) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        LatticePoint k(c.begin(), c.end());
        w[target->to_index(k)] = u[u.basis().to_index(k)];
        for (int d = nd - 1; d >= 0; --d) {
            if (++c[d] <= kshared) break;
            c[d] = -kshared;
        }
    }
    return w;
}

QpField embed_enlarged(const QpField& u, int factor) {
    return refit(u, u.basis().enlarged(factor));
}

QpField operator+(const QpField& u, const QpField& v) {
    require_same_basis(u, v, "operator+");
    QpField w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += v[i];
    return QpField(u.basis_ptr(), std::move(w.coeffs()), u.is_real() && v.is_real());
}

QpField operator-(const QpField& u, const QpField& v) {
    require_same_basis(u, v, "operator-");
    QpField w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= v[i];
    return QpField(u.basis_ptr(), std::move(w.coeffs()), u.is_real() && v.is_real());
}

QpField operator*(double a, const QpField& u) {
    QpField w = u;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= a;
    return w;
}

void symmetrize(QpField& u) {
    if (!u.is_real()) return;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const std::complex<double> avg = 0.5 * (u[i] + std::conj(u[j]));
        u[i] = avg;
        u[j] = std::conj(avg);
    }
    u[n / 2] = std::complex<double>(u[n / 2].real(), 0.0);
}

double hermitian_defect(const QpField& u) {
    double worst = 0.0;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(u[i] - std::conj(u[n - 1 - i])));
    return worst;
}

QpField mean_zero(const QpField& u) {
    QpField w = u;
    w[w.size() / 2] = {0.0, 0.0};
    return w;
}

QpField random_field(const BasisPtr& basis, std::uint64_t seed, double decay_s,
                     double support_radius, bool mean_zero, double amplitude) {
    std::mt19937_64 rng(seed);
    // Uniform in [0,1) from the top 53 bits; stable across standard libraries.
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    QpField u(basis, true);
    const FrequencyBasis& b = *basis;
    const std::size_t n = b.size();
    const double r2 = support_radius * support_radius;
    for (std::size_t i = 0; i < n / 2; ++i) { // strict half; mirror filled by conjugate
        const double n2 = static_cast<double>(b.norm2(i));
        if (std::isfinite(support_radius) && n2 > r2) continue;
        const double mag = (0.5 + 0.5 * uniform()) * amplitude *
                           std::pow(1.0 + n2, -0.5 * (decay_s + 1.0));
        const double phase = 2.0 * 3.14159265358979323846 * uniform();
        const std::complex<double> c(mag * std::cos(phase), mag * std::sin(phase));
        u[i] = c;
        u[n - 1 - i] = std::conj(c);
    }
    if (!mean_zero) u[n / 2] = std::complex<double>(amplitude * (0.5 + 0.5 * uniform()), 0.0);
    return u;
}

} // namespace qpbo
