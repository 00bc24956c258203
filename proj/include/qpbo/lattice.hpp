/**
 * lattice.hpp: frequency lattice Z^N, its box truncations, and the scalar
 * weights attached to lattice points (physical frequency alpha.k, Euclidean
 * |k|^s, Japanese bracket (1+|k|^2)^s).
 *
 * A FrequencyBasis is the shared immutable object behind every coefficient
 * field: it fixes the dimension N, the frequency vector alpha, and the box
 * radius K, enumerates the box [-K,K]^N in a deterministic row-major order,
 * and precomputes per-point tables so that hot loops never touch pow() or
 * re-derive alpha.k.
 */

#ifndef QPBO_LATTICE_HPP
#define QPBO_LATTICE_HPP

#include <cstdint>
#include <memory>
#include <vector>

namespace qpbo {

// A point of Z^N. Kept as a plain vector of ints; N is a runtime quantity.
using LatticePoint = std::vector<int>;

/**
 * Immutable description of a truncated frequency lattice: dimension N,
 * frequency vector alpha (each entry finite and nonzero), box radius K >= 1.
 *
 * Box enumeration is row-major over [-K,K]^N with the last coordinate
 * fastest: index 0 is (-K,...,-K), index size()-1 is (K,...,K). This order is
 * part of the serialization contract and must never change.
 *
 * Construction certifies the working box against near-resonance: every
 * nonzero box point must satisfy |alpha . k| >= 1e-12, otherwise the sign
 * multiplier sgn(alpha . k) would be numerically meaningless. The threshold
 * certifies this box only; it is not a Diophantine property of alpha.
 *
 * Mirror symmetry: with this enumeration the index of -k is always
 * size()-1-i, and physical_frequency(size()-1-i) == -physical_frequency(i)
 * holds exactly (the table for the mirror half is produced by negation, not
 * by re-summation).
 */
class FrequencyBasis {
  public:
    FrequencyBasis(std::vector<double> alpha, int box_radius);

    int dim() const { return static_cast<int>(alpha_.size()); }
    int box_radius() const { return box_radius_; }
    const std::vector<double>& alpha() const { return alpha_; }

    // Number of points in the box, (2K+1)^N.
    std::size_t size() const { return size_; }

    // Flat index of a box point; throws std::out_of_range if outside the box.
    std::size_t to_index(const LatticePoint& k) const;

    // Coordinates of the i-th box point (row-major decode).
    LatticePoint point_at(std::size_t i) const;

    // Flat index of -k given the flat index of k.
    std::size_t mirror_index(std::size_t i) const { return size_ - 1 - i; }

    // alpha . k, from the precomputed table.
    double physical_frequency(std::size_t i) const { return phys_[i]; }
    double physical_frequency(const LatticePoint& k) const;

    // |k|^2 as an exact integer.
    std::int64_t norm2(std::size_t i) const { return norm2_[i]; }

    double max_physical_frequency() const { return max_abs_phys_; }
    double min_nonzero_physical_frequency() const { return min_abs_phys_; }

    // All box points in enumeration order. Convenience for tests and small
    // scans; hot loops should decode on the fly or use the tables.
    std::vector<LatticePoint> enumerate_box() const;

    // Carrier basis with the same alpha and radius factor*K, used to hold
    // exact convolution results. Not re-certified against the resonance
    // threshold (no sign/cutoff multiplier is evaluated on it); results are
    // memoized per factor.
    std::shared_ptr<const FrequencyBasis> enlarged(int factor) const;

    bool same_as(const FrequencyBasis& other) const;

  private:
    struct Uncertified {};
    FrequencyBasis(std::vector<double> alpha, int box_radius, Uncertified);
    void build_tables();

    std::vector<double> alpha_;
    int box_radius_ = 0;
    std::size_t size_ = 0;
    std::vector<double> phys_;        // alpha . k per flat index
    std::vector<std::int64_t> norm2_; // |k|^2 per flat index
    double max_abs_phys_ = 0.0;
    double min_abs_phys_ = 0.0;

    mutable std::vector<std::shared_ptr<const FrequencyBasis>> enlarged_cache_;
};

using BasisPtr = std::shared_ptr<const FrequencyBasis>;

// Convenience constructor used everywhere in tests and the CLI.
BasisPtr make_basis(std::vector<double> alpha, int box_radius);

// |k|^s with |0|^s defined as 0 (also at s = 0; the field-level D^0 handles
// the mean-mode convention separately). Throws std::domain_error for s < 0 at
// k = 0.
double euclid_weight(const LatticePoint& k, double s);
double euclid_weight(std::int64_t norm2, double s);

// (1 + |k|^2)^s.
double japanese_bracket(const LatticePoint& k, double s);
double japanese_bracket(std::int64_t norm2, double s);

} // namespace qpbo

#endif // QPBO_LATTICE_HPP
