#include "qpbo/lattice.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

namespace qpbo {

namespace {

constexpr double kResonanceTol = 1e-12;

std::size_t checked_box_size(int n_dim, int box_radius) {
    // (2K+1)^N with overflow guard; the desk scales are tiny but the guard
    // keeps absurd configs from wrapping silently.
    const std::size_t side = 2 * static_cast<std::size_t>(box_radius) + 1;
    std::size_t total = 1;
    for (int d = 0; d < n_dim; ++d) {
        if (total > std::numeric_limits<std::size_t>::max() / side)
            throw std::invalid_argument("FrequencyBasis: box too large");
        total *= side;
    }
    return total;
}

} // namespace

FrequencyBasis::FrequencyBasis(std::vector<double> alpha, int box_radius)
    : FrequencyBasis(std::move(alpha), box_radius, Uncertified{}) {
    // Certify the working box: every nonzero point must keep alpha.k away
    // from zero, otherwise sgn(alpha.k) and the cutoff chi_n are meaningless.
    if (min_abs_phys_ < kResonanceTol)
        throw std::invalid_argument(
            "FrequencyBasis: near-resonant box, min nonzero |alpha.k| = " +
            std::to_string(min_abs_phys_) + " < 1e-12");
}

FrequencyBasis::FrequencyBasis(std::vector<double> alpha, int box_radius, Uncertified)
    : alpha_(std::move(alpha)), box_radius_(box_radius) {
    if (alpha_.empty())
        throw std::invalid_argument("FrequencyBasis: alpha must be nonempty");
    for (double a : alpha_)
        if (!std::isfinite(a) || a == 0.0)
            throw std::invalid_argument("FrequencyBasis: alpha entries must be finite and nonzero");
    if (box_radius_ < 1)
        throw std::invalid_argument("FrequencyBasis: box radius must be >= 1");
    size_ = checked_box_size(dim(), box_radius_);
    build_tables();
}

void FrequencyBasis::build_tables() {
    const int n = dim();
    phys_.resize(size_);
    norm2_.resize(size_);

    // Fill the first half by direct summation, the mirror half by negation so
    // that phys_[mirror_index(i)] == -phys_[i] bitwise.
    const std::size_t half = size_ / 2; // center sits at index half
    std::vector<int> k(n, -box_radius_);
    for (std::size_t i = 0; i <= half; ++i) {
        double dot = 0.0;
        std::int64_t n2 = 0;
        for (int d = 0; d < n; ++d) {
            dot += alpha_[d] * k[d];
            n2 += static_cast<std::int64_t>(k[d]) * k[d];
        }
        phys_[i] = dot;
        norm2_[i] = n2;
        phys_[size_ - 1 - i] = -dot;
        norm2_[size_ - 1 - i] = n2;
        // advance row-major counter, last coordinate fastest
        for (int d = n - 1; d >= 0; --d) {
            if (++k[d] <= box_radius_) break;
            k[d] = -box_radius_;
        }
    }
    phys_[half] = 0.0; // center is exactly zero, not -0.0

    max_abs_phys_ = 0.0;
    min_abs_phys_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size_; ++i) {
        const double a = std::abs(phys_[i]);
        if (a > max_abs_phys_) max_abs_phys_ = a;
        if (i != half && a < min_abs_phys_) min_abs_phys_ = a;
    }
}

std::size_t FrequencyBasis::to_index(const LatticePoint& k) const {
    if (static_cast<int>(k.size()) != dim())
        throw std::invalid_argument("to_index: dimension mismatch");
    const std::size_t side = 2 * static_cast<std::size_t>(box_radius_) + 1;
    std::size_t idx = 0;
    for (int d = 0; d < dim(); ++d) {
        if (k[d] < -box_radius_ || k[d] > box_radius_)
            throw std::out_of_range("to_index: point outside box");
        idx = idx * side + static_cast<std::size_t>(k[d] + box_radius_);
    }
    return idx;
}

LatticePoint FrequencyBasis::point_at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("point_at: index outside box");
    const std::size_t side = 2 * static_cast<std::size_t>(box_radius_) + 1;
    LatticePoint k(dim());
    for (int d = dim() - 1; d >= 0; --d) {
        k[d] = static_cast<int>(i % side) - box_radius_;
        i /= side;
    }
    return k;
}

double FrequencyBasis::physical_frequency(const LatticePoint& k) const {
    return phys_[to_index(k)];
}

std::vector<LatticePoint> FrequencyBasis::enumerate_box() const {
    std::vector<LatticePoint> pts;
    pts.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) pts.push_back(point_at(i));
    return pts;
}

bool FrequencyBasis::same_as(const FrequencyBasis& other) const {
    return box_radius_ == other.box_radius_ && alpha_ == other.alpha_;
}

std::shared_ptr<const FrequencyBasis> FrequencyBasis::enlarged(int factor) const {
    if (factor < 1) throw std::invalid_argument("enlarged: factor must be >= 1");
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (enlarged_cache_.size() < static_cast<std::size_t>(factor) + 1)
        enlarged_cache_.resize(factor + 1);
    auto& slot = enlarged_cache_[factor];
    if (!slot)
        slot = std::shared_ptr<const FrequencyBasis>(
            new FrequencyBasis(alpha_, factor * box_radius_, Uncertified{}));
    return slot;
}

BasisPtr make_basis(std::vector<double> alpha, int box_radius) {
    return std::make_shared<const FrequencyBasis>(std::move(alpha), box_radius);
}

double euclid_weight(std::int64_t norm2, double s) {
    if (norm2 == 0) {
        if (s < 0.0) throw std::domain_error("euclid_weight: |0|^s undefined for s < 0");
        return 0.0;
    }
    if (s == 0.0) return 1.0;
    return std::pow(static_cast<double>(norm2), 0.5 * s);
}

double euclid_weight(const LatticePoint& k, double s) {
    std::int64_t n2 = 0;
    for (int c : k) n2 += static_cast<std::int64_t>(c) * c;
    return euclid_weight(n2, s);
}

double japanese_bracket(std::int64_t norm2, double s) {
    return std::pow(1.0 + static_cast<double>(norm2), s);
}

double japanese_bracket(const LatticePoint& k, double s) {
    std::int64_t n2 = 0;
    for (int c : k) n2 += static_cast<std::int64_t>(c) * c;
    return japanese_bracket(n2, s);
}

} // namespace qpbo
