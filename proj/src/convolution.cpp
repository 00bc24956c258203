#include "qpbo/convolution.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace qpbo {

namespace {

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void check_operand(const Coeffs& a, int ka, int nd, const char* name) {
    if (ka < 0 || nd < 1) throw std::invalid_argument("convolve: bad box shape");
    if (a.size() != ipow(2 * static_cast<std::size_t>(ka) + 1, nd))
        throw std::invalid_argument(std::string("convolve: ") + name +
                                    " size does not match its box");
}

/**
 * FFTW workspace for one cube grid m^nd: an in-place c2c buffer plus forward
 * and backward plans. Plans are created once per shape (FFTW planning is not
 * reentrant) and reused; execution copies through the owned buffer so the
 * plan's alignment assumptions always hold.
 */
struct GridPlans {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t total = 0;

    GridPlans(int m, int nd) {
        total = ipow(static_cast<std::size_t>(m), nd);
        buf = fftw_alloc_complex(total);
        if (!buf) throw std::bad_alloc();
        std::vector<int> dims(nd, m);
        fwd = fftw_plan_dft(nd, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(nd, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("FFTW plan creation failed");
    }
    ~GridPlans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
    GridPlans(const GridPlans&) = delete;
    GridPlans& operator=(const GridPlans&) = delete;
};

std::mutex g_fft_mutex;
std::map<std::pair<int, int>, std::unique_ptr<GridPlans>>& plan_cache() {
    static std::map<std::pair<int, int>, std::unique_ptr<GridPlans>> cache;
    return cache;
}

GridPlans& plans_for(int m, int nd) {
    auto& cache = plan_cache();
    auto key = std::make_pair(m, nd);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<GridPlans>(m, nd)).first;
    return *it->second;
}

// Scatter a box-[-k,k]^nd array onto the m^nd grid at positions (c mod m) per
// axis; the grid must satisfy m >= 2k+1. Grid is cleared first.
void embed_box(const Coeffs& a, int k, int nd, fftw_complex* grid, int m) {
    const std::size_t total = ipow(static_cast<std::size_t>(m), nd);
    std::memset(grid, 0, total * sizeof(fftw_complex));
    std::vector<int> c(nd, -k);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t g = 0;
        for (int d = 0; d < nd; ++d) {
            const int pos = c[d] < 0 ? c[d] + m : c[d];
            g = g * static_cast<std::size_t>(m) + static_cast<std::size_t>(pos);
        }
        grid[g][0] = a[i].real();
        grid[g][1] = a[i].imag();
        for (int d = nd - 1; d >= 0; --d) {
            if (++c[d] <= k) break;
            c[d] = -k;
        }
    }
}

// Gather the box [-k,k]^nd from grid positions (c mod m), scaling by `scale`.
Coeffs extract_box(const fftw_complex* grid, int m, int k, int nd, double scale) {
    Coeffs out(ipow(2 * static_cast<std::size_t>(k) + 1, nd));
    std::vector<int> c(nd, -k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t g = 0;
        for (int d = 0; d < nd; ++d) {
            const int pos = c[d] < 0 ? c[d] + m : c[d];
            g = g * static_cast<std::size_t>(m) + static_cast<std::size_t>(pos);
        }
        out[i] = std::complex<double>(grid[g][0] * scale, grid[g][1] * scale);
        for (int d = nd - 1; d >= 0; --d) {
            if (++c[d] <= k) break;
            c[d] = -k;
        }
    }
    return out;
}

// Shared cyclic-convolution core: embed both operands on the m^nd grid,
// transform, multiply, transform back. Caller picks m (padded or not).
Coeffs cyclic_convolve_on_grid(const Coeffs& a, int ka, const Coeffs& b, int kb,
                               int nd, int m, int kout) {
    std::lock_guard<std::mutex> lock(g_fft_mutex);
    GridPlans& p = plans_for(m, nd);

    embed_box(a, ka, nd, p.buf, m);
    fftw_execute(p.fwd);
    std::vector<std::complex<double>> spec_a(p.total);
    std::memcpy(static_cast<void*>(spec_a.data()), p.buf,
                p.total * sizeof(fftw_complex));

    embed_box(b, kb, nd, p.buf, m);
    fftw_execute(p.fwd);
    for (std::size_t i = 0; i < p.total; ++i) {
        const std::complex<double> prod =
            spec_a[i] * std::complex<double>(p.buf[i][0], p.buf[i][1]);
        p.buf[i][0] = prod.real();
        p.buf[i][1] = prod.imag();
    }
    fftw_execute(p.bwd);
    return extract_box(p.buf, m, kout, nd, 1.0 / static_cast<double>(p.total));
}

} // namespace

int next_fast_size(int n) {
    for (int m = n;; ++m) {
        int r = m;
        for (int f : {2, 3, 5, 7})
            while (r % f == 0) r /= f;
        if (r == 1) return m;
    }
}

Coeffs convolve_direct(const Coeffs& a, int ka, const Coeffs& b, int kb, int nd) {
    check_operand(a, ka, nd, "a");
    check_operand(b, kb, nd, "b");
    const int kc = ka + kb;
    const int lb = 2 * kb + 1;
    const int lc = 2 * kc + 1;
    Coeffs out(ipow(static_cast<std::size_t>(lc), nd), {0.0, 0.0});

    // Scatter form: out[u+v] += a[u] b[v]. The last axis of b and out is
    // contiguous, so the innermost loop is a straight axpy of length lb.
    const std::size_t b_blocks = b.size() / static_cast<std::size_t>(lb);
    std::vector<int> u(nd, -ka);
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
        const std::complex<double> av = a[ia];
        if (av != std::complex<double>(0.0, 0.0)) {
            std::vector<int> v(nd, -kb);
            for (std::size_t blk = 0; blk < b_blocks; ++blk) {
                // flat out index of (u + v) with v's last coord at -kb
                std::size_t base = 0;
                for (int d = 0; d < nd; ++d)
                    base = base * static_cast<std::size_t>(lc) +
                           static_cast<std::size_t>(u[d] + v[d] + kc);
                const std::complex<double>* brow = &b[blk * lb];
                std::complex<double>* orow = &out[base];
                for (int t = 0; t < lb; ++t) orow[t] += av * brow[t];
                // advance v over the leading nd-1 coordinates
                for (int d = nd - 2; d >= 0; --d) {
                    if (++v[d] <= kb) break;
                    v[d] = -kb;
                }
            }
        }
        for (int d = nd - 1; d >= 0; --d) {
            if (++u[d] <= ka) break;
            u[d] = -ka;
        }
    }
    return out;
}

Coeffs convolve_fft(const Coeffs& a, int ka, const Coeffs& b, int kb, int nd) {
    check_operand(a, ka, nd, "a");
    check_operand(b, kb, nd, "b");
    const int kc = ka + kb;
    const int m = next_fast_size(2 * kc + 1);
    return cyclic_convolve_on_grid(a, ka, b, kb, nd, m, kc);
}

Coeffs convolve_cyclic_aliased(const Coeffs& a, const Coeffs& b, int k, int nd) {
    check_operand(a, k, nd, "a");
    check_operand(b, k, nd, "b");
    return cyclic_convolve_on_grid(a, k, b, k, nd, 2 * k + 1, k);
}

} // namespace qpbo
