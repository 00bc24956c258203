#include "qpbo/serialization.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qpbo {

namespace {

constexpr char kMagic[8] = {'Q', 'P', 'F', 'I', 'E', 'L', 'D', '1'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("load_field: truncated stream");
}

} // namespace

void save_field(std::ostream& os, const QpField& u) {
    os.write(kMagic, sizeof(kMagic));
    const std::uint32_t n = static_cast<std::uint32_t>(u.basis().dim());
    const std::uint32_t k = static_cast<std::uint32_t>(u.basis().box_radius());
    const std::uint8_t real_flag = u.is_real() ? 1 : 0;
    const std::uint8_t pad[3] = {0, 0, 0};
    write_raw(os, n);
    write_raw(os, k);
    write_raw(os, real_flag);
    os.write(reinterpret_cast<const char*>(pad), sizeof(pad));
    for (double a : u.basis().alpha()) write_raw(os, a);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double re = u[i].real(), im = u[i].imag();
        write_raw(os, re);
        write_raw(os, im);
    }
    if (!os) throw std::runtime_error("save_field: write failed");
}

void save_field(const std::string& path, const QpField& u) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("save_field: cannot open " + path);
    save_field(f, u);
}

QpField load_field(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("load_field: bad magic");
    std::uint32_t n = 0, k = 0;
    std::uint8_t real_flag = 0;
    std::uint8_t pad[3];
    read_raw(is, n);
    read_raw(is, k);
    read_raw(is, real_flag);
    is.read(reinterpret_cast<char*>(pad), sizeof(pad));
    if (!is || n == 0 || n > 8 || k == 0)
        throw std::runtime_error("load_field: bad header");
    std::vector<double> alpha(n);
    for (auto& a : alpha) read_raw(is, a);
    BasisPtr basis = make_basis(std::move(alpha), static_cast<int>(k));
    Coeffs c(basis->size());
    for (auto& z : c) {
        double re, im;
        read_raw(is, re);
        read_raw(is, im);
        z = std::complex<double>(re, im);
    }
    return QpField(std::move(basis), std::move(c), real_flag != 0);
}

QpField load_field(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_field: cannot open " + path);
    return load_field(f);
}

} // namespace qpbo
