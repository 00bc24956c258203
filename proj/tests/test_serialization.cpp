#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "qpbo/serialization.hpp"
#include "test_helpers.hpp"

using namespace qpbo;
using namespace qpbo::testing;

TEST_CASE("stream round trip is bit-exact") {
    auto basis = desk_basis(6);
    auto u = random_field(basis, 99, 2.5, 1e9);

    std::stringstream ss;
    save_field(ss, u);
    auto v = load_field(ss);

    CHECK(v.basis().dim() == 2);
    CHECK(v.basis().box_radius() == 6);
    CHECK(v.basis().alpha() == basis->alpha());
    CHECK(v.is_real() == u.is_real());
    REQUIRE(v.size() == u.size());
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == u[i]); // bitwise

    // writing the loaded field again reproduces the same bytes
    std::stringstream ss2;
    save_field(ss2, v);
    std::stringstream ss3;
    save_field(ss3, u);
    CHECK(ss2.str() == ss3.str());
}

TEST_CASE("complex flag survives the round trip") {
    auto basis = desk_basis(2);
    auto u = make_field(basis, {{{1, 0}, std::complex<double>(0.3, 0.4)}}, false);
    std::stringstream ss;
    save_field(ss, u);
    auto v = load_field(ss);
    CHECK_FALSE(v.is_real());
    CHECK(v.at({1, 0}) == std::complex<double>(0.3, 0.4));
    CHECK(v.at({-1, 0}) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("file round trip") {
    namespace fs = std::filesystem;
    auto path = (fs::temp_directory_path() / "qpbo_serialization_test.qpf").string();
    auto basis = desk_basis(3);
    auto u = two_cosine(basis);
    save_field(path, u);
    auto v = load_field(path);
    CHECK(max_abs_diff(u, v) == 0.0);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_field(std::string("/nonexistent/qpbo.qpf")), std::runtime_error);
}

TEST_CASE("corrupted headers are rejected") {
    auto basis = desk_basis(2);
    auto u = two_cosine(basis);
    std::stringstream ss;
    save_field(ss, u);
    auto bytes = ss.str();

    {
        auto bad = bytes;
        bad[0] = 'X'; // break the magic
        std::stringstream in(bad);
        CHECK_THROWS_AS(load_field(in), std::runtime_error);
    }
    {
        auto truncated = bytes.substr(0, bytes.size() / 2);
        std::stringstream in(truncated);
        CHECK_THROWS_AS(load_field(in), std::runtime_error);
    }
    {
        std::stringstream in(std::string("QPFIELD1"));
        CHECK_THROWS_AS(load_field(in), std::runtime_error);
    }
}
