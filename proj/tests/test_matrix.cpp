#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tfa/int_matrix.hpp"

using tfa::Int;
using tfa::IntMatrix;

namespace {

IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
    REQUIRE(a.cols() == b.rows());
    IntMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
    return r;
}

bool equal(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.at(i, j) != b.at(i, j)) return false;
    return true;
}

}  // namespace

TEST_CASE("column hermite form of a single row", "[matrix]") {
    IntMatrix m(1, 2);
    m.at(0, 0) = 4;
    m.at(0, 1) = 6;
    auto hf = tfa::hnf(m);
    CHECK(hf.rank == 1);
    CHECK(hf.H.at(0, 0) == 2);
    CHECK(hf.H.at(0, 1) == 0);
    Int du = tfa::determinant(hf.U);
    CHECK((du == 1 || du == -1));
    CHECK(equal(mul(m, hf.U), hf.H));
}

TEST_CASE("hermite solve finds integer solutions exactly", "[matrix]") {
    IntMatrix m(1, 2);
    m.at(0, 0) = 4;
    m.at(0, 1) = 6;
    auto hf = tfa::hnf(m);

    auto w = tfa::hermite_solve(hf, {Int(10)});
    REQUIRE(w.has_value());
    auto z = tfa::apply_unimodular(hf.U, *w);
    CHECK(Int(4) * z[0] + Int(6) * z[1] == 10);

    CHECK_FALSE(tfa::hermite_solve(hf, {Int(3)}).has_value());
}

TEST_CASE("hermite form properties on random matrices", "[matrix]") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> entry(-6, 6);
    std::uniform_int_distribution<std::size_t> size(1, 4);
    for (int iter = 0; iter < 60; ++iter) {
        IntMatrix m(size(rng), size(rng));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = entry(rng);
        auto hf = tfa::hnf(m);
        CHECK(equal(mul(m, hf.U), hf.H));
        if (hf.U.rows() == hf.U.cols()) {
            Int du = tfa::determinant(hf.U);
            CHECK((du == 1 || du == -1));
        }
        CHECK(hf.rank <= std::min(m.rows(), m.cols()));
        for (std::size_t j = 0; j < hf.rank; ++j) {
            std::size_t pr = hf.pivot_rows[j];
            CHECK(hf.H.at(pr, j) > 0);
            for (std::size_t j2 = j + 1; j2 < hf.H.cols(); ++j2) CHECK(hf.H.at(pr, j2) == 0);
        }
    }
}

TEST_CASE("determinant golden values", "[matrix]") {
    IntMatrix id(3, 3);
    for (std::size_t i = 0; i < 3; ++i) id.at(i, i) = 1;
    CHECK(tfa::determinant(id) == 1);

    IntMatrix swp(2, 2);
    swp.at(0, 1) = 1;
    swp.at(1, 0) = 1;
    CHECK(tfa::determinant(swp) == -1);

    IntMatrix d(2, 2);
    d.at(0, 0) = 2;
    d.at(1, 1) = 3;
    CHECK(tfa::determinant(d) == 6);

    IntMatrix z(2, 2);
    CHECK(tfa::determinant(z) == 0);

    IntMatrix m(2, 2);
    m.at(0, 0) = 2;
    m.at(0, 1) = 1;
    m.at(1, 0) = 1;
    m.at(1, 1) = 1;
    CHECK(tfa::determinant(m) == 1);
}
