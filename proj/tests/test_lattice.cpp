#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "tfa/lattice.hpp"

using tfa::BasisIndex;
using tfa::Element;
using tfa::Int;
using tfa::Rational;

namespace {
Element unit(const BasisIndex& b) { return Element::unit(b); }
}  // namespace

TEST_CASE("lattice solve finds a witness", "[lattice]") {
    Element x1 = unit(BasisIndex::x(1));
    Element x2 = unit(BasisIndex::x(2));
    std::vector<Element> gens = {x1, x2, (x1 + x2).divided_by(Int(2))};

    auto z = tfa::solve_in_lattice(gens, (x1 + x2).divided_by(Int(2)));
    REQUIRE(z.has_value());
    Element sum;
    for (std::size_t i = 0; i < gens.size(); ++i) sum += Rational((*z)[i]) * gens[i];
    CHECK(sum == (x1 + x2).divided_by(Int(2)));

    auto z2 = tfa::solve_in_lattice(gens, 3 * x1 - 2 * x2);
    REQUIRE(z2.has_value());
}

TEST_CASE("lattice solve refuses targets outside the lattice", "[lattice]") {
    Element x1 = unit(BasisIndex::x(1));
    Element x2 = unit(BasisIndex::x(2));
    std::vector<Element> gens = {x1, x2, (x1 + x2).divided_by(Int(2))};

    CHECK_FALSE(tfa::solve_in_lattice(gens, x1.divided_by(Int(2))).has_value());
    CHECK_FALSE(tfa::solve_in_lattice(gens, x1.divided_by(Int(3))).has_value());
    CHECK_FALSE(tfa::solve_in_lattice(gens, unit(BasisIndex::x(3))).has_value());
}

TEST_CASE("lattice solve over a restricted basis", "[lattice]") {
    Element x1 = unit(BasisIndex::x(1));
    Element x2 = unit(BasisIndex::x(2));
    std::vector<Element> gens = {x1, x2};
    std::vector<BasisIndex> allowed = {BasisIndex::x(1), BasisIndex::x(2)};

    CHECK(tfa::solve_in_lattice(gens, x1 + x2, allowed).has_value());
    CHECK_THROWS_AS(tfa::solve_in_lattice({x1}, unit(BasisIndex::y(1)), {BasisIndex::x(1)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(tfa::solve_in_lattice(gens, x1, {BasisIndex::x(1)}), std::invalid_argument);
}

TEST_CASE("zero target always solvable", "[lattice]") {
    std::vector<Element> gens = {unit(BasisIndex::x(1))};
    auto z = tfa::solve_in_lattice(gens, Element());
    REQUIRE(z.has_value());
}

TEST_CASE("lattice solver agrees with brute force enumeration", "[lattice]") {
    std::mt19937 rng(7340032);
    int checked = 0;
    for (int iter = 0; iter < 110; ++iter) {
        auto inst = tfa_test::random_instance(rng);
        INFO("iteration " << iter);
        CHECK(tfa_test::oracle_agrees(inst));
        ++checked;
    }
    CHECK(checked >= 100);
}
