#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "tfa/constructions.hpp"
#include "tfa/decomposition.hpp"

using tfa::BasisIndex;
using tfa::CeSetSpec;
using tfa::Element;
using tfa::Int;
using tfa::PathSpec;
using tfa::Sigma;
using tfa::TreeSpec;
using tfa::TruncationParams;

namespace {

Element unit(const BasisIndex& b) { return Element::unit(b); }

TreeSpec chain_tree(std::uint32_t depth) {
    TreeSpec t;
    for (std::uint32_t n = 0; n <= depth; ++n) t.nodes.push_back(Sigma(n, 0));
    return t;
}

TreeSpec two_chains() {
    return TreeSpec{{{}, {0}, {1}, {0, 0}, {1, 0}}};
}

}  // namespace

TEST_CASE("rank two tower group emits the expected generators", "[constructions]") {
    auto g = tfa::fuchs_group(6);
    auto gens = g.gen_at(1);
    REQUIRE(gens.size() == 5);
    Element x1 = unit(BasisIndex::x(1));
    Element x2 = unit(BasisIndex::x(2));
    auto has = [&](const Element& e) {
        return std::find(gens.begin(), gens.end(), e) != gens.end();
    };
    CHECK(has(x1));
    CHECK(has(x2));
    CHECK(has((x1 + x2).divided_by(Int(2))));
    CHECK(has(x1.divided_by(Int(3))));
    CHECK(has(x2.divided_by(Int(5))));
    CHECK_THROWS_AS(tfa::fuchs_group(0), std::invalid_argument);
}

TEST_CASE("free rank two group never divides", "[constructions]") {
    auto g = tfa::free_rank2_group(6);
    for (std::uint32_t s = 0; s <= 6; ++s) CHECK(g.gen_count_at(s) == 2);
    CHECK_FALSE(g.member(6, unit(BasisIndex::g1()).divided_by(Int(2))));
}

TEST_CASE("reduction group divides each generator by each prime once", "[constructions]") {
    auto g = tfa::cof_group(CeSetSpec::finite({}), 6);
    Element g1 = unit(BasisIndex::g1());
    Element g2 = unit(BasisIndex::g2());

    CHECK(tfa::divides(g, 6, 3, 1, g1));
    CHECK_FALSE(tfa::divides(g, 6, 3, 2, g1));
    CHECK(tfa::divides(g, 6, 5, 1, g2));
    CHECK_FALSE(tfa::divides(g, 6, 5, 2, g2));
    CHECK(g.member(1, (g1 + g2).divided_by(Int(2))));
    CHECK_FALSE(g.member(6, (g1 + g2).divided_by(Int(4))));

    CHECK_FALSE(g.member(0, g1.divided_by(Int(3))));
    CHECK(g.member(1, g1.divided_by(Int(3))));
    CHECK_FALSE(g.member(1, g1.divided_by(Int(13))));
    CHECK(g.member(2, g1.divided_by(Int(13))));
}

TEST_CASE("enumeration of W gates the second generator's divisions", "[constructions]") {
    auto fin = tfa::cof_group(CeSetSpec::finite({0}), 6);
    CHECK(fin.member(1, unit(BasisIndex::g2()).divided_by(Int(3))));

    auto cof = tfa::cof_group(CeSetSpec::cofinite_complement({0}), 12);
    CHECK_FALSE(cof.member(12, unit(BasisIndex::g2()).divided_by(Int(3))));
    CHECK(cof.member(1, unit(BasisIndex::g2()).divided_by(Int(7))));

    auto traced = tfa::cof_group(CeSetSpec::step_trace({{3, 0}}), 6);
    CHECK_FALSE(traced.member(2, unit(BasisIndex::g2()).divided_by(Int(3))));
    CHECK(traced.member(3, unit(BasisIndex::g2()).divided_by(Int(3))));
}

TEST_CASE("empty W gives the same group under either encoding", "[constructions]") {
    auto fin = tfa::cof_group(CeSetSpec::finite({}), 6);
    auto traced = tfa::cof_group(CeSetSpec::step_trace({}), 6);
    for (std::uint32_t s = 0; s <= 6; ++s) {
        CHECK(fin.gen_count_at(s) == traced.gen_count_at(s));
        CHECK(fin.gen_at(s) == traced.gen_at(s));
    }
}

TEST_CASE("one prime appears in two roles without collision", "[constructions]") {
    auto g = tfa::cof_group(CeSetSpec::finite({0}), 6);
    Element g1 = unit(BasisIndex::g1());
    Element g2 = unit(BasisIndex::g2());
    CHECK(g.member(1, g1.divided_by(Int(3))));
    CHECK(g.member(1, g2.divided_by(Int(3))));
    CHECK(g.member(1, (g1 + g2).divided_by(Int(3))));
    CHECK_FALSE(g.member(6, (g1 + g2).divided_by(Int(9))));
}

TEST_CASE("cofinite witness summands", "[constructions]") {
    auto lem = tfa::lemma53_summands(CeSetSpec::cofinite_complement({0}), 12);
    CHECK(lem.m == 3);
    CHECK(lem.a == (unit(BasisIndex::g1()) + 3 * unit(BasisIndex::g2())).divided_by(Int(2)));
    REQUIRE(lem.pair.basisA.size() == 1);
    REQUIRE(lem.pair.basisB.size() == 1);
    CHECK(lem.pair.basisA[0] == lem.a);
    CHECK(lem.pair.basisB[0] == unit(BasisIndex::g2()));

    CHECK(tfa::lemma53_summands(CeSetSpec::cofinite_complement({}), 12).m == 1);
    CHECK(tfa::lemma53_summands(CeSetSpec::cofinite_complement({0, 1}), 12).m == 21);

    CHECK_THROWS_AS(tfa::lemma53_summands(CeSetSpec::finite({0}), 12), std::invalid_argument);
    CHECK_THROWS_AS(tfa::lemma53_summands(CeSetSpec::cofinite_complement({0}), 0),
                    std::invalid_argument);
}

TEST_CASE("truncated base group shape", "[constructions]") {
    TruncationParams t{3, 1, 2, 8};
    auto g = tfa::infinite_base_group(t);
    CHECK(g.rank() == 9);
    CHECK(g.basis()[0] == BasisIndex::x(1));
    CHECK(g.basis()[1] == BasisIndex::y(1));
    CHECK(g.basis()[6] == BasisIndex::xsigma({}));
    CHECK(g.gen_count_at(1) == 41);
    CHECK(g.gen_count_at(8) == 104);

    CHECK(tfa::divides(g, 3, tfa::prime_for(0, 1), 3, unit(BasisIndex::x(1))));
    CHECK(tfa::divides(g, 1, 227, 1, unit(BasisIndex::y(1)) + unit(BasisIndex::y(2))));
    CHECK(tfa::divides(g, 1, 223, 1, unit(BasisIndex::x(1)) + unit(BasisIndex::y(1))));
    CHECK_FALSE(tfa::divides(g, 8, 223, 1, unit(BasisIndex::x(1))));

    CHECK_THROWS_AS(tfa::infinite_base_group(TruncationParams{0, 0, 1, 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(tfa::infinite_base_group(TruncationParams{2, 3, 1, 4}),
                    std::invalid_argument);
}

TEST_CASE("tree nodes add their step emissions to the base", "[constructions]") {
    TruncationParams t{4, 1, 2, 6};
    auto base = tfa::infinite_base_group(t);
    auto tree = tfa::tree_group(TreeSpec{{{}, {0}}}, t);

    Element y1 = unit(BasisIndex::y(1));
    Element x1 = unit(BasisIndex::x(1));
    Element xs = unit(BasisIndex::xsigma({0}));

    CHECK(tree.member(1, (y1 + xs).divided_by(Int(13))));
    CHECK(tree.member(1, (x1 - xs).divided_by(Int(223))));
    CHECK(tree.member(1, xs.divided_by(Int(13))));
    CHECK_FALSE(base.member(6, (y1 + xs).divided_by(Int(13))));
    CHECK_FALSE(base.member(6, (x1 - xs).divided_by(Int(223))));
}

TEST_CASE("trivial trees reproduce the base group exactly", "[constructions]") {
    TruncationParams t{3, 1, 2, 6};
    auto base = tfa::infinite_base_group(t);
    auto root_only = tfa::tree_group(TreeSpec{{{}}}, t);
    auto empty = tfa::tree_group(TreeSpec{}, t);
    for (std::uint32_t s = 0; s <= 6; ++s) {
        CHECK(root_only.gen_at(s) == base.gen_at(s));
        CHECK(empty.gen_at(s) == base.gen_at(s));
    }
}

TEST_CASE("deep chains emit partial sum witnesses", "[constructions]") {
    TruncationParams t{3, 3, 1, 6};
    auto g = tfa::tree_group(chain_tree(3), t);
    Element acc;
    for (std::uint32_t i = 1; i <= 3; ++i)
        acc += unit(BasisIndex::y(i)) + unit(BasisIndex::xsigma(Sigma(i, 0)));
    CHECK(g.member(1, acc.divided_by(Int(tfa::prime_for(7, 3)))));

    auto gens = g.gen_at(6);
    std::set<Element> distinct(gens.begin(), gens.end());
    CHECK(distinct.size() == gens.size());
}

TEST_CASE("tree construction validates its inputs", "[constructions]") {
    TruncationParams t{3, 2, 1, 6};
    CHECK_THROWS_AS(tfa::tree_group(chain_tree(3), t), std::invalid_argument);
    CHECK_THROWS_AS(tfa::tree_group(TreeSpec{{{0}}}, t), std::invalid_argument);
    CHECK_THROWS_AS(tfa::tree_group(TreeSpec{{{}, {0}, {0}}}, t), std::invalid_argument);
    CHECK_THROWS_AS(tfa::tree_group(TreeSpec{{{}, {1}}}, t), std::invalid_argument);
}

TEST_CASE("path summands split the truncated tree group", "[constructions]") {
    TruncationParams t{2, 2, 2, 6};
    auto g = tfa::tree_group(two_chains(), t);
    CHECK(g.rank() == 11);

    auto full = tfa::path_summands(two_chains(), PathSpec{{0, 0}}, t);
    CHECK(full.path_length == 2);
    CHECK(full.excluded_y_count == 0);
    CHECK(full.pair.basisA.size() == 9);
    CHECK(full.pair.basisB.size() == 2);
    auto cert = tfa::verify_direct_sum(g, 2, full.pair);
    CHECK(cert.pass);
    CHECK(cert.basis_spans);
    CHECK(cert.skipped_generators == 0);

    auto beyond = tfa::verify_direct_sum(g, 3, full.pair);
    CHECK_FALSE(beyond.pass);
    CHECK(beyond.first_failure.has_value());

    auto partial = tfa::path_summands(two_chains(), PathSpec{{0}}, t);
    CHECK(partial.path_length == 1);
    CHECK(partial.excluded_y_count == 1);
    auto pcert = tfa::verify_direct_sum(g, 2, partial.pair);
    CHECK(pcert.pass);
    CHECK(pcert.skipped_generators > 0);
    CHECK_FALSE(pcert.basis_spans);

    CHECK_THROWS_AS(tfa::path_summands(two_chains(), PathSpec{{1, 1}}, t),
                    std::invalid_argument);
    CHECK_THROWS_AS(tfa::path_summands(two_chains(), PathSpec{{0, 0, 0}}, t),
                    std::invalid_argument);
}

TEST_CASE("congruence systems match lattice membership at the first level", "[constructions]") {
    TruncationParams t{2, 2, 2, 6};
    auto g = tfa::tree_group(two_chains(), t);
    std::uint64_t r = tfa::prime_for(7, 2);
    REQUIRE(r == 227);

    auto check = [&](Int k0, Int k1, Int l00, Int l10) {
        std::map<Sigma, Int> k{{{0}, k0}, {{1}, k1}};
        std::map<Sigma, Int> l{{{0, 0}, l00}, {{1, 0}, l10}};
        return tfa::congruence_system_check(g, 1, k, l, r, 6);
    };

    auto both = check(1, 0, 1, 0);
    CHECK(both.lhs);
    CHECK(both.rhs);
    CHECK(both.agree());

    auto neither = check(1, 0, 0, 0);
    CHECK_FALSE(neither.lhs);
    CHECK_FALSE(neither.rhs);
    CHECK(neither.agree());

    auto zero = check(0, 0, 0, 0);
    CHECK(zero.lhs);
    CHECK(zero.rhs);

    auto wrapped = check(227, 0, 0, 0);
    CHECK(wrapped.lhs);
    CHECK(wrapped.rhs);

    CHECK_THROWS_AS(tfa::congruence_system_check(g, 0, {}, {}, r, 6), std::invalid_argument);
    CHECK_THROWS_AS(tfa::congruence_system_check(g, 1, {}, {}, 223, 6), std::invalid_argument);
    std::map<Sigma, Int> bad{{{0, 1}, Int(1)}};
    CHECK_THROWS_AS(tfa::congruence_system_check(g, 1, bad, {}, r, 6), std::invalid_argument);
    auto fuchs = tfa::fuchs_group(4);
    CHECK_THROWS_AS(tfa::congruence_system_check(fuchs, 1, {}, {}, r, 4), std::invalid_argument);
}

TEST_CASE("every emission is a member from its stage onward", "[constructions]") {
    TruncationParams t{3, 3, 1, 4};
    auto g = tfa::tree_group(chain_tree(3), t);
    for (const auto& e : g.emissions()) {
        CHECK(g.member(e.stage, e.value));
        if (e.stage + 1 <= g.max_stage()) CHECK(g.member(e.stage + 1, e.value));
    }
}
