#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "tfa/element.hpp"
#include "tfa/int_matrix.hpp"

namespace tfa {

// Solves g = sum z_i * gens_i over the integers. The common denominator of
// all coordinates is cleared by lcm, the resulting integer system is solved
// through the Hermite form, and the witness is substituted back by the
// caller's tests. Returns std::nullopt when g is outside the lattice.
//
// Rows are the union of the supports in basis-index order; a variant taking
// an explicit basis list rejects elements with foreign indices.
inline std::optional<std::vector<Int>> solve_in_lattice(const std::vector<Element>& gens,
                                                        const Element& g) {
    if (gens.empty()) {
        if (g.is_zero()) return std::vector<Int>{};
        return std::nullopt;
    }

    std::set<BasisIndex> support;
    for (const auto& gen : gens)
        for (const auto& [b, c] : gen.terms()) support.insert(b);
    for (const auto& [b, c] : g.terms()) support.insert(b);
    if (support.empty()) return std::vector<Int>(gens.size(), Int(0));

    std::map<BasisIndex, std::size_t> row_of;
    std::size_t next = 0;
    for (const auto& b : support) row_of.emplace(b, next++);

    Int lcm(1);
    for (const auto& gen : gens)
        for (const auto& [b, c] : gen.terms()) lcm = lcm_int(lcm, c.den());
    for (const auto& [b, c] : g.terms()) lcm = lcm_int(lcm, c.den());

    IntMatrix m(support.size(), gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (const auto& [b, c] : gens[j].terms())
            m.at(row_of.at(b), j) = c.num() * exact_div(lcm, c.den());

    std::vector<Int> target(support.size(), Int(0));
    for (const auto& [b, c] : g.terms())
        target[row_of.at(b)] = c.num() * exact_div(lcm, c.den());

    HermiteForm hf = hnf(m);
    auto w = hermite_solve(hf, target);
    if (!w) return std::nullopt;
    return apply_unimodular(hf.U, *w);
}

inline std::optional<std::vector<Int>> solve_in_lattice(const std::vector<Element>& gens,
                                                        const Element& g,
                                                        const std::vector<BasisIndex>& basis) {
    std::set<BasisIndex> allowed(basis.begin(), basis.end());
    auto check = [&](const Element& e) {
        for (const auto& [b, c] : e.terms())
            if (!allowed.count(b))
                throw std::invalid_argument("solve_in_lattice: element over a foreign basis index " +
                                            b.str());
    };
    for (const auto& gen : gens) check(gen);
    check(g);
    return solve_in_lattice(gens, g);
}

}  // namespace tfa
