#pragma once

#include <cstdlib>
#include <optional>
#include <random>
#include <vector>

#include "tfa/element.hpp"
#include "tfa/lattice.hpp"

namespace tfa_test {

// Exhaustive search for an integer combination sum z_i * gens[i] == target
// with every |z_i| <= bound. Independent of the lattice solver: plain
// depth-first enumeration with partial sums.
inline std::optional<std::vector<long>> brute_force_combo(const std::vector<tfa::Element>& gens,
                                                          const tfa::Element& target,
                                                          long bound) {
    std::vector<long> z(gens.size(), 0);
    std::optional<std::vector<long>> found;
    auto rec = [&](auto&& self, std::size_t i, const tfa::Element& partial) -> bool {
        if (i == gens.size()) {
            if (partial == target) {
                found = z;
                return true;
            }
            return false;
        }
        for (long v = -bound; v <= bound; ++v) {
            z[i] = v;
            if (self(self, i + 1, partial + v * gens[i])) return true;
        }
        return false;
    };
    rec(rec, 0, tfa::Element());
    return found;
}

struct OracleInstance {
    std::vector<tfa::Element> gens;
    tfa::Element target;
};

// Random instance: up to `max_dim` coordinates, up to `max_gens` generators,
// numerators in [-5, 5], denominators in {1, 2, 3}. Half the targets are
// planted combinations with coefficients in [-5, 5], half are independent
// random elements.
inline OracleInstance random_instance(std::mt19937& rng, std::size_t max_dim = 4,
                                      std::size_t max_gens = 4) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den_pick(0, 2);
    std::uniform_int_distribution<std::size_t> dim_pick(1, max_dim);
    std::uniform_int_distribution<std::size_t> gen_pick(1, max_gens);
    const long dens[3] = {1, 2, 3};

    OracleInstance inst;
    std::size_t dim = dim_pick(rng);
    std::size_t n_gens = gen_pick(rng);
    auto random_element = [&]() {
        tfa::Element e;
        for (std::size_t d = 1; d <= dim; ++d)
            e.set_coeff(tfa::BasisIndex::x(static_cast<std::uint32_t>(d)),
                        tfa::Rational(tfa::Int(num(rng)), tfa::Int(dens[den_pick(rng)])));
        return e;
    };
    for (std::size_t i = 0; i < n_gens; ++i) inst.gens.push_back(random_element());
    if (rng() % 2 == 0) {
        for (const auto& g : inst.gens) inst.target += num(rng) * g;
    } else {
        inst.target = random_element();
    }
    return inst;
}

// One oracle comparison. Returns false only on genuine disagreement:
// either the solver's witness fails to reproduce the target, or the solver
// reports no solution while brute force found one within the bound.
inline bool oracle_agrees(const OracleInstance& inst, long brute_bound = 10) {
    auto sol = tfa::solve_in_lattice(inst.gens, inst.target);
    auto brute = brute_force_combo(inst.gens, inst.target, brute_bound);
    if (sol) {
        tfa::Element sum;
        for (std::size_t i = 0; i < inst.gens.size(); ++i)
            sum += tfa::Rational((*sol)[i]) * inst.gens[i];
        return sum == inst.target;
    }
    return !brute.has_value();
}

}  // namespace tfa_test
