#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tfa/characteristic.hpp"
#include "tfa/construction_spec.hpp"
#include "tfa/staged_presentation.hpp"

namespace tfa {

namespace detail {

// All strings of length <= depth with entries < branch, in basis order
// (length, then lexicographic). This is the x_sigma index universe of a
// truncated construction.
inline std::vector<Sigma> sigma_universe(const TruncationParams& t) {
    std::vector<Sigma> out{Sigma{}};
    std::size_t level_begin = 0;
    for (std::uint32_t d = 1; d <= t.depth; ++d) {
        std::size_t level_end = out.size();
        for (std::size_t k = level_begin; k < level_end; ++k)
            for (std::uint32_t e = 0; e < t.branch; ++e) {
                Sigma s = out[k];
                s.push_back(e);
                out.push_back(std::move(s));
            }
        level_begin = level_end;
    }
    return out;
}

inline std::uint64_t pair_payload(std::uint64_t i, std::uint64_t j) { return cantor(i, j); }

}  // namespace detail

// Structural characteristic of a basis element, read off the construction's
// generator schedule symbolically (never by stage search). Throws for an
// index that is not part of the construction's basis.
inline Characteristic structural_characteristic(const ConstructionInfo& info,
                                                const BasisIndex& b) {
    if (std::holds_alternative<FuchsInfo>(info)) {
        if (b == BasisIndex::x(1)) return Characteristic::single_infinity(3);
        if (b == BasisIndex::x(2)) return Characteristic::single_infinity(5);
        throw std::invalid_argument("structural_characteristic: foreign index " + b.str());
    }
    if (std::holds_alternative<FreeRank2Info>(info)) {
        if (b == BasisIndex::g1() || b == BasisIndex::g2()) return Characteristic::zero();
        throw std::invalid_argument("structural_characteristic: foreign index " + b.str());
    }
    if (const auto* cof = std::get_if<CofInfo>(&info)) {
        if (b == BasisIndex::g1()) {
            Characteristic c;
            c.odd_indexed = Characteristic::FamilyRule{HeightValue::fin(1), {}};
            return c;
        }
        if (b == BasisIndex::g2()) {
            Characteristic c;
            c.even_indexed = Characteristic::FamilyRule{HeightValue::fin(1), {}};
            switch (cof->w.kind) {
                case CeSetSpec::Kind::Finite:
                    for (auto k : cof->w.members)
                        c.exceptions.emplace(nth_prime(2 * k + 1), HeightValue::fin(1));
                    break;
                case CeSetSpec::Kind::StepTrace:
                    for (const auto& [step, k] : cof->w.trace)
                        c.exceptions.emplace(nth_prime(2 * k + 1), HeightValue::fin(1));
                    break;
                case CeSetSpec::Kind::CofiniteComplement: {
                    Characteristic::FamilyRule rule{HeightValue::fin(1), {}};
                    for (auto k : cof->w.complement) rule.excluded.insert(nth_prime(2 * k + 1));
                    c.odd_indexed = rule;
                    break;
                }
            }
            return c;
        }
        throw std::invalid_argument("structural_characteristic: foreign index " + b.str());
    }

    const TruncationParams* trunc = nullptr;
    const TreeSpec* tree = nullptr;
    if (const auto* base = std::get_if<BaseInfo>(&info)) {
        trunc = &base->trunc;
    } else if (const auto* tr = std::get_if<TreeInfo>(&info)) {
        trunc = &tr->trunc;
        tree = &tr->tree;
    } else {
        throw std::invalid_argument("structural_characteristic: unknown construction");
    }

    switch (b.kind()) {
        case BasisIndex::Kind::X:
            if (b.index() > trunc->n_max) break;
            return Characteristic::single_infinity(prime_for(0, b.index()));
        case BasisIndex::Kind::Y:
            if (b.index() > trunc->n_max) break;
            return Characteristic::single_infinity(prime_for(1, b.index()));
        case BasisIndex::Kind::XSigma: {
            const Sigma& sigma = b.sigma();
            if (sigma.size() > trunc->depth) break;
            Characteristic c = Characteristic::single_infinity(prime_for(2, code_string(sigma)));
            if (tree && !sigma.empty() && tree->contains(sigma)) {
                // Step (1) of every tree node extending sigma divides
                // x_sigma by the level-|sigma| y-tower prime.
                std::uint64_t longest = 0;
                for (const auto& tau : tree->nodes)
                    if (tau.size() >= sigma.size() &&
                        std::equal(sigma.begin(), sigma.end(), tau.begin()))
                        longest = std::max<std::uint64_t>(longest, tau.size());
                c.exceptions.emplace(prime_for(1, sigma.size()), HeightValue::fin(longest));
            }
            return c;
        }
        default:
            break;
    }
    throw std::invalid_argument("structural_characteristic: foreign index " + b.str());
}

// Finite prime window a construction's predicates are evaluated over:
// every prime the truncated schedule assigns, in increasing order.
inline std::vector<std::uint64_t> characteristic_window(const ConstructionInfo& info) {
    std::set<std::uint64_t> w;
    if (std::holds_alternative<FuchsInfo>(info) || std::holds_alternative<FreeRank2Info>(info)) {
        for (std::uint64_t i = 0; i < 12; ++i) w.insert(nth_prime(i));
    } else if (const auto* cof = std::get_if<CofInfo>(&info)) {
        for (std::uint64_t i = 0; i <= 2 * static_cast<std::uint64_t>(cof->stages) + 2; ++i)
            w.insert(nth_prime(i));
    } else {
        const TruncationParams& t = std::holds_alternative<BaseInfo>(info)
                                        ? std::get<BaseInfo>(info).trunc
                                        : std::get<TreeInfo>(info).trunc;
        auto universe = detail::sigma_universe(t);
        for (std::uint32_t i = 1; i <= t.n_max; ++i) {
            w.insert(prime_for(0, i));
            w.insert(prime_for(1, i));
            w.insert(prime_for(8, i));
        }
        for (const auto& s : universe) w.insert(prime_for(2, code_string(s)));
        for (std::uint32_t i = 1; i <= t.n_max; ++i)
            for (std::uint32_t j = i + 1; j <= t.n_max; ++j) {
                w.insert(prime_for(3, detail::pair_payload(i, j)));
                w.insert(prime_for(4, detail::pair_payload(i, j)));
            }
        for (std::uint32_t i = 1; i <= t.n_max; ++i)
            for (const auto& s : universe)
                w.insert(prime_for(5, detail::pair_payload(i, code_string(s))));
        for (std::size_t a = 0; a < universe.size(); ++a)
            for (std::size_t b = a + 1; b < universe.size(); ++b)
                w.insert(prime_for(
                    6, detail::pair_payload(code_string(universe[a]), code_string(universe[b]))));
        for (std::uint32_t n = 2; n <= t.n_max; ++n) w.insert(prime_for(7, n));
    }
    return {w.begin(), w.end()};
}

// The primes that realize links (divide sums of distinct basis elements
// without dividing either part) in the truncated schedule.
inline std::vector<std::uint64_t> link_prime_window(const ConstructionInfo& info) {
    if (std::holds_alternative<FuchsInfo>(info) || std::holds_alternative<CofInfo>(info))
        return {2};
    if (std::holds_alternative<FreeRank2Info>(info)) return {};
    const TruncationParams& t = std::holds_alternative<BaseInfo>(info)
                                    ? std::get<BaseInfo>(info).trunc
                                    : std::get<TreeInfo>(info).trunc;
    std::set<std::uint64_t> w;
    auto universe = detail::sigma_universe(t);
    for (std::uint32_t i = 1; i <= t.n_max; ++i)
        for (std::uint32_t j = i + 1; j <= t.n_max; ++j) {
            w.insert(prime_for(3, detail::pair_payload(i, j)));
            w.insert(prime_for(4, detail::pair_payload(i, j)));
        }
    for (std::uint32_t i = 1; i <= t.n_max; ++i)
        for (const auto& s : universe)
            w.insert(prime_for(5, detail::pair_payload(i, code_string(s))));
    for (std::size_t a = 0; a < universe.size(); ++a)
        for (std::size_t b = a + 1; b < universe.size(); ++b)
            w.insert(prime_for(
                6, detail::pair_payload(code_string(universe[a]), code_string(universe[b]))));
    for (std::uint32_t n = 2; n <= t.n_max; ++n) w.insert(prime_for(7, n));
    for (std::uint32_t i = 1; i <= t.n_max; ++i) w.insert(prime_for(8, i));
    return {w.begin(), w.end()};
}

// Outcome of the bounded strict-maximality check, with enough context to
// reproduce it.
struct MaximalityRecord {
    BasisIndex node;
    bool maximal = false;
    std::uint64_t witness_bound = 0;
    std::uint32_t stage = 0;
    std::uint64_t cap = 0;
    std::uint64_t candidates_checked = 0;
    std::optional<Element> dominating_witness;

    static constexpr const char* kCaveat = "bounded-witness verification";
};

namespace detail {

inline std::uint64_t stage_height(const StagedPresentation& p, std::uint32_t s,
                                  std::uint64_t prime, const Element& g, std::uint64_t cap) {
    std::uint64_t h = 0;
    while (h < cap && divides(p, s, prime, h + 1, g)) ++h;
    return h;
}

// Bounded domination test of candidate c over the structural characteristic
// of b. Within the window: every infinite entry of chi_b must be matched by
// a capped stage height of c reaching the cap, and finite-entry violations
// (stage height of c below chi_b) refute domination only in the tail half of
// the window, since "all but finitely many" cannot be decided from a finite
// window, so persistence into the tail is the convention.
inline bool dominates_within_bounds(const StagedPresentation& p, std::uint32_t s,
                                    const Element& c, const Characteristic& chi_b,
                                    const std::vector<std::uint64_t>& window,
                                    std::uint64_t cap) {
    std::vector<std::size_t> finite_positive;
    for (std::size_t idx = 0; idx < window.size(); ++idx) {
        HeightValue hb = chi_b.eval(window[idx]);
        if (hb.infinite) {
            if (stage_height(p, s, window[idx], c, cap) < cap) return false;
        } else if (hb.value > 0) {
            finite_positive.push_back(idx);
        }
    }
    const std::size_t tail_begin = (window.size() + 1) / 2;
    for (std::size_t idx : finite_positive) {
        if (idx < tail_begin) continue;
        HeightValue hb = chi_b.eval(window[idx]);
        if (stage_height(p, s, window[idx], c, hb.value) < hb.value) return false;
    }
    return true;
}

}  // namespace detail

// Bounded verification that basis element b has strictly maximal type in the
// stage-s group: no nonzero integer combination of at most three basis
// elements with coefficients bounded by witness_bound and linearly
// independent from b dominates b's structural characteristic within the
// construction's prime window. cap = 0 means "use the stage number".
// A true result is evidence relative to (witness_bound, s, cap, window),
// never a proof; the record carries all four.
inline MaximalityRecord strictly_maximal(const StagedPresentation& p, const BasisIndex& b,
                                         std::uint64_t witness_bound, std::uint32_t s,
                                         std::uint64_t cap = 0) {
    if (!p.has_index(b))
        throw std::invalid_argument("strictly_maximal: foreign basis index " + b.str());
    if (witness_bound == 0) throw std::invalid_argument("strictly_maximal: zero witness bound");
    if (cap == 0) cap = s;
    Characteristic chi_b = structural_characteristic(p.info(), b);
    std::vector<std::uint64_t> window = characteristic_window(p.info());

    MaximalityRecord rec{b, true, witness_bound, s, cap, 0, std::nullopt};

    const auto& basis = p.basis();
    const std::size_t n = basis.size();
    std::vector<long> coeff_values;
    for (std::uint64_t v = 1; v <= witness_bound; ++v) {
        coeff_values.push_back(static_cast<long>(v));
        coeff_values.push_back(-static_cast<long>(v));
    }

    // Supports of size 1..3; candidates with all-nonzero coefficients on the
    // support; the leading coefficient kept positive (heights are invariant
    // under negation).
    auto consider = [&](const std::vector<std::size_t>& support) -> bool {
        std::vector<std::size_t> pick(support.size(), 0);
        for (;;) {
            bool leading_positive = coeff_values[pick[0]] > 0;
            if (leading_positive) {
                Element c;
                for (std::size_t k = 0; k < support.size(); ++k)
                    c.set_coeff(basis[support[k]], Rational(coeff_values[pick[k]]));
                bool multiple_of_b = support.size() == 1 && basis[support[0]] == b;
                if (!multiple_of_b) {
                    ++rec.candidates_checked;
                    if (detail::dominates_within_bounds(p, s, c, chi_b, window, cap)) {
                        rec.maximal = false;
                        rec.dominating_witness = c;
                        return false;
                    }
                }
            }
            std::size_t k = support.size();
            while (k > 0) {
                --k;
                if (++pick[k] < coeff_values.size()) break;
                pick[k] = 0;
                if (k == 0) return true;
            }
        }
    };

    for (std::size_t i = 0; i < n && rec.maximal; ++i) {
        if (!consider({i})) break;
        for (std::size_t j = i + 1; j < n && rec.maximal; ++j) {
            if (!consider({i, j})) break;
            for (std::size_t k = j + 1; k < n && rec.maximal; ++k)
                if (!consider({i, j, k})) break;
        }
    }
    return rec;
}

}  // namespace tfa
