#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfa/construction_spec.hpp"
#include "tfa/element.hpp"
#include "tfa/int_matrix.hpp"
#include "tfa/lattice.hpp"
#include "tfa/primes.hpp"
#include "tfa/rational.hpp"

namespace tfa {

// One generator together with the stage at which it first appears.
// Emission order is fixed at construction and never depends on the queried
// stage, so gen_at(s) lists are prefixes of one another up to stage gating.
struct StagedGenerator {
    std::uint32_t stage;
    Element value;
};

// Staged presentation of a subgroup of Q^basis: gen_at(s) is the cumulative,
// monotone list of generators enumerated by stage s. gen_at(0) is exactly the
// basis. Queries are pure; per-stage Hermite forms are memoized behind a
// mutex, so concurrent use is safe.
class StagedPresentation {
public:
    StagedPresentation(std::string label, std::vector<BasisIndex> basis,
                       std::vector<StagedGenerator> emissions, std::uint32_t max_stage,
                       ConstructionInfo info)
        : label_(std::move(label)),
          basis_(std::move(basis)),
          emissions_(std::move(emissions)),
          max_stage_(max_stage),
          info_(std::move(info)) {
        for (const auto& b : basis_) basis_set_.insert(b);
        if (basis_set_.size() != basis_.size())
            throw std::invalid_argument("StagedPresentation: duplicate basis index");
        for (const auto& e : emissions_)
            for (const auto& [b, c] : e.value.terms())
                if (!basis_set_.count(b))
                    throw std::invalid_argument(
                        "StagedPresentation: generator over a foreign basis index " + b.str());
    }

    const std::string& label() const { return label_; }
    const std::vector<BasisIndex>& basis() const { return basis_; }
    std::uint32_t max_stage() const { return max_stage_; }
    const ConstructionInfo& info() const { return info_; }
    std::size_t rank() const { return basis_.size(); }

    std::vector<Element> gen_at(std::uint32_t s) const {
        check_stage(s);
        std::vector<Element> out;
        for (const auto& e : emissions_)
            if (e.stage <= s) out.push_back(e.value);
        return out;
    }

    std::size_t gen_count_at(std::uint32_t s) const {
        check_stage(s);
        std::size_t n = 0;
        for (const auto& e : emissions_)
            if (e.stage <= s) ++n;
        return n;
    }

    const std::vector<StagedGenerator>& emissions() const { return emissions_; }

    bool has_index(const BasisIndex& b) const { return basis_set_.count(b) > 0; }

    void check_stage(std::uint32_t s) const {
        if (s > max_stage_)
            throw std::invalid_argument("stage " + std::to_string(s) +
                                        " beyond configured maximum " +
                                        std::to_string(max_stage_));
    }

    // Membership of g in the stage-s group. Support must lie inside the
    // declared basis.
    bool member(std::uint32_t s, const Element& g) const {
        return static_cast<bool>(solve(s, g, /*need_witness=*/false));
    }

    // Integer coordinates of g over gen_at(s), if any.
    std::optional<std::vector<Int>> solve(std::uint32_t s, const Element& g,
                                          bool need_witness = true) const {
        check_stage(s);
        for (const auto& [b, c] : g.terms())
            if (!basis_set_.count(b))
                throw std::invalid_argument("member: element over a foreign basis index " +
                                            b.str());
        const StageCache& cache = stage_cache(s);
        std::vector<Int> target(basis_.size(), Int(0));
        for (const auto& [b, c] : g.terms()) {
            Int scaled_den = c.den();
            Int q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), cache.lcm.get_mpz_t(),
                        scaled_den.get_mpz_t());
            if (r != 0) return std::nullopt;  // denominator outside the stage lattice
            target[cache.row_of.at(b)] = c.num() * q;
        }
        auto w = hermite_solve(cache.hf, target);
        if (!w) return std::nullopt;
        if (!need_witness) return std::vector<Int>{};
        return apply_unimodular(cache.hf.U, *w);
    }

private:
    struct StageCache {
        Int lcm;
        std::map<BasisIndex, std::size_t> row_of;
        HermiteForm hf;
    };

    const StageCache& stage_cache(std::uint32_t s) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = caches_.find(s);
        if (it != caches_.end()) return *it->second;

        auto cache = std::make_unique<StageCache>(StageCache{Int(1), {}, HermiteForm{
            IntMatrix(1, 1), IntMatrix(1, 1), 0, {}}});
        std::size_t next = 0;
        for (const auto& b : basis_) cache->row_of.emplace(b, next++);

        std::vector<const Element*> gens;
        for (const auto& e : emissions_)
            if (e.stage <= s) gens.push_back(&e.value);
        for (const auto* g : gens)
            for (const auto& [b, c] : g->terms()) cache->lcm = lcm_int(cache->lcm, c.den());

        IntMatrix m(basis_.size(), gens.empty() ? 1 : gens.size());
        for (std::size_t j = 0; j < gens.size(); ++j)
            for (const auto& [b, c] : gens[j]->terms())
                m.at(cache->row_of.at(b), j) = c.num() * exact_div(cache->lcm, c.den());
        cache->hf = hnf(m);

        const StageCache& ref = *cache;
        caches_.emplace(s, std::move(cache));
        return ref;
    }

    std::string label_;
    std::vector<BasisIndex> basis_;
    std::set<BasisIndex> basis_set_;
    std::vector<StagedGenerator> emissions_;
    std::uint32_t max_stage_;
    ConstructionInfo info_;

    mutable std::mutex mu_;
    mutable std::map<std::uint32_t, std::unique_ptr<StageCache>> caches_;
};

inline bool member(const StagedPresentation& p, std::uint32_t s, const Element& g) {
    return p.member(s, g);
}

// p^k-divisibility of g inside the stage-s group: g / p^k is a member.
inline bool divides(const StagedPresentation& p, std::uint32_t s, std::uint64_t prime,
                    std::uint64_t k, const Element& g) {
    if (prime < 2) throw std::invalid_argument("divides: prime must be >= 2");
    return p.member(s, g.divided_by(pow_int(Int(static_cast<unsigned long>(prime)), k)));
}

// Stage-bounded height: value is the largest k <= cap with p^k | g; capped
// reports that the cap was reached, i.e. the true height is >= cap.
struct StageHeight {
    std::uint64_t value = 0;
    bool capped = false;

    friend bool operator==(const StageHeight&, const StageHeight&) = default;
};

inline StageHeight height_at_stage(const StagedPresentation& p, std::uint32_t s,
                                   std::uint64_t prime, const Element& g, std::uint64_t cap) {
    if (g.is_zero()) throw std::invalid_argument("height_at_stage: zero element");
    if (!p.member(s, g))
        throw std::invalid_argument("height_at_stage: element not in the stage group");
    std::uint64_t h = 0;
    while (h < cap && divides(p, s, prime, h + 1, g)) ++h;
    return StageHeight{h, h == cap};
}

// Heights along a finite prime list, each capped.
inline std::vector<StageHeight> characteristic_at_stage(const StagedPresentation& p,
                                                        std::uint32_t s,
                                                        const Element& g,
                                                        const std::vector<std::uint64_t>& primes,
                                                        std::uint64_t cap) {
    std::vector<StageHeight> out;
    out.reserve(primes.size());
    for (auto q : primes) out.push_back(height_at_stage(p, s, q, g, cap));
    return out;
}

}  // namespace tfa
