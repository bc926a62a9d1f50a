#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tfa {

using Sigma = std::vector<std::uint32_t>;

// Description of a computably enumerable set W for the reduction group.
// Finite and CofiniteComplement describe W extensionally; StepTrace lists
// (step, value) enumeration events with distinct values.
struct CeSetSpec {
    enum class Kind { Finite, CofiniteComplement, StepTrace };

    Kind kind = Kind::Finite;
    std::vector<std::uint64_t> members;                         // Finite
    std::vector<std::uint64_t> complement;                      // CofiniteComplement
    std::vector<std::pair<std::uint64_t, std::uint64_t>> trace; // StepTrace: (step, value)

    static CeSetSpec finite(std::vector<std::uint64_t> m) {
        CeSetSpec w;
        w.kind = Kind::Finite;
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        w.members = std::move(m);
        return w;
    }
    static CeSetSpec cofinite_complement(std::vector<std::uint64_t> c) {
        CeSetSpec w;
        w.kind = Kind::CofiniteComplement;
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        w.complement = std::move(c);
        return w;
    }
    static CeSetSpec step_trace(std::vector<std::pair<std::uint64_t, std::uint64_t>> t) {
        CeSetSpec w;
        w.kind = Kind::StepTrace;
        std::set<std::uint64_t> seen;
        for (const auto& [step, value] : t)
            if (!seen.insert(value).second)
                throw std::invalid_argument("CeSetSpec: duplicate value in step trace");
        w.trace = std::move(t);
        return w;
    }

    // Membership of k in W restricted to what stage s has enumerated.
    bool contains_at_stage(std::uint64_t k, std::uint64_t s) const {
        switch (kind) {
            case Kind::Finite:
                return k <= s && std::binary_search(members.begin(), members.end(), k);
            case Kind::CofiniteComplement:
                return k <= s && !std::binary_search(complement.begin(), complement.end(), k);
            case Kind::StepTrace:
                for (const auto& [step, value] : trace)
                    if (value == k && step <= s) return true;
                return false;
        }
        return false;
    }
};

// Finite tree given as an explicit enumeration of nodes, initial segments
// first: every proper prefix of a node appears earlier in the list.
struct TreeSpec {
    std::vector<Sigma> nodes;

    bool contains(const Sigma& s) const {
        return std::find(nodes.begin(), nodes.end(), s) != nodes.end();
    }

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& n : nodes) d = std::max(d, n.size());
        return d;
    }

    std::uint32_t max_entry() const {
        std::uint32_t m = 0;
        for (const auto& n : nodes)
            for (auto e : n) m = std::max(m, e);
        return m;
    }

    // Throws on duplicate nodes or a prefix appearing after (or missing
    // entirely from) the enumeration.
    void validate() const {
        std::set<Sigma> seen;
        for (const auto& n : nodes) {
            if (!seen.insert(n).second)
                throw std::invalid_argument("TreeSpec: duplicate node");
            if (!n.empty()) {
                Sigma parent(n.begin(), n.end() - 1);
                if (!seen.count(parent))
                    throw std::invalid_argument(
                        "TreeSpec: node listed before its parent (enumeration must be "
                        "initial-segments-first and prefix-closed)");
            }
        }
    }
};

struct PathSpec {
    Sigma pi;
};

// Truncation of the infinite constructions: indices i <= n_max for x_i/y_i,
// strings of length <= depth with entries < branch, towers to exponent
// <= stages.
struct TruncationParams {
    std::uint32_t n_max = 0;
    std::uint32_t depth = 0;
    std::uint32_t branch = 1;
    std::uint32_t stages = 0;

    void validate() const {
        if (n_max == 0 || branch == 0 || stages == 0)
            throw std::invalid_argument("TruncationParams: all parameters must be positive");
        if (depth > n_max)
            throw std::invalid_argument("TruncationParams: depth must not exceed n_max");
    }
};

// Which construction a presentation came from; carried by the presentation
// so structural characteristics and prime windows can be derived without
// re-deriving the builder's schedule.
struct FuchsInfo {
    std::uint32_t stages = 0;
};
struct FreeRank2Info {
    std::uint32_t stages = 0;
};
struct CofInfo {
    CeSetSpec w;
    std::uint32_t stages = 0;
};
struct BaseInfo {
    TruncationParams trunc;
};
struct TreeInfo {
    TreeSpec tree;
    TruncationParams trunc;
};

using ConstructionInfo = std::variant<FuchsInfo, FreeRank2Info, CofInfo, BaseInfo, TreeInfo>;

inline Sigma prefix_of(const Sigma& s, std::size_t len) {
    return Sigma(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(len));
}

}  // namespace tfa
