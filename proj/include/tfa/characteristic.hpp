#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfa/primes.hpp"

namespace tfa {

// An element of ℕ ∪ {∞}.
struct HeightValue {
    bool infinite = false;
    std::uint64_t value = 0;

    static HeightValue fin(std::uint64_t v) { return {false, v}; }
    static HeightValue inf() { return {true, 0}; }

    friend bool operator==(const HeightValue&, const HeightValue&) = default;

    // a <= b in ℕ ∪ {∞}
    bool leq(const HeightValue& o) const {
        if (o.infinite) return true;
        if (infinite) return false;
        return value <= o.value;
    }

    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

// Symbolic characteristic: the full height sequence of an element, described
// finitely. Two infinite prime families, the odd-indexed primes p_{2j+1}
// and the even-indexed primes p_{2j+2} (the prime 2 = p_0 belongs to
// neither), can carry a uniform value each minus a finite excluded set;
// finitely
// many per-prime exceptions take precedence over the families; everything
// else has height 0.
struct Characteristic {
    struct FamilyRule {
        HeightValue value;
        std::set<std::uint64_t> excluded;  // prime values carved out of the family
    };

    std::optional<FamilyRule> odd_indexed;
    std::optional<FamilyRule> even_indexed;
    std::map<std::uint64_t, HeightValue> exceptions;

    static Characteristic zero() { return {}; }

    static Characteristic single_infinity(std::uint64_t p) {
        Characteristic c;
        c.exceptions.emplace(p, HeightValue::inf());
        return c;
    }

    HeightValue eval(std::uint64_t p) const {
        if (auto it = exceptions.find(p); it != exceptions.end()) return it->second;
        auto idx = prime_index_of(p);
        if (!idx) throw std::invalid_argument("Characteristic::eval: not a prime");
        if (*idx == 0) return HeightValue::fin(0);
        const auto& rule = (*idx % 2 == 1) ? odd_indexed : even_indexed;
        if (rule && !rule->excluded.count(p)) return rule->value;
        return HeightValue::fin(0);
    }

    // Finitely many primes where eval() can differ from the family/default
    // pattern, plus the other characteristic's specials; used by the
    // comparison predicates below.
    std::set<std::uint64_t> special_primes() const {
        std::set<std::uint64_t> s{2};
        for (const auto& [p, v] : exceptions) s.insert(p);
        if (odd_indexed) s.insert(odd_indexed->excluded.begin(), odd_indexed->excluded.end());
        if (even_indexed) s.insert(even_indexed->excluded.begin(), even_indexed->excluded.end());
        return s;
    }

    HeightValue generic_odd() const {
        return odd_indexed ? odd_indexed->value : HeightValue::fin(0);
    }
    HeightValue generic_even() const {
        return even_indexed ? even_indexed->value : HeightValue::fin(0);
    }

    // Documented textual form: exceptions in increasing prime order, then the
    // family rules, then the default, e.g. "{3:inf, default:0}" or
    // "{5:1, odd_indexed\{3}:1, default:0}".
    std::string str() const {
        std::string s = "{";
        for (const auto& [p, v] : exceptions) s += std::to_string(p) + ":" + v.str() + ", ";
        auto fam = [&](const char* name, const std::optional<FamilyRule>& r) {
            if (!r) return;
            s += std::string(name);
            if (!r->excluded.empty()) {
                s += "\\{";
                bool first = true;
                for (auto p : r->excluded) {
                    if (!first) s += ",";
                    s += std::to_string(p);
                    first = false;
                }
                s += "}";
            }
            s += ":" + r->value.str() + ", ";
        };
        fam("odd_indexed", odd_indexed);
        fam("even_indexed", even_indexed);
        return s + "default:0}";
    }
};

// Height sequence of n*g from the height sequence of g: v_p(n) is added at
// the finitely many primes dividing n; infinite entries stay infinite.
inline Characteristic scale_characteristic(const Characteristic& chi, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("scale_characteristic: zero scalar");
    Characteristic out = chi;
    for (const auto& [p, mult] : factorize(n)) {
        HeightValue v = chi.eval(p);
        if (!v.infinite) v.value += mult;
        out.exceptions[p] = v;
    }
    return out;
}

// Height-sequence order underlying the type order: h_p(a) = inf implies
// h_p(b) = inf at every prime, and h_p(a) <= h_p(b) at all but finitely many.
inline bool type_leq(const Characteristic& a, const Characteristic& b) {
    std::set<std::uint64_t> specials = a.special_primes();
    for (auto p : b.special_primes()) specials.insert(p);
    for (auto p : specials)
        if (a.eval(p).infinite && !b.eval(p).infinite) return false;
    // Generic regions are infinite, so the infinity condition and the
    // almost-everywhere comparison both reduce to value comparison there.
    if (!a.generic_odd().leq(b.generic_odd())) return false;
    if (!a.generic_even().leq(b.generic_even())) return false;
    return true;
}

// Same equivalence as the type relation: identical infinity sets and finite
// values differing at only finitely many primes.
inline bool char_equiv(const Characteristic& a, const Characteristic& b) {
    std::set<std::uint64_t> specials = a.special_primes();
    for (auto p : b.special_primes()) specials.insert(p);
    for (auto p : specials)
        if (a.eval(p).infinite != b.eval(p).infinite) return false;
    if (a.generic_odd() != b.generic_odd()) return false;
    if (a.generic_even() != b.generic_even()) return false;
    return true;
}

inline bool type_lt(const Characteristic& a, const Characteristic& b) {
    return type_leq(a, b) && !type_leq(b, a);
}

// Equivalence class of a characteristic under char_equiv.
struct TypeClass {
    Characteristic rep;

    friend bool operator==(const TypeClass& x, const TypeClass& y) {
        return char_equiv(x.rep, y.rep);
    }
};

inline bool type_leq(const TypeClass& x, const TypeClass& y) { return type_leq(x.rep, y.rep); }

}  // namespace tfa
