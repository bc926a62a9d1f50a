#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tfa/basis_index.hpp"
#include "tfa/rational.hpp"

namespace tfa {

// Element of the ambient rational vector space over the tagged basis:
// a finite formal sum of coeff * basis_index. Zero coefficients are never
// stored, so support() and canonical text are well defined.
class Element {
public:
    Element() = default;

    static Element unit(const BasisIndex& b) {
        Element e;
        e.coeffs_.emplace(b, Rational(1));
        return e;
    }

    const Rational& coeff(const BasisIndex& b) const {
        static const Rational zero;
        auto it = coeffs_.find(b);
        return it == coeffs_.end() ? zero : it->second;
    }

    void set_coeff(const BasisIndex& b, const Rational& c) {
        if (c.is_zero())
            coeffs_.erase(b);
        else
            coeffs_[b] = c;
    }

    bool is_zero() const { return coeffs_.empty(); }

    std::vector<BasisIndex> support() const {
        std::vector<BasisIndex> s;
        s.reserve(coeffs_.size());
        for (const auto& [b, c] : coeffs_) s.push_back(b);
        return s;
    }

    const std::map<BasisIndex, Rational>& terms() const { return coeffs_; }

    Element operator-() const {
        Element r;
        for (const auto& [b, c] : coeffs_) r.coeffs_.emplace(b, -c);
        return r;
    }

    Element& operator+=(const Element& o) {
        for (const auto& [b, c] : o.coeffs_) set_coeff(b, coeff(b) + c);
        return *this;
    }
    Element& operator-=(const Element& o) {
        for (const auto& [b, c] : o.coeffs_) set_coeff(b, coeff(b) - c);
        return *this;
    }
    Element& operator*=(const Rational& s) {
        if (s.is_zero()) {
            coeffs_.clear();
        } else {
            for (auto& [b, c] : coeffs_) c *= s;
        }
        return *this;
    }

    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(const Rational& s, Element a) { return a *= s; }

    // a / (p^k), exact
    Element divided_by(const Int& d) const {
        Element r = *this;
        r *= Rational(Int(1), d);
        return r;
    }

    friend bool operator==(const Element& a, const Element& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
    friend bool operator<(const Element& a, const Element& b) { return a.coeffs_ < b.coeffs_; }

    // Canonical text: coeff*index terms in basis order joined by " + ",
    // e.g. "1/2*x1 + 1/2*x2"; the zero element prints "0".
    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [b, c] : coeffs_) {
            if (!first) s += " + ";
            s += c.str() + "*" + b.str();
            first = false;
        }
        return s;
    }

private:
    std::map<BasisIndex, Rational> coeffs_;
};

inline Element operator*(long s, const Element& a) { return Rational(s) * a; }

}  // namespace tfa
