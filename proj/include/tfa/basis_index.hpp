#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace tfa {

// Tagged basis index. Total order (used everywhere a canonical ordering is
// needed, including serialization):
//   g1 < g2 < x1 < y1 < x2 < y2 < ... < x() < x(0) < x(1) < ... < x(0,0) < ...
// i.e. the two rank-2 generators first, then x_i/y_i interleaved by index,
// then the string-indexed family ordered by (length, lexicographic).
class BasisIndex {
public:
    enum class Kind : std::uint8_t { G1, G2, X, Y, XSigma };

    static BasisIndex g1() { return BasisIndex(Kind::G1, 0, {}); }
    static BasisIndex g2() { return BasisIndex(Kind::G2, 0, {}); }
    static BasisIndex x(std::uint32_t i) {
        if (i == 0) throw std::invalid_argument("BasisIndex: x indices start at 1");
        return BasisIndex(Kind::X, i, {});
    }
    static BasisIndex y(std::uint32_t i) {
        if (i == 0) throw std::invalid_argument("BasisIndex: y indices start at 1");
        return BasisIndex(Kind::Y, i, {});
    }
    static BasisIndex xsigma(std::vector<std::uint32_t> sigma) {
        return BasisIndex(Kind::XSigma, 0, std::move(sigma));
    }

    Kind kind() const { return kind_; }
    std::uint32_t index() const { return i_; }
    const std::vector<std::uint32_t>& sigma() const { return sigma_; }

    friend bool operator==(const BasisIndex& a, const BasisIndex& b) = default;

    friend std::strong_ordering operator<=>(const BasisIndex& a, const BasisIndex& b) {
        auto ra = a.rank_tuple(), rb = b.rank_tuple();
        if (auto c = ra <=> rb; c != 0) return c;
        if (a.kind_ == Kind::XSigma) {
            if (auto c = a.sigma_.size() <=> b.sigma_.size(); c != 0) return c;
            for (std::size_t k = 0; k < a.sigma_.size(); ++k)
                if (auto c = a.sigma_[k] <=> b.sigma_[k]; c != 0) return c;
        }
        return std::strong_ordering::equal;
    }

    std::string str() const {
        switch (kind_) {
            case Kind::G1: return "g1";
            case Kind::G2: return "g2";
            case Kind::X: return "x" + std::to_string(i_);
            case Kind::Y: return "y" + std::to_string(i_);
            case Kind::XSigma: {
                std::string s = "x(";
                for (std::size_t k = 0; k < sigma_.size(); ++k) {
                    if (k) s += ",";
                    s += std::to_string(sigma_[k]);
                }
                return s + ")";
            }
        }
        return "?";
    }

private:
    BasisIndex(Kind k, std::uint32_t i, std::vector<std::uint32_t> sigma)
        : kind_(k), i_(i), sigma_(std::move(sigma)) {}

    // Interleaving rank: (group, major, minor) compared before sigma contents.
    std::tuple<int, std::uint64_t, int> rank_tuple() const {
        switch (kind_) {
            case Kind::G1: return {0, 0, 0};
            case Kind::G2: return {0, 1, 0};
            case Kind::X: return {1, i_, 0};
            case Kind::Y: return {1, i_, 1};
            case Kind::XSigma: return {2, 0, 0};
        }
        return {3, 0, 0};
    }

    Kind kind_;
    std::uint32_t i_;
    std::vector<std::uint32_t> sigma_;
};

}  // namespace tfa
