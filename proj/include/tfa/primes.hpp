#pragma once

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tfa {

namespace detail {

struct PrimeTable {
    std::vector<std::uint64_t> primes;
    std::uint64_t sieved_to = 0;
    std::mutex mu;

    void grow_to_count(std::size_t count) {
        std::lock_guard<std::mutex> lock(mu);
        while (primes.size() <= count) {
            std::uint64_t limit = sieved_to == 0 ? 1u << 16 : sieved_to * 2;
            sieve(limit);
        }
    }

    void sieve(std::uint64_t limit) {
        std::vector<bool> composite(limit + 1, false);
        primes.clear();
        for (std::uint64_t p = 2; p <= limit; ++p) {
            if (composite[p]) continue;
            primes.push_back(p);
            for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
        }
        sieved_to = limit;
    }
};

inline PrimeTable& prime_table() {
    static PrimeTable t;
    return t;
}

}  // namespace detail

// Largest prime index the assignment map will hand out. Payloads coding
// deeper truncations than this are a configuration error, not a silent
// wraparound.
inline constexpr std::uint64_t kMaxPrimeIndex = 8'000'000;

// 0-indexed: nth_prime(0) = 2, nth_prime(1) = 3, ...
inline std::uint64_t nth_prime(std::uint64_t n) {
    if (n > kMaxPrimeIndex) throw std::invalid_argument("nth_prime: index beyond configured bound");
    auto& t = detail::prime_table();
    t.grow_to_count(static_cast<std::size_t>(n));
    return t.primes[static_cast<std::size_t>(n)];
}

inline bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

// Index of q in the prime sequence (2 -> 0, 3 -> 1, ...), or nullopt when q
// is not prime.
inline std::optional<std::uint64_t> prime_index_of(std::uint64_t q) {
    if (q < 2) return std::nullopt;
    auto& t = detail::prime_table();
    {
        std::lock_guard<std::mutex> lock(t.mu);
        while (t.sieved_to < q) t.sieve(t.sieved_to == 0 ? 1u << 16 : t.sieved_to * 2);
        auto it = std::lower_bound(t.primes.begin(), t.primes.end(), q);
        if (it != t.primes.end() && *it == q)
            return static_cast<std::uint64_t>(it - t.primes.begin());
    }
    return std::nullopt;
}

// Prime factorization by trial division, (prime, multiplicity) pairs in
// increasing prime order. Intended for small scalars (test inputs, scaling).
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        std::uint64_t m = 0;
        while (n % d == 0) {
            n /= d;
            ++m;
        }
        out.emplace_back(d, m);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Cantor pairing: cantor(i, j) = (i+j)(i+j+1)/2 + j.
inline std::uint64_t cantor(std::uint64_t i, std::uint64_t j) {
    std::uint64_t s = i + j;
    if (s < i || (s > 0 && (s + 1) > UINT64_MAX / s)) throw std::overflow_error("cantor: overflow");
    return s * (s + 1) / 2 + j;
}

// Bijection between finite strings of naturals and naturals:
// empty string -> 0; otherwise 1 + cantor(n-1, fold) where fold is the
// right-nested Cantor pairing of the n entries.
inline std::uint64_t code_string(const std::vector<std::uint32_t>& sigma) {
    if (sigma.empty()) return 0;
    std::uint64_t fold = sigma.back();
    for (std::size_t k = sigma.size() - 1; k-- > 0;) fold = cantor(sigma[k], fold);
    return 1 + cantor(sigma.size() - 1, fold);
}

// Tagged index data for the prime assignment. Tags:
//   0: x_i tower        1: y_i tower        2: x_sigma tower
//   3: x_i + x_j link   4: y_i + y_j link   5: x_i + x_sigma link
//   6: x_sigma + x_rho  7: partial sum      8: x_i + y_i link
struct PrimeAssignment {
    unsigned tag;
    std::uint64_t payload;

    PrimeAssignment(unsigned t, std::uint64_t p) : tag(t), payload(p) {
        if (t > 8) throw std::invalid_argument("PrimeAssignment: tag out of range");
    }
};

// prime_for(tag, payload) = nth_prime(1 + cantor(tag, payload)). Index 0
// (the prime 2) is never assigned; 2 stays reserved for the half links of
// the rank-2 constructions.
inline std::uint64_t prime_for(const PrimeAssignment& pa) {
    std::uint64_t idx = 1 + cantor(pa.tag, pa.payload);
    if (idx > kMaxPrimeIndex)
        throw std::invalid_argument("prime_for: payload exceeds configured truncation");
    return nth_prime(idx);
}

inline std::uint64_t prime_for(unsigned tag, std::uint64_t payload) {
    return prime_for(PrimeAssignment(tag, payload));
}

}  // namespace tfa
