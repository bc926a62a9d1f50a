#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfa/element.hpp"
#include "tfa/staged_presentation.hpp"
#include "tfa/typesystem.hpp"

namespace tfa {

// Claimed decomposition witness: the two summands are the membership
// closures of the rational spans of basisA and basisB inside the stage
// group. The combined lists must be linearly independent over the rationals.
struct SummandPair {
    std::vector<Element> basisA;
    std::vector<Element> basisB;
};

namespace detail {

struct RationalSolve {
    std::size_t rank = 0;
    bool columns_independent = false;
    bool consistent = false;
    std::vector<Rational> coords;  // meaningful iff independent and consistent
};

// Exact Gauss-Jordan elimination on [cols | target] over the union support.
inline RationalSolve solve_rational(const std::vector<Element>& cols, const Element& target) {
    std::set<BasisIndex> support;
    for (const auto& c : cols)
        for (const auto& [b, q] : c.terms()) support.insert(b);
    for (const auto& [b, q] : target.terms()) support.insert(b);

    std::map<BasisIndex, std::size_t> row_of;
    std::size_t next = 0;
    for (const auto& b : support) row_of.emplace(b, next++);

    const std::size_t m = support.size();
    const std::size_t n = cols.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n + 1));
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [b, q] : cols[j].terms()) a[row_of.at(b)][j] = q;
    for (const auto& [b, q] : target.terms()) a[row_of.at(b)][n] = q;

    RationalSolve out;
    std::vector<std::size_t> pivot_row(n, m);
    std::size_t r = 0;
    for (std::size_t j = 0; j < n && r < m; ++j) {
        std::size_t p = r;
        while (p < m && a[p][j].is_zero()) ++p;
        if (p == m) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || a[i][j].is_zero()) continue;
            Rational f = a[i][j] / a[r][j];
            for (std::size_t k = j; k <= n; ++k) a[i][k] -= f * a[r][k];
        }
        pivot_row[j] = r;
        ++r;
    }
    out.rank = r;
    out.columns_independent = (r == n);
    out.consistent = true;
    for (std::size_t i = r; i < m; ++i)
        if (!a[i][n].is_zero()) out.consistent = false;
    if (out.columns_independent && out.consistent) {
        out.coords.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            out.coords[j] = a[pivot_row[j]][n] / a[pivot_row[j]][j];
    }
    return out;
}

}  // namespace detail

inline std::size_t rational_rank(const std::vector<Element>& v) {
    return detail::solve_rational(v, Element{}).rank;
}

// g written over the combined basis, regrouped into its A-part and B-part.
struct ProjectionSplit {
    Element a_part;
    Element b_part;
};

// Unique rational coordinates of g over basisA ∪ basisB, regrouped by side.
// Throws if the combined basis is dependent or g lies outside its span.
inline ProjectionSplit split_projections(const SummandPair& pair, const Element& g) {
    std::vector<Element> combined = pair.basisA;
    combined.insert(combined.end(), pair.basisB.begin(), pair.basisB.end());
    auto sol = detail::solve_rational(combined, g);
    if (!sol.columns_independent)
        throw std::invalid_argument("split_projections: combined summand bases are dependent");
    if (!sol.consistent)
        throw std::invalid_argument(
            "split_projections: element outside the rational span of the summand bases");
    ProjectionSplit out;
    for (std::size_t j = 0; j < pair.basisA.size(); ++j)
        out.a_part += sol.coords[j] * pair.basisA[j];
    for (std::size_t j = 0; j < pair.basisB.size(); ++j)
        out.b_part += sol.coords[pair.basisA.size() + j] * pair.basisB[j];
    return out;
}

// g splits across the claimed summands: both halves of its unique rational
// decomposition are members of the stage group.
inline bool projection_property(const StagedPresentation& p, std::uint32_t s,
                                const SummandPair& pair, const Element& g) {
    ProjectionSplit split = split_projections(pair, g);
    return p.member(s, split.a_part) && p.member(s, split.b_part);
}

struct BasisVerdict {
    bool independent = false;
    bool spans = false;
    std::optional<Element> first_unspanned;

    bool pass() const { return independent && spans; }
};

// candidate is a basis of the stage-s group's ambient span: linearly
// independent, and every stage generator lies in its rational span.
inline BasisVerdict is_basis(const StagedPresentation& p, std::uint32_t s,
                             const std::vector<Element>& candidate) {
    if (candidate.empty()) throw std::invalid_argument("is_basis: empty candidate");
    BasisVerdict v;
    v.independent = rational_rank(candidate) == candidate.size();
    v.spans = true;
    if (!v.independent) return v;
    for (const auto& g : p.gen_at(s)) {
        auto sol = detail::solve_rational(candidate, g);
        if (!sol.consistent) {
            v.spans = false;
            v.first_unspanned = g;
            break;
        }
    }
    return v;
}

struct DecompositionCertificate {
    SummandPair pair;
    std::uint32_t stage = 0;
    bool basis_independent = false;
    bool basis_spans = false;
    std::size_t checked_generators = 0;
    // Generators outside the combined rational span, skipped rather than
    // failed: nonzero only when a truncation artifact cuts the claimed
    // summands short of full rank. Recorded so the verdict's scope is
    // explicit.
    std::size_t skipped_generators = 0;
    bool pass = false;
    std::optional<Element> first_failure;
};

// Certifies that every stage-s generator splits across the claimed pair.
// A failed precondition (dependent or non-spanning combined basis) is
// reported in the certificate rather than thrown.
inline DecompositionCertificate verify_direct_sum(const StagedPresentation& p, std::uint32_t s,
                                                  const SummandPair& pair) {
    DecompositionCertificate cert;
    cert.pair = pair;
    cert.stage = s;
    if (pair.basisA.empty() || pair.basisB.empty())
        throw std::invalid_argument("verify_direct_sum: summand bases must be nonempty");

    std::vector<Element> combined = pair.basisA;
    combined.insert(combined.end(), pair.basisB.begin(), pair.basisB.end());
    cert.basis_independent = rational_rank(combined) == combined.size();
    if (!cert.basis_independent) return cert;

    cert.pass = true;
    for (const auto& g : p.gen_at(s)) {
        auto sol = detail::solve_rational(combined, g);
        if (!sol.consistent) {
            ++cert.skipped_generators;
            continue;
        }
        ++cert.checked_generators;
        Element a_part, b_part;
        for (std::size_t j = 0; j < pair.basisA.size(); ++j)
            a_part += sol.coords[j] * pair.basisA[j];
        for (std::size_t j = 0; j < pair.basisB.size(); ++j)
            b_part += sol.coords[pair.basisA.size() + j] * pair.basisB[j];
        if (!p.member(s, a_part) || !p.member(s, b_part)) {
            cert.pass = false;
            cert.first_failure = g;
            break;
        }
    }
    cert.basis_spans = cert.pass && cert.skipped_generators == 0;
    return cert;
}

struct LinkEdge {
    BasisIndex u;
    BasisIndex v;
    std::uint64_t prime = 0;
};

// Nodes joined by an edge per prime p with p | u+v but p ∤ u and p ∤ v,
// all at the stage of record.
struct LinkGraph {
    std::vector<BasisIndex> nodes;
    std::vector<LinkEdge> edges;
};

inline LinkGraph find_links(const StagedPresentation& p, std::uint32_t s,
                            const std::vector<BasisIndex>& nodes,
                            const std::vector<std::uint64_t>& primes) {
    std::set<BasisIndex> distinct(nodes.begin(), nodes.end());
    if (distinct.size() != nodes.size())
        throw std::invalid_argument("find_links: duplicate node");
    LinkGraph g;
    g.nodes = nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Element u = Element::unit(nodes[i]);
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            Element v = Element::unit(nodes[j]);
            Element sum = u + v;
            for (auto q : primes)
                if (divides(p, s, q, 1, sum) && !divides(p, s, q, 1, u) &&
                    !divides(p, s, q, 1, v))
                    g.edges.push_back({nodes[i], nodes[j], q});
        }
    }
    return g;
}

struct IndecompCertificate {
    std::uint32_t stage = 0;
    std::uint64_t witness_bound = 0;
    LinkGraph graph;
    std::vector<LinkEdge> spanning_tree;  // breadth-first, covers every node
    std::vector<MaximalityRecord> maximality;
};

// Certificate that the stage-s group admits no nontrivial decomposition,
// assembled from bounded evidence: every basis element of strictly maximal
// type (bounded-witness check) and the link graph on the basis connected.
// Strictly maximal elements land wholly inside one summand, links force
// linked elements into the same one, so a connected graph over the whole
// basis leaves the other summand trivial. Absent when either half fails.
inline std::optional<IndecompCertificate> indecomposable_by_links(const StagedPresentation& p,
                                                                  std::uint32_t s,
                                                                  std::uint64_t witness_bound) {
    IndecompCertificate cert;
    cert.stage = s;
    cert.witness_bound = witness_bound;
    for (const auto& b : p.basis()) {
        MaximalityRecord rec = strictly_maximal(p, b, witness_bound, s);
        if (!rec.maximal) return std::nullopt;
        cert.maximality.push_back(std::move(rec));
    }
    cert.graph = find_links(p, s, p.basis(), link_prime_window(p.info()));

    const std::size_t n = p.basis().size();
    std::map<BasisIndex, std::size_t> id;
    for (std::size_t i = 0; i < n; ++i) id.emplace(p.basis()[i], i);
    std::vector<std::vector<std::pair<std::size_t, const LinkEdge*>>> adj(n);
    for (const auto& e : cert.graph.edges) {
        adj[id.at(e.u)].push_back({id.at(e.v), &e});
        adj[id.at(e.v)].push_back({id.at(e.u), &e});
    }
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (const auto& [v, e] : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                cert.spanning_tree.push_back(*e);
                queue.push_back(v);
            }
    }
    if (reached != n) return std::nullopt;
    return cert;
}

// Bounded decomposition search outcome. An absent pair is a refutation
// relative to (stage, coeff_bound), never a proof of indecomposability.
struct SearchOutcome {
    std::uint32_t stage = 0;
    std::uint64_t coeff_bound = 0;
    std::uint64_t pairs_tried = 0;
    std::optional<SummandPair> pair;
    std::optional<DecompositionCertificate> certificate;  // for the found pair
};

namespace detail {

// Coordinate order 0 < 1 < -1 < 2 < -2 < ...
inline std::uint64_t coord_key(long v) {
    return v > 0 ? 2 * static_cast<std::uint64_t>(v) - 1
                 : 2 * static_cast<std::uint64_t>(-v);
}

inline bool vector_key_less(const std::vector<long>& a, const std::vector<long>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return coord_key(a[i]) < coord_key(b[i]);
    return false;
}

// All primitive integer vectors with |coord| <= bound and positive leading
// nonzero coordinate, sorted coordinate-wise by coord_key.
inline std::vector<std::vector<long>> candidate_vectors(std::size_t rank, std::uint64_t bound) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur(rank, -static_cast<long>(bound));
    const long hi = static_cast<long>(bound);
    for (;;) {
        long lead = 0;
        long g = 0;
        for (long c : cur) {
            if (lead == 0) lead = c;
            g = static_cast<long>(std::gcd(g, c));
        }
        if (lead > 0 && g == 1) out.push_back(cur);
        std::size_t k = rank;
        while (k > 0) {
            --k;
            if (++cur[k] <= hi) break;
            cur[k] = -hi;
            if (k == 0) return [&] {
                std::sort(out.begin(), out.end(), vector_key_less);
                return std::move(out);
            }();
        }
    }
}

inline Element element_from_coords(const std::vector<BasisIndex>& basis,
                                   const std::vector<long>& coords) {
    Element e;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (coords[i] != 0) e.set_coeff(basis[i], Rational(coords[i]));
    return e;
}

// Increasing index tuples in lexicographic order; returns false when done.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    std::size_t k = idx.size();
    while (k > 0) {
        --k;
        if (++idx[k] <= n - (idx.size() - 1 - k)) {
            for (std::size_t j = k + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Exhaustive bounded search over summand pairs whose basis vectors have
// integer coordinates over p.basis() with |coord| <= coeff_bound. Vectors
// are primitive with positive leading coordinate (scaling never changes the
// generated pure subgroup); enumeration order is (rank split, A-tuple,
// B-tuple) with tuples lexicographic over the sorted vector list, so the
// first passing pair is deterministic. Rank above 4 is rejected.
inline SearchOutcome search_decomposition(const StagedPresentation& p, std::uint32_t s,
                                          std::uint64_t coeff_bound) {
    if (p.rank() > 4)
        throw std::invalid_argument("search_decomposition: rank above 4 unsupported");
    if (coeff_bound == 0)
        throw std::invalid_argument("search_decomposition: zero coefficient bound");
    SearchOutcome out;
    out.stage = s;
    out.coeff_bound = coeff_bound;

    const std::size_t rank = p.rank();
    auto vectors = detail::candidate_vectors(rank, coeff_bound);
    std::vector<Element> elems;
    elems.reserve(vectors.size());
    for (const auto& v : vectors) elems.push_back(detail::element_from_coords(p.basis(), v));

    for (std::size_t rank_a = 1; rank_a + 1 <= rank; ++rank_a) {
        const std::size_t rank_b = rank - rank_a;
        std::vector<std::size_t> ia(rank_a);
        for (std::size_t i = 0; i < rank_a; ++i) ia[i] = i;
        do {
            SummandPair pair;
            for (auto i : ia) pair.basisA.push_back(elems[i]);
            if (rational_rank(pair.basisA) != rank_a) continue;
            std::vector<std::size_t> ib(rank_b);
            for (std::size_t i = 0; i < rank_b; ++i) ib[i] = i;
            do {
                pair.basisB.clear();
                for (auto i : ib) pair.basisB.push_back(elems[i]);
                std::vector<Element> combined = pair.basisA;
                combined.insert(combined.end(), pair.basisB.begin(), pair.basisB.end());
                if (rational_rank(combined) != rank) continue;
                ++out.pairs_tried;
                DecompositionCertificate cert = verify_direct_sum(p, s, pair);
                if (cert.pass && cert.skipped_generators == 0) {
                    out.pair = pair;
                    out.certificate = std::move(cert);
                    return out;
                }
            } while (detail::next_combination(ib, elems.size() - 1));
        } while (detail::next_combination(ia, elems.size() - 1));
    }
    return out;
}

// Divisibility passes to the parts of an exact split: m | x implies m | a
// and m | b, for x = a + b, inside the stage group.
inline bool divisibility_split_check(const StagedPresentation& p, std::uint32_t s,
                                     const Element& x, const Element& a, const Element& b,
                                     const Int& m) {
    if (a + b != x) throw std::invalid_argument("divisibility_split_check: x must equal a + b");
    if (m <= 0) throw std::invalid_argument("divisibility_split_check: modulus must be positive");
    if (!p.member(s, x.divided_by(m))) return true;
    return p.member(s, a.divided_by(m)) && p.member(s, b.divided_by(m));
}

}  // namespace tfa
