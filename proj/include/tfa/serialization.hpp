#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tfa/constructions.hpp"
#include "tfa/decomposition.hpp"
#include "tfa/typesystem.hpp"

namespace tfa {

using Json = nlohmann::json;

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col_of(const std::string& text,
                                                       std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        auto [line, col] = line_col_of(text, e.byte);
        throw std::invalid_argument(what + ": line " + std::to_string(line) + ", column " +
                                    std::to_string(col) + ": " + e.what());
    }
}

inline std::uint64_t natural_from_json(const Json& v, const std::string& what) {
    if (!v.is_number_integer() || v.is_number_float() || v.get<long long>() < 0)
        throw std::invalid_argument(what + ": expected a nonnegative integer, got " + v.dump());
    return v.get<std::uint64_t>();
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// {"finite":[...]} | {"cofinite_complement":[...]} | {"trace":[[step,value],...]}
inline CeSetSpec ce_set_from_json(const Json& j, const std::string& what) {
    if (!j.is_object() || j.size() != 1)
        throw std::invalid_argument(
            what + ": expected exactly one of \"finite\", \"cofinite_complement\", \"trace\"");
    if (j.contains("finite")) {
        std::vector<std::uint64_t> m;
        for (const auto& v : j.at("finite")) m.push_back(detail::natural_from_json(v, what));
        return CeSetSpec::finite(std::move(m));
    }
    if (j.contains("cofinite_complement")) {
        std::vector<std::uint64_t> c;
        for (const auto& v : j.at("cofinite_complement"))
            c.push_back(detail::natural_from_json(v, what));
        return CeSetSpec::cofinite_complement(std::move(c));
    }
    if (j.contains("trace")) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> t;
        for (const auto& ev : j.at("trace")) {
            if (!ev.is_array() || ev.size() != 2)
                throw std::invalid_argument(what + ": trace events are [step, value] pairs");
            t.emplace_back(detail::natural_from_json(ev[0], what),
                           detail::natural_from_json(ev[1], what));
        }
        return CeSetSpec::step_trace(std::move(t));
    }
    throw std::invalid_argument(
        what + ": expected one of \"finite\", \"cofinite_complement\", \"trace\"");
}

inline CeSetSpec parse_ce_set(const std::string& text, const std::string& what = "W descriptor") {
    return ce_set_from_json(detail::parse_json_text(text, what), what);
}

// Array of integer arrays, parents before children, e.g. [[],[0],[0,0],[1]].
inline TreeSpec tree_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw std::invalid_argument(what + ": expected an array of nodes");
    TreeSpec tree;
    std::size_t idx = 0;
    for (const auto& node : j) {
        if (!node.is_array())
            throw std::invalid_argument(what + ": node #" + std::to_string(idx) +
                                        ": expected an integer array");
        Sigma s;
        for (const auto& v : node) {
            auto e = detail::natural_from_json(v, what + ": node #" + std::to_string(idx));
            if (e > 0xffffffffull)
                throw std::invalid_argument(what + ": node #" + std::to_string(idx) +
                                            ": entry too large");
            s.push_back(static_cast<std::uint32_t>(e));
        }
        tree.nodes.push_back(std::move(s));
        ++idx;
    }
    try {
        tree.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(what + ": " + e.what());
    }
    return tree;
}

inline TreeSpec parse_tree(const std::string& text, const std::string& what = "tree descriptor") {
    return tree_from_json(detail::parse_json_text(text, what), what);
}

inline TreeSpec parse_tree_file(const std::string& path) {
    return parse_tree(read_text_file(path), path);
}

// A single integer array, e.g. [0,0,0,0].
inline PathSpec parse_path(const std::string& text, const std::string& what = "path descriptor") {
    Json j = detail::parse_json_text(text, what);
    if (!j.is_array()) throw std::invalid_argument(what + ": expected an integer array");
    PathSpec p;
    for (const auto& v : j) {
        auto e = detail::natural_from_json(v, what);
        if (e > 0xffffffffull) throw std::invalid_argument(what + ": entry too large");
        p.pi.push_back(static_cast<std::uint32_t>(e));
    }
    return p;
}

inline std::string sigma_str(const Sigma& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

inline Json ce_set_json(const CeSetSpec& w) {
    Json j;
    switch (w.kind) {
        case CeSetSpec::Kind::Finite:
            j["finite"] = w.members;
            break;
        case CeSetSpec::Kind::CofiniteComplement:
            j["cofinite_complement"] = w.complement;
            break;
        case CeSetSpec::Kind::StepTrace: {
            Json t = Json::array();
            for (const auto& [step, value] : w.trace) t.push_back({step, value});
            j["trace"] = std::move(t);
            break;
        }
    }
    return j;
}

inline Json truncation_json(const TruncationParams& t) {
    return Json{{"branch", t.branch}, {"depth", t.depth}, {"n_max", t.n_max},
                {"stages", t.stages}};
}

inline Json summand_pair_json(const SummandPair& pair) {
    Json a = Json::array(), b = Json::array();
    for (const auto& e : pair.basisA) a.push_back(e.str());
    for (const auto& e : pair.basisB) b.push_back(e.str());
    return Json{{"basisA", std::move(a)}, {"basisB", std::move(b)}};
}

inline Json maximality_json(const MaximalityRecord& r) {
    Json j{{"node", r.node.str()},
           {"maximal", r.maximal},
           {"witness_bound", r.witness_bound},
           {"stage", r.stage},
           {"cap", r.cap},
           {"candidates_checked", r.candidates_checked},
           {"caveat", MaximalityRecord::kCaveat}};
    if (r.dominating_witness) j["dominating_witness"] = r.dominating_witness->str();
    return j;
}

inline Json link_graph_json(const LinkGraph& g) {
    Json nodes = Json::array(), edges = Json::array();
    for (const auto& n : g.nodes) nodes.push_back(n.str());
    for (const auto& e : g.edges)
        edges.push_back(Json{{"u", e.u.str()}, {"v", e.v.str()}, {"prime", e.prime}});
    return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline Json decomposition_certificate_json(const DecompositionCertificate& c) {
    Json j{{"pair", summand_pair_json(c.pair)},
           {"stage", c.stage},
           {"basis_independent", c.basis_independent},
           {"basis_spans", c.basis_spans},
           {"checked_generators", c.checked_generators},
           {"skipped_generators", c.skipped_generators},
           {"pass", c.pass}};
    if (c.first_failure) j["first_failure"] = c.first_failure->str();
    return j;
}

inline Json indecomp_certificate_json(const IndecompCertificate& c) {
    Json tree_edges = Json::array();
    for (const auto& e : c.spanning_tree)
        tree_edges.push_back(Json{{"u", e.u.str()}, {"v", e.v.str()}, {"prime", e.prime}});
    Json max = Json::array();
    for (const auto& r : c.maximality) max.push_back(maximality_json(r));
    return Json{{"stage", c.stage},
                {"witness_bound", c.witness_bound},
                {"graph", link_graph_json(c.graph)},
                {"spanning_tree", std::move(tree_edges)},
                {"maximality", std::move(max)}};
}

inline Json search_outcome_json(const SearchOutcome& o) {
    Json j{{"stage", o.stage},
           {"coeff_bound", o.coeff_bound},
           {"pairs_tried", o.pairs_tried},
           {"found", o.pair.has_value()}};
    if (o.pair) j["pair"] = summand_pair_json(*o.pair);
    if (o.certificate) j["certificate"] = decomposition_certificate_json(*o.certificate);
    if (!o.pair)
        j["refutation"] = "no decomposition with coordinates <= " +
                          std::to_string(o.coeff_bound) + " at stage " +
                          std::to_string(o.stage);
    return j;
}

inline Json lemma53_json(const Lemma53Witness& w) {
    return Json{{"a", w.a.str()}, {"m", w.m.get_str()}, {"pair", summand_pair_json(w.pair)}};
}

inline Json path_summands_json(const PathSummands& p) {
    return Json{{"pair", summand_pair_json(p.pair)},
                {"path_length", p.path_length},
                {"excluded_y_count", p.excluded_y_count}};
}

inline Json congruence_json(const CongruenceCheck& c) {
    return Json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"agree", c.agree()}};
}

// nlohmann objects iterate in key order, so dump() of the same value is
// byte-stable across runs.
inline std::string dump_deterministic(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tfa
