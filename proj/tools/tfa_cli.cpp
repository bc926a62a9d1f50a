#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "tfa/constructions.hpp"
#include "tfa/decomposition.hpp"
#include "tfa/serialization.hpp"

namespace {

using namespace tfa;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct RunConfig {
    std::string command;
    std::string construction;
    std::uint32_t stages = 6;
    std::uint32_t stage = 0;  // 0: use stages
    std::uint32_t n_max = 0;  // 0: derive
    std::uint32_t depth = 0;
    bool depth_given = false;
    std::uint32_t branch = 0;  // 0: derive
    std::uint64_t bound = 4;
    std::uint64_t witness_bound = 3;
    std::uint64_t cap = 0;  // 0: use stage
    std::string w_text = "{\"finite\":[]}";
    std::string file;
    std::string path_text;
    std::string out;
    std::string format = "text";
    bool indecomposable = false;
    bool lemma53 = false;
};

struct BuiltGroup {
    StagedPresentation presentation;
    std::optional<CeSetSpec> w;
    std::optional<TreeSpec> tree;
    std::optional<TruncationParams> trunc;
};

TruncationParams derive_truncation(const RunConfig& rc, const std::optional<TreeSpec>& tree) {
    TruncationParams t;
    t.depth = rc.depth_given ? rc.depth
                             : (tree ? static_cast<std::uint32_t>(tree->depth()) : 2);
    t.n_max = rc.n_max ? rc.n_max : std::max<std::uint32_t>(4, t.depth);
    t.branch = rc.branch ? rc.branch : (tree ? std::max<std::uint32_t>(tree->max_entry() + 1, 1) : 2);
    t.stages = rc.stages;
    t.validate();
    return t;
}

BuiltGroup build_group(const RunConfig& rc) {
    if (rc.construction == "fuchs")
        return {fuchs_group(rc.stages), std::nullopt, std::nullopt, std::nullopt};
    if (rc.construction == "free2")
        return {free_rank2_group(rc.stages), std::nullopt, std::nullopt, std::nullopt};
    if (rc.construction == "cof") {
        CeSetSpec w = parse_ce_set(rc.w_text);
        return {cof_group(w, rc.stages), w, std::nullopt, std::nullopt};
    }
    if (rc.construction == "base") {
        TruncationParams t = derive_truncation(rc, std::nullopt);
        return {infinite_base_group(t), std::nullopt, std::nullopt, t};
    }
    if (rc.construction == "tree") {
        if (rc.file.empty())
            throw std::invalid_argument("tree construction needs --file <tree descriptor>");
        TreeSpec tree = parse_tree_file(rc.file);
        TruncationParams t = derive_truncation(rc, tree);
        return {tree_group(tree, t), std::nullopt, tree, t};
    }
    throw std::invalid_argument("unknown construction: " + rc.construction +
                                " (expected fuchs | free2 | cof | base | tree)");
}

Json prime_table(const BuiltGroup& g) {
    Json rows = Json::array();
    auto row = [&](const std::string& role, const std::string& detail, std::uint64_t prime) {
        rows.push_back(Json{{"role", role}, {"detail", detail}, {"prime", prime}});
    };
    const auto& info = g.presentation.info();
    if (std::holds_alternative<FuchsInfo>(info)) {
        row("half_link", "x1+x2", 2);
        row("tower", "x1", 3);
        row("tower", "x2", 5);
    } else if (const auto* cof = std::get_if<CofInfo>(&info)) {
        row("half_link", "g1+g2", 2);
        for (std::uint64_t j = 0; j <= cof->stages; ++j) {
            row("division", "g1", nth_prime(2 * j + 1));
            row("division", "g2", nth_prime(2 * j + 2));
        }
        for (std::uint64_t k = 0; k <= cof->stages; ++k)
            if (cof->w.contains_at_stage(k, cof->stages))
                row("w_enumeration", "g2 (k=" + std::to_string(k) + ")", nth_prime(2 * k + 1));
    } else if (g.trunc) {
        const TruncationParams& t = *g.trunc;
        auto universe = detail::sigma_universe(t);
        for (std::uint32_t i = 1; i <= t.n_max; ++i) {
            row("tower", "x" + std::to_string(i), prime_for(0, i));
            row("tower", "y" + std::to_string(i), prime_for(1, i));
        }
        for (const auto& s : universe)
            row("tower", BasisIndex::xsigma(s).str(), prime_for(2, code_string(s)));
        for (std::uint32_t i = 1; i <= t.n_max; ++i)
            for (std::uint32_t j = i + 1; j <= t.n_max; ++j) {
                row("link", "x" + std::to_string(i) + "+x" + std::to_string(j),
                    prime_for(3, cantor(i, j)));
                row("link", "y" + std::to_string(i) + "+y" + std::to_string(j),
                    prime_for(4, cantor(i, j)));
            }
        for (std::uint32_t i = 1; i <= t.n_max; ++i)
            for (const auto& s : universe)
                row("link", "x" + std::to_string(i) + "+" + BasisIndex::xsigma(s).str(),
                    prime_for(5, cantor(i, code_string(s))));
        for (std::size_t a = 0; a < universe.size(); ++a)
            for (std::size_t b = a + 1; b < universe.size(); ++b)
                row("link", BasisIndex::xsigma(universe[a]).str() + "+" + BasisIndex::xsigma(universe[b]).str(),
                    prime_for(6, cantor(code_string(universe[a]), code_string(universe[b]))));
        for (std::uint32_t n = 2; n <= t.n_max; ++n)
            row("partial_sum", "y1+..+y" + std::to_string(n), prime_for(7, n));
        for (std::uint32_t i = 1; i <= t.n_max; ++i)
            row("link", "x" + std::to_string(i) + "+y" + std::to_string(i), prime_for(8, i));
    }
    return rows;
}

Json node_emissions(const TreeSpec& tree, const TruncationParams& t) {
    Json nodes = Json::array();
    auto unit = [](const BasisIndex& b) { return Element::unit(b); };
    for (const auto& sigma : tree.nodes) {
        const auto n = static_cast<std::uint32_t>(sigma.size());
        Json steps;
        Json s1 = Json::array(), s2 = Json::array(), s3 = Json::array(), s4 = Json::array();
        auto y_plus_prefix = [&](std::uint32_t i) {
            return unit(BasisIndex::y(i)) + unit(BasisIndex::xsigma(prefix_of(sigma, i)));
        };
        for (std::uint32_t i = 1; i <= n; ++i) {
            Int q = pow_int(Int(static_cast<unsigned long>(prime_for(1, i))), n);
            s1.push_back(y_plus_prefix(i).divided_by(q).str());
            s1.push_back(unit(BasisIndex::xsigma(prefix_of(sigma, i))).divided_by(q).str());
        }
        for (std::uint32_t i = 1; i < n; ++i) {
            Int q(static_cast<unsigned long>(prime_for(4, cantor(i, n))));
            s2.push_back((y_plus_prefix(i) + y_plus_prefix(n)).divided_by(q).str());
            s2.push_back((unit(BasisIndex::xsigma(prefix_of(sigma, i))) +
                          unit(BasisIndex::xsigma(sigma)))
                             .divided_by(q)
                             .str());
        }
        if (n >= 1) {
            Int q8(static_cast<unsigned long>(prime_for(8, n)));
            s3.push_back(y_plus_prefix(n).divided_by(q8).str());
            s3.push_back(
                (unit(BasisIndex::x(n)) - unit(BasisIndex::xsigma(sigma))).divided_by(q8).str());
            Int q7(static_cast<unsigned long>(prime_for(7, n)));
            Element with_y, xs_only;
            for (std::uint32_t i = 1; i <= n; ++i) {
                with_y += y_plus_prefix(i);
                xs_only += unit(BasisIndex::xsigma(prefix_of(sigma, i)));
            }
            s4.push_back(with_y.divided_by(q7).str());
            s4.push_back(xs_only.divided_by(q7).str());
        }
        steps["step1"] = std::move(s1);
        steps["step2"] = std::move(s2);
        steps["step3"] = std::move(s3);
        steps["step4"] = std::move(s4);
        nodes.push_back(Json{{"node", sigma_str(sigma)}, {"emissions", std::move(steps)}});
    }
    (void)t;
    return nodes;
}

Json build_json(const BuiltGroup& g) {
    const StagedPresentation& p = g.presentation;
    Json basis = Json::array();
    for (const auto& b : p.basis()) basis.push_back(b.str());
    Json counts = Json::array();
    for (std::uint32_t s = 0; s <= p.max_stage(); ++s)
        counts.push_back(Json{{"stage", s}, {"count", p.gen_count_at(s)}});
    Json j{{"label", p.label()},
           {"basis", std::move(basis)},
           {"rank", p.rank()},
           {"max_stage", p.max_stage()},
           {"generator_counts", std::move(counts)},
           {"prime_assignments", prime_table(g)}};
    if (g.w) j["w"] = ce_set_json(*g.w);
    if (g.trunc) j["truncation"] = truncation_json(*g.trunc);
    if (g.tree) {
        Json nodes = Json::array();
        for (const auto& n : g.tree->nodes) nodes.push_back(sigma_str(n));
        j["tree"] = std::move(nodes);
        j["node_emissions"] = node_emissions(*g.tree, *g.trunc);
    }
    return j;
}

void print_build_text(std::ostream& os, const BuiltGroup& g) {
    const StagedPresentation& p = g.presentation;
    os << "construction: " << p.label() << "\n";
    if (g.trunc)
        os << "truncation: n_max=" << g.trunc->n_max << " depth=" << g.trunc->depth
           << " branch=" << g.trunc->branch << " stages=" << g.trunc->stages << "\n";
    else
        os << "stages: " << p.max_stage() << "\n";
    os << "rank: " << p.rank() << "\nbasis:";
    for (const auto& b : p.basis()) os << " " << b.str();
    os << "\ngenerators by stage:";
    for (std::uint32_t s = 0; s <= p.max_stage(); ++s) os << " " << s << ":" << p.gen_count_at(s);
    os << "\nprime assignments:\n";
    for (const auto& row : prime_table(g))
        os << "  " << row.at("role").get<std::string>() << "  "
           << row.at("detail").get<std::string>() << "  p=" << row.at("prime") << "\n";
    if (g.tree) {
        os << "node emissions:\n";
        for (const auto& node : node_emissions(*g.tree, *g.trunc)) {
            os << "  node " << node.at("node").get<std::string>() << "\n";
            for (const auto& [step, elems] : node.at("emissions").items()) {
                os << "    " << step << ":";
                if (elems.empty()) os << " (none)";
                for (const auto& e : elems) os << " [" << e.get<std::string>() << "]";
                os << "\n";
            }
        }
    }
}

struct RunResult {
    Json record;
    bool pass = true;
    std::vector<std::string> text_lines;
};

void add_certificate(RunResult& r, const std::string& kind, bool pass, Json detail,
                     const std::string& text) {
    detail["kind"] = kind;
    detail["pass"] = pass;
    r.record["certificates"].push_back(std::move(detail));
    r.pass = r.pass && pass;
    r.text_lines.push_back(std::string(pass ? "pass" : "fail") + "  " + kind +
                           (text.empty() ? "" : ": " + text));
}

void run_indecomposable(RunResult& r, const StagedPresentation& p, std::uint32_t stage,
                        std::uint64_t witness_bound) {
    auto cert = indecomposable_by_links(p, stage, witness_bound);
    Json detail;
    if (cert) detail["certificate"] = indecomp_certificate_json(*cert);
    std::string text = cert ? std::to_string(cert->graph.edges.size()) + " links, " +
                                  std::to_string(cert->maximality.size()) +
                                  " strictly maximal nodes (bounded)"
                            : "no certificate at this stage/bound";
    add_certificate(r, "indecomposable_by_links", cert.has_value(), std::move(detail), text);
}

void run_lemma53(RunResult& r, const BuiltGroup& g, const RunConfig& rc, std::uint32_t stage) {
    if (!g.w) throw std::invalid_argument("--lemma53 needs a cof construction with --w");
    Lemma53Witness lem = lemma53_summands(*g.w, rc.stages);
    auto dc = verify_direct_sum(g.presentation, stage, lem.pair);
    Json detail{{"witness", lemma53_json(lem)},
                {"certificate", decomposition_certificate_json(dc)}};
    add_certificate(r, "lemma53_direct_sum", dc.pass && dc.basis_spans, std::move(detail),
                    "m=" + lem.m.get_str() + ", a=" + lem.a.str() + ", " +
                        std::to_string(dc.checked_generators) + " generators checked");
}

void run_path_verify(RunResult& r, const BuiltGroup& g, const RunConfig& rc,
                     std::uint32_t stage) {
    if (!g.tree) throw std::invalid_argument("--path needs a tree construction with --file");
    PathSpec path = parse_path(rc.path_text);
    PathSummands ps = path_summands(*g.tree, path, *g.trunc);
    auto dc = verify_direct_sum(g.presentation, stage, ps.pair);
    bool pass = dc.pass && dc.basis_independent;
    Json detail{{"witness", path_summands_json(ps)},
                {"certificate", decomposition_certificate_json(dc)}};
    add_certificate(r, "path_direct_sum", pass, std::move(detail),
                    "path length " + std::to_string(ps.path_length) + ", " +
                        std::to_string(dc.checked_generators) + " generators checked" +
                        (dc.skipped_generators
                             ? ", " + std::to_string(dc.skipped_generators) +
                                   " skipped (outside the truncated span)"
                             : ""));
}

void run_search(RunResult& r, const StagedPresentation& p, std::uint32_t stage,
                std::uint64_t bound, bool expect_refute) {
    SearchOutcome o = search_decomposition(p, stage, bound);
    bool pass = expect_refute ? !o.pair.has_value() : o.pair.has_value();
    std::string text = o.pair ? "pair found after " + std::to_string(o.pairs_tried) + " candidates"
                              : "refuted: no pair with coordinates <= " + std::to_string(bound) +
                                    " at stage " + std::to_string(stage) + " (" +
                                    std::to_string(o.pairs_tried) + " candidates)";
    add_certificate(r, "search_decomposition", pass, Json{{"outcome", search_outcome_json(o)}},
                    text);
}

int run(const RunConfig& rc) {
    auto started = std::chrono::steady_clock::now();
    BuiltGroup g = build_group(rc);
    std::uint32_t stage = rc.stage ? rc.stage : g.presentation.max_stage();
    g.presentation.check_stage(stage);

    RunResult r;
    r.record = Json{{"command", rc.command},
                    {"construction", rc.construction},
                    {"stage", stage},
                    {"certificates", Json::array()},
                    {"build", build_json(g)}};

    if (rc.command == "build") {
        // nothing beyond the build record
    } else if (rc.command == "verify") {
        bool any = false;
        if (rc.indecomposable) {
            run_indecomposable(r, g.presentation, stage, rc.witness_bound);
            any = true;
        }
        if (rc.lemma53) {
            run_lemma53(r, g, rc, stage);
            any = true;
        }
        if (!rc.path_text.empty()) {
            run_path_verify(r, g, rc, stage);
            any = true;
        }
        if (!any)
            throw std::invalid_argument(
                "verify needs a witness: --indecomposable, --lemma53, or --path");
    } else if (rc.command == "search") {
        SearchOutcome o = search_decomposition(g.presentation, stage, rc.bound);
        r.record["certificates"].push_back(
            Json{{"kind", "search_decomposition"}, {"outcome", search_outcome_json(o)}});
        r.pass = o.pair.has_value();
        r.text_lines.push_back(o.pair ? "pair found: A=" + o.pair->basisA[0].str() + " ..."
                                      : "refuted: no pair with coordinates <= " +
                                            std::to_string(rc.bound) + " at stage " +
                                            std::to_string(stage));
    } else if (rc.command == "report") {
        if (rc.construction == "fuchs") {
            run_indecomposable(r, g.presentation, stage, rc.witness_bound);
            run_search(r, g.presentation, stage, rc.bound, /*expect_refute=*/true);
        } else if (rc.construction == "free2") {
            run_search(r, g.presentation, stage, rc.bound, /*expect_refute=*/false);
        } else if (rc.construction == "cof") {
            if (g.w && g.w->kind == CeSetSpec::Kind::CofiniteComplement)
                run_lemma53(r, g, rc, stage);
            else
                run_search(r, g.presentation, stage, rc.bound, /*expect_refute=*/true);
        } else if (rc.construction == "base") {
            run_indecomposable(r, g.presentation, stage, rc.witness_bound);
        } else if (rc.construction == "tree") {
            if (!rc.path_text.empty())
                run_path_verify(r, g, rc, stage);
            else
                run_indecomposable(r, g.presentation, stage, rc.witness_bound);
        }
    } else {
        throw std::invalid_argument("unknown command: " + rc.command);
    }

    r.record["verdict"] = r.pass ? "pass" : "fail";
    auto finished = std::chrono::steady_clock::now();

    if (!rc.out.empty()) {
        std::ofstream out(rc.out, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write output file: " + rc.out);
        out << dump_deterministic(r.record);
    }
    if (rc.format == "structured") {
        std::cout << dump_deterministic(r.record);
    } else {
        print_build_text(std::cout, g);
        for (const auto& line : r.text_lines) std::cout << line << "\n";
        std::cout << "verdict: " << (r.pass ? "pass" : "fail") << "\n";
        std::cout << "elapsed: "
                  << std::chrono::duration<double>(finished - started).count() << "s\n";
    }
    return r.pass ? kExitPass : kExitFail;
}

void add_common_options(CLI::App* sub, RunConfig& rc) {
    sub->add_option("construction", rc.construction,
                    "construction name: fuchs | free2 | cof | base | tree")
        ->required();
    sub->add_option("--stages", rc.stages, "stage budget of the built presentation");
    sub->add_option("--stage", rc.stage, "stage to query (default: the stage budget)");
    sub->add_option("--n-max", rc.n_max, "largest x_i/y_i index (base/tree)");
    auto* d = sub->add_option("--depth", rc.depth, "largest string length (base/tree)");
    sub->parse_complete_callback([&rc, d]() { rc.depth_given = d->count() > 0; });
    sub->add_option("--branch", rc.branch, "entries of strings range over 0..branch-1");
    sub->add_option("--bound", rc.bound, "coefficient bound for decomposition search");
    sub->add_option("--witness-bound", rc.witness_bound,
                    "coefficient bound for strict-maximality witnesses");
    sub->add_option("--cap", rc.cap, "height cap (default: the queried stage)");
    sub->add_option("--w", rc.w_text,
                    "W descriptor JSON: {\"finite\":[..]} | {\"cofinite_complement\":[..]} | "
                    "{\"trace\":[[step,value],..]}");
    sub->add_option("--file", rc.file, "tree descriptor file (JSON array of integer arrays)");
    sub->add_option("--path", rc.path_text, "branch of the tree as a JSON integer array");
    sub->add_option("--out", rc.out, "write the structured record to this file");
    sub->add_option("--format", rc.format, "output format: text | structured")
        ->check(CLI::IsMember({"text", "structured"}));
    sub->add_flag("--indecomposable", rc.indecomposable,
                  "verify indecomposability via links and bounded strict maximality");
    sub->add_flag("--lemma53", rc.lemma53,
                  "verify the cofinite-W decomposition witness (cof only)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Staged presentations of torsion-free abelian groups: builders, decision "
                 "procedures, and decomposition certificates"};
    app.require_subcommand(1);
    RunConfig rc;
    for (const char* name : {"build", "verify", "search", "report"}) {
        auto* sub = app.add_subcommand(name, std::string(name) + " a construction");
        add_common_options(sub, rc);
        sub->callback([&rc, name]() { rc.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitInput;
    }
    try {
        return run(rc);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
