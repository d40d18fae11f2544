#pragma once

// Command implementations for the bijclique tool. Kept out of main() so tests can
// drive every subcommand against in-memory streams.
//
// Exit codes: 0 success / found / verified
//             1 verification failed / no clique exists / oracle mismatch
//             2 usage or input error
//             3 node limit reached without a verdict

#include "bijclique/bijclique.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace bijclique::cli {

enum exit_code : int { ok = 0, negative = 1, usage = 2, limit = 3 };

using nlohmann::json;

inline json to_json(const UncheckedCertificate& c) {
    json rows = json::array();
    for (const auto& r : c.rows()) rows.push_back(std::vector<residue>(r.values().begin(), r.values().end()));
    return {{"k", c.modulus().value()}, {"m", c.size()}, {"rows", rows}};
}

inline json to_json(const VerificationReport& r) {
    json v = json::array();
    for (const auto& c : r.violations)
        v.push_back({{"s", c.s}, {"t", c.t}, {"a", c.a}, {"b", c.b}, {"value", c.value}});
    return {{"ok", r.ok}, {"violations", v}};
}

inline json to_json(const Derivation& d) {
    json j{{"kind", kind_name(d.kind)}, {"k", d.k}, {"bound", d.bound}};
    if (d.kind == DerivationKind::product) {
        j["n"] = d.n;
        j["m"] = d.m;
        j["left"] = to_json(*d.left);
        j["right"] = to_json(*d.right);
    }
    return j;
}

inline json to_json(const BoundReport& r) {
    return {{"k", r.k.value()}, {"lower_bound", r.lower_bound}, {"exact", r.exact}, {"provenance", to_json(*r.provenance)}};
}

inline json to_json(const SearchStatistics& s) {
    return {{"nodes", s.nodes},       {"max_depth", s.max_depth}, {"wall_seconds", s.wall_seconds},
            {"attempts", s.attempts}, {"subtrees", s.subtrees},   {"complete_traversal", s.complete_traversal}};
}

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

inline void print_report(std::ostream& os, const UncheckedCertificate& c, const VerificationReport& r) {
    if (r.ok) {
        os << "OK: " << c.size() << "-clique in G_" << c.modulus().value() << '\n';
        return;
    }
    os << "FAIL: not a clique in G_" << c.modulus().value() << " (" << r.violations.size()
       << " violating pair(s))\n";
    for (const auto& v : r.violations)
        os << "  rows " << v.s << " and " << v.t << ": difference takes value " << v.value << " at both " << v.a
           << " and " << v.b << '\n';
}

inline void write_certificate(Streams io, const std::string& path, const Certificate& c) {
    if (path.empty() || path == "-") {
        io.out << serialize(c);
        return;
    }
    save_certificate(path, c);
    io.err << "wrote " << c.size() << "-clique over Z_" << c.modulus().value() << " to " << path << '\n';
}

inline int cmd_verify(Streams io, const std::string& path, bool as_json) {
    const auto cert = load_certificate(path);
    const auto report = verify(cert);
    if (as_json) io.out << json{{"certificate", to_json(cert)}, {"report", to_json(report)}}.dump() << '\n';
    else print_report(io.out, cert, report);
    return report.ok ? ok : negative;
}

inline int cmd_gen(Streams io, const std::string& kind, std::uint64_t k, const std::string& out_path) {
    if (kind != "prime") {
        io.err << "unknown construction '" << kind << "' (available: prime)\n";
        return usage;
    }
    write_certificate(io, out_path, prime_construction(Modulus(k)));
    return ok;
}

inline std::optional<Certificate> checked_input(Streams io, const std::string& path) {
    const auto c = load_certificate(path);
    const auto r = verify(c);
    if (!r.ok) {
        io.err << path << ": ";
        print_report(io.err, c, r);
        return std::nullopt;
    }
    return Certificate::check(c);
}

inline int cmd_compose(Streams io, const std::string& a, const std::string& b, const std::string& out_path,
                       bool as_json) {
    auto ca = checked_input(io, a);
    auto cb = checked_input(io, b);
    if (!ca || !cb) return negative;
    const Certificate c = compose(*ca, *cb);
    if (as_json) {
        io.out << to_json(c.unchecked()).dump() << '\n';
        if (!out_path.empty() && out_path != "-") save_certificate(out_path, c);
        return ok;
    }
    write_certificate(io, out_path, c);
    return ok;
}

struct SearchArgs {
    std::uint64_t k = 0;
    std::size_t size = 0;
    bool exhaustive = false;
    bool first_found = false;
    std::optional<std::uint64_t> node_limit;
    std::uint64_t restarts = 1;
    std::uint64_t rand_seed = 0;
    std::string seed_path;
    unsigned workers = 1;
    std::string out_path;
    std::uint64_t progress = 0;
    bool json = false;
};

/// Seed rows from a certificate file; leading zero/identity rows are dropped.
inline std::vector<ModFunction> load_seed_rows(const std::string& path, Modulus k) {
    const auto c = load_certificate(path);
    if (c.modulus() != k) throw modulus_mismatch(k.value(), c.modulus().value());
    std::vector<ModFunction> rows(c.rows());
    if (!rows.empty() && rows.front() == ModFunction::zero(k)) rows.erase(rows.begin());
    if (!rows.empty() && rows.front() == ModFunction::identity(k)) rows.erase(rows.begin());
    return rows;
}

inline int cmd_search(Streams io, const SearchArgs& a) {
    if (a.exhaustive && a.first_found) {
        io.err << "--exhaustive and --first-found are mutually exclusive\n";
        return usage;
    }
    SearchConfig cfg;
    cfg.k = a.k;
    cfg.target_size = a.size;
    cfg.mode = a.first_found ? SearchMode::first_found : SearchMode::exhaustive;
    cfg.node_limit = a.node_limit;
    cfg.restarts = a.restarts;
    cfg.rng_seed = a.rand_seed;
    cfg.worker_count = a.workers;
    if (!a.seed_path.empty()) cfg.seed_rows = load_seed_rows(a.seed_path, Modulus(a.k));
    cfg.progress_interval = a.progress;
    if (a.progress)
        cfg.on_progress = [&io](const SearchProgress& p) {
            io.err << "progress nodes=" << p.nodes << " depth=" << p.max_depth << " elapsed=" << std::fixed
                   << std::setprecision(2) << p.elapsed_seconds << "s\n"
                   << std::defaultfloat;
        };

    const SearchOutcome o = search(cfg);

    if (a.json) {
        json j{{"k", a.k}, {"size", a.size}, {"status", status_name(o.status)}, {"stats", to_json(o.stats)}};
        if (o.certificate) j["certificate"] = to_json(o.certificate->unchecked());
        io.out << j.dump() << '\n';
        if (o.certificate && !a.out_path.empty() && a.out_path != "-") save_certificate(a.out_path, *o.certificate);
    } else {
        switch (o.status) {
        case SearchStatus::found:
            io.out << "FOUND: " << a.size << "-clique in G_" << a.k << '\n';
            break;
        case SearchStatus::exhausted_none:
            io.out << "NONE: no " << a.size << "-clique exists in G_" << a.k << " (exhaustive)\n";
            break;
        case SearchStatus::none_under_seed:
            io.out << "NONE: no " << a.size << "-clique in G_" << a.k << " extends the seed rows\n";
            break;
        case SearchStatus::limit_reached:
            io.out << "LIMIT: no verdict within the node budget\n";
            if (o.stats.complete_traversal)
                io.out << "note: a randomized attempt covered its whole tree; rerun with --exhaustive for a verdict\n";
            break;
        }
        io.out << "nodes=" << o.stats.nodes << " max_depth=" << o.stats.max_depth << " attempts=" << o.stats.attempts
               << '\n';
        io.err << "elapsed " << o.stats.wall_seconds << "s\n";
        if (o.certificate) write_certificate(io, a.out_path, *o.certificate);
    }

    switch (o.status) {
    case SearchStatus::found: return ok;
    case SearchStatus::exhausted_none:
    case SearchStatus::none_under_seed: return negative;
    case SearchStatus::limit_reached: return limit;
    }
    return limit;
}

struct BoundArgs {
    std::optional<std::uint64_t> k;
    std::optional<std::uint64_t> upto;
    std::string materialize;
    std::string registry;
    bool json = false;
};

inline int cmd_bound(Streams io, const BoundArgs& a) {
    if (a.k.has_value() == a.upto.has_value()) {
        io.err << "bound needs exactly one of K or --upto K\n";
        return usage;
    }
    if (a.upto && !a.materialize.empty()) {
        io.err << "--materialize needs a single K\n";
        return usage;
    }
    const Registry registry = a.registry.empty() ? Registry::defaults() : Registry::load_directory(a.registry);
    BoundCalculator calc(registry);

    if (a.k) {
        const BoundReport r = calc(*a.k);
        if (a.json) {
            io.out << to_json(r).dump() << '\n';
        } else {
            io.out << "k=" << r.k.value() << " lower_bound=" << r.lower_bound << " exact=" << (r.exact ? "yes" : "no")
                   << '\n';
            render_tree(io.out, *r.provenance, 1);
        }
        if (!a.materialize.empty()) write_certificate(io, a.materialize, materialize_bound(r, registry));
        return ok;
    }

    if (*a.upto < 2) {
        io.err << "--upto must be at least 2\n";
        return usage;
    }
    json rows = json::array();
    if (!a.json) io.out << "k\tbound\texact\tprovenance\n";
    for (std::uint64_t k = 2; k <= *a.upto; ++k) {
        const BoundReport r = calc(k);
        if (a.json) rows.push_back(to_json(r));
        else
            io.out << k << '\t' << r.lower_bound << '\t' << (r.exact ? "yes" : "no") << '\t'
                   << to_string(*r.provenance) << '\n';
    }
    if (a.json) io.out << rows.dump() << '\n';
    return ok;
}

struct CensusArgs {
    std::uint64_t k = 0;
    bool omega = false;
    bool triangles = false;
    bool degree = false;
    bool json = false;
};

inline int cmd_census(Streams io, CensusArgs a) {
    if (a.k > oracle::SmallModulus::cap || a.k < 2) {
        io.err << "census is capped at 2 <= k <= " << oracle::SmallModulus::cap << ", got " << a.k << '\n';
        return usage;
    }
    if (!a.omega && !a.triangles && !a.degree) a.omega = a.triangles = a.degree = true;
    const oracle::SmallModulus k(a.k);
    oracle::CensusReport r{k.value(), oracle::vertex_count(k), {}, {}, {}};
    bool consistent = true;
    json j{{"k", r.k}, {"vertex_count", r.vertex_count}};

    if (a.degree) {
        const auto vertices = oracle::all_functions(k);
        const bool uniform = oracle::degree_check(k, vertices);
        consistent = consistent && uniform;
        if (uniform) r.degree = oracle::factorial(k.value());
        j["degree_uniform"] = uniform;
        if (r.degree) j["degree"] = *r.degree;
    }
    if (a.triangles) {
        oracle::TriangleCount t{};
        try {
            t = oracle::triangle_count(k);
        } catch (const error& e) {
            io.err << "oracle mismatch: " << e.what() << '\n';
            return negative;
        }
        r.triangle_count = t.value;
        j["triangle_count"] = t.value;
        j["bijection_pair_count"] = t.pair_count;
        if (t.direct) j["triangle_count_direct"] = *t.direct;
    }
    if (a.omega) {
        r.omega = oracle::brute_force_omega(k);
        j["omega"] = *r.omega;
    }

    if (a.json) {
        io.out << j.dump() << '\n';
    } else {
        io.out << "k=" << r.k << " vertices=" << r.vertex_count << '\n';
        if (a.degree) {
            if (r.degree) io.out << "degree=" << *r.degree << " (every vertex)\n";
            else io.out << "degree: NOT uniformly " << oracle::factorial(k.value()) << '\n';
        }
        if (a.triangles) {
            io.out << "triangles=" << *r.triangle_count << " (ordered bijection pairs N=" << j["bijection_pair_count"];
            if (j.contains("triangle_count_direct")) io.out << "; direct triple enumeration agrees";
            io.out << ")\n";
        }
        if (a.omega) io.out << "omega=" << *r.omega << '\n';
    }
    return consistent ? ok : negative;
}

/// Parses argv and dispatches. Library errors become exit code 2 with a message on err.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Streams io{out, err};
    CLI::App app{"Cliques in the graph of functions Z_k -> Z_k whose differences are bijections", "bijclique"};
    app.require_subcommand(1);

    std::string verify_path;
    bool verify_json = false;
    auto* verify_cmd = app.add_subcommand("verify", "Check that a certificate file is a clique");
    verify_cmd->add_option("path", verify_path, "Certificate file")->required();
    verify_cmd->add_flag("--json", verify_json, "Machine-readable report");

    std::string gen_kind;
    std::uint64_t gen_k = 0;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "Write a constructed clique");
    gen_cmd->add_option("kind", gen_kind, "Construction (prime)")->required();
    gen_cmd->add_option("k", gen_k, "Modulus")->required();
    gen_cmd->add_option("--out,-o", gen_out, "Output file (default stdout)");

    std::string comp_a, comp_b, comp_out;
    bool comp_json = false;
    auto* compose_cmd = app.add_subcommand("compose", "Product clique over Z_nm from cliques over Z_n and Z_m");
    compose_cmd->add_option("a", comp_a, "Certificate over Z_n")->required();
    compose_cmd->add_option("b", comp_b, "Certificate over Z_m")->required();
    compose_cmd->add_option("--out,-o", comp_out, "Output file (default stdout)");
    compose_cmd->add_flag("--json", comp_json, "Print the product as JSON");

    SearchArgs sa;
    std::uint64_t node_limit = 0;
    auto* search_cmd = app.add_subcommand("search", "Backtracking search for a clique of a given size");
    search_cmd->add_option("k", sa.k, "Modulus")->required();
    search_cmd->add_option("size", sa.size, "Target clique size")->required();
    search_cmd->add_flag("--exhaustive", sa.exhaustive, "Complete search (default)");
    search_cmd->add_flag("--first-found", sa.first_found, "Randomized search with restarts");
    auto* nl = search_cmd->add_option("--node-limit", node_limit, "Total node budget");
    search_cmd->add_option("--restarts", sa.restarts, "Randomized attempts sharing the node budget");
    search_cmd->add_option("--rand-seed", sa.rand_seed, "RNG seed for --first-found");
    search_cmd->add_option("--seed", sa.seed_path, "Certificate file with rows to fix as rows 2, 3, ...");
    search_cmd->add_option("--workers", sa.workers, "Worker threads")->check(CLI::PositiveNumber);
    search_cmd->add_option("--out,-o", sa.out_path, "Write the witness here");
    search_cmd->add_option("--progress", sa.progress, "Report progress every N nodes on stderr");
    search_cmd->add_flag("--json", sa.json, "Machine-readable result");

    BoundArgs ba;
    std::uint64_t bound_k = 0, bound_upto = 0;
    auto* bound_cmd = app.add_subcommand("bound", "Lower bound on omega(k) with its derivation");
    auto* bk = bound_cmd->add_option("k", bound_k, "Modulus");
    auto* bu = bound_cmd->add_option("--upto", bound_upto, "Tabulate 2..K");
    bound_cmd->add_option("--materialize", ba.materialize, "Write the witness certificate");
    bound_cmd->add_option("--registry", ba.registry, "Directory of *.cert files (default: built-in k=15/21/27)");
    bound_cmd->add_flag("--json", ba.json, "Machine-readable report");

    CensusArgs ca;
    auto* census_cmd = app.add_subcommand("census", "Brute-force oracle: degree, triangles, omega (k <= 5)");
    census_cmd->add_option("k", ca.k, "Modulus")->required();
    census_cmd->add_flag("--omega", ca.omega, "Exact clique number");
    census_cmd->add_flag("--triangles", ca.triangles, "Triangle count, two methods where possible");
    census_cmd->add_flag("--degree", ca.degree, "Check every vertex has degree k!");
    census_cmd->add_flag("--json", ca.json, "Machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return usage;
    }

    try {
        if (*verify_cmd) return cmd_verify(io, verify_path, verify_json);
        if (*gen_cmd) return cmd_gen(io, gen_kind, gen_k, gen_out);
        if (*compose_cmd) return cmd_compose(io, comp_a, comp_b, comp_out, comp_json);
        if (*search_cmd) {
            if (*nl) sa.node_limit = node_limit;
            return cmd_search(io, sa);
        }
        if (*bound_cmd) {
            if (*bk) ba.k = bound_k;
            if (*bu) ba.upto = bound_upto;
            return cmd_bound(io, ba);
        }
        if (*census_cmd) return cmd_census(io, ca);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}

} // namespace bijclique::cli
