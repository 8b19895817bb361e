#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so the
// test suite can drive every subcommand in-process.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bundled_plans.hpp"
#include "phylotope/phylotope.hpp"

namespace phylotope::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_usage = 2,
    exit_budget = 3,
    exit_mismatch = 4,
};

struct GlobalOptions {
    bool json = false;
    bool no_timings = false;
    unsigned threads = 1;
    bool no_cache = false;
    std::string cache_dir;
    bool require_trivalent = false;
    std::uint64_t multiset_cap = SumsetOptions{}.multiset_cap;
    std::uint64_t memory_cap = SumsetOptions{}.memory_cap_bytes;
    std::uint64_t node_cap = EnumerationOptions{}.node_cap;
};

inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("PHYLOTOPE_CACHE_DIR"); env && *env)
        return env;
    return ".phylotope-cache";
}

/// 64-bit FNV-1a; stable across platforms, used for cache file names.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Fiber tables on disk keyed by (canonical tree, root, group, n, sockets).
class FiberCache {
public:
    FiberCache(bool enabled, std::filesystem::path dir) : enabled_(enabled), dir_(std::move(dir)) {}

    FiberCountTable socket_table(const RootedPhyloTree& t, const FiniteAbelianGroup& g, unsigned n,
                                 const CountOptions& opt) {
        FiberTableMeta want{canonical_form(t), t.root_label().to_string(), g.to_string(), n, {}};
        for (const auto& [name, e] : t.sockets())
            want.sockets.push_back(name);
        if (!enabled_) {
            ++misses_;
            return phylotope::socket_table(t, g, n, opt);
        }
        std::string key = "v1|" + want.tree + "|" + want.root + "|" + want.group + "|" +
                          std::to_string(n);
        for (const auto& s : want.sockets)
            key += "|" + s;
        char name[32];
        std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
        const auto path = dir_ / name;
        std::error_code ec;
        if (std::filesystem::exists(path, ec)) {
            try {
                auto table = fiber_table_from_json(parse_json_text(read_text_file(path), path.string()));
                if (table.meta == want) {
                    ++hits_;
                    return table;
                }
            } catch (const Error&) {
                // unreadable entry: recompute and overwrite
            }
        }
        ++misses_;
        auto table = phylotope::socket_table(t, g, n, opt);
        std::filesystem::create_directories(dir_, ec);
        const auto tmp = path.string() + ".tmp" + std::to_string(fnv1a(key + std::to_string(misses_)));
        {
            std::ofstream out(tmp);
            out << to_json(table).dump() << "\n";
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec)
            std::filesystem::remove(tmp, ec);
        return table;
    }

    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

private:
    bool enabled_;
    std::filesystem::path dir_;
    std::uint64_t hits_ = 0, misses_ = 0;
};

/// Shared state of one invocation: options, cache, stage timings.
class Session {
public:
    explicit Session(GlobalOptions opt)
        : opt_(std::move(opt)),
          cache_(!opt_.no_cache, opt_.cache_dir.empty() ? default_cache_dir()
                                                        : std::filesystem::path(opt_.cache_dir)) {}

    const GlobalOptions& options() const { return opt_; }
    FiberCache& cache() { return cache_; }

    CountOptions count_options() const {
        CountOptions c;
        c.sums.threads = opt_.threads;
        c.sums.multiset_cap = opt_.multiset_cap;
        c.sums.memory_cap_bytes = opt_.memory_cap;
        return c;
    }
    EnumerationOptions enumeration_options() const {
        return {opt_.node_cap, opt_.threads};
    }

    template <class F>
    auto timed(const std::string& stage, F&& f) {
        auto start = std::chrono::steady_clock::now();
        auto result = f();
        timings_.emplace_back(stage, std::chrono::duration<double>(
                                         std::chrono::steady_clock::now() - start).count());
        return result;
    }

    json timings_json() const {
        json t = json::object();
        for (const auto& [stage, secs] : timings_)
            t[stage] = secs;
        return t;
    }

    void print_timings(std::ostream& out) const {
        if (opt_.no_timings)
            return;
        out << "timings:\n";
        for (const auto& [stage, secs] : timings_) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3f", secs);
            out << "  " << stage << ": " << buf << " s\n";
        }
    }

    /// Versioned run report; counts are decimal strings.
    json report(const std::string& command, json inputs, json results) const {
        json r{{"schema", 1}, {"command", command}, {"inputs", std::move(inputs)},
               {"results", std::move(results)},
               {"cache", {{"hits", cache_.hits()}, {"misses", cache_.misses()}}}};
        if (!opt_.no_timings)
            r["timings"] = timings_json();
        return r;
    }

    void check_tree(const RootedPhyloTree& t) const {
        if (opt_.require_trivalent && !t.is_trivalent())
            throw StructuralError("tree " + canonical_form(t) + " is not 3-valent");
    }

private:
    GlobalOptions opt_;
    FiberCache cache_;
    std::vector<std::pair<std::string, double>> timings_;
};

struct TreeArgs {
    std::string newick;
    std::string root;
    std::string group = "Z2xZ2";
};

inline RootedPhyloTree load_tree(const TreeArgs& a, const Session& s) {
    auto t = parse_tree(a.newick, a.root.empty() ? std::nullopt
                                                 : std::optional(LeafLabel::parse(a.root)));
    if (!t.sockets().empty())
        throw StructuralError("a standalone tree must not contain socket leaves");
    s.check_tree(t);
    return t;
}

/// A path to a plan file, or the name of a bundled plan.
inline DecompositionPlan resolve_plan(const std::string& name) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(name, ec))
        return load_plan(name);
    const auto base = std::filesystem::path(name).filename().string();
    if (base == "caterpillar6.json" || base == "caterpillar6")
        return plan_from_json(parse_json_text(bundled::caterpillar6, "caterpillar6.json"));
    if (base == "snowflake6.json" || base == "snowflake6")
        return plan_from_json(parse_json_text(bundled::snowflake6, "snowflake6.json"));
    throw ParseError("no plan file '" + name + "' and no bundled plan of that name");
}

inline mpz_class plan_count(Session& s, const DecompositionPlan& plan, const FiniteAbelianGroup& g,
                            unsigned n) {
    for (const auto& c : plan.components)
        s.check_tree(c.tree);
    s.check_tree(glue(plan));
    std::vector<FiberCountTable> tables;
    for (const auto& c : plan.components)
        tables.push_back(s.cache().socket_table(c.tree, g, n, s.count_options()));
    return tfp_compose(plan, tables, n);
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// ---------------------------------------------------------------- commands

inline int cmd_vertices(Session& s, const TreeArgs& a, const std::string& format, std::ostream& out) {
    const auto t = load_tree(a, s);
    const auto g = FiniteAbelianGroup::parse(a.group);
    const auto verts = all_vertices(t, g);
    const auto& layout = *verts.front().layout;
    if (s.options().json || format == "json") {
        json rows = json::array();
        for (std::size_t k = 0; k < verts.size(); ++k) {
            json asg = json::object();
            for (const auto& [leaf, elem] : assignment_at(t, g, k))
                asg[leaf.to_string()] = to_string(elem);
            rows.push_back({{"assignment", asg}, {"coordinates", verts[k].coords}});
        }
        json coords = json::array();
        for (std::size_t c = 0; c < layout.dimension(); ++c)
            coords.push_back(layout.coordinate_name(c, g));
        out << json{{"schema", 1}, {"tree", layout.tree}, {"group", layout.group},
                    {"coordinates", coords}, {"vertices", rows}}
                   .dump()
            << "\n";
        return exit_ok;
    }
    std::vector<std::string> header;
    for (const auto& l : t.non_root_leaves())
        header.push_back(l.to_string());
    for (std::size_t c = 0; c < layout.dimension(); ++c)
        header.push_back(layout.coordinate_name(c, g));
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << csv_field(header[i]);
    out << "\n";
    for (std::size_t k = 0; k < verts.size(); ++k) {
        bool first = true;
        for (const auto& [leaf, elem] : assignment_at(t, g, k)) {
            out << (first ? "" : ",") << csv_field(to_string(elem));
            first = false;
        }
        for (auto c : verts[k].coords)
            out << "," << unsigned{c};
        out << "\n";
    }
    return exit_ok;
}

inline int cmd_lattice(Session& s, const TreeArgs& a, std::ostream& out) {
    const auto t = load_tree(a, s);
    const auto g = FiniteAbelianGroup::parse(a.group);
    const auto verts = all_vertices(t, g);
    const auto basis = s.timed("hnf", [&] { return lattice_from_vertices(verts); });
    const auto dim = affine_dimension(std::span<const ExponentVector>(verts));
    if (s.options().json) {
        json rows = json::array();
        for (std::size_t i = 0; i < basis.rank; ++i) {
            json r = json::array();
            for (const auto& v : basis.basis.row(i))
                r.push_back(v.get_str());
            rows.push_back(r);
        }
        out << s.report("lattice", {{"tree", canonical_form(t)}, {"group", g.to_string()}},
                        {{"rank", basis.rank}, {"dimension", basis.dimension},
                         {"affine_dimension", dim}, {"pivots", basis.pivots}, {"basis", rows}})
                   .dump()
            << "\n";
        return exit_ok;
    }
    out << "rank: " << basis.rank << "\n";
    out << "dimension: " << basis.dimension << "\n";
    out << "affine_dimension: " << dim << "\n";
    out << "pivots: ";
    for (std::size_t i = 0; i < basis.pivots.size(); ++i)
        out << (i ? "," : "") << basis.pivots[i];
    out << "\nbasis:\n";
    for (std::size_t i = 0; i < basis.rank; ++i) {
        for (std::size_t j = 0; j < basis.dimension; ++j)
            out << (j ? "," : "") << basis.basis(i, j).get_str();
        out << "\n";
    }
    return exit_ok;
}

inline mpz_class polyhedral_count(Session& s, const RootedPhyloTree& t, const FiniteAbelianGroup& g,
                                  unsigned n) {
    const auto verts = all_vertices(t, g);
    const auto poly = VPolytope::from(std::span<const ExponentVector>(verts));
    const auto basis = lattice_from_vertices(verts);
    return mpz_class(std::to_string(
        enumerate_lattice_points(poly, n, basis, {}, s.enumeration_options()).size()));
}

inline int cmd_count(Session& s, const TreeArgs& a, unsigned n, const std::string& method,
                     std::ostream& out) {
    const auto t = load_tree(a, s);
    const auto g = FiniteAbelianGroup::parse(a.group);
    mpz_class count;
    if (method == "semigroup")
        count = s.timed("semigroup", [&] { return hilbert_value(t, g, n, s.count_options()); });
    else if (method == "polyhedral")
        count = s.timed("polyhedral", [&] { return polyhedral_count(s, t, g, n); });
    else
        throw ParseError("unknown method '" + method + "'");
    if (s.options().json)
        out << s.report("count",
                        {{"tree", canonical_form(t)}, {"group", g.to_string()}, {"n", n},
                         {"method", method}},
                        {{"count", count.get_str()}})
                   .dump()
            << "\n";
    else
        out << count.get_str() << "\n";
    return exit_ok;
}

inline int cmd_fiber_table(Session& s, const TreeArgs& a, unsigned n, const std::string& sockets,
                           const std::string& out_path, std::ostream& out) {
    const auto t = load_tree(a, s);
    const auto g = FiniteAbelianGroup::parse(a.group);
    const auto edges = parse_edge_list(sockets);
    for (const auto& e : edges)
        t.edge_index(e);
    const auto table = s.timed("fiber_table", [&] {
        return fiber_table(t, g, n, std::span<const EdgeRef>(edges), s.count_options());
    });
    const auto text = to_json(table).dump();
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f)
            throw ParseError("cannot write " + out_path);
        f << text << "\n";
    }
    if (out_path.empty() || s.options().json)
        out << text << "\n";
    else
        out << "cells: " << table.cells.size() << "\ntotal: " << table.total().get_str() << "\n";
    return exit_ok;
}

inline int cmd_tfp(Session& s, const std::string& plan_name, const std::string& group, unsigned n,
                   const std::string& expose, std::ostream& out) {
    const auto plan = resolve_plan(plan_name);
    const auto g = FiniteAbelianGroup::parse(group);
    std::vector<std::string> exposed;
    std::stringstream ss(expose);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            exposed.push_back(item);
    if (exposed.empty()) {
        const auto count = s.timed("tfp", [&] { return plan_count(s, plan, g, n); });
        if (s.options().json)
            out << s.report("tfp", {{"plan", plan_name}, {"group", g.to_string()}, {"n", n}},
                            {{"count", count.get_str()}})
                       .dump()
                << "\n";
        else
            out << count.get_str() << "\n";
        return exit_ok;
    }
    std::vector<FiberCountTable> tables;
    for (const auto& c : plan.components)
        tables.push_back(s.cache().socket_table(c.tree, g, n, s.count_options()));
    out << to_json(tfp_fiber_table(plan, tables, n, exposed)).dump() << "\n";
    return exit_ok;
}

inline int cmd_compare(Session& s, const std::string& plan_a, const std::string& plan_b,
                       const std::string& group, unsigned n, std::ostream& out) {
    const auto g = FiniteAbelianGroup::parse(group);
    const auto a = s.timed("plan_a", [&] { return plan_count(s, resolve_plan(plan_a), g, n); });
    const auto b = s.timed("plan_b", [&] { return plan_count(s, resolve_plan(plan_b), g, n); });
    const std::string verdict = a == b ? "EQUAL" : "DIFFERENT";
    if (s.options().json) {
        out << s.report("compare",
                        {{"plan_a", plan_a}, {"plan_b", plan_b}, {"group", g.to_string()}, {"n", n}},
                        {{"count_a", a.get_str()}, {"count_b", b.get_str()}, {"verdict", verdict}})
                   .dump()
            << "\n";
        return exit_ok;
    }
    out << "group: " << g.to_string() << "\nn: " << n << "\n";
    out << "a: " << plan_a << " " << a.get_str() << "\n";
    out << "b: " << plan_b << " " << b.get_str() << "\n";
    out << "verdict: " << verdict << "\n";
    s.print_timings(out);
    return exit_ok;
}

inline int cmd_ehrhart(Session& s, const TreeArgs& a, unsigned extra, std::ostream& out) {
    const auto t = load_tree(a, s);
    const auto g = FiniteAbelianGroup::parse(a.group);
    const auto verts = all_vertices(t, g);
    const auto degree = static_cast<unsigned>(affine_dimension(std::span<const ExponentVector>(verts)));
    std::vector<std::pair<unsigned, mpz_class>> values;
    for (unsigned n = 0; n <= degree + extra; ++n)
        values.emplace_back(n, s.timed("n=" + std::to_string(n), [&] {
            return hilbert_value(t, g, n, s.count_options());
        }));
    const auto poly = ehrhart_interpolate(values, degree);
    bool ok = true;
    json checks = json::array();
    for (unsigned n = degree + 1; n <= degree + extra; ++n) {
        const auto predicted = poly(mpq_class(n));
        const bool match = predicted == mpq_class(values[n].second);
        ok = ok && match;
        checks.push_back({{"n", n}, {"predicted", predicted.get_str()},
                          {"counted", values[n].second.get_str()}, {"match", match}});
    }
    if (s.options().json) {
        json coeffs = json::array();
        for (const auto& c : poly.coefficients)
            coeffs.push_back(c.get_str());
        out << s.report("ehrhart", {{"tree", canonical_form(t)}, {"group", g.to_string()}},
                        {{"degree", degree}, {"coefficients", coeffs}, {"polynomial", poly.to_string()},
                         {"checks", checks}})
                   .dump()
            << "\n";
    } else {
        out << "degree: " << degree << "\n";
        out << "ehr(n) = " << poly.to_string() << "\n";
        for (const auto& c : checks)
            out << "check n=" << c["n"].get<unsigned>() << ": predicted "
                << c["predicted"].get<std::string>() << ", counted "
                << c["counted"].get<std::string>() << (c["match"].get<bool>() ? " ok" : " MISMATCH")
                << "\n";
    }
    return ok ? exit_ok : exit_check_failed;
}

inline int cmd_normality_check(Session& s, const TreeArgs& a, unsigned max_n, std::ostream& out) {
    const auto t = load_tree(a, s);
    const auto g = FiniteAbelianGroup::parse(a.group);
    bool ok = true;
    json rows = json::array();
    for (unsigned n = 1; n <= max_n; ++n) {
        const auto semi = s.timed("semigroup n=" + std::to_string(n),
                                  [&] { return hilbert_value(t, g, n, s.count_options()); });
        const auto poly = s.timed("polyhedral n=" + std::to_string(n),
                                  [&] { return polyhedral_count(s, t, g, n); });
        ok = ok && semi == poly;
        rows.push_back({{"n", n}, {"semigroup", semi.get_str()}, {"polyhedral", poly.get_str()},
                        {"equal", semi == poly}});
    }
    if (s.options().json) {
        out << s.report("normality-check",
                        {{"tree", canonical_form(t)}, {"group", g.to_string()}, {"max_n", max_n}},
                        {{"rows", rows}, {"verdict", ok ? "CONSISTENT" : "MISMATCH"}})
                   .dump()
            << "\n";
    } else {
        for (const auto& r : rows)
            out << "n=" << r["n"].get<unsigned>() << " semigroup " << r["semigroup"].get<std::string>()
                << " polyhedral " << r["polyhedral"].get<std::string>()
                << (r["equal"].get<bool>() ? " equal" : " DIFFERENT") << "\n";
        out << "verdict: " << (ok ? "CONSISTENT" : "MISMATCH") << "\n";
        s.print_timings(out);
    }
    return ok ? exit_ok : exit_check_failed;
}

struct ReproductionRow {
    std::string group;
    unsigned n;
    mpz_class caterpillar, snowflake;
    std::optional<mpz_class> expected_caterpillar, expected_snowflake;
    bool expect_equal;
    bool pass;
};

/// Both bundled plans at n = 1..3 over Z2xZ2 (published values) and
/// n = 1..8 over Z2 (the shapes must agree).
inline int cmd_reproduce_paper(Session& s, std::ostream& out) {
    const auto cat = resolve_plan("caterpillar6.json");
    const auto snow = resolve_plan("snowflake6.json");
    std::vector<ReproductionRow> rows;
    const auto k3 = FiniteAbelianGroup::parse("Z2xZ2");
    const mpz_class published[][2] = {
        {1024, 1024}, {396928, 396928}, {mpz_class("69324800"), mpz_class("69248000")}};
    for (unsigned n = 1; n <= 3; ++n) {
        ReproductionRow r{k3.to_string(), n, 0, 0, published[n - 1][0], published[n - 1][1],
                          published[n - 1][0] == published[n - 1][1], false};
        r.caterpillar = s.timed("Z2xZ2 caterpillar n=" + std::to_string(n),
                                [&] { return plan_count(s, cat, k3, n); });
        r.snowflake = s.timed("Z2xZ2 snowflake n=" + std::to_string(n),
                              [&] { return plan_count(s, snow, k3, n); });
        r.pass = r.caterpillar == *r.expected_caterpillar && r.snowflake == *r.expected_snowflake;
        rows.push_back(r);
    }
    const auto jc = FiniteAbelianGroup::parse("Z2");
    for (unsigned n = 1; n <= 8; ++n) {
        ReproductionRow r{jc.to_string(), n, 0, 0, std::nullopt, std::nullopt, true, false};
        r.caterpillar = s.timed("Z2 caterpillar n=" + std::to_string(n),
                                [&] { return plan_count(s, cat, jc, n); });
        r.snowflake = s.timed("Z2 snowflake n=" + std::to_string(n),
                              [&] { return plan_count(s, snow, jc, n); });
        r.pass = r.caterpillar == r.snowflake;
        rows.push_back(r);
    }
    bool all = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
    if (s.options().json) {
        json jr = json::array();
        for (const auto& r : rows) {
            json row{{"group", r.group}, {"n", r.n}, {"caterpillar", r.caterpillar.get_str()},
                     {"snowflake", r.snowflake.get_str()},
                     {"relation", r.caterpillar == r.snowflake ? "equal" : "different"},
                     {"pass", r.pass}};
            if (r.expected_caterpillar) {
                row["expected_caterpillar"] = r.expected_caterpillar->get_str();
                row["expected_snowflake"] = r.expected_snowflake->get_str();
            }
            jr.push_back(row);
        }
        out << s.report("reproduce-paper", json::object(),
                        {{"rows", jr}, {"verdict", all ? "PASS" : "FAIL"}})
                   .dump()
            << "\n";
    } else {
        char line[160];
        std::snprintf(line, sizeof line, "%-6s %2s %12s %12s %-9s %s\n", "group", "n", "caterpillar",
                      "snowflake", "relation", "check");
        out << line;
        for (const auto& r : rows) {
            std::string check = r.pass ? "PASS" : "FAIL";
            if (r.expected_caterpillar)
                check += " (expected " + r.expected_caterpillar->get_str() + " / " +
                         r.expected_snowflake->get_str() + ")";
            else
                check += " (shapes must agree)";
            std::snprintf(line, sizeof line, "%-6s %2u %12s %12s %-9s %s\n", r.group.c_str(), r.n,
                          r.caterpillar.get_str().c_str(), r.snowflake.get_str().c_str(),
                          r.caterpillar == r.snowflake ? "equal" : "different", check.c_str());
            out << line;
        }
        out << "verdict: " << (all ? "PASS" : "FAIL") << "\n";
        s.print_timings(out);
    }
    return all ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------- driver

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hilbert and Ehrhart counts for group-based phylogenetic models", "phylotope"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    app.set_help_all_flag("--help-all", "Expand all help");

    GlobalOptions g;
    app.add_flag("--json", g.json, "Machine-readable JSON report");
    app.add_flag("--no-timings", g.no_timings, "Omit timing blocks");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    app.add_flag("--no-cache", g.no_cache, "Do not read or write the fiber-table cache");
    app.add_option("--cache-dir", g.cache_dir,
                   "Cache directory (default $PHYLOTOPE_CACHE_DIR or .phylotope-cache/)");
    app.add_flag("--require-trivalent", g.require_trivalent, "Reject trees that are not 3-valent");
    app.add_option("--multiset-cap", g.multiset_cap, "Max multisets per distinct-sum enumeration");
    app.add_option("--memory-cap", g.memory_cap, "In-memory bytes before runs spill to disk");
    app.add_option("--node-cap", g.node_cap, "Max recursion nodes in lattice-point enumeration");

    TreeArgs tree;
    auto add_tree = [&](CLI::App* sub) {
        sub->add_option("--tree", tree.newick, "Newick text, e.g. \"((1,2),3);\"")->required();
        sub->add_option("--root", tree.root, "Root leaf label (default: largest)");
        sub->add_option("--group", tree.group, "Group, e.g. Z2xZ2")->capture_default_str();
    };
    unsigned n = 0;
    std::string method = "semigroup", format = "csv", sockets, out_path, plan, plan_a, plan_b, expose;
    std::string group = "Z2xZ2";
    unsigned extra = 2, max_n = 3;

    auto* vertices = app.add_subcommand("vertices", "List polytope vertices (CSV or JSON)");
    add_tree(vertices);
    vertices->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* lattice = app.add_subcommand("lattice", "HNF basis of the vertex lattice");
    add_tree(lattice);

    auto* count = app.add_subcommand("count", "Hilbert value at degree n");
    add_tree(count);
    count->add_option("-n", n, "Degree / dilation")->required();
    count->add_option("--method", method)->check(CLI::IsMember({"semigroup", "polyhedral"}));

    auto* fiber = app.add_subcommand("fiber-table", "Multigraded counts over socket edges");
    add_tree(fiber);
    fiber->add_option("-n", n)->required();
    fiber->add_option("--sockets", sockets, "Edges like \"e{1},e{1,2,3}\"")->required();
    fiber->add_option("--out", out_path, "Also write the table JSON here");

    auto* tfp = app.add_subcommand("tfp", "Count through a decomposition plan");
    tfp->add_option("--plan", plan, "Plan file or bundled name")->required();
    tfp->add_option("--group", group)->capture_default_str();
    tfp->add_option("-n", n)->required();
    tfp->add_option("--expose", expose, "Comma-separated open sockets to keep as gradings");

    auto* compare = app.add_subcommand("compare", "Compare two plans at degree n");
    compare->add_option("--plan-a", plan_a)->required();
    compare->add_option("--plan-b", plan_b)->required();
    compare->add_option("--group", group)->capture_default_str();
    compare->add_option("-n", n)->required();

    auto* ehrhart = app.add_subcommand("ehrhart", "Interpolate the Ehrhart polynomial of a small tree");
    add_tree(ehrhart);
    ehrhart->add_option("--verify", extra, "Extra dilations counted to check the polynomial");

    auto* normality = app.add_subcommand("normality-check", "Semigroup vs polyhedral counts");
    add_tree(normality);
    normality->add_option("--max-n", max_n)->capture_default_str();

    auto* reproduce = app.add_subcommand("reproduce-paper", "Caterpillar vs snowflake table");

    std::vector<std::string> storage{"phylotope"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : storage)
        argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        Session s(g);
        if (*vertices)
            return cmd_vertices(s, tree, format, out);
        if (*lattice)
            return cmd_lattice(s, tree, out);
        if (*count)
            return cmd_count(s, tree, n, method, out);
        if (*fiber)
            return cmd_fiber_table(s, tree, n, sockets, out_path, out);
        if (*tfp)
            return cmd_tfp(s, plan, group, n, expose, out);
        if (*compare)
            return cmd_compare(s, plan_a, plan_b, group, n, out);
        if (*ehrhart)
            return cmd_ehrhart(s, tree, extra, out);
        if (*normality)
            return cmd_normality_check(s, tree, max_n, out);
        if (*reproduce)
            return cmd_reproduce_paper(s, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return exit_budget;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return exit_mismatch;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return exit_mismatch;
    }
    return exit_usage;
}

} // namespace phylotope::cli
