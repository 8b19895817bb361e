#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gmpxx.h>

#include "json.hpp"

#include "phylotope/errors.hpp"
#include "phylotope/hilbert.hpp"
#include "phylotope/tree.hpp"

namespace phylotope {

using json = nlohmann::json;

// Fiber tables:
//   {"meta": {"tree", "root", "group", "n", "sockets"},
//    "cells": [{"key": [[u...], ...], "count": "<decimal>"}, ...]}
// Cells are written in lexicographic key order.

inline json to_json(const FiberCountTable& t) {
    json cells = json::array();
    for (const auto& [key, count] : t.cells)
        cells.push_back({{"key", key}, {"count", count.get_str()}});
    return {{"meta",
             {{"tree", t.meta.tree},
              {"root", t.meta.root},
              {"group", t.meta.group},
              {"n", t.meta.n},
              {"sockets", t.meta.sockets}}},
            {"cells", std::move(cells)}};
}

inline FiberCountTable fiber_table_from_json(const json& j) {
    try {
        FiberCountTable t;
        const auto& m = j.at("meta");
        t.meta.tree = m.at("tree").get<std::string>();
        t.meta.root = m.value("root", std::string());
        t.meta.group = m.at("group").get<std::string>();
        t.meta.n = m.at("n").get<unsigned>();
        t.meta.sockets = m.at("sockets").get<std::vector<std::string>>();
        for (const auto& cell : j.at("cells")) {
            auto key = cell.at("key").get<FiberKey>();
            if (key.size() != t.meta.sockets.size())
                throw ParseError("fiber table key has the wrong number of sockets");
            mpz_class count;
            if (count.set_str(cell.at("count").get<std::string>(), 10) != 0 || count < 0)
                throw ParseError("fiber table count is not a non-negative decimal");
            if (count != 0)
                t.cells[key] += count;
        }
        return t;
    } catch (const json::exception& e) {
        throw ParseError(std::string("fiber table JSON: ") + e.what());
    }
}

// Plan files:
//   {"components": [{"name", "newick", "root", "sockets": {name: leaf | "e{...}"}}]}
// Socket leaves may also appear directly in the Newick text as "S<name>".
// A sockets entry turns the pendant edge of an integer leaf (given as the
// label or as its clade) into the named socket; the root edge is addressed by
// the clade of all non-root leaves.

namespace detail {

inline LeafLabel json_label(const json& j) {
    if (j.is_number_integer())
        return LeafLabel::integer(j.get<std::int64_t>());
    if (j.is_string())
        return LeafLabel::parse(j.get<std::string>());
    throw ParseError("leaf label must be an integer or a string");
}

} // namespace detail

inline PlanComponent component_from_json(const json& j) {
    try {
        PlanComponent c{j.value("name", std::string("component")),
                        parse_tree(j.at("newick").get<std::string>(),
                                   j.contains("root") ? std::optional(detail::json_label(j.at("root")))
                                                      : std::nullopt)};
        if (j.contains("sockets")) {
            for (const auto& [name, where] : j.at("sockets").items()) {
                std::optional<LeafLabel> leaf;
                if (where.is_string() && !where.get<std::string>().empty() &&
                    (where.get<std::string>().front() == 'e' || where.get<std::string>().front() == '{')) {
                    auto edge = EdgeRef::parse(where.get<std::string>());
                    auto idx = c.tree.edge_index(edge);
                    if (idx == c.tree.root_edge())
                        leaf = c.tree.root_label();
                    else if (c.tree.edge_leaf(idx))
                        leaf = *c.tree.edge_leaf(idx);
                    else
                        throw StructuralError("socket '" + name + "' is not a pendant edge");
                } else {
                    leaf = detail::json_label(where);
                }
                c.tree = relabel(c.tree, *leaf, LeafLabel::socket_named(name));
            }
        }
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("plan JSON: ") + e.what());
    }
}

inline DecompositionPlan plan_from_json(const json& j) {
    try {
        DecompositionPlan plan;
        for (const auto& c : j.at("components"))
            plan.components.push_back(component_from_json(c));
        if (plan.components.empty())
            throw ParseError("plan has no components");
        plan.validate();
        return plan;
    } catch (const json::exception& e) {
        throw ParseError(std::string("plan JSON: ") + e.what());
    }
}

inline json to_json(const DecompositionPlan& plan) {
    json comps = json::array();
    for (const auto& c : plan.components)
        comps.push_back({{"name", c.name},
                         {"newick", canonical_form(c.tree)},
                         {"root", c.tree.root_label().to_string()},
                         {"sockets", json::object()}});
    return {{"components", std::move(comps)}};
}

inline json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline DecompositionPlan load_plan(const std::filesystem::path& path) {
    return plan_from_json(parse_json_text(read_text_file(path), path.string()));
}

} // namespace phylotope
