#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "phylotope/abelian.hpp"
#include "phylotope/errors.hpp"
#include "phylotope/model.hpp"
#include "phylotope/sumset.hpp"
#include "phylotope/tree.hpp"

namespace phylotope {

struct CountOptions {
    SumsetOptions sums;
    std::size_t vertex_cap = default_vertex_cap;
};

/// Hilbert function of K[q]/I_T at degree n: the number of distinct sums of
/// n vertices of P_T.
inline mpz_class hilbert_value(const RootedPhyloTree& t, const FiniteAbelianGroup& g, unsigned n,
                               const CountOptions& opt = {}) {
    const auto verts = all_vertices(t, g, opt.vertex_cap);
    return mpz_class(std::to_string(count_distinct_sums(PackedVectors::from(verts), n, opt.sums)));
}

using FiberKey = std::vector<Multidegree>;

struct FiberTableMeta {
    std::string tree;
    std::string root;
    std::string group;
    unsigned n = 0;
    std::vector<std::string> sockets;

    friend bool operator==(const FiberTableMeta&, const FiberTableMeta&) = default;
};

/// Multigraded Hilbert function h(K[q]/I; u) restricted to the socket
/// gradings: key = one multidegree per socket (socket order), zero cells
/// omitted.
struct FiberCountTable {
    FiberTableMeta meta;
    std::map<FiberKey, mpz_class> cells;

    mpz_class total() const {
        mpz_class s = 0;
        for (const auto& [k, c] : cells)
            s += c;
        return s;
    }

    mpz_class at(const FiberKey& key) const {
        auto it = cells.find(key);
        return it == cells.end() ? mpz_class(0) : it->second;
    }

    std::size_t socket_position(const std::string& name) const {
        auto it = std::find(meta.sockets.begin(), meta.sockets.end(), name);
        if (it == meta.sockets.end())
            throw StructuralError("table has no socket '" + name + "'");
        return static_cast<std::size_t>(it - meta.sockets.begin());
    }

    /// Sum over every socket not in keep; result sockets follow keep's order.
    FiberCountTable marginal(std::span<const std::string> keep) const {
        std::vector<std::size_t> pos;
        for (const auto& k : keep)
            pos.push_back(socket_position(k));
        FiberCountTable out{meta, {}};
        out.meta.sockets.assign(keep.begin(), keep.end());
        for (const auto& [key, c] : cells) {
            FiberKey k;
            for (auto p : pos)
                k.push_back(key[p]);
            out.cells[k] += c;
        }
        return out;
    }

    friend bool operator==(const FiberCountTable&, const FiberCountTable&) = default;
};

/// Relabels every multidegree coordinate by a group permutation
/// (u'[perm[h]] = u[h]).
inline FiberCountTable permute_group(const FiberCountTable& t,
                                     std::span<const std::uint32_t> perm) {
    FiberCountTable out{t.meta, {}};
    for (const auto& [key, c] : t.cells) {
        FiberKey k = key;
        for (std::size_t s = 0; s < key.size(); ++s)
            for (std::size_t h = 0; h < key[s].size(); ++h)
                k[s][perm[h]] = key[s][h];
        out.cells[k] += c;
    }
    return out;
}

struct NamedSocket {
    std::string name;
    EdgeRef edge;
};

/// Distinct n-sums grouped by the blocks of the given socket edges.
inline FiberCountTable fiber_table(const RootedPhyloTree& t, const FiniteAbelianGroup& g,
                                   unsigned n, std::span<const NamedSocket> sockets,
                                   const CountOptions& opt = {}) {
    const auto verts = all_vertices(t, g, opt.vertex_cap);
    const std::size_t order = g.order();
    std::vector<std::size_t> offsets;
    FiberCountTable table;
    table.meta = {canonical_form(t), t.root_label().to_string(), g.to_string(), n, {}};
    for (const auto& s : sockets) {
        offsets.push_back(t.edge_index(s.edge) * order);
        table.meta.sockets.push_back(s.name);
    }
    std::map<FiberKey, std::uint64_t> counts;
    FiberKey key(sockets.size(), Multidegree(order));
    for_each_distinct_sum(PackedVectors::from(verts), n, opt.sums,
                          [&](std::span<const std::uint8_t> sum) {
                              for (std::size_t s = 0; s < offsets.size(); ++s)
                                  for (std::size_t h = 0; h < order; ++h)
                                      key[s][h] = sum[offsets[s] + h];
                              ++counts[key];
                          });
    for (const auto& [k, c] : counts)
        table.cells.emplace(k, mpz_class(std::to_string(c)));
    return table;
}

/// Socket names are the edges' clade strings.
inline FiberCountTable fiber_table(const RootedPhyloTree& t, const FiniteAbelianGroup& g,
                                   unsigned n, std::span<const EdgeRef> sockets,
                                   const CountOptions& opt = {}) {
    std::vector<NamedSocket> named;
    for (const auto& e : sockets)
        named.push_back({e.to_string(), e});
    return fiber_table(t, g, n, std::span<const NamedSocket>(named), opt);
}

/// Fiber table over the tree's own socket leaves, sorted by socket name.
inline FiberCountTable socket_table(const RootedPhyloTree& t, const FiniteAbelianGroup& g,
                                    unsigned n, const CountOptions& opt = {}) {
    std::vector<NamedSocket> named;
    for (const auto& [name, e] : t.sockets())
        named.push_back({name, t.edges()[e]});
    return fiber_table(t, g, n, std::span<const NamedSocket>(named), opt);
}

struct PlanComponent {
    std::string name;
    RootedPhyloTree tree;
};

/// Components glued pairwise along shared socket names. Valid plans glue to a
/// tree (see glue_trees); sockets present in a single component stay open.
struct DecompositionPlan {
    std::vector<PlanComponent> components;

    std::vector<RootedPhyloTree> trees() const {
        std::vector<RootedPhyloTree> out;
        for (const auto& c : components)
            out.push_back(c.tree);
        return out;
    }

    /// Socket name -> component indices holding it.
    std::map<std::string, std::vector<std::size_t>> socket_owners() const {
        std::map<std::string, std::vector<std::size_t>> out;
        for (std::size_t i = 0; i < components.size(); ++i)
            for (const auto& [name, e] : components[i].tree.sockets())
                out[name].push_back(i);
        return out;
    }

    void validate() const { (void)glue_trees(trees()); }
};

inline RootedPhyloTree glue(const DecompositionPlan& plan) { return glue_trees(plan.trees()); }

inline std::vector<FiberCountTable> component_tables(const DecompositionPlan& plan,
                                                     const FiniteAbelianGroup& g, unsigned n,
                                                     const CountOptions& opt = {}) {
    std::vector<FiberCountTable> out;
    for (const auto& c : plan.components)
        out.push_back(socket_table(c.tree, g, n, opt));
    return out;
}

namespace detail {

struct WorkTable {
    std::vector<std::string> sockets;
    std::map<FiberKey, mpz_class> cells;
};

/// Natural join on shared socket names; shared sockets are summed out.
inline WorkTable join(const WorkTable& a, const WorkTable& b) {
    std::vector<std::size_t> a_shared, b_shared, a_rest, b_rest;
    WorkTable out;
    for (std::size_t i = 0; i < a.sockets.size(); ++i) {
        auto it = std::find(b.sockets.begin(), b.sockets.end(), a.sockets[i]);
        if (it == b.sockets.end()) {
            a_rest.push_back(i);
            out.sockets.push_back(a.sockets[i]);
        } else {
            a_shared.push_back(i);
            b_shared.push_back(static_cast<std::size_t>(it - b.sockets.begin()));
        }
    }
    for (std::size_t j = 0; j < b.sockets.size(); ++j)
        if (std::find(b_shared.begin(), b_shared.end(), j) == b_shared.end()) {
            b_rest.push_back(j);
            out.sockets.push_back(b.sockets[j]);
        }
    std::map<FiberKey, std::vector<std::pair<FiberKey, const mpz_class*>>> b_by_shared;
    for (const auto& [key, c] : b.cells) {
        FiberKey shared, rest;
        for (auto j : b_shared)
            shared.push_back(key[j]);
        for (auto j : b_rest)
            rest.push_back(key[j]);
        b_by_shared[shared].emplace_back(std::move(rest), &c);
    }
    for (const auto& [key, c] : a.cells) {
        FiberKey shared, rest;
        for (auto i : a_shared)
            shared.push_back(key[i]);
        for (auto i : a_rest)
            rest.push_back(key[i]);
        auto it = b_by_shared.find(shared);
        if (it == b_by_shared.end())
            continue;
        for (const auto& [b_rest_key, bc] : it->second) {
            FiberKey k = rest;
            k.insert(k.end(), b_rest_key.begin(), b_rest_key.end());
            out.cells[k] += c * *bc;
        }
    }
    return out;
}

} // namespace detail

/// Toric fiber product of the component tables: sum over socket
/// multidegrees (total n) of the product of component counts, keeping the
/// exposed sockets as gradings of the result.
inline FiberCountTable tfp_fiber_table(const DecompositionPlan& plan,
                                       std::span<const FiberCountTable> tables, unsigned n,
                                       std::span<const std::string> exposed) {
    const auto glued = glue(plan);
    if (tables.size() != plan.components.size())
        throw StructuralError("expected " + std::to_string(plan.components.size()) +
                              " tables, got " + std::to_string(tables.size()));
    const auto owners = plan.socket_owners();
    for (const auto& name : exposed) {
        auto it = owners.find(name);
        if (it == owners.end() || it->second.size() != 1)
            throw StructuralError("exposed socket '" + name +
                                  "' must occur in exactly one component");
    }
    const std::string group = tables.empty() ? std::string() : tables.front().meta.group;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const auto& tab = tables[i];
        const auto& comp = plan.components[i];
        std::vector<std::string> expected;
        for (const auto& [name, e] : comp.tree.sockets())
            expected.push_back(name);
        if (tab.meta.sockets != expected)
            throw StructuralError("socket mismatch for component '" + comp.name + "'");
        if (tab.meta.tree != canonical_form(comp.tree) ||
            tab.meta.root != comp.tree.root_label().to_string())
            throw StructuralError("table for component '" + comp.name + "' was computed on " +
                                  tab.meta.tree + " rooted at " + tab.meta.root);
        if (tab.meta.group != group)
            throw StructuralError("group mismatch for component '" + comp.name + "'");
        if (tab.meta.n != n)
            throw StructuralError("degree mismatch for component '" + comp.name + "': table n=" +
                                  std::to_string(tab.meta.n) + ", requested n=" +
                                  std::to_string(n));
        for (const auto& [key, c] : tab.cells)
            for (const auto& u : key)
                if (total(u) != n)
                    throw StructuralError("table for '" + comp.name +
                                          "' has a multidegree of total " +
                                          std::to_string(total(u)) + " != " + std::to_string(n));
    }

    // breadth-first over the gluing graph, so each join shares one socket
    std::vector<bool> used(plan.components.size(), false);
    std::vector<std::size_t> order;
    if (!plan.components.empty()) {
        order.push_back(0);
        used[0] = true;
    }
    for (std::size_t head = 0; head < order.size(); ++head)
        for (const auto& [name, e] : plan.components[order[head]].tree.sockets())
            for (auto other : owners.at(name))
                if (!used[other]) {
                    used[other] = true;
                    order.push_back(other);
                }

    detail::WorkTable acc{{}, {{FiberKey{}, mpz_class(1)}}};
    for (auto i : order)
        acc = detail::join(acc, detail::WorkTable{tables[i].meta.sockets, tables[i].cells});

    FiberCountTable out;
    out.meta = {canonical_form(glued), glued.root_label().to_string(), group, n,
                {exposed.begin(), exposed.end()}};
    std::vector<std::size_t> pos;
    for (const auto& name : exposed)
        pos.push_back(static_cast<std::size_t>(
            std::find(acc.sockets.begin(), acc.sockets.end(), name) - acc.sockets.begin()));
    for (const auto& [key, c] : acc.cells) {
        if (c == 0)
            continue;
        FiberKey k;
        for (auto p : pos)
            k.push_back(key[p]);
        out.cells[k] += c;
    }
    return out;
}

inline mpz_class tfp_compose(const DecompositionPlan& plan, std::span<const FiberCountTable> tables,
                             unsigned n) {
    return tfp_fiber_table(plan, tables, n, {}).total();
}

/// Hilbert value of the glued tree through its decomposition.
inline mpz_class tfp_count(const DecompositionPlan& plan, const FiniteAbelianGroup& g, unsigned n,
                           const CountOptions& opt = {}) {
    const auto tables = component_tables(plan, g, n, opt);
    return tfp_compose(plan, tables, n);
}

/// Exact rational polynomial c_0 + c_1 n + ... + c_D n^D.
struct EhrhartPolynomial {
    std::vector<mpq_class> coefficients;

    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

    mpq_class operator()(const mpq_class& n) const {
        mpq_class acc = 0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
            acc = acc * n + *it;
        return acc;
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t k = coefficients.size(); k-- > 0;) {
            const auto& c = coefficients[k];
            if (c == 0)
                continue;
            mpq_class mag = abs(c);
            if (!out.empty())
                out += c < 0 ? " - " : " + ";
            else if (c < 0)
                out += "-";
            bool unit = mag == 1 && k > 0;
            if (!unit)
                out += mag.get_str();
            if (k > 0)
                out += std::string(unit ? "" : "*") + "n" + (k > 1 ? "^" + std::to_string(k) : "");
        }
        return out.empty() ? "0" : out;
    }
};

/// Unique polynomial of degree <= D through (n, count) for n = 0..D, built
/// from forward differences.
inline EhrhartPolynomial ehrhart_interpolate(std::span<const std::pair<unsigned, mpz_class>> values,
                                             unsigned degree) {
    std::vector<std::optional<mpz_class>> at(degree + 1);
    for (const auto& [n, c] : values)
        if (n <= degree)
            at[n] = c;
    for (unsigned n = 0; n <= degree; ++n)
        if (!at[n])
            throw StructuralError("interpolation of degree " + std::to_string(degree) +
                                  " needs the value at n=" + std::to_string(n));
    std::vector<mpz_class> diff;
    for (const auto& v : at)
        diff.push_back(*v);
    std::vector<mpz_class> leading;  // Delta^k f(0)
    for (unsigned k = 0; k <= degree; ++k) {
        leading.push_back(diff.front());
        for (std::size_t i = 0; i + 1 < diff.size(); ++i)
            diff[i] = diff[i + 1] - diff[i];
        diff.pop_back();
    }
    EhrhartPolynomial p{std::vector<mpq_class>(degree + 1, 0)};
    std::vector<mpq_class> falling{1};  // n(n-1)...(n-k+1) / k!
    for (unsigned k = 0; k <= degree; ++k) {
        for (std::size_t i = 0; i < falling.size(); ++i)
            p.coefficients[i] += falling[i] * leading[k];
        std::vector<mpq_class> next(falling.size() + 1, 0);
        for (std::size_t i = 0; i < falling.size(); ++i) {
            next[i + 1] += falling[i];
            next[i] -= falling[i] * k;
        }
        for (auto& c : next)
            c /= k + 1;
        falling = std::move(next);
    }
    for (auto& c : p.coefficients)
        c.canonicalize();
    while (p.coefficients.size() > 1 && p.coefficients.back() == 0)
        p.coefficients.pop_back();
    return p;
}

} // namespace phylotope
