#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "phylotope/abelian.hpp"
#include "phylotope/errors.hpp"
#include "phylotope/tree.hpp"

namespace phylotope {

/// g_1..g_n: one group element per non-root leaf.
using LeafAssignment = std::map<LeafLabel, GroupElement>;

/// Per-group-element counts u_h, indexed in canonical group order.
using Multidegree = std::vector<std::uint32_t>;

inline std::uint64_t total(const Multidegree& u) {
    std::uint64_t s = 0;
    for (auto x : u)
        s += x;
    return s;
}

/// Coordinates of Z^{E(T) x G}: edge blocks in canonical clade order, each
/// block in canonical group order.
struct CoordinateLayout {
    std::string tree;
    std::string group;
    std::vector<EdgeRef> edges;
    std::size_t group_order = 0;

    std::size_t dimension() const { return edges.size() * group_order; }

    std::size_t block_offset(const EdgeRef& e) const {
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (edges[i] == e)
                return i * group_order;
        throw StructuralError("unknown edge " + e.to_string());
    }

    /// Column label like "e{1,2}:(0,1)".
    std::string coordinate_name(std::size_t c, const FiniteAbelianGroup& g) const {
        return edges.at(c / group_order).to_string() + ":" +
               phylotope::to_string(element_at(c % group_order, g));
    }
};

inline std::shared_ptr<const CoordinateLayout> make_layout(const RootedPhyloTree& t,
                                                           const FiniteAbelianGroup& g) {
    return std::make_shared<const CoordinateLayout>(
        CoordinateLayout{canonical_form(t), g.to_string(), t.edges(), g.order()});
}

/// Exponent vector alpha with a^alpha = phi_T(q_g). Vertices are 0/1 with one
/// 1 per edge block; n-fold sums have every block summing to n.
struct ExponentVector {
    std::vector<std::uint8_t> coords;
    std::shared_ptr<const CoordinateLayout> layout;

    std::uint64_t block_sum(std::size_t edge) const {
        std::uint64_t s = 0;
        for (std::size_t h = 0; h < layout->group_order; ++h)
            s += coords[edge * layout->group_order + h];
        return s;
    }

    friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
        return a.coords == b.coords;
    }
};

namespace detail {

inline std::vector<std::uint32_t> assignment_indices(const RootedPhyloTree& t,
                                                     const FiniteAbelianGroup& g,
                                                     const LeafAssignment& a) {
    std::vector<std::uint32_t> out;
    out.reserve(t.non_root_leaves().size());
    for (const auto& leaf : t.non_root_leaves()) {
        auto it = a.find(leaf);
        if (it == a.end())
            throw StructuralError("assignment misses leaf " + leaf.to_string());
        out.push_back(static_cast<std::uint32_t>(index_of(it->second, g)));
    }
    if (a.size() != out.size())
        throw StructuralError("assignment has labels that are not non-root leaves");
    return out;
}

/// Edge values as group element indices, one post-order pass. leaf_values is
/// aligned with t.non_root_leaves().
class EdgeValueKernel {
public:
    EdgeValueKernel(const RootedPhyloTree& t, const FiniteAbelianGroup& g)
        : order_(g.order()), table_(addition_table(g)), postorder_(t.postorder_edges()) {
        const auto& leaves = t.non_root_leaves();
        leaf_slot_.assign(t.edge_count(), RootedPhyloTree::npos);
        children_.resize(t.edge_count());
        for (std::size_t e = 0; e < t.edge_count(); ++e) {
            children_[e] = t.child_edges(e);
            if (const auto& l = t.edge_leaf(e))
                leaf_slot_[e] = static_cast<std::size_t>(
                    std::lower_bound(leaves.begin(), leaves.end(), *l) - leaves.begin());
        }
    }

    void run(std::span<const std::uint32_t> leaf_values, std::span<std::uint32_t> out) const {
        for (auto e : postorder_) {
            if (leaf_slot_[e] != RootedPhyloTree::npos) {
                out[e] = leaf_values[leaf_slot_[e]];
                continue;
            }
            std::uint32_t acc = 0;
            for (auto c : children_[e])
                acc = table_[acc * order_ + out[c]];
            out[e] = acc;
        }
    }

private:
    std::size_t order_;
    std::vector<std::uint32_t> table_;
    std::vector<std::size_t> postorder_;
    std::vector<std::size_t> leaf_slot_;
    std::vector<std::vector<std::size_t>> children_;
};

} // namespace detail

/// g_e = sum of g_i over de(e), for every edge.
inline std::map<EdgeRef, GroupElement> edge_values(const RootedPhyloTree& t,
                                                   const FiniteAbelianGroup& g,
                                                   const LeafAssignment& assignment) {
    auto leaf_values = detail::assignment_indices(t, g, assignment);
    std::vector<std::uint32_t> values(t.edge_count());
    detail::EdgeValueKernel(t, g).run(leaf_values, values);
    std::map<EdgeRef, GroupElement> out;
    for (std::size_t e = 0; e < t.edge_count(); ++e)
        out.emplace(t.edges()[e], element_at(values[e], g));
    return out;
}

inline ExponentVector vertex_of(const RootedPhyloTree& t, const FiniteAbelianGroup& g,
                                const LeafAssignment& assignment) {
    auto leaf_values = detail::assignment_indices(t, g, assignment);
    std::vector<std::uint32_t> values(t.edge_count());
    detail::EdgeValueKernel(t, g).run(leaf_values, values);
    ExponentVector v{std::vector<std::uint8_t>(t.edge_count() * g.order(), 0), make_layout(t, g)};
    for (std::size_t e = 0; e < t.edge_count(); ++e)
        v.coords[e * g.order() + values[e]] = 1;
    return v;
}

inline constexpr std::size_t default_vertex_cap = std::size_t{1} << 20;

/// |G|^(L-1), or npos when that exceeds cap.
inline std::size_t vertex_count(const RootedPhyloTree& t, const FiniteAbelianGroup& g,
                                std::size_t cap = default_vertex_cap) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < t.non_root_leaves().size(); ++i) {
        if (count > cap / g.order())
            return RootedPhyloTree::npos;
        count *= g.order();
    }
    return count;
}

/// The vertex set of P_T, one vertex per leaf assignment in lexicographic
/// assignment order (first leaf most significant).
inline std::vector<ExponentVector> all_vertices(const RootedPhyloTree& t,
                                                const FiniteAbelianGroup& g,
                                                std::size_t cap = default_vertex_cap) {
    const auto count = vertex_count(t, g, cap);
    if (count == RootedPhyloTree::npos || count > cap)
        throw BudgetExceeded("tree with " + std::to_string(t.leaf_count()) + " leaves over " +
                             g.to_string() + " exceeds the vertex cap of " + std::to_string(cap) +
                             "; use a decomposition plan");
    const auto layout = make_layout(t, g);
    const detail::EdgeValueKernel kernel(t, g);
    const std::size_t leaves = t.non_root_leaves().size();
    std::vector<std::uint32_t> digits(leaves, 0), values(t.edge_count());
    std::vector<ExponentVector> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        kernel.run(digits, values);
        ExponentVector v{std::vector<std::uint8_t>(layout->dimension(), 0), layout};
        for (std::size_t e = 0; e < t.edge_count(); ++e)
            v.coords[e * g.order() + values[e]] = 1;
        out.push_back(std::move(v));
        for (std::size_t i = leaves; i-- > 0;) {
            if (++digits[i] < g.order())
                break;
            digits[i] = 0;
        }
    }
    return out;
}

/// Assignment for the k-th vertex of all_vertices.
inline LeafAssignment assignment_at(const RootedPhyloTree& t, const FiniteAbelianGroup& g,
                                    std::size_t k) {
    LeafAssignment a;
    const auto& leaves = t.non_root_leaves();
    for (std::size_t i = leaves.size(); i-- > 0;) {
        a.emplace(leaves[i], element_at(k % g.order(), g));
        k /= g.order();
    }
    return a;
}

/// Socket blocks of v: e_{g_e} for a vertex, the block itself for a sum.
inline std::vector<Multidegree> multidegree_at(const ExponentVector& v,
                                               std::span<const EdgeRef> sockets) {
    std::vector<Multidegree> out;
    out.reserve(sockets.size());
    for (const auto& s : sockets) {
        auto off = v.layout->block_offset(s);
        out.emplace_back(v.coords.begin() + static_cast<std::ptrdiff_t>(off),
                         v.coords.begin() + static_cast<std::ptrdiff_t>(off + v.layout->group_order));
    }
    return out;
}

inline ExponentVector operator+(const ExponentVector& a, const ExponentVector& b) {
    if (a.coords.size() != b.coords.size())
        throw StructuralError("exponent vectors of different length");
    ExponentVector out = a;
    for (std::size_t i = 0; i < out.coords.size(); ++i) {
        unsigned s = unsigned{a.coords[i]} + b.coords[i];
        if (s > 255)
            throw BudgetExceeded("exponent entry exceeds 255");
        out.coords[i] = static_cast<std::uint8_t>(s);
    }
    return out;
}

} // namespace phylotope
