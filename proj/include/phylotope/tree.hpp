#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phylotope/errors.hpp"

namespace phylotope {

/// Leaf label: either a positive integer or a socket "S<name>".
/// Integers order before sockets; sockets order by name.
struct LeafLabel {
    std::int64_t number = 0;
    std::string socket;

    static LeafLabel integer(std::int64_t n) { return LeafLabel{n, {}}; }
    static LeafLabel socket_named(std::string name) {
        if (name.empty())
            throw ParseError("socket name must be nonempty");
        return LeafLabel{0, std::move(name)};
    }

    bool is_socket() const { return !socket.empty(); }

    std::string to_string() const { return is_socket() ? "S" + socket : std::to_string(number); }

    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }

    static LeafLabel parse(std::string_view text) {
        if (text.empty())
            throw ParseError("empty leaf label");
        if (text.front() == 'S') {
            auto name = text.substr(1);
            if (name.empty() || !std::all_of(name.begin(), name.end(), is_name_char))
                throw ParseError("bad socket label '" + std::string(text) + "'");
            return socket_named(std::string(name));
        }
        std::int64_t v = 0;
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c)) || v > (std::int64_t{1} << 40))
                throw ParseError("bad leaf label '" + std::string(text) + "'");
            v = v * 10 + (c - '0');
        }
        return integer(v);
    }

    friend bool operator==(const LeafLabel& a, const LeafLabel& b) {
        return a.number == b.number && a.socket == b.socket;
    }
    friend std::strong_ordering operator<=>(const LeafLabel& a, const LeafLabel& b) {
        if (a.is_socket() != b.is_socket())
            return a.is_socket() ? std::strong_ordering::greater : std::strong_ordering::less;
        if (auto c = a.number <=> b.number; c != 0)
            return c;
        return a.socket.compare(b.socket) <=> 0;
    }
};

/// An edge addressed by its clade: the sorted set of non-root leaves below it.
struct EdgeRef {
    std::vector<LeafLabel> clade;

    EdgeRef() = default;
    explicit EdgeRef(std::vector<LeafLabel> leaves) : clade(std::move(leaves)) {
        std::sort(clade.begin(), clade.end());
        clade.erase(std::unique(clade.begin(), clade.end()), clade.end());
    }
    static EdgeRef of(std::initializer_list<std::int64_t> leaves) {
        std::vector<LeafLabel> v;
        for (auto l : leaves)
            v.push_back(LeafLabel::integer(l));
        return EdgeRef(std::move(v));
    }

    std::string to_string() const {
        std::string out = "e{";
        for (std::size_t i = 0; i < clade.size(); ++i) {
            if (i)
                out += ',';
            out += clade[i].to_string();
        }
        return out + "}";
    }

    /// Accepts "e{1,2,3}" or "{1,2,3}".
    static EdgeRef parse(std::string_view text) {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c)))
                s.push_back(c);
        std::string_view v = s;
        if (!v.empty() && v.front() == 'e')
            v.remove_prefix(1);
        if (v.size() < 2 || v.front() != '{' || v.back() != '}')
            throw ParseError("bad edge spec '" + std::string(text) + "'");
        v = v.substr(1, v.size() - 2);
        std::vector<LeafLabel> leaves;
        while (!v.empty()) {
            auto comma = v.find(',');
            leaves.push_back(LeafLabel::parse(v.substr(0, comma)));
            if (comma == std::string_view::npos)
                break;
            v.remove_prefix(comma + 1);
            if (v.empty())
                throw ParseError("bad edge spec '" + std::string(text) + "'");
        }
        if (leaves.empty())
            throw ParseError("edge clade must be nonempty: '" + std::string(text) + "'");
        return EdgeRef(std::move(leaves));
    }

    friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
    friend auto operator<=>(const EdgeRef& a, const EdgeRef& b) {
        return std::lexicographical_compare_three_way(a.clade.begin(), a.clade.end(),
                                                      b.clade.begin(), b.clade.end());
    }
};

/// Splits a list like "e{1,2},e{3}" (commas inside braces are kept).
inline std::vector<EdgeRef> parse_edge_list(std::string_view text) {
    std::vector<EdgeRef> out;
    std::size_t depth = 0, start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || (text[i] == ',' && depth == 0) || (text[i] == ';' && depth == 0)) {
            auto piece = text.substr(start, i - start);
            bool blank = std::all_of(piece.begin(), piece.end(),
                                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
            if (!blank)
                out.push_back(EdgeRef::parse(piece));
            start = i + 1;
        } else if (text[i] == '{') {
            ++depth;
        } else if (text[i] == '}') {
            if (depth == 0)
                throw ParseError("unbalanced braces in '" + std::string(text) + "'");
            --depth;
        }
    }
    if (depth)
        throw ParseError("unbalanced braces in '" + std::string(text) + "'");
    return out;
}

/// Undirected tree skeleton: adjacency plus labels on leaves.
struct TreeGraph {
    std::vector<std::vector<std::size_t>> adj;
    std::vector<std::optional<LeafLabel>> label;

    std::size_t add_vertex(std::optional<LeafLabel> l = std::nullopt) {
        adj.emplace_back();
        label.push_back(std::move(l));
        return adj.size() - 1;
    }
    void add_edge(std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
};

/// Tree rooted at a leaf with edges directed away from the root. Immutable.
///
/// Edges are indexed 0..E-1 in canonical clade order; edge i is identified by
/// its child vertex. Every labeled vertex is a leaf and every unlabeled vertex
/// has degree >= 3, so distinct edges have distinct clades.
class RootedPhyloTree {
public:
    RootedPhyloTree(TreeGraph graph, const LeafLabel& root) : graph_(std::move(graph)) {
        const std::size_t nv = graph_.adj.size();
        if (nv < 2)
            throw StructuralError("tree needs at least two leaves");
        std::size_t degree_sum = 0;
        std::set<LeafLabel> seen;
        std::optional<std::size_t> root_vertex;
        for (std::size_t v = 0; v < nv; ++v) {
            degree_sum += graph_.adj[v].size();
            if (graph_.label[v]) {
                if (graph_.adj[v].size() != 1)
                    throw StructuralError("labeled vertex " + graph_.label[v]->to_string() +
                                          " is not a leaf");
                if (!seen.insert(*graph_.label[v]).second)
                    throw StructuralError("duplicate leaf label " + graph_.label[v]->to_string());
                if (*graph_.label[v] == root)
                    root_vertex = v;
            } else if (graph_.adj[v].size() < 3) {
                throw StructuralError("unlabeled vertex of degree " +
                                      std::to_string(graph_.adj[v].size()));
            }
        }
        if (degree_sum != 2 * (nv - 1))
            throw StructuralError("graph is not a tree (edge count)");
        if (!root_vertex)
            throw StructuralError("root " + root.to_string() + " is not a leaf of the tree");
        root_ = *root_vertex;

        parent_.assign(nv, npos);
        children_.assign(nv, {});
        std::vector<std::size_t> order;
        order.reserve(nv);
        std::vector<bool> visited(nv, false);
        std::vector<std::size_t> stack{root_};
        visited[root_] = true;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (auto w : graph_.adj[v]) {
                if (visited[w])
                    continue;
                visited[w] = true;
                parent_[w] = v;
                children_[v].push_back(w);
                stack.push_back(w);
            }
        }
        if (order.size() != nv)
            throw StructuralError("graph is not connected");

        // clades bottom-up
        std::vector<std::vector<LeafLabel>> clade(nv);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto v = *it;
            if (v == root_)
                continue;
            if (graph_.label[v]) {
                clade[v] = {*graph_.label[v]};
            } else {
                for (auto c : children_[v])
                    clade[v].insert(clade[v].end(), clade[c].begin(), clade[c].end());
                std::sort(clade[v].begin(), clade[v].end());
            }
        }
        std::vector<std::size_t> edge_children;
        for (std::size_t v = 0; v < nv; ++v)
            if (v != root_)
                edge_children.push_back(v);
        std::sort(edge_children.begin(), edge_children.end(), [&](auto a, auto b) {
            return EdgeRef(clade[a]) < EdgeRef(clade[b]);
        });
        edge_child_ = edge_children;
        edge_of_vertex_.assign(nv, npos);
        for (std::size_t e = 0; e < edge_child_.size(); ++e) {
            edge_of_vertex_[edge_child_[e]] = e;
            edges_.emplace_back(clade[edge_child_[e]]);
            edge_index_.emplace(edges_.back(), e);
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (*it != root_)
                postorder_.push_back(edge_of_vertex_[*it]);
        for (std::size_t v = 0; v < nv; ++v)
            if (graph_.label[v] && v != root_)
                non_root_leaves_.push_back(*graph_.label[v]);
        std::sort(non_root_leaves_.begin(), non_root_leaves_.end());
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const TreeGraph& graph() const { return graph_; }
    std::size_t vertex_count() const { return graph_.adj.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t leaf_count() const { return non_root_leaves_.size() + 1; }
    const LeafLabel& root_label() const { return *graph_.label[root_]; }
    std::size_t root_vertex() const { return root_; }

    /// Non-root leaves in label order: the domain of a leaf assignment.
    const std::vector<LeafLabel>& non_root_leaves() const { return non_root_leaves_; }

    /// Edges in canonical clade order.
    const std::vector<EdgeRef>& edges() const { return edges_; }

    std::size_t edge_index(const EdgeRef& e) const {
        auto it = edge_index_.find(e);
        if (it == edge_index_.end())
            throw StructuralError("unknown edge " + e.to_string());
        return it->second;
    }
    bool has_edge(const EdgeRef& e) const { return edge_index_.count(e) != 0; }

    std::size_t edge_child_vertex(std::size_t e) const { return edge_child_.at(e); }
    std::size_t edge_parent_vertex(std::size_t e) const { return parent_[edge_child_.at(e)]; }

    /// Edges directly below edge e.
    std::vector<std::size_t> child_edges(std::size_t e) const {
        std::vector<std::size_t> out;
        for (auto c : children_[edge_child_.at(e)])
            out.push_back(edge_of_vertex_[c]);
        return out;
    }

    /// Leaf at the lower end of e, if e is a leaf edge.
    const std::optional<LeafLabel>& edge_leaf(std::size_t e) const {
        return graph_.label[edge_child_.at(e)];
    }

    /// The edge incident to the root leaf.
    std::size_t root_edge() const { return edge_of_vertex_[children_[root_].front()]; }

    bool is_pendant(std::size_t e) const {
        return graph_.label[edge_child_.at(e)].has_value() || edge_parent_vertex(e) == root_;
    }

    /// Edges in post-order: children before parents.
    const std::vector<std::size_t>& postorder_edges() const { return postorder_; }

    std::size_t parent_vertex(std::size_t v) const { return parent_[v]; }
    const std::vector<std::size_t>& children(std::size_t v) const { return children_[v]; }

    /// Socket name -> pendant edge index, sorted by name.
    std::vector<std::pair<std::string, std::size_t>> sockets() const {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (std::size_t v = 0; v < vertex_count(); ++v) {
            const auto& l = graph_.label[v];
            if (!l || !l->is_socket())
                continue;
            std::size_t e = v == root_ ? root_edge() : edge_of_vertex_[v];
            out.emplace_back(l->socket, e);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool is_trivalent() const {
        for (std::size_t v = 0; v < vertex_count(); ++v)
            if (!graph_.label[v] && graph_.adj[v].size() != 3)
                return false;
        return true;
    }

private:
    TreeGraph graph_;
    std::size_t root_ = 0;
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> edge_child_;
    std::vector<std::size_t> edge_of_vertex_;
    std::vector<EdgeRef> edges_;
    std::map<EdgeRef, std::size_t> edge_index_;
    std::vector<std::size_t> postorder_;
    std::vector<LeafLabel> non_root_leaves_;
};

namespace detail {

/// Removes unlabeled degree-2 vertices and compacts vertex ids.
inline TreeGraph suppress_degree_two(TreeGraph g) {
    const std::size_t nv = g.adj.size();
    std::vector<bool> removed(nv, false);
    for (std::size_t v = 0; v < nv; ++v) {
        if (g.label[v] || g.adj[v].size() != 2)
            continue;
        auto a = g.adj[v][0], b = g.adj[v][1];
        std::replace(g.adj[a].begin(), g.adj[a].end(), v, b);
        std::replace(g.adj[b].begin(), g.adj[b].end(), v, a);
        g.adj[v].clear();
        removed[v] = true;
    }
    std::vector<std::size_t> remap(nv, RootedPhyloTree::npos);
    TreeGraph out;
    for (std::size_t v = 0; v < nv; ++v)
        if (!removed[v])
            remap[v] = out.add_vertex(g.label[v]);
    for (std::size_t v = 0; v < nv; ++v)
        if (!removed[v])
            for (auto w : g.adj[v])
                out.adj[remap[v]].push_back(remap[w]);
    return out;
}

inline LeafLabel default_root(const TreeGraph& g) {
    std::optional<LeafLabel> best;
    for (const auto& l : g.label)
        if (l && !l->is_socket() && (!best || *best < *l))
            best = *l;
    if (!best)
        for (const auto& l : g.label)
            if (l && (!best || *best < *l))
                best = *l;
    if (!best)
        throw StructuralError("tree has no leaves");
    return *best;
}

} // namespace detail

/// Parses nested-parenthesis text with integer and "S<name>" leaf labels.
/// A top-level node with two children is suppressed, so "((1,2),3);" is the
/// 3-leaf tree. Default root is the largest integer label.
inline TreeGraph parse_newick_graph(std::string_view text) {
    TreeGraph g;
    std::vector<std::size_t> stack;
    std::size_t i = 0;
    bool closed = false;
    // expect_item: after '(' or ','; after an item we need ',' or ')'
    bool expect_item = true;
    auto err = [&](const std::string& what) {
        return ParseError("newick: " + what + " at offset " + std::to_string(i) + " in '" +
                          std::string(text) + "'");
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (closed) {
            if (c == ';') {
                ++i;
                while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
                    ++i;
                if (i != text.size())
                    throw err("trailing characters");
                break;
            }
            throw err("trailing characters");
        }
        if (c == '(') {
            if (!expect_item)
                throw err("unexpected '('");
            auto v = g.add_vertex();
            if (!stack.empty())
                g.add_edge(stack.back(), v);
            stack.push_back(v);
            ++i;
        } else if (c == ',') {
            if (expect_item || stack.empty())
                throw err("unexpected ','");
            expect_item = true;
            ++i;
        } else if (c == ')') {
            if (expect_item || stack.empty())
                throw err("unexpected ')'");
            stack.pop_back();
            if (stack.empty())
                closed = true;
            ++i;
        } else if (LeafLabel::is_name_char(c)) {
            if (!expect_item)
                throw err("unexpected label");
            if (stack.empty())
                throw err("tree must start with '('");
            std::size_t start = i;
            while (i < text.size() && LeafLabel::is_name_char(text[i]))
                ++i;
            auto v = g.add_vertex(LeafLabel::parse(text.substr(start, i - start)));
            g.add_edge(stack.back(), v);
            expect_item = false;
            continue;
        } else {
            throw err(std::string("unexpected character '") + c + "'");
        }
        if (c == ')')
            expect_item = false;
    }
    if (!closed)
        throw err("unbalanced parentheses");
    for (std::size_t v = 0; v < g.adj.size(); ++v)
        if (!g.label[v] && g.adj[v].size() < 2)
            throw ParseError("newick: empty or single-child clade in '" + std::string(text) + "'");
    return detail::suppress_degree_two(std::move(g));
}

inline RootedPhyloTree parse_tree(std::string_view text,
                                  std::optional<LeafLabel> root = std::nullopt) {
    auto g = parse_newick_graph(text);
    LeafLabel r = root ? *root : detail::default_root(g);
    return RootedPhyloTree(std::move(g), r);
}

inline RootedPhyloTree reroot(const RootedPhyloTree& t, const LeafLabel& root) {
    return RootedPhyloTree(t.graph(), root);
}

inline RootedPhyloTree relabel(const RootedPhyloTree& t, const LeafLabel& from, const LeafLabel& to) {
    TreeGraph g = t.graph();
    bool found = false;
    for (auto& l : g.label)
        if (l && *l == from) {
            l = to;
            found = true;
        }
    if (!found)
        throw StructuralError("no leaf labeled " + from.to_string());
    LeafLabel root = t.root_label() == from ? to : t.root_label();
    return RootedPhyloTree(std::move(g), root);
}

/// de(e): non-root leaves reachable from e along directed paths.
inline std::vector<LeafLabel> descendants(const RootedPhyloTree& t, const EdgeRef& e) {
    std::vector<LeafLabel> out;
    std::vector<std::size_t> stack{t.edge_child_vertex(t.edge_index(e))};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (const auto& l = t.graph().label[v])
            out.push_back(*l);
        for (auto c : t.children(v))
            stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// e1 <= e2 iff e1 == e2 or e1 lies on a directed path below e2.
inline bool edge_order_leq(const RootedPhyloTree& t, const EdgeRef& e1, const EdgeRef& e2) {
    auto v = t.edge_child_vertex(t.edge_index(e1));
    const auto target = t.edge_child_vertex(t.edge_index(e2));
    while (v != t.root_vertex()) {
        if (v == target)
            return true;
        v = t.parent_vertex(v);
    }
    return false;
}

/// Newick serialization invariant under child order: children sorted by the
/// minimum label of their clade, root leaf last at the top level.
inline std::string canonical_form(const RootedPhyloTree& t) {
    const auto& g = t.graph();
    std::vector<LeafLabel> min_label(t.vertex_count());
    std::vector<std::string> text(t.vertex_count());
    std::vector<std::size_t> order;
    std::vector<std::size_t> stack{t.root_vertex()};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto c : t.children(v))
            stack.push_back(c);
    }
    auto join_children = [&](std::size_t v) {
        auto kids = t.children(v);
        std::sort(kids.begin(), kids.end(),
                  [&](auto a, auto b) { return min_label[a] < min_label[b]; });
        std::string s;
        for (std::size_t k = 0; k < kids.size(); ++k) {
            if (k)
                s += ',';
            s += text[kids[k]];
        }
        return std::make_pair(s, min_label[kids.front()]);
    };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto v = *it;
        if (v == t.root_vertex())
            continue;
        if (g.label[v]) {
            text[v] = g.label[v]->to_string();
            min_label[v] = *g.label[v];
        } else {
            auto [s, m] = join_children(v);
            text[v] = "(" + s + ")";
            min_label[v] = m;
        }
    }
    auto top = t.children(t.root_vertex()).front();
    std::string inner = g.label[top] ? text[top] : join_children(top).first;
    return "(" + inner + "," + t.root_label().to_string() + ");";
}

/// Splits T at interior edge e into (T_plus, T_minus). T_minus holds every
/// edge at or below e and is rooted at the socket standing in for e's tail;
/// T_plus holds the rest plus e, with the subtree below e replaced by the
/// socket leaf.
inline std::pair<RootedPhyloTree, RootedPhyloTree>
split_at_edge(const RootedPhyloTree& t, const EdgeRef& e, const std::string& socket_name = "e") {
    const auto idx = t.edge_index(e);
    if (t.is_pendant(idx))
        throw StructuralError("edge " + e.to_string() + " is not an interior edge");
    const auto socket = LeafLabel::socket_named(socket_name);
    for (const auto& l : t.graph().label)
        if (l && *l == socket)
            throw StructuralError("socket name '" + socket_name + "' already used in tree");

    const auto child = t.edge_child_vertex(idx);
    const auto parent = t.edge_parent_vertex(idx);
    std::vector<bool> below(t.vertex_count(), false);
    std::vector<std::size_t> stack{child};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        below[v] = true;
        for (auto c : t.children(v))
            stack.push_back(c);
    }
    const auto& g = t.graph();
    auto build = [&](bool keep_below) {
        TreeGraph out;
        std::vector<std::size_t> remap(t.vertex_count(), RootedPhyloTree::npos);
        for (std::size_t v = 0; v < t.vertex_count(); ++v)
            if (below[v] == keep_below)
                remap[v] = out.add_vertex(g.label[v]);
        for (std::size_t v = 0; v < t.vertex_count(); ++v)
            if (below[v] == keep_below)
                for (auto w : g.adj[v])
                    if (below[w] == keep_below)
                        out.adj[remap[v]].push_back(remap[w]);
        auto s = out.add_vertex(socket);
        out.add_edge(s, remap[keep_below ? child : parent]);
        return out;
    };
    RootedPhyloTree minus(build(true), socket);
    RootedPhyloTree plus(build(false), t.root_label());
    return {std::move(plus), std::move(minus)};
}

/// Identifies socket leaves shared by two components. Each shared socket must
/// be the root of exactly one of its two components, and exactly one
/// component may be rooted elsewhere; that root becomes the glued root.
/// Unshared sockets remain socket leaves.
inline RootedPhyloTree glue_trees(const std::vector<RootedPhyloTree>& parts) {
    if (parts.empty())
        throw StructuralError("nothing to glue");
    struct Occurrence {
        std::size_t part;
        std::size_t vertex;
        bool is_root;
    };
    std::map<std::string, std::vector<Occurrence>> occ;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const auto& g = parts[p].graph();
        for (std::size_t v = 0; v < g.adj.size(); ++v)
            if (g.label[v] && g.label[v]->is_socket())
                occ[g.label[v]->socket].push_back({p, v, v == parts[p].root_vertex()});
    }
    std::vector<std::size_t> uf(parts.size());
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](std::size_t x) {
        while (uf[x] != x)
            x = uf[x] = uf[uf[x]];
        return x;
    };
    std::vector<bool> rooted_at_shared(parts.size(), false);
    for (const auto& [name, list] : occ) {
        if (list.size() > 2)
            throw StructuralError("socket '" + name + "' occurs in more than two components");
        if (list.size() != 2)
            continue;
        if (list[0].part == list[1].part)
            throw StructuralError("socket '" + name + "' occurs twice in one component");
        if (list[0].is_root == list[1].is_root)
            throw StructuralError("socket '" + name +
                                  "' must be the root of exactly one of its two components");
        auto a = find(list[0].part), b = find(list[1].part);
        if (a == b)
            throw StructuralError("gluing graph has a cycle (socket '" + name + "')");
        uf[a] = b;
        rooted_at_shared[list[0].is_root ? list[0].part : list[1].part] = true;
    }
    for (std::size_t p = 1; p < parts.size(); ++p)
        if (find(p) != find(0))
            throw StructuralError("gluing graph is not connected");
    std::optional<LeafLabel> root;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (rooted_at_shared[p])
            continue;
        if (root)
            throw StructuralError("more than one component is rooted outside the shared sockets");
        root = parts[p].root_label();
    }
    if (!root)
        throw StructuralError("no component carries the glued root");

    TreeGraph out;
    std::vector<std::vector<std::size_t>> remap(parts.size());
    auto is_shared = [&](const std::optional<LeafLabel>& l) {
        return l && l->is_socket() && occ[l->socket].size() == 2;
    };
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const auto& g = parts[p].graph();
        remap[p].assign(g.adj.size(), RootedPhyloTree::npos);
        for (std::size_t v = 0; v < g.adj.size(); ++v)
            if (!is_shared(g.label[v]))
                remap[p][v] = out.add_vertex(g.label[v]);
        for (std::size_t v = 0; v < g.adj.size(); ++v)
            if (!is_shared(g.label[v]))
                for (auto w : g.adj[v])
                    if (!is_shared(g.label[w]))
                        out.adj[remap[p][v]].push_back(remap[p][w]);
    }
    for (const auto& [name, list] : occ) {
        if (list.size() != 2)
            continue;
        auto nb = [&](const Occurrence& o) {
            auto v = remap[o.part][parts[o.part].graph().adj[o.vertex].front()];
            if (v == RootedPhyloTree::npos)
                throw StructuralError("socket '" + name + "' is adjacent to another shared socket");
            return v;
        };
        out.add_edge(nb(list[0]), nb(list[1]));
    }
    return RootedPhyloTree(std::move(out), *root);
}

} // namespace phylotope
