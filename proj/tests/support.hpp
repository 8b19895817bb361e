#pragma once

#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "phylotope/phylotope.hpp"

namespace testing_support {

using namespace phylotope;

/// One representative per unrooted shape with 3..6 leaves.
inline const std::vector<std::string>& small_shapes() {
    static const std::vector<std::string> shapes{
        "(1,2,3);",
        "(1,2,3,4);",
        "((1,2),3,4);",
        "(1,2,3,4,5);",
        "((1,2),3,4,5);",
        "((1,2),3,(4,5));",
        "(1,2,3,4,5,6);",
        "((1,2),3,4,5,6);",
        "((1,2,3),4,5,6);",
        "((1,2),(3,4),5,6);",
        "(((1,2),3),4,5,6);",
        "((((1,2),3),4),5,6);",
        "((1,2),(3,4),(5,6));",
    };
    return shapes;
}

/// Clade list of the library tree, in the library's edge order, with leaves
/// renumbered by their position among the non-root leaves.
inline oracle::CladeTree clade_tree(const RootedPhyloTree& t) {
    oracle::CladeTree out;
    const auto& leaves = t.non_root_leaves();
    out.leaves = static_cast<int>(leaves.size());
    for (const auto& e : t.edges()) {
        std::vector<int> c;
        for (const auto& l : e.clade)
            c.push_back(static_cast<int>(std::find(leaves.begin(), leaves.end(), l) - leaves.begin()));
        out.clades.push_back(c);
    }
    return out;
}

inline std::vector<int> moduli_of(const FiniteAbelianGroup& g) {
    return {g.moduli().begin(), g.moduli().end()};
}

inline std::uint64_t oracle_hilbert(const RootedPhyloTree& t, const FiniteAbelianGroup& g, unsigned n) {
    return oracle::sumset(oracle::vertices(clade_tree(t), moduli_of(g)), n).size();
}

} // namespace testing_support
