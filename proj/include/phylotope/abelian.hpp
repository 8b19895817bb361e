#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phylotope/errors.hpp"

namespace phylotope {

/// Element of Z_{m1} x ... x Z_{mk}, stored as reduced residues.
struct GroupElement {
    std::vector<std::uint32_t> residues;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// Finite abelian group kept in the product form the user wrote down.
/// Z2xZ2 and Z4 are different configurations even when isomorphic
/// factorizations exist; element order is lexicographic on residue tuples.
class FiniteAbelianGroup {
public:
    explicit FiniteAbelianGroup(std::vector<std::uint32_t> moduli)
        : moduli_(std::move(moduli)) {
        if (moduli_.empty())
            throw StructuralError("group needs at least one cyclic factor");
        order_ = 1;
        for (auto m : moduli_) {
            if (m < 2)
                throw StructuralError("cyclic factor order must be >= 2, got " +
                                      std::to_string(m));
            order_ *= m;
            if (order_ > (std::size_t{1} << 24))
                throw StructuralError("group order too large");
        }
    }

    /// Parses "Z2xZ2", "z3", "Z2 x Z4" (case-insensitive).
    static FiniteAbelianGroup parse(std::string_view text) {
        std::vector<std::uint32_t> moduli;
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c)))
                s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        std::size_t i = 0;
        while (true) {
            if (i >= s.size() || s[i] != 'z')
                throw ParseError("bad group spec '" + std::string(text) + "'");
            ++i;
            std::size_t start = i;
            std::uint64_t m = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                m = m * 10 + static_cast<std::uint64_t>(s[i] - '0');
                if (m > (1u << 24))
                    throw ParseError("cyclic factor too large in '" + std::string(text) + "'");
                ++i;
            }
            if (i == start)
                throw ParseError("bad group spec '" + std::string(text) + "'");
            moduli.push_back(static_cast<std::uint32_t>(m));
            if (i == s.size())
                break;
            if (s[i] != 'x')
                throw ParseError("bad group spec '" + std::string(text) + "'");
            ++i;
        }
        try {
            return FiniteAbelianGroup(std::move(moduli));
        } catch (const StructuralError& e) {
            throw ParseError(e.what());
        }
    }

    const std::vector<std::uint32_t>& moduli() const { return moduli_; }
    std::size_t order() const { return order_; }
    std::size_t rank() const { return moduli_.size(); }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < moduli_.size(); ++i) {
            if (i)
                out += 'x';
            out += 'Z' + std::to_string(moduli_[i]);
        }
        return out;
    }

    bool contains(const GroupElement& g) const {
        if (g.residues.size() != moduli_.size())
            return false;
        for (std::size_t i = 0; i < moduli_.size(); ++i)
            if (g.residues[i] >= moduli_[i])
                return false;
        return true;
    }

    friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
        return a.moduli_ == b.moduli_;
    }

private:
    std::vector<std::uint32_t> moduli_;
    std::size_t order_ = 1;
};

namespace detail {
inline void check_member(const GroupElement& g, const FiniteAbelianGroup& group) {
    if (g.residues.size() != group.rank())
        throw StructuralError("element arity " + std::to_string(g.residues.size()) +
                              " does not match group " + group.to_string());
    if (!group.contains(g))
        throw StructuralError("element residues not reduced for " + group.to_string());
}
} // namespace detail

inline GroupElement identity(const FiniteAbelianGroup& group) {
    return GroupElement{std::vector<std::uint32_t>(group.rank(), 0)};
}

inline GroupElement add(const GroupElement& a, const GroupElement& b,
                        const FiniteAbelianGroup& group) {
    detail::check_member(a, group);
    detail::check_member(b, group);
    GroupElement out = a;
    for (std::size_t i = 0; i < out.residues.size(); ++i)
        out.residues[i] = (a.residues[i] + b.residues[i]) % group.moduli()[i];
    return out;
}

inline GroupElement negate(const GroupElement& a, const FiniteAbelianGroup& group) {
    detail::check_member(a, group);
    GroupElement out = a;
    for (std::size_t i = 0; i < out.residues.size(); ++i)
        out.residues[i] = (group.moduli()[i] - a.residues[i]) % group.moduli()[i];
    return out;
}

/// Position of g in the lexicographic enumeration (mixed radix, first factor
/// most significant).
inline std::size_t index_of(const GroupElement& g, const FiniteAbelianGroup& group) {
    detail::check_member(g, group);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.residues.size(); ++i)
        idx = idx * group.moduli()[i] + g.residues[i];
    return idx;
}

inline GroupElement element_at(std::size_t index, const FiniteAbelianGroup& group) {
    if (index >= group.order())
        throw StructuralError("element index " + std::to_string(index) +
                              " out of range for " + group.to_string());
    GroupElement g{std::vector<std::uint32_t>(group.rank())};
    for (std::size_t i = group.rank(); i-- > 0;) {
        g.residues[i] = static_cast<std::uint32_t>(index % group.moduli()[i]);
        index /= group.moduli()[i];
    }
    return g;
}

inline std::vector<GroupElement> enumerate(const FiniteAbelianGroup& group) {
    std::vector<GroupElement> out;
    out.reserve(group.order());
    for (std::size_t i = 0; i < group.order(); ++i)
        out.push_back(element_at(i, group));
    return out;
}

/// Addition table on element indices: table[i * |G| + j] = index(e_i + e_j).
inline std::vector<std::uint32_t> addition_table(const FiniteAbelianGroup& group) {
    const auto elems = enumerate(group);
    const std::size_t n = group.order();
    std::vector<std::uint32_t> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            table[i * n + j] =
                static_cast<std::uint32_t>(index_of(add(elems[i], elems[j], group), group));
    return table;
}

inline std::string to_string(const GroupElement& g) {
    std::string out = "(";
    for (std::size_t i = 0; i < g.residues.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(g.residues[i]);
    }
    return out + ")";
}

/// Parses "(1,0)" against the given group.
inline GroupElement parse_element(std::string_view text, const FiniteAbelianGroup& group) {
    GroupElement g;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    skip();
    if (i >= text.size() || text[i] != '(')
        throw ParseError("bad element '" + std::string(text) + "'");
    ++i;
    while (true) {
        skip();
        std::size_t start = i;
        std::uint64_t v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) &&
               v < (1u << 30))
            v = v * 10 + static_cast<std::uint64_t>(text[i++] - '0');
        if (i == start)
            throw ParseError("bad element '" + std::string(text) + "'");
        g.residues.push_back(static_cast<std::uint32_t>(v));
        skip();
        if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
        }
        if (i < text.size() && text[i] == ')') {
            ++i;
            break;
        }
        throw ParseError("bad element '" + std::string(text) + "'");
    }
    if (!group.contains(g))
        throw ParseError("element '" + std::string(text) + "' not in " + group.to_string());
    return g;
}

/// All automorphisms as permutations of element indices (perm[i] = image of
/// element i). Brute force over generator images; intended for small groups.
inline std::vector<std::vector<std::uint32_t>> automorphisms(const FiniteAbelianGroup& group) {
    const std::size_t n = group.order();
    const std::size_t k = group.rank();
    std::size_t candidates = 1;
    for (std::size_t i = 0; i < k; ++i) {
        candidates *= n;
        if (candidates > (std::size_t{1} << 22))
            throw BudgetExceeded("automorphism search too large for " + group.to_string());
    }
    const auto elems = enumerate(group);
    const auto table = addition_table(group);

    // scaled[g][c] = index of c*g
    auto multiple = [&](std::uint32_t g, std::uint32_t c) {
        std::uint32_t acc = 0;
        for (std::uint32_t t = 0; t < c; ++t)
            acc = table[acc * n + g];
        return acc;
    };

    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> images(k, 0);
    for (std::size_t code = 0; code < candidates; ++code) {
        std::size_t c = code;
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
            images[i] = static_cast<std::uint32_t>(c % n);
            c /= n;
            if (multiple(images[i], group.moduli()[i]) != 0) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        std::vector<std::uint32_t> perm(n);
        std::vector<bool> hit(n, false);
        for (std::size_t e = 0; e < n && ok; ++e) {
            std::uint32_t acc = 0;
            for (std::size_t i = 0; i < k; ++i)
                acc = table[acc * n + multiple(images[i], elems[e].residues[i])];
            if (hit[acc])
                ok = false;
            else
                hit[acc] = true;
            perm[e] = acc;
        }
        if (ok)
            out.push_back(std::move(perm));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace phylotope
