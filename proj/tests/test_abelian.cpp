#include <gtest/gtest.h>

#include <set>

#include "phylotope/abelian.hpp"

using namespace phylotope;

TEST(Abelian, ParseAndPrint) {
    auto g = FiniteAbelianGroup::parse("Z2xZ2");
    EXPECT_EQ(g.order(), 4u);
    EXPECT_EQ(g.rank(), 2u);
    EXPECT_EQ(g.to_string(), "Z2xZ2");
    EXPECT_EQ(FiniteAbelianGroup::parse(" z2 X z3 ").to_string(), "Z2xZ3");
    EXPECT_EQ(FiniteAbelianGroup::parse("Z5").order(), 5u);
    EXPECT_THROW(FiniteAbelianGroup::parse("Z1"), ParseError);
    EXPECT_THROW(FiniteAbelianGroup::parse("Z"), ParseError);
    EXPECT_THROW(FiniteAbelianGroup::parse("Z2x"), ParseError);
    EXPECT_THROW(FiniteAbelianGroup::parse("Q8"), ParseError);
    EXPECT_THROW(FiniteAbelianGroup::parse(""), ParseError);
}

TEST(Abelian, IndexRoundTripAndMixedRadix) {
    auto g = FiniteAbelianGroup::parse("Z2xZ3");
    for (std::size_t i = 0; i < g.order(); ++i)
        EXPECT_EQ(index_of(element_at(i, g), g), i);
    // first factor most significant
    EXPECT_EQ(index_of(GroupElement{{1, 0}}, g), 3u);
    EXPECT_EQ(to_string(element_at(5, g)), "(1,2)");
}

TEST(Abelian, GroupAxioms) {
    for (auto text : {"Z2", "Z3", "Z2xZ2", "Z4", "Z2xZ3", "Z2xZ2xZ2"}) {
        auto g = FiniteAbelianGroup::parse(text);
        auto all = enumerate(g);
        auto zero = identity(g);
        for (const auto& a : all) {
            EXPECT_EQ(add(a, zero, g), a);
            EXPECT_EQ(add(a, negate(a, g), g), zero);
            for (const auto& b : all) {
                EXPECT_EQ(add(a, b, g), add(b, a, g));
                for (const auto& c : all)
                    EXPECT_EQ(add(add(a, b, g), c, g), add(a, add(b, c, g), g));
            }
        }
    }
}

TEST(Abelian, AdditionTableMatchesAdd) {
    auto g = FiniteAbelianGroup::parse("Z2xZ3");
    auto table = addition_table(g);
    for (std::size_t i = 0; i < g.order(); ++i)
        for (std::size_t j = 0; j < g.order(); ++j)
            EXPECT_EQ(table[i * g.order() + j], index_of(add(element_at(i, g), element_at(j, g), g), g));
}

TEST(Abelian, ArityMismatch) {
    auto g = FiniteAbelianGroup::parse("Z2xZ2");
    EXPECT_THROW(add(GroupElement{{1}}, GroupElement{{1, 0}}, g), StructuralError);
    EXPECT_THROW(parse_element("(1,0,1)", g), ParseError);
    EXPECT_EQ(parse_element("(1,1)", g), (GroupElement{{1, 1}}));
}

TEST(Abelian, Automorphisms) {
    // |Aut(Z2xZ2)| = |GL(2,2)| = 6, |Aut(Z4)| = 2, |Aut(Z5)| = 4, |Aut(Z2xZ4)| = 8
    EXPECT_EQ(automorphisms(FiniteAbelianGroup::parse("Z2xZ2")).size(), 6u);
    EXPECT_EQ(automorphisms(FiniteAbelianGroup::parse("Z4")).size(), 2u);
    EXPECT_EQ(automorphisms(FiniteAbelianGroup::parse("Z5")).size(), 4u);
    EXPECT_EQ(automorphisms(FiniteAbelianGroup::parse("Z2xZ4")).size(), 8u);
    auto g = FiniteAbelianGroup::parse("Z2xZ2");
    for (const auto& perm : automorphisms(g)) {
        EXPECT_EQ(perm[0], 0u);
        EXPECT_EQ(std::set<std::uint32_t>(perm.begin(), perm.end()).size(), g.order());
        for (std::size_t a = 0; a < g.order(); ++a)
            for (std::size_t b = 0; b < g.order(); ++b)
                EXPECT_EQ(perm[index_of(add(element_at(a, g), element_at(b, g), g), g)],
                          index_of(add(element_at(perm[a], g), element_at(perm[b], g), g), g));
    }
}
