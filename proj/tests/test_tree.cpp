#include <gtest/gtest.h>

#include "phylotope/tree.hpp"
#include "support.hpp"

using namespace phylotope;

TEST(Tree, LabelsAndEdges) {
    EXPECT_EQ(LeafLabel::parse("12").to_string(), "12");
    EXPECT_EQ(LeafLabel::parse("Se1").to_string(), "Se1");
    EXPECT_TRUE(LeafLabel::parse("Se1").is_socket());
    EXPECT_LT(LeafLabel::integer(99), LeafLabel::socket_named("a"));
    EXPECT_EQ(EdgeRef::parse("e{3,1,2}").to_string(), "e{1,2,3}");
    EXPECT_EQ(EdgeRef::parse("{1}"), EdgeRef::of({1}));
    auto list = parse_edge_list("e{1},e{1,2,3}");
    ASSERT_EQ(list.size(), 2u);
    EXPECT_EQ(list[1], EdgeRef::of({1, 2, 3}));
    EXPECT_THROW(EdgeRef::parse("e{1,2"), ParseError);
}

TEST(Tree, QuartetStructure) {
    auto t = parse_tree("((1,2),(3,4));");
    EXPECT_EQ(t.root_label(), LeafLabel::integer(4));
    EXPECT_EQ(t.leaf_count(), 4u);
    EXPECT_EQ(t.edge_count(), 5u);
    EXPECT_EQ(t.vertex_count(), 6u);
    EXPECT_TRUE(t.is_trivalent());
    EXPECT_TRUE(t.has_edge(EdgeRef::of({1, 2})));
    EXPECT_TRUE(t.has_edge(EdgeRef::of({1, 2, 3})));
    EXPECT_FALSE(t.has_edge(EdgeRef::of({3, 4})));
    EXPECT_FALSE(t.is_pendant(t.edge_index(EdgeRef::of({1, 2}))));
    EXPECT_TRUE(t.is_pendant(t.edge_index(EdgeRef::of({3}))));
    EXPECT_EQ(t.root_edge(), t.edge_index(EdgeRef::of({1, 2, 3})));
    EXPECT_THROW(t.edge_index(EdgeRef::of({2, 3})), StructuralError);
}

TEST(Tree, EdgeOrderAndDescendants) {
    auto t = parse_tree("(((1,2),3),4,5);", LeafLabel::integer(5));
    EXPECT_TRUE(edge_order_leq(t, EdgeRef::of({1}), EdgeRef::of({1, 2, 3})));
    EXPECT_TRUE(edge_order_leq(t, EdgeRef::of({1, 2}), EdgeRef::of({1, 2})));
    EXPECT_FALSE(edge_order_leq(t, EdgeRef::of({1, 2, 3}), EdgeRef::of({1})));
    EXPECT_FALSE(edge_order_leq(t, EdgeRef::of({4}), EdgeRef::of({1, 2, 3})));
    auto d = descendants(t, EdgeRef::of({1, 2, 3}));
    EXPECT_EQ(d, (std::vector<LeafLabel>{LeafLabel::integer(1), LeafLabel::integer(2),
                                         LeafLabel::integer(3)}));
    auto r = reroot(t, LeafLabel::integer(1));
    EXPECT_TRUE(r.has_edge(EdgeRef::of({4, 5})));
    EXPECT_EQ(r.edge_count(), t.edge_count());
}

TEST(Tree, CanonicalFormIsLayoutIndependent) {
    EXPECT_EQ(canonical_form(parse_tree("((1,2),3);")), "(1,2,3);");
    EXPECT_EQ(canonical_form(parse_tree("((2,1),(4,3));")), canonical_form(parse_tree("((3,4),(1,2));")));
    EXPECT_EQ(canonical_form(parse_tree("(4,(3,(2,1)));", LeafLabel::integer(4))),
              canonical_form(parse_tree("(((1,2),3),4);")));
    EXPECT_NE(canonical_form(parse_tree("((1,2),(3,4));")), canonical_form(parse_tree("((1,3),(2,4));")));
}

TEST(Tree, ParseErrors) {
    EXPECT_THROW(parse_tree("((1,2),3"), ParseError);
    EXPECT_THROW(parse_tree("((1,2),3));"), ParseError);
    EXPECT_THROW(parse_tree("((1,1),3);"), StructuralError);
    EXPECT_THROW(parse_tree("(1);"), ParseError);
    EXPECT_EQ(parse_tree("(1,2);").edge_count(), 1u);
    EXPECT_THROW(parse_tree("((1,2),3);", LeafLabel::integer(9)), StructuralError);
    EXPECT_THROW(parse_tree("((1,x),3);"), ParseError);
    // optional semicolon and whitespace
    EXPECT_EQ(parse_tree(" ( (1, 2), 3 ) ").edge_count(), 3u);
}

TEST(Tree, SplitAndGlueRoundTrip) {
    auto t = parse_tree("((((1,2),3),4),5,6);", LeafLabel::integer(6));
    auto [plus, minus] = split_at_edge(t, EdgeRef::of({1, 2, 3}), "e");
    EXPECT_EQ(minus.root_label(), LeafLabel::socket_named("e"));
    EXPECT_EQ(plus.root_label(), LeafLabel::integer(6));
    EXPECT_EQ(plus.leaf_count() + minus.leaf_count(), t.leaf_count() + 2);
    auto glued = glue_trees({plus, minus});
    EXPECT_EQ(canonical_form(glued), canonical_form(t));
    EXPECT_EQ(glued.root_label(), t.root_label());
    EXPECT_THROW(split_at_edge(t, EdgeRef::of({1}), "e"), StructuralError);
    EXPECT_THROW(split_at_edge(plus, EdgeRef::of({4, 5}), "e"), StructuralError);
}

TEST(Tree, GlueRejectsBadPlans) {
    auto a = parse_tree("((Se,4),(5,6));", LeafLabel::integer(6));
    auto b = parse_tree("(((1,2),3),Se);", LeafLabel::socket_named("e"));
    EXPECT_NO_THROW(glue_trees({a, b}));
    // both components rooted away from the shared socket
    auto b_bad = parse_tree("(((1,2),3),Se);", LeafLabel::integer(3));
    EXPECT_THROW(glue_trees({a, b_bad}), StructuralError);
    // disconnected
    auto c = parse_tree("((7,8),Sz);", LeafLabel::socket_named("z"));
    EXPECT_THROW(glue_trees({a, b, c}), StructuralError);
}

TEST(Tree, SplittingEveryInteriorEdgeOfEveryShape) {
    for (const auto& s : testing_support::small_shapes()) {
        auto t = parse_tree(s);
        for (std::size_t e = 0; e < t.edge_count(); ++e) {
            if (t.is_pendant(e))
                continue;
            auto [plus, minus] = split_at_edge(t, t.edges()[e], "cut");
            EXPECT_EQ(canonical_form(glue_trees({plus, minus})), canonical_form(t)) << s;
        }
    }
}
