#include <gtest/gtest.h>

#include <filesystem>

#include "phylotope/io.hpp"

using namespace phylotope;

#ifndef PHYLOTOPE_PLAN_DIR
#define PHYLOTOPE_PLAN_DIR "plans"
#endif

TEST(Io, FiberTableRoundTrip) {
    auto t = parse_tree("((1,2),(3,4));");
    std::vector<EdgeRef> sockets{EdgeRef::of({1}), EdgeRef::of({1, 2})};
    auto table = fiber_table(t, FiniteAbelianGroup::parse("Z2xZ2"), 2, std::span<const EdgeRef>(sockets));
    auto j = to_json(table);
    EXPECT_EQ(j["meta"]["sockets"][1], "e{1,2}");
    EXPECT_TRUE(j["cells"][0]["count"].is_string());
    EXPECT_EQ(fiber_table_from_json(parse_json_text(j.dump(), "t")), table);
}

TEST(Io, BigCountsSurviveAsDecimalStrings) {
    FiberCountTable t{{"(1,2,3);", "3", "Z2", 1, {"a"}}, {}};
    t.cells[{{1, 0}}] = mpz_class("123456789012345678901234567890");
    auto back = fiber_table_from_json(to_json(t));
    EXPECT_EQ(back.at({{1, 0}}).get_str(), "123456789012345678901234567890");
}

TEST(Io, MalformedInputs) {
    EXPECT_THROW(parse_json_text("{", "x"), ParseError);
    EXPECT_THROW(fiber_table_from_json(json::parse(R"({"meta":{}})")), ParseError);
    EXPECT_THROW(fiber_table_from_json(json::parse(
                     R"({"meta":{"tree":"t","group":"Z2","n":1,"sockets":["a"]},"cells":[{"key":[[1,0]],"count":"-3"}]})")),
                 ParseError);
    EXPECT_THROW(plan_from_json(json::parse(R"({"components":[]})")), ParseError);
    EXPECT_THROW(read_text_file("/nonexistent/plan.json"), ParseError);
}

TEST(Io, PlanSocketsByLeafOrClade) {
    auto plan = plan_from_json(json::parse(R"({"components":[
        {"name":"upper","newick":"((1,4),(5,6));","root":6,"sockets":{"e":1}},
        {"name":"lower","newick":"(((1,2),3),9);","root":9,"sockets":{"e":"e{1,2,3}"}}]})"));
    ASSERT_EQ(plan.components.size(), 2u);
    EXPECT_EQ(plan.components[1].tree.root_label(), LeafLabel::socket_named("e"));
    EXPECT_EQ(canonical_form(glue(plan)), canonical_form(parse_tree("((((1,2),3),4),5,6);")));
}

TEST(Io, BundledPlansGlueToTheTwoShapes) {
    auto cat = load_plan(std::filesystem::path(PHYLOTOPE_PLAN_DIR) / "caterpillar6.json");
    auto snow = load_plan(std::filesystem::path(PHYLOTOPE_PLAN_DIR) / "snowflake6.json");
    EXPECT_EQ(canonical_form(glue(cat)), canonical_form(parse_tree("((((1,2),3),4),5,6);")));
    EXPECT_EQ(canonical_form(glue(snow)), canonical_form(parse_tree("((1,2),(3,4),(5,6));")));
    EXPECT_TRUE(glue(cat).is_trivalent());
    EXPECT_TRUE(glue(snow).is_trivalent());
    EXPECT_EQ(cat.socket_owners().at("e").size(), 2u);
    EXPECT_EQ(snow.socket_owners().size(), 2u);
}
