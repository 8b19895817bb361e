#include <gtest/gtest.h>

#include <filesystem>

#include "phylotope/sumset.hpp"
#include "support.hpp"

using namespace phylotope;

namespace {

std::vector<std::vector<std::uint8_t>> collect(const PackedVectors& p, unsigned n, const SumsetOptions& opt) {
    std::vector<std::vector<std::uint8_t>> out;
    for_each_distinct_sum(p, n, opt, [&](std::span<const std::uint8_t> s) { out.emplace_back(s.begin(), s.end()); });
    return out;
}

} // namespace

TEST(Sumset, MultisetCount) {
    EXPECT_EQ(multiset_count(16, 2), 136);
    EXPECT_EQ(multiset_count(64, 3), 45760);
    EXPECT_EQ(multiset_count(5, 0), 1);
}

TEST(Sumset, AgreesWithIteratedSetAddition) {
    for (const auto& s : testing_support::small_shapes()) {
        auto t = parse_tree(s);
        for (auto gtext : {"Z2", "Z2xZ2", "Z3"}) {
            auto g = FiniteAbelianGroup::parse(gtext);
            const unsigned max_n = t.leaf_count() <= 4 ? 3 : (g.order() == 2 ? 3 : 1);
            if (t.leaf_count() == 6 && g.order() > 2)
                continue;
            auto verts = PackedVectors::from(all_vertices(t, g));
            for (unsigned n = 0; n <= max_n; ++n)
                EXPECT_EQ(count_distinct_sums(verts, n, {}), testing_support::oracle_hilbert(t, g, n))
                    << s << " " << gtext << " n=" << n;
        }
    }
}

TEST(Sumset, SortedAndUnique) {
    auto t = parse_tree("((1,2),(3,4));");
    auto p = PackedVectors::from(all_vertices(t, FiniteAbelianGroup::parse("Z2xZ2")));
    auto sums = collect(p, 2, {});
    for (std::size_t i = 1; i < sums.size(); ++i)
        EXPECT_LT(sums[i - 1], sums[i]);
}

TEST(Sumset, DeterministicAcrossThreadCounts) {
    auto t = parse_tree("((1,2),(3,4));");
    auto p = PackedVectors::from(all_vertices(t, FiniteAbelianGroup::parse("Z2xZ2")));
    SumsetOptions one;
    auto ref = collect(p, 3, one);
    for (unsigned k : {2u, 3u, 4u, 7u}) {
        SumsetOptions opt;
        opt.threads = k;
        EXPECT_EQ(collect(p, 3, opt), ref) << "threads=" << k;
    }
}

TEST(Sumset, SpillPathMatchesInMemory) {
    auto t = parse_tree("((1,2),(3,4));");
    auto p = PackedVectors::from(all_vertices(t, FiniteAbelianGroup::parse("Z2xZ2")));
    auto ref = collect(p, 3, {});
    auto dir = std::filesystem::temp_directory_path() / "phylotope-spill-test";
    std::filesystem::create_directories(dir);
    for (unsigned k : {1u, 3u}) {
        SumsetOptions opt;
        opt.memory_cap_bytes = 4096;
        opt.threads = k;
        opt.spill_directory = dir;
        EXPECT_EQ(collect(p, 3, opt), ref);
    }
    // spill files are removed once merged
    EXPECT_TRUE(std::filesystem::is_empty(dir));
    std::filesystem::remove_all(dir);
}

TEST(Sumset, Budgets) {
    auto t = parse_tree("((1,2),(3,4));");
    auto p = PackedVectors::from(all_vertices(t, FiniteAbelianGroup::parse("Z2xZ2")));
    SumsetOptions opt;
    opt.multiset_cap = 45759;
    EXPECT_THROW(count_distinct_sums(p, 3, opt), BudgetExceeded);
    opt.multiset_cap = 45760;
    EXPECT_NO_THROW(count_distinct_sums(p, 3, opt));
    EXPECT_THROW(count_distinct_sums(p, 256, {}), BudgetExceeded);
}

TEST(Sumset, MonotoneInDegree) {
    auto t = parse_tree("(((1,2),3),4,5);");
    auto p = PackedVectors::from(all_vertices(t, FiniteAbelianGroup::parse("Z2")));
    std::uint64_t prev = 0;
    for (unsigned n = 0; n <= 5; ++n) {
        auto c = count_distinct_sums(p, n, {});
        EXPECT_GE(c, prev);
        prev = c;
    }
}
