#include "sld/edge_list_io.hpp"

#include <sstream>

#include <gtest/gtest.h>

namespace sld {
namespace {

TEST(EdgeListIoTest, ParsesTabsCommentsAndRatings) {
  std::istringstream in(
      "# header\n"
      "alice\tbook1\t5\n"
      "bob\tbook1\n"
      "\n"
      "alice\tbook2\t3\n"
      "alice\tbook1\t4\n");
  IdMap users, items;
  ReadStats stats;
  auto edges = read_edges(in, users, items, {}, stats);
  EXPECT_EQ(edges.size(), 4u);
  EXPECT_EQ(stats.comments, 1u);
  EXPECT_EQ(stats.blank, 1u);
  EXPECT_EQ(deduplicate(edges), 1u);
  ASSERT_EQ(edges.size(), 3u);
  EXPECT_EQ(users.external(0), "alice");
  EXPECT_EQ(users.external(1), "bob");
  EXPECT_EQ(items.external(1), "book2");
  EXPECT_EQ(edges[1], (Edge{1, 0}));
}

TEST(EdgeListIoTest, WhitespaceFallbackAndQuotedRatings) {
  std::istringstream in("1 10 \"7\"\n2 10 \"0\"\n");
  IdMap users, items;
  ReadStats stats;
  ReadOptions opts;
  opts.min_rating = 1.0;
  const auto edges = read_edges(in, users, items, opts, stats);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(stats.below_threshold, 1u);
  EXPECT_EQ(users.external(edges[0].user), "1");
}

TEST(EdgeListIoTest, MalformedLineIsDataError) {
  std::istringstream in("a\tb\nonly-one-field\n");
  IdMap users, items;
  ReadStats stats;
  EXPECT_THROW(read_edges(in, users, items, {}, stats), DataError);
}

TEST(EdgeListIoTest, ThresholdWithoutRatingIsDataError) {
  std::istringstream in("a\tb\n");
  IdMap users, items;
  ReadStats stats;
  ReadOptions opts;
  opts.min_rating = 3.0;
  EXPECT_THROW(read_edges(in, users, items, opts, stats), DataError);
}

TEST(EdgeListIoTest, MissingFileIsDataError) {
  EXPECT_THROW(load_dataset("/nonexistent/edges.tsv"), DataError);
}

TEST(EdgeListIoTest, WriteUsesExternalIds) {
  IdMap users, items;
  users.intern("u7");
  items.intern("x");
  items.intern("y");
  std::ostringstream out;
  const std::vector<Edge> edges{{0, 1}, {0, 0}};
  write_edges(out, edges, users, items);
  EXPECT_EQ(out.str(), "u7\ty\nu7\tx\n");
  std::ostringstream ids;
  write_id_map(ids, items);
  EXPECT_EQ(ids.str(), "0\tx\n1\ty\n");
}

}  // namespace
}  // namespace sld
