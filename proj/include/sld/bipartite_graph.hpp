#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sld/types.hpp"

namespace sld {

// Immutable user-item adjacency stored as two CSR indices (user -> items and
// item -> users). Neighbor lists are sorted and duplicate free.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Builds a graph with a fixed index space. Repeated pairs are dropped and
  // counted in `duplicates` when it is non-null. Nodes without edges are
  // kept with degree zero.
  static BipartiteGraph FromEdges(Index num_users, Index num_items,
                                  std::span<const Edge> edges,
                                  std::size_t* duplicates = nullptr);

  Index num_users() const { return num_users_; }
  Index num_items() const { return num_items_; }
  std::size_t num_edges() const { return user_adj_.size(); }

  // Number of links over N x M.
  double density() const;

  std::span<const Index> items_of(Index user) const {
    return {user_adj_.data() + user_ptr_[user],
            user_adj_.data() + user_ptr_[user + 1]};
  }
  std::span<const Index> users_of(Index item) const {
    return {item_adj_.data() + item_ptr_[item],
            item_adj_.data() + item_ptr_[item + 1]};
  }

  Index user_degree(Index user) const {
    return static_cast<Index>(user_ptr_[user + 1] - user_ptr_[user]);
  }
  Index item_degree(Index item) const {
    return static_cast<Index>(item_ptr_[item + 1] - item_ptr_[item]);
  }

  std::vector<Index> user_degrees() const;
  std::vector<Index> item_degrees() const;

  bool has_edge(Index user, Index item) const;

  // Edges in (user, item) lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  Index num_users_ = 0;
  Index num_items_ = 0;
  std::vector<std::size_t> user_ptr_{0};
  std::vector<Index> user_adj_;
  std::vector<std::size_t> item_ptr_{0};
  std::vector<Index> item_adj_;
};

struct GraphBuild {
  BipartiteGraph graph;
  std::size_t duplicates = 0;
};

// Builds a graph whose index space is [0, max user + 1) x [0, max item + 1).
// Throws DataError on an empty edge list.
GraphBuild build_graph(std::span<const Edge> edges);

// Removes repeated pairs in place, keeping first occurrences in order.
// Returns the number removed.
std::size_t deduplicate(std::vector<Edge>& edges);

struct SplitDataset {
  std::vector<Edge> training;
  std::vector<Edge> probe;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

// Seeded shuffle followed by a prefix cut: round(ratio * |E|) edges go to the
// training set, the rest to the probe set. Both halves are returned sorted.
// Input duplicates are removed first. Throws ConfigError unless 0 < ratio < 1.
SplitDataset split_train_probe(std::span<const Edge> edges, double ratio,
                               std::uint64_t seed);

}  // namespace sld
