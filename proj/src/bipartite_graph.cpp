#include "sld/bipartite_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

namespace sld {
namespace {

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    return std::hash<std::uint64_t>{}(
        (static_cast<std::uint64_t>(e.user) << 32) | e.item);
  }
};

// Counting-sort CSR fill; `edges` must be duplicate free.
void fill_csr(Index num_rows, std::span<const Edge> edges, bool by_user,
              std::vector<std::size_t>& ptr, std::vector<Index>& adj) {
  ptr.assign(static_cast<std::size_t>(num_rows) + 1, 0);
  for (const Edge& e : edges) ++ptr[(by_user ? e.user : e.item) + 1];
  for (std::size_t r = 0; r < num_rows; ++r) ptr[r + 1] += ptr[r];
  adj.resize(edges.size());
  std::vector<std::size_t> cursor(ptr.begin(), ptr.end() - 1);
  for (const Edge& e : edges) {
    const Index row = by_user ? e.user : e.item;
    adj[cursor[row]++] = by_user ? e.item : e.user;
  }
  for (std::size_t r = 0; r < num_rows; ++r) {
    std::sort(adj.begin() + static_cast<std::ptrdiff_t>(ptr[r]),
              adj.begin() + static_cast<std::ptrdiff_t>(ptr[r + 1]));
  }
}

}  // namespace

BipartiteGraph BipartiteGraph::FromEdges(Index num_users, Index num_items,
                                         std::span<const Edge> edges,
                                         std::size_t* duplicates) {
  std::vector<Edge> unique(edges.begin(), edges.end());
  for (const Edge& e : unique) {
    if (e.user >= num_users || e.item >= num_items) {
      throw DataError("edge (" + std::to_string(e.user) + ", " +
                      std::to_string(e.item) + ") outside index space");
    }
  }
  std::sort(unique.begin(), unique.end());
  const auto tail = std::unique(unique.begin(), unique.end());
  if (duplicates != nullptr) {
    *duplicates = static_cast<std::size_t>(unique.end() - tail);
  }
  unique.erase(tail, unique.end());

  BipartiteGraph g;
  g.num_users_ = num_users;
  g.num_items_ = num_items;
  fill_csr(num_users, unique, true, g.user_ptr_, g.user_adj_);
  fill_csr(num_items, unique, false, g.item_ptr_, g.item_adj_);
  return g;
}

double BipartiteGraph::density() const {
  if (num_users_ == 0 || num_items_ == 0) return 0.0;
  return static_cast<double>(num_edges()) /
         (static_cast<double>(num_users_) * static_cast<double>(num_items_));
}

std::vector<Index> BipartiteGraph::user_degrees() const {
  std::vector<Index> out(num_users_);
  for (Index u = 0; u < num_users_; ++u) out[u] = user_degree(u);
  return out;
}

std::vector<Index> BipartiteGraph::item_degrees() const {
  std::vector<Index> out(num_items_);
  for (Index i = 0; i < num_items_; ++i) out[i] = item_degree(i);
  return out;
}

bool BipartiteGraph::has_edge(Index user, Index item) const {
  if (user >= num_users_ || item >= num_items_) return false;
  const auto items = items_of(user);
  return std::binary_search(items.begin(), items.end(), item);
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Index u = 0; u < num_users_; ++u) {
    for (Index i : items_of(u)) out.push_back({u, i});
  }
  return out;
}

GraphBuild build_graph(std::span<const Edge> edges) {
  if (edges.empty()) throw DataError("edge list is empty");
  std::uint64_t max_user = 0;
  std::uint64_t max_item = 0;
  for (const Edge& e : edges) {
    max_user = std::max<std::uint64_t>(max_user, e.user);
    max_item = std::max<std::uint64_t>(max_item, e.item);
  }
  constexpr std::uint64_t kLimit = std::numeric_limits<Index>::max();
  if (max_user >= kLimit || max_item >= kLimit) {
    throw DataError("node index exceeds the index space");
  }
  GraphBuild out;
  out.graph = BipartiteGraph::FromEdges(static_cast<Index>(max_user + 1),
                                        static_cast<Index>(max_item + 1),
                                        edges, &out.duplicates);
  return out;
}

std::size_t deduplicate(std::vector<Edge>& edges) {
  std::unordered_set<Edge, EdgeHash> seen;
  seen.reserve(edges.size());
  const auto tail = std::remove_if(edges.begin(), edges.end(), [&](const Edge& e) {
    return !seen.insert(e).second;
  });
  const auto removed = static_cast<std::size_t>(edges.end() - tail);
  edges.erase(tail, edges.end());
  return removed;
}

SplitDataset split_train_probe(std::span<const Edge> edges, double ratio,
                               std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ConfigError("split ratio must lie in (0, 1)");
  }
  std::vector<Edge> pool(edges.begin(), edges.end());
  deduplicate(pool);

  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  const auto cut = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(pool.size())));

  SplitDataset out;
  out.seed = seed;
  out.ratio = ratio;
  out.training.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cut));
  out.probe.assign(pool.begin() + static_cast<std::ptrdiff_t>(cut), pool.end());
  std::sort(out.training.begin(), out.training.end());
  std::sort(out.probe.begin(), out.probe.end());
  return out;
}

}  // namespace sld
