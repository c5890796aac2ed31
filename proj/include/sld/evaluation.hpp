#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sld/bipartite_graph.hpp"
#include "sld/ranking.hpp"

namespace sld {

// Probe links grouped by user, restricted to links the training graph can
// score. A link is skipped when its user or its item has no training edges,
// or when the pair already appears in training.
struct ProbeIndex {
  std::vector<Index> users;               // ascending
  std::vector<std::vector<Index>> items;  // items[i] belongs to users[i], sorted
  std::size_t total_links = 0;
  std::size_t evaluable_links = 0;
  std::size_t skipped_cold_user = 0;
  std::size_t skipped_cold_item = 0;
  std::size_t skipped_in_training = 0;

  std::size_t skipped() const {
    return skipped_cold_user + skipped_cold_item + skipped_in_training;
  }
};

ProbeIndex index_probe(const BipartiteGraph& training, std::span<const Edge> probe);

// What the accuracy metrics need from one user's ranking.
struct UserOutcome {
  Index user = 0;
  std::size_t list_size = 0;
  std::vector<Index> probe_items;
  std::vector<double> probe_ranks;  // midranks, parallel to probe_items
  std::vector<Index> top;           // item-index tie policy, best first
};

// Summarizes a score vector without sorting the whole list: midranks are
// counted and the top list is partially selected. Pass the training item
// degrees when summarizing many users to avoid recomputing them.
UserOutcome summarize_user(const ResourceVector& scores, const BipartiteGraph& training,
                           Index user, std::span<const Index> probe_items,
                           std::size_t top_length,
                           std::span<const Index> item_degrees = {});

// Builds outcomes from fully ranked lists. Probe links whose user has no list
// are counted in `skipped`.
std::vector<UserOutcome> outcomes_from_lists(std::span<const RankedList> lists,
                                             std::span<const Edge> probe,
                                             std::size_t* skipped = nullptr);

struct LinkScore {
  Edge link;
  double value = 0.0;
};

struct RankingScoreResult {
  std::optional<double> mean;  // absent when no link was scored
  std::vector<LinkScore> per_link;
  std::size_t skipped = 0;
};

// RS = rank / list size for every probe link; mean over scored links.
RankingScoreResult ranking_score(std::span<const UserOutcome> outcomes);
// Lists must use TiePolicy::kMidrank.
RankingScoreResult ranking_score(std::span<const RankedList> lists,
                                 std::span<const Edge> probe);

struct UserValue {
  Index user = 0;
  double value = 0.0;
};

struct RecallResult {
  std::optional<double> overall;  // mean over users with at least one probe link
  std::vector<UserValue> per_user;
};

RecallResult recall(std::span<const UserOutcome> outcomes, std::size_t length);
// Lists must use TiePolicy::kItemIndex.
RecallResult recall(std::span<const RankedList> lists, std::span<const Edge> probe,
                    std::size_t length);

enum class Axis { kUser, kItem };

struct HitsResult {
  std::size_t hits = 0;
  std::size_t links = 0;
  std::optional<double> value;  // absent when no link falls in the subset
};

// Hit ratio over probe links whose endpoint on `axis` satisfies `in_subset`.
HitsResult hits(std::span<const UserOutcome> outcomes, std::size_t length, Axis axis,
                const std::function<bool(Index)>& in_subset);
// `subset` lists node indices on `axis` and must not be empty.
HitsResult hits(std::span<const RankedList> lists, std::span<const Edge> probe,
                std::size_t length, std::span<const Index> subset, Axis axis);

struct BinRow {
  int x = 0;
  double lower = 0.0;
  double upper = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

struct BinningOptions {
  // Base of the logarithm in a = log(5) / 2.
  double log_base = std::exp(1.0);

  double scale() const { return 0.5 * std::log(5.0) / std::log(log_base); }
};

// Degree interval [a(x^2 - x), a(x^2 + 2)] for bin x >= 1.
std::pair<double, double> bin_range(int x, const BinningOptions& options = {});

// Mean of `values` over nodes whose degree lies in each bin. Bins overlap, so
// a node may count in several; empty bins are omitted and NaN values ignored.
std::vector<BinRow> degree_binned(std::span<const double> values,
                                  std::span<const Index> degrees,
                                  const BinningOptions& options = {});

// Hits per item-degree bin: hit links over probe links whose item degree
// lies in the bin.
std::vector<BinRow> hits_by_item_degree(std::span<const UserOutcome> outcomes,
                                        std::size_t length,
                                        std::span<const Index> item_degrees,
                                        const BinningOptions& options = {});

}  // namespace sld
