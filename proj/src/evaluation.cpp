#include "sld/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace sld {
namespace {

bool in_top(const UserOutcome& o, std::size_t length, Index item) {
  const std::size_t n = std::min(length, o.top.size());
  return std::find(o.top.begin(), o.top.begin() + static_cast<std::ptrdiff_t>(n),
                   item) != o.top.begin() + static_cast<std::ptrdiff_t>(n);
}

void require_policy(std::span<const RankedList> lists, TiePolicy policy,
                    const char* what) {
  for (const RankedList& l : lists) {
    if (l.policy != policy) throw std::invalid_argument(what);
  }
}

template <typename Fn>
std::vector<BinRow> bin_rows(double max_degree, const BinningOptions& options, Fn fill) {
  std::vector<BinRow> rows;
  for (int x = 1;; ++x) {
    const auto [lo, hi] = bin_range(x, options);
    if (lo > max_degree) break;
    BinRow row{x, lo, hi, 0.0, 0};
    if (fill(row)) rows.push_back(row);
  }
  return rows;
}

}  // namespace

ProbeIndex index_probe(const BipartiteGraph& training, std::span<const Edge> probe) {
  ProbeIndex out;
  out.total_links = probe.size();
  std::vector<std::vector<Index>> by_user(training.num_users());
  for (const Edge& e : probe) {
    if (e.user >= training.num_users() || training.user_degree(e.user) == 0) {
      ++out.skipped_cold_user;
    } else if (e.item >= training.num_items() || training.item_degree(e.item) == 0) {
      ++out.skipped_cold_item;
    } else if (training.has_edge(e.user, e.item)) {
      ++out.skipped_in_training;
    } else {
      by_user[e.user].push_back(e.item);
    }
  }
  for (Index u = 0; u < training.num_users(); ++u) {
    auto& items = by_user[u];
    if (items.empty()) continue;
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    out.evaluable_links += items.size();
    out.users.push_back(u);
    out.items.push_back(std::move(items));
  }
  return out;
}

UserOutcome summarize_user(const ResourceVector& scores, const BipartiteGraph& training,
                           Index user, std::span<const Index> probe_items,
                           std::size_t top_length,
                           std::span<const Index> item_degrees) {
  const auto collected = training.items_of(user);
  std::vector<Index> owned;
  if (item_degrees.empty()) {
    owned = training.item_degrees();
    item_degrees = owned;
  }
  const auto degrees = item_degrees;
  UserOutcome o;
  o.user = user;
  o.list_size = training.num_items() - collected.size();
  o.probe_items.assign(probe_items.begin(), probe_items.end());
  o.probe_ranks.reserve(probe_items.size());
  for (Index item : probe_items) {
    o.probe_ranks.push_back(midrank_of(scores, collected, item, degrees));
  }
  o.top = top_items(scores, collected, top_length, degrees);
  return o;
}

std::vector<UserOutcome> outcomes_from_lists(std::span<const RankedList> lists,
                                             std::span<const Edge> probe,
                                             std::size_t* skipped) {
  std::unordered_map<Index, const RankedList*> by_user;
  for (const RankedList& l : lists) by_user.emplace(l.user, &l);
  std::unordered_map<Index, std::vector<Index>> probe_items;
  std::size_t missing = 0;
  for (const Edge& e : probe) {
    if (by_user.count(e.user) == 0) {
      ++missing;
      continue;
    }
    probe_items[e.user].push_back(e.item);
  }
  if (skipped != nullptr) *skipped = missing;

  std::vector<UserOutcome> out;
  for (const RankedList& l : lists) {
    auto it = probe_items.find(l.user);
    if (it == probe_items.end()) continue;
    UserOutcome o;
    o.user = l.user;
    o.list_size = l.list_size();
    o.top = l.entries;
    for (Index item : it->second) {
      const auto pos = std::find(l.entries.begin(), l.entries.end(), item);
      if (pos == l.entries.end()) {
        throw std::invalid_argument("probe item missing from the user's ranked list");
      }
      o.probe_items.push_back(item);
      o.probe_ranks.push_back(l.ranks[static_cast<std::size_t>(pos - l.entries.begin())]);
    }
    out.push_back(std::move(o));
  }
  return out;
}

RankingScoreResult ranking_score(std::span<const UserOutcome> outcomes) {
  RankingScoreResult r;
  double sum = 0.0;
  for (const UserOutcome& o : outcomes) {
    for (std::size_t i = 0; i < o.probe_items.size(); ++i) {
      const double rs = o.probe_ranks[i] / static_cast<double>(o.list_size);
      r.per_link.push_back({{o.user, o.probe_items[i]}, rs});
      sum += rs;
    }
  }
  if (!r.per_link.empty()) r.mean = sum / static_cast<double>(r.per_link.size());
  return r;
}

RankingScoreResult ranking_score(std::span<const RankedList> lists,
                                 std::span<const Edge> probe) {
  require_policy(lists, TiePolicy::kMidrank, "ranking score needs midrank lists");
  std::size_t skipped = 0;
  const auto outcomes = outcomes_from_lists(lists, probe, &skipped);
  RankingScoreResult r = ranking_score(outcomes);
  r.skipped = skipped;
  return r;
}

RecallResult recall(std::span<const UserOutcome> outcomes, std::size_t length) {
  if (length < 1) throw std::invalid_argument("recall length must be at least 1");
  RecallResult r;
  double sum = 0.0;
  for (const UserOutcome& o : outcomes) {
    if (o.probe_items.empty()) continue;
    std::size_t found = 0;
    for (Index item : o.probe_items) found += in_top(o, length, item) ? 1 : 0;
    const double re = static_cast<double>(found) / static_cast<double>(o.probe_items.size());
    r.per_user.push_back({o.user, re});
    sum += re;
  }
  if (!r.per_user.empty()) r.overall = sum / static_cast<double>(r.per_user.size());
  return r;
}

RecallResult recall(std::span<const RankedList> lists, std::span<const Edge> probe,
                    std::size_t length) {
  require_policy(lists, TiePolicy::kItemIndex, "recall needs item-index lists");
  return recall(outcomes_from_lists(lists, probe), length);
}

HitsResult hits(std::span<const UserOutcome> outcomes, std::size_t length, Axis axis,
                const std::function<bool(Index)>& in_subset) {
  HitsResult r;
  for (const UserOutcome& o : outcomes) {
    if (axis == Axis::kUser && !in_subset(o.user)) continue;
    for (Index item : o.probe_items) {
      if (axis == Axis::kItem && !in_subset(item)) continue;
      ++r.links;
      r.hits += in_top(o, length, item) ? 1 : 0;
    }
  }
  if (r.links > 0) r.value = static_cast<double>(r.hits) / static_cast<double>(r.links);
  return r;
}

HitsResult hits(std::span<const RankedList> lists, std::span<const Edge> probe,
                std::size_t length, std::span<const Index> subset, Axis axis) {
  if (subset.empty()) throw std::invalid_argument("hits subset must not be empty");
  require_policy(lists, TiePolicy::kItemIndex, "hits needs item-index lists");
  const std::unordered_set<Index> members(subset.begin(), subset.end());
  return hits(outcomes_from_lists(lists, probe), length, axis,
              [&](Index node) { return members.count(node) > 0; });
}

std::pair<double, double> bin_range(int x, const BinningOptions& options) {
  const double a = options.scale();
  const double xd = static_cast<double>(x);
  return {a * (xd * xd - xd), a * (xd * xd + 2.0)};
}

std::vector<BinRow> degree_binned(std::span<const double> values,
                                  std::span<const Index> degrees,
                                  const BinningOptions& options) {
  if (values.size() != degrees.size()) {
    throw std::invalid_argument("values and degrees differ in length");
  }
  Index max_degree = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isnan(values[i])) max_degree = std::max(max_degree, degrees[i]);
  }
  return bin_rows(max_degree, options, [&](BinRow& row) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (std::isnan(values[i])) continue;
      const double k = degrees[i];
      if (k < row.lower || k > row.upper) continue;
      sum += values[i];
      ++row.count;
    }
    if (row.count == 0) return false;
    row.mean = sum / static_cast<double>(row.count);
    return true;
  });
}

std::vector<BinRow> hits_by_item_degree(std::span<const UserOutcome> outcomes,
                                        std::size_t length,
                                        std::span<const Index> item_degrees,
                                        const BinningOptions& options) {
  Index max_degree = 0;
  for (const UserOutcome& o : outcomes) {
    for (Index item : o.probe_items) max_degree = std::max(max_degree, item_degrees[item]);
  }
  return bin_rows(max_degree, options, [&](BinRow& row) {
    const HitsResult h = hits(outcomes, length, Axis::kItem, [&](Index item) {
      const double k = item_degrees[item];
      return k >= row.lower && k <= row.upper;
    });
    if (!h.value) return false;
    row.mean = *h.value;
    row.count = h.links;
    return true;
  });
}

}  // namespace sld
