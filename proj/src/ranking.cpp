#include "sld/ranking.hpp"

#include <algorithm>
#include <stdexcept>

namespace sld {
namespace {

struct Key {
  double score;
  bool cold;
};

Key key_of(const ResourceVector& scores, std::span<const Index> degrees, Index item) {
  return {scores[item], !degrees.empty() && degrees[item] == 0};
}

// True when a ranks strictly before b, ignoring the index tie-break.
bool ahead(const Key& a, const Key& b) {
  if (a.score != b.score) return a.score > b.score;
  return !a.cold && b.cold;
}

bool same_block(const Key& a, const Key& b) {
  return a.score == b.score && a.cold == b.cold;
}

void check_inputs(const ResourceVector& scores, std::span<const Index> degrees) {
  if (!degrees.empty() && degrees.size() != static_cast<std::size_t>(scores.size())) {
    throw std::invalid_argument("item degree count does not match score length");
  }
}

std::vector<Index> uncollected(Index num_items, std::span<const Index> collected) {
  std::vector<Index> out;
  out.reserve(num_items - std::min<std::size_t>(num_items, collected.size()));
  auto next = collected.begin();
  for (Index a = 0; a < num_items; ++a) {
    while (next != collected.end() && *next < a) ++next;
    if (next != collected.end() && *next == a) continue;
    out.push_back(a);
  }
  return out;
}

}  // namespace

RankedList rank_items(const ResourceVector& scores, std::span<const Index> collected,
                      TiePolicy policy, std::span<const Index> item_degrees,
                      Index user) {
  check_inputs(scores, item_degrees);
  RankedList list;
  list.user = user;
  list.policy = policy;
  list.entries = uncollected(static_cast<Index>(scores.size()), collected);
  std::sort(list.entries.begin(), list.entries.end(), [&](Index a, Index b) {
    const Key ka = key_of(scores, item_degrees, a);
    const Key kb = key_of(scores, item_degrees, b);
    if (ahead(ka, kb)) return true;
    if (ahead(kb, ka)) return false;
    return a < b;
  });

  const std::size_t n = list.entries.size();
  list.ranks.resize(n);
  if (policy == TiePolicy::kItemIndex) {
    for (std::size_t i = 0; i < n; ++i) list.ranks[i] = static_cast<double>(i + 1);
    return list;
  }
  std::size_t begin = 0;
  while (begin < n) {
    const Key block = key_of(scores, item_degrees, list.entries[begin]);
    std::size_t end = begin + 1;
    while (end < n && same_block(key_of(scores, item_degrees, list.entries[end]), block)) {
      ++end;
    }
    // Positions begin+1 .. end share their midpoint.
    const double mid = 0.5 * static_cast<double>(begin + 1 + end);
    for (std::size_t i = begin; i < end; ++i) list.ranks[i] = mid;
    begin = end;
  }
  return list;
}

double midrank_of(const ResourceVector& scores, std::span<const Index> collected,
                  Index item, std::span<const Index> item_degrees) {
  check_inputs(scores, item_degrees);
  if (std::binary_search(collected.begin(), collected.end(), item)) {
    throw std::invalid_argument("item is already collected");
  }
  const Key target = key_of(scores, item_degrees, item);
  std::size_t greater = 0;
  std::size_t equal = 0;
  auto next = collected.begin();
  for (Index a = 0; a < static_cast<Index>(scores.size()); ++a) {
    while (next != collected.end() && *next < a) ++next;
    if (next != collected.end() && *next == a) continue;
    const Key k = key_of(scores, item_degrees, a);
    if (ahead(k, target)) {
      ++greater;
    } else if (same_block(k, target)) {
      ++equal;
    }
  }
  return static_cast<double>(greater) + 0.5 * static_cast<double>(equal + 1);
}

std::vector<Index> top_items(const ResourceVector& scores,
                             std::span<const Index> collected, std::size_t length,
                             std::span<const Index> item_degrees) {
  check_inputs(scores, item_degrees);
  std::vector<Index> pool = uncollected(static_cast<Index>(scores.size()), collected);
  const auto before = [&](Index a, Index b) {
    const Key ka = key_of(scores, item_degrees, a);
    const Key kb = key_of(scores, item_degrees, b);
    if (ahead(ka, kb)) return true;
    if (ahead(kb, ka)) return false;
    return a < b;
  };
  const std::size_t keep = std::min(length, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep),
                    pool.end(), before);
  pool.resize(keep);
  return pool;
}

}  // namespace sld
