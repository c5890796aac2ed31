#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sld/types.hpp"

namespace sld {

enum class TiePolicy {
  kMidrank,    // a tie block shares the mean of the positions it spans
  kItemIndex,  // ties broken by ascending item index; ranks are 1..n
};

// Ordering of one user's uncollected items by descending score.
//
// Items of degree zero (when degrees are supplied) sort after every other
// item carrying the same score, so they close the zero-score block. They
// form their own tie block under kMidrank.
struct RankedList {
  Index user = 0;
  TiePolicy policy = TiePolicy::kItemIndex;
  std::vector<Index> entries;  // best first
  std::vector<double> ranks;   // ranks[i] belongs to entries[i]

  std::size_t list_size() const { return entries.size(); }
};

// `collected` must be sorted. `item_degrees`, when non-empty, has one entry
// per item.
RankedList rank_items(const ResourceVector& scores, std::span<const Index> collected,
                      TiePolicy policy, std::span<const Index> item_degrees = {},
                      Index user = 0);

// Midrank of `item` among uncollected items, by counting rather than
// sorting. Equals the kMidrank rank assigned by rank_items.
double midrank_of(const ResourceVector& scores, std::span<const Index> collected,
                  Index item, std::span<const Index> item_degrees = {});

// First `length` entries of the kItemIndex ordering, via partial selection.
std::vector<Index> top_items(const ResourceVector& scores,
                             std::span<const Index> collected, std::size_t length,
                             std::span<const Index> item_degrees = {});

}  // namespace sld
