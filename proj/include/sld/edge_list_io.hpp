#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sld/bipartite_graph.hpp"

namespace sld {

// Maps external ids to dense indices in order of first appearance.
class IdMap {
 public:
  Index intern(std::string_view id);
  std::optional<Index> find(std::string_view id) const;
  const std::string& external(Index index) const { return ids_.at(index); }
  Index size() const { return static_cast<Index>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> index_;
};

struct ReadOptions {
  // When set, a line is a link only if its rating column is >= this value.
  std::optional<double> min_rating;
};

struct ReadStats {
  std::size_t lines = 0;
  std::size_t comments = 0;
  std::size_t blank = 0;
  std::size_t below_threshold = 0;
  std::size_t duplicates = 0;
};

// Parses `user<TAB>item[<TAB>rating]` lines, interning ids into the maps.
// Lines without a tab are split on whitespace. Duplicates are kept here;
// callers deduplicate. Throws DataError on malformed lines.
std::vector<Edge> read_edges(std::istream& in, IdMap& users, IdMap& items,
                             const ReadOptions& options, ReadStats& stats);

struct Dataset {
  IdMap users;
  IdMap items;
  std::vector<Edge> edges;  // deduplicated, in file order
  ReadStats stats;

  BipartiteGraph graph() const;
};

// Loads one edge-list file; the result is deduplicated. Throws DataError if
// the file cannot be read or holds no links.
Dataset load_dataset(const std::filesystem::path& path,
                     const ReadOptions& options = {});

// Loads pre-split files into one index space (training ids first).
struct LoadedSplit {
  Dataset dataset;  // union of both files
  std::vector<Edge> training;
  std::vector<Edge> probe;
};
LoadedSplit load_split(const std::filesystem::path& training,
                       const std::filesystem::path& probe,
                       const ReadOptions& options = {});

void write_edges(std::ostream& out, std::span<const Edge> edges,
                 const IdMap& users, const IdMap& items);

// `index<TAB>external id` per line.
void write_id_map(std::ostream& out, const IdMap& ids);

}  // namespace sld
