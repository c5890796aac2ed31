#include "sld/edge_list_io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace sld {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find('\t') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(trim(line.substr(start, tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return fields;
  }
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto begin = line.find_first_not_of(" \r", pos);
    if (begin == std::string_view::npos) break;
    const auto end = line.find_first_of(" \r", begin);
    fields.push_back(line.substr(begin, end - begin));
    pos = end == std::string_view::npos ? line.size() : end;
  }
  return fields;
}

std::optional<double> parse_rating(std::string_view s) {
  // Bookcross quotes its columns.
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

}  // namespace

Index IdMap::intern(std::string_view id) {
  if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
  if (ids_.size() >= std::numeric_limits<Index>::max()) {
    throw DataError("too many distinct ids for the index space");
  }
  const auto index = static_cast<Index>(ids_.size());
  ids_.emplace_back(id);
  index_.emplace(ids_.back(), index);
  return index;
}

std::optional<Index> IdMap::find(std::string_view id) const {
  if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::vector<Edge> read_edges(std::istream& in, IdMap& users, IdMap& items,
                             const ReadOptions& options, ReadStats& stats) {
  std::vector<Edge> edges;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    ++stats.lines;
    const std::string_view line = trim(raw);
    if (line.empty()) {
      ++stats.blank;
      continue;
    }
    if (line.front() == '#') {
      ++stats.comments;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected user<TAB>item[<TAB>rating]");
    }
    if (options.min_rating) {
      const auto rating =
          fields.size() >= 3 ? parse_rating(fields[2]) : std::nullopt;
      if (!rating) {
        throw DataError("line " + std::to_string(line_no) +
                        ": rating threshold set but rating column missing or "
                        "not numeric");
      }
      if (*rating < *options.min_rating) {
        ++stats.below_threshold;
        continue;
      }
    }
    edges.push_back({users.intern(fields[0]), items.intern(fields[1])});
  }
  if (in.bad()) throw DataError("I/O error while reading edge list");
  return edges;
}

BipartiteGraph Dataset::graph() const {
  return BipartiteGraph::FromEdges(users.size(), items.size(), edges);
}

Dataset load_dataset(const std::filesystem::path& path,
                     const ReadOptions& options) {
  auto in = open_or_throw(path);
  Dataset ds;
  ds.edges = read_edges(in, ds.users, ds.items, options, ds.stats);
  ds.stats.duplicates = deduplicate(ds.edges);
  if (ds.edges.empty()) throw DataError(path.string() + " contains no links");
  return ds;
}

LoadedSplit load_split(const std::filesystem::path& training,
                       const std::filesystem::path& probe,
                       const ReadOptions& options) {
  LoadedSplit out;
  Dataset& ds = out.dataset;
  {
    auto in = open_or_throw(training);
    out.training = read_edges(in, ds.users, ds.items, options, ds.stats);
  }
  {
    auto in = open_or_throw(probe);
    out.probe = read_edges(in, ds.users, ds.items, options, ds.stats);
  }
  ds.stats.duplicates = deduplicate(out.training);
  // A pair present in both files stays in training only.
  std::vector<Edge> merged = out.training;
  const std::size_t train_size = merged.size();
  merged.insert(merged.end(), out.probe.begin(), out.probe.end());
  ds.stats.duplicates += deduplicate(merged);
  out.probe.assign(merged.begin() + static_cast<std::ptrdiff_t>(train_size),
                   merged.end());
  ds.edges = std::move(merged);
  if (out.training.empty()) throw DataError(training.string() + " contains no links");
  return out;
}

void write_edges(std::ostream& out, std::span<const Edge> edges,
                 const IdMap& users, const IdMap& items) {
  for (const Edge& e : edges) {
    out << users.external(e.user) << '\t' << items.external(e.item) << '\n';
  }
}

void write_id_map(std::ostream& out, const IdMap& ids) {
  for (Index i = 0; i < ids.size(); ++i) out << i << '\t' << ids.external(i) << '\n';
}

}  // namespace sld
