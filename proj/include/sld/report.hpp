#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sld/evaluation.hpp"

namespace sld {

// One evaluated quantity for one parameter setting, with optional
// degree-binned rows.
struct MetricReport {
  std::string metric;
  std::string algorithm;
  std::optional<double> lambda;
  std::optional<int> macro_steps;
  std::optional<double> theta;
  std::optional<std::size_t> length;

  std::optional<double> overall;
  std::size_t population = 0;
  std::string bin_axis;  // "user_degree", "item_degree", or empty
  std::vector<BinRow> bins;

  std::size_t skipped_cold_user = 0;
  std::size_t skipped_cold_item = 0;
  std::size_t skipped_in_training = 0;
  std::vector<std::string> notes;

  // e.g. "sld_n2_recall_L20"; parameters appear only when set.
  std::string file_stem() const;
};

// Shortest decimal form that round-trips.
std::string format_number(double value);

nlohmann::json to_json(const MetricReport& report);

// Header plus one row per bin.
void write_csv(std::ostream& out, const MetricReport& report);

}  // namespace sld
