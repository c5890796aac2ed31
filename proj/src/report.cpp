#include "sld/report.hpp"

#include <ostream>

#include <fmt/format.h>

namespace sld {

std::string format_number(double value) { return fmt::format("{}", value); }

std::string MetricReport::file_stem() const {
  std::string stem = algorithm;
  if (lambda) stem += "_lambda" + format_number(*lambda);
  if (macro_steps) stem += "_n" + std::to_string(*macro_steps);
  if (theta) stem += "_theta" + format_number(*theta);
  stem += "_" + metric;
  if (length) stem += "_L" + std::to_string(*length);
  return stem;
}

nlohmann::json to_json(const MetricReport& r) {
  using nlohmann::json;
  json params = json::object();
  if (r.lambda) params["lambda"] = *r.lambda;
  if (r.macro_steps) params["macro_steps"] = *r.macro_steps;
  if (r.theta) params["theta"] = *r.theta;
  if (r.length) params["L"] = *r.length;

  json bins = json::array();
  for (const BinRow& b : r.bins) {
    bins.push_back({{"x", b.x},
                    {"degree_lo", b.lower},
                    {"degree_hi", b.upper},
                    {"mean", b.mean},
                    {"count", b.count}});
  }
  return {
      {"metric", r.metric},
      {"algorithm", r.algorithm},
      {"params", params},
      {"overall", r.overall ? json(*r.overall) : json(nullptr)},
      {"population", r.population},
      {"bin_axis", r.bin_axis.empty() ? json(nullptr) : json(r.bin_axis)},
      {"bins", bins},
      {"skipped",
       {{"cold_user", r.skipped_cold_user},
        {"cold_item", r.skipped_cold_item},
        {"in_training", r.skipped_in_training}}},
      {"notes", r.notes},
  };
}

void write_csv(std::ostream& out, const MetricReport& r) {
  out << "x,degree_lo,degree_hi,mean,count\n";
  for (const BinRow& b : r.bins) {
    out << b.x << ',' << format_number(b.lower) << ',' << format_number(b.upper) << ','
        << format_number(b.mean) << ',' << b.count << '\n';
  }
}

}  // namespace sld
