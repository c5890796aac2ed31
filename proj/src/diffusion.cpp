#include "sld/diffusion.hpp"

#include <algorithm>
#include <cctype>

namespace sld {
namespace {

constexpr std::pair<Algorithm, std::string_view> kNames[] = {
    {Algorithm::kHybrid, "hybrid"}, {Algorithm::kMassDiffusion, "md"},
    {Algorithm::kHeatConduction, "hc"}, {Algorithm::kSld, "sld"},
    {Algorithm::kUsld, "usld"},     {Algorithm::kOsld, "osld"},
    {Algorithm::kRenbi, "renbi"},
};

double macro_lambda(const DiffusionParams& p) {
  switch (p.algorithm) {
    case Algorithm::kHybrid: return p.lambda;
    case Algorithm::kHeatConduction: return 0.0;
    default: return 1.0;
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  for (const auto& [a, name] : kNames) {
    if (a == algorithm) return name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::erase(lower, '-');
  std::erase(lower, '_');
  for (const auto& [a, n] : kNames) {
    if (lower == n) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

void DiffusionParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  if (macro_steps < 1) throw ConfigError("macro_steps must be at least 1");
  const bool needs_theta = algorithm == Algorithm::kUsld ||
                           algorithm == Algorithm::kOsld ||
                           algorithm == Algorithm::kRenbi;
  if (needs_theta && !theta) {
    throw ConfigError(std::string(to_string(algorithm)) + " requires theta");
  }
  if (theta && !std::isfinite(*theta)) throw ConfigError("theta must be finite");
}

double coverage(const BipartiteGraph& graph, Index user, int steps,
                CoverageDenominator denominator) {
  if (steps < 1 || steps % 2 == 0) {
    throw std::invalid_argument("coverage steps must be odd (1 + 2 * macro-steps)");
  }
  const ResourceVector f = initial_resource(graph, user);
  ResourceVector reached = f;
  if (steps > 1) {
    const HybridOperator<double> op(graph, 1.0);
    reached = macro_step_series(op, f, (steps - 1) / 2).back();
  }
  std::size_t positive = 0;
  for (Index a = 0; a < graph.num_items(); ++a) {
    if (reached[a] <= 0.0) continue;
    if (denominator == CoverageDenominator::kUncollectedItems && f[a] > 0.0) continue;
    ++positive;
  }
  std::size_t total = graph.num_items();
  if (denominator == CoverageDenominator::kUncollectedItems) {
    total -= graph.user_degree(user);
    if (total == 0) return 0.0;
  }
  return static_cast<double>(positive) / static_cast<double>(total);
}

Scorer::Scorer(const BipartiteGraph& graph, DiffusionParams params)
    : graph_(&graph), params_(params), op_(graph, macro_lambda(params)) {
  params_.validate();
  if (params_.algorithm == Algorithm::kOsld) {
    item_weight_ = item_degree_weights(graph, *params_.theta);
  }
}

ResourceVector Scorer::score(Index user) const {
  const ResourceVector f = initial_resource(*graph_, user);
  switch (params_.algorithm) {
    case Algorithm::kHybrid:
    case Algorithm::kMassDiffusion:
    case Algorithm::kHeatConduction:
      return op_(f);
    case Algorithm::kSld:
      return macro_step_series(op_, f, params_.macro_steps).back();
    case Algorithm::kUsld:
      return combine_usld(macro_step_series(op_, f, params_.macro_steps),
                          params_.macro_steps, graph_->user_degree(user), *params_.theta);
    case Algorithm::kOsld:
      return combine_osld(macro_step_series(op_, f, params_.macro_steps),
                          params_.macro_steps, item_weight_);
    case Algorithm::kRenbi:
      return combine_renbi(macro_step_series(op_, f, 2), *params_.theta);
  }
  throw std::logic_error("unhandled algorithm");
}

}  // namespace sld
