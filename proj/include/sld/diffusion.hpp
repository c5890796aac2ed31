#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sld/bipartite_graph.hpp"
#include "sld/types.hpp"

namespace sld {

enum class Algorithm { kHybrid, kMassDiffusion, kHeatConduction, kSld, kUsld, kOsld, kRenbi };

std::string_view to_string(Algorithm algorithm);
// Accepts the names printed by to_string, case-insensitive. Throws ConfigError.
Algorithm parse_algorithm(std::string_view name);

struct DiffusionParams {
  Algorithm algorithm = Algorithm::kMassDiffusion;
  double lambda = 1.0;
  int macro_steps = 1;
  std::optional<double> theta;

  // Throws ConfigError when a value is out of range or theta is missing for
  // U-SLD, O-SLD or RENBI.
  void validate() const;
};

// One macro-step of the hybrid redistribution f' = W f, evaluated without
// forming W:
//   v_j  = (1 / k_j) sum_beta a_{j beta} f_beta / k_beta^lambda
//   f'_a = k_a^(lambda - 1) sum_j a_{j a} v_j
// Both passes scatter from nonzero entries only, so a sparse f costs less
// than a full sweep over the edges. Items of degree zero neither send nor
// receive resource.
template <typename Scalar = double>
class HybridOperator {
 public:
  HybridOperator(const BipartiteGraph& graph, Scalar lambda)
      : graph_(&graph),
        lambda_(lambda),
        source_weight_(graph.num_items()),
        target_weight_(graph.num_items()),
        inv_user_degree_(graph.num_users()) {
    if (!(lambda >= Scalar(0) && lambda <= Scalar(1))) {
      throw ConfigError("lambda must lie in [0, 1]");
    }
    using std::pow;
    for (Index a = 0; a < graph.num_items(); ++a) {
      const Index k = graph.item_degree(a);
      if (k == 0) {
        source_weight_[a] = target_weight_[a] = Scalar(0);
        continue;
      }
      const Scalar kd = static_cast<Scalar>(k);
      source_weight_[a] = Scalar(1) / pow(kd, lambda);
      target_weight_[a] = Scalar(1) / pow(kd, Scalar(1) - lambda);
    }
    for (Index j = 0; j < graph.num_users(); ++j) {
      const Index k = graph.user_degree(j);
      inv_user_degree_[j] = k == 0 ? Scalar(0) : Scalar(1) / static_cast<Scalar>(k);
    }
  }

  const BipartiteGraph& graph() const { return *graph_; }
  Scalar lambda() const { return lambda_; }

  // out = W f. No argument checking; see apply_w for the checked entry point.
  void apply(const VectorX<Scalar>& f, VectorX<Scalar>& out) const {
    const BipartiteGraph& g = *graph_;
    VectorX<Scalar> users = VectorX<Scalar>::Zero(g.num_users());
    for (Index b = 0; b < g.num_items(); ++b) {
      if (f[b] == Scalar(0)) continue;
      const Scalar share = f[b] * source_weight_[b];
      for (Index j : g.users_of(b)) users[j] += share;
    }
    out.setZero(g.num_items());
    for (Index j = 0; j < g.num_users(); ++j) {
      if (users[j] == Scalar(0)) continue;
      const Scalar share = users[j] * inv_user_degree_[j];
      for (Index a : g.items_of(j)) out[a] += share;
    }
    out.array() *= target_weight_.array();
  }

  VectorX<Scalar> operator()(const VectorX<Scalar>& f) const {
    VectorX<Scalar> out;
    apply(f, out);
    return out;
  }

 private:
  const BipartiteGraph* graph_;
  Scalar lambda_;
  VectorX<Scalar> source_weight_;  // k_beta^-lambda
  VectorX<Scalar> target_weight_;  // k_alpha^(lambda - 1)
  VectorX<Scalar> inv_user_degree_;
};

// One unit of resource on every item the user collected.
template <typename Scalar = double>
VectorX<Scalar> initial_resource(const BipartiteGraph& graph, Index user) {
  if (user >= graph.num_users()) throw std::out_of_range("user index out of range");
  if (graph.user_degree(user) == 0) throw ColdStartError(user);
  VectorX<Scalar> f = VectorX<Scalar>::Zero(graph.num_items());
  for (Index a : graph.items_of(user)) f[a] = Scalar(1);
  return f;
}

// Checked single application of W. Rejects a length mismatch, NaN or
// negative entries, and positive resource on an item of degree zero.
template <typename Scalar = double>
VectorX<Scalar> apply_w(const BipartiteGraph& graph, const VectorX<Scalar>& f,
                        Scalar lambda) {
  if (f.size() != static_cast<Eigen::Index>(graph.num_items())) {
    throw std::invalid_argument("resource vector length does not match item count");
  }
  for (Index a = 0; a < graph.num_items(); ++a) {
    if (std::isnan(f[a]) || f[a] < Scalar(0)) {
      throw std::invalid_argument("resource entries must be finite and non-negative");
    }
    if (f[a] > Scalar(0) && graph.item_degree(a) == 0) {
      throw std::invalid_argument("resource placed on an item with no links");
    }
  }
  return HybridOperator<Scalar>(graph, lambda)(f);
}

// f^(1), ..., f^(n) for n successive mass-diffusion macro-steps.
template <typename Scalar = double>
std::vector<VectorX<Scalar>> macro_step_series(const HybridOperator<Scalar>& op,
                                               const VectorX<Scalar>& initial,
                                               int macro_steps) {
  if (macro_steps < 1) throw ConfigError("macro_steps must be at least 1");
  std::vector<VectorX<Scalar>> series(static_cast<std::size_t>(macro_steps));
  op.apply(initial, series[0]);
  for (std::size_t i = 1; i < series.size(); ++i) op.apply(series[i - 1], series[i]);
  return series;
}

// Combinations of a mass-diffusion series. `series[i]` holds f^(i+1); only
// the first `macro_steps` entries are read.

template <typename Scalar>
VectorX<Scalar> combine_usld(const std::vector<VectorX<Scalar>>& series,
                             int macro_steps, Index user_degree, Scalar theta) {
  using std::pow;
  VectorX<Scalar> out = series.at(0);
  if (macro_steps < 2) return out;
  const Scalar weight = Scalar(1) / pow(static_cast<Scalar>(user_degree), theta);
  VectorX<Scalar> tail = VectorX<Scalar>::Zero(out.size());
  for (int i = 1; i < macro_steps; ++i) tail += series.at(static_cast<std::size_t>(i));
  out += weight * tail;
  return out;
}

// `item_weight[a]` must hold k_a^-theta (zero for items of degree zero).
template <typename Scalar>
VectorX<Scalar> combine_osld(const std::vector<VectorX<Scalar>>& series,
                             int macro_steps, const VectorX<Scalar>& item_weight) {
  VectorX<Scalar> out = series.at(0);
  if (macro_steps < 2) return out;
  VectorX<Scalar> tail = VectorX<Scalar>::Zero(out.size());
  for (int i = 1; i < macro_steps; ++i) tail += series.at(static_cast<std::size_t>(i));
  out += item_weight.cwiseProduct(tail);
  return out;
}

template <typename Scalar>
VectorX<Scalar> combine_renbi(const std::vector<VectorX<Scalar>>& series, Scalar theta) {
  return series.at(0) + theta * series.at(1);
}

template <typename Scalar = double>
VectorX<Scalar> item_degree_weights(const BipartiteGraph& graph, Scalar theta) {
  using std::pow;
  VectorX<Scalar> w(graph.num_items());
  for (Index a = 0; a < graph.num_items(); ++a) {
    const Index k = graph.item_degree(a);
    w[a] = k == 0 ? Scalar(0) : Scalar(1) / pow(static_cast<Scalar>(k), theta);
  }
  return w;
}

// Semi-local diffusion: f^(n) = W^n f with lambda = 1. n = 1 is mass diffusion.
template <typename Scalar = double>
VectorX<Scalar> sld_scores(const BipartiteGraph& graph, Index user, int macro_steps) {
  const HybridOperator<Scalar> op(graph, Scalar(1));
  return macro_step_series(op, initial_resource<Scalar>(graph, user), macro_steps).back();
}

// F_a = f^(1)_a + sum_{i>=2} f^(i)_a / k_u^theta
template <typename Scalar = double>
VectorX<Scalar> usld_scores(const BipartiteGraph& graph, Index user, int macro_steps,
                            Scalar theta) {
  const HybridOperator<Scalar> op(graph, Scalar(1));
  const auto series =
      macro_step_series(op, initial_resource<Scalar>(graph, user), macro_steps);
  return combine_usld(series, macro_steps, graph.user_degree(user), theta);
}

// F_a = f^(1)_a + sum_{i>=2} f^(i)_a / k_a^theta
template <typename Scalar = double>
VectorX<Scalar> osld_scores(const BipartiteGraph& graph, Index user, int macro_steps,
                            Scalar theta) {
  const HybridOperator<Scalar> op(graph, Scalar(1));
  const auto series =
      macro_step_series(op, initial_resource<Scalar>(graph, user), macro_steps);
  return combine_osld(series, macro_steps, item_degree_weights(graph, theta));
}

// f' = (W + theta W^2) f with lambda = 1. Entries may be negative for theta < 0.
template <typename Scalar = double>
VectorX<Scalar> renbi_scores(const BipartiteGraph& graph, Index user, Scalar theta) {
  const HybridOperator<Scalar> op(graph, Scalar(1));
  return combine_renbi(macro_step_series(op, initial_resource<Scalar>(graph, user), 2),
                       theta);
}

enum class CoverageDenominator { kAllItems, kUncollectedItems };

// Fraction of items holding positive resource after `steps` bipartite steps
// (1 + 2 * macro-steps; the default 3 is one macro-step). Throws
// ColdStartError for a user without links.
double coverage(const BipartiteGraph& graph, Index user, int steps = 3,
                CoverageDenominator denominator = CoverageDenominator::kAllItems);

// Scores users for one parameter setting. Holds the operator and any
// per-item weights so repeated calls only pay for the diffusion itself.
// Safe to share across threads.
class Scorer {
 public:
  Scorer(const BipartiteGraph& graph, DiffusionParams params);

  const DiffusionParams& params() const { return params_; }
  const BipartiteGraph& graph() const { return *graph_; }

  ResourceVector score(Index user) const;

 private:
  const BipartiteGraph* graph_;
  DiffusionParams params_;
  HybridOperator<double> op_;
  ResourceVector item_weight_;
};

}  // namespace sld
