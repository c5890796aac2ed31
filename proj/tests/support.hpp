#pragma once

// Test-only oracles and graph generators. Nothing here calls into the
// diffusion code it checks.

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "sld/bipartite_graph.hpp"

namespace sld::testing {

// G1: u0-{i0, i1}, u1-{i1, i2}.
inline std::vector<Edge> g1_edges() { return {{0, 0}, {0, 1}, {1, 1}, {1, 2}}; }
inline BipartiteGraph g1() { return BipartiteGraph::FromEdges(2, 3, g1_edges()); }

inline Eigen::MatrixXd dense_adjacency(Index num_users, Index num_items,
                                       const std::vector<Edge>& edges) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(num_users, num_items);
  for (const Edge& e : edges) a(e.user, e.item) = 1.0;
  return a;
}

// W_ab = 1 / (k_a^(1-lambda) k_b^lambda) * sum_j a_ja a_jb / k_j, entry by
// entry. Rows and columns of zero-degree items are zero.
inline Eigen::MatrixXd dense_w(const Eigen::MatrixXd& a, double lambda) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = a.cols();
  const Eigen::VectorXd ku = a.rowwise().sum();
  const Eigen::VectorXd ki = a.colwise().sum().transpose();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = 0; y < m; ++y) {
      if (ki[x] == 0 || ki[y] == 0) continue;
      double s = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (ku[j] > 0) s += a(j, x) * a(j, y) / ku[j];
      }
      w(x, y) = s / (std::pow(ki[x], 1.0 - lambda) * std::pow(ki[y], lambda));
    }
  }
  return w;
}

inline Eigen::VectorXd dense_initial(const Eigen::MatrixXd& a, Index user) {
  return a.row(user).transpose();
}

// Items reachable from `user` by a walk of exactly `steps` bipartite steps
// (user -> item -> user -> item ...), by breadth-first layer expansion.
inline std::set<Index> reachable_items(const Eigen::MatrixXd& a, Index user, int steps) {
  std::set<Index> users{user};
  std::set<Index> items;
  for (int s = 0; s < steps; ++s) {
    if (s % 2 == 0) {
      items.clear();
      for (Index u : users) {
        for (Eigen::Index i = 0; i < a.cols(); ++i) {
          if (a(u, i) > 0) items.insert(static_cast<Index>(i));
        }
      }
    } else {
      users.clear();
      for (Index i : items) {
        for (Eigen::Index u = 0; u < a.rows(); ++u) {
          if (a(u, i) > 0) users.insert(static_cast<Index>(u));
        }
      }
    }
  }
  return items;
}

struct RandomGraph {
  Index num_users = 0;
  Index num_items = 0;
  std::vector<Edge> edges;
  BipartiteGraph graph;
};

// Each pair present with probability `density`; at least one edge.
inline RandomGraph random_graph(std::mt19937_64& rng, Index max_users, Index max_items,
                                double min_density, double max_density) {
  std::uniform_int_distribution<Index> nu(1, max_users);
  std::uniform_int_distribution<Index> ni(1, max_items);
  std::uniform_real_distribution<double> dens(min_density, max_density);
  RandomGraph g;
  g.num_users = nu(rng);
  g.num_items = ni(rng);
  const double p = dens(rng);
  std::bernoulli_distribution coin(p);
  for (Index u = 0; u < g.num_users; ++u) {
    for (Index i = 0; i < g.num_items; ++i) {
      if (coin(rng)) g.edges.push_back({u, i});
    }
  }
  if (g.edges.empty()) g.edges.push_back({0, 0});
  g.graph = BipartiteGraph::FromEdges(g.num_users, g.num_items, g.edges);
  return g;
}

// Chung-Lu style bipartite graph: endpoint weights follow a Pareto law, and
// `num_links` distinct pairs are drawn with probability proportional to
// w_user * w_item.
inline std::vector<Edge> power_law_edges(std::mt19937_64& rng, Index num_users,
                                         Index num_items, std::size_t num_links,
                                         double exponent = 2.1) {
  const auto weights = [&](Index n) {
    std::vector<double> w(n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& x : w) x = std::pow(1.0 - unif(rng), -1.0 / (exponent - 1.0));
    return w;
  };
  const auto wu = weights(num_users);
  const auto wi = weights(num_items);
  std::discrete_distribution<Index> pick_user(wu.begin(), wu.end());
  std::discrete_distribution<Index> pick_item(wi.begin(), wi.end());
  std::set<Edge> seen;
  std::vector<Edge> edges;
  while (edges.size() < num_links) {
    const Edge e{pick_user(rng), pick_item(rng)};
    if (seen.insert(e).second) edges.push_back(e);
  }
  return edges;
}

}  // namespace sld::testing
