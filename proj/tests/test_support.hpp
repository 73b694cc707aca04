#pragma once

// Shared fixtures for the test suites: seeded random instances plus the
// independent oracles (convex minimization for capacities, dense eigensolve
// for the p=2 norm).  The oracles deliberately avoid the library's
// series-parallel and power-iteration code paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "treehardy/measure.hpp"
#include "treehardy/potential.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/weights.hpp"

namespace th_test {

using namespace treehardy;

// random tree with branching 1..max_branch per vertex, truncated at max_depth
inline RootedTree random_tree(std::mt19937_64& rng, int max_depth, int max_branch = 3,
                              double stop_prob = 0.25) {
  TreeBuilder b;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> branch(1, max_branch);
  std::vector<std::pair<VertexId, int>> frontier{{0, 0}};
  while (!frontier.empty()) {
    auto [v, d] = frontier.back();
    frontier.pop_back();
    if (d >= max_depth) continue;
    if (d > 0 && uni(rng) < stop_prob) continue;  // leaf here
    int k = branch(rng);
    for (int i = 0; i < k; ++i) frontier.push_back({b.add_child(v), d + 1});
  }
  return b.build();
}

inline std::vector<double> random_masses(std::mt19937_64& rng, const RootedTree& t,
                                         bool leaves_only = false, double zero_prob = 0.3) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> m(t.vertex_count(), 0.0);
  if (leaves_only) {
    for (VertexId v : t.leaves()) m[v] = uni(rng);
  } else {
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
      if (uni(rng) >= zero_prob) m[v] = uni(rng);
  }
  // make sure something is there
  double tot = 0;
  for (double x : m) tot += x;
  if (tot == 0.0) m[t.leaves().front()] = 0.5 + uni(rng);
  return m;
}

inline EdgeWeight random_weight(std::mt19937_64& rng, const RootedTree& t,
                                double lo = 0.2, double hi = 5.0) {
  std::uniform_real_distribution<double> uni(std::log(lo), std::log(hi));
  EdgeWeight w;
  w.value.resize(t.edge_count());
  for (auto& x : w.value) x = std::exp(uni(rng));
  return w;
}

// ---- capacity oracle -------------------------------------------------------
//
// Minimizes sum_alpha pi (V_e - V_b)_+^p over potentials with V(o*) = 0 and
// V = 1 at the target endpoints, by cyclic coordinate minimization; each
// vertex update is a one-dimensional convex problem solved by bisection on
// the monotone derivative.  Plain trees only.
inline double capacity_oracle(const RootedTree& t, const Antichain& targets,
                              const EdgeWeight& pi, Exponent p,
                              int max_sweeps = 40000, double sweep_tol = 1e-14) {
  t.require_plain("capacity_oracle");
  std::vector<char> is_target(t.vertex_count(), 0), relevant(t.vertex_count(), 0);
  for (VertexId e : targets.edges) is_target[e] = 1;
  for (VertexId e : targets.edges)
    for (VertexId u = e; u != kNoVertex && !relevant[u]; u = t.parent(u)) relevant[u] = 1;

  std::vector<double> V(t.vertex_count(), 0.0);
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    if (is_target[v]) V[v] = 1.0;

  auto deriv = [&](VertexId v, double x) {
    // d/dx of pi_v (x - V_parent)_+^p + sum_children pi_w (V_w - x)_+^p
    double up = v == 0 ? 0.0 : V[t.parent(v)];
    double g = 0.0;
    if (x > up) g += pi[v] * p.p * std::pow(x - up, p.p - 1.0);
    for (VertexId w : t.children(v)) {
      if (!relevant[w]) continue;
      if (V[w] > x) g -= pi[w] * p.p * std::pow(V[w] - x, p.p - 1.0);
    }
    return g;
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
      if (!relevant[v] || is_target[v]) continue;
      double lo = v == 0 ? 0.0 : V[t.parent(v)];
      double hi = lo;
      for (VertexId w : t.children(v))
        if (relevant[w]) hi = std::max(hi, V[w]);
      if (hi <= lo) {
        moved = std::max(moved, std::abs(V[v] - lo));
        V[v] = lo;
        continue;
      }
      double a = lo, b = hi;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        (deriv(v, mid) >= 0.0 ? b : a) = mid;
      }
      double x = 0.5 * (a + b);
      moved = std::max(moved, std::abs(V[v] - x));
      V[v] = x;
    }
    if (moved < sweep_tol) break;
  }
  double cost = 0.0;
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    if (!relevant[v]) continue;
    double up = v == 0 ? 0.0 : V[t.parent(v)];
    double d = V[v] - up;
    if (d > 0.0) cost += pi[v] * std::pow(d, p.p);
  }
  return cost;
}

// ---- dense p=2 norm oracle -------------------------------------------------
//
// [mu] at p = 2 equals the top eigenvalue of the kernel K(x,y) = d_pi(x^y)
// against mu, symmetrized as D^(1/2) K D^(1/2) and handed to Eigen.
inline double norm_p2_oracle(const RootedTree& t, const TreeMeasure& mu,
                             const EdgeWeight& pi) {
  std::vector<VertexId> support;
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    if (mu.mass[v] > 0.0) support.push_back((VertexId)v);
  if (support.empty()) return 0.0;
  // d_pi up to each vertex (sum of 1/pi along [o*, v], segment lengths in)
  std::vector<double> dpi(t.vertex_count(), 0.0);
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    double above = v == 0 ? 0.0 : dpi[t.parent(v)];
    dpi[v] = above + (double)t.segment_length(v) / pi[v];
  }
  const int n = (int)support.size();
  Eigen::MatrixXd S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto [m, dist] = t.confluent(support[i], support[j]);
      (void)dist;
      double k = dpi[m] * std::sqrt(mu.mass[support[i]] * mu.mass[support[j]]);
      S(i, j) = S(j, i) = k;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  return es.eigenvalues().maxCoeff();
}

}  // namespace th_test
