#include "treehardy/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <utility>

namespace treehardy {

namespace {

std::string num_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Scenario counterexample83(int K) {
  if (K < 1 || K > 10)
    throw std::invalid_argument("counterexample83: K must be in [1, 10]");
  auto level_depth = [](std::int64_t k) { return (std::int64_t(1) << k) * k; };
  auto atom_depth = [](std::int64_t k) {
    return (std::int64_t(1) << k) * k * k;
  };

  TreeBuilder b;
  std::vector<std::vector<VertexId>> z_levels(K + 1);
  z_levels[0] = {0};
  std::vector<std::pair<VertexId, double>> atoms;
  for (int k = 0; k <= K; ++k) {
    for (VertexId z : z_levels[k]) {
      if (k >= 1) {
        // side branch carrying the atom; at k = 1 the prescribed atom depth
        // is above the branch point, so the atom sits on the branch child
        VertexId x = b.add_child(z, 1);
        std::int64_t wd = std::max(atom_depth(k), level_depth(k) + 1);
        VertexId w =
            wd == level_depth(k) + 1 ? x : b.add_child(x, wd - level_depth(k) - 1);
        atoms.push_back({w, 1.0 / (double)atom_depth(k)});
      }
      if (k < K) {
        VertexId y = b.add_child(z, 1);
        std::int64_t run = level_depth(k + 1) - level_depth(k) - 1;
        z_levels[k + 1].push_back(b.add_child(y, run));
        z_levels[k + 1].push_back(b.add_child(y, run));
      }
    }
  }

  Scenario s;
  s.tree = b.build();
  std::vector<double> mass(s.tree.vertex_count(), 0.0);
  for (auto [w, m] : atoms) mass[w] += m;
  s.measure = cumulate(s.tree, std::move(mass));
  s.weights = const_weight(s.tree, 1.0);
  s.p = Exponent(2.0);
  s.name = "counterexample83(" + std::to_string(K) + ")";
  s.claim =
      "box ratios stay bounded at every junction while the energy sum grows "
      "without bound as the truncation deepens";
  s.expected = "box_bounded_energy_growing";
  s.params = {(double)K};
  s.z_levels = std::move(z_levels);
  return s;
}

Scenario nullcap(std::int64_t N) {
  if (N < 1) throw std::invalid_argument("nullcap: N must be positive");
  Scenario s;
  if (N <= 12) {
    s.tree = RootedTree::homogeneous(2, (int)N - 1);
    s.weights = exp_weight(s.tree, -1.0);
    s.measure = lebesgue_measure(s.tree);
    s.claim =
        "with the halving weight every depth slice of the dyadic tree has "
        "unit conductance, so the boundary capacity is 1/N and vanishes in "
        "depth; the uniform boundary measure carries no trace inequality in "
        "the limit";
  } else {
    // each depth slice reduces to a unit resistor, so past explicit reach the
    // scenario ships the equivalent chain of N unit edges
    TreeBuilder b;
    b.add_child(0, N - 1);
    s.tree = b.build();
    s.weights = const_weight(s.tree, 1.0);
    std::vector<double> mass(s.tree.vertex_count(), 0.0);
    mass[1] = 1.0;
    s.measure = cumulate(s.tree, std::move(mass));
    s.claim =
        "series reduction of the halving-weight dyadic tree: N unit edges in "
        "a row, boundary capacity 1/N";
  }
  s.p = Exponent(2.0);
  s.name = "nullcap(" + std::to_string(N) + ")";
  s.expected = "boundary_capacity_reciprocal";
  s.params = {(double)N};
  return s;
}

Scenario bounded_boundary(double lambda, int depth, double p) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("bounded_boundary: lambda must be positive");
  if (depth < 1 || depth > 14)
    throw std::invalid_argument("bounded_boundary: depth must be in [1, 14]");
  Exponent ex(p);
  Scenario s;
  s.tree = RootedTree::homogeneous(2, depth);
  EdgeWeight sigma = exp_weight(s.tree, -lambda);
  sigma.role = WeightRole::dual;
  s.weights = sigma_to_pi(sigma, ex);
  s.measure = lebesgue_measure(s.tree);
  s.p = ex;
  s.name = "bounded_boundary(" + num_text(lambda) + "," +
           std::to_string(depth) + "," + num_text(p) + ")";
  s.claim =
      "the dual weight decays geometrically along every ray, so each boundary "
      "point carries capacity at least (1 - 2^-lambda)^(p-1) and every finite "
      "measure satisfies the box condition with a uniform constant";
  s.expected = "points_positive_capacity";
  s.params = {lambda, (double)depth, p};
  return s;
}

Scenario random_scenario(int depth, const std::string& distribution,
                         std::uint64_t seed) {
  if (depth < 1 || depth > 14)
    throw std::invalid_argument("random: depth must be in [1, 14]");
  if (distribution != "uniform" && distribution != "exp" &&
      distribution != "pareto")
    throw std::invalid_argument("random: unknown distribution '" +
                                distribution + "'");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  TreeBuilder b;
  std::vector<std::pair<VertexId, int>> frontier{{0, 0}};
  while (!frontier.empty()) {
    auto [v, d] = frontier.back();
    frontier.pop_back();
    if (d >= depth) continue;
    if (d > 0 && uni(rng) < 0.2) continue;  // leaf here
    int kids = 1 + (int)(rng() % 3);
    for (int i = 0; i < kids; ++i) frontier.push_back({b.add_child(v), d + 1});
  }

  Scenario s;
  s.tree = b.build();
  std::vector<double> mass(s.tree.vertex_count(), 0.0);
  for (VertexId leaf : s.tree.leaves()) {
    double u = uni(rng);
    if (distribution == "uniform")
      mass[leaf] = u;
    else if (distribution == "exp")
      mass[leaf] = -std::log1p(-u);
    else
      mass[leaf] = std::pow(1.0 - u, -1.0 / 1.5) - 1.0;
  }
  double total = 0.0;
  for (double m : mass) total += m;
  if (total == 0.0) mass[s.tree.leaves().front()] = 1.0;
  s.measure = cumulate(s.tree, std::move(mass));
  s.weights = const_weight(s.tree, 1.0);
  s.p = Exponent(2.0);
  s.name = "random(" + std::to_string(depth) + "," + distribution + ")";
  s.claim =
      "seeded random truncation with leaf masses from the named distribution; "
      "no outcome is prescribed beyond the universal bracket inequalities";
  s.expected = "generic";
  s.params = {(double)depth};
  return s;
}

Scenario dyadic_besov(double a, double p, int depth) {
  if (depth < 1 || depth > 14)
    throw std::invalid_argument("dyadic_besov: depth must be in [1, 14]");
  Exponent ex(p);
  Scenario s;
  s.tree = RootedTree::homogeneous(2, depth);
  s.weights = besov_weight(s.tree, a, ex);
  s.measure = lebesgue_measure(s.tree);
  s.p = ex;
  s.name = "dyadic_besov(" + num_text(a) + "," + num_text(p) + "," +
           std::to_string(depth) + ")";
  s.claim =
      "dyadic tree with the smoothness weight 2^(-a d(alpha)) in the regime "
      "0 <= a p < 1 and the uniform boundary measure";
  s.expected = "besov_trace";
  s.params = {a, p, (double)depth};
  return s;
}

Scenario generate(const std::string& id, std::uint64_t seed) {
  std::size_t open = id.find('(');
  if (open == std::string::npos || id.back() != ')')
    throw std::invalid_argument("scenario id must look like name(args): " + id);
  std::string name = id.substr(0, open);
  std::string body = id.substr(open + 1, id.size() - open - 2);

  std::vector<std::string> args;
  std::size_t start = 0;
  while (start <= body.size() && !body.empty()) {
    std::size_t comma = body.find(',', start);
    std::string piece = body.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t lo = piece.find_first_not_of(" \t");
    std::size_t hi = piece.find_last_not_of(" \t");
    args.push_back(lo == std::string::npos ? std::string()
                                           : piece.substr(lo, hi - lo + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }

  auto want = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw std::invalid_argument("scenario " + name +
                                  ": wrong number of parameters");
  };
  auto real_at = [&](std::size_t i) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(args[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != args[i].size() || args[i].empty())
      throw std::invalid_argument("scenario " + name + ": bad parameter '" +
                                  args[i] + "'");
    return x;
  };
  auto int_at = [&](std::size_t i) {
    double x = real_at(i);
    if (x != std::floor(x))
      throw std::invalid_argument("scenario " + name + ": parameter '" +
                                  args[i] + "' must be an integer");
    return (std::int64_t)x;
  };

  if (name == "counterexample83") {
    want(1, 1);
    return counterexample83((int)int_at(0));
  }
  if (name == "nullcap") {
    want(1, 1);
    return nullcap(int_at(0));
  }
  if (name == "bounded_boundary") {
    want(2, 3);
    return bounded_boundary(real_at(0), (int)int_at(1),
                            args.size() == 3 ? real_at(2) : 2.0);
  }
  if (name == "random") {
    want(2, 2);
    return random_scenario((int)int_at(0), args[1], seed);
  }
  if (name == "dyadic_besov") {
    want(3, 3);
    return dyadic_besov(real_at(0), real_at(1), (int)int_at(2));
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace treehardy
