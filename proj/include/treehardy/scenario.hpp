#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treehardy/measure.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

// A generated instance bundling tree, weights and measure with the statement
// the construction probes and the outcome it is built to show.  Regenerating
// with the same id and seed is bit-identical.
struct Scenario {
  std::string name;  // canonical id with parameters, e.g. "nullcap(10)"
  RootedTree tree = RootedTree::homogeneous(2, 0);
  EdgeWeight weights;  // primal unless the claim says otherwise
  TreeMeasure measure;
  Exponent p = Exponent(2.0);
  std::string claim;
  std::string expected;  // short outcome tag picked up by report assembly
  std::vector<double> params;  // raw numeric parameters, in id order
  // junction bookkeeping for the deep branching scaffold: z_levels[k] holds
  // the level-k junction vertices; empty for the other generators
  std::vector<std::vector<VertexId>> z_levels;
};

// Binary scaffold whose box ratios stay bounded while the energy sum diverges
// in the truncation parameter.  Junctions z sit at depth 2^k k; each carries a
// side branch whose tip, at depth max(2^k k^2, 2^k k + 1), holds an atom of
// mass 2^-k k^-2.  Chains between junctions are compressed segments.  K is
// capped at 10 to keep reports reviewable.
Scenario counterexample83(int K);

// Dyadic tree with the halving weight 2^-d(alpha): every depth slice has unit
// conductance, so the full-boundary capacity is 1/N with N the path edge
// count.  Beyond N = 12 the scenario ships the series-reduced chain (N unit
// edges) in place of the explicit dyadic tree; the two networks have the same
// capacity by the slice reduction.
Scenario nullcap(std::int64_t N);

// Dyadic tree whose dual weight 2^(-lambda d(alpha)) decays along every ray,
// so boundary points sit at uniformly bounded dual distance and carry point
// capacity at least (1 - 2^-lambda)^(p-1).  The stored weight is the primal
// one, 2^(lambda (p-1) d(alpha)).
Scenario bounded_boundary(double lambda, int depth, double p = 2.0);

// Seeded random tree with leaf masses drawn from the named distribution:
// "uniform" on (0,1), "exp" with unit rate, or "pareto" with tail index 1.5.
Scenario random_scenario(int depth, const std::string& distribution,
                         std::uint64_t seed);

// Dyadic tree with the weight 2^(-a d(alpha)) and Lebesgue boundary measure;
// requires 0 <= a p < 1.
Scenario dyadic_besov(double a, double p, int depth);

// Parses "name(arg1,arg2,...)" and dispatches to the generators above.  The
// seed only affects random(...).  Unknown names or parameters throw.
Scenario generate(const std::string& id, std::uint64_t seed = 17);

}  // namespace treehardy
