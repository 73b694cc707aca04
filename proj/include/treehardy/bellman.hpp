#pragma once

#include <cstdint>
#include <vector>

#include "treehardy/measure.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

// State of the imbedding recursion at one edge: the four normalized
// cumulants F = I*(phi^p)/|a|, f = I*phi/|a|, A = flow budget/|a|,
// v = I*/|a|.  Domain membership D means f^p <= F v^(p-1) and A <= v.
struct BellmanPoint {
  double F = 0.0;
  double f = 0.0;
  double A = 0.0;
  double v = 0.0;
  Exponent p = Exponent(2.0);
};

// (p*)^p (F - ((p-1)/(A+(p-1)v))^(p-1) f^p).  The f = 0 ray is filled by
// continuity with (p*)^p F; a vanishing denominator with f > 0 throws.
double bellman_eval(const BellmanPoint& x);

bool bellman_in_domain(const BellmanPoint& x, double slack = 1e-12);

struct ConcavityReport {
  int points = 0;
  int pairs = 0;
  bool hessian_ok = true;      // largest eigenvalue of the second-difference
  double max_eigenvalue = 0.0; // matrix, relative to its norm; one zero
                               // eigenvalue rides the homogeneity direction
  bool midpoint_ok = true;
  double min_midpoint_gap = 0.0;  // B(mid) - mean of endpoints, over pairs
  bool a_concave_ok = true;
  bool homogeneity_ok = true;     // B(tx) = t B(x)
  double max_homogeneity_gap = 0.0;
};

// Numerical concavity evidence at random interior points of D: 4x4 central
// second differences fed to an eigensolver, midpoint tests on random pairs,
// the one-variable concavity in A, and degree-1 homogeneity.
ConcavityReport concavity_probe(Exponent p, int samples,
                                std::uint64_t seed = 11,
                                int midpoint_pairs = 10000);

struct StepReport {
  std::int64_t edges = 0;
  bool domain_ok = true;     // every x_alpha lies in D
  bool recursion_ok = true;  // x_alpha = y_alpha + sum k_beta x_beta
  double max_recursion_gap = 0.0;
  bool edgewise_ok = true;   // |a|B(x_a) - sum |b|B(x_b) >= sigma(a) f_a^p
  double min_edgewise_gap = 0.0;
  double telescope_gap = 0.0;  // telescoped differences against |w|B(x_w)
  double lhs_total = 0.0;      // sum over edges of sigma f^p
  double conclusion_cap = 0.0; // |w| (p*)^p F_w
  bool conclusion_ok = true;
  std::vector<BellmanPoint> family;  // x_alpha, indexed by edge id
};

// Builds the exact point family of the imbedding proof for (sigma, lambda,
// phi) and checks every step of it.  lambda is a measure on the edges
// (vertex masses), phi a nonnegative function on edges.  The flow budget
// sum_{b<=a} sigma(b) I*(b)^p / |b|^p <= I*(a) is verified first and a
// violation throws, naming the offending edge.  Plain trees only.
StepReport step_check(const RootedTree& t, const EdgeWeight& sigma,
                      const TreeMeasure& lambda, const EdgeFunction& phi,
                      Exponent p);

struct CetReport {
  int trials = 0;
  double max_ratio = 0.0;  // lhs over (p*)^p ||phi||^p, at most 1
  bool pass = true;
};

// Random-phi stress of the imbedding inequality
// sum sigma (I*phi / |a|)^p <= (p*)^p sum phi^p lambda.
CetReport cet_verify(const RootedTree& t, const EdgeWeight& sigma,
                     const TreeMeasure& lambda, Exponent p, int trials,
                     std::uint64_t seed = 11);

struct BellmanInstance {
  EdgeWeight sigma;
  TreeMeasure lambda;
};

// Test-harness generator: random leaf masses, sigma proportional to
// |a|^p I*(a)^(1-p), then one scaling pass so the flow budget holds with
// margin.  Not tied to any particular measure geometry.
BellmanInstance admissible_instance(const RootedTree& t, std::uint64_t seed,
                                    Exponent p);

}  // namespace treehardy
