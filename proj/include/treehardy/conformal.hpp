#pragma once

#include <cstdint>
#include <vector>

#include "treehardy/measure.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/unrooted.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

// The p = 2, unit weight theory on an unrooted truncation.  Leaf masses stand
// in for a boundary measure and are normalized to total one throughout.

struct RootProfile {
  std::vector<VertexId> roots;  // interior candidates, in evaluation order
  std::vector<double> value;    // trace norm of the tree rooted there
  double min_value = 0.0;
  VertexId argmin = kNoVertex;
  bool converged = true;
};

// Rooting at o turns the mean-free gradient form into the usual rooted norm
// with the pre-root edge carrying the value at o, so each profile entry is an
// exact p = 2 eigensolve.  Empty candidate list means every interior vertex.
RootProfile rooted_norm_profile(const UnrootedTruncation& tr,
                                const std::vector<double>& leaf_mass,
                                std::vector<VertexId> roots = {});

// Arc of the boundary: the leaves hanging on the head side of an interior
// edge; flipping the direction gives the complementary arc.
struct ArcRef {
  VertexId tail = kNoVertex;
  VertexId head = kNoVertex;
};

// Canonical relabeling of a mass-labeled truncation.  Isomorphic inputs map
// to the identical instance, so anything computed downstream is exactly
// invariant under relabelings and automorphisms.  old_of_new[i] is the input
// id of canonical vertex i.
struct CanonicalTruncation {
  UnrootedTruncation tree;
  std::vector<double> mass;
  std::vector<VertexId> old_of_new;
};

CanonicalTruncation canonical_form(const UnrootedTruncation& tr,
                                   const std::vector<double>& mass);

struct InvReport {
  bool dirac = false;      // all mass on one leaf, both sides vanish
  double direct = 0.0;     // best constant of the mean-centered gradient form
  double arc_ratio = 0.0;  // sup mu(A) mu(B) / Cap(A, B) over surveyed pairs
  ArcRef witness_a;
  ArcRef witness_b;
  std::int64_t pairs = 0;  // disjoint arc pairs evaluated
  bool exhaustive = false;
};

// The invariant constant two ways: a dense generalized eigensolve of the
// centered quadratic form against the graph Dirichlet form, and the condenser
// ratio over disjoint arc pairs (all of them when their number fits the
// budget, a seeded sample otherwise).  The ratio never exceeds the direct
// constant; the reverse comparison holds up to an absolute factor only.
// Everything runs on the canonical form, so the numbers are exactly equal for
// isomorphic inputs; the witness arcs are mapped back to input ids.
InvReport inv_constant_estimate(const UnrootedTruncation& tr,
                                const std::vector<double>& leaf_mass,
                                std::int64_t pair_budget = 4000,
                                std::uint64_t seed = 17);

struct HalvingResult {
  bool ok = false;
  ArcRef arc;  // I1; the complementary direction is I2
  double mass_i1 = 0.0;
  double mass_i2 = 0.0;
  int steps = 0;
};

// Walks toward the heavy side until the boundary splits into complementary
// arcs of mass in [1/3, 2/3].  Fails only when one leaf carries more than
// two thirds of the mass, the truncation analogue of a large atom.
HalvingResult halving_walk(const UnrootedTruncation& tr,
                           const std::vector<double>& leaf_mass);

// Exact recursion for the condenser capacity between arcs in distinct
// branches of an interior vertex: splitting the extremal potential at o gives
// Cap(A1, A2 u A3) = c1 (c2 + c3) / (c1 + c2 + c3) with c_j the capacity of
// the point condenser (o, A_j).
struct CondenserRecursion {
  double lhs = 0.0;  // Cap(A1, A2 u A3) solved directly
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double closed_form = 0.0;
  double gap = 0.0;  // relative difference between the two
};

CondenserRecursion condenser_recursion(const UnrootedTruncation& tr, VertexId o,
                                       const std::vector<VertexId>& a1,
                                       const std::vector<VertexId>& a2,
                                       const std::vector<VertexId>& a3);

// Reproducing kernel of the weighted Dirichlet space on a rooted tree:
// K_x(y) is the weighted length of the common root path, pre-root edge
// included.
double kernel_value(const RootedTree& t, const EdgeWeight& pi, VertexId x,
                    VertexId y);

// the edge function whose primitive is K_x: 1/pi on [o*, x], zero elsewhere
EdgeFunction kernel_gradient(const RootedTree& t, const EdgeWeight& pi,
                             VertexId x);

// <phi, psi> weighted by pi over actual edges
double dirichlet_inner(const RootedTree& t, const EdgeWeight& pi,
                       const EdgeFunction& phi, const EdgeFunction& psi);

// <I phi, K_x> in the Dirichlet inner product; reproduces I phi(x)
double kernel_pairing(const RootedTree& t, const EdgeWeight& pi,
                      const EdgeFunction& phi, VertexId x);

struct GramReport {
  std::vector<VertexId> points;
  std::vector<double> matrix;  // row major
  double min_eigenvalue = 0.0;
  bool psd = false;
};

GramReport kernel_gram(const RootedTree& t, const EdgeWeight& pi,
                       const std::vector<VertexId>& points, double tol = 1e-10);

// Kernel of the difference space, K(x,a) - K(y,a) - K(x,b) + K(y,b).  Edge by
// edge it equals (chi_x - chi_y)(chi_a - chi_b) / pi, so it is supported on
// the geodesic overlap [a,b] n [x,y] with one sign, plus there when a and x
// hang off the same end of the overlap and minus when they do not.
struct DiffKernelReport {
  double value = 0.0;
  double overlap = 0.0;  // weighted length of the overlap segment
  int sign = 0;          // 0 when the overlap carries no edges
  bool sign_consistent = true;
  bool matches = false;  // value agrees with sign * overlap
};

DiffKernelReport difference_kernel(const RootedTree& t, const EdgeWeight& pi,
                                   VertexId a, VertexId b, VertexId x,
                                   VertexId y);

}  // namespace treehardy
