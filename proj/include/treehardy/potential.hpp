#pragma once

#include <vector>

#include "treehardy/measure.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/unrooted.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

// Pairwise incomparable target edges, addressed by their lower vertex.
struct Antichain {
  std::vector<VertexId> edges;
  void validate(const RootedTree& t) const;  // nonempty, in range, incomparable
};

// drops every edge dominated by an ancestor already in the set
Antichain canonicalize_antichain(const RootedTree& t, std::vector<VertexId> edges);

struct CapacityResult {
  double value = 0.0;
  EdgeFunction equilibrium;  // per actual edge, zero off the target closure
  Antichain targets;
};

// Cap_{p,pi} of the union of the target tents, via the nonlinear
// series-parallel reduction (resistivities pi^(-1/(p-1)) add in series,
// capacities add in parallel), equilibrium rebuilt top-down.  The equilibrium
// invariants (I phi = 1 at every target, ||phi||^p = value) are verified
// before returning.
CapacityResult capacity(const RootedTree& t, const Antichain& targets,
                        const EdgeWeight& pi, Exponent p);

// capacity of the whole leaf boundary
CapacityResult boundary_capacity(const RootedTree& t, const EdgeWeight& pi, Exponent p);

struct WolffResult {
  VertexFunction potential;  // V(x) = sum over [o*,x] of sigma tent^(p*-1)
  double energy = 0.0;       // sum over edges of tent^(p*) pi^(1-p*)
  double energy_via_potential = 0.0;  // integral of V dmu, equal by Fubini
};

WolffResult wolff_energy(const RootedTree& t, const TreeMeasure& mu,
                         const EdgeWeight& pi, Exponent p);

struct SciLevel {
  std::int64_t k;
  double cap;
  std::size_t antichain_size;
};

struct SciReport {
  double level_sum = 0.0;    // sum over k of 2^(pk) Cap({I phi > 2^k})
  double phi_norm_p = 0.0;   // ||phi||^p_{l^p(pi)}
  double bound = 0.0;        // 2^p/(2^p - 1)
  double ratio = 0.0;        // level_sum / phi_norm_p
  bool pass = false;
  std::vector<SciLevel> levels;  // explicitly computed range, tail folded in
};

// Strong capacitary audit of the level sets of I phi; phi must be
// nonnegative and not identically zero.
SciReport sci_audit(const RootedTree& t, const EdgeFunction& phi,
                    const EdgeWeight& pi, Exponent p);

// Condenser capacity between disjoint vertex sets of an unrooted truncation:
// inf of the Dirichlet energy among F with F = 1 on a_side, F = 0 on b_side.
// Exact tree elimination, unit conductances.
double condenser_capacity(const UnrootedTruncation& t,
                          const std::vector<VertexId>& a_side,
                          const std::vector<VertexId>& b_side);

// the harmonic potential itself (F values), for cross checks
std::vector<double> condenser_potential(const UnrootedTruncation& t,
                                        const std::vector<VertexId>& a_side,
                                        const std::vector<VertexId>& b_side);

}  // namespace treehardy
