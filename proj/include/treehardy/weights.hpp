#pragma once

#include <vector>

#include "treehardy/tree.hpp"

namespace treehardy {

// Integrability exponent p in (1, inf) with its conjugate p* = p/(p-1).
struct Exponent {
  double p;
  explicit Exponent(double p_);
  double conj() const { return p / (p - 1.0); }
};

enum class WeightRole { primal, dual, canonical };

// One value per stored segment; every actual edge in a segment carries the
// same weight, so rules whose value changes with depth refuse compressed
// trees (the generator must expand first).
struct EdgeWeight {
  std::vector<double> value;
  WeightRole role = WeightRole::primal;

  double operator[](VertexId e) const { return value[e]; }
  void validate(const RootedTree& t) const;  // size match, strictly positive
};

EdgeWeight const_weight(const RootedTree& t, double c);

// |omega| = 1, |alpha| = |p(alpha)| / (child count of b(alpha)).  Constant
// along chains, so compressed trees are fine.
EdgeWeight canonical_weight(const RootedTree& t);

// 2^(-a d(alpha)) on a dyadic tree; requires 0 <= a*p < 1.
EdgeWeight besov_weight(const RootedTree& t, double a, Exponent p);

// 2^(lambda d(alpha)), any sign of lambda
EdgeWeight exp_weight(const RootedTree& t, double lambda);

// sigma = pi^(1 - p*) and back again; the map is an involution because
// (1-p)(1-p*) = 1.
EdgeWeight pi_to_sigma(const EdgeWeight& pi, Exponent p);
EdgeWeight sigma_to_pi(const EdgeWeight& sigma, Exponent p);

}  // namespace treehardy
