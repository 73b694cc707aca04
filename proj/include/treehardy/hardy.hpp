#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treehardy/measure.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

// I phi (x) = sum of phi over the actual edges of [o*, x]
VertexFunction hardy_apply(const RootedTree& t, const EdgeFunction& phi);

// I*_mu psi (alpha) = integral of psi over S(alpha) against mu
EdgeFunction hardy_dual_apply(const RootedTree& t, const TreeMeasure& mu,
                              const VertexFunction& psi);

// T_mu = I sigma I*_mu with sigma = pi^(1-p*); for p = 2 this is the
// self-adjoint composition I I*_mu on L^2(mu).
VertexFunction t_mu_apply(const RootedTree& t, const TreeMeasure& mu,
                          const EdgeWeight& pi, Exponent p,
                          const VertexFunction& psi);

struct MaximalResult {
  VertexFunction value;
  // vertices whose whole geodesic saw only zero mu-tents; their max is
  // reported as 0
  std::vector<VertexId> degenerate;
};

// M_mu(f dsigma)(x) = max over alpha on [o*, x] of (1/mu(S(alpha))) *
// integral_{S(alpha)} |f| dsigma, skipping alphas with mu(S(alpha)) = 0
MaximalResult maximal_function(const RootedTree& t, const TreeMeasure& mu,
                               const TreeMeasure& sigma_meas,
                               const VertexFunction& f);

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_method;
  std::string upper_method;
  EdgeFunction witness;     // primal function attaining `lower` when relevant
  std::int64_t iterations = 0;
  bool converged = true;
};

// p = 2 trace constant [mu] as the top eigenvalue of T_mu on L^2(mu),
// matrix-free power iteration, Rayleigh tolerance 1e-10, at most 1e5 rounds.
// On convergence lower == upper; otherwise the residual widens the bracket.
NormBracket norm_exact_p2(const RootedTree& t, const TreeMeasure& mu,
                          const EdgeWeight& pi);

// General p bracket: lower from dual testing on tent indicators plus a
// multiplicative-update ascent with random restarts; upper from the
// mass-energy constant.  Deterministic for a fixed seed.
NormBracket norm_bracket(const RootedTree& t, const TreeMeasure& mu,
                         const EdgeWeight& pi, Exponent p, int restarts = 32,
                         std::uint64_t seed = 0);

}  // namespace treehardy
