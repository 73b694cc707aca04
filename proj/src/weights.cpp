#include "treehardy/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace treehardy {

Exponent::Exponent(double p_) : p(p_) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("exponent p must lie in (1, inf)");
}

void EdgeWeight::validate(const RootedTree& t) const {
  if (value.size() != t.edge_count())
    throw std::invalid_argument("edge weight: size does not match tree");
  for (double w : value)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("edge weight: entries must be strictly positive");
}

EdgeWeight const_weight(const RootedTree& t, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("const weight must be positive");
  EdgeWeight w;
  w.value.assign(t.edge_count(), c);
  return w;
}

EdgeWeight canonical_weight(const RootedTree& t) {
  EdgeWeight w;
  w.role = WeightRole::canonical;
  w.value.assign(t.edge_count(), 0.0);
  w.value[0] = 1.0;
  // id order is topological
  for (VertexId v = 1; v < (VertexId)t.vertex_count(); ++v) {
    VertexId b = t.parent(v);
    w.value[v] = w.value[b] / (double)t.children(b).size();
  }
  return w;
}

EdgeWeight besov_weight(const RootedTree& t, double a, Exponent p) {
  if (!t.is_dyadic()) throw std::invalid_argument("besov weight needs a dyadic tree");
  if (a < 0.0 || a * p.p >= 1.0)
    throw std::invalid_argument("besov weight needs 0 <= a*p < 1");
  EdgeWeight w;
  w.value.resize(t.edge_count());
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    w.value[v] = std::exp2(-a * (double)t.edge_depth(v));
  return w;
}

EdgeWeight exp_weight(const RootedTree& t, double lambda) {
  if (lambda != 0.0) t.require_plain("exp_weight");
  EdgeWeight w;
  w.value.resize(t.edge_count());
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    w.value[v] = std::exp2(lambda * (double)t.edge_depth(v));
  return w;
}

static EdgeWeight pow_weight(const EdgeWeight& in, double e, WeightRole role) {
  EdgeWeight out;
  out.role = role;
  out.value.resize(in.value.size());
  for (std::size_t i = 0; i < in.value.size(); ++i) {
    if (!(in.value[i] > 0.0))
      throw std::invalid_argument("weight conversion needs positive entries");
    out.value[i] = std::pow(in.value[i], e);
  }
  return out;
}

EdgeWeight pi_to_sigma(const EdgeWeight& pi, Exponent p) {
  return pow_weight(pi, 1.0 - p.conj(), WeightRole::dual);
}

EdgeWeight sigma_to_pi(const EdgeWeight& sigma, Exponent p) {
  return pow_weight(sigma, 1.0 - p.p, WeightRole::primal);
}

}  // namespace treehardy
