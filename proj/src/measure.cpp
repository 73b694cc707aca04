#include "treehardy/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace treehardy {

TreeMeasure cumulate(const RootedTree& t, std::vector<double> mass) {
  if (mass.size() != t.vertex_count())
    throw std::invalid_argument("cumulate: mass vector size does not match tree");
  for (double m : mass)
    if (m < 0.0 || !std::isfinite(m))
      throw std::invalid_argument("cumulate: masses must be finite and nonnegative");
  TreeMeasure mu;
  mu.tent = mass;
  mu.mass = std::move(mass);
  for (VertexId v = (VertexId)t.vertex_count() - 1; v > 0; --v)
    mu.tent[t.parent(v)] += mu.tent[v];
  return mu;
}

TreeMeasure lebesgue_measure(const RootedTree& t) {
  EdgeWeight w = canonical_weight(t);
  std::vector<double> mass(t.vertex_count(), 0.0);
  for (VertexId leaf : t.leaves()) mass[leaf] = w[leaf];
  return cumulate(t, std::move(mass));
}

TreeMeasure dirac(const RootedTree& t, VertexId at, double mass) {
  if (at < 0 || (std::size_t)at >= t.vertex_count())
    throw std::invalid_argument("dirac: vertex out of range");
  std::vector<double> m(t.vertex_count(), 0.0);
  m[at] = mass;
  return cumulate(t, std::move(m));
}

}  // namespace treehardy
