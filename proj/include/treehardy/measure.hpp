#pragma once

#include <vector>

#include "treehardy/tree.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

// Function on edges; on compressed trees the value applies to every actual
// edge of the segment.
struct EdgeFunction {
  std::vector<double> value;
  double operator[](VertexId e) const { return value[e]; }
};

// Function on stored vertices (the boundary of a truncation is its leaf set).
struct VertexFunction {
  std::vector<double> value;
  double operator[](VertexId v) const { return value[v]; }
};

// Nonnegative masses on stored vertices plus the cumulated tent table
// tent[alpha] = mu(S(alpha)), S(alpha) closed below e(alpha).
struct TreeMeasure {
  std::vector<double> mass;
  std::vector<double> tent;
  double total() const { return tent.empty() ? 0.0 : tent[0]; }
};

// validates nonnegativity and fills the tent table bottom-up
TreeMeasure cumulate(const RootedTree& t, std::vector<double> mass);

// boundary Lebesgue measure: each leaf gets the canonical weight of its leaf
// edge; tents then reproduce |alpha| wherever every maximal path ends in a leaf
TreeMeasure lebesgue_measure(const RootedTree& t);

TreeMeasure dirac(const RootedTree& t, VertexId at, double mass = 1.0);

}  // namespace treehardy
