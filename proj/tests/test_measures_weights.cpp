#include "doctest.h"
#include "test_support.hpp"
#include "treehardy/measure.hpp"
#include "treehardy/weights.hpp"

#include <random>

using namespace treehardy;

TEST_CASE("tent cumulation") {
  RootedTree t = RootedTree::homogeneous(2, 2);
  std::vector<double> mass(t.vertex_count(), 0.0);
  double next = 1.0;
  for (VertexId leaf : t.leaves()) mass[leaf] = next++;
  TreeMeasure mu = cumulate(t, mass);
  CHECK(mu.tent[0] == 10.0);
  VertexId left = t.children(0)[0];
  CHECK(mu.tent[left] == 3.0);

  // mass on the root belongs to every tent containing o, i.e. only omega
  std::vector<double> atroot(t.vertex_count(), 0.0);
  atroot[0] = 5.0;
  TreeMeasure nu = cumulate(t, atroot);
  CHECK(nu.tent[0] == 5.0);
  CHECK(nu.tent[left] == 0.0);

  std::vector<double> bad(t.vertex_count(), 0.0);
  bad[2] = -1.0;
  CHECK_THROWS_AS(cumulate(t, bad), std::invalid_argument);
  CHECK_THROWS_AS(cumulate(t, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("boundary lebesgue measure reproduces canonical weights") {
  RootedTree t = RootedTree::homogeneous(2, 2);
  TreeMeasure mu = lebesgue_measure(t);
  for (VertexId leaf : t.leaves()) CHECK(mu.mass[leaf] == 0.25);
  CHECK(mu.tent[t.children(0)[0]] == 0.5);
  CHECK(mu.tent[0] == 1.0);

  // on any truncation the tent of each edge equals its canonical weight
  std::mt19937_64 rng(7);
  RootedTree r = th_test::random_tree(rng, 5);
  TreeMeasure lr = lebesgue_measure(r);
  EdgeWeight w = canonical_weight(r);
  for (VertexId v = 0; v < (VertexId)r.vertex_count(); ++v)
    CHECK(lr.tent[v] == doctest::Approx(w[v]).epsilon(1e-14));
}

TEST_CASE("canonical weight flow condition") {
  std::mt19937_64 rng(21);
  RootedTree t = th_test::random_tree(rng, 5);
  EdgeWeight w = canonical_weight(t);
  CHECK(w[0] == 1.0);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    if (t.is_leaf(v)) continue;
    double sum = 0.0;
    for (VertexId c : t.children(v)) sum += w[c];
    CHECK(sum == doctest::Approx(w[v]).epsilon(1e-14));
  }
  // dyadic splits are exact in binary arithmetic
  RootedTree d = RootedTree::homogeneous(2, 4);
  EdgeWeight wd = canonical_weight(d);
  for (VertexId v = 0; v < (VertexId)d.vertex_count(); ++v)
    if (!d.is_leaf(v)) CHECK(wd[d.children(v)[0]] + wd[d.children(v)[1]] == wd[v]);
}

TEST_CASE("pi/sigma dictionary") {
  RootedTree t = RootedTree::homogeneous(2, 1);
  EdgeWeight pi = const_weight(t, 4.0);
  EdgeWeight sg = pi_to_sigma(pi, Exponent(2.0));
  CHECK(sg[0] == 0.25);

  EdgeWeight pi8 = const_weight(t, 8.0);
  EdgeWeight sg8 = pi_to_sigma(pi8, Exponent(3.0));
  CHECK(sg8[0] == doctest::Approx(0.35355339059327379).epsilon(1e-15));

  std::mt19937_64 rng(4);
  for (double p : {1.5, 2.0, 3.0}) {
    EdgeWeight w = th_test::random_weight(rng, t);
    EdgeWeight back = sigma_to_pi(pi_to_sigma(w, Exponent(p)), Exponent(p));
    for (std::size_t i = 0; i < w.value.size(); ++i)
      CHECK(back.value[i] == doctest::Approx(w.value[i]).epsilon(1e-12));
  }
}

TEST_CASE("besov and exponential weights") {
  RootedTree t = RootedTree::homogeneous(2, 2);
  EdgeWeight b = besov_weight(t, 0.25, Exponent(2.0));
  CHECK(b[0] == 1.0);
  VertexId deep = t.leaves()[0];
  CHECK(b[deep] == doctest::Approx(0.70710678118654752).epsilon(1e-15));

  CHECK_THROWS_AS(besov_weight(t, 0.5, Exponent(2.0)), std::invalid_argument);
  CHECK_THROWS_AS(besov_weight(t, -0.1, Exponent(2.0)), std::invalid_argument);
  RootedTree t3 = RootedTree::homogeneous(3, 1);
  CHECK_THROWS_AS(besov_weight(t3, 0.1, Exponent(2.0)), std::invalid_argument);

  EdgeWeight e = exp_weight(t, -1.0);
  CHECK(e[0] == 1.0);
  CHECK(e[deep] == 0.25);

  CHECK_THROWS_AS(Exponent(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponent(0.5), std::invalid_argument);
}

TEST_CASE("weights reject compressed depth-varying rules") {
  TreeBuilder b;
  b.add_child(0, 6);
  RootedTree t = b.build();
  CHECK_THROWS_AS(exp_weight(t, 0.5), std::invalid_argument);
  CHECK(exp_weight(t, 0.0).value[0] == 1.0);  // constant rule is fine
  EdgeWeight cw = canonical_weight(t);        // chains have one child, weight constant
  CHECK(cw[1] == 1.0);
}
