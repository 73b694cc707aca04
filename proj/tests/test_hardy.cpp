#include "doctest.h"
#include "test_support.hpp"
#include "treehardy/hardy.hpp"

#include <random>

using namespace treehardy;

TEST_CASE("hardy prefix sums") {
  RootedTree path = RootedTree::from_parent_list({{1, 0}}, 0);
  EdgeFunction phi{{1.0, 2.0}};
  VertexFunction f = hardy_apply(path, phi);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 3.0);

  RootedTree t = RootedTree::homogeneous(2, 2);
  EdgeFunction ones{std::vector<double>(t.edge_count(), 1.0)};
  VertexFunction g = hardy_apply(t, ones);
  for (VertexId leaf : t.leaves()) CHECK(g[leaf] == 3.0);
}

TEST_CASE("dual operator on the constant function is the tent table") {
  std::mt19937_64 rng(31);
  RootedTree t = th_test::random_tree(rng, 5);
  TreeMeasure mu = cumulate(t, th_test::random_masses(rng, t));
  VertexFunction ones{std::vector<double>(t.vertex_count(), 1.0)};
  EdgeFunction dual = hardy_dual_apply(t, mu, ones);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    CHECK(dual[v] == doctest::Approx(mu.tent[v]).epsilon(1e-14));
}

TEST_CASE("duality pairing") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    RootedTree t = th_test::random_tree(rng, 5);
    TreeMeasure mu = cumulate(t, th_test::random_masses(rng, t));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    EdgeFunction phi;
    VertexFunction psi;
    phi.value.resize(t.edge_count());
    psi.value.resize(t.vertex_count());
    for (auto& x : phi.value) x = uni(rng);
    for (auto& x : psi.value) x = uni(rng);

    VertexFunction iphi = hardy_apply(t, phi);
    EdgeFunction dual = hardy_dual_apply(t, mu, psi);
    double lhs = 0.0, rhs = 0.0, scale = 0.0;
    for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
      lhs += iphi[v] * psi[v] * mu.mass[v];
      rhs += (double)t.segment_length(v) * phi[v] * dual[v];
      scale += std::abs(iphi[v] * psi[v]) * mu.mass[v];
    }
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("composition operator fixtures") {
  // one edge with mass m: T psi(o) = m for psi = 1
  RootedTree one = RootedTree::homogeneous(2, 0);
  TreeMeasure mu1 = dirac(one, 0, 0.8);
  VertexFunction ones{{1.0}};
  VertexFunction tv = t_mu_apply(one, mu1, const_weight(one, 1.0), Exponent(2.0), ones);
  CHECK(tv[0] == doctest::Approx(0.8).epsilon(1e-15));

  // dyadic depth 1, masses (1/2, 1/2): value 3/2 at both leaves
  RootedTree t = RootedTree::homogeneous(2, 1);
  std::vector<double> m(t.vertex_count(), 0.0);
  m[1] = m[2] = 0.5;
  TreeMeasure mu = cumulate(t, m);
  VertexFunction psi{std::vector<double>(t.vertex_count(), 1.0)};
  VertexFunction out = t_mu_apply(t, mu, const_weight(t, 1.0), Exponent(2.0), psi);
  CHECK(out[1] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(out[2] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("composition operator equals the confluent kernel at p=2, pi=1") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 10; ++rep) {
    RootedTree t = th_test::random_tree(rng, 4);
    TreeMeasure mu = cumulate(t, th_test::random_masses(rng, t));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    VertexFunction psi;
    psi.value.resize(t.vertex_count());
    for (auto& x : psi.value) x = uni(rng);
    VertexFunction lhs = t_mu_apply(t, mu, const_weight(t, 1.0), Exponent(2.0), psi);
    for (VertexId x = 0; x < (VertexId)t.vertex_count(); ++x) {
      double rhs = 0.0;
      for (VertexId y = 0; y < (VertexId)t.vertex_count(); ++y) {
        if (mu.mass[y] == 0.0) continue;
        rhs += (double)t.path_edge_count(t.confluent(x, y).first) * psi[y] * mu.mass[y];
      }
      CHECK(lhs[x] == doctest::Approx(rhs).epsilon(1e-11));
    }
  }
}

TEST_CASE("maximal function fixture and degeneracy flag") {
  RootedTree t = RootedTree::homogeneous(2, 1);
  std::vector<double> half(t.vertex_count(), 0.0);
  half[1] = half[2] = 0.5;
  TreeMeasure mu = cumulate(t, half);
  VertexFunction f{{0.0, 2.0, 0.0}};
  MaximalResult res = maximal_function(t, mu, mu, f);
  CHECK(res.value[1] == 2.0);   // local average wins
  CHECK(res.value[0] == 1.0);   // root only sees the global one
  CHECK(res.value[2] == 1.0);
  CHECK(res.degenerate.empty());

  TreeMeasure zero = cumulate(t, std::vector<double>(t.vertex_count(), 0.0));
  MaximalResult degen = maximal_function(t, zero, mu, f);
  CHECK(degen.degenerate.size() == t.vertex_count());
  for (double v : degen.value.value) CHECK(v == 0.0);
}

TEST_CASE("maximal weak (1,1) and strong (p) bounds") {
  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 40; ++rep) {
    RootedTree t = th_test::random_tree(rng, 4);
    TreeMeasure mu = cumulate(t, th_test::random_masses(rng, t));
    TreeMeasure sg = cumulate(t, th_test::random_masses(rng, t));
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    VertexFunction psi;
    psi.value.resize(t.vertex_count());
    for (auto& x : psi.value) x = uni(rng);

    // M_mu(psi dmu) and M_mu(dsigma)
    MaximalResult mpsi = maximal_function(t, mu, mu, psi);
    VertexFunction ones{std::vector<double>(t.vertex_count(), 1.0)};
    MaximalResult msig = maximal_function(t, mu, sg, ones);

    double rhs_weak = 0.0;
    for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
      rhs_weak += psi[v] * msig.value[v] * mu.mass[v];
    // exhaustive level scan: lambda sigma{M > lambda} evaluated at every value
    for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
      double lam = mpsi.value[v];
      if (lam <= 0.0) continue;
      double meas = 0.0;
      for (VertexId w = 0; w < (VertexId)t.vertex_count(); ++w)
        if (mpsi.value[w] >= lam) meas += sg.mass[w];
      CHECK(lam * meas <= rhs_weak * (1.0 + 1e-12) + 1e-15);
    }

    for (double p : {1.5, 2.0, 3.0}) {
      double ps = p / (p - 1.0);
      double lhs = 0.0, rhs = 0.0;
      for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
        lhs += std::pow(mpsi.value[v], p) * sg.mass[v];
        rhs += std::pow(psi[v], p) * msig.value[v] * mu.mass[v];
      }
      CHECK(lhs <= std::pow(ps, p) * rhs * (1.0 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("p=2 norm fixtures") {
  RootedTree one = RootedTree::homogeneous(2, 0);
  NormBracket nb = norm_exact_p2(one, dirac(one, 0, 0.7), const_weight(one, 1.0));
  CHECK(nb.lower == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(nb.converged);

  RootedTree t = RootedTree::homogeneous(2, 1);
  std::vector<double> m(t.vertex_count(), 0.0);
  m[1] = m[2] = 0.5;
  TreeMeasure mu = cumulate(t, m);
  EdgeWeight pi = const_weight(t, 1.0);
  NormBracket nb2 = norm_exact_p2(t, mu, pi);
  CHECK(nb2.lower == doctest::Approx(1.5).epsilon(1e-9));

  // homogeneity [7 mu] = 7 [mu]
  std::vector<double> m7(m);
  for (auto& x : m7) x *= 7.0;
  NormBracket nb7 = norm_exact_p2(t, cumulate(t, m7), pi);
  CHECK(nb7.lower == doctest::Approx(7.0 * nb2.lower).epsilon(1e-9));

  TreeMeasure zero = cumulate(t, std::vector<double>(t.vertex_count(), 0.0));
  NormBracket nbz = norm_exact_p2(t, zero, pi);
  CHECK(nbz.lower == 0.0);
  CHECK(nbz.upper == 0.0);
}

TEST_CASE("p=2 norm agrees with the dense eigensolve oracle") {
  std::mt19937_64 rng(35);
  for (int rep = 0; rep < 25; ++rep) {
    RootedTree t = th_test::random_tree(rng, 5);
    if (t.edge_count() > 50) continue;
    TreeMeasure mu = cumulate(t, th_test::random_masses(rng, t));
    EdgeWeight pi = th_test::random_weight(rng, t);
    NormBracket nb = norm_exact_p2(t, mu, pi);
    double oracle = th_test::norm_p2_oracle(t, mu, pi);
    CHECK(nb.lower == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("norm subadditivity in the measure argument") {
  std::mt19937_64 rng(36);
  for (int rep = 0; rep < 15; ++rep) {
    RootedTree t = th_test::random_tree(rng, 4);
    EdgeWeight pi = th_test::random_weight(rng, t);
    std::vector<double> ma = th_test::random_masses(rng, t);
    std::vector<double> mb = th_test::random_masses(rng, t);
    std::vector<double> mc(ma);
    for (std::size_t i = 0; i < mc.size(); ++i) mc[i] += mb[i];
    double na = norm_exact_p2(t, cumulate(t, ma), pi).lower;
    double nbv = norm_exact_p2(t, cumulate(t, mb), pi).lower;
    double nc = norm_exact_p2(t, cumulate(t, mc), pi).lower;
    CHECK(nc <= (na + nbv) * (1.0 + 1e-8));
  }
}

TEST_CASE("general p bracket") {
  // single edge: the Rayleigh ratio is phi(omega)^3 m / phi(omega)^3 = m
  RootedTree one = RootedTree::homogeneous(2, 0);
  NormBracket nb = norm_bracket(one, dirac(one, 0, 0.9), const_weight(one, 1.0), Exponent(3.0));
  CHECK(nb.lower == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(nb.upper == doctest::Approx(0.9).epsilon(1e-12));

  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 10; ++rep) {
    RootedTree t = th_test::random_tree(rng, 4);
    TreeMeasure mu = cumulate(t, th_test::random_masses(rng, t));
    EdgeWeight pi = th_test::random_weight(rng, t);
    NormBracket b2 = norm_bracket(t, mu, pi, Exponent(2.0), 8, rep);
    double exact = norm_exact_p2(t, mu, pi).lower;
    CHECK(b2.lower <= exact * (1.0 + 1e-8));
    CHECK(exact <= b2.upper * (1.0 + 1e-8));
    for (double p : {1.5, 3.0}) {
      NormBracket bp = norm_bracket(t, mu, pi, Exponent(p), 8, rep);
      CHECK(bp.lower <= bp.upper * (1.0 + 1e-10));
      CHECK(bp.lower > 0.0);
    }
  }
}
