#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "treehardy/conformal.hpp"
#include "treehardy/hardy.hpp"
#include "treehardy/potential.hpp"

using namespace treehardy;

namespace {

std::vector<double> random_leaf_mass(std::mt19937_64& rng,
                                     const UnrootedTruncation& tr, double lo,
                                     double hi) {
  std::uniform_real_distribution<double> uni(lo, hi);
  std::vector<double> mass(tr.vertex_count(), 0.0);
  for (VertexId leaf : tr.leaves()) mass[leaf] = uni(rng);
  return mass;
}

// re-emits the tree with shuffled labels, edge order and orientations; the
// masses follow the relabeling
std::pair<UnrootedTruncation, std::vector<double>> scrambled(
    const UnrootedTruncation& tr, const std::vector<double>& mass,
    std::mt19937_64& rng) {
  const std::size_t n = tr.vertex_count();
  std::vector<std::int64_t> sigma(n);
  for (std::size_t v = 0; v < n; ++v) sigma[v] = (std::int64_t)v;
  std::shuffle(sigma.begin(), sigma.end(), rng);
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (VertexId w : tr.neighbors((VertexId)u))
      if ((std::size_t)w > u) edges.push_back({sigma[u], sigma[w]});
  std::shuffle(edges.begin(), edges.end(), rng);
  for (auto& e : edges)
    if (rng() & 1u) std::swap(e.first, e.second);

  std::vector<VertexId> orig_of(n, kNoVertex);
  std::vector<VertexId> dense_of(n, kNoVertex);
  VertexId next = 0;
  auto touch = [&](std::int64_t label) {
    if (dense_of[label] == kNoVertex) {
      dense_of[label] = next;
      for (std::size_t v = 0; v < n; ++v)
        if (sigma[v] == label) orig_of[next] = (VertexId)v;
      ++next;
    }
  };
  for (auto [a, b] : edges) {
    touch(a);
    touch(b);
  }
  std::vector<double> mass2(n, 0.0);
  for (VertexId d = 0; d < (VertexId)n; ++d) mass2[d] = mass[orig_of[d]];
  return {UnrootedTruncation::from_edges(edges), std::move(mass2)};
}

EdgeWeight expanded_weight(const RootedTree& t, const RootedTree& ex,
                           const std::vector<VertexId>& old_to_new,
                           const EdgeWeight& pi) {
  EdgeWeight out;
  out.role = pi.role;
  out.value.assign(ex.vertex_count(), 0.0);
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    VertexId w = old_to_new[v];
    for (std::int64_t k = 0; k < t.segment_length((VertexId)v); ++k) {
      out.value[w] = pi[(VertexId)v];
      w = ex.parent(w);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("root profile matches the dense eigensolve at every interior vertex") {
  std::mt19937_64 rng(701);
  for (int rep = 0; rep < 6; ++rep) {
    UnrootedTruncation tr =
        UnrootedTruncation::random(3 + (int)(rng() % 4), rng());
    std::vector<double> mass = random_leaf_mass(rng, tr, 0.1, 1.0);
    RootProfile prof = rooted_norm_profile(tr, mass);
    REQUIRE(prof.roots.size() == tr.interior().size());
    CHECK(prof.converged);
    double total = 0.0;
    for (double m : mass) total += m;
    double seen_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < prof.roots.size(); ++i) {
      std::vector<VertexId> map;
      RootedTree rt = tr.rooted_at(prof.roots[i], &map);
      std::vector<double> rmass(rt.vertex_count(), 0.0);
      for (VertexId leaf : tr.leaves()) rmass[map[leaf]] = mass[leaf] / total;
      TreeMeasure mu = cumulate(rt, std::move(rmass));
      double oracle = th_test::norm_p2_oracle(rt, mu, const_weight(rt, 1.0));
      CHECK(prof.value[i] == doctest::Approx(oracle).epsilon(1e-7));
      seen_min = std::min(seen_min, prof.value[i]);
    }
    CHECK(prof.min_value == seen_min);
  }
}

TEST_CASE("profile is constant on the orbit of a rotation symmetric measure") {
  UnrootedTruncation tr = UnrootedTruncation::symmetric(3);
  std::vector<double> mass(tr.vertex_count(), 0.0);
  for (VertexId leaf : tr.leaves()) mass[leaf] = 1.0;
  RootProfile prof = rooted_norm_profile(tr, mass);
  std::vector<double> value_of(tr.vertex_count(), -1.0);
  for (std::size_t i = 0; i < prof.roots.size(); ++i)
    value_of[prof.roots[i]] = prof.value[i];
  const VertexId k = (VertexId)((tr.vertex_count() - 1) / 3);
  for (VertexId o : prof.roots) {
    if (o == 0) continue;
    VertexId image = (o - 1 + k) % (3 * k) + 1;
    CHECK(value_of[o] == value_of[image]);
  }
}

TEST_CASE("a lone boundary atom keeps finite rooted norms but kills the invariant") {
  UnrootedTruncation tr = UnrootedTruncation::symmetric(2);
  std::vector<double> mass(tr.vertex_count(), 0.0);
  mass[tr.leaves().front()] = 3.0;
  RootProfile prof = rooted_norm_profile(tr, mass);
  for (double v : prof.value) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
  InvReport inv = inv_constant_estimate(tr, mass);
  CHECK(inv.dirac);
  CHECK(inv.direct == 0.0);
  CHECK(inv.arc_ratio == 0.0);
}

TEST_CASE("two boundary atoms on a path give a quarter of the distance") {
  const std::int64_t d = 6;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (std::int64_t i = 0; i < d; ++i) edges.push_back({i, i + 1});
  UnrootedTruncation tr = UnrootedTruncation::from_edges(edges);
  std::vector<double> mass(tr.vertex_count(), 0.0);
  mass[0] = 0.5;
  mass[d] = 0.5;
  InvReport inv = inv_constant_estimate(tr, mass);
  CHECK(!inv.dirac);
  CHECK(inv.exhaustive);
  CHECK(inv.direct == doctest::Approx(d / 4.0).epsilon(1e-9));
  CHECK(inv.arc_ratio == doctest::Approx(d / 4.0).epsilon(1e-9));
  RootProfile prof = rooted_norm_profile(tr, mass);
  CHECK(inv.direct <= prof.min_value * (1.0 + 1e-9));
}

TEST_CASE("centered constant sits between the arc ratio and every rooted norm") {
  std::mt19937_64 rng(702);
  for (int rep = 0; rep < 8; ++rep) {
    UnrootedTruncation tr =
        UnrootedTruncation::random(3 + (int)(rng() % 5), rng());
    std::vector<double> mass = random_leaf_mass(rng, tr, 0.05, 1.0);
    InvReport inv = inv_constant_estimate(tr, mass);
    RootProfile prof = rooted_norm_profile(tr, mass);
    CHECK(inv.arc_ratio > 0.0);
    CHECK(inv.arc_ratio <= inv.direct * (1.0 + 1e-9));
    CHECK(inv.direct <= prof.min_value * (1.0 + 1e-9));
    CHECK(inv.pairs > 0);
  }
}

TEST_CASE("relabeling leaves the invariant estimate bitwise unchanged") {
  std::mt19937_64 rng(703);
  UnrootedTruncation tr = UnrootedTruncation::symmetric(2);
  std::vector<double> mass(tr.vertex_count(), 0.0);
  for (VertexId leaf : tr.leaves()) mass[leaf] = 0.1 + 0.01 * (double)leaf;

  // branch rotation is an automorphism by block layout
  const VertexId k = (VertexId)((tr.vertex_count() - 1) / 3);
  auto rot = [&](VertexId v) { return v == 0 ? 0 : (v - 1 + k) % (3 * k) + 1; };
  std::vector<double> mass_rot(tr.vertex_count(), 0.0);
  for (std::size_t v = 0; v < tr.vertex_count(); ++v)
    mass_rot[rot((VertexId)v)] = mass[v];

  InvReport a = inv_constant_estimate(tr, mass);
  InvReport b = inv_constant_estimate(tr, mass_rot);
  CHECK(a.direct == b.direct);
  CHECK(a.arc_ratio == b.arc_ratio);
  CHECK(a.pairs == b.pairs);
  CHECK(a.exhaustive == b.exhaustive);
  CHECK(b.witness_a.tail == rot(a.witness_a.tail));
  CHECK(b.witness_a.head == rot(a.witness_a.head));
  CHECK(b.witness_b.tail == rot(a.witness_b.tail));
  CHECK(b.witness_b.head == rot(a.witness_b.head));

  // arbitrary relabelings reduce to the same canonical instance
  for (int rep = 0; rep < 3; ++rep) {
    auto [tr2, mass2] = scrambled(tr, mass, rng);
    CanonicalTruncation c1 = canonical_form(tr, mass);
    CanonicalTruncation c2 = canonical_form(tr2, mass2);
    REQUIRE(c1.tree.vertex_count() == c2.tree.vertex_count());
    for (std::size_t v = 0; v < c1.tree.vertex_count(); ++v)
      CHECK(c1.tree.neighbors((VertexId)v) == c2.tree.neighbors((VertexId)v));
    CHECK(c1.mass == c2.mass);
    InvReport s = inv_constant_estimate(tr2, mass2);
    CHECK(s.direct == a.direct);
    CHECK(s.arc_ratio == a.arc_ratio);
    CHECK(s.pairs == a.pairs);
  }
}

TEST_CASE("halving walk splits the boundary into balanced complementary arcs") {
  std::mt19937_64 rng(704);
  for (int rep = 0; rep < 10; ++rep) {
    UnrootedTruncation tr =
        UnrootedTruncation::random(3 + (int)(rng() % 5), rng());
    std::vector<double> mass = random_leaf_mass(rng, tr, 0.5, 1.0);
    HalvingResult h = halving_walk(tr, mass);
    CHECK(h.ok);
    CHECK(h.mass_i1 >= 1.0 / 3.0 - 1e-12);
    CHECK(h.mass_i1 <= 2.0 / 3.0 + 1e-12);
    CHECK(h.mass_i2 >= 1.0 / 3.0 - 1e-12);
    CHECK(h.mass_i2 <= 2.0 / 3.0 + 1e-12);
    std::vector<VertexId> i1 = tr.arc_leaves(h.arc.tail, h.arc.head);
    std::vector<VertexId> i2 = tr.arc_leaves(h.arc.head, h.arc.tail);
    CHECK(i1.size() + i2.size() == tr.leaves().size());
    std::sort(i1.begin(), i1.end());
    std::sort(i2.begin(), i2.end());
    std::vector<VertexId> overlap;
    std::set_intersection(i1.begin(), i1.end(), i2.begin(), i2.end(),
                          std::back_inserter(overlap));
    CHECK(overlap.empty());
  }

  // a dominant atom defeats every split
  UnrootedTruncation tr = UnrootedTruncation::symmetric(2);
  std::vector<double> mass(tr.vertex_count(), 0.0);
  for (VertexId leaf : tr.leaves()) mass[leaf] = 0.01;
  mass[tr.leaves().front()] = 10.0;
  HalvingResult h = halving_walk(tr, mass);
  CHECK(!h.ok);
}

TEST_CASE("condenser capacity of branch arcs follows the star recursion") {
  std::mt19937_64 rng(705);
  for (int rep = 0; rep < 8; ++rep) {
    UnrootedTruncation tr =
        UnrootedTruncation::random(4 + (int)(rng() % 4), rng());
    const std::vector<VertexId>& interior = tr.interior();
    VertexId o = interior[rng() % interior.size()];

    // group leaves by the branch they hang from
    std::vector<std::vector<VertexId>> groups;
    for (VertexId w : tr.neighbors(o)) groups.push_back(tr.arc_leaves(o, w));
    REQUIRE(groups.size() == 3);
    std::vector<std::vector<VertexId>> sets(3);
    for (int j = 0; j < 3; ++j) {
      for (VertexId leaf : groups[j])
        if (rng() & 1u) sets[j].push_back(leaf);
      if (sets[j].empty()) sets[j].push_back(groups[j].front());
    }

    CondenserRecursion cr = condenser_recursion(tr, o, sets[0], sets[1], sets[2]);
    CHECK(cr.gap <= 1e-9);

    // independent series parallel route to c1 through the rooted tree
    std::vector<VertexId> map;
    RootedTree rt = tr.rooted_at(o, &map);
    std::vector<VertexId> edges;
    for (VertexId leaf : sets[0]) edges.push_back(map[leaf]);
    CapacityResult sp = capacity(rt, canonicalize_antichain(rt, edges),
                                 const_weight(rt, 1.0), Exponent(2.0));
    CHECK(cr.c1 ==
          doctest::Approx(sp.value / (1.0 - sp.value)).epsilon(1e-9));
  }

  UnrootedTruncation star = UnrootedTruncation::symmetric(1);
  CondenserRecursion cr = condenser_recursion(star, 0, {1}, {2}, {3});
  CHECK(cr.c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cr.lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(cr.closed_form == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  std::vector<VertexId> bad1{1}, bad2{2}, bad3{2};
  CHECK_THROWS_AS(condenser_recursion(star, 0, bad1, bad2, bad3),
                  std::invalid_argument);
  std::vector<VertexId> empty;
  CHECK_THROWS_AS(condenser_recursion(star, 0, bad1, empty, bad3),
                  std::invalid_argument);
  CHECK_THROWS_AS(condenser_recursion(star, 1, bad1, bad2, bad3),
                  std::invalid_argument);
}

TEST_CASE("kernel diagonal and confluent values match the prefix sums") {
  RootedTree t = RootedTree::homogeneous(2, 3);
  EdgeWeight one = const_weight(t, 1.0);
  DyadicAddress deep{3, 1};
  CHECK(kernel_value(t, one, t.vertex_at(deep), t.vertex_at(deep)) == 4.0);
  DyadicAddress shallow{1, 2};
  CHECK(kernel_value(t, one, t.vertex_at(shallow), t.vertex_at(shallow)) == 2.0);

  std::mt19937_64 rng(706);
  for (int rep = 0; rep < 10; ++rep) {
    RootedTree rt = th_test::random_tree(rng, 5);
    EdgeWeight pi = th_test::random_weight(rng, rt);
    EdgeFunction inv_pi;
    inv_pi.value.resize(rt.vertex_count());
    for (std::size_t v = 0; v < rt.vertex_count(); ++v)
      inv_pi.value[v] = 1.0 / pi[(VertexId)v];
    VertexFunction prefix = hardy_apply(rt, inv_pi);
    VertexId x = (VertexId)(rng() % rt.vertex_count());
    VertexId y = (VertexId)(rng() % rt.vertex_count());
    CHECK(kernel_value(rt, pi, x, y) ==
          doctest::Approx(prefix[rt.confluent(x, y).first]).epsilon(1e-13));
  }
}

TEST_CASE("gram matrices of the root distance kernel are positive semidefinite") {
  std::mt19937_64 rng(707);
  for (int rep = 0; rep < 12; ++rep) {
    RootedTree t = th_test::random_tree(rng, 5);
    EdgeWeight pi = rep % 2 ? th_test::random_weight(rng, t)
                            : const_weight(t, 1.0);
    std::vector<VertexId> pts;
    for (int i = 0; i < 5; ++i)
      pts.push_back((VertexId)(rng() % t.vertex_count()));
    GramReport g = kernel_gram(t, pi, pts);
    CHECK(g.psd);
    CHECK(g.min_eigenvalue >= -1e-10);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j)
        CHECK(g.matrix[i * pts.size() + j] == g.matrix[j * pts.size() + i]);
  }
}

TEST_CASE("the kernel reproduces primitives through the weighted inner product") {
  std::mt19937_64 rng(708);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    RootedTree t = th_test::random_tree(rng, 5);
    EdgeWeight pi = th_test::random_weight(rng, t);
    EdgeFunction phi;
    phi.value.resize(t.vertex_count());
    for (double& x : phi.value) x = uni(rng);
    VertexFunction primitive = hardy_apply(t, phi);
    VertexId x = (VertexId)(rng() % t.vertex_count());
    VertexId y = (VertexId)(rng() % t.vertex_count());
    CHECK(kernel_pairing(t, pi, phi, x) ==
          doctest::Approx(primitive[x]).epsilon(1e-12));
    CHECK(dirichlet_inner(t, pi, kernel_gradient(t, pi, x),
                          kernel_gradient(t, pi, y)) ==
          doctest::Approx(kernel_value(t, pi, x, y)).epsilon(1e-12));
  }
}

TEST_CASE("difference kernel equals the signed overlap length") {
  RootedTree t = RootedTree::homogeneous(2, 3);
  EdgeWeight one = const_weight(t, 1.0);
  VertexId a = t.vertex_at({3, 1});
  VertexId b = t.vertex_at({1, 2});
  VertexId x = t.vertex_at({3, 2});
  VertexId y = 0;

  DiffKernelReport plus = difference_kernel(t, one, a, b, x, y);
  CHECK(plus.value == 2.0);
  CHECK(plus.overlap == 2.0);
  CHECK(plus.sign == 1);
  CHECK(plus.sign_consistent);
  CHECK(plus.matches);

  DiffKernelReport minus = difference_kernel(t, one, a, b, y, x);
  CHECK(minus.value == -2.0);
  CHECK(minus.sign == -1);
  CHECK(minus.matches);

  // geodesics sharing nothing give a vanishing kernel
  DiffKernelReport zero = difference_kernel(t, one, t.vertex_at({3, 1}),
                                            t.vertex_at({3, 2}),
                                            t.vertex_at({3, 5}),
                                            t.vertex_at({3, 6}));
  CHECK(zero.value == 0.0);
  CHECK(zero.sign == 0);
  CHECK(zero.overlap == 0.0);
  CHECK(zero.matches);

  std::mt19937_64 rng(709);
  for (int rep = 0; rep < 200; ++rep) {
    RootedTree rt = th_test::random_tree(rng, 5);
    EdgeWeight pi = rep % 2 ? th_test::random_weight(rng, rt)
                            : const_weight(rt, 1.0);
    auto pickv = [&] { return (VertexId)(rng() % rt.vertex_count()); };
    VertexId ra = pickv(), rb = pickv(), rx = pickv(), ry = pickv();
    DiffKernelReport rep1 = difference_kernel(rt, pi, ra, rb, rx, ry);
    CHECK(rep1.sign_consistent);
    CHECK(rep1.matches);
    DiffKernelReport rep2 = difference_kernel(rt, pi, ra, rb, ry, rx);
    CHECK(rep1.value == doctest::Approx(-rep2.value).epsilon(1e-12));
    DiffKernelReport same = difference_kernel(rt, pi, ra, ra, rx, ry);
    CHECK(std::abs(same.value) <= 1e-12);
  }
}

TEST_CASE("kernel values agree between a compressed chain and its expansion") {
  TreeBuilder b(2);
  VertexId v1 = b.add_child(0, 3);
  VertexId v2 = b.add_child(0, 1);
  VertexId v3 = b.add_child(v1, 2);
  VertexId v4 = b.add_child(v1, 1);
  RootedTree t = b.build();
  REQUIRE(t.is_compressed());

  std::mt19937_64 rng(710);
  EdgeWeight pi = th_test::random_weight(rng, t);
  std::vector<VertexId> to_new;
  RootedTree ex = t.expanded(&to_new);
  EdgeWeight piex = expanded_weight(t, ex, to_new, pi);

  std::vector<VertexId> all{0, v1, v2, v3, v4};
  for (VertexId x : all)
    for (VertexId y : all) {
      CHECK(kernel_value(t, pi, x, y) ==
            doctest::Approx(kernel_value(ex, piex, to_new[x], to_new[y]))
                .epsilon(1e-13));
      DiffKernelReport c = difference_kernel(t, pi, x, y, v3, v2);
      DiffKernelReport e =
          difference_kernel(ex, piex, to_new[x], to_new[y], to_new[v3], to_new[v2]);
      CHECK(c.matches);
      CHECK(e.matches);
      CHECK(c.value == doctest::Approx(e.value).epsilon(1e-12));
      CHECK(c.overlap == doctest::Approx(e.overlap).epsilon(1e-12));
    }
}
