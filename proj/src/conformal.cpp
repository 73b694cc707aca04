#include "treehardy/conformal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "treehardy/hardy.hpp"
#include "treehardy/potential.hpp"

namespace treehardy {

namespace {

int check_leaf_mass(const UnrootedTruncation& tr,
                    const std::vector<double>& leaf_mass, const char* who) {
  if (leaf_mass.size() != tr.vertex_count())
    throw std::invalid_argument(std::string(who) + ": mass vector does not fit");
  double total = 0.0;
  int positive = 0;
  for (std::size_t v = 0; v < leaf_mass.size(); ++v) {
    double m = leaf_mass[v];
    if (!std::isfinite(m) || m < 0.0)
      throw std::invalid_argument(std::string(who) +
                                  ": masses must be finite and nonnegative");
    if (m > 0.0 && !tr.is_leaf((VertexId)v))
      throw std::invalid_argument(std::string(who) + ": mass off the boundary");
    if (m > 0.0) ++positive;
    total += m;
  }
  if (total <= 0.0)
    throw std::invalid_argument(std::string(who) + ": measure vanishes");
  return positive;
}

void normalize_in_place(std::vector<double>& mass) {
  double total = 0.0;
  for (double m : mass) total += m;
  for (double& m : mass) m /= total;
}

std::vector<double> probability_mass(const UnrootedTruncation& tr,
                                     const std::vector<double>& leaf_mass,
                                     const char* who, int* atoms = nullptr) {
  int positive = check_leaf_mass(tr, leaf_mass, who);
  if (atoms) *atoms = positive;
  std::vector<double> out(leaf_mass);
  normalize_in_place(out);
  return out;
}

double arc_mass(const UnrootedTruncation& tr, const std::vector<double>& mass,
                VertexId tail, VertexId head) {
  double m = 0.0;
  for (VertexId leaf : tr.arc_leaves(tail, head)) m += mass[leaf];
  return m;
}

struct Arc {
  VertexId tail, head;
  std::vector<VertexId> leaves;
  std::vector<char> mask;
  double mass;
};

std::vector<Arc> all_arcs(const UnrootedTruncation& tr,
                          const std::vector<double>& mass) {
  std::vector<Arc> arcs;
  for (std::size_t u = 0; u < tr.vertex_count(); ++u)
    for (VertexId w : tr.neighbors((VertexId)u)) {
      Arc a;
      a.tail = (VertexId)u;
      a.head = w;
      a.leaves = tr.arc_leaves(a.tail, a.head);
      a.mask.assign(tr.vertex_count(), 0);
      a.mass = 0.0;
      for (VertexId leaf : a.leaves) {
        a.mask[leaf] = 1;
        a.mass += mass[leaf];
      }
      arcs.push_back(std::move(a));
    }
  return arcs;
}

bool disjoint(const Arc& a, const Arc& b) {
  for (std::size_t v = 0; v < a.mask.size(); ++v)
    if (a.mask[v] && b.mask[v]) return false;
  return true;
}

// subtree code seen from the parent, children sorted; equal codes mean equal
// labeled subtrees, so the sort fixes a canonical child order
std::string subtree_code(const UnrootedTruncation& tr,
                         const std::vector<double>& mass, VertexId v,
                         VertexId parent) {
  std::vector<std::string> kid;
  for (VertexId w : tr.neighbors(v))
    if (w != parent) kid.push_back(subtree_code(tr, mass, w, v));
  std::sort(kid.begin(), kid.end());
  char label[40];
  std::snprintf(label, sizeof label, "%.17g", mass[v]);
  std::string out = "(";
  out += label;
  for (const std::string& k : kid) out += k;
  out += ")";
  return out;
}

// the one or two middle vertices of the longest path
std::vector<VertexId> tree_centers(const UnrootedTruncation& tr) {
  const std::size_t n = tr.vertex_count();
  std::vector<std::size_t> deg(n);
  std::vector<char> dead(n, 0);
  std::vector<VertexId> cur;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = tr.neighbors((VertexId)v).size();
    if (deg[v] <= 1) cur.push_back((VertexId)v);
  }
  std::size_t alive = n;
  while (alive > 2) {
    std::vector<VertexId> next;
    for (VertexId v : cur) {
      dead[v] = 1;
      --alive;
      for (VertexId w : tr.neighbors(v))
        if (!dead[w] && --deg[w] == 1) next.push_back(w);
    }
    cur.swap(next);
  }
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < n; ++v)
    if (!dead[v]) out.push_back((VertexId)v);
  return out;
}

// first-step neighbor of o on the path to every vertex
std::vector<VertexId> branch_labels(const UnrootedTruncation& tr, VertexId o) {
  std::vector<VertexId> label(tr.vertex_count(), kNoVertex);
  std::vector<VertexId> queue;
  for (VertexId w : tr.neighbors(o)) {
    label[w] = w;
    queue.push_back(w);
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    VertexId u = queue[i];
    for (VertexId w : tr.neighbors(u))
      if (w != o && label[w] == kNoVertex) {
        label[w] = label[u];
        queue.push_back(w);
      }
  }
  return label;
}

}  // namespace

RootProfile rooted_norm_profile(const UnrootedTruncation& tr,
                                const std::vector<double>& leaf_mass,
                                std::vector<VertexId> roots) {
  std::vector<double> mass =
      probability_mass(tr, leaf_mass, "rooted_norm_profile");
  if (roots.empty()) roots = tr.interior();
  if (roots.empty())
    throw std::invalid_argument("rooted_norm_profile: no interior root");

  RootProfile out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (VertexId o : roots) {
    std::vector<VertexId> map;
    RootedTree rt = tr.rooted_at(o, &map);
    std::vector<double> rmass(rt.vertex_count(), 0.0);
    for (VertexId leaf : tr.leaves()) rmass[map[leaf]] = mass[leaf];
    TreeMeasure mu = cumulate(rt, std::move(rmass));
    NormBracket nb = norm_exact_p2(rt, mu, const_weight(rt, 1.0));
    out.roots.push_back(o);
    out.value.push_back(nb.upper);
    out.converged = out.converged && nb.converged;
    if (nb.upper < out.min_value) {
      out.min_value = nb.upper;
      out.argmin = o;
    }
  }
  return out;
}

CanonicalTruncation canonical_form(const UnrootedTruncation& tr,
                                   const std::vector<double>& mass) {
  if (mass.size() != tr.vertex_count())
    throw std::invalid_argument("canonical_form: mass vector does not fit");
  for (double m : mass)
    if (!std::isfinite(m))
      throw std::invalid_argument("canonical_form: masses must be finite");

  std::vector<VertexId> centers = tree_centers(tr);
  VertexId root = centers[0];
  if (centers.size() == 2 &&
      subtree_code(tr, mass, centers[1], kNoVertex) <
          subtree_code(tr, mass, centers[0], kNoVertex))
    root = centers[1];

  // codes relative to the chosen rooting, then preorder with sorted children
  const std::size_t n = tr.vertex_count();
  std::vector<std::string> code(n);
  std::vector<VertexId> par(n, kNoVertex);
  {
    std::vector<VertexId> order{root};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (VertexId w : tr.neighbors(order[i]))
        if (w != par[order[i]]) {
          par[w] = order[i];
          order.push_back(w);
        }
    char label[40];
    for (std::size_t i = order.size(); i-- > 0;) {
      VertexId v = order[i];
      std::vector<std::string> kid;
      for (VertexId w : tr.neighbors(v))
        if (w != par[v]) kid.push_back(code[w]);
      std::sort(kid.begin(), kid.end());
      std::snprintf(label, sizeof label, "%.17g", mass[v]);
      code[v] = "(";
      code[v] += label;
      for (const std::string& k : kid) code[v] += k;
      code[v] += ")";
    }
  }

  CanonicalTruncation out;
  out.old_of_new.reserve(n);
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::vector<std::pair<VertexId, std::int64_t>> stack{{root, -1}};
  while (!stack.empty()) {
    auto [v, parent_new] = stack.back();
    stack.pop_back();
    std::int64_t id = (std::int64_t)out.old_of_new.size();
    out.old_of_new.push_back(v);
    if (parent_new >= 0) edges.push_back({parent_new, id});
    std::vector<VertexId> kids;
    for (VertexId w : tr.neighbors(v))
      if (w != par[v]) kids.push_back(w);
    std::sort(kids.begin(), kids.end(),
              [&](VertexId a, VertexId b) { return code[a] < code[b]; });
    // reversed so the stack pops them in sorted order
    for (std::size_t i = kids.size(); i-- > 0;) stack.push_back({kids[i], id});
  }
  out.tree = UnrootedTruncation::from_edges(edges);
  out.mass.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.mass[i] = mass[out.old_of_new[i]];
  return out;
}

InvReport inv_constant_estimate(const UnrootedTruncation& tr_in,
                                const std::vector<double>& leaf_mass,
                                std::int64_t pair_budget,
                                std::uint64_t seed) {
  int atoms = check_leaf_mass(tr_in, leaf_mass, "inv_constant_estimate");
  InvReport rep;
  if (atoms == 1) {
    rep.dirac = true;
    rep.exhaustive = true;
    return rep;
  }
  // canonical ids first, then normalize, so permuted inputs round identically
  CanonicalTruncation canon = canonical_form(tr_in, leaf_mass);
  const UnrootedTruncation& tr = canon.tree;
  std::vector<double> mass = std::move(canon.mass);
  normalize_in_place(mass);

  // centered form against the Dirichlet form, restricted off the constants
  const std::size_t n = tr.vertex_count();
  Eigen::VectorXd m = Eigen::VectorXd::Zero((Eigen::Index)n);
  for (std::size_t v = 0; v < n; ++v) m[(Eigen::Index)v] = mass[v];
  Eigen::MatrixXd cen = -m * m.transpose();
  cen.diagonal() += m;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero((Eigen::Index)n, (Eigen::Index)n);
  for (std::size_t u = 0; u < n; ++u)
    for (VertexId w : tr.neighbors((VertexId)u)) {
      lap((Eigen::Index)u, (Eigen::Index)u) += 1.0;
      lap((Eigen::Index)u, (Eigen::Index)w) -= 1.0;
    }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::VectorXd::Ones((Eigen::Index)n));
  Eigen::MatrixXd q =
      Eigen::MatrixXd(qr.householderQ()).rightCols((Eigen::Index)n - 1);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      q.transpose() * cen * q, q.transpose() * lap * q);
  rep.direct = std::max(0.0, ges.eigenvalues().maxCoeff());

  std::vector<Arc> arcs = all_arcs(tr, mass);
  auto consider = [&](const Arc& a, const Arc& b) {
    ++rep.pairs;
    double num = a.mass * b.mass;
    if (num <= 0.0) return;
    double cap = condenser_capacity(tr, a.leaves, b.leaves);
    double ratio = num / cap;
    if (ratio > rep.arc_ratio) {
      rep.arc_ratio = ratio;
      rep.witness_a = {a.tail, a.head};
      rep.witness_b = {b.tail, b.head};
    }
  };

  std::int64_t disjoint_pairs = 0;
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = i + 1; j < arcs.size(); ++j)
      if (disjoint(arcs[i], arcs[j])) ++disjoint_pairs;
  if (disjoint_pairs <= pair_budget) {
    rep.exhaustive = true;
    for (std::size_t i = 0; i < arcs.size(); ++i)
      for (std::size_t j = i + 1; j < arcs.size(); ++j)
        if (disjoint(arcs[i], arcs[j])) consider(arcs[i], arcs[j]);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, arcs.size() - 1);
    std::int64_t done = 0, attempts = 0;
    while (done < pair_budget && attempts < 64 * pair_budget) {
      ++attempts;
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j || !disjoint(arcs[i], arcs[j])) continue;
      consider(arcs[i], arcs[j]);
      ++done;
    }
  }
  if (rep.witness_a.tail != kNoVertex) {
    rep.witness_a = {canon.old_of_new[rep.witness_a.tail],
                     canon.old_of_new[rep.witness_a.head]};
    rep.witness_b = {canon.old_of_new[rep.witness_b.tail],
                     canon.old_of_new[rep.witness_b.head]};
  }
  return rep;
}

HalvingResult halving_walk(const UnrootedTruncation& tr,
                           const std::vector<double>& leaf_mass) {
  std::vector<double> mass = probability_mass(tr, leaf_mass, "halving_walk");
  HalvingResult out;
  auto finish = [&](VertexId tail, VertexId head, double m, bool ok) {
    out.arc = {tail, head};
    out.mass_i1 = m;
    out.mass_i2 = 1.0 - m;
    out.ok = ok;
    return out;
  };

  VertexId tail, head;
  double m;
  if (tr.interior().empty()) {
    // a single edge; either endpoint arc is a candidate split
    tail = 0;
    head = tr.neighbors(0).front();
    m = mass[head];
    if (m < 1.0 / 3.0) {
      std::swap(tail, head);
      m = 1.0 - m;
    }
  } else {
    VertexId x0 = tr.interior().front();
    tail = x0;
    head = kNoVertex;
    m = -1.0;
    for (VertexId w : tr.neighbors(x0)) {
      double mw = arc_mass(tr, mass, x0, w);
      if (mw > m) {
        m = mw;
        head = w;
      }
    }
  }

  while (true) {
    if (m <= 2.0 / 3.0 + 1e-12) return finish(tail, head, m, m >= 1.0 / 3.0 - 1e-12);
    if (tr.is_leaf(head)) return finish(tail, head, m, false);
    VertexId next = kNoVertex;
    double best = -1.0;
    for (VertexId w : tr.neighbors(head))
      if (w != tail) {
        double mw = arc_mass(tr, mass, head, w);
        if (mw > best) {
          best = mw;
          next = w;
        }
      }
    tail = head;
    head = next;
    m = best;
    ++out.steps;
  }
}

CondenserRecursion condenser_recursion(const UnrootedTruncation& tr, VertexId o,
                                       const std::vector<VertexId>& a1,
                                       const std::vector<VertexId>& a2,
                                       const std::vector<VertexId>& a3) {
  if (o < 0 || (std::size_t)o >= tr.vertex_count() || tr.is_leaf(o))
    throw std::invalid_argument("condenser_recursion: center must be interior");
  std::vector<VertexId> label = branch_labels(tr, o);
  const std::vector<VertexId>* sets[3] = {&a1, &a2, &a3};
  VertexId branch[3];
  for (int j = 0; j < 3; ++j) {
    if (sets[j]->empty())
      throw std::invalid_argument("condenser_recursion: empty target set");
    branch[j] = kNoVertex;
    for (VertexId leaf : *sets[j]) {
      if (leaf < 0 || (std::size_t)leaf >= tr.vertex_count() || !tr.is_leaf(leaf))
        throw std::invalid_argument("condenser_recursion: targets must be leaves");
      if (branch[j] == kNoVertex) branch[j] = label[leaf];
      if (label[leaf] != branch[j])
        throw std::invalid_argument(
            "condenser_recursion: a target set spans two branches");
    }
  }
  if (branch[0] == branch[1] || branch[0] == branch[2] || branch[1] == branch[2])
    throw std::invalid_argument("condenser_recursion: branches must be distinct");

  CondenserRecursion out;
  std::vector<VertexId> center{o};
  out.c1 = condenser_capacity(tr, center, a1);
  out.c2 = condenser_capacity(tr, center, a2);
  out.c3 = condenser_capacity(tr, center, a3);
  std::vector<VertexId> ground(a2);
  ground.insert(ground.end(), a3.begin(), a3.end());
  out.lhs = condenser_capacity(tr, a1, ground);
  out.closed_form = out.c1 * (out.c2 + out.c3) / (out.c1 + out.c2 + out.c3);
  out.gap = std::abs(out.lhs - out.closed_form) /
            std::max(1.0, std::abs(out.closed_form));
  return out;
}

double kernel_value(const RootedTree& t, const EdgeWeight& pi, VertexId x,
                    VertexId y) {
  pi.validate(t);
  if (x < 0 || (std::size_t)x >= t.vertex_count() || y < 0 ||
      (std::size_t)y >= t.vertex_count())
    throw std::invalid_argument("kernel_value: vertex out of range");
  double sum = 0.0;
  for (VertexId v = t.confluent(x, y).first; v != kNoVertex; v = t.parent(v))
    sum += (double)t.segment_length(v) / pi[v];
  return sum;
}

EdgeFunction kernel_gradient(const RootedTree& t, const EdgeWeight& pi,
                             VertexId x) {
  pi.validate(t);
  if (x < 0 || (std::size_t)x >= t.vertex_count())
    throw std::invalid_argument("kernel_gradient: vertex out of range");
  EdgeFunction out;
  out.value.assign(t.vertex_count(), 0.0);
  for (VertexId v = x; v != kNoVertex; v = t.parent(v)) out.value[v] = 1.0 / pi[v];
  return out;
}

double dirichlet_inner(const RootedTree& t, const EdgeWeight& pi,
                       const EdgeFunction& phi, const EdgeFunction& psi) {
  pi.validate(t);
  if (phi.value.size() != t.vertex_count() || psi.value.size() != t.vertex_count())
    throw std::invalid_argument("dirichlet_inner: function does not fit");
  double sum = 0.0;
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    sum += (double)t.segment_length((VertexId)v) * phi[(VertexId)v] *
           psi[(VertexId)v] * pi[(VertexId)v];
  return sum;
}

double kernel_pairing(const RootedTree& t, const EdgeWeight& pi,
                      const EdgeFunction& phi, VertexId x) {
  return dirichlet_inner(t, pi, phi, kernel_gradient(t, pi, x));
}

GramReport kernel_gram(const RootedTree& t, const EdgeWeight& pi,
                       const std::vector<VertexId>& points, double tol) {
  if (points.empty())
    throw std::invalid_argument("kernel_gram: needs at least one point");
  GramReport rep;
  rep.points = points;
  const std::size_t m = points.size();
  Eigen::MatrixXd g((Eigen::Index)m, (Eigen::Index)m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      double kv = kernel_value(t, pi, points[i], points[j]);
      g((Eigen::Index)i, (Eigen::Index)j) = kv;
      g((Eigen::Index)j, (Eigen::Index)i) = kv;
    }
  rep.matrix.assign(g.data(), g.data() + m * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.psd = rep.min_eigenvalue >= -tol;
  return rep;
}

DiffKernelReport difference_kernel(const RootedTree& t, const EdgeWeight& pi,
                                   VertexId a, VertexId b, VertexId x,
                                   VertexId y) {
  DiffKernelReport rep;
  rep.value = kernel_value(t, pi, x, a) - kernel_value(t, pi, y, a) -
              kernel_value(t, pi, x, b) + kernel_value(t, pi, y, b);

  // geodesic edge sets as symmetric differences of root paths
  std::vector<char> in_ab(t.vertex_count(), 0), in_xy(t.vertex_count(), 0);
  for (VertexId v = a; v != kNoVertex; v = t.parent(v)) in_ab[v] ^= 1;
  for (VertexId v = b; v != kNoVertex; v = t.parent(v)) in_ab[v] ^= 1;
  for (VertexId v = x; v != kNoVertex; v = t.parent(v)) in_xy[v] ^= 1;
  for (VertexId v = y; v != kNoVertex; v = t.parent(v)) in_xy[v] ^= 1;

  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    if (!in_ab[v] || !in_xy[v]) continue;
    int sv = (t.is_ancestor_or_same((VertexId)v, x) ? 1 : -1) *
             (t.is_ancestor_or_same((VertexId)v, a) ? 1 : -1);
    if (rep.sign == 0)
      rep.sign = sv;
    else if (sv != rep.sign)
      rep.sign_consistent = false;
    rep.overlap += (double)t.segment_length((VertexId)v) / pi[(VertexId)v];
  }
  rep.matches = rep.sign_consistent &&
                std::abs(rep.value - rep.sign * rep.overlap) <=
                    1e-12 * std::max(1.0, rep.overlap);
  return rep;
}

}  // namespace treehardy
