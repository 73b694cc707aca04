#include "treehardy/bellman.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace treehardy {

namespace {

// accumulates a per-edge quantity over tents, children first
std::vector<double> cumulative(const RootedTree& t, std::vector<double> x) {
  for (VertexId v = (VertexId)t.vertex_count() - 1; v > 0; --v)
    x[t.parent(v)] += x[v];
  return x;
}

void check_shapes(const RootedTree& t, const EdgeWeight& sigma,
                  const TreeMeasure& lambda, const char* who) {
  t.require_plain(who);
  if (sigma.value.size() != t.vertex_count())
    throw std::invalid_argument(std::string(who) + ": weight does not fit the tree");
  for (double s : sigma.value)
    if (!(s >= 0.0))
      throw std::invalid_argument(std::string(who) + ": weight must be nonnegative");
  if (lambda.mass.size() != t.vertex_count() || lambda.tent.size() != t.vertex_count())
    throw std::invalid_argument(std::string(who) + ": measure does not fit the tree");
}

// flow budget G(a) = sum_{b <= a} sigma(b) (I*(b)/|b|)^p, compared to I*(a)
std::vector<double> flow_budget(const RootedTree& t, const EdgeWeight& sigma,
                                const TreeMeasure& lambda,
                                const std::vector<double>& w, Exponent p) {
  std::vector<double> g(t.vertex_count(), 0.0);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (lambda.tent[v] > 0.0)
      g[v] = sigma[v] * std::pow(lambda.tent[v] / w[v], p.p);
  return cumulative(t, std::move(g));
}

void require_budget(const RootedTree& t, const EdgeWeight& sigma,
                    const TreeMeasure& lambda, const std::vector<double>& w,
                    Exponent p, const char* who) {
  std::vector<double> g = flow_budget(t, sigma, lambda, w, p);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (g[v] > lambda.tent[v] * (1.0 + 1e-9) + 1e-300)
      throw std::invalid_argument(std::string(who) +
                                  ": flow budget fails at edge " + std::to_string(v));
}

double& coord(BellmanPoint& x, int i) {
  switch (i) {
    case 0: return x.F;
    case 1: return x.f;
    case 2: return x.A;
    default: return x.v;
  }
}

// interior point of D with room for difference stencils
BellmanPoint random_domain_point(std::mt19937_64& rng, Exponent p) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  BellmanPoint x;
  x.p = p;
  x.v = 0.1 + 2.0 * uni(rng);
  x.A = x.v * (0.05 + 0.9 * uni(rng));
  x.F = 0.1 + 2.0 * uni(rng);
  x.f = std::pow(x.F * std::pow(x.v, p.p - 1.0), 1.0 / p.p) * (0.05 + 0.9 * uni(rng));
  return x;
}

double eval_shifted(BellmanPoint x, int i, double h) {
  coord(x, i) += h;
  return bellman_eval(x);
}

Eigen::Matrix4d hessian_stencil(const BellmanPoint& x, double h) {
  Eigen::Matrix4d H;
  double b0 = bellman_eval(x);
  for (int i = 0; i < 4; ++i) {
    H(i, i) = (eval_shifted(x, i, h) - 2.0 * b0 + eval_shifted(x, i, -h)) /
              (h * h);
    for (int j = i + 1; j < 4; ++j) {
      BellmanPoint pp = x, pm = x, mp = x, mm = x;
      coord(pp, i) += h; coord(pp, j) += h;
      coord(pm, i) += h; coord(pm, j) -= h;
      coord(mp, i) -= h; coord(mp, j) += h;
      coord(mm, i) -= h; coord(mm, j) -= h;
      H(i, j) = H(j, i) = (bellman_eval(pp) - bellman_eval(pm) -
                           bellman_eval(mp) + bellman_eval(mm)) /
                          (4.0 * h * h);
    }
  }
  return H;
}

}  // namespace

double bellman_eval(const BellmanPoint& x) {
  const double p = x.p.p;
  const double cc = std::pow(x.p.conj(), p);
  if (x.f <= 0.0) return cc * x.F;
  double den = x.A + (p - 1.0) * x.v;
  if (den <= 0.0)
    throw std::invalid_argument("bellman_eval: vanishing denominator with f > 0");
  return cc * (x.F - std::pow((p - 1.0) / den, p - 1.0) * std::pow(x.f, p));
}

bool bellman_in_domain(const BellmanPoint& x, double slack) {
  if (x.F < 0.0 || x.f < 0.0 || x.A < 0.0 || x.v < 0.0) return false;
  double cap = x.F * std::pow(x.v, x.p.p - 1.0);
  if (std::pow(x.f, x.p.p) > cap + slack * std::max(1.0, cap)) return false;
  return x.A <= x.v + slack * std::max(1.0, x.v);
}

ConcavityReport concavity_probe(Exponent p, int samples, std::uint64_t seed,
                                int midpoint_pairs) {
  if (samples < 1)
    throw std::invalid_argument("concavity_probe: needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ConcavityReport rep;
  rep.points = samples;
  rep.pairs = midpoint_pairs;
  rep.min_midpoint_gap = std::numeric_limits<double>::infinity();

  for (int it = 0; it < samples; ++it) {
    BellmanPoint x = random_domain_point(rng, p);
    // second differences at two widths, extrapolated to cancel the h^2 term;
    // a plain stencil is too noisy where f is much smaller than the scale
    double h = 1e-4 * std::max({x.F, x.f, x.A, x.v, 0.1});
    Eigen::Matrix4d H =
        (4.0 * hessian_stencil(x, 0.5 * h) - hessian_stencil(x, h)) / 3.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(H);
    double top = es.eigenvalues().maxCoeff();
    double scale = std::max(std::abs(es.eigenvalues().minCoeff()),
                            std::abs(top));
    double rel = scale > 0.0 ? top / scale : 0.0;
    rep.max_eigenvalue = std::max(rep.max_eigenvalue, rel);
    if (rel > 1e-5) rep.hessian_ok = false;

    // one-variable concavity in A alone
    double b0 = bellman_eval(x);
    double d2a = eval_shifted(x, 2, h) - 2.0 * b0 + eval_shifted(x, 2, -h);
    if (d2a > 1e-9 * std::max(1.0, std::abs(b0))) rep.a_concave_ok = false;

    // degree-1 homogeneity
    double tscale = 0.1 + 10.0 * uni(rng);
    BellmanPoint tx = x;
    tx.F *= tscale; tx.f *= tscale; tx.A *= tscale; tx.v *= tscale;
    double gap = std::abs(bellman_eval(tx) - tscale * b0) /
                 std::max(1.0, std::abs(tscale * b0));
    rep.max_homogeneity_gap = std::max(rep.max_homogeneity_gap, gap);
    if (gap > 1e-12) rep.homogeneity_ok = false;
  }

  for (int it = 0; it < midpoint_pairs; ++it) {
    BellmanPoint x = random_domain_point(rng, p);
    BellmanPoint y = random_domain_point(rng, p);
    BellmanPoint m = x;
    m.F = 0.5 * (x.F + y.F);
    m.f = 0.5 * (x.f + y.f);
    m.A = 0.5 * (x.A + y.A);
    m.v = 0.5 * (x.v + y.v);
    double bx = bellman_eval(x), by = bellman_eval(y), bm = bellman_eval(m);
    double gap = bm - 0.5 * (bx + by);
    rep.min_midpoint_gap = std::min(rep.min_midpoint_gap, gap);
    if (gap < -1e-9 * std::max({1.0, std::abs(bx), std::abs(by)}))
      rep.midpoint_ok = false;
  }
  if (midpoint_pairs == 0) rep.min_midpoint_gap = 0.0;
  return rep;
}

StepReport step_check(const RootedTree& t, const EdgeWeight& sigma,
                      const TreeMeasure& lambda, const EdgeFunction& phi,
                      Exponent p) {
  check_shapes(t, sigma, lambda, "step_check");
  if (phi.value.size() != t.vertex_count())
    throw std::invalid_argument("step_check: phi does not fit the tree");
  for (double x : phi.value)
    if (!(x >= 0.0))
      throw std::invalid_argument("step_check: phi must be nonnegative");
  std::vector<double> w = canonical_weight(t).value;
  require_budget(t, sigma, lambda, w, p, "step_check");

  const std::size_t n = t.vertex_count();
  std::vector<double> fl(n), fpl(n), acc(n);
  for (std::size_t v = 0; v < n; ++v) {
    fl[v] = phi[v] * lambda.mass[v];
    fpl[v] = std::pow(phi[v], p.p) * lambda.mass[v];
    acc[v] = lambda.tent[v] > 0.0
                 ? sigma[v] * std::pow(lambda.tent[v] / w[v], p.p)
                 : 0.0;
  }
  fl = cumulative(t, std::move(fl));
  fpl = cumulative(t, std::move(fpl));
  acc = cumulative(t, std::move(acc));

  StepReport rep;
  rep.edges = (std::int64_t)n;
  rep.min_edgewise_gap = std::numeric_limits<double>::infinity();
  rep.family.resize(n);
  std::vector<double> bval(n);
  for (std::size_t v = 0; v < n; ++v) {
    BellmanPoint& x = rep.family[v];
    x.F = fpl[v] / w[v];
    x.f = fl[v] / w[v];
    x.A = acc[v] / w[v];
    x.v = lambda.tent[v] / w[v];
    x.p = p;
    if (!bellman_in_domain(x, 1e-9)) rep.domain_ok = false;
    bval[v] = bellman_eval(x);
  }

  double telescoped = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const BellmanPoint& x = rep.family[v];
    // additivity: x = y + sum (|b|/|a|) x_b, coordinate by coordinate
    double yb[4] = {fpl[v] - std::pow(phi[v], p.p) * lambda.mass[v],
                    fl[v] - phi[v] * lambda.mass[v],
                    acc[v] - (lambda.tent[v] > 0.0
                                  ? sigma[v] * std::pow(lambda.tent[v] / w[v], p.p)
                                  : 0.0),
                    lambda.tent[v] - lambda.mass[v]};
    double child[4] = {0.0, 0.0, 0.0, 0.0};
    for (VertexId c : t.children((VertexId)v)) {
      child[0] += fpl[c];
      child[1] += fl[c];
      child[2] += acc[c];
      child[3] += lambda.tent[c];
    }
    for (int i = 0; i < 4; ++i) {
      double gap = std::abs(yb[i] - child[i]) / std::max(1.0, std::abs(yb[i]));
      rep.max_recursion_gap = std::max(rep.max_recursion_gap, gap);
      if (gap > 1e-12) rep.recursion_ok = false;
    }

    double lhs = w[v] * bval[v];
    for (VertexId c : t.children((VertexId)v)) lhs -= w[c] * bval[c];
    telescoped += lhs;
    double rhs = sigma[v] * std::pow(x.f, p.p);
    double gap = lhs - rhs;
    rep.min_edgewise_gap = std::min(rep.min_edgewise_gap, gap);
    if (gap < -1e-9 * std::max({1.0, std::abs(lhs), rhs})) rep.edgewise_ok = false;
    rep.lhs_total += rhs;
  }
  rep.telescope_gap = std::abs(telescoped - w[0] * bval[0]) /
                      std::max(1.0, std::abs(w[0] * bval[0]));
  rep.conclusion_cap =
      w[0] * std::pow(p.conj(), p.p) * rep.family[0].F;
  rep.conclusion_ok = rep.lhs_total <= rep.conclusion_cap * (1.0 + 1e-9) + 1e-300;
  return rep;
}

CetReport cet_verify(const RootedTree& t, const EdgeWeight& sigma,
                     const TreeMeasure& lambda, Exponent p, int trials,
                     std::uint64_t seed) {
  check_shapes(t, sigma, lambda, "cet_verify");
  std::vector<double> w = canonical_weight(t).value;
  require_budget(t, sigma, lambda, w, p, "cet_verify");
  const double cc = std::pow(p.conj(), p.p);
  const std::size_t n = t.vertex_count();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  CetReport rep;
  rep.trials = trials;
  for (int it = 0; it < trials; ++it) {
    std::vector<double> phi(n, 0.0);
    int mode = it % 3;
    if (mode == 0) {
      for (double& x : phi) x = uni(rng);
    } else if (mode == 1) {
      for (double& x : phi)
        if (uni(rng) < 0.4) x = std::exp(3.0 * uni(rng)) - 1.0;
    } else {
      VertexId top = (VertexId)(rng() % n);
      for (std::size_t v = 0; v < n; ++v)
        if (t.is_ancestor_or_same(top, (VertexId)v)) phi[v] = 1.0;
    }
    std::vector<double> fl(n);
    double nrm = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      fl[v] = phi[v] * lambda.mass[v];
      nrm += std::pow(phi[v], p.p) * lambda.mass[v];
    }
    fl = cumulative(t, std::move(fl));
    double lhs = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (fl[v] > 0.0) lhs += sigma[v] * std::pow(fl[v] / w[v], p.p);
    if (nrm <= 0.0) continue;
    double ratio = lhs / (cc * nrm);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > 1.0 + 1e-9) rep.pass = false;
  }
  return rep;
}

BellmanInstance admissible_instance(const RootedTree& t, std::uint64_t seed,
                                    Exponent p) {
  t.require_plain("admissible_instance");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> mass(t.vertex_count(), 0.0);
  for (VertexId leaf : t.leaves()) mass[leaf] = 0.1 + 0.9 * uni(rng);

  BellmanInstance out;
  out.lambda = cumulate(t, std::move(mass));
  std::vector<double> w = canonical_weight(t).value;
  out.sigma.role = WeightRole::dual;
  out.sigma.value.resize(t.vertex_count());
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    double theta = 0.05 + 0.95 * uni(rng);
    double tent = out.lambda.tent[v];
    out.sigma.value[v] =
        tent > 0.0 ? theta * std::pow(w[v], p.p) * std::pow(tent, 1.0 - p.p)
                   : theta;
  }
  std::vector<double> g = flow_budget(t, out.sigma, out.lambda, w, p);
  double worst = 0.0;
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    if (out.lambda.tent[v] > 0.0)
      worst = std::max(worst, g[v] / out.lambda.tent[v]);
  if (worst > 0.0)
    for (double& s : out.sigma.value) s *= 0.999 / worst;
  return out;
}

}  // namespace treehardy
