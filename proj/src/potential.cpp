#include "treehardy/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treehardy/hardy.hpp"

namespace treehardy {

void Antichain::validate(const RootedTree& t) const {
  if (edges.empty()) throw std::invalid_argument("antichain: empty target set");
  std::vector<char> in_set(t.vertex_count(), 0);
  for (VertexId e : edges) {
    if (e < 0 || (std::size_t)e >= t.vertex_count())
      throw std::invalid_argument("antichain: edge out of range");
    if (in_set[e]) throw std::invalid_argument("antichain: duplicate edge");
    in_set[e] = 1;
  }
  for (VertexId e : edges)
    for (VertexId u = t.parent(e); u != kNoVertex; u = t.parent(u))
      if (in_set[u]) throw std::invalid_argument("antichain: comparable pair in targets");
}

Antichain canonicalize_antichain(const RootedTree& t, std::vector<VertexId> edges) {
  std::vector<char> in_set(t.vertex_count(), 0);
  for (VertexId e : edges) {
    if (e < 0 || (std::size_t)e >= t.vertex_count())
      throw std::invalid_argument("canonicalize_antichain: edge out of range");
    in_set[e] = 1;
  }
  Antichain out;
  for (VertexId e : edges) {
    if (!in_set[e]) continue;  // deduplicate
    in_set[e] = 0;
    bool dominated = false;
    for (VertexId u = t.parent(e); u != kNoVertex; u = t.parent(u))
      if (in_set[u] || std::find(out.edges.begin(), out.edges.end(), u) != out.edges.end()) {
        dominated = true;
        break;
      }
    if (!dominated) out.edges.push_back(e);
  }
  // a kept edge may still dominate a later one; second pass against the kept set
  std::vector<char> kept(t.vertex_count(), 0);
  for (VertexId e : out.edges) kept[e] = 1;
  Antichain final;
  for (VertexId e : out.edges) {
    bool dominated = false;
    for (VertexId u = t.parent(e); u != kNoVertex; u = t.parent(u))
      if (kept[u]) {
        dominated = true;
        break;
      }
    if (!dominated) final.edges.push_back(e);
  }
  return final;
}

CapacityResult capacity(const RootedTree& t, const Antichain& targets,
                        const EdgeWeight& pi, Exponent p) {
  targets.validate(t);
  pi.validate(t);
  const double inv_pm1 = 1.0 / (p.p - 1.0);

  std::vector<char> is_target(t.vertex_count(), 0);
  for (VertexId e : targets.edges) is_target[e] = 1;
  // relevant = ancestor closure of the targets; everything below a target is
  // pruned because the optimal potential is constant there
  std::vector<char> relevant(t.vertex_count(), 0);
  for (VertexId e : targets.edges)
    for (VertexId u = e; u != kNoVertex && !relevant[u]; u = t.parent(u)) relevant[u] = 1;

  // bottom-up: r[v] = resistivity of the branch "segment of v plus whatever
  // hangs below", with capacities of sibling branches adding in parallel
  std::vector<double> r(t.vertex_count(), 0.0);
  for (VertexId v = (VertexId)t.vertex_count() - 1; v >= 0; --v) {
    if (!relevant[v]) continue;
    double r_seg = (double)t.segment_length(v) * std::pow(pi[v], -inv_pm1);
    if (is_target[v]) {
      r[v] = r_seg;
      continue;
    }
    double c_below = 0.0;
    for (VertexId w : t.children(v))
      if (relevant[w]) c_below += std::pow(r[w], 1.0 - p.p);
    r[v] = r_seg + std::pow(c_below, -inv_pm1);
  }

  CapacityResult out;
  out.targets = targets;
  out.value = std::pow(r[0], 1.0 - p.p);

  // equilibrium, top-down: the drop across a branch splits in proportion to
  // resistivity in series, and is shared identically by parallel children
  out.equilibrium.value.assign(t.vertex_count(), 0.0);
  std::vector<double> budget(t.vertex_count(), 0.0);
  budget[0] = 1.0;
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    if (!relevant[v] || r[v] <= 0.0) continue;
    double r_seg = (double)t.segment_length(v) * std::pow(pi[v], -inv_pm1);
    double seg_drop = budget[v] * r_seg / r[v];
    out.equilibrium.value[v] = seg_drop / (double)t.segment_length(v);
    if (is_target[v]) continue;
    double rest = budget[v] - seg_drop;
    for (VertexId w : t.children(v))
      if (relevant[w]) budget[w] = rest;
  }

  // invariants: I phi = 1 at every target, ||phi||^p_{l^p(pi)} = value
  std::vector<double> prefix(t.vertex_count(), 0.0);
  double norm_p = 0.0;
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    double above = v == 0 ? 0.0 : prefix[t.parent(v)];
    prefix[v] = above + (double)t.segment_length(v) * out.equilibrium.value[v];
    norm_p += (double)t.segment_length(v) * pi[v] *
              std::pow(out.equilibrium.value[v], p.p);
  }
  for (VertexId e : targets.edges)
    if (std::abs(prefix[e] - 1.0) > 1e-9)
      throw std::logic_error("capacity: equilibrium does not reach 1 on a target");
  if (std::abs(norm_p - out.value) > 1e-9 * std::max(1.0, out.value))
    throw std::logic_error("capacity: equilibrium energy mismatch");
  return out;
}

CapacityResult boundary_capacity(const RootedTree& t, const EdgeWeight& pi, Exponent p) {
  Antichain a;
  a.edges = t.leaves();
  return capacity(t, a, pi, p);
}

WolffResult wolff_energy(const RootedTree& t, const TreeMeasure& mu,
                         const EdgeWeight& pi, Exponent p) {
  pi.validate(t);
  if (mu.mass.size() != t.vertex_count())
    throw std::invalid_argument("wolff_energy: measure size mismatch");
  const double ps = p.conj();
  WolffResult out;
  out.potential.value.resize(t.vertex_count());
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    double sigma = std::pow(pi[v], 1.0 - ps);
    double term = mu.tent[v] > 0.0
                      ? (double)t.segment_length(v) * sigma * std::pow(mu.tent[v], ps - 1.0)
                      : 0.0;
    double above = v == 0 ? 0.0 : out.potential.value[t.parent(v)];
    out.potential.value[v] = above + term;
    if (mu.tent[v] > 0.0)
      out.energy += (double)t.segment_length(v) * std::pow(pi[v], 1.0 - ps) *
                    std::pow(mu.tent[v], ps);
    out.energy_via_potential += out.potential.value[v] * mu.mass[v];
  }
  return out;
}

SciReport sci_audit(const RootedTree& t, const EdgeFunction& phi,
                    const EdgeWeight& pi, Exponent p) {
  t.require_plain("sci_audit");
  pi.validate(t);
  if (phi.value.size() != t.vertex_count())
    throw std::invalid_argument("sci_audit: phi size mismatch");
  double mx = 0.0;
  for (double x : phi.value) {
    if (x < 0.0 || !std::isfinite(x))
      throw std::invalid_argument("sci_audit: phi must be nonnegative");
    mx = std::max(mx, x);
  }
  if (mx <= 0.0) throw std::invalid_argument("sci_audit: phi is identically zero");

  VertexFunction iphi = hardy_apply(t, phi);
  SciReport rep;
  rep.bound = std::exp2(p.p) / (std::exp2(p.p) - 1.0);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    rep.phi_norm_p += pi[v] * std::pow(phi[v], p.p);

  double vmax = 0.0, vminpos = 0.0;
  for (double x : iphi.value) {
    if (x > 0.0) {
      vmax = std::max(vmax, x);
      vminpos = vminpos == 0.0 ? x : std::min(vminpos, x);
    }
  }

  // level sets are strict: Omega_k = { I phi > 2^k }, generated by the entry
  // edges where the prefix first exceeds the threshold
  auto entry_edges = [&](double thr) {
    Antichain a;
    for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
      double above = v == 0 ? 0.0 : iphi[t.parent(v)];
      if (iphi[v] > thr && above <= thr) a.edges.push_back(v);
    }
    return a;
  };

  std::int64_t k_max = (std::int64_t)std::floor(std::log2(vmax));
  while (std::exp2((double)k_max) >= vmax) --k_max;
  std::int64_t k = k_max;
  for (; std::exp2((double)k) >= vminpos; --k) {
    Antichain a = entry_edges(std::exp2((double)k));
    double cap = capacity(t, a, pi, p).value;
    rep.levels.push_back({k, cap, a.edges.size()});
    rep.level_sum += std::exp2(p.p * (double)k) * cap;
  }
  // below the smallest positive value the level set is frozen at {I phi > 0}
  // and the remaining geometric series sums in closed form
  Antichain stable = entry_edges(0.0);
  double cap0 = capacity(t, stable, pi, p).value;
  rep.levels.push_back({k, cap0, stable.edges.size()});
  rep.level_sum += std::exp2(p.p * (double)k) / (1.0 - std::exp2(-p.p)) * cap0;

  rep.ratio = rep.level_sum / rep.phi_norm_p;
  rep.pass = rep.level_sum <= rep.bound * rep.phi_norm_p * (1.0 + 1e-12);
  return rep;
}

std::vector<double> condenser_potential(const UnrootedTruncation& t,
                                        const std::vector<VertexId>& a_side,
                                        const std::vector<VertexId>& b_side) {
  if (a_side.empty() || b_side.empty())
    throw std::invalid_argument("condenser: both plates must be nonempty");
  std::vector<double> fixed(t.vertex_count(), -1.0);
  for (VertexId v : a_side) {
    if (v < 0 || (std::size_t)v >= t.vertex_count())
      throw std::invalid_argument("condenser: vertex out of range");
    fixed[v] = 1.0;
  }
  for (VertexId v : b_side) {
    if (v < 0 || (std::size_t)v >= t.vertex_count())
      throw std::invalid_argument("condenser: vertex out of range");
    if (fixed[v] == 1.0) throw std::invalid_argument("condenser: plates intersect");
    fixed[v] = 0.0;
  }

  // root at a fixed vertex, eliminate leaves-first: V_v = av + bv * V_parent
  VertexId root = a_side[0];
  std::vector<VertexId> order{root}, par(t.vertex_count(), kNoVertex);
  std::vector<char> visited(t.vertex_count(), 0);
  visited[root] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    VertexId u = order[i];
    for (VertexId w : t.neighbors(u))
      if (!visited[w]) {
        visited[w] = 1;
        par[w] = u;
        order.push_back(w);
      }
  }
  std::vector<double> av(t.vertex_count(), 0.0), bv(t.vertex_count(), 0.0);
  for (std::size_t i = order.size(); i-- > 0;) {
    VertexId v = order[i];
    if (fixed[v] >= 0.0) {
      av[v] = fixed[v];
      bv[v] = 0.0;
      continue;
    }
    double deg = (double)t.neighbors(v).size();
    double suma = 0.0, sumb = 0.0;
    for (VertexId w : t.neighbors(v)) {
      if (w == par[v]) continue;
      suma += av[w];
      sumb += bv[w];
    }
    double denom = deg - sumb;
    av[v] = suma / denom;
    bv[v] = (par[v] == kNoVertex ? 0.0 : 1.0) / denom;
  }
  std::vector<double> V(t.vertex_count(), 0.0);
  for (VertexId v : order)
    V[v] = av[v] + (par[v] == kNoVertex ? 0.0 : bv[v] * V[par[v]]);
  return V;
}

double condenser_capacity(const UnrootedTruncation& t,
                          const std::vector<VertexId>& a_side,
                          const std::vector<VertexId>& b_side) {
  std::vector<double> V = condenser_potential(t, a_side, b_side);
  double energy = 0.0;
  for (VertexId u = 0; u < (VertexId)t.vertex_count(); ++u)
    for (VertexId w : t.neighbors(u))
      if (w > u) {
        double d = V[u] - V[w];
        energy += d * d;
      }
  return energy;
}

}  // namespace treehardy
