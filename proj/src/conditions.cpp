#include "treehardy/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace treehardy {

namespace {

void check_inputs(const RootedTree& t, const TreeMeasure& mu,
                  const EdgeWeight& pi, const char* who) {
  pi.validate(t);
  if (mu.tent.size() != t.vertex_count() || mu.mass.size() != t.vertex_count())
    throw std::invalid_argument(std::string(who) + ": measure does not fit the tree");
}

void check_measure(const RootedTree& t, const TreeMeasure& mu, const char* who) {
  if (mu.tent.size() != t.vertex_count() || mu.mass.size() != t.vertex_count())
    throw std::invalid_argument(std::string(who) + ": measure does not fit the tree");
}

void require_full_binary(const RootedTree& t, const char* who) {
  t.require_plain(who);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (!t.is_leaf(v) && t.children(v).size() != 2)
      throw std::invalid_argument(std::string(who) + ": needs a full binary truncation");
}

// sigma(alpha) tent(alpha)^(p*) of one actual edge in v's segment
std::vector<double> segment_terms(const RootedTree& t, const TreeMeasure& mu,
                                  const EdgeWeight& pi, double ps) {
  std::vector<double> term(t.vertex_count(), 0.0);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (mu.tent[v] > 0.0)
      term[v] = std::pow(pi[v], 1.0 - ps) * std::pow(mu.tent[v], ps);
  return term;
}

// partial energies at the top edge of each segment; children are already
// final when their id is visited because ids are topological
std::vector<double> energy_below(const RootedTree& t,
                                 const std::vector<double>& term) {
  std::vector<double> num(t.vertex_count(), 0.0);
  for (VertexId v = (VertexId)t.vertex_count() - 1; v >= 0; --v) {
    num[v] += (double)t.segment_length(v) * term[v];
    if (v > 0) num[t.parent(v)] += num[v];
  }
  return num;
}

// d_pi at the bottom edge of each segment, the pre-root edge included
std::vector<double> dpi_inclusive(const RootedTree& t, const EdgeWeight& pi,
                                  double ps) {
  std::vector<double> d(t.vertex_count(), 0.0);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    d[v] = (v == 0 ? 0.0 : d[t.parent(v)]) +
           (double)t.segment_length(v) * std::pow(pi[v], 1.0 - ps);
  return d;
}

double antichain_mass(const TreeMeasure& mu, const std::vector<VertexId>& fam) {
  double m = 0.0;
  for (VertexId v : fam) m += mu.tent[v];
  return m;
}

struct SearchResult {
  double ratio = 0.0;
  std::vector<VertexId> family;
};

// best mass/capacity ratio over antichains drawn from `cand` (sorted,
// positive tent).  Exhaustive when the pool is small, else singles plus a
// seeded hill climb capped at `budget` capacity evaluations.  Families passed
// in `seeds` are always evaluated, so the result never falls below them.
SearchResult best_antichain_ratio(const RootedTree& t, const TreeMeasure& mu,
                                  const EdgeWeight& pi, Exponent p,
                                  const std::vector<VertexId>& cand, int budget,
                                  std::uint64_t seed, int exhaustive_limit,
                                  const std::vector<std::vector<VertexId>>& seeds) {
  SearchResult best;
  if (cand.empty()) return best;

  auto eval = [&](const std::vector<VertexId>& fam) {
    double m = antichain_mass(mu, fam);
    if (m <= 0.0) return 0.0;
    Antichain a;
    a.edges = fam;
    std::sort(a.edges.begin(), a.edges.end());
    return m / capacity(t, a, pi, p).value;
  };
  auto consider = [&](const std::vector<VertexId>& fam, double r) {
    if (r > best.ratio) {
      best.ratio = r;
      best.family = fam;
      std::sort(best.family.begin(), best.family.end());
    }
  };

  if ((int)cand.size() <= exhaustive_limit) {
    std::vector<VertexId> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == cand.size()) {
        if (!chosen.empty()) consider(chosen, eval(chosen));
        return;
      }
      rec(i + 1);
      for (VertexId c : chosen)
        if (t.is_ancestor_or_same(c, cand[i])) return;
      chosen.push_back(cand[i]);
      rec(i + 1);
      chosen.pop_back();
    };
    rec(0);
    return best;
  }

  int evals = 0;
  auto spend = [&](const std::vector<VertexId>& fam) {
    ++evals;
    double r = eval(fam);
    consider(fam, r);
    return r;
  };
  auto compatible = [&](VertexId c, const std::vector<VertexId>& fam) {
    for (VertexId f : fam)
      if (t.is_ancestor_or_same(f, c) || t.is_ancestor_or_same(c, f)) return false;
    return true;
  };
  auto climb = [&](std::vector<VertexId> fam) {
    if (fam.empty()) return;
    double cur = spend(fam);
    while (evals < budget) {
      double best_r = cur;
      std::vector<VertexId> best_fam;
      for (VertexId c : cand) {
        if (evals >= budget) break;
        auto it = std::find(fam.begin(), fam.end(), c);
        std::vector<VertexId> next = fam;
        if (it != fam.end()) {
          if (fam.size() == 1) continue;
          next.erase(std::find(next.begin(), next.end(), c));
        } else {
          if (!compatible(c, fam)) continue;
          next.push_back(c);
        }
        double r = spend(next);
        if (r > best_r) {
          best_r = r;
          best_fam = std::move(next);
        }
      }
      if (best_fam.empty() || best_r <= cur * (1.0 + 1e-14)) break;
      fam = std::move(best_fam);
      cur = best_r;
    }
  };

  for (VertexId c : cand) spend({c});
  for (const auto& s : seeds)
    if (!s.empty()) climb(s);
  climb(best.family);

  std::mt19937_64 rng(seed);
  std::vector<VertexId> pool = cand;
  while (evals < budget) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<VertexId> fam;
    for (VertexId c : pool)
      if ((rng() & 3u) != 0u && compatible(c, fam)) fam.push_back(c);
    if (fam.empty()) fam.push_back(pool[rng() % pool.size()]);
    climb(std::move(fam));
  }
  return best;
}

}  // namespace

std::pair<ConditionReport, ConditionReport> me_sb_constants(
    const RootedTree& t, const TreeMeasure& mu, const EdgeWeight& pi,
    Exponent p, bool with_table) {
  check_inputs(t, mu, pi, "me_sb_constants");
  const double ps = p.conj();
  std::vector<double> term = segment_terms(t, mu, pi, ps);
  std::vector<double> num = energy_below(t, term);
  std::vector<double> dpi = dpi_inclusive(t, pi, ps);

  ConditionReport me, sb;
  me.name = "mass-energy";
  sb.name = "simple-box";
  double best_me = 0.0;
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    if (mu.tent[v] <= 0.0) continue;
    double ratio = num[v] / mu.tent[v];
    if (me.witness_edge == kNoVertex || ratio > best_me) {
      best_me = ratio;
      me.witness_edge = v;
    }
    double box = mu.tent[v] * std::pow(dpi[v], p.p - 1.0);
    if (sb.witness_edge == kNoVertex || box > sb.value) {
      sb.value = box;
      sb.witness_edge = v;
    }
    if (with_table) {
      me.table.push_back({v, t.edge_depth_top(v), mu.tent[v], ratio});
      sb.table.push_back({v, t.edge_depth(v), mu.tent[v], box});
    }
  }
  me.value = best_me > 0.0 ? std::pow(best_me, p.p - 1.0) : 0.0;
  me.lower = me.upper = me.value;
  sb.lower = sb.upper = sb.value;
  return {std::move(me), std::move(sb)};
}

double me_ratio_at(const RootedTree& t, const TreeMeasure& mu,
                   const EdgeWeight& pi, Exponent p, VertexId v) {
  check_inputs(t, mu, pi, "me_ratio_at");
  if (v < 0 || v >= (VertexId)t.vertex_count())
    throw std::invalid_argument("me_ratio_at: edge out of range");
  if (mu.tent[v] <= 0.0) return 0.0;
  std::vector<double> num = energy_below(t, segment_terms(t, mu, pi, p.conj()));
  return num[v] / mu.tent[v];
}

double sb_value_at(const RootedTree& t, const TreeMeasure& mu,
                   const EdgeWeight& pi, Exponent p, VertexId v) {
  check_inputs(t, mu, pi, "sb_value_at");
  if (v < 0 || v >= (VertexId)t.vertex_count())
    throw std::invalid_argument("sb_value_at: edge out of range");
  if (mu.tent[v] <= 0.0) return 0.0;
  const double ps = p.conj();
  double d = 0.0;
  for (VertexId w = v; w != kNoVertex; w = t.parent(w))
    d += (double)t.segment_length(w) * std::pow(pi[w], 1.0 - ps);
  return mu.tent[v] * std::pow(d, p.p - 1.0);
}

ConditionReport iso_bracket(const RootedTree& t, const TreeMeasure& mu,
                            const EdgeWeight& pi, Exponent p, int budget,
                            std::uint64_t seed, int exhaustive_limit) {
  check_inputs(t, mu, pi, "iso_bracket");
  ConditionReport rep;
  rep.name = "isocapacitary";

  std::vector<VertexId> cand;
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (mu.tent[v] > 0.0) cand.push_back(v);
  if (cand.empty()) return rep;

  SearchResult found =
      best_antichain_ratio(t, mu, pi, p, cand, budget, seed, exhaustive_limit, {});
  rep.value = rep.lower = found.ratio;
  rep.witness_family.edges = found.family;
  if (found.family.size() == 1) rep.witness_edge = found.family[0];

  ConditionReport me = me_sb_constants(t, mu, pi, p).first;
  rep.upper = std::pow(p.p, p.conj()) * me.value;
  return rep;
}

double iso_ratio_of(const RootedTree& t, const TreeMeasure& mu,
                    const EdgeWeight& pi, Exponent p, const Antichain& family) {
  check_inputs(t, mu, pi, "iso_ratio_of");
  family.validate(t);
  double m = antichain_mass(mu, family.edges);
  if (m <= 0.0) return 0.0;
  return m / capacity(t, family, pi, p).value;
}

ConditionReport s_testing(const RootedTree& t, const TreeMeasure& mu, double s,
                          bool with_table) {
  check_measure(t, mu, "s_testing");
  if (!(s >= 1.0))
    throw std::invalid_argument("s_testing: needs s >= 1");
  ConditionReport rep;
  rep.name = "s-testing";
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    if (mu.tent[v] <= 0.0) continue;
    double ratio = s_ratio_at(t, mu, s, v);
    if (rep.witness_edge == kNoVertex || ratio > rep.value) {
      rep.value = ratio;
      rep.witness_edge = v;
    }
    if (with_table)
      rep.table.push_back({v, t.edge_depth_top(v), mu.tent[v], ratio});
  }
  rep.lower = rep.upper = rep.value;
  return rep;
}

double s_ratio_at(const RootedTree& t, const TreeMeasure& mu, double s,
                  VertexId v) {
  check_measure(t, mu, "s_ratio_at");
  if (!(s >= 1.0))
    throw std::invalid_argument("s_ratio_at: needs s >= 1");
  if (v < 0 || v >= (VertexId)t.vertex_count())
    throw std::invalid_argument("s_ratio_at: edge out of range");
  if (mu.tent[v] <= 0.0) return 0.0;
  // g(y) = sum over the stored path [v..y] of seg_len * tent, the localized
  // potential seen from the top edge of v's segment
  double num = 0.0;
  std::vector<std::pair<VertexId, double>> stack;
  stack.push_back({v, (double)t.segment_length(v) * mu.tent[v]});
  while (!stack.empty()) {
    auto [y, g] = stack.back();
    stack.pop_back();
    if (mu.mass[y] > 0.0) num += mu.mass[y] * std::pow(g, s);
    for (VertexId c : t.children(y))
      if (mu.tent[c] > 0.0)
        stack.push_back({c, g + (double)t.segment_length(c) * mu.tent[c]});
  }
  return num / mu.tent[v];
}

MwReport mw_quantities(const RootedTree& t, const TreeMeasure& mu, double s,
                       Exponent p) {
  require_full_binary(t, "mw_quantities");
  check_measure(t, mu, "mw_quantities");
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("mw_quantities: needs s in (0, 1)");
  const double ps = p.conj();

  std::vector<double> phi(t.vertex_count(), 0.0);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (mu.tent[v] > 0.0)
      phi[v] = mu.tent[v] * std::pow(2.0, s * (double)t.edge_depth(v));

  MwReport rep;
  for (VertexId x : t.leaves()) {
    double dx = std::ldexp(1.0, -(int)t.edge_depth(x));
    double sum = 0.0, pow_sum = 0.0, top = 0.0;
    for (VertexId a = x; a != kNoVertex; a = t.parent(a)) {
      sum += phi[a];
      if (phi[a] > 0.0) pow_sum += std::pow(phi[a], ps);
      top = std::max(top, phi[a]);
    }
    if (sum > 0.0) rep.lhs += dx * std::pow(sum, ps);
    rep.mid += dx * pow_sum;
    if (top > 0.0) rep.rhs += dx * std::pow(top, ps);
  }
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (mu.tent[v] > 0.0)
      rep.mid_energy += std::pow(mu.tent[v], ps) *
                        std::pow(2.0, -(double)t.edge_depth(v) * (1.0 - s * ps));
  double slack = 1.0 + 1e-12;
  rep.chain_ok = rep.rhs <= rep.mid * slack && rep.mid <= rep.lhs * slack;
  return rep;
}

SupermartingaleReport supermartingale_diag(const RootedTree& t,
                                           const TreeMeasure& mu, double s,
                                           double r) {
  require_full_binary(t, "supermartingale_diag");
  check_measure(t, mu, "supermartingale_diag");
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("supermartingale_diag: needs s in (0, 1)");
  if (!(r > 0.0) || !(r < 1.0))
    throw std::invalid_argument("supermartingale_diag: needs r in (0, 1)");

  std::vector<double> phi(t.vertex_count(), 0.0);
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (mu.tent[v] > 0.0)
      phi[v] = mu.tent[v] * std::pow(2.0, s * (double)t.edge_depth(v));

  SupermartingaleReport rep;
  rep.min_drift_slack = std::numeric_limits<double>::infinity();
  const double log2 = std::log(2.0);
  const double jump_cap = std::pow(2.0, s);
  bool any_checked = false;
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    if (t.is_leaf(v)) continue;
    ++rep.interior_checked;
    VertexId c0 = t.children(v)[0], c1 = t.children(v)[1];
    if (phi[v] <= 0.0 || phi[c0] <= 0.0 || phi[c1] <= 0.0) {
      // a vanished tent sends some log to -infinity, both checks hold
      ++rep.vacuous;
      continue;
    }
    any_checked = true;
    double slack = std::log(phi[v]) - (1.0 - s) * log2 -
                   0.5 * (std::log(phi[c0]) + std::log(phi[c1]));
    rep.min_drift_slack = std::min(rep.min_drift_slack, slack);
    if (slack < -1e-12) rep.drift_ok = false;
    for (VertexId c : {c0, c1}) {
      double factor = phi[c] / phi[v];
      rep.max_jump_factor = std::max(rep.max_jump_factor, factor);
      if (factor > jump_cap * (1.0 + 1e-12)) rep.jump_ok = false;
    }
  }
  if (!any_checked) rep.min_drift_slack = 0.0;

  // slow-decay counts: beta below alpha at edge distance k with
  // phi(beta) >= phi(alpha) (1-r)^k
  std::int64_t max_k = 0;
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    max_k = std::max(max_k, t.edge_depth(v));
  if (max_k > 0) {
    std::vector<std::int64_t> max_count(max_k + 1, 0);
    for (VertexId a = 0; a < (VertexId)t.vertex_count(); ++a) {
      if (phi[a] <= 0.0) continue;
      std::vector<std::int64_t> count(max_k + 1, 0);
      std::vector<std::pair<VertexId, std::int64_t>> stack;
      for (VertexId c : t.children(a)) stack.push_back({c, 1});
      while (!stack.empty()) {
        auto [b, k] = stack.back();
        stack.pop_back();
        if (phi[b] >= phi[a] * std::pow(1.0 - r, (double)k)) ++count[k];
        for (VertexId c : t.children(b)) stack.push_back({c, k + 1});
      }
      for (std::int64_t k = 1; k <= max_k; ++k)
        max_count[k] = std::max(max_count[k], count[k]);
    }
    for (std::int64_t k = 1; k <= max_k; ++k)
      rep.b_counts.push_back({k, max_count[k], std::pow(2.0, 0.5 * (double)k)});
  }
  return rep;
}

TailReport compact_tails(const RootedTree& t, const TreeMeasure& mu,
                         const EdgeWeight& pi, Exponent p, int budget,
                         std::uint64_t seed) {
  check_inputs(t, mu, pi, "compact_tails");
  const double ps = p.conj();
  std::vector<double> term = segment_terms(t, mu, pi, ps);
  std::vector<double> num = energy_below(t, term);

  std::int64_t max_d = 0;
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    max_d = std::max(max_d, t.edge_depth(v));

  TailReport rep;
  rep.me_tail.assign(max_d + 2, 0.0);
  rep.cap_tail.assign(max_d + 2, 0.0);
  rep.cap_witness.assign(max_d + 2, Antichain{});

  // within a segment the ratio decreases one term per level, so the deepest
  // admissible evaluation point is max(top, n)
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v) {
    if (mu.tent[v] <= 0.0) continue;
    std::int64_t top = t.edge_depth_top(v), bot = t.edge_depth(v);
    for (std::int64_t n = 0; n <= bot; ++n) {
      double cut = (double)(std::max(top, n) - top);
      double ratio = (num[v] - cut * term[v]) / mu.tent[v];
      rep.me_tail[n] = std::max(rep.me_tail[n], ratio);
    }
  }

  for (std::int64_t n = max_d; n >= 0; --n) {
    std::vector<VertexId> cand;
    for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
      if (mu.tent[v] > 0.0 && t.edge_depth(v) >= n) cand.push_back(v);
    if (cand.empty()) continue;
    std::vector<std::vector<VertexId>> seeds;
    if (!rep.cap_witness[n + 1].edges.empty())
      seeds.push_back(rep.cap_witness[n + 1].edges);
    SearchResult found = best_antichain_ratio(t, mu, pi, p, cand, budget,
                                              seed + (std::uint64_t)n, 12, seeds);
    rep.cap_tail[n] = found.ratio;
    rep.cap_witness[n].edges = found.family;
  }
  return rep;
}

BesselReport bessel_check(const RootedTree& t, const TreeMeasure& mu, double s,
                          Exponent p) {
  require_full_binary(t, "bessel_check");
  check_measure(t, mu, "bessel_check");
  if (!(s > 0.0) || s > 1.0)
    throw std::invalid_argument("bessel_check: needs s in (0, 1]");
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (!t.is_leaf(v) && mu.mass[v] > 0.0)
      throw std::invalid_argument("bessel_check: interior mass present");

  const double ps = p.conj();
  BesselReport rep;
  rep.leaves = t.leaves();
  const double shrink = 1.0 - std::pow(2.0, -s);

  for (VertexId x : rep.leaves) {
    double kernel = 0.0;
    for (VertexId y : rep.leaves) {
      if (mu.mass[y] <= 0.0) continue;
      VertexId m = x == y ? x : t.confluent(x, y).first;
      kernel += mu.mass[y] * std::pow(2.0, s * (double)t.edge_depth(m));
    }
    double path = 0.0;  // tents above x at scale weight, root edge excluded
    double path_full = mu.total();
    for (VertexId a = x; a != 0; a = t.parent(a)) {
      double w = mu.tent[a] * std::pow(2.0, s * (double)t.edge_depth(a));
      path += w;
      path_full += w;
    }
    double tent_val = mu.total() + shrink * path;
    rep.kernel_form.push_back(kernel);
    rep.tent_form.push_back(tent_val);
    double gap = std::abs(kernel - tent_val) / std::max(1.0, std::abs(tent_val));
    rep.max_identity_gap = std::max(rep.max_identity_gap, gap);
    double slack = 1.0 + 1e-12;
    if (kernel > path_full * slack || shrink * path_full > kernel * slack)
      rep.bounds_ok = false;
    rep.energy_bessel +=
        std::ldexp(1.0, -(int)t.edge_depth(x)) * std::pow(kernel, ps);
  }
  for (VertexId v = 0; v < (VertexId)t.vertex_count(); ++v)
    if (mu.tent[v] > 0.0)
      rep.energy_pi += std::pow(mu.tent[v], ps) *
                       std::pow(2.0, -(double)t.edge_depth(v) * (1.0 - s * ps));
  rep.energy_ratio = rep.energy_pi > 0.0 ? rep.energy_bessel / rep.energy_pi : 0.0;
  return rep;
}

}  // namespace treehardy
