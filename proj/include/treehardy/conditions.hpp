#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treehardy/measure.hpp"
#include "treehardy/potential.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

struct RatioRow {
  VertexId edge = kNoVertex;
  std::int64_t depth = 0;  // d(alpha) of the evaluated actual edge
  double tent = 0.0;
  double ratio = 0.0;
};

// One trace-measure condition constant.  `value` is the constant itself;
// searched conditions also fill the [lower, upper] bracket.  The witness
// (edge or antichain) re-evaluates to `value` via the *_at helpers.
struct ConditionReport {
  std::string name;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  VertexId witness_edge = kNoVertex;
  Antichain witness_family;
  std::vector<RatioRow> table;
};

// Mass-energy and simple-box constants in one pass.  Edges with zero tent
// are skipped (their ratio is 0/0 and both conditions hold vacuously).
// Chains are evaluated at the depth where each sup is attained: the segment
// top for mass-energy, the segment bottom for the box condition.
std::pair<ConditionReport, ConditionReport> me_sb_constants(
    const RootedTree& t, const TreeMeasure& mu, const EdgeWeight& pi,
    Exponent p, bool with_table = false);

// raw energy/mass ratio at the top edge of v's segment; the constant is
// ratio^(p-1)
double me_ratio_at(const RootedTree& t, const TreeMeasure& mu,
                   const EdgeWeight& pi, Exponent p, VertexId v);

// tent(alpha) d_pi(e(alpha))^(p-1) at the bottom edge of v's segment
double sb_value_at(const RootedTree& t, const TreeMeasure& mu,
                   const EdgeWeight& pi, Exponent p, VertexId v);

// Isocapacitary constant bracket.  The lower bound is a genuine antichain
// ratio sum tent / Cap(union of tents): all single edges, exhaustive
// enumeration when at most `exhaustive_limit` edges carry mass, otherwise a
// seeded hill climb limited to `budget` capacity evaluations.  The upper
// bound comes through the norm chain, p^(p*) [[mu]].
ConditionReport iso_bracket(const RootedTree& t, const TreeMeasure& mu,
                            const EdgeWeight& pi, Exponent p,
                            int budget = 4000, std::uint64_t seed = 17,
                            int exhaustive_limit = 20);

double iso_ratio_of(const RootedTree& t, const TreeMeasure& mu,
                    const EdgeWeight& pi, Exponent p, const Antichain& family);

// s-testing constant, p = 2 and pi = 1 only: sup over alpha of the tent
// average of (sum over [alpha, y] of tent)^s.  s = 1 recovers the
// mass-energy ratio.  Throws for s < 1.
ConditionReport s_testing(const RootedTree& t, const TreeMeasure& mu, double s,
                          bool with_table = false);

double s_ratio_at(const RootedTree& t, const TreeMeasure& mu, double s,
                  VertexId v);

// The three boundary quantities of the sum/power interchange on a full
// binary truncation: lhs = integral of (sum phi)^(p*), mid = integral of
// sum phi^(p*), rhs = integral of (sup phi)^(p*), with phi(alpha) =
// tent(alpha)/|alpha|^s and dx(leaf) = |leaf edge|.  mid is also returned
// in its energy form sum tent^(p*) |alpha|^(1-s p*); the two agree up to
// rounding.  chain_ok records rhs <= mid <= lhs.
struct MwReport {
  double lhs = 0.0;
  double mid = 0.0;
  double mid_energy = 0.0;
  double rhs = 0.0;
  bool chain_ok = true;
};

MwReport mw_quantities(const RootedTree& t, const TreeMeasure& mu, double s,
                       Exponent p);

struct BCountRow {
  std::int64_t k = 0;
  std::int64_t max_count = 0;  // max over alpha of #B(alpha, k)
  double reference = 0.0;      // 2^(k/2)
};

// Edgewise drift and jump checks for phi(alpha) = tent(alpha)/|alpha|^s on a
// full binary truncation, plus the slow-decay counts B(alpha, k) = #{beta
// below alpha at distance k with phi(beta)/phi(alpha) >= (1-r)^k}.
struct SupermartingaleReport {
  std::int64_t interior_checked = 0;
  std::int64_t vacuous = 0;  // a zero tent makes the edge pass trivially
  bool drift_ok = true;
  bool jump_ok = true;
  double min_drift_slack = 0.0;  // log phi(a) - (1-s)log2 - mean of children
  double max_jump_factor = 0.0;  // max phi(child)/phi(alpha), bound is 2^s
  std::vector<BCountRow> b_counts;
};

SupermartingaleReport supermartingale_diag(const RootedTree& t,
                                           const TreeMeasure& mu, double s,
                                           double r = 0.01);

// Vanishing-condition tails: me_tail[n] is the largest energy/mass ratio
// over actual edges of depth >= n, cap_tail[n] the largest antichain mass /
// capacity ratio over families of edges of depth >= n.  Both sequences are
// indexed n = 0 .. max depth + 1 and are nonincreasing; entries past the
// support depth are 0.
struct TailReport {
  std::vector<double> me_tail;
  std::vector<double> cap_tail;
  std::vector<Antichain> cap_witness;  // empty family where cap_tail = 0
};

TailReport compact_tails(const RootedTree& t, const TreeMeasure& mu,
                         const EdgeWeight& pi, Exponent p, int budget = 2000,
                         std::uint64_t seed = 17);

// Boundary Bessel co-potential on a full binary truncation for a measure on
// the leaves: the kernel sum over leaf pairs and the telescoped tent-sum
// form, which agree exactly, plus the geometric two-sided bounds and the
// energy comparison against the weight |alpha|^((1-s p*)/(1-p*)).
struct BesselReport {
  std::vector<VertexId> leaves;
  std::vector<double> kernel_form;
  std::vector<double> tent_form;
  double max_identity_gap = 0.0;
  bool bounds_ok = true;
  double energy_bessel = 0.0;
  double energy_pi = 0.0;
  double energy_ratio = 0.0;  // 0 when both energies vanish
};

BesselReport bessel_check(const RootedTree& t, const TreeMeasure& mu, double s,
                          Exponent p);

}  // namespace treehardy
