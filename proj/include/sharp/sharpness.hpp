// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//
//  Sharpness of monotone submodular functions around an optimal set.
//
//  Four notions are fitted by exhaustive search on small instances:
//
//    monotonic    sum_{e in S*\S} f_S(e) >= (|S*\S| / (k c))^(1/theta) OPT
//    submodular   max_{e in S*\S} f_S(e) >= (OPT - f(S))^(1-theta) OPT^theta / (k c)
//    dynamic      either inequality with (c, theta) indexed by |S|
//    approximate  the monotonic inequality with f_S(e) replaced by
//                 f(S + e) - (1 - delta) f(S)
//
//  Every (c, theta) that satisfies a notion certifies a lower bound on the
//  greedy ratio; the fitters search a c grid and, for each c, take the
//  largest admissible theta in closed form from the logarithm of the
//  defining inequality.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sharp/families.hpp"
#include "sharp/optimize.hpp"
#include "sharp/setfun.hpp"

namespace sharp {

inline const double kOneMinusInvE = 1.0 - std::exp(-1.0);

// theta == 0 together with `limit` stands for the theta -> 0 limit.
struct SharpParams {
  double c = 1.0;
  double theta = 1.0;
  bool limit = false;

  static SharpParams classical() { return {1.0, 0.0, true}; }
};

struct DynamicSharpParams {
  std::vector<double> c;
  std::vector<double> theta;  // 0 marks the theta -> 0 limit at that level

  static DynamicSharpParams constant(const SharpParams& p, int k) {
    return {std::vector<double>(static_cast<std::size_t>(k), p.c),
            std::vector<double>(static_cast<std::size_t>(k), p.limit ? 0.0 : p.theta)};
  }
};

struct ApproxSharpParams {
  double delta = 0.0;
  double c = 1.0;
  double theta = 1.0;
  bool limit = false;
};

enum class Notion {
  kMonotonic,
  kDynamicMonotonic,
  kSubmodular,
  kDynamicSubmodular,
  kApproximate,
};

inline std::string to_string(Notion n) {
  switch (n) {
    case Notion::kMonotonic: return "monotonic";
    case Notion::kDynamicMonotonic: return "dynamic_monotonic";
    case Notion::kSubmodular: return "submodular";
    case Notion::kDynamicSubmodular: return "dynamic_submodular";
    case Notion::kApproximate: return "approximate";
  }
  return "unknown";
}

struct Grid {
  double c_max = 3.0;
  double c_step = 0.01;
  // Stop the c sweep at the first non-improving step instead of scanning the
  // whole range.
  bool early_stop = false;

  std::vector<double> values() const {
    if (!(c_max >= 1.0) || !(c_step > 0.0))
      throw UsageError("grid needs c_max >= 1 and c_step > 0");
    const int steps = static_cast<int>(std::floor((c_max - 1.0) / c_step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j <= steps; ++j) out.push_back(1.0 + j * c_step);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Guarantee formulas

inline double guarantee_static(const SharpParams& p) {
  if (p.limit || p.theta <= 0.0) return 1.0 - std::exp(-1.0 / p.c);
  return 1.0 - std::exp(std::log1p(-p.theta / p.c) / p.theta);
}

// Nested formula evaluated as u_{i+1} = (u_i^theta_i - theta_i / (c_i k))^(1/theta_i),
// u_0 = 1, bound = 1 - u_k. A level with theta_i = 0 uses the limit
// u_{i+1} = u_i exp(-1 / (c_i k)); a negative radicand saturates the bound.
inline double guarantee_dynamic(const DynamicSharpParams& p, int k) {
  if (k < 1 || static_cast<int>(p.c.size()) != k ||
      static_cast<int>(p.theta.size()) != k)
    throw UsageError("guarantee_dynamic: parameter vectors must have length k");
  double u = 1.0;
  for (int i = 0; i < k; ++i) {
    const double c = p.c[i];
    const double th = p.theta[i];
    if (th <= 0.0) {
      u *= std::exp(-1.0 / (c * k));
      continue;
    }
    const double radicand = std::pow(u, th) - th / (c * k);
    if (radicand <= 0.0) return 1.0;
    u = std::pow(radicand, 1.0 / th);
  }
  return 1.0 - u;
}

inline void check_delta(double delta, int k) {
  if (k < 1) throw UsageError("k must be positive");
  if (!(delta >= 0.0) || delta > 1.0 - 1.0 / k + 1e-12)
    throw UsageError("delta must lie in [0, 1 - 1/k] = [0, " +
                     std::to_string(1.0 - 1.0 / k) + "], got " +
                     std::to_string(delta));
}

inline double guarantee_approximate(const ApproxSharpParams& p, int k) {
  check_delta(p.delta, k);
  const double scale = 1.0 / (1.0 - p.delta + p.delta * k * p.c);
  if (p.limit || p.theta <= 0.0) {
    if (p.delta == 0.0) return 1.0 - std::exp(-1.0 / p.c);
    return scale;
  }
  const double shrink = std::pow(1.0 - p.delta, 1.0 / p.theta) *
                        std::pow(1.0 - p.theta / p.c, 1.0 / p.theta);
  return scale * (1.0 - shrink);
}

// Lower bound on f(S_k) / OPT obtained by iterating the one-step inequality
//   a_i >= h(a_{i-1}),  h(x) = (1 - delta) x + (1 - (1 - delta) x)^(1 - theta) / (k c)
// (OPT normalized to 1) together with a_i >= a_{i-1}. h is concave, so on
// [L, 1] it is at least min(h(L), h(1)).
inline double approximate_recurrence_bound(const ApproxSharpParams& p, int k) {
  check_delta(p.delta, k);
  const double keep = 1.0 - p.delta;
  const bool limit = p.limit || p.theta <= 0.0;
  auto h = [&](double x) {
    const double gap = std::max(0.0, 1.0 - keep * x);
    const double push = limit ? gap : std::pow(gap, 1.0 - p.theta);
    return keep * x + push / (k * p.c);
  };
  double lo = 0.0;
  for (int i = 0; i < k; ++i) lo = std::max(lo, std::min(h(lo), h(1.0)));
  return std::min(lo, 1.0);
}

// The closed form above can exceed what the recurrence supports when theta is
// small (at theta -> 0 it tends to 1 / (1 - delta + delta k c) for every f).
// Fits report the smaller of the two.
inline double certified_approximate(const ApproxSharpParams& p, int k) {
  return std::min(guarantee_approximate(p, k), approximate_recurrence_bound(p, k));
}

inline double curvature_bound(double gamma) {
  gamma = std::clamp(gamma, 0.0, 1.0);
  if (gamma < 1e-9) return 1.0;
  return (1.0 - std::exp(-gamma)) / gamma;
}

// b_0..b_k with b_i = opt [1 - (1 - theta i / (c k))^(1/theta)].
inline std::vector<double> trajectory_floor(const SharpParams& p, int k, double opt) {
  if (k < 1) throw UsageError("trajectory_floor: k must be positive");
  std::vector<double> b(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) {
    const double frac = static_cast<double>(i) / k;
    if (p.limit || p.theta <= 0.0) {
      b[i] = opt * (1.0 - std::exp(-frac / p.c));
    } else {
      b[i] = opt * (1.0 - std::exp(std::log1p(-p.theta * frac / p.c) / p.theta));
    }
  }
  b[0] = 0.0;
  return b;
}

// ---------------------------------------------------------------------------
// W profiles

// W[l] for l = 0..|S*|; W[l] is empty when no admissible set misses exactly
// l elements of S*. W[0] is always empty.
using Profile = std::vector<std::optional<double>>;

struct WProfile {
  Subset s_star;
  double opt = 0.0;
  Profile W;                      // admissible sets (see detail::size_k_suffices)
  std::vector<Profile> per_size;  // per_size[i]: sets of size exactly i, i = 0..k

  std::optional<double> at(int ell) const {
    if (ell < 0 || ell >= static_cast<int>(W.size())) return std::nullopt;
    return W[ell];
  }
};

namespace detail {

// Minimum over |S| = size of sum_{e in S*\S} [f(S + e) - (1 - delta) f(S)],
// grouped by l = |S*\S|.
inline Profile profile_at_size(const SetTable& t, std::uint64_t s_star, int size,
                               double delta = 0.0) {
  const int n = t.size();
  Profile w(static_cast<std::size_t>(std::popcount(s_star)) + 1);
  for_each_of_size(n, size, [&](std::uint64_t s) {
    const std::uint64_t missing = s_star & ~s;
    if (missing == 0) return;
    const double fs = t[s];
    double sum = 0.0;
    for (std::uint64_t rest = missing; rest; rest &= rest - 1) {
      const int e = std::countr_zero(rest);
      sum += t[s | (std::uint64_t{1} << e)] - (1.0 - delta) * fs;
    }
    auto& slot = w[static_cast<std::size_t>(std::popcount(missing))];
    if (!slot || sum < *slot) slot = sum;
  });
  return w;
}

// Sets of size exactly k suffice for the sum-form inequality when any smaller
// S can be padded to size k with elements outside S and S*: padding keeps
// S*\S and, by submodularity, only lowers the marginals. That needs
// n - |S*| >= k, and it fails for delta > 0 because padding raises the
// delta f(S) term. Otherwise every |S| <= k is checked.
inline bool size_k_suffices(int n, std::uint64_t s_star, int k, double delta) {
  return delta == 0.0 && n - std::popcount(s_star) >= k;
}

// Profile over the admissible sets of the monotonic / approximate notions.
inline Profile sum_form_profile(const SetTable& t, std::uint64_t s_star, int k,
                                double delta) {
  if (size_k_suffices(t.size(), s_star, k, delta))
    return profile_at_size(t, s_star, k, delta);
  Profile w = profile_at_size(t, s_star, 0, delta);
  for (int r = 1; r <= k; ++r) {
    const Profile at = profile_at_size(t, s_star, r, delta);
    for (std::size_t ell = 0; ell < w.size(); ++ell)
      if (at[ell] && (!w[ell] || *at[ell] < *w[ell])) w[ell] = at[ell];
  }
  return w;
}

inline void check_exhaustive(const SetTable& t, int k) {
  if (t.size() > kMaxExhaustive)
    throw ResourceError("n must be <= " + std::to_string(kMaxExhaustive) + " for exhaustive sharpness work");
  if (k < 1 || k > t.size()) throw UsageError("budget k out of range");
}

}  // namespace detail

inline WProfile w_profile(const SetTable& t, const Subset& s_star, int k,
                          bool per_size = false) {
  detail::check_exhaustive(t, k);
  WProfile prof;
  prof.s_star = s_star;
  prof.opt = t[s_star.mask()];
  prof.W = detail::sum_form_profile(t, s_star.mask(), k, 0.0);
  if (per_size)
    for (int i = 0; i <= k; ++i)
      prof.per_size.push_back(detail::profile_at_size(t, s_star.mask(), i));
  return prof;
}

inline WProfile w_profile(const ValueOracle& f, const OptimaSet& opt, int k,
                          bool per_size = false) {
  if (f.size() > kMaxExhaustive)
    throw ResourceError("w_profile: n must be <= " + std::to_string(kMaxExhaustive));
  return w_profile(SetTable(f), opt.optima.front(), k, per_size);
}

// Closed form for f(S) = sum w_e with w sorted non-increasing:
// W(l) = w_{k-l+1} + ... + w_k, S* = the first k elements.
inline WProfile linear_w_profile(const WeightVector& w, int k) {
  if (!w.sorted_descending())
    throw UsageError("linear_w_profile: weights must be sorted non-increasing");
  const int n = static_cast<int>(w.size());
  if (k < 1 || k > n) throw UsageError("linear_w_profile: k out of range");
  WProfile prof;
  prof.s_star = Subset(full_mask(k), n);
  prof.W.assign(static_cast<std::size_t>(k) + 1, std::nullopt);
  double opt = 0.0;
  for (int i = 0; i < k; ++i) opt += w[i];
  prof.opt = opt;
  double tail = 0.0;
  for (int ell = 1; ell <= k; ++ell) {
    tail += w[k - ell];
    prof.W[ell] = tail;
  }
  return prof;
}

// Closed form for f(S) = (sum w_e)^alpha: the minimizing set keeps the k - l
// heaviest optimal elements and adds the l heaviest outside ones, so the
// missing optimal elements are the l lightest. Missing outsiders count as
// zero-weight elements.
inline WProfile concave_modular_w_profile(const WeightVector& w, double alpha, int k) {
  if (!w.sorted_descending())
    throw UsageError("concave_modular_w_profile: weights must be sorted non-increasing");
  detail::check_alpha(alpha);
  const int n = static_cast<int>(w.size());
  if (k < 1 || k > n) throw UsageError("concave_modular_w_profile: k out of range");
  auto weight = [&](int j) { return j < n ? w[j] : 0.0; };  // 0-based
  WProfile prof;
  prof.s_star = Subset(full_mask(k), n);
  prof.W.assign(static_cast<std::size_t>(k) + 1, std::nullopt);
  double top = 0.0;
  for (int i = 0; i < k; ++i) top += w[i];
  prof.opt = std::pow(top, alpha);
  for (int ell = 1; ell <= k; ++ell) {
    double base = 0.0;
    for (int j = k; j < k + ell; ++j) base += weight(j);
    for (int j = 0; j < k - ell; ++j) base += weight(j);
    const double base_value = base > 0.0 ? std::pow(base, alpha) : 0.0;
    double sum = 0.0;
    for (int i = k - ell; i < k; ++i) sum += std::pow(base + w[i], alpha) - base_value;
    prof.W[ell] = sum;
  }
  return prof;
}

// Smallest c satisfying the l-th constraint of the worst-case coverage region:
// c >= (l/k) ((l/k) ((k-1)/k)^l)^(-theta).
inline double coverage_region_min_c(int k, int ell, double theta) {
  if (k < 2) throw UsageError("coverage_region_min_c: k must be at least 2");
  if (ell < 1 || ell > k - 1)
    throw UsageError("coverage_region_min_c: l must lie in [1, k-1]");
  if (!(theta >= 0.0) || theta > 1.0)
    throw UsageError("coverage_region_min_c: theta must lie in [0, 1]");
  const double frac = static_cast<double>(ell) / k;
  const double ratio = frac * std::pow(static_cast<double>(k - 1) / k, ell);
  return frac * std::pow(ratio, -theta);
}

// ---------------------------------------------------------------------------
// Exhaustive membership checks

struct Membership {
  bool holds = true;
  std::uint64_t violator = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

namespace detail {

// Right-hand side (l / (k c))^(1/theta) * opt of the monotonic inequality;
// the theta -> 0 limit (taken with c -> 1 from above) sends it to zero.
inline double monotonic_rhs(int ell, int k, double c, double theta, bool limit,
                            double opt) {
  if (limit || theta <= 0.0) return 0.0;
  return std::pow(static_cast<double>(ell) / (k * c), 1.0 / theta) * opt;
}

inline Membership holds_sum_form(const SetTable& t, const Subset& s_star, int k,
                                 double c, double theta, bool limit, double delta) {
  detail::check_exhaustive(t, k);
  const double opt = t[s_star.mask()];
  Membership res;
  auto check = [&](std::uint64_t s) {
    if (!res.holds) return;
    const std::uint64_t missing = s_star.mask() & ~s;
    if (missing == 0) return;
    const double fs = t[s];
    double lhs = 0.0;
    for (std::uint64_t rest = missing; rest; rest &= rest - 1)
      lhs += t[s | (rest & (~rest + 1))] - (1.0 - delta) * fs;
    const double rhs = monotonic_rhs(std::popcount(missing), k, c, theta, limit, opt);
    if (lhs < rhs - kEpsVal) res = {false, s, lhs, rhs};
  };
  const int lo = size_k_suffices(t.size(), s_star.mask(), k, delta) ? k : 0;
  for (int r = lo; r <= k && res.holds; ++r) for_each_of_size(t.size(), r, check);
  return res;
}

}  // namespace detail

// Checked over the admissible sets of detail::size_k_suffices; sets
// containing S* are vacuous.
inline Membership holds_monotonic(const SetTable& t, const Subset& s_star, int k,
                                  const SharpParams& p) {
  return detail::holds_sum_form(t, s_star, k, p.c, p.theta, p.limit, 0.0);
}

inline Membership holds_approximate(const SetTable& t, const Subset& s_star, int k,
                                    const ApproxSharpParams& p) {
  check_delta(p.delta, k);
  return detail::holds_sum_form(t, s_star, k, p.c, p.theta, p.limit, p.delta);
}

// Checked over every |S| <= k with S* not contained in S and f(S) < OPT.
inline Membership holds_submodular(const SetTable& t, const Subset& s_star, int k,
                                   const SharpParams& p) {
  detail::check_exhaustive(t, k);
  const double opt = t[s_star.mask()];
  Membership res;
  for (int r = 0; r <= k && res.holds; ++r) {
    for_each_of_size(t.size(), r, [&](std::uint64_t s) {
      if (!res.holds) return;
      const std::uint64_t missing = s_star.mask() & ~s;
      if (missing == 0) return;
      const double gap = opt - t[s];
      if (gap <= kEpsVal) return;
      double best = -std::numeric_limits<double>::infinity();
      for (std::uint64_t rest = missing; rest; rest &= rest - 1)
        best = std::max(best, t.marginal(s, std::countr_zero(rest)));
      const double rhs = (p.limit || p.theta <= 0.0)
                             ? gap / (k * p.c)
                             : std::pow(gap, 1.0 - p.theta) * std::pow(opt, p.theta) /
                                   (k * p.c);
      if (best < rhs - kEpsVal) res = {false, s, best, rhs};
    });
  }
  return res;
}

// ---------------------------------------------------------------------------
// Fitting

struct FitResult {
  Notion notion = Notion::kMonotonic;
  SharpParams params;          // static notions and approximate (c, theta)
  DynamicSharpParams dynamic;  // dynamic notions
  double delta = 0.0;          // approximate only
  double bound = 0.0;
  Subset s_star;
  // Constraint that pins theta at the chosen c ("l=2", "S={0,3}", ...),
  // "classical" when the theta -> 0 fallback won, "infeasible" when nothing
  // certifies a bound.
  std::string binding;
};

namespace detail {

// theta <= (a + log c) / b with b > 0. `tag` is l for profile constraints
// and the set mask for submodular ones.
struct LogConstraint {
  double a = 0.0;
  double b = 1.0;
  std::uint64_t tag = 0;
  bool is_set = false;
};

struct ConstraintSet {
  std::vector<LogConstraint> cons;
  double c_min = 1.0;       // from theta-free constraints
  bool infeasible = false;  // some constraint can never hold
  int n = 0;                // ground-set size, for labels

  // Identifies sets that yield the same theta at every c. Optimal sets with
  // equal keys cannot change a fit, so fitters skip repeats.
  std::vector<double> key() const {
    std::vector<double> out{infeasible ? 1.0 : 0.0, c_min};
    for (const auto& k : cons) {
      out.push_back(k.a);
      out.push_back(k.b);
    }
    return out;
  }

  std::string label(const LogConstraint& k) const {
    if (!k.is_set) return "l=" + std::to_string(k.tag);
    return "S=" + to_string(Subset(k.tag, n));
  }

  // Keeps only constraints on the lower envelope of the lines
  // x -> (a + x) / b, x = log c; the others never bind.
  void prune() {
    if (cons.size() < 3) return;
    auto slope = [](const LogConstraint& k) { return 1.0 / k.b; };
    auto icept = [](const LogConstraint& k) { return k.a / k.b; };
    std::stable_sort(cons.begin(), cons.end(), [&](const auto& x, const auto& y) {
      if (slope(x) != slope(y)) return slope(x) > slope(y);
      return icept(x) < icept(y);
    });
    std::vector<LogConstraint> hull;
    for (const auto& k : cons) {
      if (!hull.empty() && slope(hull.back()) == slope(k)) continue;
      while (hull.size() >= 2) {
        const auto& l1 = hull[hull.size() - 2];
        const auto& l2 = hull.back();
        const double lhs = (icept(k) - icept(l1)) * (slope(l1) - slope(l2));
        const double rhs = (icept(l2) - icept(l1)) * (slope(l1) - slope(k));
        if (lhs <= rhs) hull.pop_back();
        else break;
      }
      hull.push_back(k);
    }
    cons = std::move(hull);
  }

  // Largest admissible theta at c (clamped to 1) and the binding label, or
  // nothing if no positive theta works.
  std::optional<std::pair<double, std::string>> theta_at(double c) const {
    if (infeasible || c < c_min - 1e-12) return std::nullopt;
    double theta = 1.0;
    const LogConstraint* binding = nullptr;
    const double lc = std::log(c);
    for (const auto& k : cons) {
      const double th = (k.a + lc) / k.b;
      if (th < theta) {
        theta = th;
        binding = &k;
      }
    }
    if (!(theta > 0.0)) return std::nullopt;
    return std::make_pair(theta, binding ? label(*binding) : std::string("none"));
  }
};

// Constraints from a monotonic-style profile: W(l) >= (l/(kc))^(1/theta) OPT.
inline ConstraintSet sum_form_constraints(const Profile& w, int k, double opt) {
  ConstraintSet cs;
  for (std::size_t ell = 1; ell < w.size(); ++ell) {
    if (!w[ell]) continue;
    const double wl = *w[ell];
    if (wl >= opt - kEpsVal) continue;
    if (wl <= kEpsVal) {
      cs.infeasible = true;
      continue;
    }
    cs.cons.push_back({std::log(static_cast<double>(k) / ell), std::log(opt / wl), ell, false});
  }
  return cs;
}

// Constraints from the submodular inequality for sets of the given sizes.
inline ConstraintSet submodular_constraints(const SetTable& t, std::uint64_t s_star,
                                            int k, int size_lo, int size_hi) {
  const double opt = t[s_star];
  ConstraintSet cs;
  cs.n = t.size();
  for (int r = size_lo; r <= size_hi; ++r) {
    for_each_of_size(t.size(), r, [&](std::uint64_t s) {
      const std::uint64_t missing = s_star & ~s;
      if (missing == 0) return;
      const double gap = opt - t[s];
      if (gap <= kEpsVal) return;
      double best = -std::numeric_limits<double>::infinity();
      for (std::uint64_t rest = missing; rest; rest &= rest - 1)
        best = std::max(best, t.marginal(s, std::countr_zero(rest)));
      if (!(best > 0.0)) {
        cs.infeasible = true;
        return;
      }
      if (gap >= opt - kEpsVal) {
        cs.c_min = std::max(cs.c_min, opt / (k * best));
        return;
      }
      cs.cons.push_back({std::log(k * best / gap), std::log(opt / gap), s, true});
    });
  }
  cs.prune();
  return cs;
}

struct GridPoint {
  double c = 1.0;
  double theta = 0.0;
  double bound = -1.0;
  std::string label;
};

// Best static guarantee over the c grid for one constraint set.
inline std::optional<GridPoint> best_on_grid(const ConstraintSet& cs, const Grid& grid) {
  std::optional<GridPoint> best;
  bool started = false;
  double previous = -1.0;
  for (double c : grid.values()) {
    auto th = cs.theta_at(c);
    if (!th) {
      if (grid.early_stop && started) break;
      continue;
    }
    const double b = guarantee_static({c, th->first, false});
    if (grid.early_stop && started && !(b > previous)) break;
    started = true;
    previous = b;
    if (!best || b > best->bound) best = GridPoint{c, th->first, b, th->second};
  }
  return best;
}

inline FitResult classical_fallback(Notion notion, const Subset& s_star) {
  FitResult r;
  r.notion = notion;
  r.params = SharpParams::classical();
  r.bound = guarantee_static(r.params);
  r.s_star = s_star;
  r.binding = "classical";
  return r;
}

}  // namespace detail

inline FitResult fit_monotonic(const SetTable& t, const OptimaSet& opt, int k,
                               const Grid& grid = {}) {
  detail::check_exhaustive(t, k);
  FitResult best = detail::classical_fallback(Notion::kMonotonic, opt.optima.front());
  std::set<std::vector<double>> seen;
  for (const Subset& s_star : opt.optima) {
    const double value = t[s_star.mask()];
    const Profile w = detail::sum_form_profile(t, s_star.mask(), k, 0.0);
    const auto cs = detail::sum_form_constraints(w, k, value);
    if (!seen.insert(cs.key()).second) continue;
    const auto pt = detail::best_on_grid(cs, grid);
    if (pt && pt->bound > best.bound) {
      best.params = {pt->c, std::min(pt->theta, 1.0), false};
      best.bound = pt->bound;
      best.s_star = s_star;
      best.binding = pt->label;
    }
  }
  return best;
}

inline FitResult fit_submodular(const SetTable& t, const OptimaSet& opt, int k,
                                const Grid& grid = {}) {
  detail::check_exhaustive(t, k);
  FitResult best = detail::classical_fallback(Notion::kSubmodular, opt.optima.front());
  std::set<std::vector<double>> seen;
  for (const Subset& s_star : opt.optima) {
    const auto cs = detail::submodular_constraints(t, s_star.mask(), k, 0, k);
    if (!seen.insert(cs.key()).second) continue;
    const auto pt = detail::best_on_grid(cs, grid);
    if (pt && pt->bound > best.bound) {
      best.params = {pt->c, std::min(pt->theta, 1.0), false};
      best.bound = pt->bound;
      best.s_star = s_star;
      best.binding = pt->label;
    }
  }
  return best;
}

namespace detail {

// Candidate (c, theta) pairs for one level; the last entry is the theta -> 0
// limit, which every level admits.
inline std::vector<GridPoint> level_candidates(const ConstraintSet& cs, const Grid& grid) {
  std::vector<GridPoint> out;
  for (double c : grid.values()) {
    auto th = cs.theta_at(c);
    if (!th) continue;
    out.push_back({c, std::min(th->first, 1.0), guarantee_static({c, th->first, false}),
                   th->second});
  }
  out.push_back({1.0, 0.0, kOneMinusInvE, "classical"});
  return out;
}

// Per-level choice seeded by each level's best static proxy, refined by
// coordinate ascent on the nested bound.
inline DynamicSharpParams choose_levels(const std::vector<std::vector<GridPoint>>& levels,
                                        int k) {
  DynamicSharpParams p;
  for (const auto& cands : levels) {
    const GridPoint* pick = &cands.front();
    for (const auto& g : cands)
      if (g.bound > pick->bound) pick = &g;
    p.c.push_back(pick->c);
    p.theta.push_back(pick->theta);
  }
  double current = guarantee_dynamic(p, k);
  for (int pass = 0; pass < 4; ++pass) {
    bool changed = false;
    for (int i = 0; i < k; ++i) {
      for (const auto& g : levels[i]) {
        DynamicSharpParams trial = p;
        trial.c[i] = g.c;
        trial.theta[i] = g.theta;
        const double b = guarantee_dynamic(trial, k);
        if (b > current + 1e-15) {
          p = std::move(trial);
          current = b;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return p;
}

template <typename LevelConstraints>
FitResult fit_dynamic(Notion notion, const FitResult& seed, const OptimaSet& opt,
                      int k, const Grid& grid, LevelConstraints&& constraints_for) {
  FitResult best;
  best.notion = notion;
  best.dynamic = DynamicSharpParams::constant(seed.params, k);
  best.params = seed.params;
  best.bound = guarantee_dynamic(best.dynamic, k);
  best.s_star = seed.s_star;
  best.binding = "static seed";
  std::set<std::vector<double>> seen;
  for (const Subset& s_star : opt.optima) {
    std::vector<ConstraintSet> sets;
    std::vector<double> key;
    for (int i = 0; i < k; ++i) {
      sets.push_back(constraints_for(s_star, i));
      const auto part = sets.back().key();
      key.insert(key.end(), part.begin(), part.end());
      key.push_back(-1.0);
    }
    if (!seen.insert(std::move(key)).second) continue;
    std::vector<std::vector<GridPoint>> levels;
    for (const auto& cs : sets) levels.push_back(level_candidates(cs, grid));
    DynamicSharpParams p = choose_levels(levels, k);
    const double b = guarantee_dynamic(p, k);
    if (b > best.bound) {
      best.dynamic = std::move(p);
      best.bound = b;
      best.s_star = s_star;
      best.binding = "per-level";
    }
  }
  return best;
}

}  // namespace detail

// Per-size fit of (c_i, theta_i) on sets with |S| = i, compared against the
// constant vector of the static monotonic fit.
inline FitResult fit_dynamic_monotonic(const SetTable& t, const OptimaSet& opt, int k,
                                       const Grid& grid = {}) {
  detail::check_exhaustive(t, k);
  const FitResult seed = fit_monotonic(t, opt, k, grid);
  return detail::fit_dynamic(
      Notion::kDynamicMonotonic, seed, opt, k, grid,
      [&](const Subset& s_star, int level) {
        const Profile w = detail::profile_at_size(t, s_star.mask(), level);
        return detail::sum_form_constraints(w, k, t[s_star.mask()]);
      });
}

inline FitResult fit_dynamic_submodular(const SetTable& t, const OptimaSet& opt, int k,
                                        const Grid& grid = {}) {
  detail::check_exhaustive(t, k);
  const FitResult seed = fit_submodular(t, opt, k, grid);
  return detail::fit_dynamic(
      Notion::kDynamicSubmodular, seed, opt, k, grid,
      [&](const Subset& s_star, int level) {
        return detail::submodular_constraints(t, s_star.mask(), k, level, level);
      });
}

// delta-marginal version of the monotonic fit. For delta > 0 a smaller theta
// can give a larger guarantee, so theta is also scanned below its maximum and
// the theta -> 0 limit is considered; delta = 0 follows fit_monotonic exactly.
inline FitResult fit_approximate(const SetTable& t, const OptimaSet& opt, int k,
                                 double delta, const Grid& grid = {}) {
  detail::check_exhaustive(t, k);
  check_delta(delta, k);
  if (delta == 0.0) {
    FitResult r = fit_monotonic(t, opt, k, grid);
    r.notion = Notion::kApproximate;
    r.delta = 0.0;
    return r;
  }
  FitResult best;
  best.notion = Notion::kApproximate;
  best.delta = delta;
  best.params = SharpParams::classical();
  best.bound = 0.0;
  best.s_star = opt.optima.front();
  best.binding = "infeasible";
  constexpr int kThetaScan = 100;
  std::set<std::vector<double>> seen;
  for (const Subset& s_star : opt.optima) {
    const double value = t[s_star.mask()];
    const Profile w = detail::sum_form_profile(t, s_star.mask(), k, delta);
    const auto cs = detail::sum_form_constraints(w, k, value);
    if (!seen.insert(cs.key()).second) continue;
    auto consider = [&](double c, double theta, bool limit, const std::string& label) {
      const double b = certified_approximate({delta, c, theta, limit}, k);
      if (b > best.bound) {
        best.params = {c, theta, limit};
        best.bound = b;
        best.s_star = s_star;
        best.binding = label;
      }
    };
    if (!cs.infeasible) consider(1.0, 0.0, true, "limit");
    double previous = -1.0;
    bool started = false;
    for (double c : grid.values()) {
      auto th = cs.theta_at(c);
      if (!th) {
        if (grid.early_stop && started) break;
        continue;
      }
      const double theta_max = std::min(th->first, 1.0);
      double at_c = -1.0;
      for (int j = kThetaScan; j >= 1; --j) {
        const double theta = theta_max * j / kThetaScan;
        at_c = std::max(at_c, certified_approximate({delta, c, theta, false}, k));
        consider(c, theta, false, th->second);
      }
      if (grid.early_stop && started && !(at_c > previous)) break;
      started = true;
      previous = at_c;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Curvature, constructors, stability proxy

// gamma = 1 - min_{e : f(e) > 0} f_{V-e}(e) / f(e), clamped to [0, 1].
inline double curvature(const ValueOracle& f) {
  const int n = f.size();
  const Subset all = Subset::full(n);
  const double f_all = f(all);
  const double f_empty = f(Subset::empty(n));
  double ratio = std::numeric_limits<double>::infinity();
  for (int e = 0; e < n; ++e) {
    const double single = f(Subset::of(n, {e})) - f_empty;
    if (!(single > kEpsVal)) continue;
    ratio = std::min(ratio, (f_all - f(all.without(e))) / single);
  }
  if (ratio == std::numeric_limits<double>::infinity())
    throw UsageError("curvature: no element has positive singleton value");
  return std::clamp(1.0 - ratio, 0.0, 1.0);
}

// Linear function with W(k) = 1 whose monotonic region has (c, theta) on its
// boundary: the l lightest of the k weights sum to (l / (k c))^(1/theta).
inline WeightVector construct_sharp_linear(double c, double theta, int k) {
  if (!(c >= 1.0)) throw ConstructionError("construct_sharp_linear: c must be >= 1");
  if (!(theta > 0.0 && theta <= 1.0))
    throw ConstructionError("construct_sharp_linear: theta must lie in (0, 1]");
  if (k < 1) throw ConstructionError("construct_sharp_linear: k must be positive");
  std::vector<double> w(static_cast<std::size_t>(k));
  double prev = 0.0;
  for (int ell = 1; ell <= k - 1; ++ell) {
    const double cum = std::pow(static_cast<double>(ell) / (k * c), 1.0 / theta);
    w[k - ell] = cum - prev;
    prev = cum;
  }
  w[0] = 1.0 - prev;
  for (int ell = 1; ell <= k; ++ell) {
    const int i = k - ell;
    if (!(w[i] > 0.0))
      throw ConstructionError("construct_sharp_linear: constraint l=" +
                              std::to_string(ell) + " yields non-positive weight " +
                              std::to_string(w[i]));
    if (i + 1 < k && w[i] < w[i + 1] - 1e-12)
      throw ConstructionError("construct_sharp_linear: constraint l=" +
                              std::to_string(ell) + " yields unsorted weights");
  }
  return WeightVector(std::move(w));
}

struct Multiplicity {
  std::size_t count = 0;
  bool unique = false;
};

inline Multiplicity optima_multiplicity(const OptimaSet& opt) {
  return {opt.optima.size(), opt.optima.size() == 1};
}

}  // namespace sharp
