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
//  Greedy, lazy greedy, worst-over-ties greedy and exhaustive optima.
//
//  Tie rule (shared by greedy and lazy_greedy): let m be the best marginal
//  gain of the round; the pick is the lowest-index element whose gain is
//  within kEpsVal of m.
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "sharp/setfun.hpp"

namespace sharp {

struct GreedyTrajectory {
  std::vector<int> picks;
  std::vector<double> values;  // f(S_0) .. f(S_k), S_0 = empty
  std::uint64_t queries = 0;

  double final_value() const { return values.back(); }
  Subset set_after(int i, int n) const {
    std::uint64_t m = 0;
    for (int j = 0; j < i; ++j) m |= std::uint64_t{1} << picks[j];
    return Subset(m, n);
  }
};

namespace detail {

inline void check_budget(int n, int k) {
  if (k < 1 || k > n)
    throw UsageError("budget k must satisfy 1 <= k <= n (k = " +
                     std::to_string(k) + ", n = " + std::to_string(n) + ")");
}

}  // namespace detail

inline GreedyTrajectory greedy(const ValueOracle& f, int k) {
  const int n = f.size();
  detail::check_budget(n, k);
  const std::uint64_t q0 = f.queries();
  GreedyTrajectory tr;
  Subset s = Subset::empty(n);
  double current = f(s);
  tr.values.push_back(current);
  std::vector<double> gain(static_cast<std::size_t>(n));
  std::vector<double> next(static_cast<std::size_t>(n));
  for (int it = 0; it < k; ++it) {
    double best = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < n; ++e) {
      if (s.contains(e)) continue;
      next[e] = f(s.with(e));
      gain[e] = next[e] - current;
      best = std::max(best, gain[e]);
    }
    int pick = -1;
    for (int e = 0; e < n && pick < 0; ++e)
      if (!s.contains(e) && gain[e] >= best - kEpsVal) pick = e;
    s = s.with(pick);
    current = next[pick];
    tr.picks.push_back(pick);
    tr.values.push_back(current);
  }
  tr.queries = f.queries() - q0;
  return tr;
}

// Accelerated greedy: stale marginals are upper bounds for a submodular f,
// so only elements whose bound can still reach the round's best are
// re-evaluated.
inline GreedyTrajectory lazy_greedy(const ValueOracle& f, int k) {
  const int n = f.size();
  detail::check_budget(n, k);
  const std::uint64_t q0 = f.queries();
  GreedyTrajectory tr;
  Subset s = Subset::empty(n);
  double current = f(s);
  tr.values.push_back(current);

  std::vector<double> bound(static_cast<std::size_t>(n));
  std::vector<double> next(static_cast<std::size_t>(n));
  std::vector<int> fresh(static_cast<std::size_t>(n), 0);
  for (int e = 0; e < n; ++e) {
    next[e] = f(Subset::of(n, {e}));
    bound[e] = next[e] - current;
  }

  for (int it = 0; it < k; ++it) {
    auto refresh = [&](int e) {
      next[e] = f(s.with(e));
      bound[e] = next[e] - current;
      fresh[e] = it;
    };
    double best;
    for (;;) {
      int top = -1;
      for (int e = 0; e < n; ++e)
        if (!s.contains(e) && (top < 0 || bound[e] > bound[top])) top = e;
      if (fresh[top] == it) {
        best = bound[top];
        break;
      }
      refresh(top);
    }
    int pick = -1;
    for (int e = 0; e < n && pick < 0; ++e) {
      if (s.contains(e) || bound[e] < best - kEpsVal) continue;
      if (fresh[e] != it) refresh(e);
      if (bound[e] >= best - kEpsVal) pick = e;
    }
    s = s.with(pick);
    current = next[pick];
    tr.picks.push_back(pick);
    tr.values.push_back(current);
  }
  tr.queries = f.queries() - q0;
  return tr;
}

inline constexpr std::uint64_t kDefaultTieBudget = 1'000'000;

// Minimum final value over every greedy run that may pick any element within
// kEpsVal of the best marginal. Depth-first, memoized on the current set.
inline double worst_tie_greedy(const ValueOracle& f, int k,
                               std::uint64_t node_budget = kDefaultTieBudget) {
  const int n = f.size();
  detail::check_budget(n, k);
  std::unordered_map<std::uint64_t, double> value_cache;
  std::unordered_map<std::uint64_t, double> worst;
  std::uint64_t nodes = 0;

  auto value = [&](std::uint64_t m) {
    auto it = value_cache.find(m);
    if (it != value_cache.end()) return it->second;
    double v = f(m);
    value_cache.emplace(m, v);
    return v;
  };

  auto dfs = [&](auto&& self, std::uint64_t m, int depth) -> double {
    if (depth == k) return value(m);
    if (auto it = worst.find(m); it != worst.end()) return it->second;
    if (++nodes > node_budget)
      throw ResourceError("worst_tie_greedy: tie-branch budget of " +
                          std::to_string(node_budget) +
                          " nodes exceeded; try a smaller instance");
    const double base = value(m);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> gain(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
      if ((m >> e) & 1u) continue;
      gain[e] = value(m | (std::uint64_t{1} << e)) - base;
      best = std::max(best, gain[e]);
    }
    double result = std::numeric_limits<double>::infinity();
    for (int e = 0; e < n; ++e) {
      if (((m >> e) & 1u) || gain[e] < best - kEpsVal) continue;
      result = std::min(result, self(self, m | (std::uint64_t{1} << e), depth + 1));
    }
    worst.emplace(m, result);
    return result;
  };
  return dfs(dfs, 0, 0);
}

struct OptimaSet {
  double opt_value = 0.0;
  std::vector<Subset> optima;  // increasing mask order
};

// Exhaustive solution of max{f(S) : |S| <= k}. Every set of size <= k within
// kEpsVal of the maximum is reported; exact_size restricts the search to
// |S| = k, which loses nothing for monotone f.
inline OptimaSet brute_force_optima(const SetTable& t, int k,
                                    bool exact_size = false) {
  const int n = t.size();
  detail::check_budget(n, k);
  OptimaSet out;
  out.opt_value = -std::numeric_limits<double>::infinity();
  const int lo = exact_size ? k : 0;
  for (int r = lo; r <= k; ++r)
    for_each_of_size(n, r, [&](std::uint64_t m) {
      out.opt_value = std::max(out.opt_value, t[m]);
    });
  for (int r = lo; r <= k; ++r)
    for_each_of_size(n, r, [&](std::uint64_t m) {
      if (t[m] >= out.opt_value - kEpsVal) out.optima.emplace_back(m, n);
    });
  std::sort(out.optima.begin(), out.optima.end(),
            [](const Subset& a, const Subset& b) { return a.mask() < b.mask(); });
  return out;
}

inline OptimaSet brute_force_optima(const ValueOracle& f, int k,
                                    bool exact_size = false) {
  if (f.size() > kMaxExhaustive)
    throw ResourceError("brute_force_optima: n must be <= " + std::to_string(kMaxExhaustive) + ", got " +
                        std::to_string(f.size()));
  detail::check_budget(f.size(), k);
  return brute_force_optima(SetTable(f), k, exact_size);
}

}  // namespace sharp
