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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sharp/sharp.hpp"
#include "sweep.hpp"

namespace sharp {
namespace {

const double kInvE = std::exp(-1.0);

// Reference values below come from tests/oracles/derive.py.
constexpr double kStaticOneThird = 0.7037037037037037;
constexpr double kDynamicExample = 0.7910533905932737;
constexpr double kCurvatureHalf = 0.7869386805747332;
constexpr double kConcaveW1 = 0.31783724519578205;
constexpr double kConcaveW2 = 0.6356744903915641;

std::vector<double> sorted_weights(SplitMix64& rng, int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = 0.05 + rng.uniform();
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

// ---------------------------------------------------------------------------
// Formulas

TEST(GuaranteeStaticTest, Examples) {
  EXPECT_EQ(guarantee_static({1.0, 1.0, false}), 1.0);
  EXPECT_NEAR(guarantee_static(SharpParams::classical()), 1.0 - kInvE, 1e-15);
  EXPECT_NEAR(guarantee_static({2.0, 1.0, false}), 0.5, 1e-15);
  EXPECT_NEAR(guarantee_static({1.0, 1.0 / 3.0, false}), kStaticOneThird, 1e-14);
}

TEST(GuaranteeStaticTest, LimitConsistency) {
  for (double c : {1.0, 1.5, 2.0, 3.0})
    EXPECT_NEAR(guarantee_static({c, 1e-8, false}), 1.0 - std::exp(-1.0 / c), 1e-6) << c;
}

TEST(GuaranteeStaticTest, MonotoneInThetaAndC) {
  for (int i = 0; i <= 40; ++i) {
    const double c = 1.0 + 0.05 * i;
    double prev = -1.0;
    for (int j = 1; j <= 100; ++j) {
      const double b = guarantee_static({c, j / 100.0, false});
      EXPECT_GE(b, prev - 1e-15) << "c=" << c << " theta=" << j / 100.0;
      prev = b;
    }
  }
  for (int j = 1; j <= 20; ++j) {
    const double theta = j / 20.0;
    double prev = 2.0;
    for (int i = 0; i <= 200; ++i) {
      const double b = guarantee_static({1.0 + 0.01 * i, theta, false});
      EXPECT_LE(b, prev + 1e-15);
      prev = b;
    }
  }
}

TEST(GuaranteeDynamicTest, Examples) {
  EXPECT_NEAR(guarantee_dynamic({{1, 1}, {1, 1}}, 2), 1.0, 1e-15);
  EXPECT_NEAR(guarantee_dynamic({{1, 1}, {1, 0.5}}, 2), kDynamicExample, 1e-12);
  EXPECT_THROW(guarantee_dynamic({{1}, {1}}, 2), UsageError);
}

TEST(GuaranteeDynamicTest, ConstantVectorsRecoverStatic) {
  for (int k = 1; k <= 8; ++k)
    for (double c : {1.0, 1.3, 2.0, 3.0})
      for (double theta : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        const SharpParams p{c, theta, theta == 0.0};
        EXPECT_NEAR(guarantee_dynamic(DynamicSharpParams::constant(p, k), k),
                    guarantee_static(p), 1e-12)
            << k << " " << c << " " << theta;
      }
}

TEST(GuaranteeApproximateTest, ZeroDeltaIsStatic) {
  for (double c = 1.0; c <= 3.0; c += 0.25)
    for (double theta = 0.05; theta <= 1.0; theta += 0.05)
      EXPECT_NEAR(guarantee_approximate({0.0, c, theta, false}, 4),
                  guarantee_static({c, theta, false}), 1e-12);
  EXPECT_NEAR(guarantee_approximate({0.0, 1.0, 0.0, true}, 3), 1.0 - kInvE, 1e-15);
}

TEST(GuaranteeApproximateTest, Examples) {
  EXPECT_EQ(guarantee_approximate({0.0, 1.0, 1.0, false}, 2), 1.0);
  EXPECT_NEAR(guarantee_approximate({0.5, 1.0, 1.0, false}, 2), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(guarantee_approximate({0.6, 1.0, 1.0, false}, 2), UsageError);
}

TEST(GuaranteeApproximateTest, RecurrenceCapsTheLimit) {
  const ApproxSharpParams p{0.2, 1.0, 0.0, true};
  EXPECT_NEAR(guarantee_approximate(p, 2), 1.0 / 1.2, 1e-15);
  EXPECT_NEAR(approximate_recurrence_bound(p, 2), 0.7, 1e-15);
  EXPECT_NEAR(certified_approximate(p, 2), 0.7, 1e-15);
}

// Explicit steps with a shrinking increment overshoot the continuous solution.
TEST(GuaranteeApproximateTest, RecurrenceAtZeroDeltaNeverBelowStatic) {
  for (int k = 1; k <= 8; ++k)
    for (double theta : {0.2, 0.5, 1.0})
      EXPECT_GE(approximate_recurrence_bound({0.0, 1.0, theta, false}, k),
                guarantee_static({1.0, theta, false}) - 1e-12);
}

TEST(CurvatureBoundTest, Examples) {
  EXPECT_NEAR(curvature_bound(1.0), 1.0 - kInvE, 1e-15);
  EXPECT_EQ(curvature_bound(0.0), 1.0);
  EXPECT_EQ(curvature_bound(1e-12), 1.0);
  EXPECT_NEAR(curvature_bound(0.5), kCurvatureHalf, 1e-14);
}

TEST(CurvatureTest, Families) {
  EXPECT_NEAR(curvature(modular(WeightVector({3, 1, 2}))), 0.0, 1e-15);
  EXPECT_EQ(curvature(truncation(5, 10)), 1.0);
  EXPECT_NEAR(curvature(facility_location(RatingsMatrix({{5, 1}, {3, 4}}))), 0.8, 1e-15);
  const ValueOracle zero(3, [](const Subset&) { return 0.0; });
  EXPECT_THROW(curvature(zero), UsageError);
}

TEST(TrajectoryFloorTest, Examples) {
  const auto b = trajectory_floor({1.0, 1.0, false}, 2, 1.0);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], 0.0);
  EXPECT_NEAR(b[1], 0.5, 1e-15);
  EXPECT_NEAR(b[2], 1.0, 1e-15);
}

TEST(TrajectoryFloorTest, LastEntryIsGuarantee) {
  SplitMix64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const SharpParams p{1.0 + 2.0 * rng.uniform(), 0.01 + 0.99 * rng.uniform(), false};
    const int k = 1 + static_cast<int>(rng.below(10));
    const double opt = 0.1 + 10.0 * rng.uniform();
    EXPECT_NEAR(trajectory_floor(p, k, opt).back(), guarantee_static(p) * opt, 1e-12);
  }
  EXPECT_NEAR(trajectory_floor(SharpParams::classical(), 4, 2.0).back(),
              2.0 * (1.0 - kInvE), 1e-12);
}

TEST(CoverageRegionTest, Examples) {
  EXPECT_NEAR(coverage_region_min_c(3, 2, 1.0 / 3.0), 1.0, 1e-12);
  EXPECT_NEAR(coverage_region_min_c(3, 2, 1.0), 2.25, 1e-12);
  EXPECT_NEAR(coverage_region_min_c(3, 2, 0.0), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(coverage_region_min_c(3, 3, 0.5), UsageError);
  EXPECT_THROW(coverage_region_min_c(3, 0, 0.5), UsageError);
}

// ---------------------------------------------------------------------------
// W profiles

TEST(WProfileTest, ModularExample) {
  const auto f = modular(WeightVector({3, 2, 1}));
  const auto w = w_profile(f, brute_force_optima(f, 2), 2);
  EXPECT_EQ(w.s_star, Subset::of(3, {0, 1}));
  EXPECT_DOUBLE_EQ(w.opt, 5.0);
  EXPECT_DOUBLE_EQ(*w.at(1), 2.0);
  EXPECT_DOUBLE_EQ(*w.at(2), 5.0);
  EXPECT_FALSE(w.at(0).has_value());
  EXPECT_FALSE(w.at(3).has_value());
}

TEST(WProfileTest, TruncationExample) {
  const auto f = truncation(2, 4);
  const auto w = w_profile(f, brute_force_optima(f, 2), 2);
  EXPECT_DOUBLE_EQ(*w.at(1), 1.0);
  EXPECT_DOUBLE_EQ(*w.at(2), 2.0);
}

TEST(WProfileTest, ConcaveExample) {
  const auto f = concave_modular(WeightVector({1, 1, 1, 1}), 0.5);
  const auto w = w_profile(f, brute_force_optima(f, 2), 2);
  EXPECT_NEAR(*w.at(1), kConcaveW1, 1e-15);
  EXPECT_NEAR(*w.at(2), kConcaveW2, 1e-15);
  const auto closed = concave_modular_w_profile(WeightVector({1, 1, 1, 1}), 0.5, 2);
  EXPECT_NEAR(*closed.at(1), kConcaveW1, 1e-15);
}

TEST(WProfileTest, PerSizeCoversZeroToK) {
  const auto f = modular(WeightVector({3, 2, 1, 1, 0.5}));
  const auto w = w_profile(f, brute_force_optima(f, 2), 2, true);
  ASSERT_EQ(w.per_size.size(), 3u);
  // S = empty misses both optimal elements.
  EXPECT_DOUBLE_EQ(*w.per_size[0][2], 5.0);
  EXPECT_FALSE(w.per_size[0][1].has_value());
}

TEST(WProfileTest, TooLargeIsResourceError) {
  const auto f = truncation(2, kMaxExhaustive + 1);
  OptimaSet opt;
  opt.optima.push_back(Subset::of(kMaxExhaustive + 1, {0, 1}));
  EXPECT_THROW(w_profile(f, opt, 2), ResourceError);
}

TEST(LinearWProfileTest, Examples) {
  const auto w = linear_w_profile(WeightVector({3, 2, 1}), 2);
  EXPECT_DOUBLE_EQ(*w.at(1), 2.0);
  EXPECT_DOUBLE_EQ(*w.at(2), 5.0);
  const auto ones = linear_w_profile(WeightVector(std::vector<double>(10, 1.0)), 5);
  for (int ell = 1; ell <= 5; ++ell) EXPECT_DOUBLE_EQ(*ones.at(ell), ell);
  const auto single = linear_w_profile(WeightVector({4, 1}), 1);
  EXPECT_DOUBLE_EQ(*single.at(1), 4.0);
  EXPECT_DOUBLE_EQ(single.opt, 4.0);
  EXPECT_THROW(linear_w_profile(WeightVector({1, 2}), 1), UsageError);
}

TEST(LinearWProfileTest, MatchesBruteForce) {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const int n = k + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(10 - k)));
    const WeightVector w(sorted_weights(rng, n));
    const auto f = modular(w);
    const auto closed = linear_w_profile(w, k);
    const auto brute = w_profile(SetTable(f), closed.s_star, k);
    ASSERT_EQ(closed.W.size(), brute.W.size());
    for (int ell = 1; ell <= k; ++ell)
      EXPECT_NEAR(*closed.at(ell), *brute.at(ell), 1e-12) << "n=" << n << " k=" << k;
  }
}

TEST(ConcaveWProfileTest, AlphaOneIsLinear) {
  const WeightVector w({5, 4, 2, 1, 1, 0.5});
  const auto a = concave_modular_w_profile(w, 1.0, 3);
  const auto b = linear_w_profile(w, 3);
  for (int ell = 1; ell <= 3; ++ell) EXPECT_NEAR(*a.at(ell), *b.at(ell), 1e-12);
}

TEST(ConcaveWProfileTest, MatchesBruteForce) {
  SplitMix64 rng(321);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const int n = k + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(10 - k)));
    const double alpha = 0.2 + 0.8 * rng.uniform();
    const WeightVector w(sorted_weights(rng, n));
    const auto closed = concave_modular_w_profile(w, alpha, k);
    const auto brute = w_profile(SetTable(concave_modular(w, alpha)), closed.s_star, k);
    EXPECT_NEAR(closed.opt, brute.opt, 1e-12);
    for (int ell = 1; ell <= k; ++ell)
      EXPECT_NEAR(*closed.at(ell), *brute.at(ell), kEpsVal)
          << "n=" << n << " k=" << k << " alpha=" << alpha << " l=" << ell;
  }
}

// With room to pad (n - |S*| >= k), minimizing over |S| = k gives the same
// profile as minimizing over every |S| <= k.
TEST(WProfileTest, SizeKEqualsAllSizesWithRoomToPad) {
  for (const auto& c : testing::make_sweep(64)) {
    const Instance inst = sample_instance(c.spec);
    if (inst.n > 10) continue;
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    for (const Subset& s_star : opt.optima) {
      if (!detail::size_k_suffices(inst.n, s_star.mask(), inst.k, 0.0)) continue;
      const Profile at_k = detail::profile_at_size(t, s_star.mask(), inst.k);
      Profile all = detail::profile_at_size(t, s_star.mask(), 0);
      for (int r = 1; r <= inst.k; ++r) {
        const Profile p = detail::profile_at_size(t, s_star.mask(), r);
        for (std::size_t l = 0; l < all.size(); ++l)
          if (p[l] && (!all[l] || *p[l] < *all[l])) all[l] = p[l];
      }
      for (std::size_t l = 1; l < all.size(); ++l) {
        ASSERT_EQ(at_k[l].has_value(), all[l].has_value()) << c.label;
        if (at_k[l]) { EXPECT_NEAR(*at_k[l], *all[l], kEpsVal) << c.label << " l=" << l; }
      }
      break;
    }
  }
}

// Coverage has n = 2k - 1, so padding is impossible and a smaller set
// violates what the size-k profile admits.
TEST(WProfileTest, CoverageNeedsSmallSets) {
  const auto f = nwf_coverage(3);
  const SetTable t(f);
  const auto opt = brute_force_optima(t, 3);
  EXPECT_FALSE(detail::size_k_suffices(5, opt.optima[0].mask(), 3, 0.0));
  const auto w = w_profile(t, opt.optima[0], 3, true);
  const auto cs = detail::sum_form_constraints(w.per_size[3], 3, w.opt);
  const auto th = cs.theta_at(1.0);
  ASSERT_TRUE(th.has_value());
  EXPECT_NEAR(th->first, 1.0 / 3.0, 1e-9);
  EXPECT_EQ(th->second, "l=2");
  EXPECT_FALSE(holds_monotonic(t, opt.optima[0], 3, {1.0, 1.0 / 3.0, false}).holds);
}

// ---------------------------------------------------------------------------
// Membership

TEST(HoldsTest, TruncationAtOneOne) {
  const SetTable t(truncation(2, 4));
  const Subset s_star = Subset::of(4, {0, 1});
  EXPECT_TRUE(holds_monotonic(t, s_star, 2, {1.0, 1.0, false}).holds);
  EXPECT_TRUE(holds_submodular(t, s_star, 2, {1.0, 1.0, false}).holds);
}

TEST(HoldsTest, ReportsViolator) {
  const SetTable t(modular(WeightVector({3, 2, 1, 0.1})));
  const Subset s_star = Subset::of(4, {0, 1});
  const auto m = holds_monotonic(t, s_star, 2, {1.0, 1.0, false});
  ASSERT_FALSE(m.holds);
  EXPECT_LT(m.lhs, m.rhs);
  EXPECT_EQ(std::popcount(m.violator), 2);
}

TEST(HoldsTest, ClassicalLimitAlwaysHolds) {
  for (const auto& c : testing::make_sweep(48)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    const Subset s = opt.optima.front();
    EXPECT_TRUE(holds_monotonic(t, s, inst.k, SharpParams::classical()).holds) << c.label;
    EXPECT_TRUE(holds_submodular(t, s, inst.k, SharpParams::classical()).holds) << c.label;
  }
}

TEST(HoldsTest, ContainmentAndRelaxation) {
  const std::vector<double> cs = {1.0, 1.1, 1.5, 2.0};
  const std::vector<double> thetas = {0.1, 0.3, 0.5, 0.8, 1.0};
  for (const auto& c : testing::make_sweep(40, 555)) {
    const Instance inst = sample_instance(c.spec);
    if (inst.n < 2 * inst.k) continue;
    const SetTable t(inst.f);
    const Subset s = brute_force_optima(t, inst.k).optima.front();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = 0; j < thetas.size(); ++j) {
        const SharpParams p{cs[i], thetas[j], false};
        if (!holds_monotonic(t, s, inst.k, p).holds) continue;
        EXPECT_TRUE(holds_submodular(t, s, inst.k, p).holds) << c.label;
        for (std::size_t i2 = i; i2 < cs.size(); ++i2)
          for (std::size_t j2 = 0; j2 <= j; ++j2)
            EXPECT_TRUE(holds_monotonic(t, s, inst.k, {cs[i2], thetas[j2], false}).holds)
                << c.label;
      }
    }
  }
}

TEST(HoldsApproximateTest, ZeroDeltaMatchesMonotonic) {
  for (const auto& c : testing::make_sweep(24, 77)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const Subset s = brute_force_optima(t, inst.k).optima.front();
    for (double theta : {0.2, 0.6, 1.0})
      EXPECT_EQ(holds_approximate(t, s, inst.k, {0.0, 1.2, theta, false}).holds,
                holds_monotonic(t, s, inst.k, {1.2, theta, false}).holds)
          << c.label;
  }
}

// Membership for truncation k=2, delta=0.25 at (1, 1) against a direct check
// of every |S| <= 2.
TEST(HoldsApproximateTest, TruncationByEnumeration) {
  const auto f = truncation(2, 4);
  const SetTable t(f);
  const Subset s_star = Subset::of(4, {0, 1});
  bool expected = true;
  for (std::uint64_t m = 0; m < 16; ++m) {
    const Subset s(m, 4);
    if (s.size() > 2) continue;
    const Subset missing = s_star - s;
    if (missing.is_empty()) continue;
    double lhs = 0.0;
    for (int e : missing) lhs += delta_marginal(f, s, e, 0.25, 2);
    const double rhs = missing.size() / 2.0 * 2.0;  // (l / (k c))^(1/theta) OPT
    if (lhs < rhs - kEpsVal) expected = false;
  }
  EXPECT_EQ(holds_approximate(t, s_star, 2, {0.25, 1.0, 1.0, false}).holds, expected);
  EXPECT_THROW(holds_approximate(t, s_star, 2, {0.75, 1.0, 1.0, false}), UsageError);
}

// ---------------------------------------------------------------------------
// Fits

TEST(FitTest, TruncationIsOne) {
  const SetTable t(truncation(5, 10));
  const auto opt = brute_force_optima(t, 5);
  const auto r = fit_monotonic(t, opt, 5);
  EXPECT_EQ(r.bound, 1.0);
  EXPECT_EQ(r.params.c, 1.0);
  EXPECT_EQ(r.params.theta, 1.0);
  EXPECT_EQ(r.notion, Notion::kMonotonic);
}

TEST(FitTest, TruncationSubmodular) {
  const SetTable t(truncation(2, 4));
  const auto r = fit_submodular(t, brute_force_optima(t, 2), 2);
  EXPECT_EQ(r.bound, 1.0);
  EXPECT_EQ(r.params.c, 1.0);
  EXPECT_EQ(r.params.theta, 1.0);
}

TEST(FitTest, BalancedModularIsOne) {
  const SetTable t(modular(WeightVector(std::vector<double>(10, 1.0))));
  const auto opt = brute_force_optima(t, 5);
  EXPECT_EQ(fit_monotonic(t, opt, 5).bound, 1.0);
  EXPECT_EQ(fit_dynamic_monotonic(t, opt, 5).bound, 1.0);
  EXPECT_EQ(fit_submodular(t, opt, 5).bound, 1.0);
  EXPECT_EQ(fit_dynamic_submodular(t, opt, 5).bound, 1.0);
}

TEST(FitTest, CoverageStaysBelowBoundary) {
  const SetTable t(nwf_coverage(3));
  const auto opt = brute_force_optima(t, 3);
  const auto r = fit_monotonic(t, opt, 3);
  EXPECT_LE(r.bound, kStaticOneThird + 0.01);
  EXPECT_GE(r.bound, 1.0 - kInvE - 1e-12);
  EXPECT_LE(r.bound, 19.0 / 27.0 + 1e-12);
}

TEST(FitTest, SubmodularIgnoresSetsAlreadyOptimal) {
  // f(S) = OPT already at |S| = 1: element 0 alone reaches the cap.
  const ValueOracle f(4, [](const Subset& s) {
    return std::min(2.0, (s.contains(0) ? 2.0 : 0.0) + 0.5 * (s - Subset::of(4, {0})).size());
  });
  ASSERT_TRUE(validate_monotone_submodular(f).ok);
  const SetTable t(f);
  const auto opt = brute_force_optima(t, 2);
  const auto r = fit_submodular(t, opt, 2);
  EXPECT_GE(r.bound, 1.0 - kInvE);
  EXPECT_LE(r.bound, 1.0);
}

TEST(FitTest, LevelZeroAdmitsOneOne) {
  for (const auto& c : testing::make_sweep(24, 9)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    const std::uint64_t s = opt.optima.front().mask();
    const auto mono = detail::sum_form_constraints(detail::profile_at_size(t, s, 0), inst.k,
                                                   opt.opt_value);
    const auto sub = detail::submodular_constraints(t, s, inst.k, 0, 0);
    for (const auto* cs : {&mono, &sub}) {
      const auto th = cs->theta_at(1.0);
      ASSERT_TRUE(th.has_value()) << c.label;
      EXPECT_EQ(th->first, 1.0) << c.label;
    }
  }
}

TEST(FitTest, ApproximateZeroDeltaIsMonotonic) {
  for (const auto& c : testing::make_sweep(24, 31)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    const auto a = fit_approximate(t, opt, inst.k, 0.0);
    const auto m = fit_monotonic(t, opt, inst.k);
    EXPECT_EQ(a.bound, m.bound) << c.label;
    EXPECT_EQ(a.params.c, m.params.c) << c.label;
    EXPECT_EQ(a.params.theta, m.params.theta) << c.label;
    EXPECT_EQ(a.s_star, m.s_star) << c.label;
    EXPECT_EQ(a.notion, Notion::kApproximate);
  }
}

TEST(FitTest, ApproximateRejectsDelta) {
  const SetTable t(truncation(2, 4));
  const auto opt = brute_force_optima(t, 2);
  EXPECT_THROW(fit_approximate(t, opt, 2, 0.6), UsageError);
  EXPECT_THROW(fit_approximate(t, opt, 2, -0.1), UsageError);
}

TEST(FitTest, ApproximateBoundCertified) {
  for (const auto& c : testing::make_sweep(24, 41)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    const double delta = 0.5 * (1.0 - 1.0 / inst.k);
    const auto r = fit_approximate(t, opt, inst.k, delta);
    EXPECT_GE(r.bound, 0.0);
    EXPECT_LE(r.bound, 1.0);
    if (r.binding == "infeasible") continue;
    const ApproxSharpParams p{delta, r.params.c, r.params.theta, r.params.limit};
    EXPECT_NEAR(r.bound, certified_approximate(p, inst.k), 1e-15) << c.label;
    EXPECT_TRUE(holds_approximate(t, r.s_star, inst.k, p).holds) << c.label;
  }
}

// Fitted parameters must pass the exhaustive membership check, and the
// reported bound must equal the formula at those parameters.
TEST(FitTest, FittedParamsAreMembers) {
  for (const auto& c : testing::make_sweep(40, 8)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    const auto m = fit_monotonic(t, opt, inst.k);
    EXPECT_TRUE(holds_monotonic(t, m.s_star, inst.k, m.params).holds) << c.label;
    EXPECT_NEAR(m.bound, guarantee_static(m.params), 1e-12) << c.label;
    const auto s = fit_submodular(t, opt, inst.k);
    EXPECT_TRUE(holds_submodular(t, s.s_star, inst.k, s.params).holds) << c.label;
    EXPECT_NEAR(s.bound, guarantee_static(s.params), 1e-12) << c.label;
    for (const auto& d : {fit_dynamic_monotonic(t, opt, inst.k),
                          fit_dynamic_submodular(t, opt, inst.k)})
      EXPECT_NEAR(d.bound, guarantee_dynamic(d.dynamic, inst.k), 1e-15) << c.label;
  }
}

TEST(FitTest, OrderingAndSoundnessOnSweep) {
  for (const auto& c : testing::make_sweep(64, 2024)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    const double worst = worst_tie_greedy(inst.f, inst.k) / opt.opt_value;
    const double m = fit_monotonic(t, opt, inst.k).bound;
    const double s = fit_submodular(t, opt, inst.k).bound;
    const double dm = fit_dynamic_monotonic(t, opt, inst.k).bound;
    const double ds = fit_dynamic_submodular(t, opt, inst.k).bound;
    EXPECT_GE(s, m - 1e-12) << c.label;
    EXPECT_GE(dm, m - 1e-9) << c.label;
    EXPECT_GE(ds, s - 1e-9) << c.label;
    for (double b : {m, s, dm, ds}) EXPECT_GE(worst, b - 1e-7) << c.label;
  }
}

TEST(FitTest, GreedyDominatesFloors) {
  for (const auto& c : testing::make_sweep(48, 4)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    const auto g = greedy(inst.f, inst.k);
    for (const auto& r : {fit_monotonic(t, opt, inst.k), fit_submodular(t, opt, inst.k)}) {
      const auto b = trajectory_floor(r.params, inst.k, opt.opt_value);
      for (int i = 0; i <= inst.k; ++i) EXPECT_GE(g.values[i], b[i] - 1e-7) << c.label;
    }
  }
}

TEST(FitTest, EarlyStopNeverBeatsFullSweep) {
  Grid heuristic;
  heuristic.early_stop = true;
  for (const auto& c : testing::make_sweep(24, 6)) {
    const Instance inst = sample_instance(c.spec);
    const SetTable t(inst.f);
    const auto opt = brute_force_optima(t, inst.k);
    EXPECT_LE(fit_monotonic(t, opt, inst.k, heuristic).bound,
              fit_monotonic(t, opt, inst.k).bound + 1e-15)
        << c.label;
  }
}

TEST(GridTest, Values) {
  const auto v = Grid{}.values();
  ASSERT_EQ(v.size(), 201u);
  EXPECT_EQ(v.front(), 1.0);
  EXPECT_NEAR(v.back(), 3.0, 1e-12);
  EXPECT_EQ(Grid({1.0, 0.5}).values().size(), 1u);
  EXPECT_THROW(Grid({0.5, 0.1}).values(), UsageError);
  EXPECT_THROW(Grid({2.0, 0.0}).values(), UsageError);
}

TEST(ConstraintSetTest, PruneKeepsTheta) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    detail::ConstraintSet cs;
    for (int i = 0; i < 30; ++i)
      cs.cons.push_back({rng.uniform() * 2.0 - 0.5, 0.05 + 3.0 * rng.uniform(),
                         static_cast<std::uint64_t>(i), false});
    detail::ConstraintSet pruned = cs;
    pruned.prune();
    EXPECT_LE(pruned.cons.size(), cs.cons.size());
    for (double c = 1.0; c <= 3.0; c += 0.01) {
      const auto a = cs.theta_at(c);
      const auto b = pruned.theta_at(c);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) { EXPECT_NEAR(a->first, b->first, 1e-12); }
    }
  }
}

// ---------------------------------------------------------------------------
// Constructors and stability proxy

TEST(ConstructLinearTest, Examples) {
  const auto w = construct_sharp_linear(1.0, 1.0, 2);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], 0.5, 1e-15);
  EXPECT_NEAR(w[1], 0.5, 1e-15);
  EXPECT_THROW(construct_sharp_linear(0.5, 1.0, 2), ConstructionError);
  EXPECT_THROW(construct_sharp_linear(1.0, 0.0, 2), ConstructionError);
  EXPECT_THROW(construct_sharp_linear(1.0, 1.5, 2), ConstructionError);
}

TEST(ConstructLinearTest, WeightsSumToOneAndAreSorted) {
  for (int k = 2; k <= 6; ++k)
    for (double theta : {0.25, 0.5, 0.75, 1.0}) {
      const auto w = construct_sharp_linear(1.0, theta, k);
      double sum = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) sum += w[i];
      EXPECT_NEAR(sum, 1.0, 1e-12);
      // theta = 1 gives equal weights up to rounding.
      for (std::size_t i = 1; i < w.size(); ++i) EXPECT_GE(w[i - 1], w[i] - 1e-12);
    }
}

TEST(MultiplicityTest, Examples) {
  const auto trunc = optima_multiplicity(brute_force_optima(truncation(2, 4), 2));
  EXPECT_EQ(trunc.count, 6u);
  EXPECT_FALSE(trunc.unique);
  EXPECT_TRUE(optima_multiplicity(brute_force_optima(modular(WeightVector({4, 3, 2, 1})), 2)).unique);
  EXPECT_TRUE(optima_multiplicity(brute_force_optima(nwf_coverage(3), 3)).unique);
}

TEST(NotionTest, Names) {
  EXPECT_EQ(to_string(Notion::kDynamicSubmodular), "dynamic_submodular");
  EXPECT_EQ(to_string(Notion::kApproximate), "approximate");
}

}  // namespace
}  // namespace sharp
