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
//  Monotone submodular function families and an exhaustive validator.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sharp/setfun.hpp"

namespace sharp {

// Positive per-element weights. `order` is the permutation that lists
// elements by non-increasing weight (ties by index).
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw ConstructionError("weight vector is empty");
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (!(w_[i] > 0.0))
        throw ConstructionError("weight " + std::to_string(i) +
                                " must be positive, got " +
                                std::to_string(w_[i]));
    order_.resize(w_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return w_[a] > w_[b]; });
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }
  const std::vector<int>& order() const { return order_; }
  bool sorted_descending() const {
    return std::is_sorted(w_.begin(), w_.end(), std::greater<>());
  }

 private:
  std::vector<double> w_;
  std::vector<int> order_;
};

// Users x items, row-major.
struct RatingsMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> r;

  RatingsMatrix() = default;
  RatingsMatrix(int m, int n) : rows(m), cols(n), r(std::size_t(m) * n, 0.0) {}
  explicit RatingsMatrix(const std::vector<std::vector<double>>& data) {
    rows = static_cast<int>(data.size());
    cols = rows ? static_cast<int>(data[0].size()) : 0;
    r.reserve(std::size_t(rows) * cols);
    for (const auto& row : data) {
      if (static_cast<int>(row.size()) != cols)
        throw ConstructionError("ragged ratings matrix");
      r.insert(r.end(), row.begin(), row.end());
    }
  }

  double& at(int i, int j) { return r[std::size_t(i) * cols + j]; }
  double at(int i, int j) const { return r[std::size_t(i) * cols + j]; }

  RatingsMatrix select_columns(const std::vector<int>& columns) const {
    RatingsMatrix out(rows, static_cast<int>(columns.size()));
    for (int i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < columns.size(); ++j)
        out.at(i, static_cast<int>(j)) = at(i, columns[j]);
    return out;
  }
  std::vector<double> column_means() const {
    std::vector<double> mean(cols, 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) mean[j] += at(i, j);
    for (double& v : mean) v /= rows;
    return mean;
  }
};

struct KernelMatrix {
  Eigen::MatrixXd K;
  double sigma = 1.0;
};

struct FeatureSet {
  std::vector<std::vector<double>> x;
  std::vector<double> e0;

  int size() const { return static_cast<int>(x.size()); }
  int dim() const { return x.empty() ? 0 : static_cast<int>(x[0].size()); }

  FeatureSet select(const std::vector<int>& rows) const {
    FeatureSet out;
    out.e0 = e0;
    for (int r : rows) out.x.push_back(x.at(static_cast<std::size_t>(r)));
    return out;
  }
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConstructionError("alpha must lie in (0, 1], got " +
                            std::to_string(alpha));
}

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double ipow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace detail

inline ValueOracle modular(const WeightVector& w) {
  if (w.size() == 0) throw ConstructionError("modular: empty weights");
  auto weights = w.values();
  return ValueOracle(
      static_cast<int>(weights.size()),
      [weights](const Subset& s) {
        double sum = 0.0;
        for (int e : s) sum += weights[e];
        return sum;
      },
      "modular");
}

// (sum of weights)^alpha.
inline ValueOracle concave_modular(const WeightVector& w, double alpha) {
  detail::check_alpha(alpha);
  auto weights = w.values();
  return ValueOracle(
      static_cast<int>(weights.size()),
      [weights, alpha](const Subset& s) {
        double sum = 0.0;
        for (int e : s) sum += weights[e];
        return sum > 0.0 ? std::pow(sum, alpha) : 0.0;
      },
      "concave_modular");
}

// min{|S|, k + 1}: every k-set is optimal, curvature is 1.
inline ValueOracle truncation(int k, int n) {
  if (k < 2) throw ConstructionError("truncation: k must be at least 2");
  if (n < k + 1)
    throw ConstructionError("truncation: need n >= k + 1, got n = " +
                            std::to_string(n));
  return ValueOracle(
      n,
      [k](const Subset& s) { return static_cast<double>(std::min(s.size(), k + 1)); },
      "truncation");
}

// Worst-case coverage instance over the point space {1..k}^k.
// Elements 0..k-2 are A_1..A_{k-1} (points with x_i = 1); elements
// k-1..2k-2 are B_1..B_k (points with x_k = j).
inline constexpr int kCoverageMinK = 2;
inline constexpr int kCoverageMaxK = 8;

inline int coverage_ground_size(int k) { return 2 * k - 1; }

inline void check_coverage_k(int k) {
  if (k < kCoverageMinK || k > kCoverageMaxK)
    throw ConstructionError("nwf_coverage: k must lie in [2, 8], got " +
                            std::to_string(k));
}

inline ValueOracle nwf_coverage(int k) {
  check_coverage_k(k);
  const int n = coverage_ground_size(k);
  const std::uint64_t a_mask = full_mask(k - 1);
  // Uncovered points: the last coordinate avoids the b chosen values
  // (k - b choices), each chosen A_i coordinate avoids 1 (k - 1 choices) and
  // the remaining k - 1 - a coordinates are free.
  return ValueOracle(
      n,
      [k, a_mask](const Subset& s) {
        int a = std::popcount(s.mask() & a_mask);
        int b = s.size() - a;
        double total = detail::ipow(k, k);
        double uncovered = detail::ipow(k - 1, a) * (k - b) *
                           detail::ipow(k, k - 1 - a);
        return total - uncovered;
      },
      "nwf_coverage");
}

// Counts covered points one by one. Exists to cross-check the closed form.
inline double nwf_coverage_enumerate(int k, const Subset& s) {
  check_coverage_k(k);
  if (s.ground_size() != coverage_ground_size(k))
    throw UsageError("nwf_coverage_enumerate: subset ground size mismatch");
  std::vector<int> x(static_cast<std::size_t>(k), 1);
  std::int64_t covered = 0;
  const std::int64_t total = static_cast<std::int64_t>(detail::ipow(k, k));
  for (std::int64_t p = 0; p < total; ++p) {
    std::int64_t rest = p;
    for (int i = 0; i < k; ++i) {
      x[i] = static_cast<int>(rest % k) + 1;
      rest /= k;
    }
    bool hit = false;
    for (int e : s) {
      if (e < k - 1) {
        hit = x[e] == 1;
      } else {
        hit = x[k - 1] == e - (k - 1) + 1;
      }
      if (hit) break;
    }
    covered += hit;
  }
  return static_cast<double>(covered);
}

// (1/m) sum_i max_{j in S} r_ij with max over the empty set equal to 0.
inline ValueOracle facility_location(const RatingsMatrix& r) {
  if (r.rows < 1 || r.cols < 1)
    throw ConstructionError("facility_location: empty ratings matrix");
  RatingsMatrix ratings = r;
  return ValueOracle(
      r.cols,
      [ratings](const Subset& s) {
        if (s.is_empty()) return 0.0;
        double sum = 0.0;
        for (int i = 0; i < ratings.rows; ++i) {
          double best = 0.0;
          for (int j : s) best = std::max(best, ratings.at(i, j));
          sum += best;
        }
        return sum / ratings.rows;
      },
      "facility_location");
}

// ((1/m) sum_i sum_{j in S} r_ij)^alpha.
inline ValueOracle concave_ratings(const RatingsMatrix& r, double alpha) {
  detail::check_alpha(alpha);
  if (r.rows < 1 || r.cols < 1)
    throw ConstructionError("concave_ratings: empty ratings matrix");
  std::vector<double> means = r.column_means();
  return ValueOracle(
      r.cols,
      [means, alpha](const Subset& s) {
        double sum = 0.0;
        for (int e : s) sum += means[e];
        return sum > 0.0 ? std::pow(sum, alpha) : 0.0;
      },
      "concave_ratings");
}

// K_ee' = exp(-|x_e - x_e'|^2 / h).
inline KernelMatrix se_kernel(const FeatureSet& features, double h,
                              double sigma = 1.0) {
  if (!(h > 0.0))
    throw ConstructionError("se_kernel: bandwidth h must be positive");
  if (!(sigma > 0.0))
    throw ConstructionError("se_kernel: noise scale sigma must be positive");
  const int n = features.size();
  KernelMatrix km;
  km.sigma = sigma;
  km.K.resize(n, n);
  for (int i = 0; i < n; ++i) {
    km.K(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double v = std::exp(-detail::sq_dist(features.x[i], features.x[j]) / h);
      km.K(i, j) = v;
      km.K(j, i) = v;
    }
  }
  return km;
}

// 1/2 log det(I + sigma^-2 K_SS), natural log, via Cholesky.
inline ValueOracle information_gain(const KernelMatrix& km) {
  const int n = static_cast<int>(km.K.rows());
  if (n < 1 || km.K.cols() != n)
    throw ConstructionError("information_gain: kernel must be square and non-empty");
  if (!(km.sigma > 0.0))
    throw ConstructionError("information_gain: sigma must be positive");
  if (!km.K.isApprox(km.K.transpose(), 1e-12))
    throw ConstructionError("information_gain: kernel is not symmetric");
  Eigen::MatrixXd K = km.K;
  const double inv_var = 1.0 / (km.sigma * km.sigma);
  return ValueOracle(
      n,
      [K, inv_var](const Subset& s) {
        const int m = s.size();
        if (m == 0) return 0.0;
        std::vector<int> idx = s.elements();
        Eigen::MatrixXd A(m, m);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            A(i, j) = (i == j ? 1.0 : 0.0) + inv_var * K(idx[i], idx[j]);
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success)
          throw NumericError("information_gain: factorization failed on " +
                             to_string(s));
        const auto& L = llt.matrixLLT();
        double logdet = 0.0;
        for (int i = 0; i < m; ++i) logdet += std::log(L(i, i));
        return logdet;  // 1/2 * (2 * sum log L_ii)
      },
      "information_gain");
}

// f(A) = L({e0}) - L(A + e0), L(A) = (1/|V|) sum_{e in V} min_{v in A} d(e, v).
inline ValueOracle exemplar(const FeatureSet& features) {
  const int n = features.size();
  if (n < 1) throw ConstructionError("exemplar: empty feature set");
  const std::size_t dim = features.x[0].size();
  for (const auto& v : features.x)
    if (v.size() != dim)
      throw ConstructionError("exemplar: feature vectors differ in dimension");
  std::vector<double> e0 = features.e0.empty() ? std::vector<double>(dim, 0.0)
                                               : features.e0;
  if (e0.size() != dim)
    throw ConstructionError("exemplar: e0 dimension mismatch");

  // Pairwise distances, with column n holding d(e, e0).
  std::vector<double> d(std::size_t(n) * (n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      d[std::size_t(i) * (n + 1) + j] =
          std::sqrt(detail::sq_dist(features.x[i], features.x[j]));
    d[std::size_t(i) * (n + 1) + n] = std::sqrt(detail::sq_dist(features.x[i], e0));
  }
  double base = 0.0;
  for (int i = 0; i < n; ++i) base += d[std::size_t(i) * (n + 1) + n];
  base /= n;

  return ValueOracle(
      n,
      [d, n, base](const Subset& s) {
        double loss = 0.0;
        for (int i = 0; i < n; ++i) {
          const double* row = &d[std::size_t(i) * (n + 1)];
          double best = row[n];
          for (int j : s) best = std::min(best, row[j]);
          loss += best;
        }
        return base - loss / n;
      },
      "exemplar");
}

struct ValidationReport {
  bool ok = true;
  bool normalized = true;
  std::string kind;  // "", "normalization", "monotonicity", "submodularity"
  // Witness: A subset of B; e is the element for submodularity failures.
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  int e = -1;
  double lhs = 0.0;
  double rhs = 0.0;
};

// Exhaustive check of f(empty) = 0, f(A) <= f(B) and f_A(e) >= f_B(e) for
// all A subset B, e not in B. Covering pairs (B = A + one element) suffice
// for monotonicity; for diminishing returns it suffices to compare A with
// A + x, which is checked for every A, x, e.
inline ValidationReport validate_monotone_submodular(const ValueOracle& f) {
  const int n = f.size();
  if (n > kMaxExhaustive)
    throw ResourceError("validate_monotone_submodular: n must be <= " + std::to_string(kMaxExhaustive));
  SetTable t(f);
  ValidationReport rep;
  if (std::abs(t[0]) > kEpsVal) {
    rep.ok = false;
    rep.normalized = false;
    rep.kind = "normalization";
    rep.lhs = t[0];
    return rep;
  }
  const std::uint64_t all = t.count();
  for (std::uint64_t a = 0; a < all; ++a) {
    for (int x = 0; x < n; ++x) {
      const std::uint64_t bx = std::uint64_t{1} << x;
      if (a & bx) continue;
      if (t[a] > t[a | bx] + kEpsVal) {
        rep.ok = false;
        rep.kind = "monotonicity";
        rep.a = a;
        rep.b = a | bx;
        rep.lhs = t[a];
        rep.rhs = t[a | bx];
        return rep;
      }
      for (int e = 0; e < n; ++e) {
        const std::uint64_t be = std::uint64_t{1} << e;
        if (e == x || (a & be)) continue;
        double fa = t.marginal(a, e);
        double fb = t.marginal(a | bx, e);
        if (fa < fb - kEpsVal) {
          rep.ok = false;
          rep.kind = "submodularity";
          rep.a = a;
          rep.b = a | bx;
          rep.e = e;
          rep.lhs = fa;
          rep.rhs = fb;
          return rep;
        }
      }
    }
  }
  return rep;
}

}  // namespace sharp
