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
//  Ground sets, subsets and the value-oracle contract.
//

#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sharp {

// Absolute tolerance used for every "tie" and "optimal" comparison.
inline constexpr double kEpsVal = 1e-9;
inline constexpr int kMaxGroundSet = 64;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Caller violated a precondition (bad element, mismatched sizes, k > n ...).
struct UsageError : Error {
  using Error::Error;
};
// Family constructor rejected its parameters.
struct ConstructionError : Error {
  using Error::Error;
};
// Instance too large for exhaustive work, or a search budget ran out.
struct ResourceError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

class GroundSet {
 public:
  explicit GroundSet(int n, std::vector<std::string> labels = {})
      : n_(n), labels_(std::move(labels)) {
    if (n < 1 || n > kMaxGroundSet)
      throw UsageError("ground set size must be in [1, 64], got " +
                       std::to_string(n));
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
      throw UsageError("label count does not match ground set size");
  }

  int size() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::string label(int e) const {
    if (!labels_.empty()) return labels_.at(static_cast<std::size_t>(e));
    return std::to_string(e);
  }

 private:
  int n_;
  std::vector<std::string> labels_;
};

inline std::uint64_t full_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

// A subset of {0, ..., n-1} stored as a single machine word.
class Subset {
 public:
  class Iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    using pointer = const int*;
    using reference = int;

    Iterator() = default;
    explicit Iterator(std::uint64_t rest) : rest_(rest) {}
    int operator*() const { return std::countr_zero(rest_); }
    Iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    Iterator operator++(int) {
      Iterator tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(const Iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  Subset() = default;
  Subset(std::uint64_t mask, int n) : mask_(mask), n_(n) {
    if (n < 0 || n > kMaxGroundSet)
      throw UsageError("ground set size out of range");
    if ((mask & ~full_mask(n)) != 0)
      throw UsageError("subset mask has bits beyond the ground set");
  }

  static Subset empty(int n) { return Subset(0, n); }
  static Subset full(int n) { return Subset(full_mask(n), n); }
  static Subset of(int n, std::initializer_list<int> elements) {
    std::uint64_t m = 0;
    for (int e : elements) {
      check_element(e, n);
      m |= std::uint64_t{1} << e;
    }
    return Subset(m, n);
  }
  static Subset of(int n, const std::vector<int>& elements) {
    std::uint64_t m = 0;
    for (int e : elements) {
      check_element(e, n);
      m |= std::uint64_t{1} << e;
    }
    return Subset(m, n);
  }

  std::uint64_t mask() const { return mask_; }
  int ground_size() const { return n_; }
  int size() const { return std::popcount(mask_); }
  bool is_empty() const { return mask_ == 0; }

  bool contains(int e) const {
    check_element(e, n_);
    return (mask_ >> e) & 1u;
  }
  Subset with(int e) const {
    check_element(e, n_);
    return Subset(mask_ | (std::uint64_t{1} << e), n_, Unchecked{});
  }
  Subset without(int e) const {
    check_element(e, n_);
    return Subset(mask_ & ~(std::uint64_t{1} << e), n_, Unchecked{});
  }

  Subset operator|(const Subset& o) const {
    same_ground(o);
    return Subset(mask_ | o.mask_, n_, Unchecked{});
  }
  Subset operator&(const Subset& o) const {
    same_ground(o);
    return Subset(mask_ & o.mask_, n_, Unchecked{});
  }
  Subset operator-(const Subset& o) const {
    same_ground(o);
    return Subset(mask_ & ~o.mask_, n_, Unchecked{});
  }
  Subset complement() const {
    return Subset(~mask_ & full_mask(n_), n_, Unchecked{});
  }
  bool is_subset_of(const Subset& o) const {
    same_ground(o);
    return (mask_ & ~o.mask_) == 0;
  }

  Iterator begin() const { return Iterator(mask_); }
  Iterator end() const { return Iterator(0); }
  std::vector<int> elements() const { return {begin(), end()}; }

  bool operator==(const Subset&) const = default;

  static void check_element(int e, int n) {
    if (e < 0 || e >= n)
      throw UsageError("element " + std::to_string(e) +
                       " outside ground set of size " + std::to_string(n));
  }

 private:
  struct Unchecked {};
  Subset(std::uint64_t mask, int n, Unchecked) : mask_(mask), n_(n) {}

  void same_ground(const Subset& o) const {
    if (n_ != o.n_)
      throw UsageError("subset ground-set sizes differ: " +
                       std::to_string(n_) + " vs " + std::to_string(o.n_));
  }

  std::uint64_t mask_ = 0;
  int n_ = 0;
};

inline std::string to_string(const Subset& s) {
  std::string out = "{";
  bool first = true;
  for (int e : s) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

// A deterministic, normalized, non-negative set function with a shared
// query counter. Copies share the counter and the underlying evaluator.
class ValueOracle {
 public:
  using Fn = std::function<double(const Subset&)>;

  ValueOracle(int n, Fn fn, std::string name = {})
      : n_(n),
        fn_(std::make_shared<const Fn>(std::move(fn))),
        queries_(std::make_shared<std::atomic<std::uint64_t>>(0)),
        name_(std::move(name)) {
    if (n < 1 || n > kMaxGroundSet)
      throw UsageError("oracle ground set size must be in [1, 64]");
  }

  double operator()(const Subset& s) const {
    if (s.ground_size() != n_)
      throw UsageError("subset over ground set of size " +
                       std::to_string(s.ground_size()) +
                       " passed to oracle of size " + std::to_string(n_));
    if (counting_) queries_->fetch_add(1, std::memory_order_relaxed);
    return (*fn_)(s);
  }
  double operator()(std::uint64_t mask) const { return (*this)(Subset(mask, n_)); }

  int size() const { return n_; }
  const std::string& name() const { return name_; }
  std::uint64_t queries() const {
    return queries_->load(std::memory_order_relaxed);
  }
  void reset_queries() const { queries_->store(0, std::memory_order_relaxed); }

 private:
  friend ValueOracle memoized(const ValueOracle& f);

  ValueOracle(int n, Fn fn, std::shared_ptr<std::atomic<std::uint64_t>> counter,
              std::string name)
      : n_(n),
        fn_(std::make_shared<const Fn>(std::move(fn))),
        queries_(std::move(counter)),
        name_(std::move(name)),
        counting_(false) {}

  int n_;
  std::shared_ptr<const Fn> fn_;
  std::shared_ptr<std::atomic<std::uint64_t>> queries_;
  std::string name_;
  bool counting_ = true;
};

// f_S(e) = f(S + e) - f(S).
inline double marginal(const ValueOracle& f, const Subset& s, int e) {
  if (s.contains(e))
    throw UsageError("marginal: element " + std::to_string(e) +
                     " already in " + to_string(s));
  return f(s.with(e)) - f(s);
}

// f(S + e) - (1 - delta) f(S). The range check on delta needs k.
inline double delta_marginal(const ValueOracle& f, const Subset& s, int e,
                             double delta, int k) {
  if (k < 1) throw UsageError("delta_marginal: k must be positive");
  if (!(delta >= 0.0) || delta > 1.0 - 1.0 / k + 1e-15)
    throw UsageError("delta must lie in [0, 1 - 1/k], got " +
                     std::to_string(delta));
  if (s.contains(e))
    throw UsageError("delta_marginal: element " + std::to_string(e) +
                     " already in " + to_string(s));
  return f(s.with(e)) - (1.0 - delta) * f(s);
}

// Lookup-table wrapper. The returned oracle shares f's query counter, so
// queries() reports only evaluations that reached f. The table is shared
// between copies and guarded by a mutex.
inline ValueOracle memoized(const ValueOracle& f) {
  struct Table {
    std::mutex mu;
    std::unordered_map<std::uint64_t, double> values;
  };
  auto table = std::make_shared<Table>();
  ValueOracle inner = f;
  auto fn = [inner, table](const Subset& s) {
    {
      std::lock_guard<std::mutex> lock(table->mu);
      auto it = table->values.find(s.mask());
      if (it != table->values.end()) return it->second;
    }
    double v = inner(s);
    std::lock_guard<std::mutex> lock(table->mu);
    table->values.emplace(s.mask(), v);
    return v;
  };
  return ValueOracle(f.size(), std::move(fn), f.queries_, f.name());
}

inline constexpr int kMaxExhaustive = 20;

// Dense table of f over all 2^n subsets; the workhorse of every exhaustive
// routine. Costs exactly 2^n oracle queries.
class SetTable {
 public:
  explicit SetTable(const ValueOracle& f) : n_(f.size()) {
    if (n_ > kMaxExhaustive)
      throw ResourceError("exhaustive enumeration needs n <= " + std::to_string(kMaxExhaustive) + ", got n = " +
                          std::to_string(n_) + "; use a smaller instance");
    values_.resize(std::size_t{1} << n_);
    for (std::uint64_t m = 0; m < values_.size(); ++m) values_[m] = f(m);
  }

  int size() const { return n_; }
  double operator[](std::uint64_t mask) const { return values_[mask]; }
  double marginal(std::uint64_t mask, int e) const {
    return values_[mask | (std::uint64_t{1} << e)] - values_[mask];
  }
  std::uint64_t count() const { return values_.size(); }

 private:
  int n_;
  std::vector<double> values_;
};

// Visits every mask over n <= 62 bits with popcount exactly r, in increasing
// order.
template <typename Visit>
void for_each_of_size(int n, int r, Visit&& visit) {
  if (r < 0 || r > n) return;
  if (r == 0) {
    visit(std::uint64_t{0});
    return;
  }
  std::uint64_t m = (std::uint64_t{1} << r) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (m < limit) {
    visit(m);
    // Gosper's hack.
    std::uint64_t c = m & (~m + 1);
    std::uint64_t nxt = m + c;
    m = (((nxt ^ m) >> 2) / c) | nxt;
  }
}

}  // namespace sharp
