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
//  Experiment harness: data ingestion, seeded synthetic data, instance
//  sampling, the per-instance analysis pipeline and report emission.
//

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sharp/families.hpp"
#include "sharp/optimize.hpp"
#include "sharp/setfun.hpp"
#include "sharp/sharpness.hpp"

namespace sharp {

// SplitMix64 (Steele, Lea & Flood 2014). Fixed algorithm so that synthetic
// data and samples are identical on every platform; no std:: distribution is
// used anywhere on this path.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw UsageError("SplitMix64::below: empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
      std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

  // Standard normal via Box-Muller (one variate per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

// First `count` entries of a seeded Fisher-Yates shuffle of 0..pool-1.
inline std::vector<int> sample_without_replacement(int pool, int count,
                                                   std::uint64_t seed) {
  if (count > pool)
    throw UsageError("cannot sample " + std::to_string(count) + " of " +
                     std::to_string(pool) + " items");
  std::vector<int> idx(static_cast<std::size_t>(pool));
  for (int i = 0; i < pool; ++i) idx[i] = i;
  SplitMix64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(pool - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(count));
  return idx;
}

// ---------------------------------------------------------------------------
// CSV ingestion

namespace detail {

inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                         bool header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && header) continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos)
        throw ParseError(path + ":" + std::to_string(lineno) + ": empty cell");
      cell = cell.substr(b, e - b + 1);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size() || !std::isfinite(v))
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": not a number: '" + cell + "'");
      row.push_back(v);
    }
    if (!line.empty() && line.back() == ',')
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty cell");
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(rows.front().size()) + " cells, got " +
                       std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");
  return rows;
}

}  // namespace detail

// One row per user, one column per item. `users` keeps the first m rows.
inline RatingsMatrix load_ratings_csv(const std::string& path, bool header = false,
                                      std::optional<int> users = std::nullopt) {
  auto rows = detail::read_numeric_csv(path, header);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (double v : rows[i])
      if (v < 0.0)
        throw ParseError(path + ": negative rating in data row " + std::to_string(i + 1));
  if (users) {
    if (*users < 1) throw UsageError("--users must be positive");
    if (static_cast<std::size_t>(*users) < rows.size())
      rows.resize(static_cast<std::size_t>(*users));
  }
  return RatingsMatrix(rows);
}

// Subtract each vector's own mean and scale it to unit Euclidean norm.
inline void normalize_features(FeatureSet& fs) {
  for (std::size_t i = 0; i < fs.x.size(); ++i) {
    auto& v = fs.x[i];
    double mean = 0.0;
    for (double a : v) mean += a;
    mean /= static_cast<double>(v.size());
    double norm = 0.0;
    for (double& a : v) {
      a -= mean;
      norm += a * a;
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0))
      throw NumericError("feature vector " + std::to_string(i) +
                         " has zero norm after centering");
    for (double& a : v) a /= norm;
  }
}

// One row per element; e0 is the origin.
inline FeatureSet load_features_csv(const std::string& path, bool normalize,
                                    bool header = false) {
  FeatureSet fs;
  fs.x = detail::read_numeric_csv(path, header);
  fs.e0.assign(fs.x.front().size(), 0.0);
  if (normalize) normalize_features(fs);
  return fs;
}

// ---------------------------------------------------------------------------
// Synthetic stand-ins

// Integer ratings in {0..5}: 0 ("unrated") with probability 0.4, otherwise
// uniform on {1..5}.
inline RatingsMatrix synth_ratings(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw UsageError("synth_ratings: dimensions must be positive");
  RatingsMatrix r(m, n);
  SplitMix64 rng(seed);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      r.at(i, j) = rng.uniform() < 0.4 ? 0.0 : static_cast<double>(1 + rng.below(5));
  return r;
}

// Gaussian directions scaled to the unit sphere; e0 is the origin.
inline FeatureSet synth_features(int n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw UsageError("synth_features: dimensions must be positive");
  FeatureSet fs;
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& a : v) {
        a = rng.normal();
        norm += a * a;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& a : v) a /= norm;
    fs.x.push_back(std::move(v));
  }
  fs.e0.assign(static_cast<std::size_t>(dim), 0.0);
  return fs;
}

// ---------------------------------------------------------------------------
// Instance specification

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {
      "modular",           "concave_modular", "truncation",       "nwf_coverage",
      "facility_location", "concave_ratings", "information_gain", "exemplar"};
  return names;
}

struct InstanceSpec {
  std::string family = "modular";
  int k = 2;
  std::optional<int> n;  // defaults to 2k (2k - 1 for nwf_coverage)
  std::uint64_t seed = 42;

  // Family parameters.
  std::vector<double> weights;  // modular / concave_modular; random if empty
  double alpha = 0.8;           // concave_modular / concave_ratings
  std::string ratings_csv;      // facility_location / concave_ratings
  std::string features_csv;     // information_gain / exemplar
  bool header = false;
  std::optional<int> users;     // keep the first m rating rows
  int synth_users = 200;
  int synth_pool = 50;          // synthetic items / feature vectors to sample from
  int dim = 20;
  double h = 0.75;
  double sigma = 1.0;
  bool normalize = true;

  Grid grid;
  double delta = 0.0;

  int ground_size() const {
    if (family == "nwf_coverage") return coverage_ground_size(k);
    if (n) return *n;
    if (!weights.empty()) return static_cast<int>(weights.size());
    return 2 * k;
  }
};

inline void to_json(nlohmann::json& j, const InstanceSpec& s) {
  nlohmann::json params = {{"alpha", s.alpha},
                           {"header", s.header},
                           {"synth_users", s.synth_users},
                           {"synth_pool", s.synth_pool},
                           {"dim", s.dim},
                           {"h", s.h},
                           {"sigma", s.sigma},
                           {"normalize", s.normalize}};
  if (!s.weights.empty()) params["weights"] = s.weights;
  if (!s.ratings_csv.empty()) params["ratings_csv"] = s.ratings_csv;
  if (!s.features_csv.empty()) params["features_csv"] = s.features_csv;
  if (s.users) params["users"] = *s.users;
  j = {{"family", s.family},
       {"params", params},
       {"n", s.ground_size()},
       {"k", s.k},
       {"seed", s.seed},
       {"grid", {{"c_max", s.grid.c_max}, {"c_step", s.grid.c_step}}},
       {"delta", s.delta}};
}

inline void from_json(const nlohmann::json& j, InstanceSpec& s) {
  if (!j.is_object()) throw ParseError("instance spec must be a JSON object");
  s.family = j.at("family").get<std::string>();
  s.k = j.at("k").get<int>();
  if (j.contains("n") && !j["n"].is_null()) s.n = j["n"].get<int>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("delta")) s.delta = j["delta"].get<double>();
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.contains("c_max")) s.grid.c_max = g["c_max"].get<double>();
    if (g.contains("c_step")) s.grid.c_step = g["c_step"].get<double>();
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    if (p.contains("weights")) s.weights = p["weights"].get<std::vector<double>>();
    if (p.contains("alpha")) s.alpha = p["alpha"].get<double>();
    if (p.contains("ratings_csv")) s.ratings_csv = p["ratings_csv"].get<std::string>();
    if (p.contains("features_csv")) s.features_csv = p["features_csv"].get<std::string>();
    if (p.contains("header")) s.header = p["header"].get<bool>();
    if (p.contains("users")) s.users = p["users"].get<int>();
    if (p.contains("synth_users")) s.synth_users = p["synth_users"].get<int>();
    if (p.contains("synth_pool")) s.synth_pool = p["synth_pool"].get<int>();
    if (p.contains("dim")) s.dim = p["dim"].get<int>();
    if (p.contains("h")) s.h = p["h"].get<double>();
    if (p.contains("sigma")) s.sigma = p["sigma"].get<double>();
    if (p.contains("normalize")) s.normalize = p["normalize"].get<bool>();
  }
}

inline InstanceSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec file '" + path + "'");
  try {
    return nlohmann::json::parse(in).get<InstanceSpec>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("spec file '" + path + "': " + e.what());
  }
}

struct Instance {
  ValueOracle f;
  int n = 0;
  int k = 0;
  std::string family;
  std::vector<int> sampled;  // source indices of the ground set, if sampled
};

namespace detail {

// Independent seed streams for the data pool and the sample.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 rng(seed ^ (stream * 0xd1b54a32d192ed03ULL));
  return rng.next();
}

inline RatingsMatrix ratings_source(const InstanceSpec& s) {
  if (!s.ratings_csv.empty()) return load_ratings_csv(s.ratings_csv, s.header, s.users);
  return synth_ratings(s.users.value_or(s.synth_users), s.synth_pool, derive_seed(s.seed, 1));
}

inline FeatureSet features_source(const InstanceSpec& s) {
  if (!s.features_csv.empty()) return load_features_csv(s.features_csv, false, s.header);
  return synth_features(s.synth_pool, s.dim, derive_seed(s.seed, 1));
}

}  // namespace detail

// Builds the oracle over n elements sampled uniformly without replacement
// from the family's source data (or the family's own ground set).
inline Instance sample_instance(const InstanceSpec& s) {
  const int n = s.ground_size();
  if (s.k < 1 || s.k > n)
    throw UsageError("need 1 <= k <= n (k = " + std::to_string(s.k) +
                     ", n = " + std::to_string(n) + ")");
  if (n > kMaxGroundSet) throw UsageError("n must be <= 64");
  const std::uint64_t sample_seed = detail::derive_seed(s.seed, 2);
  Instance inst{ValueOracle(1, [](const Subset&) { return 0.0; }), n, s.k, s.family, {}};

  if (s.family == "modular" || s.family == "concave_modular") {
    std::vector<double> w = s.weights;
    if (w.empty()) {
      SplitMix64 rng(detail::derive_seed(s.seed, 1));
      for (int i = 0; i < n; ++i) w.push_back(0.1 + 0.9 * rng.uniform());
    }
    if (static_cast<int>(w.size()) != n)
      throw UsageError("weights has " + std::to_string(w.size()) +
                       " entries but n = " + std::to_string(n));
    inst.f = s.family == "modular" ? modular(WeightVector(w))
                                   : concave_modular(WeightVector(w), s.alpha);
  } else if (s.family == "truncation") {
    inst.f = truncation(s.k, n);
  } else if (s.family == "nwf_coverage") {
    if (s.n && *s.n != coverage_ground_size(s.k))
      throw UsageError("nwf_coverage has exactly 2k - 1 elements");
    inst.f = nwf_coverage(s.k);
  } else if (s.family == "facility_location" || s.family == "concave_ratings") {
    const RatingsMatrix source = detail::ratings_source(s);
    if (n > source.cols)
      throw UsageError("n = " + std::to_string(n) + " exceeds the " +
                       std::to_string(source.cols) + " available items");
    inst.sampled = sample_without_replacement(source.cols, n, sample_seed);
    const RatingsMatrix r = source.select_columns(inst.sampled);
    inst.f = s.family == "facility_location" ? facility_location(r)
                                             : concave_ratings(r, s.alpha);
  } else if (s.family == "information_gain" || s.family == "exemplar") {
    const FeatureSet source = detail::features_source(s);
    if (n > source.size())
      throw UsageError("n = " + std::to_string(n) + " exceeds the " +
                       std::to_string(source.size()) + " available feature vectors");
    inst.sampled = sample_without_replacement(source.size(), n, sample_seed);
    FeatureSet fs = source.select(inst.sampled);
    if (s.normalize) normalize_features(fs);
    inst.f = s.family == "information_gain" ? information_gain(se_kernel(fs, s.h, s.sigma))
                                            : exemplar(fs);
  } else {
    throw UsageError("unknown family '" + s.family + "'");
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Analysis

inline const std::vector<std::string>& notion_names() {
  static const std::vector<std::string> names = {
      "curvature",  "monotonic",          "dynamic_monotonic",
      "submodular", "dynamic_submodular", "approximate"};
  return names;
}

struct AnalysisOptions {
  Grid grid;
  double delta = 0.0;
  std::set<std::string> notions{notion_names().begin(), notion_names().end()};
  // Exhaustive submodularity check; skipped above this size.
  bool validate = true;
  int validate_max_n = 12;
  double soundness_tol = 1e-7;

  bool wants(const std::string& notion) const { return notions.count(notion) > 0; }
};

struct FitSummary {
  std::string notion;
  double bound = 0.0;
  double c = 1.0;
  double theta = 1.0;
  bool limit = false;
  double delta = 0.0;
  std::vector<double> c_dynamic;
  std::vector<double> theta_dynamic;
  std::uint64_t s_star = 0;
  std::string binding;

  bool operator==(const FitSummary&) const = default;
};

inline FitSummary summarize(const FitResult& r) {
  FitSummary s;
  s.notion = to_string(r.notion);
  s.bound = r.bound;
  s.c = r.params.c;
  s.theta = r.params.theta;
  s.limit = r.params.limit;
  s.delta = r.delta;
  s.c_dynamic = r.dynamic.c;
  s.theta_dynamic = r.dynamic.theta;
  s.s_star = r.s_star.mask();
  s.binding = r.binding;
  return s;
}

struct AnalysisReport {
  std::string family;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  int repeat = 0;

  double opt = 0.0;
  std::size_t optima_count = 0;
  bool unique_optimum = false;
  std::vector<int> greedy_picks;
  std::vector<double> greedy_values;
  double greedy_value = 0.0;
  double worst_tie_value = 0.0;
  double greedy_ratio = 0.0;
  double worst_tie_ratio = 0.0;
  std::optional<double> curvature;
  std::optional<double> curvature_bound;
  std::map<std::string, FitSummary> fits;
  std::vector<double> floors;  // b_i for the fitted static monotonic params
  std::uint64_t greedy_queries = 0;
  std::uint64_t lazy_queries = 0;
  std::uint64_t total_queries = 0;
  double wall_ms = 0.0;
  bool sound = true;
  std::vector<std::string> warnings;

  std::optional<double> bound(const std::string& notion) const {
    if (notion == "curvature") return curvature_bound;
    auto it = fits.find(notion);
    if (it == fits.end()) return std::nullopt;
    return it->second.bound;
  }

  bool operator==(const AnalysisReport&) const = default;
};

// Full exhaustive analysis of one instance. Re-asserts soundness: the worst
// greedy ratio must dominate every fitted bound.
inline AnalysisReport analyze(const Instance& inst, const AnalysisOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const ValueOracle& f = inst.f;
  const int k = inst.k;
  if (inst.n > kMaxExhaustive)
    throw ResourceError("analysis needs n <= " + std::to_string(kMaxExhaustive) + ", got n = " + std::to_string(inst.n));
  AnalysisReport rep;
  rep.family = inst.family;
  rep.n = inst.n;
  rep.k = k;
  const std::uint64_t q_start = f.queries();

  const SetTable table(f);
  const OptimaSet optima = brute_force_optima(table, k);
  rep.opt = optima.opt_value;
  const Multiplicity mult = optima_multiplicity(optima);
  rep.optima_count = mult.count;
  rep.unique_optimum = mult.unique;

  const GreedyTrajectory g = greedy(f, k);
  rep.greedy_picks = g.picks;
  rep.greedy_values = g.values;
  rep.greedy_value = g.final_value();
  rep.greedy_queries = g.queries;
  rep.lazy_queries = lazy_greedy(f, k).queries;
  rep.worst_tie_value = worst_tie_greedy(f, k);
  rep.greedy_ratio = rep.opt > 0.0 ? rep.greedy_value / rep.opt : 1.0;
  rep.worst_tie_ratio = rep.opt > 0.0 ? rep.worst_tie_value / rep.opt : 1.0;

  if (opt.wants("curvature")) {
    rep.curvature = curvature(f);
    rep.curvature_bound = curvature_bound(*rep.curvature);
  }
  std::optional<FitResult> mono;
  if (opt.wants("monotonic") || opt.wants("dynamic_monotonic")) {
    mono = fit_monotonic(table, optima, k, opt.grid);
    if (opt.wants("monotonic")) rep.fits["monotonic"] = summarize(*mono);
    rep.floors = trajectory_floor(mono->params, k, rep.opt);
  }
  if (opt.wants("dynamic_monotonic"))
    rep.fits["dynamic_monotonic"] = summarize(fit_dynamic_monotonic(table, optima, k, opt.grid));
  if (opt.wants("submodular"))
    rep.fits["submodular"] = summarize(fit_submodular(table, optima, k, opt.grid));
  if (opt.wants("dynamic_submodular"))
    rep.fits["dynamic_submodular"] =
        summarize(fit_dynamic_submodular(table, optima, k, opt.grid));
  if (opt.wants("approximate"))
    rep.fits["approximate"] = summarize(fit_approximate(table, optima, k, opt.delta, opt.grid));

  for (const auto& name : notion_names()) {
    const auto b = rep.bound(name);
    if (!b) continue;
    if (*b < -1e-12 || *b > 1.0 + 1e-12) {
      rep.sound = false;
      rep.warnings.push_back(name + " bound outside [0, 1]");
    }
    if (rep.worst_tie_ratio < *b - opt.soundness_tol) {
      rep.sound = false;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s bound %.12g exceeds worst greedy ratio %.12g",
                    name.c_str(), *b, rep.worst_tie_ratio);
      rep.warnings.emplace_back(buf);
    }
  }
  for (std::size_t i = 0; i < rep.floors.size(); ++i) {
    if (rep.greedy_values[i] < rep.floors[i] - opt.soundness_tol * std::max(1.0, rep.opt)) {
      rep.sound = false;
      rep.warnings.push_back("greedy value at iteration " + std::to_string(i) +
                             " is below the monotonic floor");
    }
  }
  rep.total_queries = f.queries() - q_start;
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
  InstanceSpec base;  // family + parameters; k and n are set per row
  int k_min = 5;
  int k_max = 10;
  int repeats = 1;
  AnalysisOptions options;
  bool parallel = false;
};

struct ExperimentResult {
  std::vector<AnalysisReport> rows;
  std::vector<std::string> warnings;
};

inline std::uint64_t row_seed(std::uint64_t seed, int k, int repeat) {
  return detail::derive_seed(seed, (static_cast<std::uint64_t>(k) << 20) +
                                       static_cast<std::uint64_t>(repeat) + 3);
}

// One row per (k, repeat) with n = 2k by default. Rows that fail
// submodularity validation are dropped with a warning.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min)
    throw UsageError("invalid k range");
  if (cfg.repeats < 1) throw UsageError("--repeats must be positive");

  struct Job {
    int k;
    int repeat;
  };
  std::vector<Job> jobs;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k)
    for (int r = 0; r < cfg.repeats; ++r) jobs.push_back({k, r});

  auto run_one = [&cfg](Job job) -> std::pair<std::optional<AnalysisReport>, std::string> {
    InstanceSpec spec = cfg.base;
    spec.k = job.k;
    if (cfg.base.n) spec.n = *cfg.base.n;
    else spec.n.reset();
    spec.seed = row_seed(cfg.base.seed, job.k, job.repeat);
    const Instance inst = sample_instance(spec);
    std::string note;
    if (cfg.options.validate) {
      if (inst.n <= cfg.options.validate_max_n) {
        const ValidationReport v = validate_monotone_submodular(inst.f);
        if (!v.ok)
          return {std::nullopt, "k=" + std::to_string(job.k) + " repeat=" +
                                    std::to_string(job.repeat) + ": row aborted, " +
                                    v.kind + " violated"};
      } else {
        note = "k=" + std::to_string(job.k) + ": validation skipped for n = " +
               std::to_string(inst.n);
      }
    }
    AnalysisReport rep = analyze(inst, cfg.options);
    rep.seed = spec.seed;
    rep.repeat = job.repeat;
    return {std::move(rep), note};
  };

  std::vector<std::pair<std::optional<AnalysisReport>, std::string>> results;
  if (cfg.parallel) {
    std::vector<std::future<std::pair<std::optional<AnalysisReport>, std::string>>> fut;
    for (const Job& j : jobs) fut.push_back(std::async(std::launch::async, run_one, j));
    for (auto& f : fut) results.push_back(f.get());
  } else {
    for (const Job& j : jobs) results.push_back(run_one(j));
  }

  ExperimentResult out;
  for (auto& [rep, note] : results) {
    if (!note.empty()) out.warnings.push_back(note);
    if (rep) out.rows.push_back(std::move(*rep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report emission

inline constexpr const char* kCsvHeader =
    "k,opt,greedy_ratio,worst_tie_ratio,curvature_bound,monotonic_bound,"
    "dynamic_monotonic_bound,submodular_bound,dynamic_submodular_bound,"
    "optima_count,queries";

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string to_csv(const std::vector<AnalysisReport>& reports) {
  std::string out = kCsvHeader;
  out += '\n';
  auto opt_cell = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  for (const auto& r : reports) {
    out += std::to_string(r.k) + ',' + format_number(r.opt) + ',' +
           format_number(r.greedy_ratio) + ',' + format_number(r.worst_tie_ratio) + ',' +
           opt_cell(r.curvature_bound) + ',' + opt_cell(r.bound("monotonic")) + ',' +
           opt_cell(r.bound("dynamic_monotonic")) + ',' + opt_cell(r.bound("submodular")) +
           ',' + opt_cell(r.bound("dynamic_submodular")) + ',' +
           std::to_string(r.optima_count) + ',' + std::to_string(r.greedy_queries) + '\n';
  }
  return out;
}

inline void to_json(nlohmann::json& j, const FitSummary& s) {
  j = {{"notion", s.notion}, {"bound", s.bound},     {"c", s.c},
       {"theta", s.theta},   {"limit", s.limit},     {"delta", s.delta},
       {"s_star", s.s_star}, {"binding", s.binding}};
  if (!s.c_dynamic.empty()) {
    j["c_dynamic"] = s.c_dynamic;
    j["theta_dynamic"] = s.theta_dynamic;
  }
}

inline void from_json(const nlohmann::json& j, FitSummary& s) {
  j.at("notion").get_to(s.notion);
  j.at("bound").get_to(s.bound);
  j.at("c").get_to(s.c);
  j.at("theta").get_to(s.theta);
  j.at("limit").get_to(s.limit);
  j.at("delta").get_to(s.delta);
  j.at("s_star").get_to(s.s_star);
  j.at("binding").get_to(s.binding);
  if (j.contains("c_dynamic")) {
    j.at("c_dynamic").get_to(s.c_dynamic);
    j.at("theta_dynamic").get_to(s.theta_dynamic);
  }
}

inline void to_json(nlohmann::json& j, const AnalysisReport& r) {
  j = {{"family", r.family},
       {"n", r.n},
       {"k", r.k},
       {"seed", r.seed},
       {"repeat", r.repeat},
       {"opt", r.opt},
       {"optima_count", r.optima_count},
       {"unique_optimum", r.unique_optimum},
       {"greedy_picks", r.greedy_picks},
       {"greedy_values", r.greedy_values},
       {"greedy_value", r.greedy_value},
       {"worst_tie_value", r.worst_tie_value},
       {"greedy_ratio", r.greedy_ratio},
       {"worst_tie_ratio", r.worst_tie_ratio},
       {"fits", r.fits},
       {"floors", r.floors},
       {"greedy_queries", r.greedy_queries},
       {"lazy_queries", r.lazy_queries},
       {"total_queries", r.total_queries},
       {"wall_ms", r.wall_ms},
       {"sound", r.sound},
       {"warnings", r.warnings}};
  if (r.curvature) {
    j["curvature"] = *r.curvature;
    j["curvature_bound"] = *r.curvature_bound;
  }
}

inline void from_json(const nlohmann::json& j, AnalysisReport& r) {
  j.at("family").get_to(r.family);
  j.at("n").get_to(r.n);
  j.at("k").get_to(r.k);
  j.at("seed").get_to(r.seed);
  j.at("repeat").get_to(r.repeat);
  j.at("opt").get_to(r.opt);
  j.at("optima_count").get_to(r.optima_count);
  j.at("unique_optimum").get_to(r.unique_optimum);
  j.at("greedy_picks").get_to(r.greedy_picks);
  j.at("greedy_values").get_to(r.greedy_values);
  j.at("greedy_value").get_to(r.greedy_value);
  j.at("worst_tie_value").get_to(r.worst_tie_value);
  j.at("greedy_ratio").get_to(r.greedy_ratio);
  j.at("worst_tie_ratio").get_to(r.worst_tie_ratio);
  j.at("fits").get_to(r.fits);
  j.at("floors").get_to(r.floors);
  j.at("greedy_queries").get_to(r.greedy_queries);
  j.at("lazy_queries").get_to(r.lazy_queries);
  j.at("total_queries").get_to(r.total_queries);
  j.at("wall_ms").get_to(r.wall_ms);
  j.at("sound").get_to(r.sound);
  j.at("warnings").get_to(r.warnings);
  if (j.contains("curvature")) {
    r.curvature = j["curvature"].get<double>();
    r.curvature_bound = j["curvature_bound"].get<double>();
  } else {
    r.curvature.reset();
    r.curvature_bound.reset();
  }
}

inline std::string to_json_text(const std::vector<AnalysisReport>& reports) {
  return nlohmann::json(reports).dump(2) + "\n";
}

// Writes to `path`, or to stdout when path is empty or "-".
inline void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline void emit_report(const std::vector<AnalysisReport>& reports, const std::string& format,
                        const std::string& path) {
  if (format == "csv") {
    write_text(to_csv(reports), path);
  } else if (format == "json") {
    write_text(to_json_text(reports), path);
  } else {
    throw UsageError("unknown format '" + format + "' (expected json or csv)");
  }
}

}  // namespace sharp
