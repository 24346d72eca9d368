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

// Command-line front end.
//
//   sharp greedy           --family modular --weights 3,2,1,1 --k 2
//   sharp analyze          --family truncation --k 5
//   sharp experiment       --family facility_location --k-min 5 --k-max 10 --format csv
//   sharp construct-linear --c 1 --theta 0.5 --k 5
//   sharp validate         --spec instance.json
//
// Exit codes: 0 success, 2 usage or spec error, 3 soundness violation,
// 4 resource budget exceeded. Results go to stdout (or --out); diagnostics
// go to stderr.

#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sharp/sharp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnsound = 3;
constexpr int kExitResource = 4;

struct Flags {
  std::string spec_path;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 42;
  double c_max = 3.0;
  double c_step = 0.01;
  double delta = 0.0;
  int repeats = 1;
  std::string notions;
  bool lazy = false;
  bool early_stop = false;
  bool verbose = false;

  // Inline family flags, mirroring the spec file.
  std::string family;
  int k = 0;
  int n = 0;
  std::vector<double> weights;
  double alpha = 0.8;
  std::string ratings;
  std::string features;
  bool header = false;
  int users = 0;
  int synth_users = 200;
  int pool = 50;
  int dim = 20;
  double h = 0.75;
  double sigma = 1.0;
  bool no_normalize = false;

  int k_min = 5;
  int k_max = 10;
  bool parallel = false;
  bool no_validate = false;

  double c = 1.0;
  double theta = 1.0;
};

bool given(const CLI::App& app, const std::string& name) {
  const CLI::Option* opt = app.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Spec file first, then any explicitly given inline flag on top.
sharp::InstanceSpec build_spec(const CLI::App& app, const Flags& fl, bool need_k = true) {
  sharp::InstanceSpec s;
  if (!fl.spec_path.empty()) s = sharp::load_spec_file(fl.spec_path);
  if (given(app, "--family")) s.family = fl.family;
  if (given(app, "--k")) s.k = fl.k;
  if (given(app, "--n")) s.n = fl.n;
  if (given(app, "--seed")) s.seed = fl.seed;
  if (given(app, "--weights")) s.weights = fl.weights;
  if (given(app, "--alpha")) s.alpha = fl.alpha;
  if (given(app, "--ratings")) s.ratings_csv = fl.ratings;
  if (given(app, "--features")) s.features_csv = fl.features;
  if (given(app, "--header")) s.header = fl.header;
  if (given(app, "--users")) s.users = fl.users;
  if (given(app, "--synth-users")) s.synth_users = fl.synth_users;
  if (given(app, "--pool")) s.synth_pool = fl.pool;
  if (given(app, "--dim")) s.dim = fl.dim;
  if (given(app, "--bandwidth")) s.h = fl.h;
  if (given(app, "--sigma")) s.sigma = fl.sigma;
  if (given(app, "--no-normalize")) s.normalize = !fl.no_normalize;
  if (given(app, "--c-max")) s.grid.c_max = fl.c_max;
  if (given(app, "--c-step")) s.grid.c_step = fl.c_step;
  if (given(app, "--delta")) s.delta = fl.delta;
  s.grid.early_stop = fl.early_stop;
  if (fl.spec_path.empty() && !given(app, "--family"))
    throw sharp::UsageError("need --spec or --family");
  if (need_k && !given(app, "--k") && fl.spec_path.empty())
    throw sharp::UsageError("need --k");
  return s;
}

sharp::AnalysisOptions build_options(const Flags& fl, const sharp::InstanceSpec& s) {
  sharp::AnalysisOptions o;
  o.grid = s.grid;
  o.delta = s.delta;
  o.validate = !fl.no_validate;
  if (!fl.notions.empty()) {
    o.notions.clear();
    std::stringstream ss(fl.notions);
    std::string item;
    const auto& known = sharp::notion_names();
    while (std::getline(ss, item, ',')) {
      if (std::find(known.begin(), known.end(), item) == known.end())
        throw sharp::UsageError("unknown notion '" + item + "'");
      o.notions.insert(item);
    }
  }
  return o;
}

int cmd_greedy(const CLI::App& app, const Flags& fl) {
  const auto spec = build_spec(app, fl);
  const auto inst = sharp::sample_instance(spec);
  const auto tr = fl.lazy ? sharp::lazy_greedy(inst.f, inst.k) : sharp::greedy(inst.f, inst.k);
  nlohmann::json j = {{"family", inst.family}, {"n", inst.n},
                      {"k", inst.k},           {"lazy", fl.lazy},
                      {"picks", tr.picks},     {"values", tr.values},
                      {"queries", tr.queries}};
  sharp::write_text(j.dump() + "\n", fl.out);
  return kExitOk;
}

int cmd_analyze(const CLI::App& app, const Flags& fl) {
  const auto spec = build_spec(app, fl);
  const auto options = build_options(fl, spec);
  if (spec.ground_size() > sharp::kMaxExhaustive)
    throw sharp::UsageError("analyze needs n <= " + std::to_string(sharp::kMaxExhaustive) + ", got n = " +
                            std::to_string(spec.ground_size()));
  const auto inst = sharp::sample_instance(spec);
  if (options.validate && inst.n <= options.validate_max_n) {
    const auto v = sharp::validate_monotone_submodular(inst.f);
    if (!v.ok) throw sharp::UsageError("instance fails the " + v.kind + " check");
  }
  auto rep = sharp::analyze(inst, options);
  rep.seed = spec.seed;
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  sharp::emit_report({rep}, fl.format, fl.out);
  if (!rep.sound) {
    std::cerr << "soundness assertion failed\n";
    return kExitUnsound;
  }
  return kExitOk;
}

int cmd_experiment(const CLI::App& app, const Flags& fl) {
  sharp::ExperimentConfig cfg;
  cfg.base = build_spec(app, fl, /*need_k=*/false);
  if (!given(app, "--n")) cfg.base.n.reset();
  cfg.k_min = fl.k_min;
  cfg.k_max = fl.k_max;
  cfg.repeats = fl.repeats;
  cfg.parallel = fl.parallel;
  cfg.options = build_options(fl, cfg.base);
  const auto result = sharp::run_experiment(cfg);
  bool sound = true;
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& r : result.rows) {
    if (fl.verbose)
      std::cerr << "k=" << r.k << " repeat=" << r.repeat << " opt=" << r.opt
                << " greedy_ratio=" << r.greedy_ratio << "\n";
    for (const auto& w : r.warnings) std::cerr << "warning: k=" << r.k << ": " << w << "\n";
    sound = sound && r.sound;
  }
  sharp::emit_report(result.rows, fl.format, fl.out);
  if (!sound) {
    std::cerr << "soundness assertion failed\n";
    return kExitUnsound;
  }
  return kExitOk;
}

int cmd_construct_linear(const Flags& fl) {
  if (fl.k < 1) throw sharp::UsageError("need --k >= 1");
  const sharp::WeightVector w = sharp::construct_sharp_linear(fl.c, fl.theta, fl.k);
  // Pad to n = 2k with lighter filler so the size-k check is meaningful.
  std::vector<double> padded = w.values();
  const double filler = *std::min_element(padded.begin(), padded.end()) * 0.5;
  padded.resize(static_cast<std::size_t>(2 * fl.k), filler);
  const int n = static_cast<int>(padded.size());
  if (n > sharp::kMaxExhaustive)
    throw sharp::UsageError("verification needs 2k <= " + std::to_string(sharp::kMaxExhaustive));
  const sharp::SetTable t(sharp::modular(sharp::WeightVector(padded)));
  const sharp::Subset s_star(sharp::full_mask(fl.k), n);
  const auto m = sharp::holds_monotonic(t, s_star, fl.k, {fl.c, fl.theta, false});
  nlohmann::json out = {{"c", fl.c}, {"theta", fl.theta}, {"k", fl.k}, {"weights", w.values()}};
  nlohmann::json check = {{"verified", m.holds},
                          {"guarantee", sharp::guarantee_static({fl.c, fl.theta, false})}};
  if (!m.holds) check["violator"] = sharp::to_string(sharp::Subset(m.violator, n));
  sharp::write_text(out.dump() + "\n" + check.dump() + "\n", fl.out);
  return m.holds ? kExitOk : kExitUnsound;
}

int cmd_validate(const CLI::App& app, const Flags& fl) {
  const auto spec = build_spec(app, fl);
  const auto inst = sharp::sample_instance(spec);
  if (inst.n > sharp::kMaxExhaustive)
    throw sharp::UsageError("validate needs n <= " + std::to_string(sharp::kMaxExhaustive));
  const auto v = sharp::validate_monotone_submodular(inst.f);
  nlohmann::json j = {{"ok", v.ok}, {"normalized", v.normalized}, {"n", inst.n}};
  if (!v.ok) {
    j["kind"] = v.kind;
    j["a"] = sharp::to_string(sharp::Subset(v.a, inst.n));
    j["b"] = sharp::to_string(sharp::Subset(v.b, inst.n));
    if (v.e >= 0) j["e"] = v.e;
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
  }
  sharp::write_text(j.dump() + "\n", fl.out);
  return v.ok ? kExitOk : kExitUsage;
}

void add_instance_flags(CLI::App* sub, Flags& fl) {
  sub->add_option("--spec", fl.spec_path, "JSON instance spec");
  sub->add_option("--family", fl.family, "Function family")
      ->check(CLI::IsMember(sharp::family_names()));
  sub->add_option("--k", fl.k, "Cardinality budget");
  sub->add_option("--n", fl.n, "Ground-set size (default 2k)");
  sub->add_option("--seed", fl.seed, "Seed for data and sampling");
  sub->add_option("--weights", fl.weights, "Comma-separated weights")->delimiter(',');
  sub->add_option("--alpha", fl.alpha, "Concave exponent in (0, 1]");
  sub->add_option("--ratings", fl.ratings, "Ratings CSV (users x items)");
  sub->add_option("--features", fl.features, "Feature CSV (one row per element)");
  sub->add_flag("--header", fl.header, "CSV files have a header row");
  sub->add_option("--users", fl.users, "Keep the first m rating rows");
  sub->add_option("--synth-users", fl.synth_users, "Synthetic users when no CSV is given");
  sub->add_option("--pool", fl.pool, "Synthetic items / vectors to sample from");
  sub->add_option("--dim", fl.dim, "Synthetic feature dimension");
  sub->add_option("--bandwidth", fl.h, "Kernel bandwidth h");
  sub->add_option("--sigma", fl.sigma, "Noise scale");
  sub->add_flag("--no-normalize", fl.no_normalize, "Skip feature normalization");
  sub->add_option("--out", fl.out, "Output path (default stdout)");
  sub->add_flag("-v,--verbose", fl.verbose, "Per-row progress on stderr");
}

void add_analysis_flags(CLI::App* sub, Flags& fl) {
  sub->add_option("--format", fl.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--c-max", fl.c_max, "Largest c on the grid");
  sub->add_option("--c-step", fl.c_step, "Grid step for c");
  sub->add_option("--delta", fl.delta, "delta for the approximate notion");
  sub->add_option("--notions", fl.notions, "Comma-separated subset of notions");
  sub->add_flag("--early-stop", fl.early_stop,
                "Stop the c sweep at the first non-improving step");
  sub->add_flag("--no-validate", fl.no_validate, "Skip the submodularity check");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy guarantees from sharpness on small submodular instances"};
  app.require_subcommand(1);
  Flags fl;

  auto* greedy = app.add_subcommand("greedy", "Run greedy and print its trajectory");
  add_instance_flags(greedy, fl);
  greedy->add_flag("--lazy", fl.lazy, "Use lazy evaluations");

  auto* analyze = app.add_subcommand("analyze", "Full analysis of one instance");
  add_instance_flags(analyze, fl);
  add_analysis_flags(analyze, fl);

  auto* experiment = app.add_subcommand("experiment", "Sweep k with n = 2k");
  add_instance_flags(experiment, fl);
  add_analysis_flags(experiment, fl);
  experiment->add_option("--k-min", fl.k_min, "Smallest k");
  experiment->add_option("--k-max", fl.k_max, "Largest k");
  experiment->add_option("--repeats", fl.repeats, "Rows per k");
  experiment->add_flag("--parallel", fl.parallel, "Run rows concurrently");

  auto* construct = app.add_subcommand("construct-linear",
                                       "Linear function with a prescribed sharpness");
  construct->add_option("--c", fl.c, "c >= 1")->required();
  construct->add_option("--theta", fl.theta, "theta in (0, 1]")->required();
  construct->add_option("--k", fl.k, "Budget")->required();
  construct->add_option("--out", fl.out, "Output path (default stdout)");

  auto* validate = app.add_subcommand("validate", "Exhaustive monotone submodularity check");
  add_instance_flags(validate, fl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*greedy) return cmd_greedy(*greedy, fl);
    if (*analyze) return cmd_analyze(*analyze, fl);
    if (*experiment) return cmd_experiment(*experiment, fl);
    if (*construct) return cmd_construct_linear(fl);
    if (*validate) return cmd_validate(*validate, fl);
  } catch (const sharp::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const sharp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
