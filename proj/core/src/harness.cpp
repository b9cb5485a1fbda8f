// Copyright 2026 The uqbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uqbench/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "uqbench/apc.hpp"
#include "uqbench/csv.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/hsg.hpp"
#include "uqbench/io.hpp"
#include "uqbench/reference.hpp"
#include "uqbench/run_cache.hpp"
#include "uqbench/sparsegrid.hpp"
#include "uqbench/vkoga.hpp"

namespace uqbench::harness {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::vector<std::string> kConvergenceHeader{
    "method",         "variant",       "parameter",      "cost",
    "error_mean",     "error_std",     "rel_error_mean", "rel_error_std",
    "max_error_mean", "max_error_std", "config_hash"};

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string csv_safe(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

std::string file_stem(const ErrorReport& r) {
  std::string stem = r.method + "_" + (r.variant.empty() ? "default" : r.variant) + "_" + r.parameter;
  for (char& c : stem) {
    if (c == '=' || c == ';' || c == ' ') c = '-';
  }
  return stem;
}

template <typename T>
std::vector<T> list_or_scalar(const json& entry, const char* key, std::vector<T> fallback) {
  if (!entry.contains(key)) return fallback;
  const json& v = entry.at(key);
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("plan key '") + key + "': " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

double l2_norm(const std::vector<double>& v, double dr) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(dr * acc);
}

ErrorNorms error_norm(const MomentField& candidate, const MomentField& reference) {
  if (candidate.size() != reference.size() || candidate.std.size() != reference.std.size() ||
      std::abs(candidate.dr - reference.dr) > 1e-12 * std::max(1.0, reference.dr)) {
    throw ConfigError("moment fields live on different grids");
  }
  for (std::size_t j = 0; j < candidate.r_centers.size() && j < reference.r_centers.size(); ++j) {
    if (std::abs(candidate.r_centers[j] - reference.r_centers[j]) > 1e-9) {
      throw ConfigError("moment fields live on different grids");
    }
  }
  ErrorNorms e;
  double sm = 0.0;
  double ss = 0.0;
  for (std::size_t j = 0; j < reference.size(); ++j) {
    const double dm = candidate.mean[j] - reference.mean[j];
    const double ds = candidate.std[j] - reference.std[j];
    sm += dm * dm;
    ss += ds * ds;
    e.max_mean = std::max(e.max_mean, std::abs(dm));
    e.max_std = std::max(e.max_std, std::abs(ds));
  }
  e.mean = std::sqrt(reference.dr * sm);
  e.std = std::sqrt(reference.dr * ss);
  const double nm = l2_norm(reference.mean, reference.dr);
  const double ns = l2_norm(reference.std, reference.dr);
  e.rel_mean = nm > 0.0 ? e.mean / nm : e.mean;
  e.rel_std = ns > 0.0 ? e.std / ns : e.std;
  return e;
}

Plan plan_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("plan must be a JSON object");
  static const std::vector<std::string> kKeys{"scenario", "solver",  "samples",
                                              "cache_dir", "out_dir", "methods"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError("unknown plan key '" + key + "'");
    }
  }
  Plan plan;
  if (doc.contains("scenario")) {
    const json& s = doc.at("scenario");
    plan.scenario = s.is_string() ? io::load_scenario(resolve(base_dir, s.get<std::string>()))
                                  : io::scenario_from_json(s.dump());
  }
  if (doc.contains("solver")) plan.solver = io::solver_from_json(doc.at("solver").dump());
  if (!doc.contains("samples")) throw ConfigError("plan needs a 'samples' entry");
  const json& samples = doc.at("samples");
  if (samples.contains("file")) {
    plan.samples_file = resolve(base_dir, samples.at("file").get<std::string>());
  } else if (samples.contains("generate")) {
    const json& g = samples.at("generate");
    plan.generate_n = g.value("n", std::size_t{0});
    plan.generate_seed = g.value("seed", std::uint64_t{0});
    if (plan.generate_n == 0) throw ConfigError("samples.generate.n must be positive");
  } else {
    throw ConfigError("samples needs 'file' or 'generate'");
  }
  if (doc.contains("cache_dir")) {
    plan.cache_dir = resolve(base_dir, doc.at("cache_dir").get<std::string>());
  }
  plan.out_dir = resolve(base_dir, doc.value("out_dir", std::string("uqbench-out")));
  if (doc.contains("methods")) {
    for (const auto& m : doc.at("methods")) {
      MethodPlan mp;
      mp.method = m.value("method", std::string());
      mp.variant = m.value("variant", std::string());
      if (mp.method == "apc") {
        if (mp.variant != "pcm" && mp.variant != "ft") {
          throw ConfigError("apc variant must be pcm or ft");
        }
        mp.orders = list_or_scalar<std::size_t>(m, "orders", {2});
      } else if (mp.method == "asg") {
        sparsegrid::parse_variant(mp.variant);
        mp.budgets = list_or_scalar<std::size_t>(m, "budgets", {100});
        mp.degree_cap = m.value("degree_cap", 1);
      } else if (mp.method == "vkoga") {
        if (mp.variant.empty()) mp.variant = "scaled-distance";
        vkoga::parse_convention(mp.variant);
        mp.deltas = list_or_scalar<double>(m, "deltas", {0.2});
        mp.n = list_or_scalar<std::size_t>(m, "n", {1, 4, 16, 64, 252, 1000});
        mp.resolution = m.value("resolution", std::size_t{50});
        mp.jitter = m.value("jitter", 0.0);
      } else if (mp.method == "hsg") {
        mp.nr = list_or_scalar<std::size_t>(m, "nr", {1});
        mp.no = list_or_scalar<std::size_t>(m, "no", {1});
        mp.quadrature = m.value("quadrature", std::size_t{0});
        mp.porosity_split = m.value("porosity_split", false);
        mp.node_tolerance = m.value("node_tolerance", 0.5);
        if (mp.variant.empty()) mp.variant = mp.porosity_split ? "split" : "full";
      } else {
        throw ConfigError("unknown method '" + mp.method + "' (apc|asg|vkoga|hsg)");
      }
      plan.methods.push_back(std::move(mp));
    }
  }
  return plan;
}

Plan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return plan_from_json(buffer.str(), path.parent_path());
}

stochastic::SampleSet plan_samples(const Plan& plan) {
  if (plan.samples_file) return stochastic::load_samples(*plan.samples_file);
  return stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(),
                                      plan.generate_n, plan.generate_seed);
}

BenchmarkResult run_benchmark(const Plan& plan) {
  const stochastic::SampleSet set = plan_samples(plan);
  auto cache = plan.cache_dir ? std::make_shared<RunCache>(*plan.cache_dir)
                              : std::make_shared<RunCache>();
  ModelRunner runner(plan.scenario, plan.solver, cache);
  const std::string hash = hex_digest(runner.digest());
  const double t = runner.end_time();
  const solver::Grid& grid = runner.grid();

  std::filesystem::create_directories(plan.out_dir / "moments");
  BenchmarkResult result;
  result.reference = reference::run_reference(set, runner);
  write_moments_csv(result.reference, plan.out_dir / "reference_moments.csv");

  CsvWriter convergence(plan.out_dir / "convergence.csv", kConvergenceHeader);
  CsvWriter timing(plan.out_dir / "timing.csv", {"method", "variant", "parameter", "wall_time_s"});
  CsvWriter failures(plan.out_dir / "failures.csv", {"method", "variant", "parameter", "message"});

  auto record = [&](ErrorReport report, const MomentField& moments) {
    report.errors = error_norm(moments, result.reference);
    report.config_hash = hash;
    write_moments_csv(moments, plan.out_dir / "moments" / (file_stem(report) + ".csv"));
    const auto& e = report.errors;
    convergence.text_row({report.method, report.variant, report.parameter,
                          std::to_string(report.cost), format_double(e.mean), format_double(e.std),
                          format_double(e.rel_mean), format_double(e.rel_std),
                          format_double(e.max_mean), format_double(e.max_std), report.config_hash});
    timing.text_row({report.method, report.variant, report.parameter,
                     format_double(report.wall_time)});
    result.reports.push_back(std::move(report));
  };
  auto guarded = [&](const MethodPlan& m, const std::string& parameter,
                     const std::function<void()>& job) {
    try {
      job();
    } catch (const std::exception& e) {
      failures.text_row({m.method, m.variant, parameter, csv_safe(e.what())});
      result.failures.push_back({m.method, m.variant, parameter, e.what()});
    }
  };

  for (const MethodPlan& m : plan.methods) {
    if (m.method == "apc") {
      for (std::size_t order : m.orders) {
        const std::string parameter = "order=" + std::to_string(order);
        guarded(m, parameter, [&] {
          const auto start = Clock::now();
          RunTracker tracker;
          const apc::PceSurrogate s = m.variant == "pcm"
                                          ? apc::build_pcm(set, order, runner, &tracker)
                                          : apc::build_ft(set, order, runner, &tracker);
          const MomentField moments = apc::pce_moments(s, set, grid, t);
          record({m.method, m.variant, parameter, tracker.distinct(), {}, seconds_since(start), {}},
                 moments);
        });
      }
    } else if (m.method == "asg") {
      std::vector<std::size_t> budgets = m.budgets;
      std::sort(budgets.begin(), budgets.end());
      guarded(m, "budget=" + std::to_string(budgets.back()), [&] {
        const auto start = Clock::now();
        sparsegrid::AdaptiveOptions options;
        options.variant = sparsegrid::parse_variant(m.variant);
        options.budget = budgets.back();
        options.checkpoints = budgets;
        options.degree_cap = m.degree_cap;
        const auto adaptive = sparsegrid::adaptive_loop(set, options, runner);
        for (const auto& [budget, s] : adaptive.snapshots) {
          std::vector<UncertainInput> points;
          for (std::size_t k = 0; k < s.grid.size(); ++k) {
            const auto x = s.grid.coordinates(k);
            points.push_back(s.box.from_unit({x[0], x[1], x[2]}));
          }
          RunTracker tracker;
          runner.run(points, &tracker);
          const MomentField moments = sparsegrid::sg_moments(s, set, grid, t);
          record({m.method, m.variant, "budget=" + std::to_string(budget), tracker.distinct(), {},
                  seconds_since(start), {}},
                 moments);
        }
      });
    } else if (m.method == "vkoga") {
      std::vector<std::size_t> ns = m.n;
      std::sort(ns.begin(), ns.end());
      std::optional<vkoga::CandidateSet> candidates;
      for (double delta : m.deltas) {
        guarded(m, "delta=" + short_double(delta), [&] {
          const auto start = Clock::now();
          if (!candidates) candidates = vkoga::build_candidates(set, m.resolution);
          vkoga::PGreedy greedy(vkoga::KernelSpec{delta, vkoga::parse_convention(m.variant), m.jitter},
                                candidates->points, ns.back(), runner.pool());
          greedy.run(ns.back());
          std::vector<UncertainInput> inputs;
          for (std::size_t idx : greedy.selected()) {
            const auto& x = candidates->points[idx];
            inputs.push_back(candidates->box.from_unit({x[0], x[1], x[2]}));
          }
          const auto outputs = runner.run(inputs);
          for (std::size_t n : ns) {
            const std::size_t used = std::min(n, greedy.size());
            const vkoga::KernelModel model = vkoga::fit(greedy, used, candidates->box, outputs);
            RunTracker tracker;
            runner.run(std::span<const UncertainInput>(inputs.data(), used), &tracker);
            const MomentField moments = vkoga::kernel_moments(model, set, grid, t);
            record({m.method, m.variant,
                    "delta=" + short_double(delta) + ";n=" + std::to_string(n), tracker.distinct(),
                    {}, seconds_since(start), {}},
                   moments);
          }
        });
      }
    } else if (m.method == "hsg") {
      for (std::size_t nr : m.nr) {
        for (std::size_t no : m.no) {
          const std::string parameter = "nr=" + std::to_string(nr) + ";no=" + std::to_string(no);
          guarded(m, parameter, [&] {
            const auto start = Clock::now();
            hsg::HsgOptions options;
            options.nr = nr;
            options.no = no;
            options.quadrature = m.quadrature;
            options.porosity_split = m.porosity_split;
            options.node_tolerance = m.node_tolerance;
            const hsg::HsgSurrogate s =
                hsg::build_hsg(set, options, plan.scenario, plan.solver, runner.pool());
            const MomentField moments = hsg::reconstruct_moments(s, set, grid);
            record({m.method, m.variant, parameter, s.cost(), {}, seconds_since(start), {}},
                   moments);
          });
        }
      }
    }
  }
  result.solver_invocations = runner.solver_invocations();
  return result;
}

std::vector<ErrorReport> read_convergence(const std::filesystem::path& path) {
  const CsvTextTable table = read_csv_text(path);
  std::vector<std::size_t> col;
  for (const auto& name : kConvergenceHeader) col.push_back(table.column_index(name));
  std::vector<ErrorReport> out;
  for (const auto& row : table.rows) {
    ErrorReport r;
    try {
      r.method = row.at(col[0]);
      r.variant = row.at(col[1]);
      r.parameter = row.at(col[2]);
      r.cost = std::stoul(row.at(col[3]));
      r.errors.mean = std::stod(row.at(col[4]));
      r.errors.std = std::stod(row.at(col[5]));
      r.errors.rel_mean = std::stod(row.at(col[6]));
      r.errors.rel_std = std::stod(row.at(col[7]));
      r.errors.max_mean = std::stod(row.at(col[8]));
      r.errors.max_std = std::stod(row.at(col[9]));
      r.config_hash = row.at(col[10]);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ": malformed convergence row");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace uqbench::harness
