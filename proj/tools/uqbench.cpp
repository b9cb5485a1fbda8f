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

// uqbench command line: simulate, samples, reference, surrogate, benchmark, report.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uqbench/apc.hpp"
#include "uqbench/csv.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/harness.hpp"
#include "uqbench/hsg.hpp"
#include "uqbench/io.hpp"
#include "uqbench/reference.hpp"
#include "uqbench/run_cache.hpp"
#include "uqbench/sparsegrid.hpp"
#include "uqbench/stochastic.hpp"
#include "uqbench/vkoga.hpp"

namespace fs = std::filesystem;
using namespace uqbench;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct Common {
  std::string scenario_file;
  std::optional<std::size_t> cells;
  std::optional<double> t_end_days;
  std::optional<double> cfl;
  std::optional<double> theta;
  std::string cache_dir;

  physics::ScenarioConfig scenario() const {
    physics::ScenarioConfig cfg =
        scenario_file.empty() ? physics::ScenarioConfig{} : io::load_scenario(scenario_file);
    if (cells) cfg.n_cells = *cells;
    cfg.validate();
    return cfg;
  }

  solver::SolverConfig settings() const {
    solver::SolverConfig s;
    if (t_end_days) s.t_end = *t_end_days * physics::kSecondsPerDay;
    if (cfl) s.cfl = *cfl;
    if (theta) s.limiter_theta = *theta;
    s.validate();
    return s;
  }

  ModelRunner runner() const {
    auto cache = cache_dir.empty() ? std::make_shared<RunCache>()
                                   : std::make_shared<RunCache>(fs::path(cache_dir));
    return ModelRunner(scenario(), settings(), cache);
  }
};

void add_common(CLI::App* app, Common& c, bool with_cache) {
  app->add_option("--scenario", c.scenario_file, "Scenario JSON (parameter-table keys)")
      ->check(CLI::ExistingFile);
  app->add_option("--cells", c.cells, "Number of radial cells")->check(CLI::PositiveNumber);
  app->add_option("--t-end", c.t_end_days, "End time in days")->check(CLI::PositiveNumber);
  app->add_option("--cfl", c.cfl, "CFL number");
  app->add_option("--theta", c.theta, "Generalized minmod parameter in [1, 2]");
  if (with_cache) app->add_option("--cache", c.cache_dir, "Run-cache directory");
}

fs::path ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void report_moments(const MomentField& m, const fs::path& path) {
  write_moments_csv(m, ensure_parent(path));
  std::cout << "moments: " << path.string() << " (" << m.size() << " cells, " << m.n_samples
            << " samples)\n";
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::string item;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      if (item.empty()) throw ConfigError("empty entry in list '" + text + "'");
      try {
        out.push_back(std::stoul(item));
      } catch (const std::exception&) {
        throw ConfigError("not a count: '" + item + "'");
      }
      item.clear();
    } else {
      item.push_back(text[i]);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uqbench: data-driven uncertainty quantification benchmark for radial CO2 injection"};
  app.require_subcommand(1);

  // simulate
  Common sim_common;
  physics::UncertainInput omega;
  std::string sim_out = "saturation.csv";
  auto* simulate = app.add_subcommand("simulate", "One deterministic model run");
  add_common(simulate, sim_common, false);
  simulate->add_option("--omega1", omega.omega1, "Injection-rate perturbation");
  simulate->add_option("--omega2", omega.omega2, "Relative-permeability exponent");
  simulate->add_option("--omega3", omega.omega3, "Porosity");
  simulate->add_option("--out", sim_out, "Output CSV (r_center, saturation)");

  // samples
  auto* samples = app.add_subcommand("samples", "Generate or inspect sample files");
  samples->require_subcommand(1);
  std::size_t gen_n = 2000;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "samples.csv";
  auto* generate = samples->add_subcommand("generate", "Draw samples from the synthetic distribution");
  generate->add_option("--n", gen_n, "Number of samples")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen_seed, "Random seed");
  generate->add_option("--out", gen_out, "Output CSV (omega1, omega2, omega3)");
  std::string inspect_file;
  auto* inspect = samples->add_subcommand("inspect", "Summary statistics of a sample file");
  inspect->add_option("--samples", inspect_file, "Sample CSV")->required()->check(CLI::ExistingFile);

  // reference
  Common ref_common;
  std::string ref_samples;
  std::string ref_out = "moments.csv";
  auto* reference = app.add_subcommand("reference", "Monte-Carlo reference moments");
  add_common(reference, ref_common, true);
  reference->add_option("--samples", ref_samples, "Sample CSV")->required()->check(CLI::ExistingFile);
  reference->add_option("--out", ref_out, "Moments CSV (r_center, mean, std)");

  // surrogate
  auto* surrogate = app.add_subcommand("surrogate", "Build a surrogate and its moments");
  surrogate->require_subcommand(1);
  Common sur_common;
  std::string sur_samples;
  std::string out_dir = ".";
  auto add_surrogate_common = [&](CLI::App* sub) {
    add_common(sub, sur_common, true);
    sub->add_option("--samples", sur_samples, "Sample CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", out_dir, "Directory for the model file and moments");
  };
  std::string apc_variant = "pcm";
  std::size_t apc_order = 2;
  auto* apc_cmd = surrogate->add_subcommand("apc", "Arbitrary polynomial chaos");
  add_surrogate_common(apc_cmd);
  apc_cmd->add_option("--variant", apc_variant, "pcm or ft")->check(CLI::IsMember({"pcm", "ft"}));
  apc_cmd->add_option("--order", apc_order, "Expansion order");

  std::string asg_variant = "modified";
  std::size_t asg_budget = 100;
  int asg_degree = 1;
  auto* asg_cmd = surrogate->add_subcommand("asg", "Adaptive sparse grid");
  add_surrogate_common(asg_cmd);
  asg_cmd->add_option("--variant", asg_variant, "boundary or modified")
      ->check(CLI::IsMember({"boundary", "modified", "interior"}));
  asg_cmd->add_option("--budget", asg_budget, "Maximum number of grid points");
  asg_cmd->add_option("--degree-cap", asg_degree, "Polynomial degree cap (1 = linear)");

  double vk_delta = 0.2;
  std::string vk_checkpoints = "1,4,16,64,252,1000";
  std::string vk_convention = "scaled-distance";
  std::size_t vk_resolution = 50;
  double vk_jitter = 0.0;
  auto* vk_cmd = surrogate->add_subcommand("vkoga", "Kernel greedy interpolation");
  add_surrogate_common(vk_cmd);
  vk_cmd->add_option("--delta", vk_delta, "Kernel shape parameter");
  vk_cmd->add_option("--n-checkpoints", vk_checkpoints, "Comma separated center counts");
  vk_cmd->add_option("--convention", vk_convention, "scaled-distance or scaled-radius")
      ->check(CLI::IsMember({"scaled-distance", "scaled-radius"}));
  vk_cmd->add_option("--resolution", vk_resolution, "Candidate grid points per axis");
  vk_cmd->add_option("--jitter", vk_jitter, "Diagonal regularization (default 0)");

  std::size_t hsg_nr = 1;
  std::size_t hsg_no = 1;
  std::size_t hsg_q = 0;
  bool hsg_split = false;
  double hsg_tolerance = 0.5;
  auto* hsg_cmd = surrogate->add_subcommand("hsg", "Hybrid stochastic Galerkin");
  add_surrogate_common(hsg_cmd);
  hsg_cmd->add_option("--nr", hsg_nr, "Stochastic refinement level");
  hsg_cmd->add_option("--no", hsg_no, "Maximal polynomial order");
  hsg_cmd->add_option("--quadrature", hsg_q, "Gauss points per dimension (0: order + 2)");
  hsg_cmd->add_flag("--porosity-split", hsg_split, "Two runs on the halves of the porosity range");
  hsg_cmd->add_option("--node-tolerance", hsg_tolerance,
                      "Allowed node saturation overshoot outside [0, 1]");

  // benchmark / report
  std::string plan_file;
  auto* benchmark = app.add_subcommand("benchmark", "Run a JSON benchmark plan");
  benchmark->add_option("--plan", plan_file, "Plan JSON")->required()->check(CLI::ExistingFile);
  std::string report_dir;
  auto* report = app.add_subcommand("report", "Print convergence.csv of a benchmark output");
  report->add_option("--in", report_dir, "Benchmark output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) {
      const auto cfg = sim_common.scenario();
      const auto field = solver::simulate(omega, cfg, sim_common.settings());
      const auto grid = solver::Grid::uniform(cfg);
      CsvWriter out(ensure_parent(sim_out), {"r_center", "saturation"});
      for (std::size_t j = 0; j < grid.n_cells; ++j) out.row({grid.r_centers[j], field.values[j]});
      std::cout << "saturation: " << sim_out << " (" << grid.n_cells << " cells, t = "
                << field.time / physics::kSecondsPerDay << " d)\n";
    } else if (*generate) {
      const auto set = stochastic::generate_samples(stochastic::DistributionSpec::synthetic_default(),
                                                    gen_n, gen_seed);
      stochastic::save_samples(set, ensure_parent(gen_out));
      std::cout << "samples: " << gen_out << " (" << set.size() << " draws, seed " << gen_seed
                << ")\n";
    } else if (*inspect) {
      const auto set = stochastic::load_samples(inspect_file);
      std::cout << "samples: " << set.size() << '\n';
      const auto box = stochastic::bounding_box(set);
      for (std::size_t d = 0; d < stochastic::kDims; ++d) {
        const auto m = stochastic::raw_moments(set, d + 1, 2);
        const double var = std::max(0.0, m[2] - m[1] * m[1]);
        std::printf("omega%zu  min %.6g  max %.6g  mean %.6g  std %.6g\n", d + 1, box.lower[d],
                    box.upper[d], m[1], std::sqrt(var));
      }
    } else if (*reference) {
      auto runner = ref_common.runner();
      const auto set = stochastic::load_samples(ref_samples);
      const auto moments = reference::run_reference(set, runner);
      report_moments(moments, ref_out);
      std::cout << "solver runs: " << runner.solver_invocations() << '\n';
    } else if (*surrogate) {
      auto runner = sur_common.runner();
      const auto set = stochastic::load_samples(sur_samples);
      const fs::path dir(out_dir);
      fs::create_directories(dir);
      const double t = runner.end_time();
      if (*apc_cmd) {
        RunTracker tracker;
        const auto s = apc_variant == "pcm" ? apc::build_pcm(set, apc_order, runner, &tracker)
                                            : apc::build_ft(set, apc_order, runner, &tracker);
        for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
        const std::string stem = "apc_" + apc_variant + "_order-" + std::to_string(apc_order);
        io::save_pce(s, dir / (stem + ".json"));
        report_moments(apc::pce_moments(s, set, runner.grid(), t), dir / (stem + "_moments.csv"));
        std::cout << "model runs: " << tracker.distinct() << '\n';
      } else if (*asg_cmd) {
        sparsegrid::AdaptiveOptions options;
        options.variant = sparsegrid::parse_variant(asg_variant);
        options.budget = asg_budget;
        options.degree_cap = asg_degree;
        RunTracker tracker;
        const auto result = sparsegrid::adaptive_loop(set, options, runner, &tracker);
        const auto& s = result.final_surrogate();
        const std::string stem = "asg_" + asg_variant + "_budget-" + std::to_string(asg_budget);
        io::save_sparse_grid(s, dir / (stem + ".json"));
        CsvWriter log(dir / (stem + "_log.csv"), {"iteration", "grid_size", "error_mean", "error_std"});
        for (const auto& entry : result.log) {
          log.text_row({std::to_string(entry.iteration), std::to_string(entry.grid_size), "", ""});
        }
        report_moments(sparsegrid::sg_moments(s, set, runner.grid(), t),
                       dir / (stem + "_moments.csv"));
        std::cout << "grid points: " << s.grid.size() << '\n';
      } else if (*vk_cmd) {
        const auto candidates = vkoga::build_candidates(set, vk_resolution);
        std::cout << "candidates: " << candidates.points.size() << " (hull facets "
                  << candidates.hull_facets << ")\n";
        const auto entries = vkoga::schedule_run(set, candidates, {vk_delta},
                                                 parse_list(vk_checkpoints), runner,
                                                 vkoga::parse_convention(vk_convention),
                                                 vk_jitter);
        for (const auto& e : entries) {
          char stem[96];
          std::snprintf(stem, sizeof stem, "vkoga_delta-%g_n-%zu", e.delta, e.requested_n);
          io::save_kernel_model(e.model, dir / (std::string(stem) + ".json"));
          report_moments(vkoga::kernel_moments(e.model, set, runner.grid(), t),
                         dir / (std::string(stem) + "_moments.csv"));
        }
      } else if (*hsg_cmd) {
        hsg::HsgOptions options;
        options.nr = hsg_nr;
        options.no = hsg_no;
        options.quadrature = hsg_q;
        options.porosity_split = hsg_split;
        options.node_tolerance = hsg_tolerance;
        const auto s = hsg::build_hsg(set, options, runner.scenario(), runner.settings(),
                                      runner.pool());
        const std::string stem = "hsg_nr-" + std::to_string(hsg_nr) + "_no-" + std::to_string(hsg_no);
        io::save_hsg(s, dir / (stem + ".json"));
        report_moments(hsg::reconstruct_moments(s, set, runner.grid()), dir / (stem + "_moments.csv"));
        std::cout << "stochastic elements: " << s.cost() << " (unknowns per cell "
                  << hsg::basis_count(hsg_nr, hsg_no) << ")\n";
      }
    } else if (*benchmark) {
      const auto plan = harness::load_plan(plan_file);
      const auto result = harness::run_benchmark(plan);
      std::cout << "reports: " << result.reports.size() << ", failures: " << result.failures.size()
                << ", solver runs: " << result.solver_invocations << '\n'
                << "output: " << plan.out_dir.string() << '\n';
      for (const auto& f : result.failures) {
        std::cerr << "failed " << f.method << ' ' << f.variant << ' ' << f.parameter << ": "
                  << f.message << '\n';
      }
      if (!result.failures.empty()) return kExitNumeric;
    } else if (*report) {
      const auto rows = harness::read_convergence(fs::path(report_dir) / "convergence.csv");
      std::printf("%-6s %-16s %-22s %8s %14s %14s\n", "method", "variant", "parameter", "cost",
                  "error_mean", "error_std");
      for (const auto& r : rows) {
        std::printf("%-6s %-16s %-22s %8zu %14.6e %14.6e\n", r.method.c_str(), r.variant.c_str(),
                    r.parameter.c_str(), r.cost, r.errors.mean, r.errors.std);
      }
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
