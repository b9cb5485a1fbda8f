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

#include "uqbench/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uqbench/errors.hpp"

namespace uqbench::io {

namespace {

using nlohmann::json;

constexpr double kPascalPerBar = 1.0e5;

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path.string());
}

void write_json(const json& doc, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

void expect_format(const json& doc, const std::string& format, const std::filesystem::path& path) {
  if (!doc.is_object() || doc.value("format", std::string()) != format) {
    throw ParseError(path.string() + " is not a " + format + " document");
  }
}

template <typename T>
T get(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

json box_json(const stochastic::Box& box) {
  return {{"lower", box.lower}, {"upper", box.upper}};
}

stochastic::Box box_from(const json& j) {
  stochastic::Box box;
  box.lower = get<std::array<double, 3>>(j, "lower");
  box.upper = get<std::array<double, 3>>(j, "upper");
  return box;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from(const json& rows) {
  const auto data = rows.get<std::vector<std::vector<double>>>();
  const std::size_t cols = data.empty() ? 0 : data.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].size() != cols) throw ParseError("ragged coefficient matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i][j];
    }
  }
  return m;
}

struct ScenarioKey {
  const char* name;
  double physics::ScenarioConfig::*field;
  double unit;  // SI value = document value * unit
};

const ScenarioKey kScenarioKeys[] = {
    {"CO2 density", &physics::ScenarioConfig::rho_g, 1.0},
    {"Brine density", &physics::ScenarioConfig::rho_w, 1.0},
    {"CO2 viscosity", &physics::ScenarioConfig::mu_n, 1.0},
    {"Brine viscosity", &physics::ScenarioConfig::mu_w, 1.0},
    {"Aquifer permeability", &physics::ScenarioConfig::K_A, 1.0},
    {"Porosity", &physics::ScenarioConfig::phi0, 1.0},
    {"Brine residual saturation", &physics::ScenarioConfig::Sr_w, 1.0},
    {"CO2 residual saturation", &physics::ScenarioConfig::Sr_n, 1.0},
    {"Injection well radius", &physics::ScenarioConfig::well_radius, 1.0},
    {"Injection rate", &physics::ScenarioConfig::Q, 1.0 / physics::kSecondsPerDay},
    {"Dimension of model domain", &physics::ScenarioConfig::r_max, 1.0},
    {"Simulation time", &physics::ScenarioConfig::T_end, physics::kSecondsPerDay},
    {"Saturation on the left boundary", &physics::ScenarioConfig::S_left, 1.0},
    {"Injection pressure", &physics::ScenarioConfig::p_max, kPascalPerBar},
    {"Pressure right boundary", &physics::ScenarioConfig::p_min, kPascalPerBar},
    {"Mean mobility value", &physics::ScenarioConfig::lambda_mean, 1.0},
};

}  // namespace

physics::ScenarioConfig scenario_from_json(const std::string& text) {
  const json doc = parse_text(text, "scenario");
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
  physics::ScenarioConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "Number of cells") {
      if (!value.is_number_integer() || value.get<long long>() < 2) {
        throw ConfigError("'Number of cells' must be an integer >= 2");
      }
      cfg.n_cells = value.get<std::size_t>();
      continue;
    }
    bool known = false;
    for (const auto& k : kScenarioKeys) {
      if (key != k.name) continue;
      if (!value.is_number()) throw ConfigError("scenario key '" + key + "' must be a number");
      cfg.*(k.field) = value.get<double>() * k.unit;
      known = true;
      break;
    }
    if (!known) throw ConfigError("unknown scenario key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

physics::ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json(path).dump());
}

std::string scenario_to_json(const physics::ScenarioConfig& cfg) {
  json doc = json::object();
  for (const auto& k : kScenarioKeys) doc[k.name] = cfg.*(k.field) / k.unit;
  doc["Number of cells"] = cfg.n_cells;
  return doc.dump(1);
}

solver::SolverConfig solver_from_json(const std::string& text) {
  const json doc = parse_text(text, "solver settings");
  if (!doc.is_object()) throw ConfigError("solver settings must be a JSON object");
  solver::SolverConfig s;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) throw ConfigError("solver key '" + key + "' must be a number");
    if (key == "cfl") {
      s.cfl = value.get<double>();
    } else if (key == "limiter_theta") {
      s.limiter_theta = value.get<double>();
    } else if (key == "t_end_days") {
      s.t_end = value.get<double>() * physics::kSecondsPerDay;
    } else if (key == "source_rate") {
      s.source_rate = value.get<double>();
    } else {
      throw ConfigError("unknown solver key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

void save_pce(const apc::PceSurrogate& s, const std::filesystem::path& path) {
  json doc;
  doc["format"] = "uqbench-pce";
  doc["version"] = 1;
  doc["variant"] = s.variant;
  doc["order"] = s.order;
  json bases = json::array();
  for (const auto& b : s.bases) {
    bases.push_back({{"order", b.order}, {"shift", b.shift}, {"scale", b.scale},
                     {"coefficients", b.coefficients}});
  }
  doc["bases"] = bases;
  doc["indices"] = s.indices;
  doc["coefficients"] = matrix_rows(s.coefficients);
  json nodes = json::array();
  for (const auto& n : s.nodes) nodes.push_back({n.omega1, n.omega2, n.omega3});
  doc["nodes"] = nodes;
  doc["condition_number"] = s.condition_number;
  doc["residual_norm"] = s.residual_norm;
  doc["warnings"] = s.warnings;
  write_json(doc, path);
}

apc::PceSurrogate load_pce(const std::filesystem::path& path) {
  const json doc = read_json(path);
  expect_format(doc, "uqbench-pce", path);
  apc::PceSurrogate s;
  s.variant = get<std::string>(doc, "variant");
  s.order = get<std::size_t>(doc, "order");
  const auto& bases = doc.at("bases");
  if (!bases.is_array() || bases.size() != 3) throw ParseError("expected three bases");
  for (std::size_t d = 0; d < 3; ++d) {
    s.bases[d].order = get<std::size_t>(bases[d], "order");
    s.bases[d].shift = get<double>(bases[d], "shift");
    s.bases[d].scale = get<double>(bases[d], "scale");
    s.bases[d].coefficients = get<std::vector<std::vector<double>>>(bases[d], "coefficients");
  }
  s.indices = get<std::vector<apc::MultiIndex>>(doc, "indices");
  s.coefficients = matrix_from(doc.at("coefficients"));
  for (const auto& n : get<std::vector<std::array<double, 3>>>(doc, "nodes")) {
    s.nodes.push_back({n[0], n[1], n[2]});
  }
  s.condition_number = get<double>(doc, "condition_number");
  s.residual_norm = get<double>(doc, "residual_norm");
  s.warnings = get<std::vector<std::string>>(doc, "warnings");
  if (static_cast<std::size_t>(s.coefficients.rows()) != s.indices.size()) {
    throw ParseError("coefficient rows do not match the multi-indices");
  }
  return s;
}

void save_sparse_grid(const sparsegrid::SparseGridSurrogate& s, const std::filesystem::path& path) {
  json doc;
  doc["format"] = "uqbench-sparse-grid";
  doc["version"] = 1;
  doc["variant"] = sparsegrid::variant_name(s.grid.variant());
  doc["dim"] = s.grid.dim();
  doc["degree_cap"] = s.grid.degree_cap();
  doc["box"] = box_json(s.box);
  json points = json::array();
  for (const auto& li : s.grid.points()) points.push_back({{"level", li.level}, {"index", li.index}});
  doc["points"] = points;
  doc["surpluses"] = s.surpluses;
  write_json(doc, path);
}

sparsegrid::SparseGridSurrogate load_sparse_grid(const std::filesystem::path& path) {
  const json doc = read_json(path);
  expect_format(doc, "uqbench-sparse-grid", path);
  sparsegrid::SparseGridSurrogate s;
  s.grid = sparsegrid::SparseGrid(get<std::size_t>(doc, "dim"),
                                  sparsegrid::parse_variant(get<std::string>(doc, "variant")),
                                  get<int>(doc, "degree_cap"));
  s.box = box_from(doc.at("box"));
  for (const auto& p : doc.at("points")) {
    sparsegrid::LevelIndex li;
    li.level = get<std::array<int, 3>>(p, "level");
    li.index = get<std::array<int, 3>>(p, "index");
    s.grid.add(li);
  }
  s.surpluses = get<std::vector<std::vector<double>>>(doc, "surpluses");
  if (s.surpluses.size() != s.grid.size()) throw ParseError("one surplus vector per grid point");
  return s;
}

void save_kernel_model(const vkoga::KernelModel& m, const std::filesystem::path& path) {
  json doc;
  doc["format"] = "uqbench-kernel-model";
  doc["version"] = 1;
  doc["kernel"] = {{"family", "wendland-c2"},
                   {"delta", m.kernel.delta},
                   {"convention", vkoga::convention_name(m.kernel.convention)},
                   {"jitter", m.kernel.jitter}};
  doc["box"] = box_json(m.box);
  doc["centers"] = m.centers;
  doc["alpha"] = matrix_rows(m.alpha);
  write_json(doc, path);
}

vkoga::KernelModel load_kernel_model(const std::filesystem::path& path) {
  const json doc = read_json(path);
  expect_format(doc, "uqbench-kernel-model", path);
  vkoga::KernelModel m;
  const json& kernel = doc.at("kernel");
  if (get<std::string>(kernel, "family") != "wendland-c2") throw ParseError("unsupported kernel");
  m.kernel.delta = get<double>(kernel, "delta");
  m.kernel.convention = vkoga::parse_convention(get<std::string>(kernel, "convention"));
  m.kernel.jitter = kernel.value("jitter", 0.0);
  m.box = box_from(doc.at("box"));
  m.centers = get<std::vector<vkoga::Point3>>(doc, "centers");
  m.alpha = matrix_from(doc.at("alpha"));
  if (static_cast<std::size_t>(m.alpha.rows()) != m.centers.size()) {
    throw ParseError("one coefficient row per center");
  }
  return m;
}

void save_hsg(const hsg::HsgSurrogate& s, const std::filesystem::path& path) {
  json doc;
  doc["format"] = "uqbench-hsg";
  doc["version"] = 1;
  doc["nr"] = s.options.nr;
  doc["no"] = s.options.no;
  doc["quadrature"] = s.options.quadrature_order();
  doc["porosity_split"] = s.options.porosity_split;
  doc["node_tolerance"] = s.options.node_tolerance;
  json parts = json::array();
  for (const auto& p : s.parts) {
    json elements = json::array();
    for (const auto& c : p.coefficients) elements.push_back(matrix_rows(c));
    parts.push_back({{"box", box_json(p.box)},
                     {"n_cells", p.n_cells},
                     {"time", p.time},
                     {"element_steps", p.element_steps},
                     {"coefficients", elements}});
  }
  doc["parts"] = parts;
  write_json(doc, path);
}

hsg::HsgSurrogate load_hsg(const std::filesystem::path& path) {
  const json doc = read_json(path);
  expect_format(doc, "uqbench-hsg", path);
  hsg::HsgSurrogate s;
  s.options.nr = get<std::size_t>(doc, "nr");
  s.options.no = get<std::size_t>(doc, "no");
  s.options.quadrature = get<std::size_t>(doc, "quadrature");
  s.options.porosity_split = get<bool>(doc, "porosity_split");
  s.options.node_tolerance = doc.value("node_tolerance", 0.5);
  const hsg::HsgBasis basis(s.options.nr, s.options.no);
  for (const auto& p : doc.at("parts")) {
    hsg::HsgState state;
    state.nr = s.options.nr;
    state.no = s.options.no;
    state.box = box_from(p.at("box"));
    state.n_cells = get<std::size_t>(p, "n_cells");
    state.time = get<double>(p, "time");
    state.element_steps = get<std::vector<std::size_t>>(p, "element_steps");
    for (const auto& e : p.at("coefficients")) state.coefficients.push_back(matrix_from(e));
    if (state.coefficients.size() != basis.n_elements()) {
      throw ParseError("expected one coefficient block per stochastic element");
    }
    s.parts.push_back(std::move(state));
  }
  if (s.parts.empty()) throw ParseError("stochastic Galerkin state has no parts");
  return s;
}

}  // namespace uqbench::io
