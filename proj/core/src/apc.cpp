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

#include "uqbench/apc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "uqbench/errors.hpp"

namespace uqbench::apc {

namespace {

using Real = long double;

// Gaussian elimination with row equilibration and partial pivoting.
std::vector<Real> solve_dense(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    Real row_max = 0;
    for (Real v : a[i]) row_max = std::max(row_max, std::abs(v));
    if (row_max == 0) throw NumericError("moment matrix has a zero row");
    for (Real& v : a[i]) v /= row_max;
    b[i] /= row_max;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0) throw NumericError("moment matrix is singular");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real factor = a[r][col] / a[col][col];
      if (factor == 0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Real acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

void require_positive_definite_hankel(std::span<const double> moments, std::size_t order) {
  const std::size_t n = order + 1;
  std::vector<std::vector<Real>> l(n, std::vector<Real>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Real acc = static_cast<Real>(moments[i + j]);
      for (std::size_t k = 0; k < j; ++k) acc -= l[i][k] * l[j][k];
      if (i == j) {
        const Real scale = std::max<Real>(std::abs(static_cast<Real>(moments[2 * i])), 1);
        if (!(acc > scale * 1e-16L)) {
          std::ostringstream msg;
          msg << "moment (Hankel) matrix is not positive definite at degree " << i
              << "; the sample data cannot support expansion order " << order
              << ", use a lower order";
          throw NumericError(msg.str());
        }
        l[i][i] = std::sqrt(acc);
      } else {
        l[i][j] = acc / l[j][j];
      }
    }
  }
}

Real horner(const std::vector<Real>& c, Real z) {
  Real acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

double silverman_bandwidth(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / std::max(1.0, n - 1.0));
  const double h = 1.06 * sd * std::pow(n, -0.2);
  return h > 0.0 ? h : 1.0;
}

double gaussian_kde(const std::vector<double>& values, double h, double x) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  double acc = 0.0;
  for (double v : values) {
    const double u = (x - v) / h;
    acc += std::exp(-0.5 * u * u);
  }
  return acc * kInvSqrt2Pi / (static_cast<double>(values.size()) * h);
}

Eigen::MatrixXd output_matrix(const std::vector<std::vector<double>>& outputs) {
  if (outputs.empty()) throw ConfigError("no model outputs to fit");
  const std::size_t width = outputs.front().size();
  Eigen::MatrixXd y(static_cast<Eigen::Index>(outputs.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].size() != width) throw ConfigError("model outputs differ in length");
    for (std::size_t j = 0; j < width; ++j) {
      y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = outputs[i][j];
    }
  }
  return y;
}

}  // namespace

double OrthonormalBasis1D::evaluate(std::size_t degree, double x) const {
  const double z = (x - shift) / scale;
  const auto& c = coefficients.at(degree);
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

void OrthonormalBasis1D::evaluate_all(double x, std::span<double> out) const {
  const double z = (x - shift) / scale;
  for (std::size_t d = 0; d <= order && d < out.size(); ++d) {
    const auto& c = coefficients[d];
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    out[d] = acc;
  }
}

std::vector<double> OrthonormalBasis1D::roots() const {
  const auto& top = coefficients.at(order);
  const std::size_t n = order;
  std::vector<double> out;
  if (n == 0) return out;
  std::vector<Real> monic(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    monic[k] = static_cast<Real>(top[k]) / static_cast<Real>(top[n]);
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) =
        -static_cast<double>(monic[i]);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
  std::vector<Real> derivative(n);
  for (std::size_t k = 1; k <= n; ++k) derivative[k - 1] = monic[k] * static_cast<Real>(k);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    Real z = eig.eigenvalues()[i].real();
    for (int it = 0; it < 8; ++it) {
      const Real d = horner(derivative, z);
      if (d == 0) break;
      const Real step = horner(monic, z) / d;
      z -= step;
      if (std::abs(step) <= 1e-18L * std::max<Real>(1, std::abs(z))) break;
    }
    out.push_back(shift + scale * static_cast<double>(z));
  }
  std::sort(out.begin(), out.end());
  return out;
}

OrthonormalBasis1D build_basis(std::span<const double> moments, std::size_t order) {
  if (moments.size() < 2 * order + 1) {
    throw ConfigError("order " + std::to_string(order) + " needs " +
                      std::to_string(2 * order + 1) + " raw moments");
  }
  require_positive_definite_hankel(moments, order);
  OrthonormalBasis1D basis;
  basis.order = order;
  basis.coefficients.resize(order + 1);
  for (std::size_t k = 0; k <= order; ++k) {
    // Rows 0..k-1: orthogonality to x^0..x^{k-1}; last row fixes the leading coefficient.
    std::vector<std::vector<Real>> a(k + 1, std::vector<Real>(k + 1, 0));
    std::vector<Real> rhs(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j <= k; ++j) a[i][j] = static_cast<Real>(moments[i + j]);
    }
    a[k][k] = 1;
    rhs[k] = 1;
    const std::vector<Real> p = solve_dense(std::move(a), std::move(rhs));
    Real norm2 = 0;
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = 0; j <= k; ++j) norm2 += p[i] * p[j] * static_cast<Real>(moments[i + j]);
    }
    if (!(norm2 > 0) || !std::isfinite(static_cast<double>(norm2))) {
      throw NumericError("degree-" + std::to_string(k) +
                         " polynomial has nonpositive norm; use a lower order");
    }
    const Real inv = 1 / std::sqrt(norm2);
    auto& row = basis.coefficients[k];
    row.resize(k + 1);
    for (std::size_t i = 0; i <= k; ++i) row[i] = static_cast<double>(p[i] * inv);
  }
  return basis;
}

OrthonormalBasis1D build_basis_from_samples(std::span<const double> values, std::size_t order) {
  if (values.empty()) throw ConfigError("cannot build a basis from no samples");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd > 0.0)) {
    if (order > 0) throw NumericError("degenerate (constant) samples support only order 0");
    OrthonormalBasis1D basis;
    basis.coefficients = {{1.0}};
    basis.shift = mean;
    return basis;
  }
  std::vector<double> standardized(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) standardized[i] = (values[i] - mean) / sd;
  const auto moments = stochastic::raw_moments(standardized, 2 * order);
  OrthonormalBasis1D basis = build_basis(moments, order);
  basis.shift = mean;
  basis.scale = sd;
  return basis;
}

std::vector<MultiIndex> total_degree_set(std::size_t order) {
  std::vector<MultiIndex> out;
  const int n = static_cast<int>(order);
  for (int total = 0; total <= n; ++total) {
    for (int a = total; a >= 0; --a) {
      for (int b = total - a; b >= 0; --b) out.push_back({a, b, total - a - b});
    }
  }
  return out;
}

std::size_t basis_size(std::size_t order, std::size_t dims) {
  // C(order + dims, dims) computed incrementally to stay exact.
  std::size_t result = 1;
  for (std::size_t k = 1; k <= dims; ++k) result = result * (order + k) / k;
  return result;
}

Bases build_bases(const stochastic::SampleSet& set, std::size_t order) {
  Bases bases;
  for (std::size_t d = 0; d < 3; ++d) {
    bases[d] = build_basis_from_samples(set.column(d), order);
  }
  return bases;
}

Eigen::MatrixXd design_matrix(const Bases& bases, const std::vector<MultiIndex>& indices,
                              std::span<const UncertainInput> nodes) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(nodes.size()),
                    static_cast<Eigen::Index>(indices.size()));
  std::array<std::vector<double>, 3> values;
  for (std::size_t d = 0; d < 3; ++d) values[d].resize(bases[d].order + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      bases[d].evaluate_all(stochastic::coordinate(nodes[i], d), values[d]);
    }
    for (std::size_t j = 0; j < indices.size(); ++j) {
      const auto& m = indices[j];
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          values[0][static_cast<std::size_t>(m[0])] * values[1][static_cast<std::size_t>(m[1])] *
          values[2][static_cast<std::size_t>(m[2])];
    }
  }
  return a;
}

std::vector<double> PceSurrogate::evaluate(const UncertainInput& omega) const {
  const Eigen::MatrixXd y = evaluate_many(std::span<const UncertainInput>(&omega, 1));
  return {y.data(), y.data() + y.size()};
}

Eigen::MatrixXd PceSurrogate::evaluate_many(std::span<const UncertainInput> inputs) const {
  const Eigen::MatrixXd psi = design_matrix(bases, indices, inputs);
  return coefficients.transpose() * psi.transpose();
}

MomentField PceSurrogate::analytic_moments(const solver::Grid& grid, double t) const {
  MomentField field;
  field.r_centers = grid.r_centers;
  field.dr = grid.dr;
  field.t = t;
  const auto n = coefficients.cols();
  field.mean.resize(static_cast<std::size_t>(n));
  field.std.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    field.mean[static_cast<std::size_t>(j)] = coefficients(0, j);
    const double var = coefficients.col(j).tail(coefficients.rows() - 1).squaredNorm();
    field.std[static_cast<std::size_t>(j)] = std::sqrt(var);
  }
  return field;
}

std::vector<UncertainInput> tensor_points(const Bases& bases, std::size_t order) {
  std::array<std::vector<double>, 3> roots;
  for (std::size_t d = 0; d < 3; ++d) {
    if (bases[d].order < order + 1) {
      throw ConfigError("collocation nodes need bases of order " + std::to_string(order + 1));
    }
    OrthonormalBasis1D truncated = bases[d];
    truncated.order = order + 1;
    truncated.coefficients.resize(order + 2);
    roots[d] = truncated.roots();
  }
  std::vector<UncertainInput> nodes;
  for (double a : roots[0]) {
    for (double b : roots[1]) {
      for (double c : roots[2]) nodes.push_back({a, b, c});
    }
  }
  return nodes;
}

std::vector<UncertainInput> pcm_points(const Bases& bases, std::size_t order,
                                       const stochastic::SampleSet& set) {
  const std::vector<UncertainInput> grid = tensor_points(bases, order);
  const std::size_t needed = basis_size(order);
  if (grid.size() < needed) throw NumericError("not enough tensor combinations of roots");
  std::array<std::vector<double>, 3> columns;
  std::array<double, 3> bandwidth{};
  for (std::size_t d = 0; d < 3; ++d) {
    columns[d] = set.column(d);
    bandwidth[d] = silverman_bandwidth(columns[d]);
  }
  std::vector<double> score(grid.size(), 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      score[i] *= gaussian_kde(columns[d], bandwidth[d], stochastic::coordinate(grid[i], d));
    }
  }
  std::vector<std::size_t> order_idx(grid.size());
  std::iota(order_idx.begin(), order_idx.end(), 0);
  // Grid is generated in lexicographic root order, so the index breaks ties.
  std::stable_sort(order_idx.begin(), order_idx.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  // Walk the ranking and keep a node only if its design row is independent
  // of the rows kept so far; the plain top-ranked set can be unisolvent-deficient.
  const std::vector<MultiIndex> indices = total_degree_set(order);
  std::vector<Eigen::VectorXd> kept_rows;
  std::vector<UncertainInput> nodes;
  for (std::size_t k = 0; k < grid.size() && nodes.size() < needed; ++k) {
    const UncertainInput& node = grid[order_idx[k]];
    Eigen::VectorXd row = design_matrix(bases, indices, std::span<const UncertainInput>(&node, 1))
                              .row(0)
                              .transpose();
    const double norm = row.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept_rows) row -= q.dot(row) * q;
    }
    if (row.norm() <= 1e-8 * norm) continue;
    kept_rows.push_back(row / row.norm());
    nodes.push_back(node);
  }
  if (nodes.size() < needed) {
    throw NumericError("only " + std::to_string(nodes.size()) + " of " + std::to_string(needed) +
                       " collocation nodes are linearly independent");
  }
  return nodes;
}

PceSurrogate fit_pcm(const Bases& bases, std::size_t order, std::span<const UncertainInput> nodes,
                     const std::vector<std::vector<double>>& outputs) {
  PceSurrogate s;
  s.bases = bases;
  s.order = order;
  s.variant = "pcm";
  s.indices = total_degree_set(order);
  if (nodes.size() != s.indices.size() || outputs.size() != nodes.size()) {
    throw ConfigError("collocation needs exactly one node and one output per basis function");
  }
  s.nodes.assign(nodes.begin(), nodes.end());
  const Eigen::MatrixXd a = design_matrix(bases, s.indices, nodes);
  const Eigen::MatrixXd y = output_matrix(outputs);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  s.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                               : std::numeric_limits<double>::infinity();
  if (s.condition_number > 1e12) {
    std::ostringstream msg;
    msg << "collocation matrix is ill-conditioned (condition " << s.condition_number << ")";
    s.warnings.push_back(msg.str());
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw NumericError("collocation matrix is singular");
  s.coefficients = lu.solve(y);
  s.residual_norm = (a * s.coefficients - y).norm();
  return s;
}

PceSurrogate fit_least_squares_ft(const Bases& bases, std::size_t order,
                                  std::span<const UncertainInput> nodes,
                                  const std::vector<std::vector<double>>& outputs) {
  PceSurrogate s;
  s.bases = bases;
  s.order = order;
  s.variant = "ft";
  s.indices = total_degree_set(order);
  if (outputs.size() != nodes.size()) throw ConfigError("one output per node required");
  s.nodes.assign(nodes.begin(), nodes.end());
  const Eigen::MatrixXd a = design_matrix(bases, s.indices, nodes);
  const Eigen::MatrixXd y = output_matrix(outputs);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < static_cast<Eigen::Index>(s.indices.size())) {
    throw NumericError("least-squares design matrix is rank deficient (rank " +
                       std::to_string(qr.rank()) + " < " + std::to_string(s.indices.size()) + ")");
  }
  s.coefficients = qr.solve(y);
  s.residual_norm = (a * s.coefficients - y).norm();
  const double smax = qr.maxPivot();
  const double smin = std::abs(qr.matrixQR()(qr.rank() - 1, qr.rank() - 1));
  s.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  return s;
}

MomentField pce_moments(const PceSurrogate& surrogate, const stochastic::SampleSet& set,
                        const solver::Grid& grid, double t, bool clamp) {
  MomentAccumulator acc(grid.n_cells);
  constexpr std::size_t kChunk = 2048;
  for (std::size_t begin = 0; begin < set.samples.size(); begin += kChunk) {
    const std::size_t end = std::min(set.samples.size(), begin + kChunk);
    const Eigen::MatrixXd y = surrogate.evaluate_many(
        std::span<const UncertainInput>(set.samples.data() + begin, end - begin));
    for (Eigen::Index i = 0; i < y.cols(); ++i) {
      acc.add(std::span<const double>(y.col(i).data(), static_cast<std::size_t>(y.rows())), clamp);
    }
  }
  return acc.finish(grid, t);
}

PceSurrogate build_pcm(const stochastic::SampleSet& set, std::size_t order, ModelRunner& runner,
                       RunTracker* tracker) {
  if (order > kMaxPcmOrder) {
    throw ConfigError("PCM order is capped at " + std::to_string(kMaxPcmOrder));
  }
  const Bases bases = build_bases(set, order + 1);
  const auto nodes = pcm_points(bases, order, set);
  const auto outputs = runner.run(nodes, tracker);
  return fit_pcm(bases, order, nodes, outputs);
}

PceSurrogate build_ft(const stochastic::SampleSet& set, std::size_t order, ModelRunner& runner,
                      RunTracker* tracker) {
  if (order > kMaxFtOrder) {
    throw ConfigError("full-tensor order is capped at " + std::to_string(kMaxFtOrder));
  }
  const Bases bases = build_bases(set, order + 1);
  const auto nodes = tensor_points(bases, order);
  const auto outputs = runner.run(nodes, tracker);
  return fit_least_squares_ft(bases, order, nodes, outputs);
}

}  // namespace uqbench::apc
