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

#include "uqbench/run_cache.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "uqbench/errors.hpp"

namespace uqbench {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
constexpr std::uint32_t kCacheVersion = 1;
constexpr char kMagic[4] = {'U', 'Q', 'R', 'C'};

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= kFnvPrime;
    }
  }
  void real(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    bytes(&bits, sizeof bits);
  }
  void integer(std::uint64_t v) { bytes(&v, sizeof v); }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = kFnvOffset;
};

}  // namespace

std::uint64_t config_hash(const ScenarioConfig& cfg, const SolverConfig& scfg) {
  Fnv1a h;
  h.integer(kCacheVersion);
  for (double v : {cfg.rho_g, cfg.rho_w, cfg.mu_n, cfg.mu_w, cfg.K_A, cfg.phi0, cfg.Sr_w,
                   cfg.Sr_n, cfg.Q, cfg.r_min, cfg.r_max, cfg.S_left, cfg.p_max, cfg.p_min,
                   cfg.lambda_mean}) {
    h.real(v);
  }
  h.integer(cfg.n_cells);
  h.real(scfg.end_time(cfg));
  h.real(scfg.cfl);
  h.real(scfg.limiter_theta);
  h.real(scfg.source_rate);
  return h.value();
}

std::uint64_t run_key(const UncertainInput& omega, std::uint64_t config_digest) {
  Fnv1a h;
  h.integer(config_digest);
  h.real(omega.omega1);
  h.real(omega.omega2);
  h.real(omega.omega3);
  return h.value();
}

std::string hex_digest(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

RunCache::RunCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
}

std::filesystem::path RunCache::file_for(std::uint64_t key) const {
  return *dir_ / (hex_digest(key) + ".run");
}

std::optional<std::vector<double>> RunCache::find(std::uint64_t key, const UncertainInput& omega) {
  if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  if (!dir_) return std::nullopt;
  std::ifstream in(file_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::uint32_t version = 0;
  std::uint32_t length = 0;
  std::array<double, 3> stored{};
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  in.read(reinterpret_cast<char*>(stored.data()), sizeof(double) * 3);
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kCacheVersion) return std::nullopt;
  if (stored[0] != omega.omega1 || stored[1] != omega.omega2 || stored[2] != omega.omega3) {
    return std::nullopt;  // digest collision
  }
  std::vector<double> values(length);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(sizeof(double) * length));
  if (!in) return std::nullopt;
  memory_.emplace(key, values);
  return values;
}

void RunCache::store(std::uint64_t key, const UncertainInput& omega,
                     const std::vector<double>& values) {
  memory_[key] = values;
  if (!dir_) return;
  const auto path = file_for(key);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ParseError("cannot write cache entry " + tmp);
    const auto length = static_cast<std::uint32_t>(values.size());
    const std::array<double, 3> coords{omega.omega1, omega.omega2, omega.omega3};
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
    out.write(reinterpret_cast<const char*>(&length), sizeof length);
    out.write(reinterpret_cast<const char*>(coords.data()), sizeof(double) * 3);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(sizeof(double) * values.size()));
  }
  std::filesystem::rename(tmp, path);
}

ModelRunner::ModelRunner(const ScenarioConfig& cfg, const SolverConfig& scfg,
                         std::shared_ptr<RunCache> cache, WorkPool pool)
    : cfg_(cfg),
      scfg_(scfg),
      grid_(solver::Grid::uniform(cfg)),
      digest_(config_hash(cfg, scfg)),
      cache_(std::move(cache)),
      pool_(pool) {
  cfg_.validate();
  scfg_.validate();
  if (!cache_) cache_ = std::make_shared<RunCache>();
}

std::vector<std::vector<double>> ModelRunner::run(std::span<const UncertainInput> inputs,
                                                  RunTracker* tracker) {
  std::vector<std::vector<double>> outputs(inputs.size());
  std::vector<std::uint64_t> keys(inputs.size());
  // Misses are deduplicated by key; first occurrence owns the solve.
  std::unordered_map<std::uint64_t, std::size_t> pending;
  std::vector<std::size_t> to_solve;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    keys[i] = run_key(inputs[i], digest_);
    if (tracker) tracker->keys.insert(keys[i]);
    if (auto hit = cache_->find(keys[i], inputs[i])) {
      outputs[i] = std::move(*hit);
    } else if (pending.emplace(keys[i], i).second) {
      to_solve.push_back(i);
    }
  }

  std::vector<std::string> failures(to_solve.size());
  pool_.parallel_for(to_solve.size(), [&](std::size_t k) {
    const std::size_t i = to_solve[k];
    try {
      outputs[i] = solver::simulate(inputs[i], cfg_, scfg_).values;
      invocations_.fetch_add(1);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  });
  for (std::size_t k = 0; k < to_solve.size(); ++k) {
    if (!failures[k].empty()) {
      const auto& w = inputs[to_solve[k]];
      std::ostringstream msg;
      msg << "model run failed at omega = (" << w.omega1 << ", " << w.omega2 << ", " << w.omega3
          << "): " << failures[k];
      throw NumericError(msg.str());
    }
  }
  for (std::size_t i : to_solve) cache_->store(keys[i], inputs[i], outputs[i]);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (outputs[i].empty()) outputs[i] = outputs[pending.at(keys[i])];
  }
  return outputs;
}

std::vector<double> ModelRunner::run_one(const UncertainInput& omega, RunTracker* tracker) {
  return run(std::span<const UncertainInput>(&omega, 1), tracker).front();
}

}  // namespace uqbench
