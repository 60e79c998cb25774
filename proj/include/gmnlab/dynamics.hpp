// Copyright 2026 The gmnlab Authors
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

// Time sweeps of the genuine negativity under collective dephasing, the
// logarithmic derivative η = d ln E / d(Γt), and ensemble statistics.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gmnlab/channel.hpp"
#include "gmnlab/gmn.hpp"
#include "gmnlab/states.hpp"

namespace gmnlab {

/// E at or below this is treated as zero when taking logarithms.
inline constexpr double kEtaFloor = 1e-8;

/// Strictly increasing, non-negative Γt values.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> gt_values) : values_(std::move(gt_values)) {
    if (values_.empty()) throw std::invalid_argument("time grid is empty");
    if (values_.front() < 0.0) throw std::invalid_argument("time grid starts below 0");
    for (std::size_t k = 1; k < values_.size(); ++k) {
      if (!(values_[k] > values_[k - 1])) {
        throw std::invalid_argument("time grid is not strictly increasing at index " +
                                    std::to_string(k));
      }
    }
  }

  static TimeGrid uniform(double first, double last, int points) {
    if (points < 2) throw std::invalid_argument("uniform grid needs at least 2 points");
    std::vector<double> v(points);
    for (int k = 0; k < points; ++k) {
      v[k] = first + (last - first) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    v.back() = last;
    return TimeGrid(std::move(v));
  }

  /// 41 points on [0, 2].
  static TimeGrid standard() { return uniform(0.0, 2.0, 41); }

  /// 41 points on [0, 5].
  static TimeGrid long_horizon() { return uniform(0.0, 5.0, 41); }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

 private:
  std::vector<double> values_;
};

struct EntanglementSeries {
  TimeGrid grid;
  std::vector<double> e_values;
  std::vector<std::optional<double>> eta_values;
  std::vector<double> duality_gaps;
  std::vector<GmnStatus> statuses;
  std::string state_label;
};

struct EnsembleStats {
  TimeGrid grid;
  std::vector<double> mean;      // NaN where no sample has a defined η
  std::vector<double> variance;  // unbiased; 0 for a single sample
  std::vector<double> ci_low;    // mean - sqrt(variance)
  std::vector<double> ci_high;   // mean + sqrt(variance)
  std::vector<int> n_effective;
  int n = 0;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Rethrows the
/// exception of the lowest failing index.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = count;
  std::exception_ptr err;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(err_mutex);
            if (i < err_index) {
              err_index = i;
              err = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (err) std::rethrow_exception(err);
}

/// d ln E / d(Γt) by three-point finite differences (central inside, one-sided
/// second order at the ends; two-point for a two-point grid). Any stencil
/// touching E ≤ kEtaFloor yields an undefined entry.
inline std::vector<std::optional<double>> log_derivative(const TimeGrid& grid,
                                                         const std::vector<double>& e_values) {
  const std::size_t n = grid.size();
  if (e_values.size() != n) throw std::invalid_argument("series length does not match grid");
  std::vector<std::optional<double>> eta(n);
  if (n < 2) return eta;

  std::vector<std::optional<double>> ln(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (e_values[k] > kEtaFloor) ln[k] = std::log(e_values[k]);
  }
  const auto& t = grid.values();

  if (n == 2) {
    if (ln[0] && ln[1]) {
      const double d = (*ln[1] - *ln[0]) / (t[1] - t[0]);
      eta[0] = d;
      eta[1] = d;
    }
    return eta;
  }

  for (std::size_t k = 0; k < n; ++k) {
    // stencil start, clamped so the three points stay inside the grid
    const std::size_t s = k == 0 ? 0 : (k == n - 1 ? n - 3 : k - 1);
    if (!ln[s] || !ln[s + 1] || !ln[s + 2]) continue;
    const double h1 = t[s + 1] - t[s];
    const double h2 = t[s + 2] - t[s + 1];
    const double f0 = *ln[s];
    const double f1 = *ln[s + 1];
    const double f2 = *ln[s + 2];
    double d = 0.0;
    if (k == 0) {
      d = -(2 * h1 + h2) / (h1 * (h1 + h2)) * f0 + (h1 + h2) / (h1 * h2) * f1 -
          h1 / (h2 * (h1 + h2)) * f2;
    } else if (k == n - 1) {
      d = h2 / (h1 * (h1 + h2)) * f0 - (h1 + h2) / (h1 * h2) * f1 +
          (h1 + 2 * h2) / (h2 * (h1 + h2)) * f2;
    } else {
      d = -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
    }
    eta[k] = d;
  }
  return eta;
}

inline std::string with_grid_point(const std::string& what, std::size_t k, double gt) {
  return what + " (grid point " + std::to_string(k) + ", gt = " + std::to_string(gt) + ")";
}

/// E(evolve(ρ0, Γt)) on every grid point, plus η.
inline EntanglementSeries sweep(const DensityMatrix& rho0, const TimeGrid& grid,
                                const SdpSettings& settings = {}, std::string label = {},
                                unsigned threads = 1) {
  EntanglementSeries s{grid, std::vector<double>(grid.size()), {},
                       std::vector<double>(grid.size()),
                       std::vector<GmnStatus>(grid.size()), std::move(label)};
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    try {
      const GmnResult r = genuine_negativity(evolve(rho0, grid[k]), settings);
      s.e_values[k] = r.value;
      s.duality_gaps[k] = r.duality_gap;
      s.statuses[k] = r.status;
    } catch (const SolverError& e) {
      throw SolverError(e.code(), with_grid_point(e.what(), k, grid[k]), e.best_iterate());
    }
  });
  s.eta_values = log_derivative(grid, s.e_values);
  return s;
}

/// Pointwise mean, unbiased variance, and μ ± √δ bands over the defined η.
inline EnsembleStats eta_statistics(const std::vector<EntanglementSeries>& series) {
  if (series.empty()) throw std::invalid_argument("ensemble is empty");
  const TimeGrid& grid = series.front().grid;
  const std::size_t n = grid.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EnsembleStats st{grid,
                   std::vector<double>(n, nan),
                   std::vector<double>(n, nan),
                   std::vector<double>(n, nan),
                   std::vector<double>(n, nan),
                   std::vector<int>(n, 0),
                   static_cast<int>(series.size())};
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    int count = 0;
    for (const auto& s : series) {
      if (s.eta_values.at(k)) {
        sum += *s.eta_values[k];
        ++count;
      }
    }
    st.n_effective[k] = count;
    if (count == 0) continue;
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& s : series) {
      if (s.eta_values[k]) ss += (*s.eta_values[k] - mean) * (*s.eta_values[k] - mean);
    }
    const double var = count > 1 ? ss / (count - 1) : 0.0;
    st.mean[k] = mean;
    st.variance[k] = var;
    st.ci_low[k] = mean - std::sqrt(var);
    st.ci_high[k] = mean + std::sqrt(var);
  }
  return st;
}

struct EnsembleSweep {
  std::vector<EntanglementSeries> series;
  EnsembleStats stats;
};

/// Sweeps every state over the grid. Work items are (state, grid point)
/// pairs; results land in fixed slots so the output is order-independent.
inline EnsembleSweep ensemble_sweep(const std::vector<PureState>& states, const TimeGrid& grid,
                                    const SdpSettings& settings = {}, unsigned threads = 1,
                                    const std::string& label_prefix = "state") {
  if (states.empty()) throw std::invalid_argument("ensemble is empty");
  const std::size_t n_grid = grid.size();
  std::vector<DensityMatrix> initial;
  initial.reserve(states.size());
  for (const auto& psi : states) initial.push_back(pure_to_density(psi));

  std::vector<EntanglementSeries> series;
  series.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    series.push_back({grid, std::vector<double>(n_grid), {}, std::vector<double>(n_grid),
                      std::vector<GmnStatus>(n_grid), label_prefix + std::to_string(i)});
  }
  parallel_for(states.size() * n_grid, threads, [&](std::size_t item) {
    const std::size_t i = item / n_grid;
    const std::size_t k = item % n_grid;
    try {
      const GmnResult r = genuine_negativity(evolve(initial[i], grid[k]), settings);
      series[i].e_values[k] = r.value;
      series[i].duality_gaps[k] = r.duality_gap;
      series[i].statuses[k] = r.status;
    } catch (const SolverError& e) {
      throw SolverError(e.code(),
                        with_grid_point(std::string(e.what()) + " for " + series[i].state_label,
                                        k, grid[k]),
                        e.best_iterate());
    }
  });
  for (auto& s : series) s.eta_values = log_derivative(grid, s.e_values);
  EnsembleStats stats = eta_statistics(series);
  return {std::move(series), std::move(stats)};
}

struct AsymptoticEntry {
  std::string label;
  double value = 0.0;
  double duality_gap = 0.0;
  GmnStatus status = GmnStatus::Optimal;
};

/// E∞ = E(asymptotic_map(|ψ><ψ|)) per state.
inline std::vector<AsymptoticEntry> asymptotic_ensemble(const std::vector<PureState>& states,
                                                        const SdpSettings& settings = {},
                                                        unsigned threads = 1,
                                                        const std::string& label_prefix = "state") {
  if (states.empty()) throw std::invalid_argument("ensemble is empty");
  std::vector<AsymptoticEntry> out(states.size());
  parallel_for(states.size(), threads, [&](std::size_t i) {
    const GmnResult r = genuine_negativity(asymptotic_map(pure_to_density(states[i])), settings);
    out[i] = {label_prefix + std::to_string(i), r.value, r.duality_gap, r.status};
  });
  return out;
}

}  // namespace gmnlab
