#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aqsp/cost.hpp"
#include "aqsp/errors.hpp"
#include "aqsp/hamiltonian.hpp"
#include "aqsp/instance.hpp"
#include "aqsp/parallel.hpp"
#include "aqsp/state.hpp"

namespace aqsp {

/// Stationary eigenanalysis along the schedule: the m lowest adiabatic
/// eigenvalues g_k(s), which of them merge into the final ground level, and
/// the driver matrix elements <Psi_0|V|Psi_k> feeding the nonadiabatic sum.
struct SpectralResult {
  std::vector<double> s_grid;
  std::vector<std::vector<double>> eigenvalues;  // [si][k], ascending per s
  std::vector<std::vector<char>> merging;        // [si][k], 1 = ends on ground level
  std::vector<std::vector<double>> v0k;          // [si][k]
  int m = 0;
  std::vector<std::string> warnings;
};

struct GapInfo {
  double min_gap = 0.0;  // smallest non-merging excitation gap over s
  double s_star = 0.0;
  std::size_t s_index = 0;
  double v_tilde = 0.0;  // max_k |V0k| at s_star
};

// Threshold on ground-level weight for calling a level "merging", applied
// directly for s >= this and propagated backward by continuity below it.
constexpr double kDirectClassifyMinS = 0.9;
constexpr double kMergingWeightThreshold = 0.5;
constexpr double kContinuityAmbiguityTol = 1e-6;

/// Direct merging criterion at one s: ground-window weight <Psi_k|P_0|Psi_k>
/// above threshold.
inline std::vector<char> classify_levels(const Eigen::MatrixXd& eigvecs,
                                         const std::vector<std::uint32_t>& ground_set) {
  std::vector<char> flags(static_cast<std::size_t>(eigvecs.cols()));
  for (Eigen::Index k = 0; k < eigvecs.cols(); ++k) {
    double weight = 0.0;
    for (std::uint32_t z : ground_set) weight += eigvecs(z, k) * eigvecs(z, k);
    flags[static_cast<std::size_t>(k)] = weight > kMergingWeightThreshold ? 1 : 0;
  }
  return flags;
}

namespace detail {

struct EigenSlice {
  double s = 0.0;
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // dim x m
  std::vector<double> v0k;
};

inline EigenSlice solve_slice(double s, const Schedule& sched, const DriverParams& params,
                              const CostSpectrum& costs, int m) {
  EigenSlice slice;
  slice.s = s;
  const Eigen::MatrixXd h = dense_hamiltonian(s, sched, params, costs);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eigensolver failed to converge at s = " + std::to_string(s));
  slice.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  slice.vectors = solver.eigenvectors().leftCols(m);
  slice.v0k.resize(m);
  const Eigen::VectorXd v_psi0 = apply_driver_real(params, slice.vectors.col(0));
  for (int k = 0; k < m; ++k) slice.v0k[k] = slice.vectors.col(k).dot(v_psi0);
  return slice;
}

// Backward continuity pass: slices must be sorted by s ascending. Direct
// classification late in the schedule, inherited by maximal eigenvector
// overlap earlier, where levels exchange order freely.
inline void classify_slices(std::vector<EigenSlice>& slices,
                            const std::vector<std::uint32_t>& ground_set, int m,
                            std::vector<std::vector<char>>& merging,
                            std::vector<std::string>& warnings) {
  const std::size_t npts = slices.size();
  merging.assign(npts, {});
  for (std::size_t i = npts; i-- > 0;) {
    const bool direct = slices[i].s >= kDirectClassifyMinS || i + 1 == npts;
    if (direct) {
      merging[i] = classify_levels(slices[i].vectors, ground_set);
      continue;
    }
    const Eigen::MatrixXd overlap = slices[i].vectors.transpose() * slices[i + 1].vectors;
    merging[i].resize(m);
    for (int k = 0; k < m; ++k) {
      int best = 0;
      double best_abs = -1.0, second_abs = -1.0;
      for (int l = 0; l < m; ++l) {
        const double a = std::abs(overlap(k, l));
        if (a > best_abs) {
          second_abs = best_abs;
          best_abs = a;
          best = l;
        } else if (a > second_abs) {
          second_abs = a;
        }
      }
      if (best_abs - second_abs < kContinuityAmbiguityTol)
        warnings.push_back("ambiguous level continuation for level " + std::to_string(k) +
                           " at s = " + std::to_string(slices[i].s));
      merging[i][k] = merging[i + 1][best];
    }
  }
}

inline SpectralResult assemble(std::vector<EigenSlice>& slices,
                               const std::vector<std::uint32_t>& ground_set, int m) {
  std::sort(slices.begin(), slices.end(),
            [](const EigenSlice& a, const EigenSlice& b) { return a.s < b.s; });
  SpectralResult res;
  res.m = m;
  classify_slices(slices, ground_set, m, res.merging, res.warnings);
  res.s_grid.reserve(slices.size());
  for (auto& slice : slices) {
    res.s_grid.push_back(slice.s);
    res.eigenvalues.push_back(std::move(slice.values));
    res.v0k.push_back(std::move(slice.v0k));
    slice.vectors.resize(0, 0);
  }
  return res;
}

}  // namespace detail

inline int default_level_count(const CostSpectrum& costs, int n) {
  const auto dim = static_cast<std::int64_t>(dim_of(n));
  return static_cast<int>(std::min<std::int64_t>(costs.d0() + 8, dim));
}

/// Dense eigensolve of H(s) on the given grid. m = 0 picks d0 + 8 levels so
/// the non-merging curves above the ground cluster stay in view.
inline SpectralResult adiabatic_spectrum(const SppInstance& inst, const CostSpectrum& costs,
                                         const DriverParams& params, const Schedule& sched,
                                         std::vector<double> s_grid, int m = 0, int jobs = 1) {
  validate_driver(params);
  validate_schedule(sched);
  if (inst.n > kMaxDenseQubits)
    throw capacity_error("adiabatic_spectrum: n > " + std::to_string(kMaxDenseQubits) +
                         " (dense eigensolve)");
  if (s_grid.empty()) throw validation_error("adiabatic_spectrum: empty s grid");
  const int dim = static_cast<int>(dim_of(inst.n));
  if (m == 0) m = default_level_count(costs, inst.n);
  if (m < 1 || m > dim) throw validation_error("adiabatic_spectrum: m out of [1, 2^n]");

  std::sort(s_grid.begin(), s_grid.end());
  std::vector<detail::EigenSlice> slices(s_grid.size());
  parallel_for(s_grid.size(), jobs, [&](std::size_t i) {
    slices[i] = detail::solve_slice(s_grid[i], sched, params, costs, m);
  });
  return detail::assemble(slices, costs.ground_set, m);
}

/// Minimum over s of the gap between the ground curve and the lowest level
/// that does not end on the final ground level.
inline GapInfo minimum_gap(const SpectralResult& res) {
  GapInfo info;
  bool found = false;
  for (std::size_t i = 0; i < res.s_grid.size(); ++i) {
    double lowest = 0.0;
    bool have = false;
    for (int k = 1; k < res.m; ++k) {
      if (res.merging[i][k]) continue;
      lowest = res.eigenvalues[i][k];
      have = true;
      break;  // eigenvalues ascend in k
    }
    if (!have) continue;
    const double gap = lowest - res.eigenvalues[i][0];
    if (!found || gap < info.min_gap) {
      found = true;
      info.min_gap = gap;
      info.s_star = res.s_grid[i];
      info.s_index = i;
    }
  }
  if (!found)
    throw validation_error(
        "minimum_gap: every tracked level merges into the ground level; increase m");
  for (int k = 1; k < res.m; ++k)
    info.v_tilde = std::max(info.v_tilde, std::abs(res.v0k[info.s_index][k]));
  return info;
}

/// Eq.-style adiabaticity parameter for a given duration.
inline double adiabaticity_parameter(const GapInfo& gap, double T) {
  if (T <= 0.0) throw validation_error("adiabaticity parameter: T must be positive");
  return gap.v_tilde / (T * gap.min_gap * gap.min_gap);
}

/// Uniform base grid plus one 10x refinement pass around the coarse gap
/// minimum; the default spectral pipeline.
inline SpectralResult spectrum_with_refined_gap(const SppInstance& inst,
                                                const CostSpectrum& costs,
                                                const DriverParams& params,
                                                const Schedule& sched, int base_points = 101,
                                                int m = 0, int jobs = 1,
                                                int refine_factor = 10) {
  if (base_points < 2) throw validation_error("spectrum: need at least 2 grid points");
  std::vector<double> grid(base_points);
  for (int i = 0; i < base_points; ++i)
    grid[i] = static_cast<double>(i) / (base_points - 1);
  SpectralResult coarse = adiabatic_spectrum(inst, costs, params, sched, grid, m, jobs);
  GapInfo coarse_gap = minimum_gap(coarse);

  const std::size_t i_star = coarse_gap.s_index;
  const double lo = coarse.s_grid[i_star == 0 ? 0 : i_star - 1];
  const double hi = coarse.s_grid[std::min(i_star + 1, coarse.s_grid.size() - 1)];
  std::vector<double> refined;
  const int subdiv = 2 * refine_factor;
  for (int i = 1; i < subdiv; ++i) {
    const double s = lo + (hi - lo) * i / subdiv;
    // skip points already on the coarse grid
    if (std::none_of(coarse.s_grid.begin(), coarse.s_grid.end(),
                     [&](double g) { return std::abs(g - s) < 1e-12; }))
      refined.push_back(s);
  }
  if (refined.empty()) return coarse;

  std::vector<double> merged = coarse.s_grid;
  merged.insert(merged.end(), refined.begin(), refined.end());
  return adiabatic_spectrum(inst, costs, params, sched, merged, coarse.m, jobs);
}

/// Instantaneous ground eigenvector at one s, for overlap diagnostics.
inline StateVector ground_eigenvector(const SppInstance& inst, const CostSpectrum& costs,
                                      const DriverParams& params, const Schedule& sched,
                                      double s) {
  if (inst.n > kMaxDenseQubits)
    throw capacity_error("ground_eigenvector: n > " + std::to_string(kMaxDenseQubits));
  const Eigen::MatrixXd h = dense_hamiltonian(s, sched, params, costs);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eigensolver failed at s = " + std::to_string(s));
  StateVector psi(inst.n);
  for (std::size_t z = 0; z < psi.dim(); ++z)
    psi[z] = solver.eigenvectors()(static_cast<Eigen::Index>(z), 0);
  return psi;
}

struct NonadiabaticEstimate {
  double value = 0.0;      // perturbative probability of leaving the ground state
  double tail_term = 0.0;  // last included term, as a truncation indicator
  double s_used = 0.0;
  int levels_used = 0;
};

/// Perturbative sum (1/t^2) sum_k |V0k|^2 / (g_k - g_0)^4, truncated at the
/// m tracked levels. Terms with a vanishing gap are the merging levels near
/// s = 1 and are excluded.
inline NonadiabaticEstimate nonadiabatic_sum(const SpectralResult& res, double t, double T) {
  if (t <= 0.0) throw validation_error("nonadiabatic_sum: t must be positive (1/t^2 prefactor)");
  if (T <= 0.0 || t > T) throw validation_error("nonadiabatic_sum: need 0 < t <= T");
  const double s = t / T;
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.s_grid.size(); ++i)
    if (std::abs(res.s_grid[i] - s) < std::abs(res.s_grid[best] - s)) best = i;

  NonadiabaticEstimate est;
  est.s_used = res.s_grid[best];
  const double inv_t2 = 1.0 / (t * t);
  for (int k = 1; k < res.m; ++k) {
    const double gap = res.eigenvalues[best][k] - res.eigenvalues[best][0];
    if (gap < 1e-9) continue;
    const double term = inv_t2 * res.v0k[best][k] * res.v0k[best][k] / std::pow(gap, 4);
    est.value += term;
    est.tail_term = term;
    ++est.levels_used;
  }
  return est;
}

}  // namespace aqsp
