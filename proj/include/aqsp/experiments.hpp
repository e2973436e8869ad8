#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "aqsp/cost.hpp"
#include "aqsp/errors.hpp"
#include "aqsp/evolution.hpp"
#include "aqsp/instance.hpp"
#include "aqsp/parallel.hpp"

namespace aqsp {

/// Complexity metric: expected total evolution time to reach success
/// probability ~1 by repetition, (T+1) d0 / p0(T). p0 = 0 maps to infinity
/// rather than a silent division blowup.
inline double complexity(double T, double p0, std::int64_t d0) {
  if (p0 < 0.0 || p0 > 1.0 + 1e-12) throw validation_error("complexity: p0 out of [0, 1]");
  if (p0 == 0.0) return std::numeric_limits<double>::infinity();
  return (T + 1.0) * static_cast<double>(d0) / p0;
}

struct ComplexityPoint {
  double T = 0.0;
  double p0 = 0.0;
  double C = 0.0;
};

struct ComplexityCurve {
  std::vector<ComplexityPoint> points;  // every evaluated point, sorted by T
  double T_star = 0.0;
  double p0_star = 0.0;
  double C_star = std::numeric_limits<double>::infinity();
  bool unbracketed = false;  // optimum sat on the search boundary
  int evaluations = 0;
};

struct MinimizeOptions {
  double t_min = 0.25;
  double t_max = 0.0;  // 0 selects 20 * 2^(0.4 n)
  int coarse_points = 16;
  int budget = 48;                 // max propagations, must be >= 8
  double relative_width = 0.05;    // golden-section stop on the T bracket
};

inline double default_t_max(int n) { return 20.0 * std::pow(2.0, 0.4 * n); }

/// One-dimensional minimization of C(T): geometric coarse grid, then
/// golden-section refinement in log T around the best grid point. The full
/// evaluation set is kept so a violated unimodality assumption stays visible.
inline ComplexityCurve minimize_complexity(const SppInstance& inst, const CostSpectrum& costs,
                                           const DriverParams& params, const Schedule& sched,
                                           const IntegratorConfig& cfg,
                                           MinimizeOptions opt = {}) {
  if (opt.t_max == 0.0) opt.t_max = default_t_max(inst.n);
  if (opt.t_min <= 0.0 || opt.t_max <= opt.t_min)
    throw validation_error("minimize_complexity: need 0 < t_min < t_max");
  if (opt.coarse_points < 4) throw validation_error("minimize_complexity: coarse_points < 4");
  if (opt.budget < 8) throw validation_error("minimize_complexity: budget must be >= 8");

  ComplexityCurve curve;
  const std::int64_t d0 = costs.d0();
  auto evaluate = [&](double T) {
    const EvolutionResult r = propagate(inst, costs, params, sched, T, cfg);
    ComplexityPoint pt{T, r.p0, complexity(T, r.p0, d0)};
    curve.points.push_back(pt);
    ++curve.evaluations;
    return pt.C;
  };

  const double log_lo = std::log(opt.t_min);
  const double log_hi = std::log(opt.t_max);
  std::vector<double> grid(opt.coarse_points);
  for (int i = 0; i < opt.coarse_points; ++i)
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (opt.coarse_points - 1));
  int best = 0;
  for (int i = 0; i < opt.coarse_points; ++i) {
    const double c = evaluate(grid[i]);
    if (c < curve.points[best].C) best = i;
  }

  if (best == 0 || best == opt.coarse_points - 1) {
    curve.unbracketed = true;
  } else {
    // Golden section on x = ln T within the bracketing grid interval.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(grid[best - 1]);
    double b = std::log(grid[best + 1]);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = evaluate(std::exp(x1));
    double f2 = evaluate(std::exp(x2));
    while (b - a > std::log1p(opt.relative_width) && curve.evaluations < opt.budget) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = evaluate(std::exp(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = evaluate(std::exp(x2));
      }
    }
  }

  std::sort(curve.points.begin(), curve.points.end(),
            [](const ComplexityPoint& lhs, const ComplexityPoint& rhs) { return lhs.T < rhs.T; });
  const auto star = std::min_element(
      curve.points.begin(), curve.points.end(),
      [](const ComplexityPoint& lhs, const ComplexityPoint& rhs) { return lhs.C < rhs.C; });
  curve.T_star = star->T;
  curve.p0_star = star->p0;
  curve.C_star = star->C;
  return curve;
}

struct InstanceOutcome {
  std::uint64_t seed = 0;
  std::int64_t d0 = 0;
  double T_star = 0.0;
  double p0_star = 0.0;
  double C_star = 0.0;
  bool unbracketed = false;
  bool failed = false;
  std::string error;
};

struct PerSizeResults {
  int n = 0;
  std::vector<InstanceOutcome> instances;
  double median_C_star = 0.0;
  double mean_d0 = 0.0;
  double mean_p0_star = 0.0;
};

struct ScalingFit {
  double slope = 0.0;      // of ln(median C*) vs n
  double intercept = 0.0;
  std::vector<double> residuals;
  std::vector<int> n_used;
};

struct ScalingReport {
  std::vector<PerSizeResults> per_n;
  ScalingFit fit;
  int fit_n_min = 0;
  int fit_n_max = 0;
  int failures = 0;
};

struct SweepConfig {
  std::vector<int> n_values;
  int instances_per_n = 11;
  int b = 25;
  double K = 20.0;
  std::uint64_t master_seed = 1;
  int fit_n_min = 0;  // 0: use the full n range
  int fit_n_max = 0;
  IntegratorConfig integrator;
  MinimizeOptions minimize;
  int jobs = 1;
};

// Lower median: order-statistics exact, no interpolation for even counts.
inline double lower_median(std::vector<double> values) {
  if (values.empty()) throw validation_error("median of empty set");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

/// The scaling experiment: per-size instance batches, T-minimization for
/// each, medians, and the least-squares fit of ln(median C*) against n over
/// the configured window.
inline ScalingReport scaling_sweep(const SweepConfig& cfg) {
  if (cfg.n_values.empty()) throw validation_error("scaling_sweep: empty n range");
  if (cfg.instances_per_n < 5)
    throw validation_error("scaling_sweep: need >= 5 instances per n for median stability");

  ScalingReport report;
  report.per_n.resize(cfg.n_values.size());
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i)
    report.per_n[i].n = cfg.n_values[i];
  report.fit_n_min = cfg.fit_n_min != 0 ? cfg.fit_n_min
                                        : *std::min_element(cfg.n_values.begin(), cfg.n_values.end());
  report.fit_n_max = cfg.fit_n_max != 0 ? cfg.fit_n_max
                                        : *std::max_element(cfg.n_values.begin(), cfg.n_values.end());

  struct Task {
    std::size_t size_index;
    int instance_index;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    report.per_n[i].instances.resize(cfg.instances_per_n);
    for (int j = 0; j < cfg.instances_per_n; ++j) tasks.push_back({i, j});
  }

  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t ti) {
    const Task task = tasks[ti];
    const int n = cfg.n_values[task.size_index];
    InstanceOutcome& out = report.per_n[task.size_index].instances[task.instance_index];
    out.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(task.instance_index));
    try {
      const SppInstance inst = generate_instance(n, cfg.b, out.seed);
      const ResidueTable table = enumerate_residues(inst);
      const CostSpectrum costs = build_cost_spectrum(inst, table, cfg.K);
      out.d0 = costs.d0();
      if (out.d0 == 0) throw numerical_error("empty ground level");
      const ComplexityCurve curve = minimize_complexity(inst, costs, DriverParams::uniform(n),
                                                        Schedule{}, cfg.integrator, cfg.minimize);
      out.T_star = curve.T_star;
      out.p0_star = curve.p0_star;
      out.C_star = curve.C_star;
      out.unbracketed = curve.unbracketed;
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
  });

  std::vector<double> xs, ys;
  for (auto& per : report.per_n) {
    std::vector<double> c_values;
    double d0_sum = 0.0, p0_sum = 0.0;
    int ok = 0;
    for (const auto& inst : per.instances) {
      if (inst.failed) {
        ++report.failures;
        continue;
      }
      c_values.push_back(inst.C_star);
      d0_sum += static_cast<double>(inst.d0);
      p0_sum += inst.p0_star;
      ++ok;
    }
    if (ok == 0) continue;
    per.median_C_star = lower_median(c_values);
    per.mean_d0 = d0_sum / ok;
    per.mean_p0_star = p0_sum / ok;
    if (per.n >= report.fit_n_min && per.n <= report.fit_n_max) {
      xs.push_back(per.n);
      ys.push_back(std::log(per.median_C_star));
      report.fit.n_used.push_back(per.n);
    }
  }

  if (xs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto count = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    report.fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    report.fit.intercept = (sy - report.fit.slope * sx) / count;
    for (std::size_t i = 0; i < xs.size(); ++i)
      report.fit.residuals.push_back(ys[i] - (report.fit.slope * xs[i] + report.fit.intercept));
  }
  return report;
}

}  // namespace aqsp
