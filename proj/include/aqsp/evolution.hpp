#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "aqsp/cost.hpp"
#include "aqsp/errors.hpp"
#include "aqsp/hamiltonian.hpp"
#include "aqsp/instance.hpp"
#include "aqsp/state.hpp"

namespace aqsp {

enum class IntegratorMethod { split_step, reference_rk4 };

inline const char* method_name(IntegratorMethod m) {
  return m == IntegratorMethod::split_step ? "split" : "rk4";
}

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::split_step;
  double dt = 0.0;          // base step; 0 selects min(1e-2, 0.1 / max_energy)
  bool renormalize = false; // off by default so norm drift stays a diagnostic
  std::vector<double> record_profile_at;  // state snapshots at these t values
};

// Stability guard: dt * max_energy <= 0.1, where max_energy bounds both
// endpoint Hamiltonian norms.
constexpr double kStabilityGuard = 0.1;

inline double max_energy_bound(const DriverParams& p, const CostSpectrum& costs,
                               double energy_shift = 0.0) {
  double v_norm = 0.0;
  for (double b : p.B) v_norm += std::abs(b);
  for (int i = 0; i < p.n(); ++i)
    for (int j = i + 1; j < p.n(); ++j) v_norm += std::abs(p.coupling(i, j));
  const double p_norm =
      std::max(std::abs(energy_shift), static_cast<double>(costs.L) + std::abs(energy_shift));
  return std::max(v_norm, p_norm);
}

inline double auto_time_step(const DriverParams& p, const CostSpectrum& costs,
                             double energy_shift = 0.0) {
  return std::min(1e-2, kStabilityGuard / max_energy_bound(p, costs, energy_shift));
}

struct StateSnapshot {
  double t = 0.0;
  StateVector state;
};

struct EvolutionResult {
  double T = 0.0;
  double p0 = 0.0;                 // ground-level probability at t = T
  std::vector<double> profile;     // |psi_z|^2 in residue-sorted order (if table given)
  double norm_drift = 0.0;         // | ||psi(T)|| - 1 |
  StateVector final_state;
  std::vector<StateSnapshot> snapshots;
  // |<Psi_0(s)|psi(t)>|^2 samples, filled by callers that have eigenvectors.
  std::vector<std::pair<double, double>> adiabatic_overlap;
  std::string method_used;
  double dt_used = 0.0;
  std::uint64_t steps = 0;
};

/// Total probability of the zero-cost level.
inline double ground_probability(const StateVector& psi, const CostSpectrum& costs) {
  double p = 0.0;
  for (std::uint32_t z : costs.ground_set) p += std::norm(psi[z]);
  return p;
}

/// |psi|^2 permuted by increasing |residue|; index 0 is the best partition.
inline std::vector<double> probability_profile(const StateVector& psi,
                                               const ResidueTable& table) {
  if (psi.dim() != table.sorted_order.size())
    throw validation_error("probability_profile: dimension mismatch");
  std::vector<double> profile(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i)
    profile[i] = std::norm(psi[table.sorted_order[i]]);
  return profile;
}

/// |<ground|psi>|^2 against an instantaneous eigenvector.
inline double adiabatic_overlap(const StateVector& psi, const StateVector& ground_eigvec) {
  return std::norm(inner_product(ground_eigvec, psi));
}

namespace detail {

inline void check_finite(const StateVector& psi, std::uint64_t step, double t) {
  const double n2 = norm_squared(psi);
  if (!std::isfinite(n2))
    throw numerical_error("propagation produced non-finite amplitudes at step " +
                          std::to_string(step) + ", t = " + std::to_string(t));
}

// One Strang step at frozen s: half problem phase, full driver phase in the
// Walsh basis, half problem phase. Exactly norm-preserving up to rounding.
class SplitStepKernel {
public:
  SplitStepKernel(const DriverParams& p, const CostSpectrum& costs, double energy_shift)
      : costs_(costs), shift_(energy_shift), walsh_diag_(driver_walsh_diagonal(p)) {
    uniform_field_ = !p.B.empty();
    for (double b : p.B) uniform_field_ = uniform_field_ && (b == p.B.front());
    if (uniform_field_) {
      field_ = p.B.front();
      const std::size_t dim = dim_of(p.n());
      popcounts_.resize(dim);
      for (std::size_t w = 0; w < dim; ++w)
        popcounts_[w] = static_cast<std::uint8_t>(std::popcount(w));
      n_ = p.n();
    }
  }

  void step(StateVector& psi, double alpha, double beta, double dt) const {
    const std::size_t dim = psi.dim();
    complex_t* a = psi.amps.data();

    problem_phase(a, dim, beta * dt * 0.5);

    walsh_hadamard(a, dim);
    const double inv_dim = 1.0 / static_cast<double>(dim);
    if (uniform_field_) {
      // Walsh eigenvalue depends only on popcount: -field * (n - 2 m).
      phase_table_.resize(static_cast<std::size_t>(n_) + 1);
      for (int m = 0; m <= n_; ++m) {
        const double lambda = -field_ * (n_ - 2.0 * m);
        phase_table_[m] = std::polar(inv_dim, -alpha * lambda * dt);
      }
      for (std::size_t w = 0; w < dim; ++w) a[w] *= phase_table_[popcounts_[w]];
    } else {
      for (std::size_t w = 0; w < dim; ++w)
        a[w] *= std::polar(inv_dim, -alpha * walsh_diag_[w] * dt);
    }
    walsh_hadamard(a, dim);

    problem_phase(a, dim, beta * dt * 0.5);
  }

private:
  void problem_phase(complex_t* a, std::size_t dim, double angle_scale) const {
    level_table_.resize(static_cast<std::size_t>(costs_.L) + 1);
    for (int k = 0; k <= costs_.L; ++k)
      level_table_[k] = std::polar(1.0, -(k + shift_) * angle_scale);
    const std::uint8_t* e = costs_.costs.data();
    for (std::size_t z = 0; z < dim; ++z) a[z] *= level_table_[e[z]];
  }

  const CostSpectrum& costs_;
  double shift_;
  std::vector<double> walsh_diag_;
  bool uniform_field_ = false;
  double field_ = 1.0;
  int n_ = 0;
  std::vector<std::uint8_t> popcounts_;
  mutable std::vector<complex_t> phase_table_;
  mutable std::vector<complex_t> level_table_;
};

// y = -i (alpha V + beta (H_P + shift)) x, written into preallocated storage.
class Derivative {
public:
  Derivative(const DriverParams& p, const CostSpectrum& costs, double energy_shift)
      : params_(p), costs_(costs), shift_(energy_shift) {}

  void operator()(const StateVector& x, double alpha, double beta, StateVector& y) const {
    const std::size_t dim = x.dim();
    const std::uint8_t* e = costs_.costs.data();
    for (std::size_t z = 0; z < dim; ++z)
      y[z] = beta * (static_cast<double>(e[z]) + shift_) * x[z];
    for (int i = 0; i < params_.n(); ++i) {
      const double w = alpha * params_.B[i];
      if (w == 0.0) continue;
      const std::size_t bit = std::size_t{1} << i;
      for (std::size_t z = 0; z < dim; ++z) y[z] -= w * x[z ^ bit];
    }
    if (!params_.J.empty()) {
      for (int i = 0; i < params_.n(); ++i)
        for (int j = i + 1; j < params_.n(); ++j) {
          const double w = alpha * params_.coupling(i, j);
          if (w == 0.0) continue;
          const std::size_t mask = (std::size_t{1} << i) | (std::size_t{1} << j);
          for (std::size_t z = 0; z < dim; ++z) y[z] -= w * x[z ^ mask];
        }
    }
    // multiply by -i
    for (std::size_t z = 0; z < dim; ++z) {
      const complex_t v = y[z];
      y[z] = complex_t(v.imag(), -v.real());
    }
  }

private:
  const DriverParams& params_;
  const CostSpectrum& costs_;
  double shift_;
};

}  // namespace detail

/// Integrates i dpsi/dt = H(t) psi from the symmetric state to t_end, with
/// s = t / T. The split-step path requires J = 0 and falls back to RK4
/// otherwise. Snapshot requests are served at the first step boundary at or
/// past each requested time.
inline EvolutionResult evolve_state(const SppInstance& inst, const CostSpectrum& costs,
                                    const DriverParams& params, const Schedule& sched,
                                    double T, const IntegratorConfig& cfg,
                                    double t_end = -1.0) {
  validate_driver(params);
  validate_schedule(sched);
  if (params.n() != inst.n) throw validation_error("propagate: driver size != n");
  if (costs.costs.size() != dim_of(inst.n))
    throw validation_error("propagate: cost table size mismatch");
  if (T <= 0.0) throw validation_error("propagate: T must be positive");
  if (t_end < 0.0) t_end = T;
  if (t_end > T) throw validation_error("propagate: t_end beyond T");

  const double e_max = max_energy_bound(params, costs, sched.energy_shift);
  double dt = cfg.dt;
  if (dt == 0.0) {
    dt = std::min(1e-2, kStabilityGuard / e_max);
  } else {
    if (dt <= 0.0) throw validation_error("propagate: dt must be positive");
    if (dt * e_max > kStabilityGuard * (1.0 + 1e-12))
      throw validation_error("propagate: dt violates stability guard dt * E_max <= 0.1");
  }

  IntegratorMethod method = cfg.method;
  if (method == IntegratorMethod::split_step && !params.transverse_only())
    method = IntegratorMethod::reference_rk4;  // fast path needs a diagonal Walsh driver

  const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(t_end / dt));
  const double h = t_end / static_cast<double>(steps);

  StateVector psi = symmetric_state(inst.n);

  std::vector<double> snapshot_times = cfg.record_profile_at;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  std::size_t next_snapshot = 0;

  EvolutionResult result;
  result.T = T;
  result.method_used = method_name(method);
  result.dt_used = h;
  result.steps = steps;

  auto take_snapshots = [&](double t_now) {
    while (next_snapshot < snapshot_times.size() &&
           snapshot_times[next_snapshot] <= t_now + 1e-12) {
      result.snapshots.push_back({t_now, psi});
      ++next_snapshot;
    }
  };
  take_snapshots(0.0);

  if (method == IntegratorMethod::split_step) {
    detail::SplitStepKernel kernel(params, costs, sched.energy_shift);
    for (std::uint64_t k = 0; k < steps; ++k) {
      const double s_mid = (static_cast<double>(k) + 0.5) * h / T;
      kernel.step(psi, sched.alpha(s_mid), sched.beta(s_mid), h);
      if (cfg.renormalize) normalize(psi);
      if ((k & 0xff) == 0xff) detail::check_finite(psi, k + 1, (k + 1) * h);
      take_snapshots(static_cast<double>(k + 1) * h);
    }
  } else {
    detail::Derivative deriv(params, costs, sched.energy_shift);
    StateVector k1(inst.n), k2(inst.n), k3(inst.n), k4(inst.n), tmp(inst.n);
    const std::size_t dim = psi.dim();
    for (std::uint64_t k = 0; k < steps; ++k) {
      const double s_mid = (static_cast<double>(k) + 0.5) * h / T;
      const double alpha = sched.alpha(s_mid);
      const double beta = sched.beta(s_mid);
      deriv(psi, alpha, beta, k1);
      for (std::size_t z = 0; z < dim; ++z) tmp[z] = psi[z] + 0.5 * h * k1[z];
      deriv(tmp, alpha, beta, k2);
      for (std::size_t z = 0; z < dim; ++z) tmp[z] = psi[z] + 0.5 * h * k2[z];
      deriv(tmp, alpha, beta, k3);
      for (std::size_t z = 0; z < dim; ++z) tmp[z] = psi[z] + h * k3[z];
      deriv(tmp, alpha, beta, k4);
      const double w = h / 6.0;
      for (std::size_t z = 0; z < dim; ++z)
        psi[z] += w * (k1[z] + 2.0 * k2[z] + 2.0 * k3[z] + k4[z]);
      if (cfg.renormalize) normalize(psi);
      if ((k & 0xff) == 0xff) detail::check_finite(psi, k + 1, (k + 1) * h);
      take_snapshots(static_cast<double>(k + 1) * h);
    }
  }

  detail::check_finite(psi, steps, t_end);
  result.norm_drift = std::abs(norm(psi) - 1.0);
  result.p0 = ground_probability(psi, costs);
  result.final_state = std::move(psi);
  return result;
}

/// Full run from t = 0 to T. When a residue table is supplied the sorted
/// probability profile is attached.
inline EvolutionResult propagate(const SppInstance& inst, const CostSpectrum& costs,
                                 const DriverParams& params, const Schedule& sched, double T,
                                 const IntegratorConfig& cfg,
                                 const ResidueTable* table = nullptr) {
  EvolutionResult result = evolve_state(inst, costs, params, sched, T, cfg);
  if (table != nullptr) result.profile = probability_profile(result.final_state, *table);
  return result;
}

}  // namespace aqsp
