#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "aqsp/bits.hpp"
#include "aqsp/cost.hpp"
#include "aqsp/errors.hpp"
#include "aqsp/state.hpp"

namespace aqsp {

/// Transverse-field driver V = -sum_i B_i sx_i - sum_{i<j} J_ij sx_i sx_j.
/// J is symmetric with the diagonal ignored; the unordered-pair sum absorbs
/// the conventional 1/2.
struct DriverParams {
  std::vector<double> B;  // per-qubit fields
  std::vector<double> J;  // n*n row-major couplings; empty means all zero

  static DriverParams uniform(int n, double field = 1.0) {
    DriverParams p;
    p.B.assign(n, field);
    return p;
  }

  int n() const { return static_cast<int>(B.size()); }
  double coupling(int i, int j) const {
    return J.empty() ? 0.0 : J[static_cast<std::size_t>(i) * B.size() + j];
  }
  bool transverse_only() const {
    for (double v : J)
      if (v != 0.0) return false;
    return true;
  }
};

inline void validate_driver(const DriverParams& p) {
  const int n = p.n();
  if (n < 1) throw validation_error("driver: empty field list");
  if (!p.J.empty()) {
    if (p.J.size() != static_cast<std::size_t>(n) * n)
      throw validation_error("driver: J must be n*n");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p.coupling(i, j) != p.coupling(j, i))
          throw validation_error("driver: J must be symmetric");
  }
}

/// Interpolation coefficients of H(s) = alpha(s) V + beta(s) (H_P + shift).
struct Schedule {
  std::function<double(double)> alpha = [](double s) { return 1.0 - s; };
  std::function<double(double)> beta = [](double s) { return s; };
  double energy_shift = 0.0;  // added to every problem level, for spectral plots
};

inline void validate_schedule(const Schedule& sched) {
  const double tol = 1e-12;
  if (std::abs(sched.alpha(0.0) - 1.0) > tol || std::abs(sched.beta(0.0)) > tol ||
      std::abs(sched.alpha(1.0)) > tol || std::abs(sched.beta(1.0) - 1.0) > tol)
    throw validation_error("schedule must satisfy alpha(0)=1, beta(0)=0, alpha(1)=0, beta(1)=1");
}

/// V |psi>; sigma_x^i maps the amplitude at z to the one at z with bit i
/// flipped, weight -B_i, and likewise for the two-flip coupling terms.
inline StateVector apply_driver(const DriverParams& p, const StateVector& psi) {
  const int n = p.n();
  if (psi.n != n || psi.dim() != dim_of(n))
    throw validation_error("apply_driver: dimension mismatch");
  StateVector out(n);
  const std::size_t dim = psi.dim();
  for (int i = 0; i < n; ++i) {
    const double w = p.B[i];
    if (w == 0.0) continue;
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t z = 0; z < dim; ++z) out[z] -= w * psi[z ^ bit];
  }
  if (!p.J.empty()) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double w = p.coupling(i, j);
        if (w == 0.0) continue;
        const std::size_t mask = (std::size_t{1} << i) | (std::size_t{1} << j);
        for (std::size_t z = 0; z < dim; ++z) out[z] -= w * psi[z ^ mask];
      }
  }
  return out;
}

// Same action on a real vector; used for driver matrix elements between
// eigenvectors.
inline Eigen::VectorXd apply_driver_real(const DriverParams& p, const Eigen::VectorXd& v) {
  const int n = p.n();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (int i = 0; i < n; ++i) {
    const double w = p.B[i];
    if (w == 0.0) continue;
    const std::ptrdiff_t bit = std::ptrdiff_t{1} << i;
    for (std::ptrdiff_t z = 0; z < v.size(); ++z) out[z] -= w * v[z ^ bit];
  }
  if (!p.J.empty()) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double w = p.coupling(i, j);
        if (w == 0.0) continue;
        const std::ptrdiff_t mask = (std::ptrdiff_t{1} << i) | (std::ptrdiff_t{1} << j);
        for (std::ptrdiff_t z = 0; z < v.size(); ++z) out[z] -= w * v[z ^ mask];
      }
  }
  return out;
}

/// (H_P + shift) |psi>: diagonal action of the cost levels.
inline StateVector apply_problem(const CostSpectrum& costs, const StateVector& psi,
                                 double energy_shift = 0.0) {
  if (psi.dim() != costs.costs.size())
    throw validation_error("apply_problem: dimension mismatch");
  StateVector out(psi.n);
  for (std::size_t z = 0; z < psi.dim(); ++z)
    out[z] = (static_cast<double>(costs.costs[z]) + energy_shift) * psi[z];
  return out;
}

/// H(s) |psi> = alpha(s) V |psi> + beta(s) (H_P + shift) |psi>.
inline StateVector apply_hamiltonian(double s, const Schedule& sched, const DriverParams& p,
                                     const CostSpectrum& costs, const StateVector& psi) {
  const double alpha = sched.alpha(s);
  const double beta = sched.beta(s);
  StateVector out = apply_driver(p, psi);
  for (std::size_t z = 0; z < psi.dim(); ++z) {
    out[z] = alpha * out[z] +
             beta * (static_cast<double>(costs.costs[z]) + sched.energy_shift) * psi[z];
  }
  return out;
}

constexpr int kMaxDenseQubits = 12;

/// Explicit 2^n x 2^n matrix of H(s); real symmetric by construction.
/// Test oracle and the working representation for the spectral module.
inline Eigen::MatrixXd dense_hamiltonian(double s, const Schedule& sched, const DriverParams& p,
                                         const CostSpectrum& costs) {
  const int n = p.n();
  if (n > kMaxDenseQubits)
    throw capacity_error("dense_hamiltonian: n > " + std::to_string(kMaxDenseQubits));
  if (costs.costs.size() != dim_of(n))
    throw validation_error("dense_hamiltonian: cost table size mismatch");
  const double alpha = sched.alpha(s);
  const double beta = sched.beta(s);
  const auto dim = static_cast<Eigen::Index>(dim_of(n));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index z = 0; z < dim; ++z) {
    h(z, z) = beta * (static_cast<double>(costs.costs[static_cast<std::size_t>(z)]) +
                      sched.energy_shift);
    for (int i = 0; i < n; ++i) {
      const Eigen::Index zi = z ^ (Eigen::Index{1} << i);
      h(zi, z) -= alpha * p.B[i];
    }
    if (!p.J.empty()) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const Eigen::Index zij = z ^ (Eigen::Index{1} << i) ^ (Eigen::Index{1} << j);
          h(zij, z) -= alpha * p.coupling(i, j);
        }
    }
  }
  return h;
}

/// In-place unnormalized Walsh-Hadamard transform (sum/difference butterflies).
/// Applying it twice multiplies by 2^n; callers fold the exact 2^-n scale into
/// an adjacent diagonal pass so normalization costs no extra rounding.
inline void walsh_hadamard(complex_t* a, std::size_t dim) {
  for (std::size_t len = 1; len < dim; len <<= 1) {
    for (std::size_t base = 0; base < dim; base += len << 1) {
      for (std::size_t k = base; k < base + len; ++k) {
        const complex_t x = a[k];
        const complex_t y = a[k + len];
        a[k] = x + y;
        a[k + len] = x - y;
      }
    }
  }
}

/// Driver eigenvalues on the Walsh index for the transverse-only case
/// (J = 0): the n-fold Hadamard maps each sx_i to sz_i, so V is diagonal with
/// value -sum_i B_i (1 - 2 w_i). This is the diagonalization service behind
/// the split-step propagator.
inline std::vector<double> driver_walsh_diagonal(const DriverParams& p) {
  if (!p.transverse_only())
    throw validation_error("driver_walsh_diagonal: requires J = 0");
  const int n = p.n();
  const std::size_t dim = dim_of(n);
  std::vector<double> diag(dim);
  diag[0] = 0.0;
  for (int i = 0; i < n; ++i) diag[0] -= p.B[i];
  for (std::size_t w = 1; w < dim; ++w) {
    const int i = std::countr_zero(w);
    diag[w] = diag[w & (w - 1)] + 2.0 * p.B[i];
  }
  return diag;
}

}  // namespace aqsp
