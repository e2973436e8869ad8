#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "aqsp/bits.hpp"
#include "aqsp/errors.hpp"

namespace aqsp {

using complex_t = std::complex<double>;

/// 2^n complex amplitudes indexed by bitstring (bit j of index = z_j).
struct StateVector {
  int n = 0;
  std::vector<complex_t> amps;

  StateVector() = default;
  explicit StateVector(int n_) : n(n_), amps(dim_of(n_)) {}

  std::size_t dim() const { return amps.size(); }
  complex_t& operator[](std::size_t z) { return amps[z]; }
  const complex_t& operator[](std::size_t z) const { return amps[z]; }
};

inline double norm_squared(const StateVector& psi) {
  // Pairwise summation keeps the reduction deterministic and accurate.
  struct Rec {
    static double sum(const complex_t* a, std::size_t len) {
      if (len <= 64) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += std::norm(a[i]);
        return s;
      }
      const std::size_t half = len / 2;
      return sum(a, half) + sum(a + half, len - half);
    }
  };
  return Rec::sum(psi.amps.data(), psi.amps.size());
}

inline double norm(const StateVector& psi) { return std::sqrt(norm_squared(psi)); }

inline complex_t inner_product(const StateVector& bra, const StateVector& ket) {
  if (bra.dim() != ket.dim()) throw validation_error("inner_product: dimension mismatch");
  struct Rec {
    static complex_t sum(const complex_t* a, const complex_t* b, std::size_t len) {
      if (len <= 64) {
        complex_t s{0.0, 0.0};
        for (std::size_t i = 0; i < len; ++i) s += std::conj(a[i]) * b[i];
        return s;
      }
      const std::size_t half = len / 2;
      return sum(a, b, half) + sum(a + half, b + half, len - half);
    }
  };
  return Rec::sum(bra.amps.data(), ket.amps.data(), bra.dim());
}

/// Uniform superposition 2^(-n/2) sum_z |z>, the driver ground state for
/// non-negative fields.
inline StateVector symmetric_state(int n) {
  if (n < 1) throw validation_error("symmetric_state: n must be >= 1");
  StateVector psi(n);
  const double amp = std::pow(2.0, -0.5 * n);
  for (auto& c : psi.amps) c = amp;
  return psi;
}

inline StateVector basis_state(int n, std::uint32_t z) {
  StateVector psi(n);
  psi[z] = 1.0;
  return psi;
}

inline void rescale(StateVector& psi, double factor) {
  for (auto& c : psi.amps) c *= factor;
}

inline void normalize(StateVector& psi) { rescale(psi, 1.0 / norm(psi)); }

}  // namespace aqsp
