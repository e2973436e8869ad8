#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aqsp/errors.hpp"
#include "aqsp/instance.hpp"

namespace aqsp {

/// Logarithmic-scale cost levels over the partition residues.
///
/// Level 0 is the ground window |omega| < delta with delta = sqrt(n) 2^-n K;
/// level k >= 1 covers the geometric band 2^(k-1) <= |omega|/delta < 2^k.
/// Residues stay exact integers; only the band comparison happens in
/// floating point (extended precision, boundaries resolved toward the upper
/// band per the half-open intervals).
struct CostSpectrum {
  double K = 20.0;
  long double delta = 0.0;            // in a-units
  int L = 0;                          // highest level; costs take values 0..L
  std::vector<std::uint8_t> costs;    // E_z per bitstring
  std::vector<std::int64_t> degeneracies;  // d_k, k = 0..L
  std::vector<std::uint32_t> ground_set;   // bitstrings with E_z = 0
  double A = 0.0;                     // total sum of a_j
  bool degenerate = false;            // every cost 0 (delta >= max |omega|)

  std::int64_t d0() const { return static_cast<std::int64_t>(ground_set.size()); }
  int num_levels() const { return L + 1; }
};

namespace detail {
// Band index for |omega| (a-units): 0 below delta, otherwise
// floor(log2(|omega|/delta)) + 1. Extended precision keeps the band edges
// honest for residues of up to 62 bits.
inline int cost_band(long double abs_omega, long double delta) {
  if (abs_omega < delta) return 0;
  const long double ratio = abs_omega / delta;
  return static_cast<int>(std::floor(std::log2(ratio))) + 1;
}
}  // namespace detail

inline long double cost_window_delta(int n, double K) {
  return std::sqrt(static_cast<long double>(n)) * std::ldexp(1.0L, -n) * K;
}

inline CostSpectrum build_cost_spectrum(const SppInstance& inst, const ResidueTable& table,
                                        double K = 20.0) {
  if (K <= 0) throw validation_error("K must be positive");
  if (table.n != inst.n || table.residues.size() != dim_of(inst.n))
    throw validation_error("residue table does not match instance");

  CostSpectrum spec;
  spec.K = K;
  spec.delta = cost_window_delta(inst.n, K);
  spec.A = inst.a_sum();

  const long double scale = std::ldexp(1.0L, -inst.b);  // alpha -> a units
  const long double a_total = static_cast<long double>(inst.alpha_sum()) * scale;
  const int top_band = detail::cost_band(a_total, spec.delta);
  if (top_band == 0) {
    // delta at or above the largest residue: the spectrum collapses to a
    // single level. Flagged, not fatal.
    spec.degenerate = true;
    spec.L = 0;
  } else {
    spec.L = top_band;
  }

  const std::size_t dim = dim_of(inst.n);
  spec.costs.resize(dim);
  spec.degeneracies.assign(spec.L + 1, 0);
  for (std::size_t z = 0; z < dim; ++z) {
    const long double abs_omega =
        static_cast<long double>(std::abs(table.residues[z])) * scale;
    const int band = detail::cost_band(abs_omega, spec.delta);
    spec.costs[z] = static_cast<std::uint8_t>(band);
    ++spec.degeneracies[band];
    if (band == 0) spec.ground_set.push_back(static_cast<std::uint32_t>(z));
  }
  return spec;
}

/// CSV export, columns k,d_k.
inline std::string cost_spectrum_csv(const CostSpectrum& spec) {
  std::string out = "k,d_k\n";
  for (int k = 0; k <= spec.L; ++k)
    out += std::to_string(k) + "," + std::to_string(spec.degeneracies[k]) + "\n";
  return out;
}

}  // namespace aqsp
