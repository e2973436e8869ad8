#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "aqsp/errors.hpp"
#include "aqsp/instance.hpp"

namespace aqsp {

/// Coarse-grained density of states: residue counts per window of width
/// delta_omega, in a-units.
struct DosHistogram {
  double window = 0.0;  // delta-omega
  std::vector<double> bin_centers;
  std::vector<double> counts_per_unit;  // counts / window
  double sigma2 = 0.0;                  // (1/n) sum a_j^2
  int n = 0;
};

/// (1/n) sum_j a_j^2, the self-averaging variance of the residue spread.
inline double residue_variance(const SppInstance& inst) {
  long double acc = 0.0L;
  for (int j = 0; j < inst.n; ++j) {
    const long double a = static_cast<long double>(inst.alphas[j]) * std::ldexp(1.0L, -inst.b);
    acc += a * a;
  }
  return static_cast<double>(acc / inst.n);
}

/// Legal window range: well above the residue spacing, well below the full
/// residue spread.
inline void check_dos_window(int n, double window) {
  const double spacing = std::sqrt(static_cast<double>(n)) * std::ldexp(1.0, -n);
  if (window < 10.0 * spacing)
    throw validation_error("dos window too small: must be >= 10 sqrt(n) 2^-n");
  if (window > std::sqrt(static_cast<double>(n)) / 10.0)
    throw validation_error("dos window too large: must be <= sqrt(n)/10");
}

inline double default_dos_window(int n) {
  const double s = std::sqrt(static_cast<double>(n));
  return s * std::min(1000.0 * std::ldexp(1.0, -n), 0.05);
}

/// Histogram of all signed residues with bin edges at integer multiples of
/// the window.
inline DosHistogram coarse_grained_dos(const SppInstance& inst, const ResidueTable& table,
                                       double window) {
  if (table.residues.size() != dim_of(inst.n))
    throw validation_error("coarse_grained_dos: table does not match instance");
  check_dos_window(inst.n, window);

  DosHistogram hist;
  hist.window = window;
  hist.n = inst.n;
  hist.sigma2 = residue_variance(inst);

  const double scale = std::ldexp(1.0, -inst.b);
  const auto bin_index = [&](std::int64_t r) {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(r) * scale / window));
  };
  // max |omega| = A, attained at z = 0
  const std::int64_t lo = bin_index(-table.residues[0]);
  const std::int64_t hi = bin_index(table.residues[0]);
  const std::size_t nbins = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::int64_t> counts(nbins, 0);
  for (std::int64_t r : table.residues) ++counts[static_cast<std::size_t>(bin_index(r) - lo)];

  hist.bin_centers.resize(nbins);
  hist.counts_per_unit.resize(nbins);
  for (std::size_t i = 0; i < nbins; ++i) {
    hist.bin_centers[i] = (static_cast<double>(lo + static_cast<std::int64_t>(i)) + 0.5) * window;
    hist.counts_per_unit[i] = static_cast<double>(counts[i]) / window;
  }
  return hist;
}

/// Gaussian coarse-grained density 2^n / sqrt(2 pi n sigma^2) *
/// exp(-omega^2 / (2 n sigma^2)).
inline double gaussian_dos(double omega, int n, double sigma2) {
  if (sigma2 <= 0.0) throw validation_error("gaussian_dos: sigma2 must be positive");
  const double var = n * sigma2;
  return std::ldexp(1.0, n) / std::sqrt(2.0 * std::numbers::pi * var) * std::exp(-omega * omega / (2.0 * var));
}

/// I(w) = prod_j cos(a_j w): the residue characteristic function whose
/// secondary resonances flag approximate common divisors.
inline double characteristic_function(const SppInstance& inst, double w) {
  long double prod = 1.0L;
  for (int j = 0; j < inst.n; ++j) {
    const long double a = static_cast<long double>(inst.alphas[j]) * std::ldexp(1.0L, -inst.b);
    prod *= std::cos(a * static_cast<long double>(w));
  }
  return static_cast<double>(prod);
}

/// One approximate-g.c.d. candidate: how far each a_j sits from the nearest
/// integer multiple of q, and whether the resonance condition
/// (pi^2/2) sum r_j^2 <= 1 holds.
struct ResonanceReport {
  double q = 0.0;
  std::vector<double> residues;  // r_j in [0, q/2]
  double strength = 0.0;         // (pi^2/2) sum r_j^2
  bool passes = false;
};

inline std::vector<ResonanceReport> approximate_gcd_scan(const SppInstance& inst,
                                                         const std::vector<double>& q_candidates) {
  std::vector<ResonanceReport> reports;
  reports.reserve(q_candidates.size());
  for (double q : q_candidates) {
    if (q <= 0.0) throw validation_error("approximate_gcd_scan: candidates must be positive");
    ResonanceReport rep;
    rep.q = q;
    rep.residues.resize(inst.n);
    long double sum_sq = 0.0L;
    for (int j = 0; j < inst.n; ++j) {
      const double a = inst.a(j);
      const double r = std::abs(a - q * std::round(a / q));
      rep.residues[j] = r;
      sum_sq += static_cast<long double>(r) * r;
    }
    rep.strength = static_cast<double>(0.5L * std::numbers::pi_v<long double> * std::numbers::pi_v<long double> * sum_sq);
    rep.passes = rep.strength <= 1.0;
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace aqsp
