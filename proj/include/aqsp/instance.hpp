#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "aqsp/bits.hpp"
#include "aqsp/errors.hpp"

namespace aqsp {

/// One set-partition instance: n integers alpha_j of b-bit precision.
/// The working reals are a_j = alpha_j * 2^-b in (0, 1], kept exact by
/// storing the integers and scaling only at the point of use.
struct SppInstance {
  int n = 0;
  int b = 0;
  std::vector<std::int64_t> alphas;
  std::uint64_t seed = 0;

  double a(int j) const { return std::ldexp(static_cast<double>(alphas[j]), -b); }
  std::int64_t alpha_sum() const {
    return std::accumulate(alphas.begin(), alphas.end(), std::int64_t{0});
  }
  // A = sum_j a_j.
  double a_sum() const { return std::ldexp(static_cast<double>(alpha_sum()), -b); }
};

namespace detail {
inline void check_instance_shape(int n, int b) {
  if (n < 1 || n > 30) throw validation_error("n must be in [1, 30], got " + std::to_string(n));
  if (b < 1 || b > 62) throw validation_error("b must be in [1, 62], got " + std::to_string(b));
  // Residue sums must fit signed 64-bit: n * 2^b < 2^62.
  if ((static_cast<unsigned __int128>(n) << b) >= (static_cast<unsigned __int128>(1) << 62))
    throw validation_error("n * 2^b >= 2^62: residue sums would risk 64-bit overflow");
}
}  // namespace detail

inline void validate_instance(const SppInstance& inst) {
  detail::check_instance_shape(inst.n, inst.b);
  if (static_cast<int>(inst.alphas.size()) != inst.n)
    throw validation_error("alphas size != n");
  const std::int64_t hi = std::int64_t{1} << inst.b;
  for (std::int64_t a : inst.alphas)
    if (a < 1 || a > hi)
      throw validation_error("alpha out of [1, 2^b]: " + std::to_string(a));
}

/// Draws n integers uniformly from [1, 2^b], deterministic for a fixed seed.
/// The mapping from raw PRNG words to values is pinned here (low b bits of
/// mt19937_64 output) so instances reproduce bit-exactly across platforms.
inline SppInstance generate_instance(int n, int b, std::uint64_t seed) {
  detail::check_instance_shape(n, b);
  SppInstance inst;
  inst.n = n;
  inst.b = b;
  inst.seed = seed;
  inst.alphas.resize(n);
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = (b == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << b) - 1);
  for (int j = 0; j < n; ++j) {
    // 2^b divides 2^64, so masking is exactly uniform over [0, 2^b).
    inst.alphas[j] = 1 + static_cast<std::int64_t>(rng() & mask);
  }
  return inst;
}

/// Signed integer residue sum_j (1 - 2 z_j) alpha_j. The real-valued residue
/// is this times 2^-b.
inline std::int64_t residue(const SppInstance& inst, std::uint32_t z) {
  std::int64_t r = 0;
  for (int j = 0; j < inst.n; ++j) r += spin_of(z, j) * inst.alphas[j];
  return r;
}

/// Residues for all 2^n bitstrings plus the |residue|-sorted permutation.
struct ResidueTable {
  int n = 0;
  int b = 0;
  std::vector<std::int64_t> residues;       // indexed by bitstring
  std::vector<std::uint32_t> sorted_order;  // bitstrings by increasing |residue|

  // Residue in a-units for a bitstring.
  double omega(std::uint32_t z) const {
    return std::ldexp(static_cast<double>(residues[z]), -b);
  }
};

constexpr int kMaxEnumerationQubits = 26;

inline ResidueTable enumerate_residues(const SppInstance& inst) {
  validate_instance(inst);
  if (inst.n > kMaxEnumerationQubits)
    throw capacity_error("enumerate_residues: n > " + std::to_string(kMaxEnumerationQubits));
  const std::size_t dim = dim_of(inst.n);
  ResidueTable table;
  table.n = inst.n;
  table.b = inst.b;
  table.residues.resize(dim);
  table.residues[0] = inst.alpha_sum();
  for (std::size_t z = 1; z < dim; ++z) {
    // Clearing the lowest set bit turns its spin from -1 back to +1.
    const int j = std::countr_zero(z);
    table.residues[z] = table.residues[z & (z - 1)] - 2 * inst.alphas[j];
  }
  table.sorted_order.resize(dim);
  for (std::size_t z = 0; z < dim; ++z) table.sorted_order[z] = static_cast<std::uint32_t>(z);
  std::stable_sort(table.sorted_order.begin(), table.sorted_order.end(),
                   [&](std::uint32_t lhs, std::uint32_t rhs) {
                     const std::int64_t la = std::abs(table.residues[lhs]);
                     const std::int64_t ra = std::abs(table.residues[rhs]);
                     if (la != ra) return la < ra;
                     return lhs < rhs;  // ties by ascending bitstring index
                   });
  return table;
}

struct BruteForceResult {
  std::int64_t min_abs_residue = 0;
  std::vector<std::uint32_t> optimal;  // every bitstring attaining the minimum
};

/// Exact classical oracle by exhaustive enumeration; includes both members of
/// each complement pair. Gray-code walk, one spin flip per visited bitstring.
inline BruteForceResult brute_force_min_residue(const SppInstance& inst) {
  validate_instance(inst);
  if (inst.n > kMaxEnumerationQubits)
    throw capacity_error("brute_force_min_residue: n > " + std::to_string(kMaxEnumerationQubits));
  const std::size_t dim = dim_of(inst.n);
  BruteForceResult out;
  std::uint32_t gray = 0;
  std::int64_t r = inst.alpha_sum();  // residue at z = 0...0
  std::int64_t best = std::abs(r);
  out.optimal.push_back(0);
  for (std::size_t i = 1; i < dim; ++i) {
    const int j = std::countr_zero(i);
    const std::uint32_t bit = std::uint32_t{1} << j;
    gray ^= bit;
    r += (gray & bit) ? -2 * inst.alphas[j] : 2 * inst.alphas[j];
    const std::int64_t abs_r = std::abs(r);
    if (abs_r < best) {
      best = abs_r;
      out.optimal.clear();
    }
    if (abs_r == best) out.optimal.push_back(gray);
  }
  std::sort(out.optimal.begin(), out.optimal.end());
  out.min_abs_residue = best;
  return out;
}

}  // namespace aqsp
