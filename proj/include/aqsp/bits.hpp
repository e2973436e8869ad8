#pragma once

#include <bit>
#include <cstdint>

namespace aqsp {

// Bitstring-to-index convention, fixed project-wide: bit j of the integer
// index is z_j (little-endian).
inline int bit_of(std::uint32_t z, int j) { return static_cast<int>((z >> j) & 1u); }

// Spin value s_j = 1 - 2 z_j.
inline int spin_of(std::uint32_t z, int j) { return 1 - 2 * bit_of(z, j); }

inline std::uint32_t flip_bit(std::uint32_t z, int j) { return z ^ (std::uint32_t{1} << j); }

// All-bits-flipped partner of z on n qubits.
inline std::uint32_t complement(std::uint32_t z, int n) {
  return z ^ ((n >= 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1u));
}

inline std::size_t dim_of(int n) { return std::size_t{1} << n; }

// splitmix64: cheap stateless mixer for deriving per-task seeds from a master
// seed. Not used for sampling itself, only for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(master ^ splitmix64(a ^ splitmix64(b)));
}

}  // namespace aqsp
