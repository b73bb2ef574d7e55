#pragma once

#include <bit>
#include <cstdint>

namespace cubespec {

using point_t = std::uint32_t;

// Hard cap on the cube dimension. 2^24 doubles is 128 MiB, the largest
// allocation any operation here is allowed to make.
inline constexpr int kMaxN = 24;

// Parity of the GF(2) inner product a.x (coordinate x_i is bit i-1).
inline int dot_f2(point_t a, point_t x) { return std::popcount(a & x) & 1; }

// Character chi_a(x) = (-1)^{a.x} as +1/-1.
inline int chi(point_t a, point_t x) { return dot_f2(a, x) ? -1 : 1; }

inline int weight(point_t x) { return std::popcount(x); }

// Index of the most significant set bit; v must be nonzero.
inline int pivot_bit(point_t v) { return std::bit_width(v) - 1; }

inline std::uint64_t cube_size(int n) { return std::uint64_t{1} << n; }

// Seed used whenever a caller does not supply one. Every randomized routine
// takes an explicit seed so runs are reproducible end to end.
inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ull;

}  // namespace cubespec
