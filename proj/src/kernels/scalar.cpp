#include <cstddef>
#include <cstdint>

#include "smallflow/gf2/kernels.hpp"

namespace smallflow::gf2::kernels {
namespace {

using u128 = unsigned __int128;

// Carryless 64x64 -> 128 product, 4-bit windows.
inline u128 clmul(std::uint64_t a, std::uint64_t b) {
  u128 table[16];
  table[0] = 0;
  table[1] = a;
  for (int i = 2; i < 16; ++i) {
    table[i] = (i & 1) ? (table[i - 1] ^ a) : (table[i / 2] << 1);
  }
  u128 acc = 0;
  for (int shift = 60; shift >= 0; shift -= 4) {
    acc <<= 4;
    acc ^= table[(b >> shift) & 0xF];
  }
  return acc;
}

// (hi * x^64 + lo) mod x^64 + x^4 + x^3 + x + 1
inline std::uint64_t reduce(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t over = (hi >> 60) ^ (hi >> 61) ^ (hi >> 63);
  hi ^= over;
  return lo ^ hi ^ (hi << 1) ^ (hi << 3) ^ (hi << 4);
}

inline std::uint64_t reduce(u128 v) {
  return reduce(static_cast<std::uint64_t>(v),
                static_cast<std::uint64_t>(v >> 64));
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) { return reduce(clmul(a, b)); }

std::uint64_t dot(const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t n) {
  u128 acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc ^= clmul(a[i], b[i]);
  return reduce(acc);
}

void axpy(std::uint64_t* y, std::uint64_t a, const std::uint64_t* x,
          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] ^= mul(a, x[i]);
}

void mul_elementwise(std::uint64_t* out, const std::uint64_t* a,
                     const std::uint64_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mul(a[i], b[i]);
}

constexpr KernelTable kTable{Isa::kScalar, "scalar", &mul, &dot, &axpy,
                             &mul_elementwise};

}  // namespace

const KernelTable& scalar_table() { return kTable; }

}  // namespace smallflow::gf2::kernels
