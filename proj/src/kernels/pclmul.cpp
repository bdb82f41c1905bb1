// Built with -mpclmul -msse4.1.
#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "variants.hpp"

namespace smallflow::gf2::kernels {
namespace {

inline __m128i reduction_constant() {
  return _mm_set_epi64x(0, static_cast<long long>(kReductionTail));
}

// Low qword of the result holds p mod the field polynomial; the high qword is
// garbage.
inline __m128i reduce(__m128i p, __m128i r) {
  const __m128i t = _mm_clmulepi64_si128(p, r, 0x01);  // hi(p) * tail
  const __m128i u = _mm_clmulepi64_si128(t, r, 0x01);  // hi(t) * tail, < 2^8
  return _mm_xor_si128(p, _mm_xor_si128(t, u));
}

inline std::uint64_t low(__m128i v) {
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(v));
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a));
  const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b));
  return low(reduce(_mm_clmulepi64_si128(va, vb, 0x00), reduction_constant()));
}

std::uint64_t dot(const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t n) {
  __m128i acc0 = _mm_setzero_si128();
  __m128i acc1 = _mm_setzero_si128();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
    const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i));
    acc0 = _mm_xor_si128(acc0, _mm_clmulepi64_si128(va, vb, 0x00));
    acc1 = _mm_xor_si128(acc1, _mm_clmulepi64_si128(va, vb, 0x11));
  }
  if (i < n) {
    const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a[i]));
    const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b[i]));
    acc0 = _mm_xor_si128(acc0, _mm_clmulepi64_si128(va, vb, 0x00));
  }
  return low(reduce(_mm_xor_si128(acc0, acc1), reduction_constant()));
}

void axpy(std::uint64_t* y, std::uint64_t a, const std::uint64_t* x,
          std::size_t n) {
  const __m128i r = reduction_constant();
  const __m128i va = _mm_set1_epi64x(static_cast<long long>(a));
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128i vx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(x + i));
    const __m128i p0 = reduce(_mm_clmulepi64_si128(vx, va, 0x00), r);
    const __m128i p1 = reduce(_mm_clmulepi64_si128(vx, va, 0x01), r);
    __m128i* out = reinterpret_cast<__m128i*>(y + i);
    _mm_storeu_si128(out, _mm_xor_si128(_mm_loadu_si128(out),
                                         _mm_unpacklo_epi64(p0, p1)));
  }
  if (i < n) y[i] ^= mul(a, x[i]);
}

void mul_elementwise(std::uint64_t* out, const std::uint64_t* a,
                     const std::uint64_t* b, std::size_t n) {
  const __m128i r = reduction_constant();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
    const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i));
    const __m128i p0 = reduce(_mm_clmulepi64_si128(va, vb, 0x00), r);
    const __m128i p1 = reduce(_mm_clmulepi64_si128(va, vb, 0x11), r);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i),
                     _mm_unpacklo_epi64(p0, p1));
  }
  if (i < n) out[i] = mul(a[i], b[i]);
}

constexpr KernelTable kTable{Isa::kPclmul, "pclmul", &mul, &dot, &axpy,
                             &mul_elementwise};

}  // namespace

const KernelTable& pclmul_table() { return kTable; }

}  // namespace smallflow::gf2::kernels
