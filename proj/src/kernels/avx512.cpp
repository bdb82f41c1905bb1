// Built with -mavx512f -mpclmul -mvpclmulqdq.
#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "variants.hpp"

namespace smallflow::gf2::kernels {
namespace {

inline __m512i reduce(__m512i p, __m512i r) {
  const __m512i t = _mm512_clmulepi64_epi128(p, r, 0x01);
  const __m512i u = _mm512_clmulepi64_epi128(t, r, 0x01);
  return _mm512_xor_si512(p, _mm512_xor_si512(t, u));
}

inline __m128i reduce128(__m128i p) {
  const __m128i r = _mm_set_epi64x(0, static_cast<long long>(kReductionTail));
  const __m128i t = _mm_clmulepi64_si128(p, r, 0x01);
  const __m128i u = _mm_clmulepi64_si128(t, r, 0x01);
  return _mm_xor_si128(p, _mm_xor_si128(t, u));
}

inline std::uint64_t low(__m128i v) {
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(v));
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a));
  const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b));
  return low(reduce128(_mm_clmulepi64_si128(va, vb, 0x00)));
}

std::uint64_t dot(const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t n) {
  __m512i acc0 = _mm512_setzero_si512();
  __m512i acc1 = _mm512_setzero_si512();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512i va = _mm512_loadu_si512(a + i);
    const __m512i vb = _mm512_loadu_si512(b + i);
    acc0 = _mm512_xor_si512(acc0, _mm512_clmulepi64_epi128(va, vb, 0x00));
    acc1 = _mm512_xor_si512(acc1, _mm512_clmulepi64_epi128(va, vb, 0x11));
  }
  const __m512i acc = _mm512_xor_si512(acc0, acc1);
  const __m256i half = _mm256_xor_si256(_mm512_castsi512_si256(acc),
                                        _mm512_extracti64x4_epi64(acc, 1));
  __m128i folded = _mm_xor_si128(_mm256_castsi256_si128(half),
                                 _mm256_extracti128_si256(half, 1));
  for (; i < n; ++i) {
    const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a[i]));
    const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b[i]));
    folded = _mm_xor_si128(folded, _mm_clmulepi64_si128(va, vb, 0x00));
  }
  return low(reduce128(folded));
}

void axpy(std::uint64_t* y, std::uint64_t a, const std::uint64_t* x,
          std::size_t n) {
  const __m512i r = _mm512_set1_epi64(static_cast<long long>(kReductionTail));
  const __m512i va = _mm512_set1_epi64(static_cast<long long>(a));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512i vx = _mm512_loadu_si512(x + i);
    const __m512i p0 = reduce(_mm512_clmulepi64_epi128(vx, va, 0x00), r);
    const __m512i p1 = reduce(_mm512_clmulepi64_epi128(vx, va, 0x01), r);
    _mm512_storeu_si512(y + i,
                        _mm512_xor_si512(_mm512_loadu_si512(y + i),
                                         _mm512_unpacklo_epi64(p0, p1)));
  }
  for (; i < n; ++i) y[i] ^= mul(a, x[i]);
}

void mul_elementwise(std::uint64_t* out, const std::uint64_t* a,
                     const std::uint64_t* b, std::size_t n) {
  const __m512i r = _mm512_set1_epi64(static_cast<long long>(kReductionTail));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m512i va = _mm512_loadu_si512(a + i);
    const __m512i vb = _mm512_loadu_si512(b + i);
    const __m512i p0 = reduce(_mm512_clmulepi64_epi128(va, vb, 0x00), r);
    const __m512i p1 = reduce(_mm512_clmulepi64_epi128(va, vb, 0x11), r);
    _mm512_storeu_si512(out + i, _mm512_unpacklo_epi64(p0, p1));
  }
  for (; i < n; ++i) out[i] = mul(a[i], b[i]);
}

constexpr KernelTable kTable{Isa::kAvx512Vpclmul, "avx512", &mul, &dot, &axpy,
                             &mul_elementwise};

}  // namespace

const KernelTable& avx512_table() { return kTable; }

}  // namespace smallflow::gf2::kernels
