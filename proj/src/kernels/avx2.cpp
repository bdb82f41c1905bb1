// Built with -mavx2 -mpclmul -mvpclmulqdq.
#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "variants.hpp"

namespace smallflow::gf2::kernels {
namespace {

inline __m256i reduce(__m256i p, __m256i r) {
  const __m256i t = _mm256_clmulepi64_epi128(p, r, 0x01);
  const __m256i u = _mm256_clmulepi64_epi128(t, r, 0x01);
  return _mm256_xor_si256(p, _mm256_xor_si256(t, u));
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

inline __m256i broadcast_tail() {
  return _mm256_set1_epi64x(static_cast<long long>(kReductionTail));
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a));
  const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b));
  return low(reduce128(_mm_clmulepi64_si128(va, vb, 0x00)));
}

std::uint64_t dot(const std::uint64_t* a, const std::uint64_t* b,
                  std::size_t n) {
  __m256i acc0 = _mm256_setzero_si256();
  __m256i acc1 = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc0 = _mm256_xor_si256(acc0, _mm256_clmulepi64_epi128(va, vb, 0x00));
    acc1 = _mm256_xor_si256(acc1, _mm256_clmulepi64_epi128(va, vb, 0x11));
  }
  const __m256i acc = _mm256_xor_si256(acc0, acc1);
  __m128i folded = _mm_xor_si128(_mm256_castsi256_si128(acc),
                                 _mm256_extracti128_si256(acc, 1));
  for (; i < n; ++i) {
    const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a[i]));
    const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b[i]));
    folded = _mm_xor_si128(folded, _mm_clmulepi64_si128(va, vb, 0x00));
  }
  return low(reduce128(folded));
}

void axpy(std::uint64_t* y, std::uint64_t a, const std::uint64_t* x,
          std::size_t n) {
  const __m256i r = broadcast_tail();
  const __m256i va = _mm256_set1_epi64x(static_cast<long long>(a));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i vx =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    const __m256i p0 = reduce(_mm256_clmulepi64_epi128(vx, va, 0x00), r);
    const __m256i p1 = reduce(_mm256_clmulepi64_epi128(vx, va, 0x01), r);
    __m256i* out = reinterpret_cast<__m256i*>(y + i);
    _mm256_storeu_si256(out, _mm256_xor_si256(_mm256_loadu_si256(out),
                                              _mm256_unpacklo_epi64(p0, p1)));
  }
  for (; i < n; ++i) y[i] ^= mul(a, x[i]);
}

void mul_elementwise(std::uint64_t* out, const std::uint64_t* a,
                     const std::uint64_t* b, std::size_t n) {
  const __m256i r = broadcast_tail();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i p0 = reduce(_mm256_clmulepi64_epi128(va, vb, 0x00), r);
    const __m256i p1 = reduce(_mm256_clmulepi64_epi128(va, vb, 0x11), r);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        _mm256_unpacklo_epi64(p0, p1));
  }
  for (; i < n; ++i) out[i] = mul(a[i], b[i]);
}

constexpr KernelTable kTable{Isa::kAvx2Vpclmul, "avx2", &mul, &dot, &axpy,
                             &mul_elementwise};

}  // namespace

const KernelTable& avx2_table() { return kTable; }

}  // namespace smallflow::gf2::kernels
