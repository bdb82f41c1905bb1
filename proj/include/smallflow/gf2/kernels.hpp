#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

// Bulk arithmetic in GF(2^64) = GF(2)[x] / (x^64 + x^4 + x^3 + x + 1).
//
// Every variant computes bit-identical results; the scalar table is the
// reference and the SIMD tables are selected at runtime from what the CPU
// supports. Setting SMALLFLOW_ISA=scalar|pclmul|avx2|avx512 in the
// environment pins the choice (falls back to the best supported one if the
// requested ISA is unavailable).
namespace smallflow::gf2::kernels {

enum class Isa { kScalar, kPclmul, kAvx2Vpclmul, kAvx512Vpclmul };

struct KernelTable {
  Isa isa;
  const char* name;
  std::uint64_t (*mul)(std::uint64_t a, std::uint64_t b);
  // sum_i a[i] * b[i], one modular reduction at the end.
  std::uint64_t (*dot)(const std::uint64_t* a, const std::uint64_t* b,
                       std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(std::uint64_t* y, std::uint64_t a, const std::uint64_t* x,
               std::size_t n);
  // out[i] = a[i] * b[i]; out may alias a or b.
  void (*mul_elementwise)(std::uint64_t* out, const std::uint64_t* a,
                          const std::uint64_t* b, std::size_t n);
};

// Low terms of the reduction polynomial (x^4 + x^3 + x + 1).
inline constexpr std::uint64_t kReductionTail = 0x1B;

const KernelTable& scalar_table();

// nullptr when the ISA is not compiled in or not supported by this CPU.
const KernelTable* table_for(Isa isa);

// Supported ISAs, scalar first.
std::vector<Isa> supported_isas();

// Active table; resolved once on first use.
const KernelTable& active();

// Overrides the active table for the rest of the process. Returns false when
// the ISA is unsupported (the active table is then left unchanged).
bool force_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace smallflow::gf2::kernels
