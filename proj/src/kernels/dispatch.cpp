#include <atomic>
#include <cstdlib>
#include <string_view>

#include "smallflow/gf2/kernels.hpp"
#include "variants.hpp"

namespace smallflow::gf2::kernels {
namespace {

bool cpu_supports(Isa isa) {
#if defined(SMALLFLOW_X86_KERNELS)
  __builtin_cpu_init();
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kPclmul:
      return __builtin_cpu_supports("pclmul") &&
             __builtin_cpu_supports("sse4.1");
    case Isa::kAvx2Vpclmul:
      return __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("pclmul") &&
             __builtin_cpu_supports("vpclmulqdq");
    case Isa::kAvx512Vpclmul:
      return __builtin_cpu_supports("avx512f") &&
             __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("pclmul") &&
             __builtin_cpu_supports("vpclmulqdq");
  }
  return false;
#else
  return isa == Isa::kScalar;
#endif
}

const KernelTable* resolve() {
  const char* env = std::getenv("SMALLFLOW_ISA");
  if (env != nullptr) {
    const std::string_view want(env);
    for (Isa isa : supported_isas()) {
      if (isa_name(isa) == want) return table_for(isa);
    }
  }
  return table_for(supported_isas().back());
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kPclmul:
      return "pclmul";
    case Isa::kAvx2Vpclmul:
      return "avx2";
    case Isa::kAvx512Vpclmul:
      return "avx512";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  if (!cpu_supports(isa)) return nullptr;
  switch (isa) {
    case Isa::kScalar:
      return &scalar_table();
#if defined(SMALLFLOW_X86_KERNELS)
    case Isa::kPclmul:
      return &pclmul_table();
    case Isa::kAvx2Vpclmul:
      return &avx2_table();
    case Isa::kAvx512Vpclmul:
      return &avx512_table();
#else
    default:
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kPclmul, Isa::kAvx2Vpclmul,
                  Isa::kAvx512Vpclmul}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = resolve();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

bool force_isa(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) return false;
  g_active.store(t, std::memory_order_release);
  return true;
}

}  // namespace smallflow::gf2::kernels
