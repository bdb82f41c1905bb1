#pragma once

#include "smallflow/gf2/kernels.hpp"

namespace smallflow::gf2::kernels {

// Defined in per-ISA translation units that are compiled with the matching
// target flags. Only touch them after the CPU check in dispatch.cpp.
#if defined(SMALLFLOW_X86_KERNELS)
const KernelTable& pclmul_table();
const KernelTable& avx2_table();
const KernelTable& avx512_table();
#endif

}  // namespace smallflow::gf2::kernels
