#include <doctest.h>

#include <vector>

#include "smallflow/gf2/field.hpp"
#include "smallflow/gf2/kernels.hpp"
#include "smallflow/rng.hpp"

namespace kernels = smallflow::gf2::kernels;

namespace {

using u128 = unsigned __int128;

// Independent reference: bit-serial product, long-division reduction.
std::uint64_t oracle_mul(std::uint64_t a, std::uint64_t b) {
  u128 p = smallflow::gf2::clmul_reference(a, b);
  const u128 f = (static_cast<u128>(1) << 64) | kernels::kReductionTail;
  for (int i = 127; i >= 64; --i) {
    if ((p >> i) & 1) p ^= f << (i - 64);
  }
  return static_cast<std::uint64_t>(p);
}

std::vector<std::uint64_t> random_words(smallflow::Rng& rng, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) {
    switch (rng() % 8) {
      case 0: x = 0; break;
      case 1: x = ~std::uint64_t{0}; break;
      case 2: x = std::uint64_t{1} << (rng() % 64); break;
      default: x = rng();
    }
  }
  return v;
}

}  // namespace

TEST_CASE("scalar kernel matches the bit-serial oracle") {
  const auto& t = kernels::scalar_table();
  auto rng = smallflow::make_rng(1);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t a = rng();
    const std::uint64_t b = rng();
    REQUIRE(t.mul(a, b) == oracle_mul(a, b));
  }
  CHECK(t.mul(~std::uint64_t{0}, ~std::uint64_t{0}) ==
        oracle_mul(~std::uint64_t{0}, ~std::uint64_t{0}));
}

TEST_CASE("every supported ISA is bit-identical to the scalar kernel") {
  const auto& ref = kernels::scalar_table();
  const auto isas = kernels::supported_isas();
  REQUIRE(!isas.empty());
  CHECK(isas.front() == kernels::Isa::kScalar);
  auto rng = smallflow::make_rng(2);
  for (kernels::Isa isa : isas) {
    const kernels::KernelTable* t = kernels::table_for(isa);
    REQUIRE(t != nullptr);
    CAPTURE(t->name);
    for (int i = 0; i < 5000; ++i) {
      const std::uint64_t a = rng();
      const std::uint64_t b = rng();
      REQUIRE(t->mul(a, b) == ref.mul(a, b));
    }
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      const auto a = random_words(rng, n);
      const auto b = random_words(rng, n);
      REQUIRE(t->dot(a.data(), b.data(), n) == ref.dot(a.data(), b.data(), n));

      std::uint64_t expect = 0;
      for (std::size_t i = 0; i < n; ++i) expect ^= oracle_mul(a[i], b[i]);
      REQUIRE(t->dot(a.data(), b.data(), n) == expect);

      const std::uint64_t s = rng();
      auto y1 = random_words(rng, n);
      auto y2 = y1;
      t->axpy(y1.data(), s, a.data(), n);
      ref.axpy(y2.data(), s, a.data(), n);
      REQUIRE(y1 == y2);

      std::vector<std::uint64_t> p1(n), p2(n);
      t->mul_elementwise(p1.data(), a.data(), b.data(), n);
      ref.mul_elementwise(p2.data(), a.data(), b.data(), n);
      REQUIRE(p1 == p2);

      // In-place use.
      auto inplace = a;
      t->mul_elementwise(inplace.data(), inplace.data(), b.data(), n);
      REQUIRE(inplace == p2);
    }
  }
}

TEST_CASE("dispatch can be pinned and restored") {
  const kernels::Isa best = kernels::supported_isas().back();
  REQUIRE(kernels::force_isa(kernels::Isa::kScalar));
  CHECK(kernels::active().isa == kernels::Isa::kScalar);
  const smallflow::gf2::Field pinned;
  CHECK(pinned.accelerated());
  REQUIRE(kernels::force_isa(best));
  CHECK(kernels::active().isa == best);
  CHECK(kernels::isa_name(kernels::Isa::kAvx2Vpclmul) == "avx2");
}
