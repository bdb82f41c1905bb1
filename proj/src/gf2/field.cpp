#include "smallflow/gf2/field.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <sstream>

namespace smallflow::gf2 {
namespace {

using u128 = unsigned __int128;

struct KnownPolynomial {
  unsigned exponent;
  std::uint64_t tail;
};

// Verified irreducible by the Rabin test in the unit tests.
constexpr std::array<KnownPolynomial, 4> kBuiltIn{{
    {8, 0x1B},   // x^8 + x^4 + x^3 + x + 1
    {16, 0x2B},  // x^16 + x^5 + x^3 + x + 1
    {32, 0x8D},  // x^32 + x^7 + x^3 + x^2 + 1
    {64, 0x1B},  // x^64 + x^4 + x^3 + x + 1
}};

int degree(std::uint64_t p) { return 63 - std::countl_zero(p); }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const int db = degree(b);
  for (int da = degree(a); a != 0 && da >= db; da = degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

}  // namespace

unsigned __int128 clmul_reference(std::uint64_t a, std::uint64_t b) {
  u128 r = 0;
  for (int i = 0; i < 64; ++i) {
    if ((b >> i) & 1) r ^= static_cast<u128>(a) << i;
  }
  return r;
}

bool is_irreducible_small(unsigned s, std::uint64_t tail) {
  if (s < 1 || s > 32) throw FieldError("trial division supports 1 <= s <= 32");
  const std::uint64_t f = (std::uint64_t{1} << s) | tail;
  for (unsigned d = 1; d <= s / 2; ++d) {
    const std::uint64_t lo = std::uint64_t{1} << d;
    for (std::uint64_t g = lo; g < 2 * lo; ++g) {
      if (poly_mod(f, g) == 0) return false;
    }
  }
  return true;
}

FieldSpec::FieldSpec(unsigned exponent, std::uint64_t tail)
    : exponent_(exponent), tail_(tail) {
  if (exponent < 1 || exponent > 64) {
    throw FieldError("field exponent must be in [1, 64], got " +
                     std::to_string(exponent));
  }
  if (tail & ~mask()) {
    throw FieldError("reduction tail has bits at or above x^" +
                     std::to_string(exponent));
  }
  if (exponent <= 32) {
    if (!is_irreducible_small(exponent, tail)) {
      throw FieldError("reduction polynomial is reducible: " + describe());
    }
    return;
  }
  for (const auto& k : kBuiltIn) {
    if (k.exponent == exponent && k.tail == tail) return;
  }
  throw FieldError("no verified reduction polynomial for " + describe());
}

FieldSpec FieldSpec::standard(unsigned exponent) {
  for (const auto& k : kBuiltIn) {
    if (k.exponent == exponent) return FieldSpec(exponent, k.tail);
  }
  if (exponent >= 1 && exponent <= 16) {
    for (std::uint64_t tail = 0; tail < (std::uint64_t{1} << exponent);
         ++tail) {
      if (is_irreducible_small(exponent, tail)) return FieldSpec(exponent, tail);
    }
  }
  throw FieldError("no standard field of exponent " + std::to_string(exponent));
}

std::uint64_t FieldSpec::polynomial_bits() const {
  if (exponent_ == 64) throw FieldError("x^64 does not fit in a word");
  return (std::uint64_t{1} << exponent_) | tail_;
}

std::string FieldSpec::describe() const {
  std::ostringstream os;
  os << "x^" << exponent_;
  for (int i = 63; i >= 0; --i) {
    if ((tail_ >> i) & 1) {
      if (i == 0) {
        os << " + 1";
      } else if (i == 1) {
        os << " + x";
      } else {
        os << " + x^" << i;
      }
    }
  }
  return os.str();
}

Field::Field(FieldSpec spec) : spec_(spec) {
  if (spec_.exponent() == 64 && spec_.tail() == kernels::kReductionTail) {
    kernels_ = &kernels::active();
  }
}

FieldElement Field::element(std::uint64_t bits) const {
  if (bits & ~spec_.mask()) {
    throw FieldError("value does not fit in GF(2^" +
                     std::to_string(spec_.exponent()) + ")");
  }
  return {bits};
}

std::uint64_t Field::generic_mul(std::uint64_t a, std::uint64_t b) const {
  u128 p = clmul_reference(a, b);
  const unsigned s = spec_.exponent();
  const u128 tail = spec_.tail();
  for (int i = 2 * static_cast<int>(s) - 2; i >= static_cast<int>(s); --i) {
    if ((p >> i) & 1) {
      p ^= (static_cast<u128>(1) << i) ^ (tail << (i - s));
    }
  }
  return static_cast<std::uint64_t>(p);
}

FieldElement Field::pow(FieldElement a, std::uint64_t e) const {
  std::uint64_t result = 1;
  std::uint64_t base = a.bits;
  while (e != 0) {
    if (e & 1) result = mul_raw(result, base);
    base = mul_raw(base, base);
    e >>= 1;
  }
  return {result};
}

FieldElement Field::inverse(FieldElement a) const {
  if (a.is_zero()) throw FieldError("zero has no inverse");
  // a^(2^s - 2)
  return pow(a, spec_.mask() - 1);
}

std::uint64_t Field::dot(std::span<const std::uint64_t> a,
                         std::span<const std::uint64_t> b) const {
  const std::size_t n = std::min(a.size(), b.size());
  if (kernels_ != nullptr) return kernels_->dot(a.data(), b.data(), n);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc ^= generic_mul(a[i], b[i]);
  return acc;
}

void Field::axpy(std::span<std::uint64_t> y, std::uint64_t a,
                 std::span<const std::uint64_t> x) const {
  const std::size_t n = std::min(y.size(), x.size());
  if (a == 0) return;
  if (kernels_ != nullptr) {
    kernels_->axpy(y.data(), a, x.data(), n);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) y[i] ^= generic_mul(a, x[i]);
}

void Field::mul_elementwise(std::span<std::uint64_t> out,
                            std::span<const std::uint64_t> a,
                            std::span<const std::uint64_t> b) const {
  const std::size_t n = std::min({out.size(), a.size(), b.size()});
  if (kernels_ != nullptr) {
    kernels_->mul_elementwise(out.data(), a.data(), b.data(), n);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = generic_mul(a[i], b[i]);
}

}  // namespace smallflow::gf2
