#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

#include "smallflow/gf2/kernels.hpp"

namespace smallflow::gf2 {

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// GF(2^s) for 1 <= s <= 64. The reduction polynomial is x^s + tail; the
// leading term is implicit so that s = 64 fits in a word.
class FieldSpec {
 public:
  // Throws FieldError if tail does not give an irreducible polynomial. For
  // s <= 16 irreducibility is checked by trial division; above that only the
  // polynomials in the built-in list are accepted.
  FieldSpec(unsigned exponent, std::uint64_t tail);

  // Built-in polynomial for s in {8, 16, 32, 64}, or the lexicographically
  // smallest irreducible tail for other s <= 16.
  static FieldSpec standard(unsigned exponent);

  unsigned exponent() const { return exponent_; }
  std::uint64_t tail() const { return tail_; }
  // All-ones mask of width s.
  std::uint64_t mask() const {
    return exponent_ == 64 ? ~std::uint64_t{0}
                           : (std::uint64_t{1} << exponent_) - 1;
  }
  // Polynomial as a bitmask including x^s; only meaningful for s < 64.
  std::uint64_t polynomial_bits() const;
  std::string describe() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  unsigned exponent_;
  std::uint64_t tail_;
};

// Exhaustive trial division by every polynomial of degree <= s/2.
// Requires 1 <= s <= 32.
bool is_irreducible_small(unsigned s, std::uint64_t tail);

struct FieldElement {
  std::uint64_t bits = 0;

  bool is_zero() const { return bits == 0; }
  friend bool operator==(FieldElement, FieldElement) = default;
};

class Field {
 public:
  explicit Field(FieldSpec spec);
  Field() : Field(FieldSpec::standard(64)) {}

  const FieldSpec& spec() const { return spec_; }
  unsigned exponent() const { return spec_.exponent(); }
  // True when the vectorized GF(2^64) kernels are in use.
  bool accelerated() const { return kernels_ != nullptr; }

  FieldElement element(std::uint64_t bits) const;
  static FieldElement zero() { return {}; }
  static FieldElement one() { return {1}; }

  static FieldElement add(FieldElement a, FieldElement b) {
    return {a.bits ^ b.bits};
  }
  FieldElement mul(FieldElement a, FieldElement b) const {
    return {mul_raw(a.bits, b.bits)};
  }
  FieldElement pow(FieldElement a, std::uint64_t e) const;
  // Throws FieldError on zero.
  FieldElement inverse(FieldElement a) const;

  template <class Rng>
  FieldElement random_element(Rng& rng) const {
    static_assert(Rng::max() == ~std::uint64_t{0} && Rng::min() == 0,
                  "expects a full 64-bit generator");
    return {static_cast<std::uint64_t>(rng()) & spec_.mask()};
  }

  // Raw-word operations used by the dynamic programs. Inputs must already be
  // reduced (< 2^s).
  std::uint64_t mul_raw(std::uint64_t a, std::uint64_t b) const {
    return kernels_ != nullptr ? kernels_->mul(a, b) : generic_mul(a, b);
  }
  std::uint64_t dot(std::span<const std::uint64_t> a,
                    std::span<const std::uint64_t> b) const;
  void axpy(std::span<std::uint64_t> y, std::uint64_t a,
            std::span<const std::uint64_t> x) const;
  void mul_elementwise(std::span<std::uint64_t> out,
                       std::span<const std::uint64_t> a,
                       std::span<const std::uint64_t> b) const;

 private:
  std::uint64_t generic_mul(std::uint64_t a, std::uint64_t b) const;

  FieldSpec spec_;
  const kernels::KernelTable* kernels_ = nullptr;
};

// Carryless 64x64 -> 128 product, bit-serial. Exposed for tests.
unsigned __int128 clmul_reference(std::uint64_t a, std::uint64_t b);

}  // namespace smallflow::gf2
