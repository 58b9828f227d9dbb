#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orthograph {

inline constexpr std::uint32_t kDefaultFieldCap = 8192;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
struct FieldTables;
}

class FieldElement;

/**
 * GF(q) for an odd prime power q = p^e.
 *
 * Elements are identified by a code in [0, q) that equals their rank in the
 * canonical order: coefficient sequences (c_0, ..., c_{e-1}) of the polynomial
 * basis compared lexicographically, c_0 first. For prime fields the code is the
 * residue itself. Code 0 is zero; one is (1, 0, ..., 0).
 *
 * A Field is a cheap handle to immutable shared tables; copies compare equal
 * when they describe the same (p, e).
 */
class Field {
 public:
  using Code = std::uint32_t;

  /// Builds GF(p^e) using the lexicographically smallest monic irreducible
  /// of degree e as modulus. Throws FieldError for even or composite p,
  /// e < 1, or p^e above max_order.
  static Field create(std::uint32_t p, std::uint32_t e = 1,
                      std::uint32_t max_order = kDefaultFieldCap);

  /// Splits q into p^e and builds the field; rejects non prime powers.
  static Field of_order(std::uint32_t q, std::uint32_t max_order = kDefaultFieldCap);

  std::uint32_t characteristic() const;
  std::uint32_t degree() const;
  std::uint32_t order() const;
  /// Monic modulus, constant coefficient first, e + 1 entries ({0, 1} when e = 1).
  std::span<const std::uint32_t> modulus() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement element(Code code) const;
  FieldElement from_coeffs(std::span<const std::uint32_t> coeffs) const;
  FieldElement from_integer(std::int64_t value) const;
  std::vector<FieldElement> elements() const;

  Code zero_code() const { return 0; }
  Code one_code() const;
  Code code_of_integer(std::int64_t value) const;
  std::vector<std::uint32_t> coeffs(Code a) const;
  Code code_of_coeffs(std::span<const std::uint32_t> coeffs) const;

  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code mul(Code a, Code b) const;
  /// Throws FieldError on zero.
  Code inv(Code a) const;
  Code pow(Code a, std::uint64_t exponent) const;

  /// 0 for zero, +1 for nonzero squares, -1 otherwise.
  int character(Code a) const;
  /// Canonical square root (smaller code of the two roots) or nullopt for
  /// non-squares. Throws FieldError on zero.
  std::optional<Code> sqrt(Code a) const;
  Code smallest_nonsquare() const;

  /// Multiplication through polynomial arithmetic modulo the modulus, bypassing
  /// the log tables. Used to build the tables and as a cross-check.
  Code mul_schoolbook(Code a, Code b) const;

  /// Printable form: the residue for prime fields, comma-separated
  /// coefficients c_0,...,c_{e-1} otherwise.
  std::string format(Code a) const;
  /// Inverse of format(); throws FieldError on malformed input.
  Code parse(const std::string& text) const;

  bool operator==(const Field& other) const;

 private:
  explicit Field(std::shared_ptr<const detail::FieldTables> tables);
  std::shared_ptr<const detail::FieldTables> tables_;

  friend class FieldElement;
};

class FieldElement {
 public:
  FieldElement(Field field, Field::Code code);

  const Field& field() const { return field_; }
  Field::Code code() const { return code_; }
  std::vector<std::uint32_t> coeffs() const { return field_.coeffs(code_); }
  bool is_zero() const { return code_ == 0; }

  FieldElement operator+(const FieldElement& rhs) const;
  FieldElement operator-(const FieldElement& rhs) const;
  FieldElement operator*(const FieldElement& rhs) const;
  FieldElement operator/(const FieldElement& rhs) const;
  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(std::uint64_t exponent) const;

  bool operator==(const FieldElement& rhs) const;
  /// Canonical order; only meaningful within one field.
  std::strong_ordering operator<=>(const FieldElement& rhs) const { return code_ <=> rhs.code_; }

  std::string to_string() const { return field_.format(code_); }

 private:
  void require_same_field(const FieldElement& rhs) const;

  Field field_;
  Field::Code code_;
};

int quadratic_character(const FieldElement& a);
std::optional<FieldElement> square_root(const FieldElement& a);
FieldElement smallest_nonsquare(const Field& field);

/// Tonelli-Shanks over the multiplicative group of order q - 1. Returns some
/// root (not necessarily canonical) or nullopt for non-squares.
std::optional<Field::Code> tonelli_shanks(const Field& field, Field::Code a);
/// a^((q+1)/4); only valid when q = 3 (mod 4) and a is a square.
Field::Code sqrt_three_mod_four(const Field& field, Field::Code a);

bool is_prime(std::uint64_t n);

}  // namespace orthograph
