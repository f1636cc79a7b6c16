#pragma once

// Finite fields F_p (p > 3) and towers of simple extensions over them.
//
// Elements are stored flat: an element of a degree-k extension of a field of
// width w is k consecutive chunks of w words, each chunk an element of the
// base field. All words are residues in [0, p), so addition is word-wise.

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ebundle {

using Word = std::uint64_t;
using Elem = boost::container::small_vector<Word, 4>;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Deterministic primality test for 64-bit integers.
bool is_prime(Word n);

class Field {
 public:
  /// The prime field F_p. Throws InvalidInput unless p is a prime > 3.
  static FieldPtr prime(Word p);

  /// base[t]/(modulus). The modulus is given by its coefficients over `base`
  /// (lowest degree first) and must be monic and irreducible; irreducibility is
  /// not checked here (see `extension_field` in poly.hpp for the checked form).
  static FieldPtr extension_unchecked(FieldPtr base, std::vector<Elem> modulus);

  Word characteristic() const { return p_; }
  /// Degree over the immediate base (1 for a prime field).
  int degree() const { return degree_; }
  /// Degree over the prime field.
  int absolute_degree() const { return static_cast<int>(width_); }
  std::size_t width() const { return width_; }
  bool is_prime_field() const { return base_ == nullptr; }
  const FieldPtr& base() const { return base_; }
  /// Monic modulus over the base, lowest degree first (empty for prime fields).
  const std::vector<Elem>& modulus() const { return modulus_; }
  /// Number of tower levels above the prime field.
  int depth() const { return depth_; }
  const std::string& variable() const { return variable_; }
  /// Field size, or nullopt when it does not fit in 64 bits.
  std::optional<Word> order() const;

  Elem zero() const { return Elem(width_, 0); }
  Elem one() const;
  Elem from_int(std::int64_t v) const;
  /// The adjoined root t (the class of the variable modulo the modulus).
  Elem generator() const;

  bool is_zero(const Elem& a) const;
  bool is_one(const Elem& a) const;
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  /// Throws DivisionByZero for a = 0.
  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, Word e) const;
  /// a^p.
  Elem frobenius(const Elem& a) const { return pow(a, p_); }
  /// a^|B| for the immediate base B (the relative Frobenius).
  Elem base_frobenius(const Elem& a) const;
  /// True iff a is a square (a = 0 counts as a square).
  bool is_square(const Elem& a) const;

  /// Embeds an element of the immediate base as a constant.
  Elem lift(const Elem& base_elem) const;
  /// Embeds an element of any field in this field's tower (including itself).
  Elem embed(const Field& ancestor, const Elem& e) const;
  bool has_ancestor(const Field& f) const;
  /// The element as a base-field element, if it lies in the base.
  std::optional<Elem> project(const Elem& a) const;
  /// Projection onto an arbitrary ancestor, if the element lies in it.
  std::optional<Elem> project_to(const Field& ancestor, const Elem& a) const;

  /// Coefficients over the immediate base (degree() chunks).
  std::vector<Elem> chunks(const Elem& a) const;
  Elem from_chunks(const std::vector<Elem>& c) const;

  /// Canonical enumeration: index digits base p, word 0 least significant.
  Elem element_at(Word index) const;
  Elem random(std::mt19937_64& rng) const;
  Elem random_nonzero(std::mt19937_64& rng) const;
  /// Canonical total order (highest word first); returns <0, 0, >0.
  int compare(const Elem& a, const Elem& b) const;

  std::string to_string(const Elem& a) const;
  std::string describe() const;

  /// Structural equality (same characteristic, same tower of moduli).
  bool operator==(const Field& other) const;

 private:
  Field() = default;

  Word mulmod(Word a, Word b) const;
  Word inv_prime(Word a) const;
  std::vector<Elem> poly_mul(const std::vector<Elem>& a, const std::vector<Elem>& b) const;
  void reduce(std::vector<Elem>& c) const;

  Word p_ = 0;
  int degree_ = 1;
  int depth_ = 0;
  std::size_t width_ = 1;
  FieldPtr base_;
  std::vector<Elem> modulus_;
  std::string variable_;
};

bool same_field(const FieldPtr& a, const FieldPtr& b);

/// A field element bundled with its field; arithmetic checks field identity.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Elem value);
  static FieldElement from_int(FieldPtr field, std::int64_t v);

  const FieldPtr& field() const { return field_; }
  const Elem& value() const { return value_; }
  bool is_zero() const { return field_->is_zero(value_); }
  FieldElement inverse() const;
  std::string to_string() const { return field_->to_string(value_); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  friend bool operator==(const FieldElement& a, const FieldElement& b);

 private:
  FieldPtr field_;
  Elem value_;
};

}  // namespace ebundle
