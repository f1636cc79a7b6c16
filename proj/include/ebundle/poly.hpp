#pragma once

// Dense univariate polynomials over a Field, with factorization.

#include <string>
#include <utility>
#include <vector>

#include "ebundle/field.hpp"

namespace ebundle {

class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  /// Coefficients lowest degree first; trailing zeros are trimmed.
  Poly(FieldPtr field, std::vector<Elem> coeffs);

  static Poly constant(FieldPtr field, Elem c);
  static Poly from_int(FieldPtr field, std::int64_t c);
  static Poly monomial(FieldPtr field, Elem c, int degree);
  /// The polynomial x.
  static Poly x(FieldPtr field);
  /// x - root.
  static Poly linear(FieldPtr field, const Elem& root);

  const FieldPtr& field() const { return field_; }
  const Field& F() const { return *field_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && field_->is_one(c_.back()); }
  Elem coeff(int i) const;
  Elem lead() const;
  const std::vector<Elem>& coeffs() const { return c_; }

  Poly monic() const;
  Poly scale(const Elem& c) const;
  Poly shift(int k) const;
  Poly derivative() const;
  Elem eval(const Elem& v) const;
  /// Substitutes another polynomial for x.
  Poly compose(const Poly& g) const;
  /// Re-embeds coefficients into an extension field of this polynomial's field.
  Poly embed(const FieldPtr& target) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator/(const Poly& a, const Poly& b);
  friend Poly operator%(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Throws ZeroPolynomial for b = 0.
  std::pair<Poly, Poly> divmod(const Poly& b) const;
  bool divides(const Poly& b) const { return (b % *this).is_zero(); }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  void check(const Poly& b) const;

  FieldPtr field_;
  std::vector<Elem> c_;
};

/// Canonical order: degree, then coefficients from the top down.
int compare(const Poly& a, const Poly& b);
inline bool canonical_less(const Poly& a, const Poly& b) { return compare(a, b) < 0; }

/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);
/// Returns (g, s, t) with s*a + t*b = g monic.
struct ExtGcd {
  Poly g, s, t;
};
ExtGcd ext_gcd(const Poly& a, const Poly& b);
Poly pow(const Poly& a, int e);
Poly pow_mod(Poly base, Word e, const Poly& mod);
/// Highest power of m dividing f (f nonzero, deg m >= 1).
int multiplicity(const Poly& m, Poly f);
Poly remove_factor(const Poly& m, Poly f);

struct Factor {
  Poly poly;
  int multiplicity;
};
/// Monic irreducible factors with multiplicities, canonically sorted.
std::vector<Factor> factor(const Poly& f);
/// Distinct roots in the coefficient field, sorted by Field::compare.
std::vector<Elem> roots(const Poly& f);
bool is_irreducible(const Poly& f);
/// The first monic irreducible of degree k in the canonical enumeration.
Poly find_irreducible(const FieldPtr& field, int k);
/// base[t]/(m) after checking that m is monic irreducible.
FieldPtr extension_field(const Poly& m);
/// A degree-k extension of `field` built from find_irreducible.
FieldPtr extend(const FieldPtr& field, int k);

}  // namespace ebundle
