#pragma once

// The function field of a Weierstrass curve: f = (A(x) + B(x) y) / C(x).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ebundle/elliptic.hpp"
#include "ebundle/linalg.hpp"

namespace ebundle {

using CurvePtr = std::shared_ptr<const Curve>;

inline CurvePtr make_curve(const Curve& E) { return std::make_shared<const Curve>(E); }

/// A reduced fraction num/den in F(x), den monic.
struct RatFunc {
  Poly num, den;
  std::string to_string() const;
};

class CurveFunction {
 public:
  /// (A + B y) / C, reduced so that gcd(A, B, C) = 1 and C is monic.
  CurveFunction(CurvePtr E, Poly A, Poly B, Poly C);

  static CurveFunction zero(CurvePtr E);
  static CurveFunction constant(CurvePtr E, Elem c);
  static CurveFunction from_int(CurvePtr E, std::int64_t c);
  static CurveFunction x(CurvePtr E);
  static CurveFunction y(CurvePtr E);
  static CurveFunction from_poly(CurvePtr E, Poly A);

  const Curve& curve() const { return *E_; }
  const CurvePtr& curve_ptr() const { return E_; }
  const FieldPtr& field() const { return E_->field(); }
  const Poly& A() const { return A_; }
  const Poly& B() const { return B_; }
  const Poly& C() const { return C_; }
  /// f = a(x) + b(x) y.
  RatFunc a() const;
  RatFunc b() const;

  bool is_zero() const { return A_.is_zero() && B_.is_zero(); }
  bool is_constant() const { return B_.is_zero() && A_.degree() <= 0 && C_.degree() == 0; }
  /// A^2 - B^2 (x^3 + a x + b): the norm of the numerator.
  Poly numerator_norm() const;

  CurveFunction conj() const;
  /// Throws DivisionByZero for the zero function.
  CurveFunction inverse() const;
  CurveFunction scale(const Elem& c) const;
  CurveFunction pow(int e) const;
  /// The same function on the curve base-changed to an extension field.
  CurveFunction embed(const CurvePtr& E_L) const;

  CurveFunction operator-() const;
  friend CurveFunction operator+(const CurveFunction& f, const CurveFunction& g);
  friend CurveFunction operator-(const CurveFunction& f, const CurveFunction& g);
  friend CurveFunction operator*(const CurveFunction& f, const CurveFunction& g);
  friend CurveFunction operator/(const CurveFunction& f, const CurveFunction& g);
  friend bool operator==(const CurveFunction& f, const CurveFunction& g);
  friend bool operator!=(const CurveFunction& f, const CurveFunction& g) { return !(f == g); }

  /// Expression syntax accepted by the job parser, e.g. "(x+1)/(x^2+2) + 3*y".
  std::string to_string() const;

 private:
  void check(const CurveFunction& g) const;

  CurvePtr E_;
  Poly A_, B_, C_;
};

/// Order of vanishing at t (negative for poles). Throws ZeroFunction.
int valuation(const CurveFunction& f, const Place& t);
Divisor principal_divisor(const CurveFunction& f);
/// Smallest n with (f) + n*t >= 0 near t, i.e. -valuation; 0 at places where f is regular.
inline int pole_order(const CurveFunction& f, const Place& t) { return f.is_zero() ? 0 : std::max(0, -valuation(f, t)); }
/// True when (f) + D >= 0 (the zero function always qualifies).
bool in_riemann_roch(const CurveFunction& f, const Divisor& D);

struct RRBasis {
  Divisor divisor;
  std::vector<CurveFunction> basis;
  int dimension() const { return static_cast<int>(basis.size()); }
};

/// A basis of L(D) = { f : (f) + D >= 0 }, ordered by increasing pole order at
/// infinity after clearing the finite poles of D.
RRBasis rr_basis(const CurvePtr& E, const Divisor& D);

/// Coordinates over F of vectors of functions. Column j of the result holds the
/// coordinates of vecs[j] in a common monomial frame, so linear relations over
/// F among the vectors are exactly the kernel of the matrix.
Matrix coordinate_matrix(const FieldPtr& F, const std::vector<std::vector<CurveFunction>>& vecs);
/// Coefficients c with sum_j c_j basis[j] = f, if f lies in the span.
std::optional<std::vector<Elem>> coordinates(const std::vector<CurveFunction>& basis, const CurveFunction& f);

/// Truncated Laurent series sum c_i z^(val+i) + O(z^prec).
class Series {
 public:
  Series() = default;
  Series(FieldPtr F, int val, std::vector<Elem> c, int prec);
  static Series zero(FieldPtr F, int prec) { return Series(std::move(F), prec, {}, prec); }
  static Series constant(FieldPtr F, const Elem& c, int prec);
  /// z^k + O(z^prec).
  static Series monomial(FieldPtr F, int k, int prec);

  const FieldPtr& field() const { return F_; }
  /// Leading valuation (equal to prec for series that vanish to the stated precision).
  int val() const { return val_; }
  int prec() const { return prec_; }
  bool is_zero() const { return val_ >= prec_; }
  /// Coefficient of z^k (zero below val; k must be < prec).
  Elem coeff(int k) const;
  Series truncate(int prec) const;
  Series shift(int k) const;

  Series operator-() const;
  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  Series scale(const Elem& c) const;
  /// Throws DivisionByZero when the series vanishes to its precision.
  Series inverse() const;
  /// p(s) by Horner's rule.
  static Series eval(const Poly& p, const Series& s, int prec);

 private:
  void normalize();

  FieldPtr F_;
  int val_ = 0;
  std::vector<Elem> c_;
  int prec_ = 0;
};

enum class Uniformizer { XMinusX0, YAtRamified, XOverYAtInfinity };

struct LocalExpansion {
  Place place;
  Uniformizer uniformizer;
  int valuation = 0;
  /// Coefficients of z^valuation, ..., z^(valuation + precision).
  std::vector<Elem> coeffs;
  int precision = 0;
};

/// Local coordinate series (x(z), y(z)) at a rational place, to absolute precision prec.
std::pair<Series, Series> local_coordinates(const Curve& E, const Place& t, int prec);
/// f as a series in the place's uniformizer, to absolute precision prec.
Series local_series(const CurveFunction& f, const Place& t, int prec);
/// Throws ZeroFunction, or BaseChangeRequired for non-rational places.
LocalExpansion expand_local(const CurveFunction& f, const Place& t, int precision);
Uniformizer uniformizer_of(const Place& t);

}  // namespace ebundle
