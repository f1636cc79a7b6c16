#pragma once

// Short Weierstrass curves y^2 = x^3 + a x + b, their points, places and divisors.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ebundle/poly.hpp"

namespace ebundle {

struct Point {
  bool inf = true;
  Elem x, y;

  static Point infinity() { return Point{}; }
  static Point affine(Elem x, Elem y) { return Point{false, std::move(x), std::move(y)}; }
  friend bool operator==(const Point& a, const Point& b) {
    return a.inf == b.inf && (a.inf || (a.x == b.x && a.y == b.y));
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

class Curve {
 public:
  /// Throws InvalidInput when 4a^3 + 27b^2 = 0.
  Curve(FieldPtr field, Elem a, Elem b);

  const FieldPtr& field() const { return field_; }
  const Field& F() const { return *field_; }
  const Elem& a() const { return a_; }
  const Elem& b() const { return b_; }
  /// x^3 + a x + b.
  const Poly& rhs() const { return rhs_; }
  Elem rhs(const Elem& x) const { return rhs_.eval(x); }

  bool contains(const Point& q) const;
  void require(const Point& q) const;
  Point neg(const Point& q) const;
  /// Chord-tangent addition with identity at infinity.
  Point add(const Point& q1, const Point& q2) const;
  Point mul(std::int64_t n, const Point& q) const;
  /// All rational points, infinity first (enumeration; small fields only).
  std::vector<Point> points() const;
  int compare(const Point& q1, const Point& q2) const;

  /// The same curve over an extension L of the current field.
  Curve base_change(const FieldPtr& L) const;
  Point embed(const Point& q, const Curve& from) const;

  std::string to_string(const Point& q) const;
  std::string to_string() const;
  friend bool operator==(const Curve& c1, const Curve& c2);

 private:
  FieldPtr field_;
  Elem a_, b_;
  Poly rhs_;
};

/// A closed point of the curve over its base field.
class Place {
 public:
  enum class Kind { Infinity, Rational, Closed };

  static Place infinity(FieldPtr field);
  static Place rational(FieldPtr field, Point q);
  /// m monic irreducible in x; y is the y-coordinate modulo m, or nullopt when
  /// y does not lie in F[x]/(m) (the place then has degree 2 deg m).
  static Place closed(Poly m, std::optional<Poly> y);

  Kind kind() const { return kind_; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  bool is_rational() const { return kind_ == Kind::Rational; }
  const FieldPtr& field() const { return field_; }
  const Point& point() const { return point_; }
  /// Minimal polynomial of x (x - x0 for rational places).
  Poly m() const;
  /// y modulo m when it exists there (constant y0 for rational places).
  std::optional<Poly> y() const;
  bool inert() const { return kind_ == Kind::Closed && !y_; }
  /// y vanishes at the place (x is then not a uniformizer).
  bool ramified() const;
  int degree() const;
  std::string to_string() const;

  friend int compare(const Place& s, const Place& t);
  friend bool operator<(const Place& s, const Place& t) { return compare(s, t) < 0; }
  friend bool operator==(const Place& s, const Place& t) { return compare(s, t) == 0; }
  friend bool operator!=(const Place& s, const Place& t) { return compare(s, t) != 0; }

 private:
  Kind kind_ = Kind::Infinity;
  FieldPtr field_;
  Point point_;
  Poly m_;
  std::optional<Poly> y_;
};

/// The one or two places over an irreducible factor m of x.
std::vector<Place> places_over(const Curve& E, const Poly& m);
/// The place containing a rational point.
Place place_of(const Curve& E, const Point& q);

class Divisor {
 public:
  using Map = std::map<Place, int>;

  Divisor() = default;
  static Divisor of(const Place& t, int n = 1);

  void add(const Place& t, int n);
  int mult(const Place& t) const;
  int degree() const;
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_effective() const;
  Divisor positive() const;
  Divisor negative() const;
  /// Least common multiple of the place degrees in the support.
  int split_degree() const;
  std::string to_string() const;

  friend Divisor operator+(Divisor a, const Divisor& b);
  friend Divisor operator-(Divisor a, const Divisor& b);
  friend Divisor operator*(int n, const Divisor& d);
  Divisor operator-() const { return -1 * *this; }
  Divisor& operator+=(const Divisor& b) { return *this = *this + b; }
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }

 private:
  Map terms_;
};

class MarkedCurve {
 public:
  MarkedCurve(Curve E, Point p);
  const Curve& curve() const { return E_; }
  const Point& p() const { return p_; }
  Place p_place() const { return place_of(E_, p_); }

  /// The q with (q1) + (q2) ~ (q) + (p).
  Point marked_sum(const Point& q1, const Point& q2) const;
  Point marked_neg(const Point& q) const;
  Point marked_mul(std::int64_t n, const Point& q) const;
  bool is_r_torsion(const Point& q, int r) const;

  MarkedCurve base_change(const FieldPtr& L) const;

 private:
  Curve E_;
  Point p_;
};

/// The q with D ~ (q) - (p). Throws NonZeroDegree, or BaseChangeRequired when
/// some place of the support is not rational.
Point divisor_class_point(const MarkedCurve& mc, const Divisor& D);
/// As above, resolving non-rational places by an internal base change.
Point divisor_class_point_any(const MarkedCurve& mc, const Divisor& D);
bool linearly_equivalent(const MarkedCurve& mc, const Divisor& D1, const Divisor& D2);

/// Places of E_L lying over t, where E_L is E base-changed to an extension.
std::vector<Place> places_above(const Place& t, const Curve& E_L);
Divisor base_change(const Divisor& D, const Curve& E_L);
/// Geometric points of t; E_L must contain its residue field.
std::vector<Point> points_of(const Place& t, const Curve& E_L);
/// The place of E (over the subfield) below a rational point of E_L.
Place place_below(const Curve& E, const Curve& E_L, const Point& q);
/// Pushes a divisor on E_L supported on rational points down to E; every
/// conjugate must carry the same multiplicity.
Divisor descend(const Curve& E, const Curve& E_L, const Divisor& D_L);

}  // namespace ebundle
