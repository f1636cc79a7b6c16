#pragma once

// Shared random generators for property tests.

#include <random>
#include <vector>

#include "ebundle/errors.hpp"
#include "ebundle/funcspace.hpp"

namespace ebundle::testing {

inline Curve curve(Word p, std::int64_t a, std::int64_t b) {
  auto F = Field::prime(p);
  return Curve(F, F->from_int(a), F->from_int(b));
}

inline Point pt(const Curve& E, std::int64_t x, std::int64_t y) {
  return Point::affine(E.F().from_int(x), E.F().from_int(y));
}

inline Poly random_poly(const FieldPtr& F, int deg, std::mt19937_64& rng) {
  std::vector<Elem> v;
  for (int i = 0; i < deg; ++i) v.push_back(F->random(rng));
  v.push_back(F->random_nonzero(rng));
  return Poly(F, v);
}

/// A random finite curve of the requested characteristic.
inline Curve random_curve(Word p, std::mt19937_64& rng) {
  auto F = Field::prime(p);
  for (;;) {
    try {
      return Curve(F, F->random(rng), F->random(rng));
    } catch (const InvalidInput&) {
    }
  }
}

inline Point random_point(const Curve& E, std::mt19937_64& rng, bool allow_inf = true) {
  auto pts = E.points();
  for (;;) {
    const Point& q = pts[rng() % pts.size()];
    if (allow_inf || !q.inf) return q;
  }
}

/// A random place of degree <= max_deg (rational points, infinity, or closed).
inline Place random_place(const Curve& E, int max_deg, std::mt19937_64& rng) {
  const FieldPtr& F = E.field();
  for (;;) {
    int kind = static_cast<int>(rng() % 4);
    if (kind == 0) return Place::infinity(F);
    if (kind == 1 || max_deg < 2) return place_of(E, random_point(E, rng, false));
    int d = 1 + static_cast<int>(rng() % max_deg);
    Poly m = random_poly(F, d, rng).monic();
    if (!is_irreducible(m)) continue;
    auto ps = places_over(E, m);
    const Place& t = ps[rng() % ps.size()];
    if (t.degree() <= max_deg) return t;
  }
}

inline Divisor random_divisor(const Curve& E, int terms, int max_deg, std::mt19937_64& rng) {
  Divisor D;
  for (int i = 0; i < terms; ++i) D.add(random_place(E, max_deg, rng), static_cast<int>(rng() % 5) - 2);
  return D;
}

inline CurveFunction random_function(const CurvePtr& E, std::mt19937_64& rng, int deg = 3) {
  const FieldPtr& F = E->field();
  for (;;) {
    Poly A = rng() % 4 ? random_poly(F, static_cast<int>(rng() % (deg + 1)), rng) : Poly(F);
    Poly B = rng() % 3 ? random_poly(F, static_cast<int>(rng() % deg), rng) : Poly(F);
    Poly C = random_poly(F, static_cast<int>(rng() % deg), rng);
    CurveFunction f(E, A, B, C);
    if (!f.is_zero()) return f;
  }
}

}  // namespace ebundle::testing
