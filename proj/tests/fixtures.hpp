#pragma once

// Bundles with known structure, built from the construction side.

#include <random>
#include <vector>

#include "ebundle/stability.hpp"
#include "test_util.hpp"

namespace ebundle::testing {

struct KnownSum {
  DirectSumPresentation P;
  /// q_j with D_j ~ (q_j) - (p).
  std::vector<Point> classes;
};

/// A degree-zero divisor in the class of (q) - (p), with a random principal
/// part so the support is not just {q, p}.
inline Divisor disguised_class(const CurvePtr& E, const Point& q, const Point& p, std::mt19937_64& rng) {
  Divisor D = Divisor::of(place_of(*E, q)) - Divisor::of(place_of(*E, p));
  if (rng() % 3 == 0) return D;
  return D + principal_divisor(random_function(E, rng, 2));
}

inline KnownSum random_direct_sum(Word p, int rank, std::mt19937_64& rng) {
  auto E = make_curve(random_curve(p, rng));
  KnownSum k;
  k.P.curve = E;
  k.P.mark = random_point(*E, rng);
  for (int j = 0; j < rank; ++j) {
    Point q = random_point(*E, rng);
    k.classes.push_back(q);
    k.P.summands.push_back(disguised_class(E, q, k.P.mark, rng));
  }
  return k;
}

/// O(D) + O(-D) with deg D = 1.
inline DirectSumPresentation unstable_pair(Word p, std::mt19937_64& rng) {
  auto E = make_curve(random_curve(p, rng));
  DirectSumPresentation P;
  P.curve = E;
  P.mark = random_point(*E, rng);
  Divisor D = Divisor::of(place_of(*E, random_point(*E, rng)));
  if (rng() % 2) D = D + principal_divisor(random_function(E, rng, 2));
  P.summands = {D, -D};
  return P;
}

struct KnownMonad {
  MonadPresentation M;
  std::vector<Point> classes;
};

/// Ambient L_1..L_r, s trivial summands, then O(D_0) with g = (g_1, ..., g_{m-1}, 1);
/// f sends O^s onto the trivial summands through an invertible constant block
/// and corrects the last coordinate, so the cohomology is L_1 + ... + L_r.
inline KnownMonad random_monad(Word p, int rank, int s, std::mt19937_64& rng) {
  auto E = make_curve(random_curve(p, rng));
  const FieldPtr& F = E->field();
  KnownMonad k;
  KernelPresentation& K = k.M.kernel;
  K.curve = E;
  K.mark = random_point(*E, rng);
  for (int j = 0; j < rank; ++j) {
    Point q = random_point(*E, rng);
    k.classes.push_back(q);
    K.ambient.push_back(disguised_class(E, q, K.mark, rng));
  }
  for (int j = 0; j < s; ++j) K.ambient.push_back(Divisor());
  const int d = 1 + static_cast<int>(rng() % 2);
  Divisor D0 = Divisor::of(place_of(*E, random_point(*E, rng)), d);
  K.target = D0;
  K.ambient.push_back(D0);
  const int m = rank + s + 1;
  for (int a = 0; a + 1 < m; ++a) {
    auto B = rr_basis(E, D0 - K.ambient[a]).basis;
    CurveFunction g = CurveFunction::zero(E);
    for (const auto& b : B) g = g + b.scale(F->random(rng));
    K.g.push_back(g);
  }
  K.g.push_back(CurveFunction::from_int(E, 1));
  Matrix C(F, s, s);
  do {
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) C.at(i, j) = F->random(rng);
  } while (C.rank() != s);
  for (int j = 0; j < s; ++j) {
    FunctionVector col(m, CurveFunction::zero(E));
    CurveFunction last = CurveFunction::zero(E);
    for (int i = 0; i < s; ++i) {
      col[rank + i] = CurveFunction::constant(E, C.at(i, j));
      last = last - K.g[rank + i].scale(C.at(i, j));
    }
    col[m - 1] = last;
    k.M.f.push_back(col);
  }
  return k;
}

/// m ambient divisors of degree 1 and a random surjective g onto O(D_0), deg D_0 = m.
inline KernelPresentation random_kernel(Word p, int m, std::mt19937_64& rng) {
  auto E = make_curve(random_curve(p, rng));
  const FieldPtr& F = E->field();
  KernelPresentation K;
  K.curve = E;
  K.mark = random_point(*E, rng);
  for (;;) {
    K.ambient.clear();
    K.g.clear();
    for (int a = 0; a < m; ++a) K.ambient.push_back(Divisor::of(place_of(*E, random_point(*E, rng))));
    K.target = Divisor::of(place_of(*E, random_point(*E, rng)), m);
    for (int a = 0; a < m; ++a) {
      CurveFunction g = CurveFunction::zero(E);
      for (const auto& b : rr_basis(E, K.target - K.ambient[a]).basis) g = g + b.scale(F->random(rng));
      K.g.push_back(g);
    }
    try {
      K.validate();
      return K;
    } catch (const InvalidInput&) {
    }
  }
}

/// Multiset of (point, rank) as sorted strings, for order-free comparison.
inline std::vector<std::string> factor_labels(const Curve& E, const std::vector<SplitFactor>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(E.to_string(f.point) + "^" + std::to_string(f.rank));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> class_labels(const Curve& E, const std::vector<Point>& qs) {
  std::vector<std::string> out;
  for (const auto& q : qs) out.push_back(E.to_string(q) + "^1");
  std::sort(out.begin(), out.end());
  return out;
}

inline Divisor class_divisor(const Curve& E, const std::vector<Point>& qs) {
  Divisor D;
  for (const auto& q : qs) D.add(place_of(E, q), 1);
  return D;
}

}  // namespace ebundle::testing
