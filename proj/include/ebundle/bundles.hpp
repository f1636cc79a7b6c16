#pragma once

// Degree-zero bundles given as direct sums, kernels of g: (+)O(D_a) -> O(D_0),
// or monads O^s -> (+)O(D_a) -> O(D_0), and the section bases of their twists.

#include <vector>

#include "ebundle/funcspace.hpp"

namespace ebundle {

/// A column of m functions: component a is a section of O(row divisor a).
using FunctionVector = std::vector<CurveFunction>;

struct DirectSumPresentation {
  CurvePtr curve;
  Point mark;
  std::vector<Divisor> summands;

  int rank() const { return static_cast<int>(summands.size()); }
  /// Throws InvalidInput when there are no summands or the degrees do not sum to 0.
  void validate() const;
};

struct KernelPresentation {
  CurvePtr curve;
  Point mark;
  std::vector<Divisor> ambient;
  Divisor target;
  FunctionVector g;

  int m() const { return static_cast<int>(ambient.size()); }
  /// Degree balance, g_a in L(D_0 - D_a), and surjectivity on every fiber.
  void validate() const;
};

struct MonadPresentation {
  KernelPresentation kernel;
  /// The s columns of f; column j has m entries with f_aj in L(D_a).
  std::vector<FunctionVector> f;

  int s() const { return static_cast<int>(f.size()); }
  int rank() const { return kernel.m() - s() - 1; }
  /// Kernel checks, g f = 0, f injective on every fiber, and rank >= 0.
  void validate() const;
};

struct SectionSystem {
  CurvePtr curve;
  Point mark;
  std::vector<Divisor> ambient;
  Divisor twist;
  std::vector<FunctionVector> sections;
  std::vector<FunctionVector> modulus;
  /// Zero divisor of the twisting function behind the modulus block, as a
  /// section of O(twist); (p) for the default twist.
  Divisor modulus_zero;
  int declared_rank = 0;

  const FieldPtr& field() const { return curve->field(); }
  int m() const { return static_cast<int>(ambient.size()); }
  int r() const { return static_cast<int>(sections.size()); }
  int s() const { return static_cast<int>(modulus.size()); }
  Divisor row_divisor(int a) const { return ambient[a] + twist; }
  std::vector<Divisor> row_divisors() const;

  /// Membership of every component and independence of modulus plus sections.
  void validate() const;
  /// Sections replaced by constant combinations: new section i = sum_k c(k, i) s_k.
  SectionSystem recombine(const Matrix& c) const;
  SectionSystem base_change(const FieldPtr& L) const;
};

inline Divisor default_twist(const Curve& E, const Point& mark) { return Divisor::of(place_of(E, mark)); }

SectionSystem sections_direct_sum(const DirectSumPresentation& P, const Divisor& twist);
SectionSystem sections_kernel(const KernelPresentation& P, const Divisor& twist);
SectionSystem sections_monad(const MonadPresentation& P, const Divisor& twist);

struct Evaluation {
  Matrix sections;  // m x r
  Matrix modulus;   // m x s
};

/// Values at a rational place, component a trivialized by z^mult_t(D_a + twist).
/// Modulus columns are further divided by z^mult_t(modulus_zero), so they stay
/// independent at the zeros of the twisting function.
Evaluation evaluate(const SectionSystem& S, const Place& t);

/// Order at t of the wedge of the columns, each row a weighted by O(row_divisors[a]):
/// the minimum over maximal minors of v_t(minor) + sum of row multiplicities.
/// Throws IdenticallyZeroWedge when the columns are dependent over the function field.
int degeneracy_order(const std::vector<FunctionVector>& columns, const std::vector<Divisor>& row_divisors,
                     const Place& t);
/// The divisor of those orders over all places.
Divisor degeneracy_divisor(const std::vector<FunctionVector>& columns, const std::vector<Divisor>& row_divisors);

/// Determinant of a square matrix of functions (rows of the outer vector).
CurveFunction function_det(std::vector<FunctionVector> rows);

}  // namespace ebundle
