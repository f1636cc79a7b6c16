#pragma once

#include <stdexcept>
#include <string>

namespace ebundle {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class FieldMismatch : public Error {
 public:
  FieldMismatch() : Error("operands belong to different fields") {}
};

class ZeroPolynomial : public Error {
 public:
  ZeroPolynomial() : Error("operation undefined for the zero polynomial") {}
};

class PointOffCurve : public Error {
 public:
  explicit PointOffCurve(const std::string& what) : Error("point not on curve: " + what) {}
};

class NonZeroDegree : public Error {
 public:
  explicit NonZeroDegree(int degree)
      : Error("divisor has degree " + std::to_string(degree) + ", expected 0"), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

/// Raised when a computation needs points that are only rational over an
/// extension of the current field; `degree()` is the minimal extension degree.
class BaseChangeRequired : public Error {
 public:
  explicit BaseChangeRequired(int k)
      : Error("base change of degree " + std::to_string(k) + " required"), degree_(k) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

class ZeroFunction : public Error {
 public:
  ZeroFunction() : Error("operation undefined for the zero function") {}
};

class IdenticallyZeroWedge : public Error {
 public:
  IdenticallyZeroWedge() : Error("wedge of the chosen sections vanishes identically") {}
};

class SectionCountMismatch : public Error {
 public:
  SectionCountMismatch(int count, int rank)
      : Error("twisted bundle has " + std::to_string(count) + " sections, rank is " + std::to_string(rank)) {}
};

class TopWedgeVanishes : public Error {
 public:
  TopWedgeVanishes() : Error("top wedge of the section basis vanishes identically") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int got, int expected)
      : Error("dimension " + std::to_string(got) + ", expected " + std::to_string(expected)),
        got_(got),
        expected_(expected) {}
  int got() const { return got_; }
  int expected() const { return expected_; }

 private:
  int got_;
  int expected_;
};

/// Raised when two independent computations disagree. Never expected.
class InternalInconsistency : public Error {
 public:
  explicit InternalInconsistency(const std::string& what) : Error("internal inconsistency: " + what) {}
};

/// Semantic rejection of a well-formed input (bad presentation, non-prime modulus...).
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

}  // namespace ebundle
