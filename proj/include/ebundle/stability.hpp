#pragma once

// Semistability of degree-zero bundles from the sections of their twist by a
// degree-one divisor: wedge valuations, spectral divisor, and splitting type.

#include <optional>
#include <string>
#include <vector>

#include "ebundle/bundles.hpp"

namespace ebundle {

enum class Verdict { Semistable, NotSemistable };
enum class Reason { None, SectionCountMismatch, TopWedgeVanishes };

std::string to_string(Verdict v);
std::string to_string(Reason r);

/// Vanishing order at t of the wedge of the chosen sections, taken together with
/// the modulus block and corrected by s * mult_t(modulus_zero). Works at any place.
int wedge_valuation(const SectionSystem& S, const std::vector<int>& columns, const Place& t);
/// The same orders over all places, as a divisor.
Divisor wedge_divisor(const SectionSystem& S, const std::vector<int>& columns);
/// Throws SectionCountMismatch or TopWedgeVanishes.
Divisor spectral_divisor(const SectionSystem& S);
int incidence_order(const SectionSystem& S, int section, const std::vector<int>& columns, const Place& t);

struct KernelData {
  Point point;
  int d = 0;
  /// Coefficient vectors (length r) of sections whose value lies in the modulus fiber.
  std::vector<std::vector<Elem>> kernel_basis;
  /// First-order values of those sections, modulo the modulus fiber.
  std::vector<std::vector<Elem>> limit_directions;
  int limit_rank = 0;
};

/// t must be rational over the field of S.
KernelData kernel_dimension(const SectionSystem& S, const Place& t);

/// Optional change of local frame: row a is multiplied by row_units[a] (a unit
/// at t) and the uniformizer z is replaced by w with z = w + reparam * w^2.
struct LocalFrame {
  std::vector<CurveFunction> row_units;
  std::optional<Elem> reparam;
};

struct WedgeProfile {
  Point point;
  /// Wedge orders of the first j sections of the adapted ordering, j = 1..r.
  std::vector<int> delta;
  /// Elementary-divisor exponents of the section block modulo the modulus, ascending.
  std::vector<int> exponents;
  /// Dimensions of the kernel tower L_1 c L_2 c ... of the certificate.
  std::vector<int> tower;
};

/// Local analysis at a rational point with spectral multiplicity mult. Runs the
/// filtration certificate; throws InternalInconsistency when it fails.
WedgeProfile wedge_profile(const SectionSystem& S, const Place& t, int mult, const LocalFrame& frame = {});

struct SplitFactor {
  Point point;
  int rank = 0;
};

struct PointAnalysis {
  Place place;  // over the base field
  Point point;  // over the splitting field
  int multiplicity = 0;
  WedgeProfile wedge;
  KernelData kernel;
};

struct StabilityReport {
  Verdict verdict = Verdict::Semistable;
  Reason reason = Reason::None;
  int rank = 0;
  int section_count = 0;
  CurvePtr curve;
  Point mark;
  Divisor spectral;
  /// Field and curve over which the support of the spectral divisor splits.
  CurvePtr split_curve;
  Divisor spectral_points;
  bool fully_split = false;
  std::vector<SplitFactor> splitting;
  std::vector<PointAnalysis> points;
  /// Largest single-section vanishing order and incidence order on slope-1 frames.
  int max_vanishing = 0;
  int max_incidence = 0;
  int incidence_checks = 0;

  bool semistable() const { return verdict == Verdict::Semistable; }
};

StabilityReport splitting_type(const SectionSystem& S);

struct FullySplitReport {
  Verdict verdict = Verdict::Semistable;
  Reason reason = Reason::None;
  bool fully_split = false;
  /// "a", "b" or "c" for the first failing condition, empty when all hold.
  std::string failed_condition;
  Divisor spectral;
  CurvePtr split_curve;
  /// (t, d_t) over the splitting field.
  std::vector<SplitFactor> kernel_dims;
};

FullySplitReport fully_split_test(const SectionSystem& S);

struct GeneralTwistResult {
  Divisor spectral;
  int dim_g = 0;
  bool canonical_basis = false;
};

/// Spectral divisor through the twist by (p_1) + ... + (p_h) for distinct
/// rational points. Throws DimensionMismatch when dim G != r.
GeneralTwistResult general_twist_spectral(const DirectSumPresentation& P, const std::vector<Point>& points);

}  // namespace ebundle
