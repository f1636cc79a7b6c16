#pragma once

// Job files, reports, and the commands behind the ebundle tool.
//
//   # comment
//   curve p=5 a=-1 b=0
//   ext k=2                  base field F_{p^k}, generator t
//   mark (0,0)               or inf
//   summand 1*(2,1) - 1*inf  direct sum (repeat per summand)
//   ambient <divisor>        kernel: one line per D_a, in order
//   target <divisor>
//   g <fn>, <fn>, ...
//   f <fn>, ..., <fn>        monad: one line per ambient row, s entries each
//   twist <divisor>          default 1*(mark)
//   divisor <divisor>        for rr
//
// Divisors are signed sums of [n*]place with places inf, (x,y), {m} or {m | Y}
// (m, Y polynomials in x). Functions are expressions in x, y, t and integers.

#include <optional>
#include <string>
#include <vector>

#include "ebundle/errors.hpp"
#include "ebundle/stability.hpp"

namespace ebundle {

class ParseError : public Error {
 public:
  ParseError(int line, int column, std::string expected)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": expected " + expected),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_, column_;
  std::string expected_;
};

enum class JobKind { None, DirectSum, Kernel, Monad };

struct JobDescription {
  Word p = 0;
  int ext = 1;
  CurvePtr curve;
  Point mark;
  JobKind kind = JobKind::None;
  std::vector<Divisor> summands;
  std::vector<Divisor> ambient;
  std::optional<Divisor> target;
  FunctionVector g;
  /// Rows of the m x s matrix f, as written.
  std::vector<FunctionVector> f_rows;
  std::optional<Divisor> twist;
  std::optional<Divisor> divisor;

  Divisor effective_twist() const { return twist ? *twist : default_twist(*curve, mark); }
  friend bool operator==(const JobDescription& a, const JobDescription& b);
};

JobDescription parse_job(const std::string& text);
std::string print_job(const JobDescription& job);

/// Standalone parsers over a job's curve (used for --twist and tests).
Divisor parse_divisor(const CurvePtr& E, const std::string& text);
CurveFunction parse_function(const CurvePtr& E, const std::string& text);
Elem parse_element(const FieldPtr& F, const std::string& text);

/// Semantic layer: throws InvalidInput for presentations that fail validation.
DirectSumPresentation direct_sum_of(const JobDescription& job);
KernelPresentation kernel_of(const JobDescription& job);
MonadPresentation monad_of(const JobDescription& job);
SectionSystem section_system(const JobDescription& job, const Divisor& twist);

struct FactorRow {
  std::string point;
  int rank = 0;
  friend bool operator==(const FactorRow&, const FactorRow&) = default;
};

struct PlaceRow {
  std::string place;
  std::string point;
  int multiplicity = 0;
  std::vector<int> delta;
  std::vector<int> exponents;
  std::vector<int> tower;
  int kernel_dimension = 0;
  int limit_rank = 0;
  friend bool operator==(const PlaceRow&, const PlaceRow&) = default;
};

struct MonadRow {
  int s = 0;
  std::string kernel_spectral;
  std::string cohomology_spectral;
  std::string difference;
  friend bool operator==(const MonadRow&, const MonadRow&) = default;
};

struct TwistRow {
  std::string twist;
  int dim_g = 0;
  bool canonical_basis = false;
  std::string spectral;
  friend bool operator==(const TwistRow&, const TwistRow&) = default;
};

struct Report {
  std::string curve;
  std::string mark;
  std::string kind;
  std::string twist;
  int rank = 0;
  int section_count = 0;
  std::string verdict;
  std::string reason;
  std::string spectral;
  std::string split_field;
  std::string spectral_points;
  bool fully_split = false;
  std::vector<FactorRow> splitting;
  std::vector<PlaceRow> places;
  std::string test_verdict;
  bool test_fully_split = false;
  std::string test_failed_condition;
  int max_vanishing = 0;
  int max_incidence = 0;
  int incidence_checks = 0;
  std::optional<MonadRow> monad;
  std::optional<TwistRow> general_twist;

  bool semistable() const { return verdict == "Semistable"; }
  friend bool operator==(const Report&, const Report&) = default;
};

/// Runs splitting_type and fully_split_test (plus the kernel system for monads).
/// A twist of degree > 1 on a direct sum adds the general-twist pathway; the
/// main analysis always uses a degree-1 twist.
Report cmd_analyze(const JobDescription& job, const std::optional<Divisor>& twist = std::nullopt);
/// 0 for Semistable, 2 for NotSemistable.
int exit_code(const Report& r);

std::string report_json(const Report& r);
Report report_from_json(const std::string& text);
std::string report_text(const Report& r);
/// Machine-readable error object for failures.
std::string error_json(const std::string& kind, const std::string& message);

/// Sorted factor ranks, e.g. "1+1" or "2"; "-" when not semistable.
std::string splitting_shape(const Report& r);

struct Slot {
  std::string name;
  std::vector<std::string> values;
};

/// "name=lo..hi" (integers) or "name=v1,v2,...".
Slot parse_slot(const std::string& text);

struct SweepRow {
  int index = 0;
  std::vector<std::string> values;
  bool skipped = false;
  std::string status;
  std::optional<Report> report;
};

struct SweepResult {
  std::vector<std::string> slots;
  std::vector<SweepRow> rows;
  int skipped = 0;
  std::vector<std::pair<std::string, int>> verdicts;
  std::vector<std::pair<std::string, int>> shapes;
};

/// Instantiates {name} placeholders over the product of the slot ranges; rows
/// run on a worker pool and come back in index order.
SweepResult cmd_sweep(const std::string& template_text, const std::vector<Slot>& slots, int threads = 0);
std::string sweep_json(const SweepResult& s);
std::string sweep_text(const SweepResult& s);

}  // namespace ebundle
