#include "ebundle/stability.hpp"

#include <algorithm>
#include <map>

#include "ebundle/errors.hpp"

namespace ebundle {

std::string to_string(Verdict v) { return v == Verdict::Semistable ? "Semistable" : "NotSemistable"; }

std::string to_string(Reason r) {
  switch (r) {
    case Reason::None: return "None";
    case Reason::SectionCountMismatch: return "SectionCountMismatch";
    case Reason::TopWedgeVanishes: return "TopWedgeVanishes";
  }
  return "None";
}

namespace {

// ---------------------------------------------------------------- F[z]/z^P

using Coeffs = std::vector<Elem>;

struct LocalRing {
  FieldPtr F;
  int P;

  Coeffs zero() const { return Coeffs(P, F->zero()); }
  int val(const Coeffs& a) const {
    for (int k = 0; k < P; ++k)
      if (!F->is_zero(a[k])) return k;
    return P;
  }
  Coeffs mul(const Coeffs& a, const Coeffs& b) const {
    Coeffs c = zero();
    for (int i = 0; i < P; ++i) {
      if (F->is_zero(a[i])) continue;
      for (int j = 0; i + j < P; ++j) c[i + j] = F->add(c[i + j], F->mul(a[i], b[j]));
    }
    return c;
  }
  void sub_in(Coeffs& a, const Coeffs& b) const {
    for (int k = 0; k < P; ++k) a[k] = F->sub(a[k], b[k]);
  }
  void add_in(Coeffs& a, const Coeffs& b) const {
    for (int k = 0; k < P; ++k) a[k] = F->add(a[k], b[k]);
  }
  Coeffs scale(const Coeffs& a, const Elem& c) const {
    Coeffs out(P);
    for (int k = 0; k < P; ++k) out[k] = F->mul(a[k], c);
    return out;
  }
  /// a / z^v; the top v coefficients are unknown and set to zero.
  Coeffs down(const Coeffs& a, int v) const {
    Coeffs out = zero();
    for (int k = v; k < P; ++k) out[k - v] = a[k];
    return out;
  }
  Coeffs inverse(const Coeffs& u) const {
    Coeffs out = zero();
    Elem i0 = F->inv(u[0]);
    out[0] = i0;
    for (int k = 1; k < P; ++k) {
      Elem acc = F->zero();
      for (int j = 1; j <= k; ++j) acc = F->add(acc, F->mul(u[j], out[k - j]));
      out[k] = F->neg(F->mul(acc, i0));
    }
    return out;
  }
  /// a(w + c w^2).
  Coeffs reparam(const Coeffs& a, const Elem& c) const {
    Coeffs q = zero();
    if (P > 1) q[1] = F->one();
    if (P > 2) q[2] = c;
    Coeffs out = zero(), qk = zero();
    qk[0] = F->one();
    for (int k = 0; k < P; ++k) {
      add_in(out, scale(qk, a[k]));
      qk = mul(qk, q);
    }
    return out;
  }
};

struct LocalMat {
  int rows = 0, cols = 0;
  std::vector<std::vector<Coeffs>> a;
};

LocalMat hcat(const LocalMat& x, const LocalMat& y, int rows) {
  LocalMat out{rows, x.cols + y.cols, std::vector<std::vector<Coeffs>>(rows)};
  for (int i = 0; i < rows; ++i) {
    if (x.cols) out.a[i] = x.a[i];
    out.a[i].insert(out.a[i].end(), y.a[i].begin(), y.a[i].end());
  }
  return out;
}

/// Columns combined by a constant matrix: result column j = sum_k B(k, j) col_k.
LocalMat combine(const LocalRing& R, const LocalMat& M, const Matrix& B) {
  LocalMat out{M.rows, B.cols(), std::vector<std::vector<Coeffs>>(M.rows, std::vector<Coeffs>(B.cols(), R.zero()))};
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < B.cols(); ++j)
      for (int k = 0; k < M.cols; ++k)
        if (!R.F->is_zero(B.at(k, j))) R.add_in(out.a[i][j], R.scale(M.a[i][k], B.at(k, j)));
  return out;
}

Matrix constant_part(const LocalRing& R, const LocalMat& M) {
  Matrix out(R.F, M.rows, M.cols);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) out.at(i, j) = M.a[i][j][0];
  return out;
}

Matrix coefficient(const LocalRing& R, const LocalMat& M, int k) {
  Matrix out(R.F, M.rows, M.cols);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) out.at(i, j) = M.a[i][j][k];
  return out;
}

struct Smith {
  /// Pivot valuations in elimination order (all < P).
  std::vector<int> exponents;
  /// Constant part of the left transform; its first rank columns span the
  /// fiber of the saturation of the column span.
  Matrix U0;
  int rank() const { return static_cast<int>(exponents.size()); }
};

Smith smith(const LocalRing& R, LocalMat A) {
  const FieldPtr& F = R.F;
  const int m = A.rows, k = A.cols;
  Smith out{{}, Matrix::identity(F, m)};
  for (int step = 0; step < std::min(m, k); ++step) {
    int bi = -1, bj = -1, bv = R.P;
    for (int i = step; i < m; ++i)
      for (int j = step; j < k; ++j) {
        int v = R.val(A.a[i][j]);
        if (v < bv) bv = v, bi = i, bj = j;
      }
    if (bi < 0) break;
    if (bi != step) {
      std::swap(A.a[bi], A.a[step]);
      for (int r = 0; r < m; ++r) std::swap(out.U0.at(r, bi), out.U0.at(r, step));
    }
    if (bj != step)
      for (int i = 0; i < m; ++i) std::swap(A.a[i][bj], A.a[i][step]);
    const Coeffs uinv = R.inverse(R.down(A.a[step][step], bv));
    for (int i = step + 1; i < m; ++i) {
      if (R.val(A.a[i][step]) >= R.P) continue;
      Coeffs c = R.mul(R.down(A.a[i][step], bv), uinv);
      for (int j = step; j < k; ++j) R.sub_in(A.a[i][j], R.mul(c, A.a[step][j]));
      // Row_i -= c Row_step, so U gains c U_i in column step.
      for (int r = 0; r < m; ++r) out.U0.at(r, step) = F->add(out.U0.at(r, step), F->mul(c[0], out.U0.at(r, i)));
    }
    for (int j = step + 1; j < k; ++j) {
      if (R.val(A.a[step][j]) >= R.P) continue;
      Coeffs c = R.mul(R.down(A.a[step][j], bv), uinv);
      for (int i = step; i < m; ++i) R.sub_in(A.a[i][j], R.mul(c, A.a[i][step]));
    }
    out.exponents.push_back(bv);
  }
  return out;
}

Matrix saturation_fiber(const Smith& sm) {
  std::vector<int> cols;
  for (int i = 0; i < sm.rank(); ++i) cols.push_back(i);
  return sm.U0.select_cols(cols);
}

/// Echelon basis (as columns of an r-row matrix) of {c : S0 c in span W}.
Matrix relation_space(const Matrix& W, const Matrix& S0) {
  const FieldPtr& F = S0.field();
  const int k = W.cols(), r = S0.cols();
  Matrix M = W.cols() ? W.hcat(S0) : S0;
  auto ker = M.kernel();
  Matrix C(F, static_cast<int>(ker.size()), r);
  for (std::size_t i = 0; i < ker.size(); ++i)
    for (int j = 0; j < r; ++j) C.at(static_cast<int>(i), j) = ker[i][k + j];
  auto piv = C.rref();
  Matrix out(F, r, static_cast<int>(piv.size()));
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (int j = 0; j < r; ++j) out.at(j, static_cast<int>(i)) = C.at(static_cast<int>(i), j);
  return out;
}

Matrix columns_of(const FieldPtr& F, int rows, const std::vector<std::vector<Elem>>& vs) {
  Matrix out(F, rows, static_cast<int>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) out.set_col(static_cast<int>(j), vs[j]);
  return out;
}

std::vector<std::vector<Elem>> columns(const Matrix& M) {
  std::vector<std::vector<Elem>> out;
  for (int j = 0; j < M.cols(); ++j) out.push_back(M.col(j));
  return out;
}

// ---------------------------------------------------------------- local matrices

struct LocalSystem {
  LocalRing R;
  LocalMat N;  // m x s, saturated modulus
  LocalMat S;  // m x r
};

LocalSystem local_system(const SectionSystem& SS, const Place& t, int P, const LocalFrame& frame) {
  if (t.degree() != 1) throw BaseChangeRequired(t.degree());
  const FieldPtr& F = SS.field();
  LocalSystem L{{F, P}, {}, {}};
  const int m = SS.m();
  std::vector<Coeffs> units;
  for (const auto& u : frame.row_units) {
    if (valuation(u, t) != 0) throw InvalidInput("frame unit does not have valuation 0");
    Series s = local_series(u, t, P);
    Coeffs c(P);
    for (int k = 0; k < P; ++k) c[k] = s.coeff(k);
    units.push_back(std::move(c));
  }
  auto build = [&](const std::vector<FunctionVector>& vs, int shift) {
    LocalMat M{m, static_cast<int>(vs.size()), std::vector<std::vector<Coeffs>>(m)};
    for (int a = 0; a < m; ++a) {
      const int n = SS.row_divisor(a).mult(t) - shift;
      for (const auto& v : vs) {
        Coeffs c = L.R.zero();
        if (!v[a].is_zero()) {
          Series s = local_series(v[a], t, P - n).shift(n);
          if (s.val() < 0) throw InternalInconsistency("trivialized section has a pole");
          for (int k = 0; k < P; ++k) c[k] = s.coeff(k);
        }
        if (!units.empty()) c = L.R.mul(c, units.at(a));
        if (frame.reparam) c = L.R.reparam(c, *frame.reparam);
        M.a[a].push_back(std::move(c));
      }
    }
    return M;
  };
  L.N = build(SS.modulus, SS.modulus_zero.mult(t));
  L.S = build(SS.sections, 0);
  return L;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InternalInconsistency(what);
}

std::vector<int> all_columns(const SectionSystem& S) {
  std::vector<int> cols(S.r());
  for (int i = 0; i < S.r(); ++i) cols[i] = i;
  return cols;
}

std::vector<FunctionVector> wedge_columns(const SectionSystem& S, const std::vector<int>& cols) {
  std::vector<FunctionVector> out = S.modulus;
  for (int i : cols) out.push_back(S.sections.at(i));
  return out;
}

SectionSystem split_system(const SectionSystem& S, const Divisor& D) {
  const int k = D.split_degree();
  return k == 1 ? S : S.base_change(extend(S.field(), k));
}

int sum(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

}  // namespace

// ---------------------------------------------------------------- global wedges

int wedge_valuation(const SectionSystem& S, const std::vector<int>& columns, const Place& t) {
  auto cols = wedge_columns(S, columns);
  if (cols.empty()) return 0;
  return degeneracy_order(cols, S.row_divisors(), t) - S.s() * S.modulus_zero.mult(t);
}

Divisor wedge_divisor(const SectionSystem& S, const std::vector<int>& columns) {
  auto cols = wedge_columns(S, columns);
  if (cols.empty()) return Divisor();
  return degeneracy_divisor(cols, S.row_divisors()) - S.s() * S.modulus_zero;
}

Divisor spectral_divisor(const SectionSystem& S) {
  if (S.r() != S.declared_rank) throw SectionCountMismatch(S.r(), S.declared_rank);
  if (S.r() == 0) return Divisor();
  try {
    return wedge_divisor(S, all_columns(S));
  } catch (const IdenticallyZeroWedge&) {
    throw TopWedgeVanishes();
  }
}

int incidence_order(const SectionSystem& S, int section, const std::vector<int>& columns, const Place& t) {
  std::vector<int> with = columns;
  with.push_back(section);
  return wedge_valuation(S, with, t) - wedge_valuation(S, columns, t);
}

// ---------------------------------------------------------------- local analysis

KernelData kernel_dimension(const SectionSystem& S, const Place& t) {
  const FieldPtr& F = S.field();
  const int m = S.m(), s = S.s();
  LocalSystem L = local_system(S, t, 2, {});
  Matrix N0 = constant_part(L.R, L.N), S0 = constant_part(L.R, L.S);
  KernelData kd;
  kd.point = t.is_infinity() ? Point::infinity() : t.point();
  Matrix M = s ? N0.hcat(S0) : S0;
  auto ker = M.kernel();
  Matrix N1 = coefficient(L.R, L.N, 1), S1 = coefficient(L.R, L.S, 1);
  for (const auto& v : ker) {
    std::vector<Elem> a(v.begin(), v.begin() + s), c(v.begin() + s, v.end());
    kd.kernel_basis.push_back(c);
    // The section S c + N a vanishes at t; its first-order term is the limit direction.
    std::vector<Elem> dir = S1.apply(c);
    if (s) {
      auto na = N1.apply(a);
      for (int i = 0; i < m; ++i) dir[i] = F->add(dir[i], na[i]);
    }
    kd.limit_directions.push_back(std::move(dir));
  }
  kd.d = static_cast<int>(ker.size());
  Matrix D = columns_of(F, m, kd.limit_directions);
  kd.limit_rank = (s ? N0.hcat(D) : D).rank() - s;
  return kd;
}

WedgeProfile wedge_profile(const SectionSystem& S, const Place& t, int mult, const LocalFrame& frame) {
  const FieldPtr& F = S.field();
  const int m = S.m(), s = S.s(), r = S.r();
  LocalSystem L = local_system(S, t, mult + 2, frame);
  const LocalRing& R = L.R;
  WedgeProfile wp;
  wp.point = t.is_infinity() ? Point::infinity() : t.point();

  Smith full = smith(R, hcat(L.N, L.S, m));
  require(full.rank() == s + r, "local matrix is degenerate at " + t.to_string());
  std::vector<int> e = full.exponents;
  std::sort(e.begin(), e.end());
  for (int i = 0; i < s; ++i) require(e[i] == 0, "saturated modulus is not injective at " + t.to_string());
  wp.exponents.assign(e.begin() + s, e.end());
  require(sum(wp.exponents) == mult, "elementary exponents disagree with the spectral multiplicity at " + t.to_string());

  // Kernel tower: L_{j+1} = {c : S(0) c in fiber of the saturation of N + S L_j}.
  const Matrix S0 = constant_part(R, L.S);
  Matrix flag(F, r, 0);
  Matrix W0;
  for (;;) {
    Smith sat = smith(R, hcat(L.N, combine(R, L.S, flag), m));
    W0 = saturation_fiber(sat);
    Matrix next = relation_space(W0, S0);
    if (next.cols() == flag.cols()) break;
    require(flag.cols() == 0 || flag.hcat(next).rank() == next.cols(), "kernel tower is not increasing");
    for (int j = 0; j < next.cols(); ++j) {
      Matrix cand = flag.hcat(columns_of(F, r, {next.col(j)}));
      if (cand.rank() > flag.cols()) flag = cand;
    }
    wp.tower.push_back(flag.cols());
  }
  // The tower increments form the conjugate partition of the exponents.
  const int J = static_cast<int>(wp.tower.size());
  for (int j = 1; j <= J + 1; ++j) {
    int count = 0;
    for (int x : wp.exponents) count += x >= j;
    int inc = j <= J ? wp.tower[j - 1] - (j > 1 ? wp.tower[j - 2] : 0) : 0;
    require(inc == count, "kernel tower does not match the elementary exponents at " + t.to_string());
  }

  // Adapted ordering: the tower flag, then a completion by unit vectors.
  const int ell = flag.cols();
  Matrix B = flag;
  for (int i = 0; i < r && B.cols() < r; ++i) {
    std::vector<Elem> ei(r, F->zero());
    ei[i] = F->one();
    Matrix cand = B.hcat(columns_of(F, r, {ei}));
    if (cand.rank() > B.cols()) B = cand;
  }
  int prev = 0;
  for (int j = 1; j <= r; ++j) {
    std::vector<int> first(j);
    for (int i = 0; i < j; ++i) first[i] = i;
    Smith sm = smith(R, hcat(L.N, combine(R, L.S, B.select_cols(first)), m));
    require(sm.rank() == s + j, "partial wedge vanishes at " + t.to_string());
    int dj = sum(sm.exponents);
    require(dj - prev == (j <= ell ? 1 : 0), "filtration increment is not adapted at " + t.to_string());
    wp.delta.push_back(dj);
    prev = dj;
  }
  require(prev == mult, "top partial wedge disagrees with the spectral multiplicity");

  // The tower fiber and the values of the remaining sections span the fiber.
  std::vector<int> rest;
  for (int j = ell; j < r; ++j) rest.push_back(j);
  Matrix span = rest.empty() ? W0 : W0.hcat(S0 * B.select_cols(rest));
  require(span.rank() == s + r, "fiber decomposition fails at " + t.to_string());
  return wp;
}

// ---------------------------------------------------------------- reports

StabilityReport splitting_type(const SectionSystem& S) {
  StabilityReport rep;
  rep.rank = S.declared_rank;
  rep.section_count = S.r();
  rep.curve = S.curve;
  rep.mark = S.mark;
  rep.split_curve = S.curve;
  if (S.r() != S.declared_rank) {
    rep.verdict = Verdict::NotSemistable;
    rep.reason = Reason::SectionCountMismatch;
    return rep;
  }
  if (S.r() == 0) {
    rep.fully_split = true;
    return rep;
  }
  const int r = S.r();
  // Wedge divisors of all column subsets, by bitmask.
  std::map<unsigned, Divisor> wedges;
  auto wedge_of = [&](unsigned mask) -> const Divisor& {
    auto it = wedges.find(mask);
    if (it != wedges.end()) return it->second;
    std::vector<int> cols;
    for (int i = 0; i < r; ++i)
      if (mask >> i & 1u) cols.push_back(i);
    return wedges.emplace(mask, wedge_divisor(S, cols)).first->second;
  };
  const unsigned top = (1u << r) - 1;
  try {
    rep.spectral = wedge_of(top);
  } catch (const IdenticallyZeroWedge&) {
    rep.verdict = Verdict::NotSemistable;
    rep.reason = Reason::TopWedgeVanishes;
    return rep;
  }
  require(rep.spectral.degree() == r, "spectral divisor has degree " + std::to_string(rep.spectral.degree()));

  // Slope bound: single sections and incidence orders on slope-1 frames.
  for (int i = 0; i < r; ++i) {
    const Divisor& Z = wedge_of(1u << i);
    require(Z.degree() <= 1 && Z.is_effective(), "a section vanishes on a divisor of degree > 1");
    for (const auto& [t, n] : Z.terms()) rep.max_vanishing = std::max(rep.max_vanishing, n);
  }
  for (unsigned T = 1; T < top; ++T) {
    const Divisor& ZT = wedge_of(T);
    if (ZT.degree() != __builtin_popcount(T)) continue;
    for (int i = 0; i < r; ++i) {
      if (T >> i & 1u) continue;
      Divisor inc = wedge_of(T | 1u << i) - ZT;
      ++rep.incidence_checks;
      for (const auto& [t, n] : inc.terms()) rep.max_incidence = std::max(rep.max_incidence, n);
    }
  }
  require(rep.max_vanishing <= 1 && rep.max_incidence <= 1, "slope bound violated");

  SectionSystem SL = split_system(S, rep.spectral);
  rep.split_curve = SL.curve;
  const Curve& EL = *SL.curve;
  rep.spectral_points = base_change(rep.spectral, EL);
  Divisor from_exponents;
  rep.fully_split = true;
  for (const auto& [t, mult] : rep.spectral.terms())
    for (const auto& q : points_of(t, EL)) {
      Place tq = place_of(EL, q);
      PointAnalysis pa{t, q, mult, wedge_profile(SL, tq, mult), kernel_dimension(SL, tq)};
      int nonzero = 0;
      for (int e : pa.wedge.exponents)
        if (e > 0) {
          ++nonzero;
          rep.splitting.push_back({q, e});
          from_exponents.add(tq, e);
          if (e > 1) rep.fully_split = false;
        }
      require(pa.kernel.d == nonzero, "kernel dimension disagrees with the exponents at " + tq.to_string());
      require(pa.kernel.limit_rank == pa.kernel.d, "limit directions are degenerate at " + tq.to_string());
      rep.points.push_back(std::move(pa));
    }
  require(from_exponents == rep.spectral_points, "exponent divisor differs from the wedge divisor");
  return rep;
}

FullySplitReport fully_split_test(const SectionSystem& S) {
  FullySplitReport rep;
  rep.split_curve = S.curve;
  // Steps 1-2: section count.
  if (S.r() != S.declared_rank) {
    rep.verdict = Verdict::NotSemistable;
    rep.reason = Reason::SectionCountMismatch;
    return rep;
  }
  const int r = S.r();
  if (r == 0) {
    rep.fully_split = true;
    return rep;
  }
  // Step 3: the top wedge.
  try {
    rep.spectral = wedge_divisor(S, all_columns(S));
  } catch (const IdenticallyZeroWedge&) {
    rep.verdict = Verdict::NotSemistable;
    rep.reason = Reason::TopWedgeVanishes;
    return rep;
  }
  // Step 4: relation spaces P_t at the points of the support.
  SectionSystem SL = split_system(S, rep.spectral);
  rep.split_curve = SL.curve;
  const FieldPtr& F = SL.field();
  std::vector<std::vector<Elem>> stacked;
  int total = 0;
  bool b_ok = true;
  for (const auto& [t, mult] : rep.spectral.terms())
    for (const auto& q : points_of(t, *SL.curve)) {
      Evaluation ev = evaluate(SL, place_of(*SL.curve, q));
      Matrix P = relation_space(ev.modulus, ev.sections);
      rep.kernel_dims.push_back({q, P.cols()});
      total += P.cols();
      if (P.cols() != mult) b_ok = false;
      for (int j = 0; j < P.cols(); ++j) stacked.push_back(P.col(j));
    }
  if (total != r) {
    rep.failed_condition = "a";
  } else if (!b_ok) {
    rep.failed_condition = "b";
  } else if (columns_of(F, r, stacked).rank() != r) {
    rep.failed_condition = "c";
  }
  rep.fully_split = rep.failed_condition.empty();
  return rep;
}

GeneralTwistResult general_twist_spectral(const DirectSumPresentation& P, const std::vector<Point>& points) {
  if (points.empty()) throw InvalidInput("the twist needs at least one point");
  const Curve& E = *P.curve;
  Divisor D, tail;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Place t = place_of(E, points[i]);
    if (D.mult(t) != 0) throw InvalidInput("twist points must be distinct");
    D.add(t, 1);
    if (i > 0) tail.add(t, 1);
  }
  SectionSystem V = sections_direct_sum(P, D);
  const FieldPtr& F = E.field();
  const int n = V.r(), r = P.rank();
  // G: sections vanishing at p_2, ..., p_h.
  Matrix cond(F, 0, n);
  for (std::size_t i = 1; i < points.size(); ++i) cond = cond.vcat(evaluate(V, place_of(E, points[i])).sections);
  auto G = cond.rows() ? cond.kernel() : columns(Matrix::identity(F, n));
  GeneralTwistResult res;
  res.dim_g = static_cast<int>(G.size());
  if (res.dim_g != r) throw DimensionMismatch(res.dim_g, r);
  SectionSystem SG = V.recombine(columns_of(F, n, G));
  SG.declared_rank = r;
  res.spectral = spectral_divisor(SG) - r * tail;
  res.canonical_basis = true;
  for (int i = 0; i < r; ++i)
    if (wedge_divisor(SG, {i}).degree() != static_cast<int>(points.size())) res.canonical_basis = false;
  return res;
}

}  // namespace ebundle
