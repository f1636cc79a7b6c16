#include "ebundle/bundles.hpp"

#include <algorithm>
#include <set>

#include "ebundle/errors.hpp"

namespace ebundle {

namespace {

void require_rational(const Place& t) {
  if (t.degree() != 1) throw BaseChangeRequired(t.degree());
}

/// All k-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  if (k > m) return out;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == m - k + i) --i;
    if (i < 0) return out;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

struct Minor {
  std::vector<int> rows;
  CurveFunction det;
};

std::vector<Minor> nonzero_minors(const std::vector<FunctionVector>& columns) {
  const int k = static_cast<int>(columns.size());
  const int m = static_cast<int>(columns.front().size());
  std::vector<Minor> out;
  for (auto& R : subsets(m, k)) {
    std::vector<FunctionVector> rows;
    for (int a : R) {
      FunctionVector row;
      for (const auto& c : columns) row.push_back(c[a]);
      rows.push_back(std::move(row));
    }
    CurveFunction d = function_det(std::move(rows));
    if (!d.is_zero()) out.push_back({R, d});
  }
  if (out.empty()) throw IdenticallyZeroWedge();
  return out;
}

int order_at(const std::vector<Minor>& minors, const std::vector<Divisor>& rows, const Place& t) {
  int best = 0;
  bool first = true;
  for (const auto& mi : minors) {
    int v = valuation(mi.det, t);
    for (int a : mi.rows) v += rows[a].mult(t);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

void check_columns(const std::vector<FunctionVector>& columns, const std::vector<Divisor>& rows) {
  if (columns.empty()) throw InvalidInput("degeneracy of an empty set of columns");
  for (const auto& c : columns)
    if (c.size() != rows.size()) throw DimensionMismatch(static_cast<int>(c.size()), static_cast<int>(rows.size()));
}

FunctionVector combine(const CurvePtr& E, const std::vector<FunctionVector>& vecs, const std::vector<Elem>& c, int m) {
  FunctionVector out(m, CurveFunction::zero(E));
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    if (E->F().is_zero(c[k])) continue;
    for (int a = 0; a < m; ++a) out[a] = out[a] + vecs[k][a].scale(c[k]);
  }
  return out;
}

}  // namespace

CurveFunction function_det(std::vector<FunctionVector> rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw InvalidInput("determinant of an empty matrix");
  const CurvePtr E = rows[0][0].curve_ptr();
  CurveFunction det = CurveFunction::from_int(E, 1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (!rows[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return CurveFunction::zero(E);
    if (piv != c) {
      std::swap(rows[piv], rows[c]);
      det = -det;
    }
    det = det * rows[c][c];
    CurveFunction inv = rows[c][c].inverse();
    for (int r = c + 1; r < n; ++r) {
      if (rows[r][c].is_zero()) continue;
      CurveFunction q = rows[r][c] * inv;
      for (int j = c; j < n; ++j) rows[r][j] = rows[r][j] - q * rows[c][j];
    }
  }
  return det;
}

int degeneracy_order(const std::vector<FunctionVector>& columns, const std::vector<Divisor>& row_divisors,
                     const Place& t) {
  check_columns(columns, row_divisors);
  return order_at(nonzero_minors(columns), row_divisors, t);
}

Divisor degeneracy_divisor(const std::vector<FunctionVector>& columns, const std::vector<Divisor>& row_divisors) {
  check_columns(columns, row_divisors);
  auto minors = nonzero_minors(columns);
  // Outside these places the first minor is a unit and every row weight is 0.
  std::set<Place> candidates;
  const Divisor first = principal_divisor(minors.front().det);
  for (const auto& [t, n] : first.terms()) candidates.insert(t);
  for (const auto& D : row_divisors)
    for (const auto& [t, n] : D.terms()) candidates.insert(t);
  Divisor out;
  for (const auto& t : candidates) out.add(t, order_at(minors, row_divisors, t));
  return out;
}

// ---------------------------------------------------------------- validation

void DirectSumPresentation::validate() const {
  if (summands.empty()) throw InvalidInput("a direct sum needs at least one summand");
  curve->require(mark);
  int deg = 0;
  for (const auto& D : summands) deg += D.degree();
  if (deg != 0) throw InvalidInput("summand degrees sum to " + std::to_string(deg) + ", expected 0");
}

void KernelPresentation::validate() const {
  curve->require(mark);
  if (ambient.empty()) throw InvalidInput("kernel presentation without ambient summands");
  if (static_cast<int>(g.size()) != m())
    throw InvalidInput("g has " + std::to_string(g.size()) + " entries for " + std::to_string(m()) + " ambient summands");
  int deg = 0;
  for (const auto& D : ambient) deg += D.degree();
  if (deg != target.degree()) throw InvalidInput("ambient degrees do not sum to the target degree");
  std::vector<Divisor> rows;
  for (int a = 0; a < m(); ++a) {
    rows.push_back(target - ambient[a]);
    if (!in_riemann_roch(g[a], rows.back()))
      throw InvalidInput("g entry " + std::to_string(a + 1) + " is not a section of O(D_0 - D_" + std::to_string(a + 1) + ")");
  }
  Divisor deg_locus;
  try {
    deg_locus = degeneracy_divisor({g}, rows);
  } catch (const IdenticallyZeroWedge&) {
    throw InvalidInput("g is identically zero");
  }
  if (!deg_locus.is_zero()) throw InvalidInput("g is not surjective on the fibers at " + deg_locus.to_string());
}

void MonadPresentation::validate() const {
  kernel.validate();
  if (rank() < 0) throw InvalidInput("monad has more trivial summands than the ambient rank allows");
  if (f.empty()) return;
  const CurvePtr& E = kernel.curve;
  for (int j = 0; j < s(); ++j) {
    if (static_cast<int>(f[j].size()) != kernel.m())
      throw InvalidInput("column " + std::to_string(j + 1) + " of f has the wrong length");
    CurveFunction gf = CurveFunction::zero(E);
    for (int a = 0; a < kernel.m(); ++a) {
      if (!in_riemann_roch(f[j][a], kernel.ambient[a]))
        throw InvalidInput("f entry (" + std::to_string(a + 1) + "," + std::to_string(j + 1) + ") is not a section of O(D_" +
                           std::to_string(a + 1) + ")");
      gf = gf + kernel.g[a] * f[j][a];
    }
    if (!gf.is_zero()) throw InvalidInput("g f is not zero in column " + std::to_string(j + 1));
  }
  Divisor deg_locus;
  try {
    deg_locus = degeneracy_divisor(f, kernel.ambient);
  } catch (const IdenticallyZeroWedge&) {
    throw InvalidInput("the columns of f are dependent");
  }
  if (!deg_locus.is_zero()) throw InvalidInput("f is not injective on the fibers at " + deg_locus.to_string());
}

// ---------------------------------------------------------------- SectionSystem

std::vector<Divisor> SectionSystem::row_divisors() const {
  std::vector<Divisor> out;
  for (int a = 0; a < m(); ++a) out.push_back(row_divisor(a));
  return out;
}

void SectionSystem::validate() const {
  for (const auto* block : {&modulus, &sections})
    for (const auto& v : *block) {
      if (static_cast<int>(v.size()) != m()) throw DimensionMismatch(static_cast<int>(v.size()), m());
      for (int a = 0; a < m(); ++a)
        if (!in_riemann_roch(v[a], row_divisor(a))) throw InvalidInput("section component outside L(D_a + twist)");
    }
  std::vector<FunctionVector> all = modulus;
  all.insert(all.end(), sections.begin(), sections.end());
  if (!all.empty() && coordinate_matrix(field(), all).rank() != static_cast<int>(all.size()))
    throw InvalidInput("sections are linearly dependent");
}

SectionSystem SectionSystem::recombine(const Matrix& c) const {
  if (c.rows() != r()) throw DimensionMismatch(c.rows(), r());
  SectionSystem out = *this;
  out.sections.clear();
  for (int i = 0; i < c.cols(); ++i) out.sections.push_back(combine(curve, sections, c.col(i), m()));
  return out;
}

SectionSystem SectionSystem::base_change(const FieldPtr& L) const {
  SectionSystem out;
  out.curve = make_curve(curve->base_change(L));
  const Curve& EL = *out.curve;
  out.mark = EL.embed(mark, *curve);
  for (const auto& D : ambient) out.ambient.push_back(ebundle::base_change(D, EL));
  out.twist = ebundle::base_change(twist, EL);
  out.modulus_zero = ebundle::base_change(modulus_zero, EL);
  auto lift = [&](const std::vector<FunctionVector>& vs) {
    std::vector<FunctionVector> res;
    for (const auto& v : vs) {
      FunctionVector w;
      for (const auto& f : v) w.push_back(f.embed(out.curve));
      res.push_back(std::move(w));
    }
    return res;
  };
  out.sections = lift(sections);
  out.modulus = lift(modulus);
  out.declared_rank = declared_rank;
  return out;
}

// ---------------------------------------------------------------- section bases

SectionSystem sections_direct_sum(const DirectSumPresentation& P, const Divisor& twist) {
  P.validate();
  if (twist.degree() < 1) throw InvalidInput("the twist must have positive degree");
  SectionSystem S;
  S.curve = P.curve;
  S.mark = P.mark;
  S.ambient = P.summands;
  S.twist = twist;
  S.declared_rank = P.rank();
  const int m = P.rank();
  for (int j = 0; j < m; ++j)
    for (const auto& f : rr_basis(P.curve, P.summands[j] + twist).basis) {
      FunctionVector v(m, CurveFunction::zero(P.curve));
      v[j] = f;
      S.sections.push_back(std::move(v));
    }
  return S;
}

SectionSystem sections_kernel(const KernelPresentation& P, const Divisor& twist) {
  P.validate();
  const CurvePtr& E = P.curve;
  const FieldPtr& F = E->field();
  const int m = P.m();
  SectionSystem S;
  S.curve = E;
  S.mark = P.mark;
  S.ambient = P.ambient;
  S.twist = twist;
  S.declared_rank = m - 1;

  auto B0 = rr_basis(E, P.target + twist).basis;
  std::vector<std::vector<CurveFunction>> bases;
  std::vector<FunctionVector> cols;
  for (const auto& b : B0) cols.push_back({b});
  const int n0 = static_cast<int>(B0.size());
  for (int a = 0; a < m; ++a) {
    bases.push_back(rr_basis(E, P.ambient[a] + twist).basis);
    for (const auto& b : bases.back()) cols.push_back({P.g[a] * b});
  }
  const int N = static_cast<int>(cols.size()) - n0;
  if (N == 0) return S;

  // Express g_* of each basis vector in the basis of L(D_0 + twist).
  Matrix M = coordinate_matrix(F, cols);
  auto piv = M.rref();
  Matrix G(F, n0, N);
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= n0) throw InternalInconsistency("g maps outside L(D_0 + twist)");
    for (int j = 0; j < N; ++j) G.at(piv[r], j) = M.at(static_cast<int>(r), n0 + j);
  }
  for (const auto& c : G.kernel()) {
    FunctionVector v(m, CurveFunction::zero(E));
    int k = 0;
    for (int a = 0; a < m; ++a)
      for (const auto& b : bases[a]) {
        if (!F->is_zero(c[k])) v[a] = v[a] + b.scale(c[k]);
        ++k;
      }
    S.sections.push_back(std::move(v));
  }
  return S;
}

SectionSystem sections_monad(const MonadPresentation& P, const Divisor& twist) {
  P.validate();
  if (twist.degree() != 1) throw InvalidInput("monad sections need a twist of degree 1");
  const KernelPresentation& K = P.kernel;
  SectionSystem ker = sections_kernel(K, twist);
  if (P.s() == 0) {
    ker.declared_rank = P.rank();
    return ker;
  }
  const CurvePtr& E = K.curve;
  CurveFunction w = rr_basis(E, twist).basis.at(0);
  SectionSystem S = ker;
  S.sections.clear();
  S.declared_rank = P.rank();
  S.modulus_zero = principal_divisor(w) + twist;
  for (const auto& col : P.f) {
    FunctionVector v;
    for (const auto& fa : col) v.push_back(fa * w);
    S.modulus.push_back(std::move(v));
  }
  std::vector<FunctionVector> all = S.modulus;
  all.insert(all.end(), ker.sections.begin(), ker.sections.end());
  Matrix M = coordinate_matrix(E->field(), all);
  // Greedy echelon extension of the modulus block by kernel sections.
  std::vector<int> chosen;
  for (int j = 0; j < P.s(); ++j) chosen.push_back(j);
  int rank = M.select_cols(chosen).rank();
  if (rank != P.s()) throw InternalInconsistency("modulus block is dependent");
  for (int i = 0; i < ker.r(); ++i) {
    chosen.push_back(P.s() + i);
    int next = M.select_cols(chosen).rank();
    if (next > rank) {
      rank = next;
      S.sections.push_back(ker.sections[i]);
    } else {
      chosen.pop_back();
    }
  }
  if (M.rank() != ker.r()) throw InternalInconsistency("modulus block is not inside the kernel sections");
  return S;
}

// ---------------------------------------------------------------- evaluation

Evaluation evaluate(const SectionSystem& S, const Place& t) {
  require_rational(t);
  const FieldPtr& F = S.field();
  const int m = S.m();
  auto block = [&](const std::vector<FunctionVector>& vs, int shift) {
    Matrix out(F, m, static_cast<int>(vs.size()));
    for (int a = 0; a < m; ++a) {
      const int n = S.row_divisor(a).mult(t) - shift;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const CurveFunction& f = vs[i][a];
        if (f.is_zero()) continue;
        if (valuation(f, t) < -n) throw InvalidInput("section component has a pole beyond its divisor");
        out.at(a, static_cast<int>(i)) = local_series(f, t, -n + 1).coeff(-n);
      }
    }
    return out;
  };
  return {block(S.sections, 0), block(S.modulus, S.modulus_zero.mult(t))};
}

}  // namespace ebundle
