#include "ebundle/funcspace.hpp"

#include <algorithm>
#include <climits>
#include <map>

#include "ebundle/errors.hpp"

namespace ebundle {

namespace {

constexpr int kInf = INT_MAX / 4;

Poly lcm(const Poly& a, const Poly& b) { return (a / gcd(a, b)) * b; }

int ord(const Poly& m, const Poly& f) { return f.is_zero() ? kInf : multiplicity(m, f); }

std::string wrap(const std::string& s) {
  if (s.find_first_of("+-") == std::string::npos) return s;
  return "(" + s + ")";
}

}  // namespace

std::string RatFunc::to_string() const {
  if (den.degree() == 0) return num.to_string();
  return wrap(num.to_string()) + "/" + wrap(den.to_string());
}

// ---------------------------------------------------------------- CurveFunction

CurveFunction::CurveFunction(CurvePtr E, Poly A, Poly B, Poly C)
    : E_(std::move(E)), A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
  const FieldPtr& F = E_->field();
  if (C_.is_zero()) throw DivisionByZero();
  if (A_.is_zero() && B_.is_zero()) {
    A_ = Poly(F);
    B_ = Poly(F);
    C_ = Poly::from_int(F, 1);
    return;
  }
  Poly g = gcd(gcd(A_, B_), C_);
  if (g.degree() > 0) {
    A_ = A_ / g;
    B_ = B_ / g;
    C_ = C_ / g;
  }
  if (!C_.is_monic()) {
    Elem li = F->inv(C_.lead());
    A_ = A_.scale(li);
    B_ = B_.scale(li);
    C_ = C_.scale(li);
  }
}

CurveFunction CurveFunction::zero(CurvePtr E) {
  FieldPtr F = E->field();
  return CurveFunction(std::move(E), Poly(F), Poly(F), Poly::from_int(F, 1));
}

CurveFunction CurveFunction::constant(CurvePtr E, Elem c) {
  FieldPtr F = E->field();
  return CurveFunction(std::move(E), Poly::constant(F, std::move(c)), Poly(F), Poly::from_int(F, 1));
}

CurveFunction CurveFunction::from_int(CurvePtr E, std::int64_t c) {
  Elem e = E->field()->from_int(c);
  return constant(std::move(E), std::move(e));
}

CurveFunction CurveFunction::x(CurvePtr E) {
  FieldPtr F = E->field();
  return CurveFunction(std::move(E), Poly::x(F), Poly(F), Poly::from_int(F, 1));
}

CurveFunction CurveFunction::y(CurvePtr E) {
  FieldPtr F = E->field();
  return CurveFunction(std::move(E), Poly(F), Poly::from_int(F, 1), Poly::from_int(F, 1));
}

CurveFunction CurveFunction::from_poly(CurvePtr E, Poly A) {
  FieldPtr F = E->field();
  return CurveFunction(std::move(E), std::move(A), Poly(F), Poly::from_int(F, 1));
}

RatFunc CurveFunction::a() const {
  if (A_.is_zero()) return {A_, Poly::from_int(field(), 1)};
  Poly g = gcd(A_, C_);
  Poly num = A_ / g, den = C_ / g;
  Elem li = field()->inv(den.lead());
  return {num.scale(li), den.scale(li)};
}

RatFunc CurveFunction::b() const {
  if (B_.is_zero()) return {B_, Poly::from_int(field(), 1)};
  Poly g = gcd(B_, C_);
  Poly num = B_ / g, den = C_ / g;
  Elem li = field()->inv(den.lead());
  return {num.scale(li), den.scale(li)};
}

Poly CurveFunction::numerator_norm() const { return A_ * A_ - B_ * B_ * E_->rhs(); }

void CurveFunction::check(const CurveFunction& g) const {
  if (E_ != g.E_ && !(*E_ == *g.E_)) throw FieldMismatch();
}

CurveFunction CurveFunction::conj() const { return CurveFunction(E_, A_, -B_, C_); }

CurveFunction CurveFunction::inverse() const {
  if (is_zero()) throw DivisionByZero();
  return CurveFunction(E_, C_ * A_, -(C_ * B_), numerator_norm());
}

CurveFunction CurveFunction::scale(const Elem& c) const { return CurveFunction(E_, A_.scale(c), B_.scale(c), C_); }

CurveFunction CurveFunction::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  CurveFunction r = from_int(E_, 1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

CurveFunction CurveFunction::embed(const CurvePtr& E_L) const {
  const FieldPtr& L = E_L->field();
  return CurveFunction(E_L, A_.embed(L), B_.embed(L), C_.embed(L));
}

CurveFunction CurveFunction::operator-() const { return CurveFunction(E_, -A_, -B_, C_); }

CurveFunction operator+(const CurveFunction& f, const CurveFunction& g) {
  f.check(g);
  if (f.C_ == g.C_) return CurveFunction(f.E_, f.A_ + g.A_, f.B_ + g.B_, f.C_);
  Poly L = lcm(f.C_, g.C_);
  Poly uf = L / f.C_, ug = L / g.C_;
  return CurveFunction(f.E_, f.A_ * uf + g.A_ * ug, f.B_ * uf + g.B_ * ug, L);
}

CurveFunction operator-(const CurveFunction& f, const CurveFunction& g) { return f + (-g); }

CurveFunction operator*(const CurveFunction& f, const CurveFunction& g) {
  f.check(g);
  if (f.is_zero() || g.is_zero()) return CurveFunction::zero(f.E_);
  Poly A = f.A_ * g.A_ + f.B_ * g.B_ * f.E_->rhs();
  Poly B = f.A_ * g.B_ + f.B_ * g.A_;
  return CurveFunction(f.E_, std::move(A), std::move(B), f.C_ * g.C_);
}

CurveFunction operator/(const CurveFunction& f, const CurveFunction& g) {
  f.check(g);
  return f * g.inverse();
}

bool operator==(const CurveFunction& f, const CurveFunction& g) {
  return f.A_ == g.A_ && f.B_ == g.B_ && f.C_ == g.C_;
}

std::string CurveFunction::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  if (!A_.is_zero()) s = a().to_string();
  if (!B_.is_zero()) {
    RatFunc bb = b();
    std::string t;
    if (bb.num.is_one() && bb.den.degree() == 0) {
      t = "y";
    } else if (bb.den.degree() == 0) {
      t = wrap(bb.num.to_string()) + "*y";
    } else {
      t = wrap(bb.num.to_string()) + "*y/" + wrap(bb.den.to_string());
    }
    s = s.empty() ? t : s + " + " + t;
  }
  return s;
}

// ---------------------------------------------------------------- valuations

int valuation(const CurveFunction& f, const Place& t) {
  if (f.is_zero()) throw ZeroFunction();
  const Poly &A = f.A(), &B = f.B(), &C = f.C();
  if (t.is_infinity()) {
    int vA = A.is_zero() ? kInf : -2 * A.degree();
    int vB = B.is_zero() ? kInf : -2 * B.degree() - 3;
    return std::min(vA, vB) + 2 * C.degree();
  }
  const Poly m = t.m();
  const int e = ord(m, C);
  const int oA = ord(m, A), oB = ord(m, B);
  if (t.ramified()) return std::min(oA == kInf ? kInf : 2 * oA, oB == kInf ? kInf : 2 * oB + 1) - 2 * e;
  if (t.inert()) return std::min(oA, oB) - e;
  const int k = std::min(oA, oB);
  Poly mk = pow(m, k);
  Poly A2 = A / mk, B2 = B / mk;
  if (!((A2 + B2 * *t.y()) % m).is_zero()) return k - e;
  // The conjugate place sees a unit, so the norm carries the whole order.
  Poly N = A2 * A2 - B2 * B2 * f.curve().rhs();
  return k + multiplicity(m, N) - e;
}

Divisor principal_divisor(const CurveFunction& f) {
  if (f.is_zero()) throw ZeroFunction();
  const Curve& E = f.curve();
  Divisor D;
  std::vector<Poly> ms;
  for (const Poly& g : {f.numerator_norm(), f.C()}) {
    if (g.degree() < 1) continue;
    for (const auto& fac : factor(g)) {
      if (std::find(ms.begin(), ms.end(), fac.poly) == ms.end()) ms.push_back(fac.poly);
    }
  }
  for (const auto& m : ms)
    for (const auto& t : places_over(E, m)) D.add(t, valuation(f, t));
  D.add(Place::infinity(E.field()), valuation(f, Place::infinity(E.field())));
  return D;
}

bool in_riemann_roch(const CurveFunction& f, const Divisor& D) {
  if (f.is_zero()) return true;
  return (principal_divisor(f) + D).is_effective();
}

// ---------------------------------------------------------------- Riemann-Roch

namespace {

// y modulo m^r at an unramified place whose y is Y modulo m (Newton lifting).
Poly hensel_lift(const Poly& Y, const Poly& c, const Poly& m, int r) {
  Poly mr = pow(m, r);
  Poly y = Y % mr;
  for (int k = 1; k < r; k *= 2) {
    Poly two_y = (y + y) % mr;
    ExtGcd eg = ext_gcd(two_y, mr);
    if (eg.g.degree() != 0) throw InternalInconsistency("2y is not a unit at an unramified place");
    y = (y - ((y * y - c) % mr) * eg.s) % mr;
  }
  return y;
}

std::vector<Elem> padded(const Poly& p, int n) {
  std::vector<Elem> v(n, p.F().zero());
  for (int i = 0; i <= p.degree() && i < n; ++i) v[i] = p.coeffs()[i];
  return v;
}

}  // namespace

RRBasis rr_basis(const CurvePtr& E, const Divisor& D) {
  RRBasis out{D, {}};
  if (D.degree() < 0) return out;
  const FieldPtr& F = E->field();
  const Place inf = Place::infinity(F);

  // h clears the finite poles allowed by D.
  std::vector<std::pair<Poly, int>> hexp;
  auto exponent_of = [&](const Poly& m) -> int& {
    for (auto& [q, k] : hexp)
      if (q == m) return k;
    hexp.push_back({m, 0});
    return hexp.back().second;
  };
  for (const auto& [t, n] : D.terms()) {
    if (t.is_infinity() || n <= 0) continue;
    const int e = t.ramified() ? 2 : 1;
    int& k = exponent_of(t.m());
    k = std::max(k, (n + e - 1) / e);
  }
  Poly h = Poly::from_int(F, 1);
  for (const auto& [m, k] : hexp) h = h * pow(m, k);
  const int N = D.mult(inf) + 2 * h.degree();
  if (N < 0) return out;

  // Monomials x^i (pole 2i) and x^j y (pole 2j+3), highest pole first.
  std::vector<int> poles;
  for (int k = N; k >= 0; --k)
    if (k != 1) poles.push_back(k);
  const int nm = static_cast<int>(poles.size());
  auto monomial = [&](int k) -> std::pair<Poly, Poly> {
    Elem one = F->one();
    if (k % 2 == 0) return {Poly::monomial(F, one, k / 2), Poly(F)};
    return {Poly(F), Poly::monomial(F, one, (k - 3) / 2)};
  };

  // Vanishing conditions at finite places where h over-clears D.
  std::vector<Place> places;
  for (const auto& [t, n] : D.terms())
    if (!t.is_infinity()) places.push_back(t);
  for (const auto& [m, k] : hexp)
    for (const auto& t : places_over(*E, m))
      if (std::find(places.begin(), places.end(), t) == places.end()) places.push_back(t);

  std::vector<std::vector<Elem>> rows;
  for (const auto& t : places) {
    const Poly m = t.m();
    int hk = 0;
    for (const auto& [q, k] : hexp)
      if (q == m) hk = k;
    const int e = t.ramified() ? 2 : 1;
    const int r = hk * e - D.mult(t);
    if (r <= 0) continue;
    std::vector<std::vector<Elem>> cols;
    if (t.ramified()) {
      Poly ma = pow(m, (r + 1) / 2), mb = pow(m, r / 2);
      for (int k : poles) {
        auto [A, B] = monomial(k);
        auto v = padded(A % ma, ma.degree());
        auto w = padded(B % mb, mb.degree());
        v.insert(v.end(), w.begin(), w.end());
        cols.push_back(std::move(v));
      }
    } else if (t.inert()) {
      Poly mr = pow(m, r);
      for (int k : poles) {
        auto [A, B] = monomial(k);
        auto v = padded(A % mr, mr.degree());
        auto w = padded(B % mr, mr.degree());
        v.insert(v.end(), w.begin(), w.end());
        cols.push_back(std::move(v));
      }
    } else {
      Poly mr = pow(m, r);
      Poly Yr = hensel_lift(*t.y(), E->rhs(), m, r);
      for (int k : poles) {
        auto [A, B] = monomial(k);
        cols.push_back(padded((A + B * Yr) % mr, mr.degree()));
      }
    }
    for (std::size_t i = 0; i < cols.front().size(); ++i) {
      std::vector<Elem> row;
      for (int j = 0; j < nm; ++j) row.push_back(cols[j][i]);
      rows.push_back(std::move(row));
    }
  }

  Matrix cond(F, static_cast<int>(rows.size()), nm);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < nm; ++j) cond.at(static_cast<int>(i), j) = rows[i][j];
  auto ker = cond.kernel();
  if (ker.empty()) return out;
  Matrix K(F, static_cast<int>(ker.size()), nm);
  for (std::size_t i = 0; i < ker.size(); ++i)
    for (int j = 0; j < nm; ++j) K.at(static_cast<int>(i), j) = ker[i][j];
  K.rref();
  for (int i = static_cast<int>(ker.size()); i-- > 0;) {
    Poly A(F), B(F);
    for (int j = 0; j < nm; ++j) {
      if (F->is_zero(K.at(i, j))) continue;
      auto [a, b] = monomial(poles[j]);
      A = A + a.scale(K.at(i, j));
      B = B + b.scale(K.at(i, j));
    }
    out.basis.emplace_back(E, std::move(A), std::move(B), h);
  }
  return out;
}

Matrix coordinate_matrix(const FieldPtr& F, const std::vector<std::vector<CurveFunction>>& vecs) {
  if (vecs.empty()) return Matrix(F, 0, 0);
  const std::size_t k = vecs.front().size();
  const int n = static_cast<int>(vecs.size());
  std::vector<std::vector<Elem>> cols(n);
  for (std::size_t a = 0; a < k; ++a) {
    Poly Q = Poly::from_int(F, 1);
    for (const auto& v : vecs) {
      if (v.size() != k) throw DimensionMismatch(static_cast<int>(v.size()), static_cast<int>(k));
      if (!v[a].is_zero()) Q = lcm(Q, v[a].C());
    }
    std::vector<Poly> As, Bs;
    int la = 0, lb = 0;
    for (const auto& v : vecs) {
      Poly u = Q / v[a].C();
      As.push_back(v[a].A() * u);
      Bs.push_back(v[a].B() * u);
      la = std::max(la, As.back().degree() + 1);
      lb = std::max(lb, Bs.back().degree() + 1);
    }
    for (int j = 0; j < n; ++j) {
      auto va = padded(As[j], la), vb = padded(Bs[j], lb);
      cols[j].insert(cols[j].end(), va.begin(), va.end());
      cols[j].insert(cols[j].end(), vb.begin(), vb.end());
    }
  }
  Matrix M(F, static_cast<int>(cols.front().size()), n);
  for (int j = 0; j < n; ++j) M.set_col(j, cols[j]);
  return M;
}

std::optional<std::vector<Elem>> coordinates(const std::vector<CurveFunction>& basis, const CurveFunction& f) {
  const FieldPtr& F = f.field();
  std::vector<std::vector<CurveFunction>> vecs;
  for (const auto& b : basis) vecs.push_back({b});
  vecs.push_back({f});
  Matrix M = coordinate_matrix(F, vecs);
  const int n = static_cast<int>(basis.size());
  auto piv = M.rref();
  std::vector<Elem> c(n, F->zero());
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == n) return std::nullopt;
    c[piv[r]] = M.at(static_cast<int>(r), n);
  }
  return c;
}

// ---------------------------------------------------------------- Series

Series::Series(FieldPtr F, int val, std::vector<Elem> c, int prec)
    : F_(std::move(F)), val_(val), c_(std::move(c)), prec_(prec) {
  normalize();
}

Series Series::constant(FieldPtr F, const Elem& c, int prec) {
  if (prec <= 0) return zero(std::move(F), prec);
  std::vector<Elem> v(prec, F->zero());
  v[0] = c;
  return Series(std::move(F), 0, std::move(v), prec);
}

Series Series::monomial(FieldPtr F, int k, int prec) {
  if (k >= prec) return zero(std::move(F), prec);
  std::vector<Elem> v(prec - k, F->zero());
  v[0] = F->one();
  return Series(std::move(F), k, std::move(v), prec);
}

void Series::normalize() {
  if (val_ >= prec_) {
    val_ = prec_;
    c_.clear();
    return;
  }
  c_.resize(prec_ - val_, F_->zero());
  std::size_t lead = 0;
  while (lead < c_.size() && F_->is_zero(c_[lead])) ++lead;
  if (lead == c_.size()) {
    val_ = prec_;
    c_.clear();
    return;
  }
  if (lead) {
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
    val_ += static_cast<int>(lead);
  }
}

Elem Series::coeff(int k) const {
  if (k >= prec_) throw InvalidInput("series coefficient beyond precision");
  if (k < val_) return F_->zero();
  return c_[k - val_];
}

Series Series::truncate(int prec) const {
  if (prec >= prec_) return *this;
  std::vector<Elem> v = c_;
  return Series(F_, val_, std::move(v), prec);
}

Series Series::shift(int k) const {
  Series s = *this;
  s.val_ += k;
  s.prec_ += k;
  return s;
}

Series Series::operator-() const {
  std::vector<Elem> v;
  for (const auto& e : c_) v.push_back(F_->neg(e));
  return Series(F_, val_, std::move(v), prec_);
}

Series operator+(const Series& a, const Series& b) {
  const int prec = std::min(a.prec_, b.prec_);
  const int val = std::min(a.val_, b.val_);
  if (val >= prec) return Series::zero(a.F_, prec);
  std::vector<Elem> v(prec - val, a.F_->zero());
  for (int k = val; k < prec; ++k) {
    if (k >= a.val_ && k - a.val_ < static_cast<int>(a.c_.size())) v[k - val] = a.c_[k - a.val_];
    if (k >= b.val_ && k - b.val_ < static_cast<int>(b.c_.size())) v[k - val] = a.F_->add(v[k - val], b.c_[k - b.val_]);
  }
  return Series(a.F_, val, std::move(v), prec);
}

Series operator-(const Series& a, const Series& b) { return a + (-b); }

Series operator*(const Series& a, const Series& b) {
  const int val = a.val_ + b.val_;
  const int prec = std::min(a.val_ + b.prec_, b.val_ + a.prec_);
  if (val >= prec) return Series::zero(a.F_, prec);
  const Field& F = *a.F_;
  const int n = prec - val;
  std::vector<Elem> v(n, F.zero());
  for (int i = 0; i < n && i < static_cast<int>(a.c_.size()); ++i) {
    if (F.is_zero(a.c_[i])) continue;
    for (int j = 0; i + j < n && j < static_cast<int>(b.c_.size()); ++j) v[i + j] = F.add(v[i + j], F.mul(a.c_[i], b.c_[j]));
  }
  return Series(a.F_, val, std::move(v), prec);
}

Series Series::scale(const Elem& c) const {
  std::vector<Elem> v;
  for (const auto& e : c_) v.push_back(F_->mul(e, c));
  if (F_->is_zero(c)) return zero(F_, prec_);
  return Series(F_, val_, std::move(v), prec_);
}

Series Series::inverse() const {
  if (is_zero()) throw DivisionByZero();
  const Field& F = *F_;
  const int n = prec_ - val_;
  std::vector<Elem> v(n, F.zero());
  const Elem li = F.inv(c_[0]);
  v[0] = li;
  for (int k = 1; k < n; ++k) {
    Elem s = F.zero();
    for (int i = 1; i <= k; ++i) s = F.add(s, F.mul(c_[i], v[k - i]));
    v[k] = F.neg(F.mul(s, li));
  }
  return Series(F_, -val_, std::move(v), -val_ + n);
}

Series Series::eval(const Poly& p, const Series& s, int prec) {
  // Coefficients are exact; give them enough precision not to be the bottleneck.
  const int cp = prec + (p.degree() + 1) * std::max(0, -s.val()) + 1;
  Series r = zero(s.F_, cp);
  for (int i = p.degree(); i >= 0; --i) r = r * s + constant(s.F_, p.coeffs()[i], cp);
  return r.truncate(prec);
}

// ---------------------------------------------------------------- local expansions

Uniformizer uniformizer_of(const Place& t) {
  if (t.is_infinity()) return Uniformizer::XOverYAtInfinity;
  if (t.ramified()) return Uniformizer::YAtRamified;
  return Uniformizer::XMinusX0;
}

std::pair<Series, Series> local_coordinates(const Curve& E, const Place& t, int prec) {
  const FieldPtr& F = E.field();
  if (t.kind() == Place::Kind::Closed) throw BaseChangeRequired(t.degree());
  if (t.is_infinity()) {
    // u = 1/y in z = x/y solves u = z^3 + a z u^2 + b u^3.
    const int pu = prec + 6;
    Series z = Series::monomial(F, 1, pu);
    Series z3 = Series::monomial(F, 3, pu);
    Series u = z3;
    for (int it = 0; it < pu; ++it) {
      Series u2 = u * u;
      Series nu = z3 + (z * u2).scale(E.a()) + (u2 * u).scale(E.b());
      if ((nu - u).is_zero() && it > 2) {
        u = nu;
        break;
      }
      u = nu;
    }
    Series ui = u.inverse();
    return {(z * ui).truncate(prec), ui.truncate(prec)};
  }
  const Point& q = t.point();
  Poly cz = E.rhs().compose(Poly(F, {q.x, F->one()}));  // c(x0 + z)
  if (t.ramified()) {
    // z = y and w = x - x0 solves w = (z^2 - c2 w^2 - w^3) / c1.
    const Elem c1i = F->inv(cz.coeff(1));
    const Elem c2 = cz.coeff(2);
    Series z2 = Series::monomial(F, 2, prec);
    Series w = z2.scale(c1i);
    for (int it = 0; it < prec; ++it) {
      Series w2 = w * w;
      Series nw = (z2 - w2.scale(c2) - w2 * w).scale(c1i);
      if ((nw - w).is_zero() && it > 2) break;
      w = nw;
    }
    return {w + Series::constant(F, q.x, prec), Series::monomial(F, 1, prec)};
  }
  // z = x - x0 and y is the square root of c(x0 + z) with y(0) = y0.
  std::vector<Elem> ys(std::max(prec, 1), F->zero());
  ys[0] = q.y;
  const Elem inv2y = F->inv(F->add(q.y, q.y));
  for (int n = 1; n < prec; ++n) {
    Elem s = cz.coeff(n);
    for (int i = 1; i < n; ++i) s = F->sub(s, F->mul(ys[i], ys[n - i]));
    ys[n] = F->mul(s, inv2y);
  }
  Series x = Series::constant(F, q.x, prec) + Series::monomial(F, 1, prec);
  return {x, Series(F, 0, std::move(ys), prec)};
}

Series local_series(const CurveFunction& f, const Place& t, int prec) {
  const FieldPtr& F = f.field();
  if (f.is_zero()) return Series::zero(F, prec);
  int work = std::max(prec, 0) + 8;
  for (int attempt = 0; attempt < 12; ++attempt, work *= 2) {
    auto [xs, ys] = local_coordinates(f.curve(), t, work);
    Series num = Series::eval(f.A(), xs, work) + Series::eval(f.B(), xs, work) * ys;
    Series den = Series::eval(f.C(), xs, work);
    if (den.is_zero()) continue;
    Series s = num * den.inverse();
    if (s.prec() >= prec) return s.truncate(prec);
  }
  throw InternalInconsistency("local expansion did not reach the requested precision");
}

LocalExpansion expand_local(const CurveFunction& f, const Place& t, int precision) {
  if (f.is_zero()) throw ZeroFunction();
  if (t.kind() == Place::Kind::Closed) throw BaseChangeRequired(t.degree());
  const int v = valuation(f, t);
  Series s = local_series(f, t, v + precision + 1);
  if (s.val() != v) throw InternalInconsistency("local expansion disagrees with the valuation");
  LocalExpansion e{t, uniformizer_of(t), v, {}, precision};
  for (int k = v; k <= v + precision; ++k) e.coeffs.push_back(s.coeff(k));
  return e;
}

}  // namespace ebundle
