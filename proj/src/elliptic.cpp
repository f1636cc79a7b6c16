#include "ebundle/elliptic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ebundle/errors.hpp"

namespace ebundle {

namespace {

std::vector<Elem> square_roots(const FieldPtr& F, const Elem& c) {
  if (F->is_zero(c)) return {F->zero()};
  if (!F->is_square(c)) return {};
  return roots(Poly(F, {F->neg(c), F->zero(), F->one()}));
}

}  // namespace

// ---------------------------------------------------------------- Curve

Curve::Curve(FieldPtr field, Elem a, Elem b) : field_(std::move(field)), a_(std::move(a)), b_(std::move(b)) {
  const Field& F = *field_;
  Elem disc = F.add(F.mul(F.from_int(4), F.mul(a_, F.mul(a_, a_))), F.mul(F.from_int(27), F.mul(b_, b_)));
  if (F.is_zero(disc)) throw InvalidInput("singular curve: 4a^3 + 27b^2 = 0");
  rhs_ = Poly(field_, {b_, a_, F.zero(), F.one()});
}

bool Curve::contains(const Point& q) const {
  if (q.inf) return true;
  return F().mul(q.y, q.y) == rhs(q.x);
}

void Curve::require(const Point& q) const {
  if (!contains(q)) throw PointOffCurve(to_string(q));
}

Point Curve::neg(const Point& q) const {
  require(q);
  if (q.inf) return q;
  return Point::affine(q.x, F().neg(q.y));
}

Point Curve::add(const Point& q1, const Point& q2) const {
  require(q1);
  require(q2);
  if (q1.inf) return q2;
  if (q2.inf) return q1;
  const Field& K = F();
  Elem lambda;
  if (q1.x == q2.x) {
    if (K.is_zero(K.add(q1.y, q2.y))) return Point::infinity();
    Elem num = K.add(K.mul(K.from_int(3), K.mul(q1.x, q1.x)), a_);
    lambda = K.div(num, K.add(q1.y, q1.y));
  } else {
    lambda = K.div(K.sub(q2.y, q1.y), K.sub(q2.x, q1.x));
  }
  Elem x3 = K.sub(K.sub(K.mul(lambda, lambda), q1.x), q2.x);
  Elem y3 = K.sub(K.mul(lambda, K.sub(q1.x, x3)), q1.y);
  return Point::affine(std::move(x3), std::move(y3));
}

Point Curve::mul(std::int64_t n, const Point& q) const {
  require(q);
  Point base = n < 0 ? neg(q) : q;
  std::uint64_t k = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  Point r = Point::infinity();
  while (k) {
    if (k & 1) r = add(r, base);
    k >>= 1;
    if (k) base = add(base, base);
  }
  return r;
}

std::vector<Point> Curve::points() const {
  auto q = F().order();
  if (!q || *q > 2000000) throw InvalidInput("point enumeration needs a small field");
  std::vector<Point> pts{Point::infinity()};
  for (Word i = 0; i < *q; ++i) {
    Elem x = F().element_at(i);
    for (auto& y : square_roots(field_, rhs(x))) pts.push_back(Point::affine(x, y));
  }
  std::sort(pts.begin(), pts.end(), [&](const Point& s, const Point& t) { return compare(s, t) < 0; });
  return pts;
}

int Curve::compare(const Point& q1, const Point& q2) const {
  if (q1.inf || q2.inf) return q1.inf == q2.inf ? 0 : (q1.inf ? -1 : 1);
  int c = F().compare(q1.x, q2.x);
  return c != 0 ? c : F().compare(q1.y, q2.y);
}

Curve Curve::base_change(const FieldPtr& L) const {
  if (same_field(L, field_)) return *this;
  return Curve(L, L->embed(*field_, a_), L->embed(*field_, b_));
}

Point Curve::embed(const Point& q, const Curve& from) const {
  if (q.inf) return q;
  return Point::affine(F().embed(from.F(), q.x), F().embed(from.F(), q.y));
}

std::string Curve::to_string(const Point& q) const {
  if (q.inf) return "inf";
  return "(" + F().to_string(q.x) + "," + F().to_string(q.y) + ")";
}

std::string Curve::to_string() const {
  return "y^2 = x^3 + (" + F().to_string(a_) + ")*x + (" + F().to_string(b_) + ") over " + F().describe();
}

bool operator==(const Curve& c1, const Curve& c2) {
  return same_field(c1.field_, c2.field_) && c1.a_ == c2.a_ && c1.b_ == c2.b_;
}

// ---------------------------------------------------------------- Place

Place Place::infinity(FieldPtr field) {
  Place t;
  t.kind_ = Kind::Infinity;
  t.field_ = std::move(field);
  return t;
}

Place Place::rational(FieldPtr field, Point q) {
  if (q.inf) return infinity(std::move(field));
  Place t;
  t.kind_ = Kind::Rational;
  t.field_ = std::move(field);
  t.point_ = std::move(q);
  return t;
}

Place Place::closed(Poly m, std::optional<Poly> y) {
  if (!m.is_monic() || m.degree() < 1) throw InvalidInput("place polynomial must be monic of degree >= 1");
  Place t;
  t.kind_ = Kind::Closed;
  t.field_ = m.field();
  t.m_ = std::move(m);
  t.y_ = std::move(y);
  return t;
}

Poly Place::m() const {
  switch (kind_) {
    case Kind::Rational: return Poly::linear(field_, point_.x);
    case Kind::Closed: return m_;
    default: throw InvalidInput("the place at infinity has no x-polynomial");
  }
}

std::optional<Poly> Place::y() const {
  if (kind_ == Kind::Rational) return Poly::constant(field_, point_.y);
  return y_;
}

bool Place::ramified() const {
  if (kind_ == Kind::Rational) return field_->is_zero(point_.y);
  return kind_ == Kind::Closed && y_ && y_->is_zero();
}

int Place::degree() const {
  if (kind_ != Kind::Closed) return 1;
  return m_.degree() * (y_ ? 1 : 2);
}

std::string Place::to_string() const {
  switch (kind_) {
    case Kind::Infinity: return "inf";
    case Kind::Rational: return "(" + field_->to_string(point_.x) + "," + field_->to_string(point_.y) + ")";
    default: break;
  }
  std::string s = "{" + m_.to_string();
  if (y_) s += " | " + y_->to_string();
  return s + "}";
}

int compare(const Place& s, const Place& t) {
  if (s.kind_ == Place::Kind::Infinity || t.kind_ == Place::Kind::Infinity) {
    if (s.kind_ == t.kind_) return 0;
    return s.kind_ == Place::Kind::Infinity ? -1 : 1;
  }
  if (s.degree() != t.degree()) return s.degree() < t.degree() ? -1 : 1;
  if (s.kind_ != t.kind_) return s.kind_ == Place::Kind::Rational ? -1 : 1;
  const Field& F = *s.field_;
  if (s.kind_ == Place::Kind::Rational) {
    int c = F.compare(s.point_.x, t.point_.x);
    return c != 0 ? c : F.compare(s.point_.y, t.point_.y);
  }
  int c = compare(s.m_, t.m_);
  if (c != 0) return c;
  if (!s.y_ || !t.y_) return s.y_ == t.y_ ? 0 : (s.y_ ? 1 : -1);
  return compare(*s.y_, *t.y_);
}

std::vector<Place> places_over(const Curve& E, const Poly& m) {
  const FieldPtr& F = E.field();
  std::vector<Place> out;
  if (m.degree() == 1) {
    Elem x0 = F->neg(m.monic().coeffs()[0]);
    auto ys = square_roots(F, E.rhs(x0));
    if (ys.empty()) return {Place::closed(m.monic(), std::nullopt)};
    for (auto& y : ys) out.push_back(Place::rational(F, Point::affine(x0, y)));
  } else {
    Poly mm = m.monic();
    Poly c = E.rhs() % mm;
    if (c.is_zero()) return {Place::closed(mm, Poly(F))};
    FieldPtr K = Field::extension_unchecked(F, mm.coeffs());
    std::vector<Elem> chunks = c.coeffs();
    chunks.resize(mm.degree(), F->zero());
    auto ys = square_roots(K, K->from_chunks(chunks));
    if (ys.empty()) return {Place::closed(mm, std::nullopt)};
    for (auto& y : ys) out.push_back(Place::closed(mm, Poly(F, K->chunks(y))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Place place_of(const Curve& E, const Point& q) {
  E.require(q);
  return Place::rational(E.field(), q);
}

// ---------------------------------------------------------------- Divisor

Divisor Divisor::of(const Place& t, int n) {
  Divisor d;
  d.add(t, n);
  return d;
}

void Divisor::add(const Place& t, int n) {
  if (n == 0) return;
  auto it = terms_.find(t);
  if (it == terms_.end()) {
    terms_.emplace(t, n);
  } else if ((it->second += n) == 0) {
    terms_.erase(it);
  }
}

int Divisor::mult(const Place& t) const {
  auto it = terms_.find(t);
  return it == terms_.end() ? 0 : it->second;
}

int Divisor::degree() const {
  int d = 0;
  for (const auto& [t, n] : terms_) d += n * t.degree();
  return d;
}

bool Divisor::is_effective() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second > 0; });
}

Divisor Divisor::positive() const {
  Divisor d;
  for (const auto& [t, n] : terms_)
    if (n > 0) d.terms_.emplace(t, n);
  return d;
}

Divisor Divisor::negative() const {
  Divisor d;
  for (const auto& [t, n] : terms_)
    if (n < 0) d.terms_.emplace(t, -n);
  return d;
}

int Divisor::split_degree() const {
  int k = 1;
  for (const auto& [t, n] : terms_) k = std::lcm(k, t.degree());
  return k;
}

std::string Divisor::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, n] : terms_) {
    if (first) {
      if (n < 0) os << "-";
    } else {
      os << (n < 0 ? " - " : " + ");
    }
    first = false;
    os << std::abs(n) << "*" << t.to_string();
  }
  return os.str();
}

Divisor operator+(Divisor a, const Divisor& b) {
  for (const auto& [t, n] : b.terms_) a.add(t, n);
  return a;
}

Divisor operator-(Divisor a, const Divisor& b) {
  for (const auto& [t, n] : b.terms_) a.add(t, -n);
  return a;
}

Divisor operator*(int k, const Divisor& d) {
  Divisor r;
  if (k == 0) return r;
  for (const auto& [t, n] : d.terms_) r.terms_.emplace(t, k * n);
  return r;
}

// ---------------------------------------------------------------- MarkedCurve

MarkedCurve::MarkedCurve(Curve E, Point p) : E_(std::move(E)), p_(std::move(p)) { E_.require(p_); }

Point MarkedCurve::marked_sum(const Point& q1, const Point& q2) const {
  return E_.add(E_.add(q1, q2), E_.neg(p_));
}

Point MarkedCurve::marked_neg(const Point& q) const { return E_.add(E_.mul(2, p_), E_.neg(q)); }

Point MarkedCurve::marked_mul(std::int64_t n, const Point& q) const {
  return E_.add(E_.mul(n, E_.add(q, E_.neg(p_))), p_);
}

bool MarkedCurve::is_r_torsion(const Point& q, int r) const {
  if (r < 1) throw InvalidInput("torsion order must be >= 1");
  return E_.mul(r, E_.add(q, E_.neg(p_))).inf;
}

MarkedCurve MarkedCurve::base_change(const FieldPtr& L) const {
  Curve EL = E_.base_change(L);
  Point pL = EL.embed(p_, E_);
  return MarkedCurve(std::move(EL), std::move(pL));
}

Point divisor_class_point(const MarkedCurve& mc, const Divisor& D) {
  if (D.degree() != 0) throw NonZeroDegree(D.degree());
  const Curve& E = mc.curve();
  Point s = Point::infinity();
  for (const auto& [t, n] : D.terms()) {
    if (t.kind() == Place::Kind::Closed) throw BaseChangeRequired(D.split_degree());
    if (t.is_rational()) s = E.add(s, E.mul(n, t.point()));
  }
  return E.add(s, mc.p());
}

Point divisor_class_point_any(const MarkedCurve& mc, const Divisor& D) {
  const int k = D.split_degree();
  if (k == 1) return divisor_class_point(mc, D);
  if (D.degree() != 0) throw NonZeroDegree(D.degree());
  const Curve& E = mc.curve();
  FieldPtr L = extend(E.field(), k);
  MarkedCurve mcL = mc.base_change(L);
  Point q = divisor_class_point(mcL, base_change(D, mcL.curve()));
  if (q.inf) return q;
  auto x = L->project_to(E.F(), q.x), y = L->project_to(E.F(), q.y);
  if (!x || !y) throw InternalInconsistency("class point of a rational divisor is not rational");
  return Point::affine(*x, *y);
}

bool linearly_equivalent(const MarkedCurve& mc, const Divisor& D1, const Divisor& D2) {
  if (D1.degree() != D2.degree()) return false;
  return divisor_class_point_any(mc, D1 - D2) == mc.p();
}

// ---------------------------------------------------------------- base change

std::vector<Place> places_above(const Place& t, const Curve& E_L) {
  const FieldPtr& L = E_L.field();
  switch (t.kind()) {
    case Place::Kind::Infinity: return {Place::infinity(L)};
    case Place::Kind::Rational: {
      const Field& F = *t.field();
      const Point& q = t.point();
      return {Place::rational(L, Point::affine(L->embed(F, q.x), L->embed(F, q.y)))};
    }
    default: break;
  }
  std::vector<Place> out;
  Poly mL = t.m().embed(L);
  std::optional<Poly> yL;
  if (t.y()) yL = t.y()->embed(L);
  for (const auto& [g, mult] : factor(mL)) {
    for (auto& P : places_over(E_L, g)) {
      if (!yL) {
        out.push_back(P);
        continue;
      }
      auto yP = P.y();
      if (yP && ((*yL - *yP) % g).is_zero()) out.push_back(P);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Divisor base_change(const Divisor& D, const Curve& E_L) {
  Divisor r;
  for (const auto& [t, n] : D.terms())
    for (const auto& P : places_above(t, E_L)) r.add(P, n);
  return r;
}

std::vector<Point> points_of(const Place& t, const Curve& E_L) {
  std::vector<Point> pts;
  for (const auto& P : places_above(t, E_L)) {
    if (P.kind() == Place::Kind::Closed) throw BaseChangeRequired(t.degree());
    pts.push_back(P.is_infinity() ? Point::infinity() : P.point());
  }
  return pts;
}

Place place_below(const Curve& E, const Curve& E_L, const Point& q) {
  const FieldPtr& F = E.field();
  const Field& L = E_L.F();
  if (q.inf) return Place::infinity(F);
  // Conjugates of x0 under the |F|-power Frobenius.
  auto sigma = [&](Elem a) {
    for (int i = 0; i < F->absolute_degree(); ++i) a = L.frobenius(a);
    return a;
  };
  std::vector<Elem> orbit{q.x};
  for (Elem a = sigma(q.x); a != q.x; a = sigma(a)) orbit.push_back(a);
  Poly mL = Poly::from_int(E_L.field(), 1);
  for (const auto& a : orbit) mL = mL * Poly::linear(E_L.field(), a);
  std::vector<Elem> coeffs;
  for (const auto& c : mL.coeffs()) {
    auto down = L.project_to(*F, c);
    if (!down) throw InternalInconsistency("minimal polynomial does not descend");
    coeffs.push_back(*down);
  }
  Poly m(F, std::move(coeffs));
  for (const auto& P : places_over(E, m)) {
    if (P.inert()) return P;
    Poly Y = P.y()->embed(E_L.field());
    if (Y.eval(q.x) == q.y) return P;
  }
  throw InternalInconsistency("no place below point " + E_L.to_string(q));
}

Divisor descend(const Curve& E, const Curve& E_L, const Divisor& D_L) {
  std::map<Place, std::vector<int>> seen;
  for (const auto& [P, n] : D_L.terms()) {
    if (P.kind() == Place::Kind::Closed) throw InvalidInput("descend expects a divisor of rational points");
    seen[place_below(E, E_L, P.is_infinity() ? Point::infinity() : P.point())].push_back(n);
  }
  Divisor D;
  for (const auto& [t, ns] : seen) {
    const int expected = t.is_infinity() ? 1 : t.degree();
    if (static_cast<int>(ns.size()) != expected || std::adjacent_find(ns.begin(), ns.end(), std::not_equal_to<>()) != ns.end()) {
      throw InternalInconsistency("divisor over the extension is not Galois invariant at " + t.to_string());
    }
    D.add(t, ns.front());
  }
  return D;
}

}  // namespace ebundle
