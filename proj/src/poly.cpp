#include "ebundle/poly.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "ebundle/errors.hpp"

namespace ebundle {

Poly::Poly(FieldPtr field, std::vector<Elem> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(FieldPtr field, Elem c) {
  std::vector<Elem> v{std::move(c)};
  return Poly(std::move(field), std::move(v));
}

Poly Poly::from_int(FieldPtr field, std::int64_t c) {
  Elem e = field->from_int(c);
  return constant(std::move(field), std::move(e));
}

Poly Poly::monomial(FieldPtr field, Elem c, int degree) {
  std::vector<Elem> v(degree + 1, field->zero());
  v[degree] = std::move(c);
  return Poly(std::move(field), std::move(v));
}

Poly Poly::x(FieldPtr field) {
  Elem one = field->one();
  return monomial(std::move(field), std::move(one), 1);
}

Poly Poly::linear(FieldPtr field, const Elem& root) {
  std::vector<Elem> v{field->neg(root), field->one()};
  return Poly(std::move(field), std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && field_->is_zero(c_.back())) c_.pop_back();
}

void Poly::check(const Poly& b) const {
  if (!same_field(field_, b.field_)) throw FieldMismatch();
}

bool Poly::is_one() const { return c_.size() == 1 && field_->is_one(c_[0]); }

Elem Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return field_->zero();
  return c_[i];
}

Elem Poly::lead() const {
  if (c_.empty()) throw ZeroPolynomial();
  return c_.back();
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  if (is_monic()) return *this;
  return scale(field_->inv(c_.back()));
}

Poly Poly::scale(const Elem& c) const {
  if (field_->is_zero(c)) return Poly(field_);
  std::vector<Elem> v;
  v.reserve(c_.size());
  for (const auto& e : c_) v.push_back(field_->mul(e, c));
  return Poly(field_, std::move(v));
}

Poly Poly::shift(int k) const {
  if (c_.empty() || k == 0) return *this;
  std::vector<Elem> v(k, field_->zero());
  v.insert(v.end(), c_.begin(), c_.end());
  return Poly(field_, std::move(v));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(field_);
  std::vector<Elem> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    v[i - 1] = field_->mul(c_[i], field_->from_int(static_cast<std::int64_t>(i % field_->characteristic())));
  }
  return Poly(field_, std::move(v));
}

Elem Poly::eval(const Elem& v) const {
  Elem r = field_->zero();
  for (std::size_t i = c_.size(); i-- > 0;) r = field_->add(field_->mul(r, v), c_[i]);
  return r;
}

Poly Poly::compose(const Poly& g) const {
  check(g);
  Poly r(field_);
  for (std::size_t i = c_.size(); i-- > 0;) r = r * g + constant(field_, c_[i]);
  return r;
}

Poly Poly::embed(const FieldPtr& target) const {
  if (same_field(field_, target)) return Poly(target, c_);
  std::vector<Elem> v;
  v.reserve(c_.size());
  for (const auto& e : c_) v.push_back(target->embed(*field_, e));
  return Poly(target, std::move(v));
}

Poly Poly::operator-() const {
  std::vector<Elem> v;
  v.reserve(c_.size());
  for (const auto& e : c_) v.push_back(field_->neg(e));
  return Poly(field_, std::move(v));
}

Poly operator+(const Poly& a, const Poly& b) {
  a.check(b);
  const Field& F = *a.field_;
  std::vector<Elem> v(std::max(a.c_.size(), b.c_.size()), F.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = F.add(v[i], b.c_[i]);
  return Poly(a.field_, std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) {
  a.check(b);
  const Field& F = *a.field_;
  std::vector<Elem> v(std::max(a.c_.size(), b.c_.size()), F.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = F.sub(v[i], b.c_[i]);
  return Poly(a.field_, std::move(v));
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check(b);
  if (a.is_zero() || b.is_zero()) return Poly(a.field_);
  const Field& F = *a.field_;
  std::vector<Elem> v(a.c_.size() + b.c_.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (F.is_zero(a.c_[i])) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = F.add(v[i + j], F.mul(a.c_[i], b.c_[j]));
  }
  return Poly(a.field_, std::move(v));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& b) const {
  check(b);
  if (b.is_zero()) throw ZeroPolynomial();
  const Field& F = *field_;
  if (degree() < b.degree()) return {Poly(field_), *this};
  std::vector<Elem> rem = c_;
  std::vector<Elem> q(c_.size() - b.c_.size() + 1, F.zero());
  const Elem lead_inv = F.inv(b.c_.back());
  const std::size_t n = b.c_.size() - 1;
  for (std::size_t j = rem.size(); j-- > n;) {
    if (F.is_zero(rem[j])) continue;
    Elem coef = F.is_one(lead_inv) ? rem[j] : F.mul(rem[j], lead_inv);
    q[j - n] = coef;
    for (std::size_t i = 0; i <= n; ++i) rem[j - n + i] = F.sub(rem[j - n + i], F.mul(coef, b.c_[i]));
  }
  rem.resize(n);
  return {Poly(field_, std::move(q)), Poly(field_, std::move(rem))};
}

Poly operator/(const Poly& a, const Poly& b) { return a.divmod(b).first; }
Poly operator%(const Poly& a, const Poly& b) { return a.divmod(b).second; }

bool operator==(const Poly& a, const Poly& b) {
  if (a.c_.size() != b.c_.size()) return false;
  if (a.c_.empty()) return true;
  return same_field(a.field_, b.field_) && a.c_ == b.c_;
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  const Field& F = *field_;
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (F.is_zero(c_[i])) continue;
    std::string coef = F.to_string(c_[i]);
    bool compound = coef.find('+') != std::string::npos;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << (compound ? "(" + coef + ")" : coef);
      continue;
    }
    if (!F.is_one(c_[i])) os << (compound ? "(" + coef + ")" : coef) << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

int compare(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  for (int i = a.degree(); i >= 0; --i) {
    int c = a.F().compare(a.coeffs()[i], b.coeffs()[i]);
    if (c != 0) return c;
  }
  return 0;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b;
  while (!r1.is_zero()) {
    Poly r2 = r0 % r1;
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  return r0.monic();
}

ExtGcd ext_gcd(const Poly& a, const Poly& b) {
  const FieldPtr& F = a.field();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::from_int(F, 1), s1(F);
  Poly t0(F), t1 = Poly::from_int(F, 1);
  while (!r1.is_zero()) {
    auto [q, r2] = r0.divmod(r1);
    Poly s2 = s0 - q * s1;
    Poly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Elem li = F->inv(r0.lead());
  return {r0.scale(li), s0.scale(li), t0.scale(li)};
}

Poly pow(const Poly& a, int e) {
  Poly r = Poly::from_int(a.field(), 1);
  Poly b = a;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly pow_mod(Poly base, Word e, const Poly& mod) {
  Poly r = Poly::from_int(base.field(), 1) % mod;
  base = base % mod;
  while (e) {
    if (e & 1) r = (r * base) % mod;
    e >>= 1;
    if (e) base = (base * base) % mod;
  }
  return r;
}

int multiplicity(const Poly& m, Poly f) {
  if (f.is_zero()) throw ZeroPolynomial();
  int k = 0;
  for (;;) {
    auto [q, r] = f.divmod(m);
    if (!r.is_zero()) return k;
    f = std::move(q);
    ++k;
  }
}

Poly remove_factor(const Poly& m, Poly f) {
  for (;;) {
    auto [q, r] = f.divmod(m);
    if (!r.is_zero()) return f;
    f = std::move(q);
  }
}

namespace {

// a^(p^k) mod f, by k applications of the p-power map.
Poly frobenius_mod(Poly a, int k, const Poly& f) {
  const Word p = f.F().characteristic();
  for (int i = 0; i < k; ++i) a = pow_mod(a, p, f);
  return a;
}

Elem pth_root(const Field& F, const Elem& c) {
  // In F_{p^n}, c^(1/p) = c^(p^(n-1)).
  Elem r = c;
  for (int i = 1; i < F.absolute_degree(); ++i) r = F.frobenius(r);
  return r;
}

Poly pth_root(const Poly& f) {
  const Word p = f.F().characteristic();
  std::vector<Elem> v;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) v.push_back(pth_root(f.F(), f.coeffs()[i]));
  return Poly(f.field(), std::move(v));
}

void squarefree(const Poly& f, int scale, std::vector<Factor>& out) {
  if (f.degree() < 1) return;
  Poly d = f.derivative();
  if (d.is_zero()) {
    squarefree(pth_root(f), scale * static_cast<int>(f.F().characteristic()), out);
    return;
  }
  Poly c = gcd(f, d);
  Poly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    Poly y = gcd(w, c);
    Poly z = w / y;
    if (z.degree() > 0) out.push_back({z.monic(), i * scale});
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0) squarefree(pth_root(c), scale * static_cast<int>(f.F().characteristic()), out);
}

// Distinct-degree factorization of a monic squarefree f.
std::vector<std::pair<Poly, int>> distinct_degree(Poly f) {
  std::vector<std::pair<Poly, int>> out;
  const int n = f.F().absolute_degree();
  const Poly x = Poly::x(f.field());
  Poly h = x % f;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = frobenius_mod(h, n, f);
    Poly g = gcd(h - x, f);
    if (g.degree() > 0) {
      out.push_back({g, d});
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.push_back({f, f.degree()});
  return out;
}

// Cantor-Zassenhaus splitting of f (monic squarefree, all factors of degree d).
void equal_degree(const Poly& f, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (f.degree() == d) {
    out.push_back(f);
    return;
  }
  const Field& F = f.F();
  const Word p = F.characteristic();
  const int nd = F.absolute_degree() * d;
  for (;;) {
    std::vector<Elem> c;
    for (int i = 0; i < f.degree(); ++i) c.push_back(F.random(rng));
    Poly a(f.field(), std::move(c));
    if (a.degree() < 1) continue;
    // a^((q^d-1)/2) = (prod_i a^(p^i))^((p-1)/2) with i < nd.
    Poly t = Poly::from_int(f.field(), 1);
    Poly cur = a;
    for (int i = 0; i < nd; ++i) {
      t = (t * cur) % f;
      if (i + 1 < nd) cur = pow_mod(cur, p, f);
    }
    t = pow_mod(t, (p - 1) / 2, f);
    Poly g = gcd(t - Poly::from_int(f.field(), 1), f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<Factor> factor(const Poly& f) {
  if (f.is_zero()) throw ZeroPolynomial();
  std::vector<Factor> sqf;
  squarefree(f.monic(), 1, sqf);
  std::mt19937_64 rng(0x5eedULL);
  std::vector<Factor> out;
  for (const auto& [part, mult] : sqf) {
    for (const auto& [block, d] : distinct_degree(part)) {
      std::vector<Poly> pieces;
      equal_degree(block, d, rng, pieces);
      for (auto& piece : pieces) out.push_back({std::move(piece), mult});
    }
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return canonical_less(a.poly, b.poly); });
  return out;
}

std::vector<Elem> roots(const Poly& f) {
  if (f.is_zero()) throw ZeroPolynomial();
  std::vector<Elem> out;
  if (f.degree() < 1) return out;
  // Restrict to the product of linear factors before splitting.
  const Poly x = Poly::x(f.field());
  Poly m = f.monic();
  Poly h = frobenius_mod(x % m, f.F().absolute_degree(), m);
  Poly g = gcd(h - x, m);
  if (g.degree() < 1) return out;
  std::mt19937_64 rng(0x5eedULL);
  std::vector<Poly> pieces;
  equal_degree(g, 1, rng, pieces);
  for (const auto& piece : pieces) out.push_back(f.F().neg(piece.coeffs()[0]));
  std::sort(out.begin(), out.end(), [&](const Elem& a, const Elem& b) { return f.F().compare(a, b) < 0; });
  return out;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  Poly m = f.monic();
  if (gcd(m, m.derivative()).degree() > 0) return false;
  const Poly x = Poly::x(f.field());
  const int n = f.F().absolute_degree();
  Poly h = x % m;
  for (int d = 1; 2 * d <= m.degree(); ++d) {
    h = frobenius_mod(h, n, m);
    if (gcd(h - x, m).degree() > 0) return false;
  }
  return true;
}

Poly find_irreducible(const FieldPtr& field, int k) {
  if (k < 1) throw InvalidInput("irreducible degree must be >= 1");
  if (k == 1) return Poly::x(field);
  const auto q = field->order();
  for (Word idx = 0;; ++idx) {
    std::vector<Elem> c(k + 1, field->zero());
    c[k] = field->one();
    Word rest = idx;
    for (int i = 0; i < k && rest; ++i) {
      if (q) {
        c[i] = field->element_at(rest % *q);
        rest /= *q;
      } else {
        c[i] = field->element_at(rest);
        rest = 0;
      }
    }
    Poly f(field, std::move(c));
    if (is_irreducible(f)) return f;
  }
}

FieldPtr extension_field(const Poly& m) {
  if (!m.is_monic() || !is_irreducible(m)) {
    throw InvalidInput("extension modulus " + m.to_string() + " is not monic irreducible");
  }
  return Field::extension_unchecked(m.field(), m.coeffs());
}

FieldPtr extend(const FieldPtr& field, int k) {
  if (k == 1) return field;
  return Field::extension_unchecked(field, find_irreducible(field, k).coeffs());
}

}  // namespace ebundle
