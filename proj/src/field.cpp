#include "ebundle/field.hpp"

#include <algorithm>
#include <sstream>

#include "ebundle/errors.hpp"

namespace ebundle {

namespace {

using u128 = unsigned __int128;

Word mulmod64(Word a, Word b, Word m) { return static_cast<Word>(static_cast<u128>(a) * b % m); }

Word powmod64(Word a, Word e, Word m) {
  Word r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

std::string variable_for_depth(int depth) {
  static const char* names[] = {"t", "u", "w", "v"};
  if (depth >= 1 && depth <= 4) return names[depth - 1];
  return "v" + std::to_string(depth);
}

}  // namespace

bool is_prime(Word n) {
  if (n < 2) return false;
  for (Word q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  Word d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are a deterministic witness set for all 64-bit n.
  for (Word a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    Word x = powmod64(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldPtr Field::prime(Word p) {
  if (p <= 3 || !is_prime(p)) {
    throw InvalidInput("field characteristic must be a prime > 3, got " + std::to_string(p));
  }
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  return f;
}

FieldPtr Field::extension_unchecked(FieldPtr base, std::vector<Elem> modulus) {
  if (modulus.size() < 2 || !base->is_one(modulus.back())) {
    throw InvalidInput("extension modulus must be monic of degree >= 1");
  }
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = base->p_;
  f->degree_ = static_cast<int>(modulus.size()) - 1;
  f->depth_ = base->depth_ + 1;
  f->width_ = base->width_ * f->degree_;
  f->modulus_ = std::move(modulus);
  f->variable_ = variable_for_depth(f->depth_);
  f->base_ = std::move(base);
  return f;
}

std::optional<Word> Field::order() const {
  Word q = 1;
  for (std::size_t i = 0; i < width_; ++i) {
    if (q > ~Word{0} / p_) return std::nullopt;
    q *= p_;
  }
  return q;
}

Elem Field::one() const {
  Elem e(width_, 0);
  e[0] = 1;
  return e;
}

Elem Field::from_int(std::int64_t v) const {
  Elem e(width_, 0);
  auto m = static_cast<std::int64_t>(p_ > static_cast<Word>(INT64_MAX) ? 0 : p_);
  if (m == 0) {
    e[0] = v >= 0 ? static_cast<Word>(v) % p_ : p_ - (static_cast<Word>(-(v + 1)) % p_ + 1) % p_;
    if (e[0] == p_) e[0] = 0;
  } else {
    std::int64_t r = v % m;
    if (r < 0) r += m;
    e[0] = static_cast<Word>(r);
  }
  return e;
}

Elem Field::generator() const {
  if (is_prime_field()) throw InvalidInput("a prime field has no adjoined generator");
  std::vector<Elem> c(degree_, base_->zero());
  if (degree_ == 1) {
    // t is a root of t + m0, i.e. -m0.
    return lift(base_->neg(modulus_[0]));
  }
  c[1] = base_->one();
  return from_chunks(c);
}

bool Field::is_zero(const Elem& a) const {
  return std::all_of(a.begin(), a.end(), [](Word w) { return w == 0; });
}

bool Field::is_one(const Elem& a) const {
  if (a.empty() || a[0] != 1) return false;
  return std::all_of(a.begin() + 1, a.end(), [](Word w) { return w == 0; });
}

Elem Field::add(const Elem& a, const Elem& b) const {
  Elem r(width_);
  for (std::size_t i = 0; i < width_; ++i) {
    Word s = a[i] + b[i];
    r[i] = s >= p_ || s < a[i] ? s - p_ : s;
  }
  return r;
}

Elem Field::sub(const Elem& a, const Elem& b) const {
  Elem r(width_);
  for (std::size_t i = 0; i < width_; ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + (p_ - b[i]);
  return r;
}

Elem Field::neg(const Elem& a) const {
  Elem r(width_);
  for (std::size_t i = 0; i < width_; ++i) r[i] = a[i] == 0 ? 0 : p_ - a[i];
  return r;
}

Word Field::mulmod(Word a, Word b) const {
  if (p_ < (Word{1} << 32)) return a * b % p_;
  return mulmod64(a, b, p_);
}

Word Field::inv_prime(Word a) const {
  // Extended Euclid on (a, p).
  std::int64_t t = 0, nt = 1;
  u128 r = p_, nr = a;
  // Signed coefficients fit because |t| < p < 2^63.
  while (nr != 0) {
    Word q = static_cast<Word>(r / nr);
    std::int64_t tmp = t - static_cast<std::int64_t>(q) * nt;
    t = nt;
    nt = tmp;
    u128 tr = r - static_cast<u128>(q) * nr;
    r = nr;
    nr = tr;
  }
  if (t < 0) t += static_cast<std::int64_t>(p_);
  return static_cast<Word>(t);
}

std::vector<Elem> Field::chunks(const Elem& a) const {
  std::vector<Elem> c;
  if (is_prime_field()) {
    c.push_back(a);
    return c;
  }
  const std::size_t w = base_->width_;
  c.reserve(degree_);
  for (int i = 0; i < degree_; ++i) c.emplace_back(a.begin() + i * w, a.begin() + (i + 1) * w);
  return c;
}

Elem Field::from_chunks(const std::vector<Elem>& c) const {
  if (is_prime_field()) return c.at(0);
  Elem e;
  e.reserve(width_);
  for (int i = 0; i < degree_; ++i) {
    if (static_cast<std::size_t>(i) < c.size()) {
      e.insert(e.end(), c[i].begin(), c[i].end());
    } else {
      e.insert(e.end(), base_->width_, 0);
    }
  }
  return e;
}

std::vector<Elem> Field::poly_mul(const std::vector<Elem>& a, const std::vector<Elem>& b) const {
  const Field& B = *base_;
  std::vector<Elem> c(a.size() + b.size() - 1, B.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (B.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (B.is_zero(b[j])) continue;
      c[i + j] = B.add(c[i + j], B.mul(a[i], b[j]));
    }
  }
  return c;
}

void Field::reduce(std::vector<Elem>& c) const {
  const Field& B = *base_;
  const std::size_t k = degree_;
  for (std::size_t j = c.size(); j-- > k;) {
    if (B.is_zero(c[j])) continue;
    Elem lead = c[j];
    for (std::size_t i = 0; i < k; ++i) c[j - k + i] = B.sub(c[j - k + i], B.mul(lead, modulus_[i]));
    c[j] = B.zero();
  }
  c.resize(std::min(c.size(), k), B.zero());
}

Elem Field::mul(const Elem& a, const Elem& b) const {
  if (is_prime_field()) return Elem{mulmod(a[0], b[0])};
  auto c = poly_mul(chunks(a), chunks(b));
  reduce(c);
  return from_chunks(c);
}

Elem Field::inv(const Elem& a) const {
  if (is_zero(a)) throw DivisionByZero();
  if (is_prime_field()) return Elem{inv_prime(a[0])};
  const Field& B = *base_;
  auto trim = [&](std::vector<Elem>& v) {
    while (!v.empty() && B.is_zero(v.back())) v.pop_back();
  };
  // Extended Euclid over the base: find u with u*a = 1 mod modulus.
  std::vector<Elem> r0 = modulus_, r1 = chunks(a);
  std::vector<Elem> s0, s1{B.one()};
  trim(r1);
  while (r1.size() > 1) {
    // r0 = q*r1 + rem
    std::vector<Elem> rem = r0;
    std::vector<Elem> q(r0.size() - r1.size() + 1, B.zero());
    Elem lead_inv = B.inv(r1.back());
    for (std::size_t j = rem.size(); j-- >= r1.size();) {
      if (B.is_zero(rem[j])) continue;
      Elem coef = B.mul(rem[j], lead_inv);
      q[j - (r1.size() - 1)] = coef;
      for (std::size_t i = 0; i < r1.size(); ++i) {
        auto& slot = rem[j - (r1.size() - 1) + i];
        slot = B.sub(slot, B.mul(coef, r1[i]));
      }
      if (j == 0) break;
    }
    trim(rem);
    // s2 = s0 - q*s1
    std::vector<Elem> qs = s1.empty() || q.empty() ? std::vector<Elem>{} : poly_mul(q, s1);
    std::vector<Elem> s2(std::max(s0.size(), qs.size()), B.zero());
    for (std::size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
    for (std::size_t i = 0; i < qs.size(); ++i) s2[i] = B.sub(s2[i], qs[i]);
    trim(s2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r1 is a nonzero constant c; s1*a = c.
  Elem cinv = B.inv(r1.at(0));
  for (auto& x : s1) x = B.mul(x, cinv);
  std::vector<Elem> res(degree_, B.zero());
  for (std::size_t i = 0; i < s1.size() && i < res.size(); ++i) res[i] = s1[i];
  return from_chunks(res);
}

Elem Field::pow(Elem a, Word e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return r;
}

Elem Field::base_frobenius(const Elem& a) const {
  Elem r = a;
  const int k = is_prime_field() ? 1 : base_->absolute_degree();
  for (int i = 0; i < k; ++i) r = frobenius(r);
  return r;
}

bool Field::is_square(const Elem& a) const {
  if (is_zero(a)) return true;
  // a^((q-1)/2) = N(a)^((p-1)/2) with N the norm down to F_p.
  Elem norm = one();
  Elem cur = a;
  for (std::size_t i = 0; i < width_; ++i) {
    norm = mul(norm, cur);
    cur = frobenius(cur);
  }
  return is_one(pow(norm, (p_ - 1) / 2));
}

Elem Field::lift(const Elem& base_elem) const {
  if (is_prime_field()) return base_elem;
  Elem e(width_, 0);
  std::copy(base_elem.begin(), base_elem.end(), e.begin());
  return e;
}

bool Field::has_ancestor(const Field& f) const {
  for (const Field* cur = this; cur; cur = cur->base_.get()) {
    if (cur == &f || *cur == f) return true;
  }
  return false;
}

Elem Field::embed(const Field& ancestor, const Elem& e) const {
  if (this == &ancestor || *this == ancestor) return e;
  if (is_prime_field()) throw FieldMismatch();
  return lift(base_->embed(ancestor, e));
}

std::optional<Elem> Field::project(const Elem& a) const {
  if (is_prime_field()) return std::nullopt;
  const std::size_t w = base_->width_;
  for (std::size_t i = w; i < width_; ++i) {
    if (a[i] != 0) return std::nullopt;
  }
  return Elem(a.begin(), a.begin() + w);
}

std::optional<Elem> Field::project_to(const Field& ancestor, const Elem& a) const {
  if (this == &ancestor || *this == ancestor) return a;
  if (is_prime_field()) return std::nullopt;
  auto down = project(a);
  if (!down) return std::nullopt;
  return base_->project_to(ancestor, *down);
}

Elem Field::element_at(Word index) const {
  Elem e(width_, 0);
  for (std::size_t i = 0; i < width_ && index; ++i) {
    e[i] = index % p_;
    index /= p_;
  }
  return e;
}

Elem Field::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<Word> dist(0, p_ - 1);
  Elem e(width_);
  for (auto& w : e) w = dist(rng);
  return e;
}

Elem Field::random_nonzero(std::mt19937_64& rng) const {
  for (;;) {
    Elem e = random(rng);
    if (!is_zero(e)) return e;
  }
}

int Field::compare(const Elem& a, const Elem& b) const {
  for (std::size_t i = width_; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::string Field::to_string(const Elem& a) const {
  if (is_prime_field()) return std::to_string(a[0]);
  auto c = chunks(a);
  std::ostringstream os;
  bool first = true;
  for (int i = degree_ - 1; i >= 0; --i) {
    if (base_->is_zero(c[i])) continue;
    if (!first) os << "+";
    first = false;
    std::string coef = base_->to_string(c[i]);
    bool compound = coef.find('+') != std::string::npos;
    if (i == 0) {
      os << coef;
      continue;
    }
    if (!base_->is_one(c[i])) os << (compound ? "(" + coef + ")" : coef) << "*";
    os << variable_;
    if (i > 1) os << "^" << i;
  }
  if (first) return "0";
  return os.str();
}

std::string Field::describe() const {
  if (is_prime_field()) return "F_" + std::to_string(p_);
  std::ostringstream os;
  os << base_->describe() << "[" << variable_ << "]/(";
  bool first = true;
  for (int i = degree_; i >= 0; --i) {
    if (base_->is_zero(modulus_[i])) continue;
    if (!first) os << "+";
    first = false;
    std::string coef = base_->to_string(modulus_[i]);
    if (i == 0) {
      os << coef;
      continue;
    }
    if (!base_->is_one(modulus_[i])) os << coef << "*";
    os << variable_;
    if (i > 1) os << "^" << i;
  }
  os << ")";
  return os.str();
}

bool Field::operator==(const Field& other) const {
  if (this == &other) return true;
  if (p_ != other.p_ || width_ != other.width_ || degree_ != other.degree_) return false;
  if (is_prime_field() != other.is_prime_field()) return false;
  if (is_prime_field()) return true;
  return modulus_ == other.modulus_ && *base_ == *other.base_;
}

bool same_field(const FieldPtr& a, const FieldPtr& b) { return a == b || (a && b && *a == *b); }

FieldElement::FieldElement(FieldPtr field, Elem value) : field_(std::move(field)), value_(std::move(value)) {}

FieldElement FieldElement::from_int(FieldPtr field, std::int64_t v) {
  Elem e = field->from_int(v);
  return FieldElement(std::move(field), std::move(e));
}

FieldElement FieldElement::inverse() const { return FieldElement(field_, field_->inv(value_)); }

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  if (!same_field(a.field_, b.field_)) throw FieldMismatch();
  return FieldElement(a.field_, a.field_->add(a.value_, b.value_));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  if (!same_field(a.field_, b.field_)) throw FieldMismatch();
  return FieldElement(a.field_, a.field_->sub(a.value_, b.value_));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  if (!same_field(a.field_, b.field_)) throw FieldMismatch();
  return FieldElement(a.field_, a.field_->mul(a.value_, b.value_));
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  if (!same_field(a.field_, b.field_)) throw FieldMismatch();
  return FieldElement(a.field_, a.field_->div(a.value_, b.value_));
}

FieldElement FieldElement::operator-() const { return FieldElement(field_, field_->neg(value_)); }

bool operator==(const FieldElement& a, const FieldElement& b) {
  return same_field(a.field_, b.field_) && a.value_ == b.value_;
}

}  // namespace ebundle
