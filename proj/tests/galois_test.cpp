#include <gtest/gtest.h>

#include <random>

#include "ebundle/errors.hpp"
#include "ebundle/linalg.hpp"
#include "ebundle/poly.hpp"

using namespace ebundle;

namespace {

Poly P(const FieldPtr& F, std::vector<std::int64_t> c) {
  std::vector<Elem> v;
  for (auto x : c) v.push_back(F->from_int(x));
  return Poly(F, v);
}

Poly random_poly(const FieldPtr& F, int deg, std::mt19937_64& rng) {
  std::vector<Elem> v;
  for (int i = 0; i < deg; ++i) v.push_back(F->random(rng));
  v.push_back(F->random_nonzero(rng));
  return Poly(F, v);
}

// Oracle: the root set by brute force over every element.
std::vector<Elem> brute_roots(const Poly& f) {
  std::vector<Elem> r;
  const Word q = *f.F().order();
  for (Word i = 0; i < q; ++i) {
    Elem e = f.F().element_at(i);
    if (f.F().is_zero(f.eval(e))) r.push_back(e);
  }
  std::sort(r.begin(), r.end(), [&](const Elem& a, const Elem& b) { return f.F().compare(a, b) < 0; });
  return r;
}

}  // namespace

TEST(Field, InverseOfThreeModFive) {
  auto F = Field::prime(5);
  EXPECT_EQ(F->inv(F->from_int(3)), F->from_int(2));
}

TEST(Field, FourSquaredModFive) {
  auto F = Field::prime(5);
  EXPECT_EQ(F->mul(F->from_int(4), F->from_int(4)), F->one());
}

TEST(Field, AddZeroIsIdentity) {
  auto F = Field::prime(7);
  EXPECT_EQ(F->add(F->from_int(5), F->zero()), F->from_int(5));
}

TEST(Field, RejectsSmallAndComposite) {
  EXPECT_THROW(Field::prime(3), InvalidInput);
  EXPECT_THROW(Field::prime(2), InvalidInput);
  EXPECT_THROW(Field::prime(9), InvalidInput);
  EXPECT_NO_THROW(Field::prime(2305843009213693951ULL));
}

TEST(Field, DivisionByZeroThrows) {
  auto F = Field::prime(5);
  EXPECT_THROW(F->inv(F->zero()), DivisionByZero);
  auto E = extend(F, 2);
  EXPECT_THROW(E->inv(E->zero()), DivisionByZero);
}

TEST(Field, MismatchedOperandsThrow) {
  auto a = FieldElement::from_int(Field::prime(5), 1);
  auto b = FieldElement::from_int(Field::prime(7), 1);
  EXPECT_THROW(a + b, FieldMismatch);
  EXPECT_THROW(a / b, FieldMismatch);
}

TEST(Field, LargePrimeArithmetic) {
  const Word p = 2305843009213693951ULL;  // 2^61 - 1
  auto F = Field::prime(p);
  Elem a = F->from_int(-2);
  Elem ai = F->inv(a);
  EXPECT_TRUE(F->is_one(F->mul(a, ai)));
  EXPECT_TRUE(F->is_one(F->pow(F->from_int(3), p - 1)));
}

TEST(FieldProperty, InverseRoundTrip) {
  std::mt19937_64 rng(1);
  for (Word p : {5ULL, 7ULL, 11ULL, 13ULL, 1000003ULL}) {
    auto F = Field::prime(p);
    for (auto& K : {F, extend(F, 2), extend(extend(F, 2), 3)}) {
      for (int i = 0; i < 200; ++i) {
        Elem a = K->random_nonzero(rng);
        EXPECT_TRUE(K->is_one(K->mul(a, K->inv(a)))) << K->describe() << " " << K->to_string(a);
      }
    }
  }
}

TEST(FieldProperty, TowerFieldAxioms) {
  std::mt19937_64 rng(2);
  auto K = extend(extend(Field::prime(5), 2), 2);
  ASSERT_EQ(*K->order(), 625u);
  for (int i = 0; i < 300; ++i) {
    Elem a = K->random(rng), b = K->random(rng), c = K->random(rng);
    EXPECT_EQ(K->mul(a, K->add(b, c)), K->add(K->mul(a, b), K->mul(a, c)));
    EXPECT_EQ(K->mul(K->mul(a, b), c), K->mul(a, K->mul(b, c)));
    EXPECT_EQ(K->pow(a, 625), a);
  }
}

TEST(FieldProperty, SquaresMatchEnumeration) {
  for (auto K : {Field::prime(7), extend(Field::prime(5), 2), extend(Field::prime(11), 2)}) {
    const Word q = *K->order();
    std::vector<bool> square(q, false);
    for (Word i = 0; i < q; ++i) {
      Elem e = K->element_at(i);
      Elem s = K->mul(e, e);
      for (Word j = 0; j < q; ++j)
        if (K->element_at(j) == s) square[j] = true;
    }
    for (Word j = 0; j < q; ++j) EXPECT_EQ(K->is_square(K->element_at(j)), square[j]) << K->describe() << " " << j;
  }
}

TEST(Poly, FactorXSquaredPlusOneOverF5) {
  auto F = Field::prime(5);
  auto fs = factor(P(F, {1, 0, 1}));
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].poly, P(F, {2, 1}));
  EXPECT_EQ(fs[1].poly, P(F, {3, 1}));
  EXPECT_EQ(fs[0].multiplicity, 1);
}

TEST(Poly, FactorX) {
  auto F = Field::prime(5);
  auto fs = factor(Poly::x(F));
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].poly, Poly::x(F));
  EXPECT_EQ(fs[0].multiplicity, 1);
}

TEST(Poly, FactorXSquaredOverF7) {
  auto F = Field::prime(7);
  auto fs = factor(P(F, {0, 0, 1}));
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].poly, Poly::x(F));
  EXPECT_EQ(fs[0].multiplicity, 2);
}

TEST(Poly, FactorPthPower) {
  auto F = Field::prime(5);
  Poly f = pow(P(F, {1, 1}), 5) * pow(P(F, {2, 0, 1}), 2);
  auto fs = factor(f);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].poly, P(F, {1, 1}));
  EXPECT_EQ(fs[0].multiplicity, 5);
  EXPECT_EQ(fs[1].multiplicity, 2);
}

TEST(Poly, FactorZeroThrows) {
  auto F = Field::prime(5);
  EXPECT_THROW(factor(Poly(F)), ZeroPolynomial);
}

TEST(Poly, FindIrreducible) {
  auto F5 = Field::prime(5);
  EXPECT_EQ(find_irreducible(F5, 1), Poly::x(F5));
  EXPECT_EQ(find_irreducible(F5, 2), P(F5, {2, 0, 1}));
  auto F7 = Field::prime(7);
  // Oracle: scan monic quadratics in the canonical order (c0 fastest) for one without roots.
  Poly first;
  for (int idx = 0; idx < 49 && first.is_zero(); ++idx) {
    Poly f = P(F7, {idx % 7, idx / 7, 1});
    if (brute_roots(f).empty()) first = f;
  }
  EXPECT_EQ(find_irreducible(F7, 2), first);
  EXPECT_EQ(first, P(F7, {1, 0, 1}));
}

TEST(Poly, ExtensionFieldRejectsReducible) {
  auto F = Field::prime(5);
  EXPECT_THROW(extension_field(P(F, {1, 0, 1})), InvalidInput);
  EXPECT_NO_THROW(extension_field(P(F, {2, 0, 1})));
}

TEST(Poly, DivmodAndGcd) {
  std::mt19937_64 rng(3);
  auto F = Field::prime(11);
  for (int i = 0; i < 100; ++i) {
    Poly a = random_poly(F, 6, rng), b = random_poly(F, 3, rng), c = random_poly(F, 2, rng);
    auto [q, r] = a.divmod(b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
    Poly g = gcd(a * c, b * c);
    EXPECT_TRUE(c.monic().divides(g));
    auto eg = ext_gcd(a, b);
    EXPECT_EQ(eg.s * a + eg.t * b, eg.g);
  }
}

TEST(PolyProperty, FactorizationRemultiplies) {
  std::mt19937_64 rng(4);
  for (auto F : {Field::prime(5), Field::prime(7), Field::prime(13), extend(Field::prime(5), 2)}) {
    for (int i = 0; i < 100; ++i) {
      int deg = 1 + static_cast<int>(rng() % 8);
      Poly f = random_poly(F, deg, rng);
      if (i % 4 == 0) f = f * random_poly(F, 1, rng) * random_poly(F, 1, rng);
      auto fs = factor(f);
      Poly prod = Poly::constant(F, f.lead());
      for (const auto& [g, m] : fs) {
        EXPECT_TRUE(g.is_monic());
        EXPECT_TRUE(is_irreducible(g));
        prod = prod * pow(g, m);
      }
      EXPECT_EQ(prod, f) << f.to_string();
      for (std::size_t k = 1; k < fs.size(); ++k) EXPECT_TRUE(canonical_less(fs[k - 1].poly, fs[k].poly));
    }
  }
}

TEST(PolyProperty, FactorsHaveNoRootsByExhaustiveSearch) {
  std::mt19937_64 rng(5);
  for (auto F : {Field::prime(5), Field::prime(11), extend(Field::prime(11), 2), extend(Field::prime(7), 2)}) {
    ASSERT_LE(*F->order(), 121u);
    for (int i = 0; i < 40; ++i) {
      Poly f = random_poly(F, 1 + static_cast<int>(rng() % 6), rng);
      for (const auto& [g, m] : factor(f)) {
        if (g.degree() > 1) EXPECT_TRUE(brute_roots(g).empty()) << g.to_string();
      }
      EXPECT_EQ(roots(f), brute_roots(f)) << f.to_string();
    }
  }
}

TEST(Linalg, KernelRankDetInverse) {
  std::mt19937_64 rng(6);
  auto F = Field::prime(7);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a(F, 4, 6);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) a.at(i, j) = (i == 3) ? F->add(a.at(0, j), a.at(1, j)) : F->random(rng);
    auto ker = a.kernel();
    EXPECT_EQ(static_cast<int>(ker.size()) + a.rank(), 6);
    for (const auto& v : ker)
      for (const auto& e : a.apply(v)) EXPECT_TRUE(F->is_zero(e));
    Matrix s(F, 3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s.at(i, j) = F->random(rng);
    if (F->is_zero(s.det())) {
      EXPECT_THROW(s.inverse(), DivisionByZero);
    } else {
      EXPECT_EQ(s * s.inverse(), Matrix::identity(F, 3));
    }
  }
}
