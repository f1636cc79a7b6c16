#include <gtest/gtest.h>

#include "ebundle/errors.hpp"
#include "test_util.hpp"

using namespace ebundle;
using namespace ebundle::testing;

namespace {

Curve e5() { return curve(5, -1, 0); }

}  // namespace

TEST(Curve, RejectsSingular) {
  auto F = Field::prime(5);
  EXPECT_THROW(Curve(F, F->zero(), F->zero()), InvalidInput);
}

TEST(Curve, AddIdentity) {
  Curve E = e5();
  Point q = pt(E, 2, 1);
  EXPECT_EQ(E.add(q, Point::infinity()), q);
  EXPECT_EQ(E.add(Point::infinity(), q), q);
}

TEST(Curve, TwoTorsionDoubling) {
  Curve E = e5();
  EXPECT_TRUE(E.add(pt(E, 0, 0), pt(E, 0, 0)).inf);
}

TEST(Curve, InversePointsShareX) {
  Curve E = e5();
  EXPECT_TRUE(E.add(pt(E, 2, 1), pt(E, 2, 4)).inf);
}

TEST(Curve, DoublingByTangent) {
  // Tangent slope at (2,1): (3*4 - 1)/(2*1) = 3 mod 5, so x3 = 9 - 4 = 0, y3 = 3*2 - 1 = 0.
  Curve E = e5();
  EXPECT_EQ(E.mul(2, pt(E, 2, 1)), pt(E, 0, 0));
}

TEST(Curve, OffCurvePointRejected) {
  Curve E = e5();
  EXPECT_THROW(E.add(pt(E, 1, 1), pt(E, 0, 0)), PointOffCurve);
  EXPECT_THROW(MarkedCurve(E, pt(E, 1, 1)), PointOffCurve);
}

TEST(MarkedCurve, SumWithZeroElement) {
  Curve E = e5();
  MarkedCurve mc(E, pt(E, 0, 0));
  EXPECT_EQ(mc.marked_sum(mc.p(), pt(E, 2, 1)), pt(E, 2, 1));
  EXPECT_EQ(mc.marked_sum(pt(E, 0, 0), pt(E, 0, 0)), pt(E, 0, 0));
  MarkedCurve mi(E, Point::infinity());
  for (const auto& a : E.points())
    for (const auto& b : E.points()) EXPECT_EQ(mi.marked_sum(a, b), E.add(a, b));
}

TEST(MarkedCurve, Torsion) {
  Curve E = e5();
  MarkedCurve mc(E, Point::infinity());
  EXPECT_TRUE(mc.is_r_torsion(pt(E, 0, 0), 2));
  EXPECT_FALSE(mc.is_r_torsion(pt(E, 2, 1), 2));
  for (int r = 1; r < 6; ++r) EXPECT_TRUE(mc.is_r_torsion(mc.p(), r));
  MarkedCurve mq(E, pt(E, 2, 1));
  EXPECT_TRUE(mq.is_r_torsion(pt(E, 2, 1), 3));
}

TEST(CurveProperty, GroupAxiomsExhaustive) {
  for (const Curve& E : {e5(), curve(7, -1, 0), curve(7, 3, 2)}) {
    auto pts = E.points();
    for (const auto& a : pts) {
      EXPECT_EQ(E.add(a, Point::infinity()), a);
      EXPECT_TRUE(E.add(a, E.neg(a)).inf);
      for (const auto& b : pts) {
        EXPECT_EQ(E.add(a, b), E.add(b, a));
        for (const auto& c : pts) EXPECT_EQ(E.add(E.add(a, b), c), E.add(a, E.add(b, c)));
      }
    }
  }
}

TEST(CurveProperty, MarkedGroupAxioms) {
  Curve E = curve(7, 3, 2);
  auto pts = E.points();
  for (const auto& p : pts) {
    MarkedCurve mc(E, p);
    for (const auto& a : pts) {
      EXPECT_EQ(mc.marked_sum(a, mc.marked_neg(a)), p);
      for (const auto& b : pts)
        for (const auto& c : pts) EXPECT_EQ(mc.marked_sum(mc.marked_sum(a, b), c), mc.marked_sum(a, mc.marked_sum(b, c)));
    }
  }
}

TEST(Divisor, ClassPointExamples) {
  Curve E = e5();
  MarkedCurve mc(E, pt(E, 2, 1));
  Place P = mc.p_place();
  Point q1 = pt(E, 0, 0), q2 = pt(E, 3, 2);
  ASSERT_TRUE(E.contains(q2));
  EXPECT_EQ(divisor_class_point(mc, Divisor::of(place_of(E, q1)) - Divisor::of(P)), q1);
  EXPECT_EQ(divisor_class_point(mc, Divisor()), mc.p());
  Divisor D = Divisor::of(place_of(E, q1)) + Divisor::of(place_of(E, q2)) - 2 * Divisor::of(P);
  EXPECT_EQ(divisor_class_point(mc, D), mc.marked_sum(q1, q2));
  EXPECT_THROW(divisor_class_point(mc, Divisor::of(P)), NonZeroDegree);
}

TEST(Divisor, ClassPointNeedsBaseChange) {
  Curve E = e5();
  MarkedCurve mc(E, Point::infinity());
  Poly m(E.field(), {E.F().from_int(2), E.F().zero(), E.F().one()});
  auto ps = places_over(E, m);
  ASSERT_FALSE(ps.empty());
  Divisor D = Divisor::of(ps[0]) - ps[0].degree() * Divisor::of(Place::infinity(E.field()));
  try {
    divisor_class_point(mc, D);
    FAIL();
  } catch (const BaseChangeRequired& e) {
    EXPECT_EQ(e.degree(), ps[0].degree());
  }
  // A closed place is the sum of its conjugates, which is rational.
  Point q = divisor_class_point_any(mc, D);
  EXPECT_TRUE(E.contains(q));
}

TEST(Divisor, LinearEquivalence) {
  Curve E = curve(7, 3, 2);
  auto pts = E.points();
  MarkedCurve mc(E, pts[1]);
  for (const auto& q1 : pts)
    for (const auto& q2 : pts) {
      Divisor lhs = Divisor::of(place_of(E, q1)) + Divisor::of(place_of(E, q2));
      Divisor rhs = Divisor::of(place_of(E, mc.marked_sum(q1, q2))) + Divisor::of(mc.p_place());
      EXPECT_TRUE(linearly_equivalent(mc, lhs, rhs));
      EXPECT_TRUE(linearly_equivalent(mc, lhs, lhs));
      EXPECT_EQ(linearly_equivalent(mc, Divisor::of(place_of(E, q1)), Divisor::of(place_of(E, q2))), q1 == q2);
    }
}

TEST(DivisorProperty, ClassMapIsHomomorphism) {
  std::mt19937_64 rng(11);
  for (Word p : {5ULL, 7ULL, 11ULL}) {
    Curve E = random_curve(p, rng);
    MarkedCurve mc(E, random_point(E, rng));
    Place P = mc.p_place();
    for (int i = 0; i < 40; ++i) {
      Divisor D1 = random_divisor(E, 3, 2, rng), D2 = random_divisor(E, 3, 2, rng);
      D1.add(P, -D1.degree());
      D2.add(P, -D2.degree());
      Point a = divisor_class_point_any(mc, D1), b = divisor_class_point_any(mc, D2);
      EXPECT_EQ(divisor_class_point_any(mc, D1 + D2), mc.marked_sum(a, b));
    }
  }
}

TEST(Places, ClassificationMatchesPointCountOverExtension) {
  // Oracle: a place of degree d contributes exactly d points over F_{p^k} when d | k.
  for (const Curve& E : {e5(), curve(7, 3, 2)}) {
    FieldPtr L = extend(E.field(), 2);
    Curve EL = E.base_change(L);
    std::size_t count = 1;  // infinity
    const Word p = E.F().characteristic();
    for (Word c0 = 0; c0 < p; ++c0) {
      for (auto& t : places_over(E, Poly::linear(E.field(), E.F().from_int(static_cast<std::int64_t>(c0))))) {
        count += t.degree();
        EXPECT_EQ(points_of(t, EL).size(), static_cast<std::size_t>(t.degree()));
      }
      for (Word c1 = 0; c1 < p; ++c1) {
        Poly m(E.field(), {E.F().from_int(static_cast<std::int64_t>(c0)), E.F().from_int(static_cast<std::int64_t>(c1)), E.F().one()});
        if (!is_irreducible(m)) continue;
        for (auto& t : places_over(E, m)) {
          if (t.degree() == 2) {
            count += 2;
            auto pts = points_of(t, EL);
            EXPECT_EQ(pts.size(), 2u);
            for (const auto& q : pts) EXPECT_EQ(place_below(E, EL, q), t);
          }
        }
      }
    }
    EXPECT_EQ(count, EL.points().size());
  }
}

TEST(BaseChange, DegreePreservedAndDescends) {
  std::mt19937_64 rng(12);
  Curve E = curve(7, 3, 2);
  for (int i = 0; i < 30; ++i) {
    Divisor D = random_divisor(E, 4, 3, rng);
    FieldPtr L = extend(E.field(), D.split_degree());
    Curve EL = E.base_change(L);
    Divisor DL = base_change(D, EL);
    EXPECT_EQ(DL.degree(), D.degree());
    for (const auto& [t, n] : DL.terms()) EXPECT_EQ(t.degree(), 1);
    EXPECT_EQ(descend(E, EL, DL), D);
  }
  EXPECT_EQ(E.base_change(E.field()), E);
}
