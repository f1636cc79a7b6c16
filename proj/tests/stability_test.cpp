#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ebundle;
using namespace ebundle::testing;

namespace {

CurvePtr e7() { return make_curve(curve(7, 3, 2)); }

Divisor pl(const CurvePtr& E, const Point& q) { return Divisor::of(place_of(*E, q)); }

SectionSystem twisted(const DirectSumPresentation& P) { return sections_direct_sum(P, default_twist(*P.curve, P.mark)); }

/// O(q_j - p) summands on y^2 = x^3 + 3x + 2 over F_7 with p = infinity.
DirectSumPresentation plain_sum(const CurvePtr& E, const std::vector<Point>& qs) {
  DirectSumPresentation P{E, Point::infinity(), {}};
  for (const auto& q : qs) P.summands.push_back(pl(E, q) - pl(E, Point::infinity()));
  return P;
}

/// First rank-2 kernel presentation (seeded search) whose bundle is L (x) F_2.
KernelPresentation find_f2(std::mt19937_64& rng) {
  for (;;) {
    auto K = random_kernel(5, 3, rng);
    auto S = sections_kernel(K, default_twist(*K.curve, K.mark));
    auto rep = splitting_type(S);
    if (rep.semistable() && rep.splitting.size() == 1 && rep.splitting[0].rank == 2) return K;
  }
}

}  // namespace

TEST(Wedge, SingleSectionHasSimpleZero) {
  auto E = e7();
  auto pts = E->points();
  auto S = twisted(plain_sum(E, {pts[1], pts[2]}));
  EXPECT_EQ(wedge_valuation(S, {0}, place_of(*E, pts[1])), 1);
  EXPECT_EQ(wedge_valuation(S, {0}, place_of(*E, pts[2])), 0);
}

TEST(Wedge, TopWedgeCountsSummandsAtPoint) {
  auto E = e7();
  auto pts = E->points();
  auto S = twisted(plain_sum(E, {pts[1], pts[1], pts[2]}));
  EXPECT_EQ(wedge_valuation(S, {0, 1, 2}, place_of(*E, pts[1])), 2);
  EXPECT_EQ(wedge_valuation(S, {0, 1, 2}, place_of(*E, pts[2])), 1);
}

TEST(Wedge, SectionsOfOneSummandAreDependent) {
  auto E = e7();
  auto pts = E->points();
  DirectSumPresentation P = plain_sum(E, {pts[1]});
  auto S = sections_direct_sum(P, pl(E, Point::infinity()) + pl(E, pts[2]));
  ASSERT_EQ(S.r(), 2);
  EXPECT_THROW(wedge_valuation(S, {0, 1}, place_of(*E, pts[1])), IdenticallyZeroWedge);
}

TEST(Spectral, DistinctAndRepeatedPoints) {
  auto E = e7();
  auto pts = E->points();
  EXPECT_EQ(spectral_divisor(twisted(plain_sum(E, {pts[1], pts[2]}))), pl(E, pts[1]) + pl(E, pts[2]));
  EXPECT_EQ(spectral_divisor(twisted(plain_sum(E, {pts[3], pts[3]}))), 2 * pl(E, pts[3]));
}

TEST(Spectral, CountAndWedgeErrors) {
  auto E = e7();
  auto pts = E->points();
  auto S = twisted(plain_sum(E, {pts[1], pts[2]}));
  S.declared_rank = 3;
  EXPECT_THROW(spectral_divisor(S), SectionCountMismatch);
  DirectSumPresentation U{E, Point::infinity(), {pl(E, pts[1]), -pl(E, pts[1])}};
  auto SU = twisted(U);
  ASSERT_EQ(SU.r(), 2);
  EXPECT_THROW(spectral_divisor(SU), TopWedgeVanishes);
}

TEST(Spectral, MonadShiftExample) {
  std::mt19937_64 rng(41);
  auto k = random_monad(7, 2, 1, rng);
  const auto& K = k.M.kernel;
  auto T = default_twist(*K.curve, K.mark);
  Divisor sk = spectral_divisor(sections_kernel(K, T));
  Divisor sv = spectral_divisor(sections_monad(k.M, T));
  EXPECT_EQ(sk - sv, T);
  EXPECT_EQ(sv, class_divisor(*K.curve, k.classes));
}

TEST(KernelDimension, Examples) {
  auto E = e7();
  auto pts = E->points();
  auto S = twisted(plain_sum(E, {pts[1], pts[1], pts[2]}));
  EXPECT_EQ(kernel_dimension(S, place_of(*E, pts[3])).d, 0);
  auto kd = kernel_dimension(S, place_of(*E, pts[1]));
  EXPECT_EQ(kd.d, 2);
  EXPECT_EQ(kd.limit_rank, 2);
  EXPECT_EQ(kernel_dimension(S, place_of(*E, pts[2])).d, 1);
}

TEST(FullySplit, DistinctSummands) {
  auto E = e7();
  auto pts = E->points();
  auto rep = fully_split_test(twisted(plain_sum(E, {pts[1], pts[2], pts[4]})));
  EXPECT_EQ(rep.verdict, Verdict::Semistable);
  EXPECT_TRUE(rep.fully_split);
  EXPECT_EQ(rep.kernel_dims.size(), 3u);
}

TEST(FullySplit, UnstablePairDetected) {
  auto E = e7();
  auto pts = E->points();
  DirectSumPresentation U{E, Point::infinity(), {pl(E, pts[1]), -pl(E, pts[1])}};
  auto rep = fully_split_test(twisted(U));
  EXPECT_EQ(rep.verdict, Verdict::NotSemistable);
  EXPECT_EQ(rep.reason, Reason::TopWedgeVanishes);
}

TEST(SplittingType, FullySplitExponentsAreOne) {
  auto E = e7();
  auto pts = E->points();
  auto rep = splitting_type(twisted(plain_sum(E, {pts[1], pts[1], pts[2]})));
  ASSERT_TRUE(rep.semistable());
  EXPECT_TRUE(rep.fully_split);
  for (const auto& pa : rep.points) {
    for (int e : pa.wedge.exponents) EXPECT_LE(e, 1);
    EXPECT_EQ(pa.kernel.d, pa.multiplicity);
  }
  EXPECT_EQ(factor_labels(*E, rep.splitting), class_labels(*E, {pts[1], pts[1], pts[2]}));
}

TEST(SplittingType, FindsF2Factor) {
  std::mt19937_64 rng(42);
  KernelPresentation K = find_f2(rng);
  auto S = sections_kernel(K, default_twist(*K.curve, K.mark));
  auto rep = splitting_type(S);
  ASSERT_EQ(rep.points.size(), 1u);
  const auto& pa = rep.points[0];
  EXPECT_EQ(pa.multiplicity, 2);
  EXPECT_EQ(pa.wedge.exponents, (std::vector<int>{0, 2}));
  EXPECT_EQ(pa.wedge.delta, (std::vector<int>{1, 2}));
  // Independent oracle: one kernel direction where O + O would give two.
  EXPECT_EQ(kernel_dimension(S, place_of(*rep.split_curve, pa.point)).d, 1);
  auto fs = fully_split_test(S);
  EXPECT_EQ(fs.verdict, Verdict::Semistable);
  EXPECT_FALSE(fs.fully_split);
  EXPECT_FALSE(fs.failed_condition.empty());
}

TEST(SplittingType, RankZeroIsVacuous) {
  auto E = e7();
  KernelPresentation K{E, Point::infinity(), {pl(E, E->points()[1])}, pl(E, E->points()[1]), {CurveFunction::from_int(E, 1)}};
  auto rep = splitting_type(sections_kernel(K, default_twist(*E, K.mark)));
  EXPECT_TRUE(rep.semistable());
  EXPECT_TRUE(rep.splitting.empty());
}

TEST(Incidence, Examples) {
  auto E = e7();
  auto pts = E->points();
  auto S = twisted(plain_sum(E, {pts[1], pts[2]}));
  EXPECT_EQ(incidence_order(S, 0, {1}, place_of(*E, pts[1])), 1);
  EXPECT_EQ(incidence_order(S, 0, {1}, place_of(*E, pts[2])), 0);
  EXPECT_EQ(incidence_order(S, 0, {}, place_of(*E, pts[1])), wedge_valuation(S, {0}, place_of(*E, pts[1])));
}

TEST(GeneralTwist, OnePointIsPlainSpectral) {
  auto E = e7();
  auto pts = E->points();
  auto P = plain_sum(E, {pts[1], pts[2]});
  auto res = general_twist_spectral(P, {Point::infinity()});
  EXPECT_EQ(res.dim_g, 2);
  EXPECT_EQ(res.spectral, spectral_divisor(twisted(P)));
}

TEST(GeneralTwist, ThreePointsAgree) {
  auto E = e7();
  auto pts = E->points();
  auto P = plain_sum(E, {pts[1], pts[2], pts[2]});
  auto res = general_twist_spectral(P, {Point::infinity(), pts[3], pts[4]});
  EXPECT_EQ(res.dim_g, 3);
  EXPECT_TRUE(res.canonical_basis);
  EXPECT_EQ(res.spectral, spectral_divisor(twisted(P)));
  EXPECT_THROW(general_twist_spectral(P, {pts[3], pts[3]}), InvalidInput);
}

TEST(StabilityProperty, ConstructionRoundTrip) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 40; ++i) {
    auto k = random_direct_sum(std::vector<Word>{5, 7, 11, 13}[i % 4], 1 + i % 4, rng);
    auto rep = splitting_type(twisted(k.P));
    ASSERT_TRUE(rep.semistable());
    EXPECT_EQ(rep.spectral.degree(), k.P.rank());
    EXPECT_EQ(factor_labels(*rep.split_curve, rep.splitting), class_labels(*k.P.curve, k.classes));
    EXPECT_EQ(rep.spectral, class_divisor(*k.P.curve, k.classes));
    EXPECT_LE(rep.max_vanishing, 1);
    EXPECT_LE(rep.max_incidence, 1);
  }
}

TEST(StabilityProperty, BasisInvariance) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 15; ++i) {
    auto k = random_direct_sum(i % 2 ? 7 : 11, 2 + i % 3, rng);
    auto S = twisted(k.P);
    Divisor base = spectral_divisor(S);
    const FieldPtr& F = S.field();
    for (int trial = 0; trial < 4; ++trial) {
      Matrix C(F, S.r(), S.r());
      do {
        for (int a = 0; a < S.r(); ++a)
          for (int b = 0; b < S.r(); ++b) C.at(a, b) = F->random(rng);
      } while (C.rank() != S.r());
      EXPECT_EQ(spectral_divisor(S.recombine(C)), base);
    }
  }
}

TEST(StabilityProperty, UnstablePairsAreRejected) {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 20; ++i) {
    auto rep = splitting_type(twisted(unstable_pair(std::vector<Word>{5, 7, 11, 13}[i % 4], rng)));
    EXPECT_EQ(rep.verdict, Verdict::NotSemistable);
  }
}

TEST(StabilityProperty, OracleEquivalenceOnKernels) {
  std::mt19937_64 rng(46);
  int f_rows = 0;
  for (int i = 0; i < 30; ++i) {
    auto K = random_kernel(i % 2 ? 5 : 7, 3 + (i % 3 == 0), rng);
    auto S = sections_kernel(K, default_twist(*K.curve, K.mark));
    auto rep = splitting_type(S);
    auto fs = fully_split_test(S);
    EXPECT_EQ(rep.verdict, fs.verdict);
    if (!rep.semistable()) continue;
    EXPECT_EQ(rep.spectral.degree(), rep.rank);
    EXPECT_EQ(rep.fully_split, fs.fully_split);
    if (!rep.fully_split) {
      ++f_rows;
      for (const auto& pa : rep.points) EXPECT_LE(pa.kernel.d, pa.multiplicity);
    }
  }
  EXPECT_GT(f_rows, 0);
}

TEST(StabilityProperty, MonadShift) {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 10; ++i) {
    int s = 1 + i % 2;
    auto k = random_monad(i % 2 ? 5 : 7, 1 + static_cast<int>(rng() % 2), s, rng);
    const auto& K = k.M.kernel;
    auto T = default_twist(*K.curve, K.mark);
    Divisor sk = spectral_divisor(sections_kernel(K, T));
    auto rep = splitting_type(sections_monad(k.M, T));
    ASSERT_TRUE(rep.semistable());
    Divisor from_exponents;
    for (const auto& f : rep.splitting) from_exponents.add(place_of(*rep.split_curve, f.point), f.rank);
    EXPECT_EQ(sk - descend(*K.curve, *rep.split_curve, from_exponents), s * T);
  }
}

TEST(StabilityProperty, TrivializationIndependence) {
  std::mt19937_64 rng(48);
  int checked = 0;
  KernelPresentation K2 = find_f2(rng);
  std::vector<SectionSystem> systems{sections_kernel(K2, default_twist(*K2.curve, K2.mark))};
  for (int i = 0; i < 6; ++i) systems.push_back(twisted(random_direct_sum(7, 2 + i % 2, rng).P));
  for (const auto& S : systems) {
    auto rep = splitting_type(S);
    ASSERT_TRUE(rep.semistable());
    SectionSystem SL = rep.split_curve == S.curve ? S : S.base_change(rep.split_curve->field());
    for (const auto& pa : rep.points) {
      Place t = place_of(*SL.curve, pa.point);
      LocalFrame frame;
      for (int a = 0; a < SL.m(); ++a) {
        CurveFunction u = random_function(SL.curve, rng, 2);
        while (valuation(u, t) != 0) u = random_function(SL.curve, rng, 2);
        frame.row_units.push_back(u);
      }
      frame.reparam = SL.field()->random(rng);
      auto wp = wedge_profile(SL, t, pa.multiplicity, frame);
      EXPECT_EQ(wp.exponents, pa.wedge.exponents);
      EXPECT_EQ(wp.delta, pa.wedge.delta);
      ++checked;
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(SplittingType, ClosedSupportIsSplitByBaseChange) {
  std::mt19937_64 rng(49);
  int found = 0;
  for (int i = 0; i < 200 && found < 3; ++i) {
    auto K = random_kernel(i % 2 ? 5 : 7, 3, rng);
    auto S = sections_kernel(K, default_twist(*K.curve, K.mark));
    auto rep = splitting_type(S);
    if (!rep.semistable() || rep.spectral.split_degree() == 1) continue;
    ++found;
    EXPECT_EQ(rep.split_curve->field()->absolute_degree(), rep.spectral.split_degree());
    int total = 0;
    for (const auto& f : rep.splitting) {
      total += f.rank;
      EXPECT_GT(rep.spectral.mult(place_below(*K.curve, *rep.split_curve, f.point)), 0);
    }
    EXPECT_EQ(total, rep.rank);
    EXPECT_EQ(fully_split_test(S).fully_split, rep.fully_split);
  }
  EXPECT_EQ(found, 3);
}
