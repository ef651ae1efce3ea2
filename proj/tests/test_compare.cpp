#include <gtest/gtest.h>

#include <cmath>

#include "finslift/compare.hpp"
#include "fixtures.hpp"

using namespace finslift;

namespace {

struct Case {
  MetricModel M;
  Immersion I;
};

std::vector<Case> cases() {
  return {{euclidean(3), plane_immersion(2, 3)},     {euclidean(3), sphere_immersion(1.0)},
          {fixtures::randers3(), graph_immersion()}, {fixtures::randers3(), sphere_immersion(1.0)},
          {sphere_chart(3), graph_immersion()},      {fixtures::randers3(), cylinder_immersion(0.8)}};
}

const std::vector<SubPoint> kPoints = {
    {{0.7, 0.5}, {0.9, -0.6}}, {{1.1, 0.45}, {-0.3, 1.4}}, {{0.5, 0.8}, {1.2, 0.35}}};

}  // namespace

TEST(Compare, IntrinsicMetricEqualsInducedMetric) {
  for (const auto& c : cases()) {
    const MetricModel IM = intrinsic_model(c.M, c.I);
    for (const auto& sp : kPoints) {
      EXPECT_LT(max_abs(fundamental_tensor(IM, as_point(sp)) - induced_metric(c.M, c.I, sp)), 1e-10)
          << c.M.label << " " << c.I.kind;
    }
  }
}

TEST(Compare, RoundSphereIntrinsicConnection) {
  const MetricModel IM = intrinsic_model(euclidean(3), sphere_immersion(1.0));
  for (const auto& sp : kPoints) {
    const double sn = std::sin(sp.u[0]), cs = std::cos(sp.u[0]);
    Array chr({2, 2, 2}, 0.0);
    chr(0, 1, 1) = -sn * cs;
    chr(1, 0, 1) = chr(1, 1, 0) = cs / sn;
    const DConnAtPoint L = cartan_metrical_connection(IM, as_point(sp));
    EXPECT_LT(max_abs(L.L00 - chr), 1e-10);
    EXPECT_LT(max_abs(L.C01), 1e-12);
    const Array N = cartan_nonlinear_connection(IM, as_point(sp)).N;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        double want = 0;
        for (int c = 0; c < 2; ++c) want += chr(a, b, c) * sp.v[static_cast<std::size_t>(c)];
        EXPECT_NEAR(N(a, b), want, 1e-10);
      }
    }
    EXPECT_LT(max_abs(connection_difference(euclidean(3), sphere_immersion(1.0), sp)), 1e-12);
  }
}

// Unit sphere: R^a_bc = delta^a_c v_b - delta^a_b v_c and
// RH^a_bcd = delta^a_d g_bc - delta^a_c g_bd, for both connections.
TEST(Compare, RoundSphereCurvature) {
  for (const auto& sp : kPoints) {
    const auto cf = comparison_fields(euclidean(3), sphere_immersion(1.0), sp);
    const Array g = values(cf.sub.g_sub);
    double vl[2];
    for (int b = 0; b < 2; ++b) vl[b] = g(b, 0) * sp.v[0] + g(b, 1) * sp.v[1];
    Array R({2, 2, 2}, 0.0), RH({2, 2, 2, 2}, 0.0);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int c = 0; c < 2; ++c) {
          R(a, b, c) = (a == c ? vl[b] : 0.0) - (a == b ? vl[c] : 0.0);
          for (int d = 0; d < 2; ++d) RH(a, b, c, d) = (a == d ? g(b, c) : 0.0) - (a == c ? g(b, d) : 0.0);
        }
      }
    }
    EXPECT_LT(max_abs(values(cf.intrinsic_br.R) - R), 1e-9);
    EXPECT_LT(max_abs(values(cf.induced_br.R) - R), 1e-9);
    EXPECT_LT(max_abs(curvature(cf.intrinsic).RH - RH), 1e-9);
    EXPECT_LT(max_abs(curvature(cf.sub.tangent).RH - RH), 1e-9);
  }
}

TEST(Compare, FlatAndTotallyGeodesicCasesHaveNoDifferences) {
  Array A({3, 2}, 0.0);
  A(0, 0) = 1.0;
  A(1, 0) = 0.5;
  A(1, 1) = 1.0;
  A(2, 1) = -0.7;
  const Case flat[] = {{euclidean(3), plane_immersion(2, 3)},
                       {euclidean(3), linear_immersion({0.2, -0.1, 0.4}, A)},
                       {euclidean(4, 1.7), plane_immersion(2, 4)}};
  for (const auto& c : flat) {
    for (const auto& sp : kPoints) {
      const auto cf = comparison_fields(c.M, c.I, sp);
      const auto bd = bracket_difference(cf);
      const auto dd = deformation_deltas(cf);
      const auto dc = deformation_components(cf);
      for (const Array* a : {&bd.D100, &bd.D101, &bd.R_diff, &bd.B_diff, &dd.dH00, &dd.dV10, &dd.dH00_lit,
                             &dc.D00H, &dc.D00V, &dc.D10H, &dc.D10V}) {
        EXPECT_LT(max_abs(*a), 1e-10) << c.I.kind;
      }
      EXPECT_LT(max_abs(values(cf.D)), 1e-10) << c.I.kind;
    }
  }
}

TEST(Compare, RandersDifferenceIsNonzeroAndHomogeneous) {
  const auto M = fixtures::randers3();
  const auto I = sphere_immersion(1.0);
  for (const auto& sp : kPoints) {
    const Array D = connection_difference(M, I, sp);
    EXPECT_GT(max_abs(D), 1e-3);
    SubPoint sq = sp;
    for (auto& v : sq.v) v *= 2.5;
    EXPECT_LT(max_abs(connection_difference(M, I, sq) - D.map([](double z) { return 2.5 * z; })), 1e-11);
  }
}

TEST(Compare, IntrinsicConnectionIsMetrical) {
  for (const auto& c : cases()) {
    for (const auto& sp : kPoints) {
      const auto cf = comparison_fields(c.M, c.I, sp);
      const MetricityResiduals r = metricity(cf.intrinsic);
      EXPECT_LT(std::max({r.g_h, r.g_v, r.h_h, r.h_v}), 1e-9) << c.I.kind;
    }
  }
}

TEST(Compare, ZeroConnectionHasNoBrackets) {
  const auto cf = comparison_fields(euclidean(3), plane_immersion(2, 3), kPoints[0]);
  const Brackets br = bracket_fields(cf.sub.tangent);
  EXPECT_EQ(max_abs(values(br.R)), 0.0);
  EXPECT_EQ(max_abs(values(br.B)), 0.0);
  EXPECT_LT(bracket_commutator_residual(cf.sub.tangent, 3), 1e-12);
}

TEST(Compare, DeformationHorizontalBlockOfVerticalArgumentIsZero) {
  for (const auto& c : cases()) {
    for (const auto& sp : kPoints) {
      const auto dc = deformation_components(comparison_fields(c.M, c.I, sp));
      EXPECT_EQ(max_abs(dc.D10H), 0.0) << c.I.kind;
    }
  }
}

// Every asserted comparison row holds; informational rows only need to be finite.
TEST(Compare, AssertedRowsHoldEverywhere) {
  for (const auto& c : cases()) {
    for (const auto& sp : kPoints) {
      const auto cf = comparison_fields(c.M, c.I, sp);
      std::vector<ComparisonRow> rows = nonlinear_rows(cf, 7);
      for (auto&& more : {connection_rows(cf), torsion_rows(cf), curvature_rows(cf)}) {
        rows.insert(rows.end(), more.begin(), more.end());
      }
      for (const auto& r : rows) {
        EXPECT_TRUE(std::isfinite(r.residual)) << r.name;
        if (!r.informational) EXPECT_TRUE(r.pass) << c.M.label << " " << c.I.kind << " " << r.name << " " << r.residual;
      }
    }
  }
}

TEST(Compare, ClosedFormsThatAgreeWithTheirOracles) {
  const auto cf = comparison_fields(fixtures::randers3(), graph_immersion(), kPoints[1]);
  EXPECT_GT(max_abs(values(cf.D)), 1e-3);
  EXPECT_LT(max_abs(values(cf.dH00_lit) - values(cf.dH00)), 1e-10);
  const auto a = deformation_components(cf), b = deformation_components_closed(cf);
  EXPECT_LT(max_abs(a.D00H - b.D00H), 1e-10);
  EXPECT_LT(max_abs(a.D00V - b.D00V), 1e-10);
  EXPECT_LT(adapted_basis_residual(cf, 5), 1e-9);
}
