#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "finslift/ambient.hpp"
#include "finslift/errors.hpp"
#include "fixtures.hpp"

using namespace finslift;

namespace {

double rel(const Array& a, const Array& b) {
  return max_abs(a - b) / (1 + std::max(max_abs(a), max_abs(b)));
}

// Levi-Civita symbols from fourth-order central differences of the
// fundamental tensor in x.
Array fd_christoffel(const MetricModel& M, const AmbientPoint& p) {
  const int n = M.n;
  const double h = 1e-3;
  Array dg({n, n, n});  // [a][b][c] = d_c g_ab
  for (int c = 0; c < n; ++c) {
    auto at = [&](double s) {
      AmbientPoint q = p;
      q.x[static_cast<std::size_t>(c)] += s;
      return fundamental_tensor(M, q);
    };
    const Array m2 = at(-2 * h), m1 = at(-h), p1 = at(h), p2 = at(2 * h);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        dg(a, b, c) = (m2(a, b) - 8 * m1(a, b) + 8 * p1(a, b) - p2(a, b)) / (12 * h);
      }
    }
  }
  const Array g = fundamental_tensor(M, p);
  Eigen::MatrixXd ge(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) ge(a, b) = g(a, b);
  }
  const Eigen::MatrixXd gi = ge.inverse();
  Array G({n, n, n}, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) G(a, b, c) += 0.5 * gi(a, d) * (dg(d, c, b) + dg(b, d, c) - dg(b, c, d));
      }
    }
  }
  return G;
}

Array scaled(Array a, double s) {
  for (double& v : a.data()) v *= s;
  return a;
}

AmbientPoint scale_y(AmbientPoint p, double lam) {
  for (double& y : p.y) y *= lam;
  return p;
}

}  // namespace

TEST(Christoffel, TwoSphereClassicalValues) {
  const auto M = sphere_chart(2);
  const AmbientPoint p{{0.8, 0.3}, {0.4, -1.2}};
  const Array G = christoffel(M, p);
  EXPECT_NEAR(G(0, 1, 1), -std::sin(0.8) * std::cos(0.8), 1e-14);
  EXPECT_NEAR(G(1, 0, 1), 1.0 / std::tan(0.8), 1e-14);
  EXPECT_NEAR(G(1, 1, 0), 1.0 / std::tan(0.8), 1e-14);
  EXPECT_NEAR(G(0, 0, 0), 0.0, 1e-14);
}

TEST(Christoffel, MatchesFiniteDifferenceOracleAndIsSymmetric) {
  for (const auto& M : {sphere_chart(2), sphere_chart(3), fixtures::randers3()}) {
    for (const auto& p : fixtures::points(M.n, 5, 31)) {
      const Array G = christoffel(M, p);
      EXPECT_LE(max_abs(G - fd_christoffel(M, p)), 1e-10) << M.label;
      for (int a = 0; a < M.n; ++a) {
        for (int b = 0; b < M.n; ++b) {
          for (int c = 0; c < M.n; ++c) EXPECT_NEAR(G(a, b, c), G(a, c, b), 1e-12);
        }
      }
    }
  }
  const auto E = christoffel(euclidean(3), {{1, 2, 3}, {1, 0, 0}});
  EXPECT_EQ(max_abs(E), 0.0);
}

TEST(Spray, SphereValueAndHomogeneity) {
  const auto M = sphere_chart(2);
  const auto G = spray(M, {{M_PI / 4, 0.0}, {0.0, 1.0}});
  EXPECT_NEAR(G[0], -0.25, 1e-14);
  EXPECT_NEAR(G[1], 0.0, 1e-14);
  for (const auto& Mm : fixtures::builtin_metrics()) {
    for (const auto& p : fixtures::points(Mm.n, 5, 2)) {
      const auto g1 = spray(Mm, p);
      const auto g2 = spray(Mm, scale_y(p, 2.0));
      for (std::size_t a = 0; a < g1.size(); ++a) EXPECT_NEAR(g2[a], 4 * g1[a], 1e-11 * (1 + std::abs(g2[a])));
    }
  }
}

TEST(NonlinearConnection, ChartMetricIsChristoffelTimesY) {
  const auto M = sphere_chart(3);
  for (const auto& p : fixtures::points(3, 10, 4)) {
    const auto N = cartan_nonlinear_connection(M, p);
    const Array G = christoffel(M, p);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double s = 0;
        for (int c = 0; c < 3; ++c) s += G(a, b, c) * p.y[static_cast<std::size_t>(c)];
        EXPECT_NEAR(N.N(a, b), s, 1e-10);
      }
    }
  }
}

// N against central differences of the spray in y, and 1-homogeneity.
TEST(NonlinearConnection, DerivativeOfSprayAndHomogeneity) {
  for (const auto& M : fixtures::builtin_metrics()) {
    for (const auto& p : fixtures::points(M.n, 5, 8)) {
      const auto N = cartan_nonlinear_connection(M, p);
      for (int b = 0; b < M.n; ++b) {
        const double h = 1e-4;
        AmbientPoint qp = p, qm = p;
        qp.y[static_cast<std::size_t>(b)] += h;
        qm.y[static_cast<std::size_t>(b)] -= h;
        const auto gp = spray(M, qp), gm = spray(M, qm);
        for (int a = 0; a < M.n; ++a) {
          const auto sa = static_cast<std::size_t>(a);
          EXPECT_NEAR(N.N(a, b), (gp[sa] - gm[sa]) / (2 * h), 1e-6);
        }
      }
      for (double lam : {0.5, 2.0, 3.0}) {
        const auto N2 = cartan_nonlinear_connection(M, scale_y(p, lam));
        EXPECT_LE(rel(N2.N, scaled(N.N, lam)), 1e-10);
      }
    }
  }
  const auto E = cartan_nonlinear_connection(euclidean(3), {{0, 1, 2}, {1, 1, 1}});
  EXPECT_LE(max_abs(E.N), 1e-15);
}

TEST(DeltaDerivative, Examples) {
  ScalarField f{3, 3, [](JetSpan x, JetSpan y) { return sin(x[0]) * y[1] + x[2] * x[1] * y[2] * y[2]; }};
  const AmbientPoint p{{0.3, 0.5, 0.7}, {1.0, -1.5, 0.5}};
  const auto d = delta_derivative(euclidean(3), p, f);
  EXPECT_NEAR(d[0], std::cos(0.3) * -1.5, 1e-14);
  EXPECT_NEAR(d[1], 0.7 * 0.25, 1e-14);
  EXPECT_NEAR(d[2], 0.5 * 0.25, 1e-14);

  const auto S = sphere_chart(3);
  for (const auto& q : fixtures::points(3, 10, 9)) {
    for (double v : delta_derivative(S, q, S.F2)) EXPECT_NEAR(v, 0.0, 1e-12);
  }
  ScalarField c{3, 3, [](JetSpan x, JetSpan) { return x[0] * 0.0 + 2.0; }};
  for (double v : delta_derivative(fixtures::randers3(), p, c)) EXPECT_EQ(v, 0.0);
}

// Randers norm, i.e. F^2 itself, is delta-constant.
TEST(DeltaDerivative, NormIsHorizontallyConstant) {
  const auto M = fixtures::randers3();
  for (const auto& p : fixtures::points(3, 10, 12)) {
    for (double v : delta_derivative(M, p, M.F2)) EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

// C11 for the Euclidean metric by hand: h = g/|y|^2 gives
// C11^a_bc = -(d^a_b y_c + d^a_c y_b - g_bc y^a)/|y|^2.
TEST(MetricalConnection, EuclideanVerticalBlock) {
  const AmbientPoint p{{0.1, 0.2, 0.3}, {1.0, -2.0, 0.5}};
  const auto D = cartan_metrical_connection(euclidean(3), p);
  const double n2 = 1 + 4 + 0.25;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        const double ya = p.y[static_cast<std::size_t>(a)], yb = p.y[static_cast<std::size_t>(b)],
                     yc = p.y[static_cast<std::size_t>(c)];
        const double want = -((a == b) * yc + (a == c) * yb - (b == c) * ya) / n2;
        EXPECT_NEAR(D.C11(a, b, c), want, 1e-14);
      }
    }
  }
  EXPECT_LE(max_abs(D.L00), 1e-15);
  EXPECT_LE(max_abs(D.C01), 1e-15);
}

TEST(MetricalConnection, ChartMetricReducesToLeviCivita) {
  const auto M = sphere_chart(3);
  for (const auto& p : fixtures::points(3, 10, 14)) {
    const auto D = cartan_metrical_connection(M, p);
    EXPECT_LE(max_abs(D.C01), 1e-11);
    EXPECT_LE(max_abs(D.L00 - fd_christoffel(M, p)), 1e-10);
  }
}

TEST(MetricalConnection, MetricityOnBuiltinMetrics) {
  for (const auto& M : fixtures::builtin_metrics()) {
    for (const auto& p : fixtures::points(M.n, 20, 15)) {
      const auto r = metricity(cartan_fields(M, p));
      EXPECT_LE(r.g_h, 1e-9) << M.label;
      EXPECT_LE(r.g_v, 1e-9) << M.label;
      EXPECT_LE(r.h_h, 1e-9) << M.label;
      EXPECT_LE(r.h_v, 1e-9) << M.label;
    }
  }
}

TEST(MetricalConnection, Homogeneity) {
  for (const auto& M : fixtures::builtin_metrics()) {
    for (const auto& p : fixtures::points(M.n, 5, 16)) {
      const auto D = cartan_metrical_connection(M, p);
      for (double lam : {0.5, 2.0, 3.0}) {
        const auto D2 = cartan_metrical_connection(M, scale_y(p, lam));
        EXPECT_LE(rel(D2.L00, D.L00), 1e-10);
        EXPECT_LE(rel(D2.C01, scaled(D.C01, 1 / lam)), 1e-10);
      }
    }
  }
}

TEST(CovariantDerivative, KroneckerScalarAndErrors) {
  const auto f = cartan_fields(fixtures::randers3(), {{0.5, 0.6, 0.7}, {1.0, 0.5, -0.8}});
  JetTensor kron = zeros({3, 3}, 6, 3);
  for (int a = 0; a < 3; ++a) kron(a, a) += 1.0;
  for (auto t : {IndexType::H, IndexType::V}) {
    for (auto dir : {Direction::H, Direction::V}) {
      EXPECT_LE(max_abs(values(covariant_derivative(f, kron, {up(t), down(t)}, dir))), 1e-14);
    }
  }
  JetTensor s(std::vector<int>{}, f.norm_sq);
  const Array ds = values(covariant_derivative(f, s, {}, Direction::V));
  for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(ds(c), vdot(f, f.norm_sq, c).value());
  EXPECT_THROW(covariant_derivative(f, kron, {up(IndexType::H)}, Direction::H), VarianceMismatch);
}
