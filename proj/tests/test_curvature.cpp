#include <gtest/gtest.h>

#include <cmath>

#include "finslift/ambient.hpp"
#include "fixtures.hpp"

using namespace finslift;

namespace {

double rel(const Array& a, const Array& b) {
  return max_abs(a - b) / (1 + std::max(max_abs(a), max_abs(b)));
}

double lowered_y(const Array& g, const std::vector<double>& y, int c) {
  double s = 0;
  for (int d = 0; d < g.dim(0); ++d) s += g(c, d) * y[static_cast<std::size_t>(d)];
  return s;
}

// Polynomial-trigonometric test function on the slit bundle.
Jet test_function(const CartanFields& f, const AmbientPoint& p, int which) {
  const int n = f.dim;
  std::vector<Jet> x, y;
  for (int i = 0; i < n; ++i) {
    x.push_back(Jet::variable(2 * n, 4, i, p.x[static_cast<std::size_t>(i)]));
    y.push_back(Jet::variable(2 * n, 4, n + i, p.y[static_cast<std::size_t>(i)]));
  }
  Jet s = sin(x[0] * (1.0 + which)) * y[static_cast<std::size_t>(n - 1)];
  for (int i = 0; i < n; ++i) {
    s += (0.3 * which + i) * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)] * y[0];
  }
  return s + exp(0.2 * y[1] * x[static_cast<std::size_t>(n - 1)]);
}

}  // namespace

TEST(Brackets, FlatAndSphere) {
  const auto [R0, B0] = bracket_coefficients(euclidean(3), {{0.1, 0.2, 0.3}, {1, 1, 1}});
  EXPECT_LE(max_abs(R0), 1e-15);
  EXPECT_LE(max_abs(B0), 1e-15);
  // unit sphere: Riem^a_bcd = d^a_c g_bd - d^a_d g_bc, and R^a_bc = y^d Riem^a_dcb
  const auto M = sphere_chart(3);
  for (const auto& p : fixtures::points(3, 10, 40)) {
    const auto [R, B] = bracket_coefficients(M, p);
    const Array g = fundamental_tensor(M, p);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          const double want = (a == c) * lowered_y(g, p.y, b) - (a == b) * lowered_y(g, p.y, c);
          EXPECT_NEAR(R(a, b, c), want, 1e-10);
          EXPECT_NEAR(R(a, b, c), -R(a, c, b), 1e-11);
        }
      }
    }
  }
}

// [delta_b, delta_c] f = R^a_bc dot_a f and [delta_b, dot_c] f = B^a_bc dot_a f
// on five test functions.
TEST(Brackets, CommutatorOnTestFunctions) {
  const auto M = fixtures::randers3();
  for (const auto& p : fixtures::points(3, 5, 41)) {
    const auto f = cartan_fields(M, p);
    const auto br = bracket_fields(f);
    for (int which = 0; which < 5; ++which) {
      const Jet t = test_function(f, p, which);
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          const double hh = delta(f, delta(f, t, c), b).value() - delta(f, delta(f, t, b), c).value();
          const double hv = delta(f, vdot(f, t, c), b).value() - vdot(f, delta(f, t, b), c).value();
          double rr = 0, bb = 0;
          for (int a = 0; a < 3; ++a) {
            rr += br.R(a, b, c).value() * vdot(f, t, a).value();
            bb += br.B(a, b, c).value() * vdot(f, t, a).value();
          }
          EXPECT_NEAR(hh, rr, 1e-10 * (1 + std::abs(rr)));
          EXPECT_NEAR(hv, bb, 1e-10 * (1 + std::abs(bb)));
        }
      }
    }
  }
}

TEST(Torsion, StructuralBlocks) {
  for (const auto& M : fixtures::builtin_metrics()) {
    for (const auto& p : fixtures::points(M.n, 5, 42)) {
      const auto f = cartan_fields(M, p);
      const auto t = torsion(f);
      EXPECT_LE(max_abs(t.T00), 1e-12);
      EXPECT_LE(max_abs(t.S11), 1e-12);
      EXPECT_EQ(max_abs(t.P10 - values(f.C01)), 0.0);
      if (M.kind == MetricModel::Kind::RiemannianChart) EXPECT_LE(max_abs(t.P10), 1e-11);
      if (M.kind == MetricModel::Kind::Euclidean) {
        EXPECT_LE(max_abs(t.R01), 1e-15);
        const Array L10 = values(f.L10);
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            for (int c = 0; c < 3; ++c) EXPECT_NEAR(t.P11(a, b, c), -L10(a, c, b), 1e-15);
          }
        }
      }
    }
  }
}

TEST(Curvature, SphereChartHasUnitSectionalCurvature) {
  const auto M = sphere_chart(3);
  for (const auto& p : fixtures::points(3, 10, 43)) {
    const auto k = curvature_tensors(M, p);
    const Array g = fundamental_tensor(M, p);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          for (int d = 0; d < 3; ++d) {
            EXPECT_NEAR(k.RH(a, b, c, d), (a == d) * g(b, c) - (a == c) * g(b, d), 1e-7);
          }
        }
      }
    }
    EXPECT_LE(max_abs(k.PH), 1e-10);
    EXPECT_LE(max_abs(k.SH), 1e-10);
  }
}

TEST(Curvature, FlatCaseVanishes) {
  const auto M = euclidean(3);
  for (const auto& p : fixtures::points(3, 5, 44)) {
    const auto f = cartan_fields(M, p);
    const auto k = curvature(f);
    EXPECT_LE(max_abs(k.RH), 1e-11);
    EXPECT_LE(max_abs(k.PH), 1e-11);
    EXPECT_LE(max_abs(k.SH), 1e-11);
    EXPECT_LE(max_abs(values(f.N)), 1e-11);
  }
}

TEST(Curvature, FormulasAgreeWithCommutatorOracle) {
  for (const auto& M : fixtures::builtin_metrics()) {
    for (const auto& p : fixtures::points(M.n, 5, 45)) {
      const auto f = cartan_fields(M, p);
      const auto k = curvature(f);
      for (auto b : kAllBlocks) {
        EXPECT_LE(rel(select(k, b), commutator_curvature(f, b)), 1e-6) << M.label << " " << block_name(b);
      }
    }
  }
}

TEST(Curvature, Antisymmetry) {
  for (const auto& M : fixtures::builtin_metrics()) {
    for (const auto& p : fixtures::points(M.n, 5, 46)) {
      const auto k = curvature_tensors(M, p);
      for (auto blk : {CurvatureBlock::RH, CurvatureBlock::SH, CurvatureBlock::RV, CurvatureBlock::SV}) {
        const Array& A = select(k, blk);
        for (std::size_t q = 0; q < A.size(); ++q) {
          const auto i = A.unravel(q);
          EXPECT_NEAR(A(i[0], i[1], i[2], i[3]), -A(i[0], i[1], i[3], i[2]), 1e-9);
        }
      }
    }
  }
}
