#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finslift/errors.hpp"
#include "finslift/submanifold.hpp"
#include "fixtures.hpp"

using namespace finslift;

namespace {

struct Case {
  MetricModel M;
  Immersion I;
};

// Ambient/immersion pairs used by the sweeps; u stays in [0.4, 1.2]^m so every
// chart and sphere parametrisation is regular.
std::vector<Case> cases() {
  return {{euclidean(3), plane_immersion(2, 3)},
          {euclidean(3), sphere_immersion(1.0)},
          {euclidean(3), cylinder_immersion(0.7)},
          {fixtures::randers3(), graph_immersion()},
          {fixtures::randers3(), plane_immersion(2, 3)},
          {sphere_chart(3), graph_immersion()}};
}

std::vector<SubPoint> sub_points(int m, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uu(0.4, 1.2), uv(0.25, 2.0), coin(0.0, 1.0);
  std::vector<SubPoint> out;
  for (int k = 0; k < count; ++k) {
    SubPoint s;
    for (int i = 0; i < m; ++i) {
      s.u.push_back(uu(rng));
      const double v = uv(rng);
      s.v.push_back(coin(rng) < 0.5 ? -v : v);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Submanifold, PlaneInEuclideanSpaceIsFlat) {
  const SubPoint sp{{0.5, 0.9}, {1.1, -0.4}};
  const auto s = submanifold_fields(euclidean(3), plane_immersion(2, 3), sp);
  const Array gs = values(s.g_sub);
  EXPECT_NEAR(gs(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(gs(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(gs(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(values(s.Bbar)(2, 0), 1.0, 1e-15);
  EXPECT_EQ(s.normal_pivots, std::vector<int>{2});
  for (const JetTensor* t : {&s.K, &s.tangent.N, &s.tangent.L00, &s.tangent.L10, &s.tangent.C01, &s.nL00,
                             &s.nL10, &s.nC01, &s.cL00, &s.cC01}) {
    EXPECT_LT(max_abs(values(*t)), 1e-14);
  }
  // the Euclidean Cartan tensor of h survives on the plane
  EXPECT_GT(max_abs(values(s.tangent.C11)), 0.1);
}

TEST(Submanifold, RoundSphereInducedGeometry) {
  const double r = 1.7;
  for (const auto& sp : sub_points(2, 8, 11)) {
    const auto s = submanifold_fields(euclidean(3), sphere_immersion(r), sp);
    const double u = sp.u[0], sn = std::sin(u), cs = std::cos(u);
    const Array gs = values(s.g_sub);
    EXPECT_NEAR(gs(0, 0), r * r, 1e-12);
    EXPECT_NEAR(gs(1, 1), r * r * sn * sn, 1e-12);
    EXPECT_NEAR(gs(0, 1), 0.0, 1e-12);

    Array chr({2, 2, 2}, 0.0);
    chr(0, 1, 1) = -sn * cs;
    chr(1, 0, 1) = chr(1, 1, 0) = cs / sn;
    for (const JetTensor* t : {&s.tangent.L00, &s.tangent.L10}) {
      EXPECT_LT(max_abs(values(*t) - chr), 1e-8);
    }
    EXPECT_LT(max_abs(values(s.tangent.C01)), 1e-12);
    EXPECT_LT(max_abs(values(s.nL00)), 1e-12);
    EXPECT_LT(max_abs(values(s.nC01)), 1e-12);

    // outward unit normal; K = -(1/r) g(v, .)
    const Array Bb = values(s.Bbar);
    const double sgn = Bb(0, 0) * s.lifted.x[0] + Bb(1, 0) * s.lifted.x[1] + Bb(2, 0) * s.lifted.x[2] > 0 ? 1 : -1;
    const Array K = values(s.K);
    for (int b = 0; b < 2; ++b) {
      const double want = -sgn * (gs(0, b) * sp.v[0] + gs(1, b) * sp.v[1]) / r;
      EXPECT_NEAR(K(0, b), want, 1e-11);
    }
  }
}

TEST(Submanifold, CylinderNormalConnectionVanishes) {
  for (const auto& sp : sub_points(2, 6, 12)) {
    const auto s = submanifold_fields(euclidean(3), cylinder_immersion(0.7), sp);
    EXPECT_LT(max_abs(values(s.nL00)), 1e-12);
    EXPECT_LT(max_abs(values(s.nC01)), 1e-12);
    EXPECT_LT(max_abs(values(s.tangent.L00)), 1e-12);
    const Array gs = values(s.g_sub);
    EXPECT_NEAR(gs(0, 0), 0.49, 1e-13);
    EXPECT_NEAR(gs(1, 1), 1.0, 1e-13);
  }
}

TEST(Submanifold, DualityAndCompleteness) {
  for (const auto& c : cases()) {
    for (const auto& sp : sub_points(c.I.m, 10, 13)) {
      const auto d = duality(build_frame(c.M, c.I, sp));
      EXPECT_LT(d.tangent_tangent, 1e-11) << c.I.kind;
      EXPECT_LT(d.tangent_normal, 1e-11) << c.I.kind;
      EXPECT_LT(d.normal_tangent, 1e-11) << c.I.kind;
      EXPECT_LT(d.normal_normal, 1e-11) << c.I.kind;
      EXPECT_LT(d.completeness, 1e-11) << c.I.kind;
    }
  }
}

// delta y^a = B^a_b delta v^b + Bbar^a_c K^c_b du^b, with dx and dy taken by
// fourth-order differences of the lifted curve and N from the ambient space.
TEST(Submanifold, CobasisRestriction) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  for (const auto& c : cases()) {
    const int m = c.I.m, n = c.I.n, k = n - m;
    for (const auto& sp : sub_points(m, 20, 15)) {
      std::vector<double> du(static_cast<std::size_t>(m)), dv(du.size());
      for (int i = 0; i < m; ++i) {
        du[static_cast<std::size_t>(i)] = dir(rng);
        dv[static_cast<std::size_t>(i)] = dir(rng);
      }
      const double h = 1e-3;
      auto lift_at = [&](double t) {
        SubPoint q = sp;
        for (int i = 0; i < m; ++i) {
          q.u[static_cast<std::size_t>(i)] += t * du[static_cast<std::size_t>(i)];
          q.v[static_cast<std::size_t>(i)] += t * dv[static_cast<std::size_t>(i)];
        }
        return lift_point(c.I, q);
      };
      const auto m2 = lift_at(-2 * h), m1 = lift_at(-h), p1 = lift_at(h), p2 = lift_at(2 * h);
      auto d = [&](auto get, int a) {
        return (get(m2, a) - 8 * get(m1, a) + 8 * get(p1, a) - get(p2, a)) / (12 * h);
      };
      auto gx = [](const AmbientPoint& p, int a) { return p.x[static_cast<std::size_t>(a)]; };
      auto gy = [](const AmbientPoint& p, int a) { return p.y[static_cast<std::size_t>(a)]; };

      const AmbientPoint lifted = lift_point(c.I, sp);
      const Array N = cartan_nonlinear_connection(c.M, lifted).N;
      const Array Ns = induced_nonlinear_connection(c.M, c.I, sp);
      const FrameAtPoint f = build_frame(c.M, c.I, sp);
      for (int a = 0; a < n; ++a) {
        double lhs = d(gy, a);
        for (int b = 0; b < n; ++b) lhs += N(a, b) * d(gx, b);
        double rhs = 0;
        for (int al = 0; al < m; ++al) {
          double dva = dv[static_cast<std::size_t>(al)];
          for (int be = 0; be < m; ++be) dva += Ns(al, be) * du[static_cast<std::size_t>(be)];
          rhs += f.B(a, al) * dva;
        }
        for (int ab = 0; ab < k; ++ab) {
          for (int be = 0; be < m; ++be) rhs += f.Bbar(a, ab) * f.K(ab, be) * du[static_cast<std::size_t>(be)];
        }
        EXPECT_NEAR(lhs, rhs, 1e-9) << c.I.kind << " a=" << a;
      }
    }
  }
}

TEST(Submanifold, InducedMetricMatchesIntrinsicFundamentalTensor) {
  for (const auto& c : cases()) {
    const int m = c.I.m;
    for (const auto& sp : sub_points(m, 5, 16)) {
      // second differences of F^2(x(u), B(u) v) in v
      auto f2 = [&](const std::vector<double>& v) {
        return norm_sq(c.M, lift_point(c.I, {sp.u, v}));
      };
      const double h = 1e-3;
      const Array gs = induced_metric(c.M, c.I, sp);
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          auto at = [&](double sa, double sb) {
            auto v = sp.v;
            v[static_cast<std::size_t>(a)] += sa;
            v[static_cast<std::size_t>(b)] += sb;
            return f2(v);
          };
          const double dd = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
          EXPECT_NEAR(gs(a, b), 0.5 * dd, 1e-6) << c.I.kind;
        }
      }
    }
  }
}

TEST(Submanifold, InducedConnectionsAreMetrical) {
  const std::vector<MixedIndex> tH{{Space::Tangent, false, IndexType::H}, {Space::Tangent, false, IndexType::H}};
  const std::vector<MixedIndex> tV{{Space::Tangent, false, IndexType::V}, {Space::Tangent, false, IndexType::V}};
  const std::vector<MixedIndex> nH{{Space::Normal, false, IndexType::H}, {Space::Normal, false, IndexType::H}};
  const std::vector<MixedIndex> nV{{Space::Normal, false, IndexType::V}, {Space::Normal, false, IndexType::V}};
  const std::vector<MixedIndex> aH{{Space::Ambient, false, IndexType::H}, {Space::Ambient, false, IndexType::H}};
  for (const auto& c : cases()) {
    for (const auto& sp : sub_points(c.I.m, 4, 17)) {
      const auto s = submanifold_fields(c.M, c.I, sp);
      const JetTensor gn = matmul(matmul(transpose(s.Bbar), s.g), s.Bbar);
      const JetTensor h = s.g.map([&](const Jet& j) { return (s.p * s.p) * reciprocal(s.norm_sq) * j; });
      const JetTensor hn = matmul(matmul(transpose(s.Bbar), h), s.Bbar);
      for (Direction dir : {Direction::H, Direction::V}) {
        EXPECT_LT(max_abs(values(relative_covariant_derivative(s, s.g_sub, tH, dir))), 1e-11) << c.I.kind;
        EXPECT_LT(max_abs(values(relative_covariant_derivative(s, s.h_sub, tV, dir))), 1e-11) << c.I.kind;
        EXPECT_LT(max_abs(values(relative_covariant_derivative(s, s.g, aH, dir))), 1e-11) << c.I.kind;
        if (c.I.m < c.I.n) {
          EXPECT_LT(max_abs(values(relative_covariant_derivative(s, gn, nH, dir))), 1e-11) << c.I.kind;
          EXPECT_LT(max_abs(values(relative_covariant_derivative(s, hn, nV, dir))), 1e-11) << c.I.kind;
        }
      }
    }
  }
}

// The covariant derivative of the frame is purely normal.
TEST(Submanifold, FrameDerivativeIsNormal) {
  for (const auto& c : cases()) {
    for (const auto& sp : sub_points(c.I.m, 4, 18)) {
      const auto s = submanifold_fields(c.M, c.I, sp);
      for (IndexType t : {IndexType::H, IndexType::V}) {
        for (Direction dir : {Direction::H, Direction::V}) {
          const JetTensor dB = relative_covariant_derivative(
              s, s.B, {{Space::Ambient, true, t}, {Space::Tangent, false, t}}, dir);
          const Array Bd = values(s.Bdual), D = values(dB);
          double worst = 0;
          for (int al = 0; al < c.I.m; ++al) {
            for (int be = 0; be < c.I.m; ++be) {
              for (int de = 0; de < c.I.m; ++de) {
                double acc = 0;
                for (int a = 0; a < c.I.n; ++a) acc += Bd(al, a) * D(a, be, de);
                worst = std::max(worst, std::abs(acc));
              }
            }
          }
          EXPECT_LT(worst, 1e-11) << c.I.kind;
          if (c.I.m < c.I.n) {
            const JetTensor dBb = relative_covariant_derivative(
                s, s.Bbar, {{Space::Ambient, true, t}, {Space::Normal, false, t}}, dir);
            const Array Bbd = values(s.Bbardual), E = values(dBb);
            for (int ab = 0; ab < c.I.n - c.I.m; ++ab) {
              for (int bb = 0; bb < c.I.n - c.I.m; ++bb) {
                for (int de = 0; de < c.I.m; ++de) {
                  double acc = 0;
                  for (int a = 0; a < c.I.n; ++a) acc += Bbd(ab, a) * E(a, bb, de);
                  EXPECT_LT(std::abs(acc), 1e-11) << c.I.kind;
                }
              }
            }
          }
        }
      }
    }
  }
}

TEST(Submanifold, InducedConnectionIsHomogeneous) {
  const double lam = 1.9;
  for (const auto& c : cases()) {
    for (const auto& sp : sub_points(c.I.m, 3, 19)) {
      SubPoint sq = sp;
      for (auto& v : sq.v) v *= lam;
      const Array a = induced_nonlinear_connection(c.M, c.I, sp);
      const Array b = induced_nonlinear_connection(c.M, c.I, sq);
      EXPECT_LT(max_abs(b - a.map([&](double z) { return lam * z; })), 1e-11) << c.I.kind;
    }
  }
}

TEST(Submanifold, Errors) {
  const SubPoint sp{{0.5, 0.7}, {1.0, 0.3}};
  Array A({3, 2}, 0.0);
  A(0, 0) = A(0, 1) = 1.0;
  EXPECT_THROW(submanifold_fields(euclidean(3), linear_immersion({0, 0, 0}, A), sp), RankDeficiency);
  EXPECT_THROW(submanifold_fields(euclidean(3), plane_immersion(2, 3), {{0.5, 0.7}, {0.0, 0.0}}), NullSection);
  EXPECT_THROW(submanifold_fields(euclidean(4), plane_immersion(2, 3), sp), std::invalid_argument);
  // a diagonal tangent direction ties two rejection norms at the cutoff
  Array L({4, 2}, 0.0);
  L(0, 0) = L(1, 1) = L(2, 1) = 1.0;
  EXPECT_THROW(submanifold_fields(euclidean(4), linear_immersion({0, 0, 0, 0}, L), sp), FrameSmoothness);
  Array C({3, 1}, 0.0);
  C(0, 0) = 1.0;
  EXPECT_THROW(submanifold_fields(euclidean(3), linear_immersion({0, 0, 0}, C), {{0.3}, {1.0}}),
               std::invalid_argument);
  const auto s = submanifold_fields(euclidean(3), plane_immersion(2, 3), sp);
  EXPECT_THROW(relative_covariant_derivative(s, s.g_sub, {{Space::Ambient, false, IndexType::H},
                                                          {Space::Ambient, false, IndexType::H}},
                                             Direction::H),
               VarianceMismatch);
}
