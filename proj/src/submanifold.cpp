#include "finslift/submanifold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "finslift/errors.hpp"

namespace finslift {

namespace {

constexpr int kImmersionOrder = kFieldOrder + 1;
constexpr int kPullOrder = 3;
constexpr double kPivotGap = 1e-9;

Immersion make(int m, int n, std::string kind, std::function<std::vector<Jet>(JetSpan)> x) {
  if (!(1 < m && m < n)) throw std::invalid_argument("immersion needs 1 < m < n");
  return {m, n, std::move(kind), std::move(x)};
}

}  // namespace

Immersion plane_immersion(int m, int n) {
  return make(m, n, "plane", [m, n](JetSpan u) {
    std::vector<Jet> x(u.begin(), u.end());
    for (int a = m; a < n; ++a) x.push_back(u[0] * 0.0);
    return x;
  });
}

Immersion linear_immersion(std::vector<double> x0, Array A) {
  const int n = static_cast<int>(x0.size());
  if (A.rank() != 2 || A.dim(0) != n) throw std::invalid_argument("linear immersion: A must be n x m");
  const int m = A.dim(1);
  return make(m, n, "linear", [x0, A, m, n](JetSpan u) {
    std::vector<Jet> x;
    for (int a = 0; a < n; ++a) {
      Jet s = u[0] * 0.0 + x0[static_cast<std::size_t>(a)];
      for (int al = 0; al < m; ++al) {
        if (A(a, al) != 0.0) s += A(a, al) * u[static_cast<std::size_t>(al)];
      }
      x.push_back(std::move(s));
    }
    return x;
  });
}

Immersion sphere_immersion(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  return make(2, 3, "sphere", [radius](JetSpan u) {
    const Jet s = sin(u[0]);
    return std::vector<Jet>{radius * s * cos(u[1]), radius * s * sin(u[1]), radius * cos(u[0])};
  });
}

Immersion cylinder_immersion(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
  return make(2, 3, "cylinder", [radius](JetSpan u) {
    return std::vector<Jet>{radius * cos(u[0]), radius * sin(u[0]), u[1]};
  });
}

Immersion graph_immersion() {
  return make(2, 3, "graph", [](JetSpan u) { return std::vector<Jet>{u[0], u[1], u[0] * u[1]}; });
}

Immersion custom_immersion(int m, int n, std::function<std::vector<Jet>(JetSpan u)> x) {
  return make(m, n, "custom", std::move(x));
}

namespace {

std::vector<Jet> eval_immersion(const Immersion& I, const std::vector<Jet>& u) {
  auto x = I.x(u);
  if (static_cast<int>(x.size()) != I.n) throw std::invalid_argument("immersion returned wrong dimension");
  return x;
}

void check_sub_point(const Immersion& I, const SubPoint& sp) {
  if (static_cast<int>(sp.u.size()) != I.m || static_cast<int>(sp.v.size()) != I.m) {
    throw std::invalid_argument("sub-point dimension does not match immersion");
  }
}

void check_rank(const Array& B) {
  Eigen::MatrixXd b(B.dim(0), B.dim(1));
  for (int a = 0; a < B.dim(0); ++a) {
    for (int al = 0; al < B.dim(1); ++al) b(a, al) = B(a, al);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  lu.setThreshold(1e-10);
  if (lu.rank() < B.dim(1)) throw RankDeficiency("immersion differential has rank below m");
}

}  // namespace

AmbientPoint lift_point(const Immersion& I, const SubPoint& sp) {
  check_sub_point(I, sp);
  std::vector<Jet> u;
  for (int al = 0; al < I.m; ++al) u.push_back(Jet::variable(I.m, 1, al, sp.u[static_cast<std::size_t>(al)]));
  const auto x = eval_immersion(I, u);
  Array B({I.n, I.m});
  AmbientPoint p;
  for (int a = 0; a < I.n; ++a) {
    p.x.push_back(x[static_cast<std::size_t>(a)].value());
    double y = 0;
    for (int al = 0; al < I.m; ++al) {
      B(a, al) = x[static_cast<std::size_t>(a)].partial(al);
      y += B(a, al) * sp.v[static_cast<std::size_t>(al)];
    }
    p.y.push_back(y);
  }
  check_rank(B);
  return p;
}

Jet sub_delta(const JetTensor& Nsub, int m, const Jet& f, int delta) {
  Jet r = f.derivative(delta);
  for (int g = 0; g < m; ++g) r -= Nsub(g, delta) * f.derivative(m + g);
  return r;
}

namespace {

// Sum of products with an explicit zero so empty ranges stay well defined.
Jet jzero(int nvars) { return Jet::constant(nvars, kMaxJetOrder, 0.0); }

Jet inner(const JetTensor& g, const std::vector<Jet>& a, const std::vector<Jet>& b) {
  Jet s = jzero(a[0].nvars());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      s += g(static_cast<int>(i), static_cast<int>(j)) * a[i] * b[j];
    }
  }
  return s;
}

// G^-1 A^T g for a frame block A (n x k).
JetTensor dual_of(const JetTensor& A, const JetTensor& g) {
  const JetTensor At = transpose(A);
  const JetTensor Atg = matmul(At, g);
  return matmul(inverse(matmul(Atg, A)), Atg);
}

}  // namespace

SubmanifoldFields submanifold_fields(const MetricModel& M, const Immersion& I, const SubPoint& sp,
                                     const JetTensor* normal_N) {
  check_sub_point(I, sp);
  if (M.n != I.n) throw std::invalid_argument("immersion target dimension does not match metric");
  const int m = I.m, n = I.n, k = n - m;
  const int nv = 2 * m;
  SubmanifoldFields s;
  s.m = m;
  s.n = n;
  s.p = M.p;

  std::vector<Jet> u, v;
  for (int al = 0; al < m; ++al) {
    u.push_back(Jet::variable(nv, kImmersionOrder, al, sp.u[static_cast<std::size_t>(al)]));
    v.push_back(Jet::variable(nv, kImmersionOrder, m + al, sp.v[static_cast<std::size_t>(al)]));
  }
  const auto x = eval_immersion(I, u);
  s.B = JetTensor({n, m});
  s.B2 = JetTensor({n, m, m});
  for (int a = 0; a < n; ++a) {
    for (int al = 0; al < m; ++al) {
      s.B(a, al) = x[static_cast<std::size_t>(a)].derivative(al);
      for (int be = 0; be < m; ++be) s.B2(a, al, be) = s.B(a, al).derivative(be);
    }
  }
  check_rank(values(s.B));
  std::vector<Jet> y;
  for (int a = 0; a < n; ++a) {
    Jet ya = jzero(nv);
    for (int al = 0; al < m; ++al) ya += s.B(a, al) * v[static_cast<std::size_t>(al)];
    y.push_back(std::move(ya));
  }
  for (int a = 0; a < n; ++a) {
    s.lifted.x.push_back(x[static_cast<std::size_t>(a)].value());
    s.lifted.y.push_back(y[static_cast<std::size_t>(a)].value());
  }

  s.ambient = cartan_fields(M, s.lifted, kFieldOrder);
  std::vector<Jet> disp(x.begin(), x.end());
  disp.insert(disp.end(), y.begin(), y.end());
  const Composer pull(disp, kPullOrder);
  auto pulled = [&](const JetTensor& t) { return t.map([&](const Jet& j) { return pull(j); }); };
  s.g = pulled(s.ambient.g);
  s.N = pulled(s.ambient.N);
  s.L00 = pulled(s.ambient.L00);
  s.L10 = pulled(s.ambient.L10);
  s.C01 = pulled(s.ambient.C01);
  s.C11 = pulled(s.ambient.C11);

  // tangent dual frame and induced metric
  s.g_sub = matmul(matmul(transpose(s.B), s.g), s.B);
  s.Bdual = matmul(inverse(s.g_sub), matmul(transpose(s.B), s.g));
  s.norm_sq = jzero(nv);
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      s.norm_sq += s.g_sub(al, be) * v[static_cast<std::size_t>(al)] * v[static_cast<std::size_t>(be)];
    }
  }
  if (!(s.norm_sq.value() >= kEpsNull)) throw NullSection("sub-point too close to the null section");
  const Jet lift_scale = (M.p * M.p) * reciprocal(s.norm_sq);
  s.h_sub = s.g_sub.map([&](const Jet& j) { return lift_scale * j; });

  // normal frame: g-Gram-Schmidt on the rejections of the coordinate vectors
  const JetTensor P = matmul(s.B, s.Bdual);
  std::vector<std::vector<Jet>> rej;
  std::vector<double> norms;
  for (int c = 0; c < n; ++c) {
    std::vector<Jet> r;
    for (int a = 0; a < n; ++a) r.push_back((a == c ? 1.0 : 0.0) - P(a, c));
    norms.push_back(inner(s.g, r, r).value());
    rej.push_back(std::move(r));
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return norms[static_cast<std::size_t>(i)] > norms[static_cast<std::size_t>(j)];
  });
  const double top = norms[static_cast<std::size_t>(order[0])];
  // a near tie at the cutoff means the pivot set flips inside any neighbourhood
  if (k < n) {
    const double gap = norms[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])] -
                       norms[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    if (gap <= kPivotGap * top) throw FrameSmoothness("normal frame pivots are not locally stable");
  }
  s.Bbar = JetTensor({n, k});
  std::vector<std::vector<Jet>> basis;
  for (int q = 0; q < k; ++q) {
    const int piv = order[static_cast<std::size_t>(q)];
    s.normal_pivots.push_back(piv);
    std::vector<Jet> w = rej[static_cast<std::size_t>(piv)];
    for (const auto& e : basis) {
      const Jet c = inner(s.g, e, w);
      for (int a = 0; a < n; ++a) w[static_cast<std::size_t>(a)] -= c * e[static_cast<std::size_t>(a)];
    }
    const Jet nn = inner(s.g, w, w);
    if (!(nn.value() > 1e-12 * std::max(1.0, top))) {
      throw FrameSmoothness("normal frame completion is degenerate at this point");
    }
    const Jet inv_len = pow(nn, -0.5);
    for (auto& c : w) c = c * inv_len;
    for (int a = 0; a < n; ++a) s.Bbar(a, q) = w[static_cast<std::size_t>(a)];
    basis.push_back(std::move(w));
  }
  s.Bbardual = dual_of(s.Bbar, s.g);

  // induced nonlinear connection and K
  s.B0 = JetTensor({n, m});
  JetTensor Q({n, m});
  for (int a = 0; a < n; ++a) {
    for (int be = 0; be < m; ++be) {
      Jet b0 = jzero(nv);
      for (int al = 0; al < m; ++al) b0 += s.B2(a, al, be) * v[static_cast<std::size_t>(al)];
      Jet q = b0;
      for (int b = 0; b < n; ++b) q += s.N(a, b) * s.B(b, be);
      s.B0(a, be) = std::move(b0);
      Q(a, be) = std::move(q);
    }
  }
  const JetTensor Nsub = matmul(s.Bdual, Q);
  s.K = matmul(s.Bbardual, Q);

  // coupling
  const JetTensor BK = matmul(s.Bbar, s.K);  // [d][delta]
  s.cL00 = JetTensor({n, n, m});
  s.cL10 = JetTensor({n, n, m});
  s.cC01 = JetTensor({n, n, m});
  s.cC11 = JetTensor({n, n, m});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int de = 0; de < m; ++de) {
        Jet l00 = jzero(nv), l10 = jzero(nv), c01 = jzero(nv), c11 = jzero(nv);
        for (int d = 0; d < n; ++d) {
          l00 += s.L00(a, b, d) * s.B(d, de) + s.C01(a, b, d) * BK(d, de);
          l10 += s.L10(a, b, d) * s.B(d, de) + s.C11(a, b, d) * BK(d, de);
          c01 += s.C01(a, b, d) * s.B(d, de);
          c11 += s.C11(a, b, d) * s.B(d, de);
        }
        s.cL00(a, b, de) = std::move(l00);
        s.cL10(a, b, de) = std::move(l10);
        s.cC01(a, b, de) = std::move(c01);
        s.cC11(a, b, de) = std::move(c11);
      }
    }
  }

  // tangent connection
  s.tangent.dim = m;
  s.tangent.N = Nsub;
  s.tangent.L00 = JetTensor({m, m, m});
  s.tangent.L10 = JetTensor({m, m, m});
  s.tangent.C01 = JetTensor({m, m, m});
  s.tangent.C11 = JetTensor({m, m, m});
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      for (int de = 0; de < m; ++de) {
        Jet l00 = jzero(nv), l10 = jzero(nv), c01 = jzero(nv), c11 = jzero(nv);
        for (int d = 0; d < n; ++d) {
          Jet t00 = s.B2(d, be, de), t10 = s.B2(d, be, de), t01 = jzero(nv), t11 = jzero(nv);
          for (int f = 0; f < n; ++f) {
            t00 += s.B(f, be) * s.cL00(d, f, de);
            t10 += s.B(f, be) * s.cL10(d, f, de);
            t01 += s.B(f, be) * s.cC01(d, f, de);
            t11 += s.B(f, be) * s.cC11(d, f, de);
          }
          l00 += s.Bdual(al, d) * t00;
          l10 += s.Bdual(al, d) * t10;
          c01 += s.Bdual(al, d) * t01;
          c11 += s.Bdual(al, d) * t11;
        }
        s.tangent.L00(al, be, de) = std::move(l00);
        s.tangent.L10(al, be, de) = std::move(l10);
        s.tangent.C01(al, be, de) = std::move(c01);
        s.tangent.C11(al, be, de) = std::move(c11);
      }
    }
  }

  // normal connection
  const JetTensor& Nn = normal_N ? *normal_N : Nsub;
  s.nL00 = JetTensor({k, k, m});
  s.nL10 = JetTensor({k, k, m});
  s.nC01 = JetTensor({k, k, m});
  s.nC11 = JetTensor({k, k, m});
  for (int ab = 0; ab < k; ++ab) {
    for (int bb = 0; bb < k; ++bb) {
      for (int de = 0; de < m; ++de) {
        Jet l00 = jzero(nv), l10 = jzero(nv), c01 = jzero(nv), c11 = jzero(nv);
        for (int d = 0; d < n; ++d) {
          const Jet dh = sub_delta(Nn, m, s.Bbar(d, bb), de);
          const Jet dv = s.Bbar(d, bb).derivative(m + de);
          Jet t00 = dh, t10 = dh, t01 = dv, t11 = dv;
          for (int f = 0; f < n; ++f) {
            t00 += s.Bbar(f, bb) * s.cL00(d, f, de);
            t10 += s.Bbar(f, bb) * s.cL10(d, f, de);
            t01 += s.Bbar(f, bb) * s.cC01(d, f, de);
            t11 += s.Bbar(f, bb) * s.cC11(d, f, de);
          }
          l00 += s.Bbardual(ab, d) * t00;
          l10 += s.Bbardual(ab, d) * t10;
          c01 += s.Bbardual(ab, d) * t01;
          c11 += s.Bbardual(ab, d) * t11;
        }
        s.nL00(ab, bb, de) = std::move(l00);
        s.nL10(ab, bb, de) = std::move(l10);
        s.nC01(ab, bb, de) = std::move(c01);
        s.nC11(ab, bb, de) = std::move(c11);
      }
    }
  }
  return s;
}

FrameAtPoint build_frame(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  const auto s = submanifold_fields(M, I, sp);
  return {values(s.B), values(s.B2), values(s.Bbar), values(s.Bdual), values(s.Bbardual), values(s.K)};
}

Array induced_metric(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  return values(submanifold_fields(M, I, sp).g_sub);
}

Array induced_nonlinear_connection(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  return values(submanifold_fields(M, I, sp).tangent.N);
}

CouplingAtPoint coupling_coefficients(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  const auto s = submanifold_fields(M, I, sp);
  return {values(s.cL00), values(s.cL10), values(s.cC01), values(s.cC11)};
}

DConnAtPoint tangent_connection(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  const auto s = submanifold_fields(M, I, sp);
  return {values(s.tangent.L00), values(s.tangent.L10), values(s.tangent.C01), values(s.tangent.C11)};
}

DConnAtPoint normal_connection(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  const auto s = submanifold_fields(M, I, sp);
  return {values(s.nL00), values(s.nL10), values(s.nC01), values(s.nC11)};
}

namespace {

const JetTensor& mixed_block(const SubmanifoldFields& s, Space sp, Direction dir, IndexType t) {
  const bool h = dir == Direction::H;
  const bool ht = t == IndexType::H;
  switch (sp) {
    case Space::Ambient:
      return h ? (ht ? s.cL00 : s.cL10) : (ht ? s.cC01 : s.cC11);
    case Space::Tangent:
      return h ? (ht ? s.tangent.L00 : s.tangent.L10) : (ht ? s.tangent.C01 : s.tangent.C11);
    case Space::Normal:
      break;
  }
  return h ? (ht ? s.nL00 : s.nL10) : (ht ? s.nC01 : s.nC11);
}

int extent(const SubmanifoldFields& s, Space sp) {
  switch (sp) {
    case Space::Ambient:
      return s.n;
    case Space::Tangent:
      return s.m;
    case Space::Normal:
      break;
  }
  return s.n - s.m;
}

}  // namespace

JetTensor relative_covariant_derivative(const SubmanifoldFields& s, const JetTensor& field,
                                        const std::vector<MixedIndex>& spec, Direction dir) {
  if (static_cast<int>(spec.size()) != field.rank()) {
    throw VarianceMismatch("index specification does not match tensor rank");
  }
  for (int k = 0; k < field.rank(); ++k) {
    if (field.dim(k) != extent(s, spec[static_cast<std::size_t>(k)].space)) {
      throw VarianceMismatch("tensor extent does not match its index space");
    }
  }
  const int m = s.m;
  std::vector<int> shape = field.shape();
  shape.push_back(m);
  JetTensor out(shape);
  for (std::size_t q = 0; q < out.size(); ++q) {
    std::vector<int> idx = out.unravel(q);
    const int de = idx.back();
    idx.pop_back();
    const Jet& base = field.at(idx);
    Jet r = dir == Direction::H ? sub_delta(s.tangent.N, m, base, de) : base.derivative(m + de);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const MixedIndex& mi = spec[k];
      const JetTensor& G = mixed_block(s, mi.space, dir, mi.type);
      std::vector<int> j = idx;
      for (int t = 0; t < field.dim(static_cast<int>(k)); ++t) {
        j[k] = t;
        if (mi.upper) {
          r += G(idx[k], t, de) * field.at(j);
        } else {
          r -= G(t, idx[k], de) * field.at(j);
        }
      }
    }
    out.data()[q] = std::move(r);
  }
  return out;
}

DualityResiduals duality(const FrameAtPoint& f) {
  const int n = f.B.dim(0), m = f.B.dim(1), k = n - m;
  DualityResiduals r{0, 0, 0, 0, 0};
  auto upd = [](double& acc, double v) { acc = std::max(acc, std::abs(v)); };
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      double s = 0;
      for (int a = 0; a < n; ++a) s += f.B(a, be) * f.Bdual(al, a);
      upd(r.tangent_tangent, s - (al == be ? 1.0 : 0.0));
    }
    for (int bb = 0; bb < k; ++bb) {
      double s = 0;
      for (int a = 0; a < n; ++a) s += f.Bdual(al, a) * f.Bbar(a, bb);
      upd(r.normal_tangent, s);
    }
  }
  for (int ab = 0; ab < k; ++ab) {
    for (int be = 0; be < m; ++be) {
      double s = 0;
      for (int a = 0; a < n; ++a) s += f.B(a, be) * f.Bbardual(ab, a);
      upd(r.tangent_normal, s);
    }
    for (int bb = 0; bb < k; ++bb) {
      double s = 0;
      for (int a = 0; a < n; ++a) s += f.Bbardual(ab, a) * f.Bbar(a, bb);
      upd(r.normal_normal, s - (ab == bb ? 1.0 : 0.0));
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0;
      for (int al = 0; al < m; ++al) s += f.B(a, al) * f.Bdual(al, b);
      for (int ab = 0; ab < k; ++ab) s += f.Bbar(a, ab) * f.Bbardual(ab, b);
      upd(r.completeness, s - (a == b ? 1.0 : 0.0));
    }
  }
  return r;
}

}  // namespace finslift
