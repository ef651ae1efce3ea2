#include "finslift/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "finslift/errors.hpp"

namespace finslift {

namespace {

// Gamma^a_bc = 1/2 inv^ad (D_b m_dc + D_c m_bd - D_d m_bc), D(i, j, k) = D_k m_ij.
JetTensor christoffel_form(const JetTensor& inv, const JetTensor& D) {
  const int n = inv.dim(0);
  JetTensor r({n, n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        Jet s;
        for (int d = 0; d < n; ++d) {
          Jet t = inv(a, d) * (D(d, c, b) + D(b, d, c) - D(b, c, d));
          if (s.empty()) s = std::move(t); else s += t;
        }
        r(a, b, c) = 0.5 * s;
      }
    }
  }
  return r;
}

const JetTensor& block(const Connection& c, Direction dir, IndexType t) {
  if (dir == Direction::H) return t == IndexType::H ? c.L00 : c.L10;
  return t == IndexType::H ? c.C01 : c.C11;
}

}  // namespace

Jet vdot(const Connection& c, const Jet& f, int a) { return f.derivative(c.dim + a); }

Jet delta(const Connection& c, const Jet& f, int a) {
  Jet r = f.derivative(a);
  for (int b = 0; b < c.dim; ++b) r -= c.N(b, a) * f.derivative(c.dim + b);
  return r;
}

CartanFields cartan_fields(const Jet& F2, int dim, const std::vector<double>& y0, double p) {
  if (F2.nvars() != 2 * dim || static_cast<int>(y0.size()) != dim) {
    throw std::invalid_argument("fundamental function jet has wrong variable count");
  }
  if (F2.order() < 4) throw OrderOverflow("fundamental function jet needs order >= 4");
  const int n = dim;
  const int K = F2.order();
  CartanFields f;
  f.dim = n;
  f.p = p;

  f.g = JetTensor({n, n});
  std::vector<Jet> dF(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) dF[static_cast<std::size_t>(a)] = F2.derivative(n + a);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      f.g(a, b) = 0.5 * dF[static_cast<std::size_t>(a)].derivative(n + b);
      f.g(b, a) = f.g(a, b);
    }
  }
  f.g_inv = inverse(f.g);

  std::vector<Jet> ys;
  for (int a = 0; a < n; ++a) ys.push_back(Jet::variable(2 * n, K, n + a, y0[static_cast<std::size_t>(a)]));
  Jet ns = Jet::constant(2 * n, K, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) ns += f.g(a, b) * ys[static_cast<std::size_t>(a)] * ys[static_cast<std::size_t>(b)];
  }
  if (!(ns.value() >= kEpsNull)) throw NullSection("point too close to the null section");
  f.norm_sq = ns;
  const Jet scale = (p * p) * reciprocal(ns);
  f.h = f.g.map([&](const Jet& j) { return scale * j; });
  f.h_inv = f.g_inv.map([&](const Jet& j) { return ns * j / (p * p); });

  JetTensor dgx({n, n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) dgx(a, b, c) = f.g(a, b).derivative(c);
    }
  }
  f.gamma = christoffel_form(f.g_inv, dgx);

  f.G = JetTensor({n});
  for (int a = 0; a < n; ++a) {
    Jet s = Jet::constant(2 * n, K, 0.0);
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) s += f.gamma(a, b, c) * ys[static_cast<std::size_t>(b)] * ys[static_cast<std::size_t>(c)];
    }
    f.G(a) = 0.5 * s;
  }
  f.N = JetTensor({n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) f.N(a, b) = f.G(a).derivative(n + b);
  }

  JetTensor dg_h({n, n, n}), dh_h({n, n, n}), dg_v({n, n, n}), dh_v({n, n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        dg_h(a, b, c) = delta(f, f.g(a, b), c);
        dh_h(a, b, c) = delta(f, f.h(a, b), c);
        dg_v(a, b, c) = vdot(f, f.g(a, b), c);
        dh_v(a, b, c) = vdot(f, f.h(a, b), c);
      }
    }
  }
  f.L00 = christoffel_form(f.g_inv, dg_h);
  f.L10 = christoffel_form(f.h_inv, dh_h);
  f.C01 = christoffel_form(f.g_inv, dg_v);
  f.C11 = christoffel_form(f.h_inv, dh_v);
  return f;
}

CartanFields cartan_fields(const MetricModel& M, const AmbientPoint& pt, int order) {
  return cartan_fields(lift_f2(M, pt, order), M.n, pt.y, M.p);
}

JetTensor covariant_derivative(const Connection& c, const JetTensor& field,
                               const std::vector<IndexSpec>& spec, Direction dir) {
  const int n = c.dim;
  if (static_cast<int>(spec.size()) != field.rank()) {
    throw VarianceMismatch("index specification does not match tensor rank");
  }
  for (int k = 0; k < field.rank(); ++k) {
    if (field.dim(k) != n) throw VarianceMismatch("tensor extent does not match connection dimension");
  }
  std::vector<int> shape = field.shape();
  shape.push_back(n);
  JetTensor out(shape);
  for (std::size_t q = 0; q < out.size(); ++q) {
    std::vector<int> idx = out.unravel(q);
    const int cc = idx.back();
    idx.pop_back();
    const Jet& base = field.at(idx);
    Jet s = dir == Direction::H ? delta(c, base, cc) : vdot(c, base, cc);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const JetTensor& G = block(c, dir, spec[k].type);
      std::vector<int> j = idx;
      for (int t = 0; t < n; ++t) {
        j[k] = t;
        if (spec[k].upper) {
          s += G(idx[k], t, cc) * field.at(j);
        } else {
          s -= G(t, idx[k], cc) * field.at(j);
        }
      }
    }
    out.data()[q] = std::move(s);
  }
  return out;
}

Brackets bracket_fields(const Connection& c) {
  const int n = c.dim;
  Brackets r{JetTensor({n, n, n}), JetTensor({n, n, n})};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) {
        r.R(a, b, k) = delta(c, c.N(a, b), k) - delta(c, c.N(a, k), b);
        r.B(a, b, k) = vdot(c, c.N(a, b), k);
      }
    }
  }
  return r;
}

TorsionAtPoint torsion(const Connection& c) {
  const int n = c.dim;
  const Brackets br = bracket_fields(c);
  TorsionAtPoint t{Array({n, n, n}), Array({n, n, n}), Array({n, n, n}), Array({n, n, n}),
                   Array({n, n, n})};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) {
        t.T00(a, b, k) = c.L00(a, b, k).value() - c.L00(a, k, b).value();
        t.R01(a, b, k) = br.R(a, b, k).value();
        t.P10(a, b, k) = c.C01(a, b, k).value();
        t.P11(a, b, k) = br.B(a, b, k).value() - c.L10(a, k, b).value();
        t.S11(a, b, k) = c.C11(a, b, k).value() - c.C11(a, k, b).value();
      }
    }
  }
  return t;
}

namespace {

// delta_d A^a_bc - delta_c A^a_bd + A^f_bc A^a_fd - A^f_bd A^a_fc (+ C^a_bf R^f_cd),
// with `vertical` replacing delta by dot and dropping the R term.
Array curvature_of(const Connection& c, const JetTensor& A, const JetTensor* C, const JetTensor* R,
                   bool vertical) {
  const int n = c.dim;
  Array out({n, n, n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) {
        for (int d = 0; d < n; ++d) {
          double s = vertical ? vdot(c, A(a, b, k), d).value() - vdot(c, A(a, b, d), k).value()
                              : delta(c, A(a, b, k), d).value() - delta(c, A(a, b, d), k).value();
          for (int f = 0; f < n; ++f) {
            s += A(f, b, k).value() * A(a, f, d).value() - A(f, b, d).value() * A(a, f, k).value();
            if (C) s += (*C)(a, b, f).value() * (*R)(f, k, d).value();
          }
          out(a, b, k, d) = s;
        }
      }
    }
  }
  return out;
}

// dot_d L^a_bc - C^a_bd|c + C^a_bf P^f_cd.
Array mixed_curvature(const Connection& c, const JetTensor& L, const JetTensor& C, IndexType t,
                      const JetTensor& P11) {
  const int n = c.dim;
  const JetTensor dC =
      covariant_derivative(c, C, {up(t), down(t), down(IndexType::V)}, Direction::H);
  Array out({n, n, n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) {
        for (int d = 0; d < n; ++d) {
          double s = vdot(c, L(a, b, k), d).value() - dC(a, b, d, k).value();
          for (int f = 0; f < n; ++f) s += C(a, b, f).value() * P11(f, k, d).value();
          out(a, b, k, d) = s;
        }
      }
    }
  }
  return out;
}

}  // namespace

CurvatureAtPoint curvature(const Connection& c) {
  const int n = c.dim;
  const Brackets br = bracket_fields(c);
  JetTensor P11({n, n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) P11(a, b, k) = br.B(a, b, k) - c.L10(a, k, b);
    }
  }
  CurvatureAtPoint k;
  k.RH = curvature_of(c, c.L00, &c.C01, &br.R, false);
  k.PH = mixed_curvature(c, c.L00, c.C01, IndexType::H, P11);
  k.SH = curvature_of(c, c.C01, nullptr, nullptr, true);
  k.RV = curvature_of(c, c.L10, &c.C11, &br.R, false);
  k.PV = mixed_curvature(c, c.L10, c.C11, IndexType::V, P11);
  k.SV = curvature_of(c, c.C11, nullptr, nullptr, true);
  return k;
}

std::string block_name(CurvatureBlock b) {
  switch (b) {
    case CurvatureBlock::RH: return "RH";
    case CurvatureBlock::PH: return "PH";
    case CurvatureBlock::SH: return "SH";
    case CurvatureBlock::RV: return "RV";
    case CurvatureBlock::PV: return "PV";
    case CurvatureBlock::SV: return "SV";
  }
  return "";
}

const Array& select(const CurvatureAtPoint& k, CurvatureBlock b) {
  switch (b) {
    case CurvatureBlock::RH: return k.RH;
    case CurvatureBlock::PH: return k.PH;
    case CurvatureBlock::SH: return k.SH;
    case CurvatureBlock::RV: return k.RV;
    case CurvatureBlock::PV: return k.PV;
    case CurvatureBlock::SV: return k.SV;
  }
  return k.RH;
}

// ---------------------------------------------------------------------------

namespace {

Jet zero_like(const Connection& c) { return Jet::constant(2 * c.dim, kMaxJetOrder, 0.0); }

}  // namespace

VectorField horizontal_basis(const Connection& c, int b) {
  VectorField U{std::vector<Jet>(static_cast<std::size_t>(c.dim), zero_like(c)),
                std::vector<Jet>(static_cast<std::size_t>(c.dim), zero_like(c))};
  U.h[static_cast<std::size_t>(b)] += 1.0;
  return U;
}

VectorField vertical_basis(const Connection& c, int b) {
  VectorField U = horizontal_basis(c, b);
  std::swap(U.h, U.v);
  return U;
}

Jet apply(const Connection& c, const VectorField& U, const Jet& f) {
  Jet s = zero_like(c);
  for (int k = 0; k < c.dim; ++k) {
    const auto sk = static_cast<std::size_t>(k);
    s += U.h[sk] * delta(c, f, k) + U.v[sk] * vdot(c, f, k);
  }
  return s;
}

VectorField lie_bracket(const Connection& c, const VectorField& U, const VectorField& W) {
  const int n = c.dim;
  const auto un = static_cast<std::size_t>(n);
  // coordinate components: x-part = h, y-part^a = v^a - N^a_b h^b
  auto coords = [&](const VectorField& X) {
    std::vector<Jet> q(2 * un);
    for (int a = 0; a < n; ++a) {
      const auto sa = static_cast<std::size_t>(a);
      q[sa] = X.h[sa];
      Jet y = X.v[sa];
      for (int b = 0; b < n; ++b) y -= c.N(a, b) * X.h[static_cast<std::size_t>(b)];
      q[un + sa] = std::move(y);
    }
    return q;
  };
  auto derive = [&](const std::vector<Jet>& X, const Jet& f) {
    Jet s = zero_like(c);
    for (int i = 0; i < 2 * n; ++i) s += X[static_cast<std::size_t>(i)] * f.derivative(i);
    return s;
  };
  const auto cu = coords(U);
  const auto cw = coords(W);
  std::vector<Jet> br(2 * un);
  for (std::size_t i = 0; i < 2 * un; ++i) br[i] = derive(cu, cw[i]) - derive(cw, cu[i]);
  VectorField r{std::vector<Jet>(un), std::vector<Jet>(un)};
  for (int a = 0; a < n; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    r.h[sa] = br[sa];
    Jet v = br[un + sa];
    for (int b = 0; b < n; ++b) v += c.N(a, b) * br[static_cast<std::size_t>(b)];
    r.v[sa] = std::move(v);
  }
  return r;
}

VectorField nabla(const Connection& c, const VectorField& U, const VectorField& Z) {
  const int n = c.dim;
  VectorField r{std::vector<Jet>(static_cast<std::size_t>(n)), std::vector<Jet>(static_cast<std::size_t>(n))};
  for (int a = 0; a < n; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    Jet h = apply(c, U, Z.h[sa]);
    Jet v = apply(c, U, Z.v[sa]);
    for (int k = 0; k < n; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      for (int b = 0; b < n; ++b) {
        const auto sb = static_cast<std::size_t>(b);
        h += U.h[sk] * c.L00(a, b, k) * Z.h[sb] + U.v[sk] * c.C01(a, b, k) * Z.h[sb];
        v += U.h[sk] * c.L10(a, b, k) * Z.v[sb] + U.v[sk] * c.C11(a, b, k) * Z.v[sb];
      }
    }
    r.h[sa] = std::move(h);
    r.v[sa] = std::move(v);
  }
  return r;
}

Array commutator_curvature(const Connection& c, CurvatureBlock blk) {
  const int n = c.dim;
  const bool u_vert = blk != CurvatureBlock::RH && blk != CurvatureBlock::RV;
  const bool w_vert = blk == CurvatureBlock::SH || blk == CurvatureBlock::SV;
  const bool z_vert = blk == CurvatureBlock::RV || blk == CurvatureBlock::PV || blk == CurvatureBlock::SV;
  auto basis = [&](bool vert, int i) { return vert ? vertical_basis(c, i) : horizontal_basis(c, i); };
  Array out({n, n, n, n});
  for (int b = 0; b < n; ++b) {
    const VectorField Z = basis(z_vert, b);
    for (int k = 0; k < n; ++k) {
      const VectorField W = basis(w_vert, k);
      const VectorField WZ = nabla(c, W, Z);
      for (int d = 0; d < n; ++d) {
        const VectorField U = basis(u_vert, d);
        const VectorField UWZ = nabla(c, U, WZ);
        const VectorField WUZ = nabla(c, W, nabla(c, U, Z));
        const VectorField BZ = nabla(c, lie_bracket(c, U, W), Z);
        const auto& p1 = z_vert ? UWZ.v : UWZ.h;
        const auto& p2 = z_vert ? WUZ.v : WUZ.h;
        const auto& p3 = z_vert ? BZ.v : BZ.h;
        for (int a = 0; a < n; ++a) {
          const auto sa = static_cast<std::size_t>(a);
          out(a, b, k, d) = p1[sa].value() - p2[sa].value() - p3[sa].value();
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Array derivative_values(const JetTensor& N, int offset, int n) {
  Array r({n, n, n});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) r(a, b, k) = N(a, b).derivative(offset + k).value();
    }
  }
  return r;
}

}  // namespace

Array christoffel(const MetricModel& M, const AmbientPoint& p) {
  return values(cartan_fields(M, p, 4).gamma);
}

std::vector<double> spray(const MetricModel& M, const AmbientPoint& p) {
  const Array G = values(cartan_fields(M, p, 4).G);
  return G.data();
}

NonlinearConnAtPoint cartan_nonlinear_connection(const MetricModel& M, const AmbientPoint& p) {
  const CartanFields f = cartan_fields(M, p, kFieldOrder);
  return {values(f.N), derivative_values(f.N, M.n, M.n), derivative_values(f.N, 0, M.n)};
}

std::vector<double> delta_derivative(const MetricModel& M, const AmbientPoint& p, const ScalarField& f) {
  if (f.n_x != M.n || f.n_y != M.n) throw std::invalid_argument("scalar field arity mismatch");
  const CartanFields cf = cartan_fields(M, p, 4);
  std::vector<Jet> xs, ys;
  for (int i = 0; i < M.n; ++i) {
    xs.push_back(Jet::variable(2 * M.n, 1, i, p.x[static_cast<std::size_t>(i)]));
    ys.push_back(Jet::variable(2 * M.n, 1, M.n + i, p.y[static_cast<std::size_t>(i)]));
  }
  const Jet fj = f.eval(xs, ys);
  std::vector<double> r(static_cast<std::size_t>(M.n));
  for (int a = 0; a < M.n; ++a) r[static_cast<std::size_t>(a)] = delta(cf, fj, a).value();
  return r;
}

DConnAtPoint cartan_metrical_connection(const MetricModel& M, const AmbientPoint& p) {
  const CartanFields f = cartan_fields(M, p, 4);
  return {values(f.L00), values(f.L10), values(f.C01), values(f.C11)};
}

std::pair<Array, Array> bracket_coefficients(const MetricModel& M, const AmbientPoint& p) {
  const Brackets b = bracket_fields(cartan_fields(M, p, kFieldOrder));
  return {values(b.R), values(b.B)};
}

TorsionAtPoint torsion_tensors(const MetricModel& M, const AmbientPoint& p) {
  return torsion(cartan_fields(M, p, kFieldOrder));
}

CurvatureAtPoint curvature_tensors(const MetricModel& M, const AmbientPoint& p) {
  return curvature(cartan_fields(M, p, kFieldOrder));
}

Array commutator_curvature_oracle(const MetricModel& M, const AmbientPoint& p, CurvatureBlock b) {
  return commutator_curvature(cartan_fields(M, p, kFieldOrder), b);
}

MetricityResiduals metricity(const Connection& c, const JetTensor& g, const JetTensor& h) {
  const std::vector<IndexSpec> gs{down(IndexType::H), down(IndexType::H)};
  const std::vector<IndexSpec> hs{down(IndexType::V), down(IndexType::V)};
  return {max_abs(values(covariant_derivative(c, g, gs, Direction::H))),
          max_abs(values(covariant_derivative(c, g, gs, Direction::V))),
          max_abs(values(covariant_derivative(c, h, hs, Direction::H))),
          max_abs(values(covariant_derivative(c, h, hs, Direction::V)))};
}

MetricityResiduals metricity(const CartanFields& f) { return metricity(f, f.g, f.h); }

}  // namespace finslift
