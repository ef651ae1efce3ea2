#include "finslift/compare.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace finslift {

namespace {

Jet zero_like(const Jet& j) { return Jet::constant(j.nvars(), kMaxJetOrder, 0.0); }

JetTensor minus(const JetTensor& a, const JetTensor& b) {
  JetTensor r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] -= b.data()[i];
  return r;
}

}  // namespace

MetricModel intrinsic_model(const MetricModel& M, const Immersion& I) {
  if (M.n != I.n) throw std::invalid_argument("immersion target dimension does not match metric");
  const int m = I.m, n = I.n;
  ScalarField f{m, m, [M, I, m, n](JetSpan u, JetSpan v) {
                  // B(u) around the base point, then composed with the u jets
                  std::vector<Jet> w;
                  for (int a = 0; a < m; ++a) {
                    w.push_back(Jet::variable(m, kMaxJetOrder, a, u[static_cast<std::size_t>(a)].value()));
                  }
                  const auto xw = I.x(w);
                  const Composer comp(u, std::min(u[0].order(), kMaxJetOrder - 1));
                  const auto x = I.x(u);
                  std::vector<Jet> y;
                  for (int a = 0; a < n; ++a) {
                    Jet ya = comp(xw[static_cast<std::size_t>(a)].derivative(0)) * v[0];
                    for (int al = 1; al < m; ++al) {
                      ya += comp(xw[static_cast<std::size_t>(a)].derivative(al)) * v[static_cast<std::size_t>(al)];
                    }
                    y.push_back(std::move(ya));
                  }
                  return M.F2.eval(x, y);
                }};
  MetricModel IM = custom(m, std::move(f), M.p);
  IM.label = "intrinsic(" + M.label + ", " + I.kind + ")";
  return IM;
}

ComparisonFields comparison_fields(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  ComparisonFields cf;
  cf.sub = submanifold_fields(M, I, sp);
  const SubmanifoldFields& s = cf.sub;
  const int m = s.m, n = s.n, k = n - m;
  cf.intrinsic = cartan_fields(intrinsic_model(M, I), as_point(sp), kFieldOrder);
  const CartanFields& in = cf.intrinsic;
  const JetTensor& Nc = s.tangent.N;
  cf.D = minus(in.N, Nc);
  cf.tangent_ring = s.tangent;
  cf.tangent_ring.N = in.N;
  cf.intrinsic_br = bracket_fields(in);
  cf.induced_br = bracket_fields(s.tangent);
  cf.dH00 = minus(in.L00, s.tangent.L00);
  cf.dV10 = minus(in.L10, s.tangent.L10);

  const JetTensor& D = cf.D;
  auto vd = [m](const Jet& f, int e) { return f.derivative(m + e); };
  auto dl = [&](const Jet& f, int e) { return sub_delta(Nc, m, f, e); };

  cf.D100 = JetTensor({m, m, m});
  cf.D101 = JetTensor({m, m, m});
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) {
        Jet r = dl(D(a, b), c) - dl(D(a, c), b);
        for (int e = 0; e < m; ++e) {
          r += D(e, b) * vd(Nc(a, c) + D(a, c), e) - D(e, c) * vd(Nc(a, b) + D(a, b), e);
        }
        cf.D100(a, b, c) = std::move(r);
        cf.D101(a, b, c) = vd(D(a, b), c);
      }
    }
  }

  // Ingredients of the literal closed forms.
  const JetTensor& gs = s.g_sub;
  const JetTensor gsi = inverse(gs);
  const JetTensor gi = inverse(s.g);
  JetTensor dg({n, n, n});  // [d][b][c] = dot_d g_bc, from the Cartan tensor
  for (int d = 0; d < n; ++d) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        Jet t = zero_like(s.norm_sq);
        for (int a = 0; a < n; ++a) t += s.g(d, a) * s.C01(a, b, c);
        dg(d, b, c) = 2.0 * t;
      }
    }
  }
  JetTensor gn({k, m, m});  // B_abar^a B_s^b B_b^c dot_a g_bc
  for (int q = 0; q < k; ++q) {
    for (int al = 0; al < m; ++al) {
      for (int be = 0; be < m; ++be) {
        Jet t = zero_like(s.norm_sq);
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) t += s.Bbar(a, q) * s.B(b, al) * s.B(c, be) * dg(a, b, c);
          }
        }
        gn(q, al, be) = std::move(t);
      }
    }
  }
  JetTensor Kup({k, m});  // K^{abar alpha}
  for (int q = 0; q < k; ++q) {
    for (int al = 0; al < m; ++al) {
      Jet t = zero_like(s.norm_sq);
      for (int sg = 0; sg < m; ++sg) t += gsi(al, sg) * s.K(q, sg);
      Kup(q, al) = std::move(t);
    }
  }
  // D^e_b dot_e g_sd
  auto Ddg = [&](int b, int sg, int d) {
    Jet t = zero_like(s.norm_sq);
    for (int e = 0; e < m; ++e) t += D(e, b) * vd(gs(sg, d), e);
    return t;
  };
  // y_b = g_bc y^c and the scalar factor of the lift
  std::vector<Jet> v;
  for (int al = 0; al < m; ++al) v.push_back(Jet::variable(2 * m, kMaxJetOrder, m + al, sp.v[static_cast<std::size_t>(al)]));
  std::vector<Jet> ylow;
  for (int b = 0; b < n; ++b) {
    Jet t = zero_like(s.norm_sq);
    for (int c = 0; c < n; ++c) {
      for (int al = 0; al < m; ++al) t += s.g(b, c) * s.B(c, al) * v[static_cast<std::size_t>(al)];
    }
    ylow.push_back(std::move(t));
  }
  const Jet inv_norm = reciprocal(s.norm_sq);
  const Jet hs = (s.p * s.p) * inv_norm;
  std::vector<Jet> dh;  // dot_b of p^2 / |y|^2
  for (int b = 0; b < n; ++b) dh.push_back((-2.0 * s.p * s.p) * ylow[static_cast<std::size_t>(b)] * inv_norm * inv_norm);
  JetTensor NBK({k, m});  // Bbar^b_q (dot_b h) K^q_s, per normal index
  for (int q = 0; q < k; ++q) {
    Jet t = zero_like(s.norm_sq);
    for (int b = 0; b < n; ++b) t += s.Bbar(b, q) * dh[static_cast<std::size_t>(b)];
    for (int sg = 0; sg < m; ++sg) NBK(q, sg) = t * s.K(q, sg);
  }
  // B0 + B N, the tangential derivative of y along delta
  JetTensor Q({n, m});
  for (int a = 0; a < n; ++a) {
    for (int be = 0; be < m; ++be) {
      Jet t = s.B0(a, be);
      for (int c = 0; c < n; ++c) t += s.B(c, be) * s.N(a, c);
      Q(a, be) = std::move(t);
    }
  }

  cf.D_lit = JetTensor({m, m});
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      Jet t = zero_like(s.norm_sq);
      for (int q = 0; q < k; ++q) {
        Jet kv = zero_like(s.norm_sq);
        for (int ga = 0; ga < m; ++ga) kv += s.K(q, ga) * v[static_cast<std::size_t>(ga)];
        for (int sg = 0; sg < m; ++sg) t += gsi(al, sg) * gn(q, sg, be) * kv;
      }
      cf.D_lit(al, be) = std::move(t);
    }
  }

  cf.dH00_lit = JetTensor({m, m, m});
  cf.dV10_lit = JetTensor({m, m, m});
  cf.d10_lit = JetTensor({m, m, m});
  const Jet half_inv_h = 0.5 * reciprocal(hs);
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      for (int ga = 0; ga < m; ++ga) {
        // ------ deformation of L00, free indices (alpha, beta, gamma)
        Jet h00 = zero_like(s.norm_sq);
        for (int q = 0; q < k; ++q) {
          Jet up = zero_like(s.norm_sq);
          for (int sg = 0; sg < m; ++sg) up += gsi(al, sg) * gn(q, sg, ga);
          h00 += 0.5 * (up * s.K(q, be) - gn(q, be, ga) * Kup(q, al));
        }
        for (int sg = 0; sg < m; ++sg) {
          h00 -= 0.5 * gsi(al, sg) * (Ddg(be, sg, ga) + Ddg(ga, sg, be) - Ddg(sg, be, ga));
        }
        cf.dH00_lit(al, be, ga) = std::move(h00);

        // ------ the vertical companion
        Jet d10 = zero_like(s.norm_sq);
        for (int a = 0; a < n; ++a) {
          d10 += 0.5 * vd(s.Bdual(al, a), be) * Q(a, ga);
          d10 -= 0.5 * s.Bdual(al, a) * s.B2(a, be, ga);
          for (int f = 0; f < n; ++f) {
            for (int b = 0; b < n; ++b) {
              for (int q = 0; q < k; ++q) {
                for (int d = 0; d < n; ++d) {
                  d10 -= 0.5 * gi(a, f) * s.Bdual(al, a) * s.B(b, be) * s.Bbar(d, q) * dg(d, b, f) * s.K(q, ga);
                }
              }
            }
          }
        }
        for (int de = 0; de < m; ++de) {
          for (int sg = 0; sg < m; ++sg) {
            for (int a = 0; a < n; ++a) {
              d10 -= 0.5 * gsi(al, de) * s.Bdual(sg, a) * s.B2(a, ga, de) * gs(sg, be);
              d10 -= 0.5 * gsi(al, de) * gs(sg, be) * vd(s.Bdual(sg, a), ga) * Q(a, de);
            }
          }
          for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) d10 += gsi(al, de) * s.g(b, a) * s.B(b, be) * s.B2(a, de, ga);
          }
        }
        d10 += 0.5 * cf.D101(al, ga, be);
        for (int de = 0; de < m; ++de) {
          Jet t = zero_like(s.norm_sq);
          for (int e = 0; e < m; ++e) t += D(e, ga) * vd(gs(be, de), e);
          for (int sg = 0; sg < m; ++sg) t += cf.D101(sg, ga, de) * gs(sg, be);
          d10 -= 0.5 * gsi(al, de) * t;
        }
        cf.d10_lit(al, be, ga) = d10;

        Jet v10 = d10;
        for (int sg = 0; sg < m; ++sg) {
          Jet first = zero_like(s.norm_sq), second = zero_like(s.norm_sq);
          for (int q = 0; q < k; ++q) {
            first += NBK(q, sg) * gs(be, ga) - NBK(q, be) * gs(sg, ga);
          }
          second = Ddg(sg, be, ga) - Ddg(be, sg, ga) - Ddg(ga, be, sg);
          v10 += half_inv_h * gsi(al, sg) * (second - first);
        }
        cf.dV10_lit(al, be, ga) = std::move(v10);
      }
    }
  }
  return cf;
}

Array connection_difference(const MetricModel& M, const Immersion& I, const SubPoint& sp) {
  const Array Nc = induced_nonlinear_connection(M, I, sp);
  const Array Ni = cartan_nonlinear_connection(intrinsic_model(M, I), as_point(sp)).N;
  return Ni - Nc;
}

namespace {

// Smooth test functions with random coefficients, written in the local
// displacement from the base point (the base values only shift the function).
std::vector<Jet> test_functions(int m, unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<Jet> z;
  for (int i = 0; i < 2 * m; ++i) z.push_back(Jet::variable(2 * m, kMaxJetOrder, i, 0.1 * (i + 1)));
  std::vector<Jet> out;
  for (int c = 0; c < count; ++c) {
    Jet lin = Jet::constant(2 * m, kMaxJetOrder, coef(rng));
    Jet quad = lin;
    for (const auto& zi : z) {
      lin += coef(rng) * zi;
      quad += coef(rng) * zi * zi;
    }
    out.push_back(sin(lin) * exp(0.3 * quad) + coef(rng) * z[0] * z[static_cast<std::size_t>(2 * m - 1)]);
  }
  return out;
}

}  // namespace

double adapted_basis_residual(const ComparisonFields& cf, unsigned seed, int functions) {
  const int m = cf.sub.m;
  double worst = 0;
  for (const Jet& f : test_functions(m, seed, functions)) {
    for (int a = 0; a < m; ++a) {
      double rhs = sub_delta(cf.sub.tangent.N, m, f, a).value();
      for (int b = 0; b < m; ++b) rhs -= cf.D(b, a).value() * f.partial(m + b);
      worst = std::max(worst, std::abs(delta(cf.intrinsic, f, a).value() - rhs));
    }
  }
  return worst;
}

double bracket_commutator_residual(const Connection& c, unsigned seed, int functions) {
  const int n = c.dim;
  const Brackets br = bracket_fields(c);
  double worst = 0;
  for (const Jet& f : test_functions(n, seed, functions)) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) {
        double hh = (delta(c, delta(c, f, k), b) - delta(c, delta(c, f, b), k)).value();
        double hv = (delta(c, vdot(c, f, k), b) - vdot(c, delta(c, f, b), k)).value();
        for (int a = 0; a < n; ++a) {
          hh -= br.R(a, b, k).value() * f.partial(n + a);
          hv -= br.B(a, b, k).value() * f.partial(n + a);
        }
        worst = std::max({worst, std::abs(hh), std::abs(hv)});
      }
    }
  }
  return worst;
}

BracketDifference bracket_difference(const ComparisonFields& cf) {
  return {values(cf.D100), values(cf.D101), values(cf.intrinsic_br.R) - values(cf.induced_br.R),
          values(cf.intrinsic_br.B) - values(cf.induced_br.B)};
}

DeformationDeltas deformation_deltas(const ComparisonFields& cf) {
  return {values(cf.dH00), values(cf.dV10), values(cf.dH00_lit), values(cf.dV10_lit), values(cf.d10_lit)};
}

DeformationComponents deformation_components(const ComparisonFields& cf) {
  const int m = cf.sub.m;
  const Connection& in = cf.intrinsic;
  const Connection& t = cf.sub.tangent;
  // intrinsic horizontal basis field written in the induced adapted basis
  auto ring_h = [&](int b) {
    VectorField U = horizontal_basis(t, b);
    for (int e = 0; e < m; ++e) U.v[static_cast<std::size_t>(e)] = -cf.D(e, b);
    return U;
  };
  DeformationComponents out{Array({m, m, m}, 0.0), Array({m, m, m}, 0.0), Array({m, m, m}, 0.0),
                            Array({m, m, m}, 0.0)};
  for (int ga = 0; ga < m; ++ga) {
    for (int be = 0; be < m; ++be) {
      for (int blk = 0; blk < 2; ++blk) {
        const bool vert = blk == 1;
        const VectorField a = nabla(in, horizontal_basis(in, ga), vert ? vertical_basis(in, be) : horizontal_basis(in, be));
        const VectorField b = nabla(t, ring_h(ga), vert ? vertical_basis(t, be) : ring_h(be));
        for (int al = 0; al < m; ++al) {
          const auto sa = static_cast<std::size_t>(al);
          // induced-basis components to intrinsic-basis components
          double bv = b.v[sa].value();
          for (int e = 0; e < m; ++e) bv += cf.D(al, e).value() * b.h[static_cast<std::size_t>(e)].value();
          const double dh = a.h[sa].value() - b.h[sa].value();
          const double dv = a.v[sa].value() - bv;
          (vert ? out.D10H : out.D00H)(al, be, ga) = dh;
          (vert ? out.D10V : out.D00V)(al, be, ga) = dv;
        }
      }
    }
  }
  return out;
}

DeformationComponents deformation_components_closed(const ComparisonFields& cf) {
  const int m = cf.sub.m;
  const Connection& t = cf.sub.tangent;
  const JetTensor& D = cf.D;
  DeformationComponents out{Array({m, m, m}, 0.0), Array({m, m, m}, 0.0), Array({m, m, m}, 0.0),
                            Array({m, m, m}, 0.0)};
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      for (int ga = 0; ga < m; ++ga) {
        double h = cf.dH00(al, be, ga).value(), v10 = cf.dV10(al, be, ga).value();
        for (int f = 0; f < m; ++f) {
          h += D(f, ga).value() * t.C01(al, be, f).value();
          v10 += D(f, ga).value() * t.C01(al, be, f).value();
        }
        out.D00H(al, be, ga) = h;
        out.D10V(al, be, ga) = v10;
      }
    }
  }
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      for (int ga = 0; ga < m; ++ga) {
        double v = sub_delta(t.N, m, D(al, be), ga).value();
        for (int e = 0; e < m; ++e) {
          v += out.D00H(e, be, ga) * D(al, e).value();
          v += D(e, be).value() * t.L10(al, e, ga).value();
          double inner = D(al, be).partial(m + e);
          for (int f = 0; f < m; ++f) inner += D(f, be).value() * t.C11(al, f, e).value();
          v -= D(e, ga).value() * inner;
          v -= D(al, e).value() * (t.L00(e, be, ga).value() + cf.dH00(e, be, ga).value());
        }
        out.D00V(al, be, ga) = v;
      }
    }
  }
  return out;
}

ComparisonRow make_row(std::string name, std::string tag, const Array& lhs, const Array& rhs, double tolerance,
                       bool informational) {
  ComparisonRow r;
  r.name = std::move(name);
  r.tag = std::move(tag);
  r.abs_residual = max_abs(lhs - rhs);
  r.residual = r.abs_residual / (1.0 + std::max(max_abs(lhs), max_abs(rhs)));
  r.tolerance = tolerance;
  r.informational = informational;
  r.pass = r.residual <= tolerance;
  r.lhs = lhs.data();
  r.rhs = rhs.data();
  return r;
}

namespace {

constexpr double kTol = 1e-8;
constexpr double kOracleTol = 1e-7;

Array zeros_like(const Array& a) { return Array(a.shape(), 0.0); }

Array transpose12(const Array& a) {
  Array r = a;
  for (int i = 0; i < a.dim(0); ++i) {
    for (int j = 0; j < a.dim(1); ++j) {
      for (int k = 0; k < a.dim(2); ++k) r(i, j, k) = a(i, k, j);
    }
  }
  return r;
}

}  // namespace

std::vector<ComparisonRow> nonlinear_rows(const ComparisonFields& cf, unsigned seed) {
  std::vector<ComparisonRow> rows;
  const Array zero1({1}, 0.0);
  rows.push_back(make_row("adapted-basis-relation", "nonlinear-difference",
                          Array({1}, adapted_basis_residual(cf, seed)), zero1, 1e-9));
  rows.push_back(make_row("D-closed-form", "nonlinear-difference", values(cf.D_lit), values(cf.D), kOracleTol, true));
  rows.push_back(make_row("bracket-commutator-intrinsic", "brackets",
                          Array({1}, bracket_commutator_residual(cf.intrinsic, seed)), zero1, kTol));
  rows.push_back(make_row("bracket-commutator-induced", "brackets",
                          Array({1}, bracket_commutator_residual(cf.sub.tangent, seed)), zero1, kTol));
  const BracketDifference bd = bracket_difference(cf);
  rows.push_back(make_row("bracket-difference-R", "brackets", bd.R_diff, bd.D100, kOracleTol));
  rows.push_back(make_row("bracket-difference-B", "brackets", bd.B_diff, bd.D101, kOracleTol));
  // the other sign convention for R, kept for reference
  const Array Ri = values(cf.intrinsic_br.R), Rc = values(cf.induced_br.R);
  rows.push_back(make_row("bracket-difference-R-opposite-sign", "brackets",
                          (Rc - Ri), bd.D100, kOracleTol, true));
  return rows;
}

std::vector<ComparisonRow> connection_rows(const ComparisonFields& cf) {
  std::vector<ComparisonRow> rows;
  const Connection& in = cf.intrinsic;
  const Connection& t = cf.sub.tangent;
  rows.push_back(make_row("C01-intrinsic-equals-tangent", "connection-difference", values(in.C01), values(t.C01), kTol));
  rows.push_back(make_row("C11-intrinsic-equals-tangent", "connection-difference", values(in.C11), values(t.C11), kTol));
  const DeformationDeltas dd = deformation_deltas(cf);
  rows.push_back(make_row("L00-delta-closed-form", "connection-difference", dd.dH00_lit, dd.dH00, kOracleTol, true));
  rows.push_back(make_row("L10-delta-closed-form", "connection-difference", dd.dV10_lit, dd.dV10, kOracleTol, true));

  const DeformationComponents a = deformation_components(cf);
  const DeformationComponents b = deformation_components_closed(cf);
  rows.push_back(make_row("deformation-10-horizontal-zero", "deformation", a.D10H, zeros_like(a.D10H), 0.0));
  rows.push_back(make_row("deformation-00-horizontal", "deformation", b.D00H, a.D00H, kOracleTol));
  rows.push_back(make_row("deformation-00-vertical", "deformation", b.D00V, a.D00V, kOracleTol));
  rows.push_back(make_row("deformation-10-vertical", "deformation", b.D10V, a.D10V, kOracleTol, true));
  return rows;
}

std::vector<ComparisonRow> torsion_rows(const ComparisonFields& cf) {
  std::vector<ComparisonRow> rows;
  const TorsionAtPoint ti = torsion(cf.intrinsic);
  const TorsionAtPoint tt = torsion(cf.sub.tangent);
  rows.push_back(make_row("T00-intrinsic-zero", "torsion", ti.T00, zeros_like(ti.T00), kTol));
  rows.push_back(make_row("T00-tangent-zero", "torsion", tt.T00, zeros_like(tt.T00), kTol, true));
  rows.push_back(make_row("S11-intrinsic-zero", "torsion", ti.S11, zeros_like(ti.S11), kTol));
  rows.push_back(make_row("S11-tangent-zero", "torsion", tt.S11, zeros_like(tt.S11), kTol));
  rows.push_back(make_row("P10-intrinsic-equals-tangent", "torsion", ti.P10, tt.P10, kTol));
  rows.push_back(make_row("R01-difference", "torsion", ti.R01, tt.R01 + values(cf.D100), kOracleTol));
  const Array D101 = values(cf.D101);
  rows.push_back(make_row("P11-difference", "torsion", ti.P11,
                          tt.P11 + D101 - transpose12(values(cf.dV10)), kOracleTol));
  rows.push_back(make_row("P11-difference-closed-delta", "torsion", ti.P11,
                          tt.P11 + D101 - transpose12(values(cf.dV10_lit)), kOracleTol, true));
  return rows;
}

namespace {

// Closed forms of the curvature differences, storage [alpha][beta][gamma][delta].
struct CurvatureDeltas {
  Array RH, RV, PH, PV;
};

CurvatureDeltas curvature_deltas(const ComparisonFields& cf, const JetTensor& dH, const JetTensor& dV) {
  const int m = cf.sub.m;
  const Connection& t = cf.sub.tangent;
  const JetTensor& D = cf.D;
  auto vd = [m](const Jet& f, int e) { return f.partial(m + e); };
  auto dl = [&](const Jet& f, int e) { return sub_delta(t.N, m, f, e).value(); };
  auto val = [](const JetTensor& a, int i, int j, int k) { return a(i, j, k).value(); };
  CurvatureDeltas r{Array({m, m, m, m}, 0.0), Array({m, m, m, m}, 0.0), Array({m, m, m, m}, 0.0),
                    Array({m, m, m, m}, 0.0)};
  for (int al = 0; al < m; ++al) {
    for (int be = 0; be < m; ++be) {
      for (int ga = 0; ga < m; ++ga) {
        for (int de = 0; de < m; ++de) {
          double rh = dl(dH(al, be, ga), de) - dl(dH(al, be, de), ga);
          double rv = 0.5 * dl(dV(al, be, ga), de) - 0.5 * dl(dV(al, be, de), ga);
          double ph = vd(dH(al, be, ga), de);
          double pv = 0.5 * vd(dV(al, be, ga), de);
          for (int e = 0; e < m; ++e) {
            const double Dd = D(e, de).value(), Dg = D(e, ga).value();
            rh += -Dd * vd(t.L00(al, be, ga), e) - Dd * vd(dH(al, be, ga), e) + Dg * vd(t.L00(al, be, de), e) +
                  Dg * vd(dH(al, be, de), e);
            rh += val(t.L00, e, be, ga) * val(dH, al, e, de) + val(dH, e, be, ga) * val(t.L00, al, e, de) -
                  val(t.L00, e, be, de) * val(dH, al, e, ga) - val(dH, e, be, de) * val(t.L00, al, e, ga);
            rh += val(t.C01, al, be, e) * val(cf.D100, e, ga, de);

            rv += Dg * vd(t.L10(al, be, de), e) - Dd * vd(t.L10(al, be, ga), e);
            rv += 0.5 * Dg * vd(dV(al, be, de), e) - 0.5 * Dd * vd(dV(al, be, ga), e);
            rv += 0.5 * (val(t.L10, e, be, ga) * val(dV, al, e, de) - val(t.L10, e, be, de) * val(dV, al, e, ga) +
                         val(dV, e, be, ga) * val(t.L10, al, e, de) - val(dV, e, be, de) * val(t.L10, al, e, ga));
            rv += 0.25 * (val(dV, al, e, de) * val(dV, e, be, ga) - val(dV, al, e, ga) * val(dV, e, be, de));
            rv += val(t.C11, al, be, e) * val(dV, e, ga, de);

            ph += -val(dH, al, e, ga) * val(t.C01, e, be, de) + val(dH, e, be, ga) * val(t.C01, al, e, de) +
                  val(t.C01, al, be, e) * val(cf.D101, e, ga, de) + Dg * vd(t.C01(al, be, de), e);

            pv -= 0.5 * (val(dV, al, e, ga) * val(t.C11, e, be, de) - val(t.C11, al, e, de) * val(dV, e, be, ga) -
                         val(t.C11, al, be, e) * (val(dV, e, de, ga) - val(dV, e, ga, de)));
          }
          r.RH(al, be, ga, de) = rh;
          r.RV(al, be, ga, de) = rv;
          r.PH(al, be, ga, de) = ph;
          r.PV(al, be, ga, de) = pv;
        }
      }
    }
  }
  return r;
}

}  // namespace

std::vector<ComparisonRow> curvature_rows(const ComparisonFields& cf) {
  std::vector<ComparisonRow> rows;
  const CurvatureAtPoint ki = curvature(cf.intrinsic);
  const CurvatureAtPoint kc = curvature(cf.sub.tangent);
  const CurvatureAtPoint kr = curvature(cf.tangent_ring);
  rows.push_back(make_row("SH-intrinsic-equals-tangent", "curvature", ki.SH, kc.SH, kTol));
  rows.push_back(make_row("SV-intrinsic-equals-tangent", "curvature", ki.SV, kc.SV, kTol));
  const CurvatureDeltas closed = curvature_deltas(cf, cf.dH00, cf.dV10);
  const struct {
    const char* name;
    const Array& closed;
    CurvatureBlock blk;
  } blocks[] = {{"RH", closed.RH, CurvatureBlock::RH},
                {"RV", closed.RV, CurvatureBlock::RV},
                {"PH", closed.PH, CurvatureBlock::PH},
                {"PV", closed.PV, CurvatureBlock::PV}};
  for (const auto& b : blocks) {
    const Array& i = select(ki, b.blk);
    rows.push_back(make_row(std::string(b.name) + "-difference-induced-adapted", "curvature", b.closed,
                            i - select(kc, b.blk), kOracleTol, true));
    rows.push_back(make_row(std::string(b.name) + "-difference-intrinsic-adapted", "curvature", b.closed,
                            i - select(kr, b.blk), kOracleTol, true));
  }
  return rows;
}

}  // namespace finslift
