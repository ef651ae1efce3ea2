#include "finslift/metric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "finslift/errors.hpp"

namespace finslift {

std::string kind_name(MetricModel::Kind k) {
  switch (k) {
    case MetricModel::Kind::Euclidean: return "euclidean";
    case MetricModel::Kind::RiemannianChart: return "riemannian-chart";
    case MetricModel::Kind::Randers: return "randers";
    case MetricModel::Kind::Custom: return "custom";
  }
  return "custom";
}

namespace {

void check_dim(int n) {
  if (n < 1) throw std::invalid_argument("metric dimension must be positive");
}

void check_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("lift constant p must be positive");
}

Eigen::MatrixXd to_eigen(const Array& a) {
  Eigen::MatrixXd m(a.dim(0), a.dim(1));
  for (int i = 0; i < a.dim(0); ++i) {
    for (int j = 0; j < a.dim(1); ++j) m(i, j) = a(i, j);
  }
  return m;
}

}  // namespace

MetricModel euclidean(int n, double p) {
  check_dim(n);
  check_p(p);
  MetricModel M;
  M.kind = MetricModel::Kind::Euclidean;
  M.n = n;
  M.p = p;
  M.label = "euclidean";
  M.F2 = {n, n, [](JetSpan, JetSpan y) {
            Jet s = y[0] * y[0];
            for (std::size_t i = 1; i < y.size(); ++i) s += y[i] * y[i];
            return s;
          }};
  return M;
}

MetricModel riemannian_chart(int n, MatrixField g, double p, std::string label) {
  check_dim(n);
  check_p(p);
  MetricModel M;
  M.kind = MetricModel::Kind::RiemannianChart;
  M.n = n;
  M.p = p;
  M.label = std::move(label);
  M.F2 = {n, n, [g = std::move(g), n](JetSpan x, JetSpan y) {
            const JetTensor gx = g(x);
            if (gx.rank() != 2 || gx.dim(0) != n || gx.dim(1) != n) {
              throw std::invalid_argument("chart metric has wrong shape");
            }
            Jet s = gx(0, 0) * y[0] * y[0];
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) {
                if (i == 0 && j == 0) continue;
                s += gx(i, j) * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
              }
            }
            return s;
          }};
  return M;
}

MetricModel sphere_chart(int n, double p) {
  check_dim(n);
  MatrixField g = [n](JetSpan x) {
    const Jet zero = x[0] * 0.0;
    JetTensor m({n, n}, zero);
    Jet w = zero + 1.0;
    for (int i = 0; i < n; ++i) {
      m(i, i) = w;
      if (i + 1 < n) {
        const Jet s = sin(x[static_cast<std::size_t>(i)]);
        w = w * s * s;
      }
    }
    return m;
  };
  MetricModel M = riemannian_chart(n, std::move(g), p, "sphere");
  return M;
}

MetricModel randers(Array a, std::vector<double> b, Array b_grad, double p) {
  const int n = static_cast<int>(b.size());
  check_dim(n);
  check_p(p);
  if (a.rank() != 2 || a.dim(0) != n || a.dim(1) != n) {
    throw std::invalid_argument("randers: a must be n x n");
  }
  const Eigen::MatrixXd ae = to_eigen(a);
  if (!(ae - ae.transpose()).isZero(1e-14) || Eigen::LLT<Eigen::MatrixXd>(ae).info() != Eigen::Success) {
    throw std::invalid_argument("randers: a must be symmetric positive definite");
  }
  if (b_grad.empty()) b_grad = Array({n, n}, 0.0);
  if (b_grad.rank() != 2 || b_grad.dim(0) != n || b_grad.dim(1) != n) {
    throw std::invalid_argument("randers: b_grad must be n x n");
  }
  const Eigen::MatrixXd a_inv = ae.inverse();

  MetricModel M;
  M.kind = MetricModel::Kind::Randers;
  M.n = n;
  M.p = p;
  M.label = "randers";
  M.F2 = {n, n, [a, b, b_grad, a_inv, n](JetSpan x, JetSpan y) {
            std::vector<Jet> bx;
            Eigen::VectorXd b0(n);
            for (int i = 0; i < n; ++i) {
              Jet bi = x[0] * 0.0 + b[static_cast<std::size_t>(i)];
              for (int j = 0; j < n; ++j) {
                if (b_grad(i, j) != 0.0) bi += b_grad(i, j) * x[static_cast<std::size_t>(j)];
              }
              b0(i) = bi.value();
              bx.push_back(std::move(bi));
            }
            if (!(b0.dot(a_inv * b0) < 1.0)) throw DomainError("randers: |b|_a >= 1");
            Jet alpha2 = y[0] * 0.0;
            Jet beta = y[0] * 0.0;
            for (int i = 0; i < n; ++i) {
              const auto si = static_cast<std::size_t>(i);
              beta += bx[si] * y[si];
              for (int j = 0; j < n; ++j) {
                if (a(i, j) != 0.0) alpha2 += a(i, j) * y[si] * y[static_cast<std::size_t>(j)];
              }
            }
            return square(sqrt(alpha2) + beta);
          }};
  return M;
}

MetricModel custom(int n, ScalarField F2, double p) {
  check_dim(n);
  check_p(p);
  if (F2.n_x != n || F2.n_y != n) throw std::invalid_argument("custom metric arity mismatch");
  MetricModel M;
  M.kind = MetricModel::Kind::Custom;
  M.n = n;
  M.p = p;
  M.label = "custom";
  M.F2 = std::move(F2);
  return M;
}

Jet lift_f2(const MetricModel& M, const AmbientPoint& p, int order) {
  if (static_cast<int>(p.x.size()) != M.n || static_cast<int>(p.y.size()) != M.n) {
    throw std::invalid_argument("point dimension does not match metric");
  }
  std::vector<Jet> xs, ys;
  for (int i = 0; i < M.n; ++i) {
    xs.push_back(Jet::variable(2 * M.n, order, i, p.x[static_cast<std::size_t>(i)]));
    ys.push_back(Jet::variable(2 * M.n, order, M.n + i, p.y[static_cast<std::size_t>(i)]));
  }
  return M.F2.eval(xs, ys);
}

Array fundamental_tensor(const MetricModel& M, const AmbientPoint& p) {
  const Jet f = lift_f2(M, p, 2);
  const int n = M.n;
  Array g({n, n});
  std::vector<int> e(static_cast<std::size_t>(2 * n), 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::fill(e.begin(), e.end(), 0);
      e[static_cast<std::size_t>(n + a)] += 1;
      e[static_cast<std::size_t>(n + b)] += 1;
      g(a, b) = 0.5 * f.partial(e);
    }
  }
  if (!(std::abs(to_eigen(g).determinant()) >= 1e-12)) {
    throw DegenerateMetric("fundamental tensor is degenerate");
  }
  return g;
}

double norm_sq(const MetricModel& M, const AmbientPoint& p) {
  const Array g = fundamental_tensor(M, p);
  double s = 0.0;
  for (int a = 0; a < M.n; ++a) {
    for (int b = 0; b < M.n; ++b) s += g(a, b) * p.y[static_cast<std::size_t>(a)] * p.y[static_cast<std::size_t>(b)];
  }
  return s;
}

MetricAtPoint homogeneous_lift(const MetricModel& M, const AmbientPoint& p) {
  MetricAtPoint r;
  r.g = fundamental_tensor(M, p);
  const int n = M.n;
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) s += r.g(a, b) * p.y[static_cast<std::size_t>(a)] * p.y[static_cast<std::size_t>(b)];
  }
  if (!(s >= kEpsNull)) throw NullSection("point too close to the null section");
  r.norm_sq = s;
  const Eigen::MatrixXd gi = to_eigen(r.g).inverse();
  r.g_inv = Array({n, n});
  r.h = Array({n, n});
  const double f = M.p * M.p / s;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      r.g_inv(a, b) = gi(a, b);
      r.h(a, b) = f * r.g(a, b);
    }
  }
  return r;
}

bool positive_definite(const Array& g) {
  return Eigen::LLT<Eigen::MatrixXd>(to_eigen(g)).info() == Eigen::Success;
}

}  // namespace finslift
