#include "finslift/jet_linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "finslift/errors.hpp"

namespace finslift {

JetTensor zeros(std::vector<int> shape, int nvars, int order) {
  return JetTensor(std::move(shape), Jet::constant(nvars, order, 0.0));
}

Array values(const JetTensor& t) {
  return t.map([](const Jet& j) { return j.value(); });
}

JetTensor matmul(const JetTensor& a, const JetTensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw std::invalid_argument("matmul shape mismatch");
  }
  JetTensor r({a.dim(0), b.dim(1)});
  for (int i = 0; i < a.dim(0); ++i) {
    for (int j = 0; j < b.dim(1); ++j) {
      Jet s = a(i, 0) * b(0, j);
      for (int k = 1; k < a.dim(1); ++k) s += a(i, k) * b(k, j);
      r(i, j) = std::move(s);
    }
  }
  return r;
}

JetTensor transpose(const JetTensor& a) {
  JetTensor r({a.dim(1), a.dim(0)});
  for (int i = 0; i < a.dim(0); ++i) {
    for (int j = 0; j < a.dim(1); ++j) r(j, i) = a(i, j);
  }
  return r;
}

JetTensor inverse(const JetTensor& a, double det_floor) {
  if (a.rank() != 2 || a.dim(0) != a.dim(1)) throw std::invalid_argument("inverse of non-square matrix");
  const int n = a.dim(0);
  Eigen::MatrixXd a0(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a0(i, j) = a(i, j).value();
  }
  const double det = a0.determinant();
  if (!(std::abs(det) >= det_floor)) {
    throw DegenerateMetric("matrix determinant " + std::to_string(det) + " below threshold");
  }
  const Eigen::MatrixXd x0 = a0.inverse();
  const int nvars = a(0, 0).nvars();
  int order = a(0, 0).order();
  for (const auto& e : a.data()) order = std::min(order, e.order());

  JetTensor x = zeros({n, n}, nvars, order);
  JetTensor e({n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      x(i, j) += x0(i, j);
      e(i, j) = a(i, j).truncated(order).displacement();
    }
  }
  // (A0 + E)^-1 = sum_k (-X0 E)^k X0, truncated at the jet order
  const JetTensor step = matmul(x, e);
  JetTensor term = x;
  JetTensor sum = x;
  for (int k = 1; k <= order; ++k) {
    term = matmul(step, term);
    for (std::size_t q = 0; q < term.size(); ++q) term.data()[q] = -term.data()[q];
    for (std::size_t q = 0; q < sum.size(); ++q) sum.data()[q] += term.data()[q];
  }
  return sum;
}

JetTensor derivative(const JetTensor& t, int var) {
  return t.map([var](const Jet& j) { return j.derivative(var); });
}

JetTensor truncated(const JetTensor& t, int order) {
  return t.map([order](const Jet& j) { return j.truncated(order); });
}

}  // namespace finslift
