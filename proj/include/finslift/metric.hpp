#pragma once

// Finsler fundamental functions, the fundamental tensor and the homogeneous
// lift h = (p^2 / |y|^2) g.

#include <functional>
#include <string>
#include <vector>

#include "finslift/jet_linalg.hpp"
#include "finslift/jets.hpp"
#include "finslift/tensor.hpp"

namespace finslift {

inline constexpr double kEpsNull = 1e-6;

struct AmbientPoint {
  std::vector<double> x;
  std::vector<double> y;
};

// Jet-valued symmetric matrix function of the chart coordinates.
using MatrixField = std::function<JetTensor(JetSpan x)>;

struct MetricModel {
  enum class Kind { Euclidean, RiemannianChart, Randers, Custom };

  Kind kind = Kind::Custom;
  int n = 0;
  double p = 1.0;
  ScalarField F2;  // arity (n, n)
  std::string label;
};

std::string kind_name(MetricModel::Kind k);

MetricModel euclidean(int n, double p = 1.0);

// F^2 = g_ij(x) y^i y^j.
MetricModel riemannian_chart(int n, MatrixField g, double p = 1.0, std::string label = "custom");

// Round unit n-sphere in hyperspherical coordinates:
// g = diag(1, sin^2 x1, sin^2 x1 sin^2 x2, ...).
MetricModel sphere_chart(int n, double p = 1.0);

// F = sqrt(a_ij y^i y^j) + b_i(x) y^i with b_i(x) = b_i + b_grad_ij x^j.
// Throws DomainError at points where |b|_a >= 1.
MetricModel randers(Array a, std::vector<double> b, Array b_grad = {}, double p = 1.0);

MetricModel custom(int n, ScalarField F2, double p = 1.0);

struct MetricAtPoint {
  Array g;
  Array g_inv;
  Array h;
  double norm_sq = 0.0;
};

// F^2 around (x, y) as a jet over 2n variables: x^1..x^n then y^1..y^n.
Jet lift_f2(const MetricModel& M, const AmbientPoint& p, int order);

// g_ab = 1/2 d^2 F^2 / dy^a dy^b. Throws DegenerateMetric when |det g| < 1e-12.
Array fundamental_tensor(const MetricModel& M, const AmbientPoint& p);

// g_ab y^a y^b.
double norm_sq(const MetricModel& M, const AmbientPoint& p);

// Throws NullSection when |y|^2 < kEpsNull.
MetricAtPoint homogeneous_lift(const MetricModel& M, const AmbientPoint& p);

bool positive_definite(const Array& g);

}  // namespace finslift
