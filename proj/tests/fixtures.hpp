#pragma once

#include <random>
#include <vector>

#include "finslift/metric.hpp"

namespace fixtures {

inline finslift::Array identity(int n) {
  finslift::Array a({n, n}, 0.0);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

// Randers metric with an x-dependent 1-form, so that every block is nonzero.
inline finslift::MetricModel randers3() {
  finslift::Array bg({3, 3}, 0.0);
  bg(0, 1) = 0.1;
  bg(2, 0) = -0.05;
  bg(1, 2) = 0.07;
  return finslift::randers(identity(3), {0.3, 0.0, 0.1}, bg, 1.3);
}

inline std::vector<finslift::MetricModel> builtin_metrics() {
  return {finslift::euclidean(3), finslift::sphere_chart(2), finslift::sphere_chart(3), randers3(),
          finslift::randers(identity(2), {0.3, 0.0})};
}

// Points with x in [0.4, 1.2]^n (inside every chart used here) and fiber
// components bounded away from zero.
inline std::vector<finslift::AmbientPoint> points(int n, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.4, 1.2), uy(0.25, 2.0), coin(0.0, 1.0);
  std::vector<finslift::AmbientPoint> out;
  for (int k = 0; k < count; ++k) {
    finslift::AmbientPoint p;
    for (int i = 0; i < n; ++i) {
      p.x.push_back(ux(rng));
      const double y = uy(rng);
      p.y.push_back(coin(rng) < 0.5 ? -y : y);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace fixtures
