#pragma once

// Immersed submanifolds: lifted points, the moving frame and its dual, the
// induced metric and nonlinear connection, the coupling, the induced tangent
// and normal connections, and relative covariant derivatives.
//
// Fields on the sub-bundle are jets over 2*m variables (u then v). Ambient
// fields are computed at the lifted point and pulled back by composition.

#include <functional>
#include <string>
#include <vector>

#include "finslift/ambient.hpp"

namespace finslift {

struct Immersion {
  int m = 0;
  int n = 0;
  std::string kind;
  std::function<std::vector<Jet>(JetSpan u)> x;
};

// x = (u1, ..., um, 0, ..., 0) in dimension n.
Immersion plane_immersion(int m, int n);
// x = x0 + A u with A of shape n x m.
Immersion linear_immersion(std::vector<double> x0, Array A);
// Sphere of the given radius in R^3, x = r(sin u1 cos u2, sin u1 sin u2, cos u1).
Immersion sphere_immersion(double radius = 1.0);
// x = (r cos u1, r sin u1, u2).
Immersion cylinder_immersion(double radius = 1.0);
// x = (u1, u2, u1 u2).
Immersion graph_immersion();
Immersion custom_immersion(int m, int n, std::function<std::vector<Jet>(JetSpan u)> x);

struct SubPoint {
  std::vector<double> u;
  std::vector<double> v;
};

// x = x(u), y = B v. Throws RankDeficiency when rank B < m.
AmbientPoint lift_point(const Immersion& I, const SubPoint& sp);

struct SubmanifoldFields {
  int m = 0;
  int n = 0;
  double p = 1.0;
  AmbientPoint lifted;

  JetTensor B;         // [a][alpha]
  JetTensor B2;        // [a][alpha][beta]
  JetTensor B0;        // [a][beta] = B2^a_{alpha beta} v^alpha
  JetTensor Bdual;     // [alpha][a]
  JetTensor Bbar;      // [a][abar]
  JetTensor Bbardual;  // [abar][a]
  JetTensor K;         // [abar][beta]
  std::vector<int> normal_pivots;

  CartanFields ambient;  // over the 2n ambient variables

  // ambient fields composed with (x(u), B(u) v)
  JetTensor g, N, L00, L10, C01, C11;

  JetTensor g_sub, h_sub;  // induced g_{alpha beta} and its lift
  Jet norm_sq;             // g_{alpha beta} v^alpha v^beta

  JetTensor cL00, cL10, cC01, cC11;  // coupling [a][b][delta]
  Connection tangent;                // N = induced connection, tangent blocks
  JetTensor nL00, nL10, nC01, nC11;  // normal [abar][bbar][delta]
};

// `normal_N`, when given, replaces the induced connection in the adapted
// derivative of the normal frame.
SubmanifoldFields submanifold_fields(const MetricModel& M, const Immersion& I, const SubPoint& sp,
                                     const JetTensor* normal_N = nullptr);

// Adapted derivative on the sub-bundle for a nonlinear connection Nsub.
Jet sub_delta(const JetTensor& Nsub, int m, const Jet& f, int delta);

// Point-valued interface.

struct FrameAtPoint {
  Array B, B2, Bbar, Bdual, Bbardual, K;
};

struct CouplingAtPoint {
  Array L00, L10, C01, C11;  // [a][b][delta]
};

FrameAtPoint build_frame(const MetricModel& M, const Immersion& I, const SubPoint& sp);
Array induced_metric(const MetricModel& M, const Immersion& I, const SubPoint& sp);
Array induced_nonlinear_connection(const MetricModel& M, const Immersion& I, const SubPoint& sp);
CouplingAtPoint coupling_coefficients(const MetricModel& M, const Immersion& I, const SubPoint& sp);
DConnAtPoint tangent_connection(const MetricModel& M, const Immersion& I, const SubPoint& sp);
DConnAtPoint normal_connection(const MetricModel& M, const Immersion& I, const SubPoint& sp);

// Index of a mixed d-tensor: which bundle it lives in, its variance and
// whether it is acted on by the 00/01 blocks (H) or the 10/11 blocks (V).
enum class Space { Ambient, Tangent, Normal };
struct MixedIndex {
  Space space;
  bool upper;
  IndexType type;
};

// Relative covariant derivative; the tangent derivative index is appended.
JetTensor relative_covariant_derivative(const SubmanifoldFields& s, const JetTensor& field,
                                        const std::vector<MixedIndex>& spec, Direction dir);

// Largest residual of the duality conditions and the completeness identity.
struct DualityResiduals {
  double tangent_tangent, tangent_normal, normal_tangent, normal_normal, completeness;
};
DualityResiduals duality(const FrameAtPoint& f);

}  // namespace finslift
