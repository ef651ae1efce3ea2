#pragma once

// Spray, Cartan nonlinear connection, Cartan metrical N-linear connection,
// torsion and curvature d-tensors on the slit bundle, and the commutator
// oracle for curvature.
//
// Everything is evaluated on jet fields over 2*dim variables (base
// coordinates first, then fiber coordinates), so the same code serves the
// ambient space and any submanifold viewed through its own coordinates.

#include <string>
#include <utility>
#include <vector>

#include "finslift/jet_linalg.hpp"
#include "finslift/metric.hpp"

namespace finslift {

// Order of the F^2 jet needed for curvature.
inline constexpr int kFieldOrder = 5;

// A nonlinear connection plus the four blocks of an N-linear connection,
// as jet fields. L10 and C11 act on vertical-type indices.
struct Connection {
  int dim = 0;
  JetTensor N;                   // N^a_b
  JetTensor L00, L10, C01, C11;  // [a][b][c]
};

struct CartanFields : Connection {
  double p = 1.0;
  JetTensor g, g_inv, h, h_inv;
  Jet norm_sq;
  JetTensor gamma;  // [a][b][c]
  JetTensor G;      // [a]
};

// F2 is a jet over 2*dim variables of order >= 4 (>= 5 for curvature).
CartanFields cartan_fields(const Jet& F2, int dim, const std::vector<double>& y0, double p);
CartanFields cartan_fields(const MetricModel& M, const AmbientPoint& pt, int order = kFieldOrder);

Jet delta(const Connection& c, const Jet& f, int a);  // delta_a f
Jet vdot(const Connection& c, const Jet& f, int a);   // partial f / partial y^a

enum class IndexType { H, V };
enum class Direction { H, V };
struct IndexSpec {
  bool upper;
  IndexType type;
};
inline IndexSpec up(IndexType t) { return {true, t}; }
inline IndexSpec down(IndexType t) { return {false, t}; }

// Covariant derivative of a d-tensor field; the derivative index is appended
// last. H direction: delta_c plus L00 / L10 terms. V direction: partial
// along y^c plus C01 / C11 terms. H-type indices take the 00/01 blocks,
// V-type indices the 10/11 blocks. Throws VarianceMismatch when `spec` does
// not describe the field.
JetTensor covariant_derivative(const Connection& c, const JetTensor& field,
                               const std::vector<IndexSpec>& spec, Direction dir);

// [delta_b, delta_c] = R^a_bc dot_a,  [delta_b, dot_c] = B^a_bc dot_a.
struct Brackets {
  JetTensor R;  // R^a_bc = delta_c N^a_b - delta_b N^a_c
  JetTensor B;  // B^a_bc = dot_c N^a_b
};
Brackets bracket_fields(const Connection& c);

struct TorsionAtPoint {
  Array T00, R01, P10, P11, S11;  // [a][b][c]
};
TorsionAtPoint torsion(const Connection& c);

struct CurvatureAtPoint {
  Array RH, PH, SH, RV, PV, SV;  // [a][b][c][d] for R_b^a_cd
};
CurvatureAtPoint curvature(const Connection& c);

enum class CurvatureBlock { RH, PH, SH, RV, PV, SV };
std::string block_name(CurvatureBlock b);
inline constexpr CurvatureBlock kAllBlocks[] = {CurvatureBlock::RH, CurvatureBlock::PH,
                                                CurvatureBlock::SH, CurvatureBlock::RV,
                                                CurvatureBlock::PV, CurvatureBlock::SV};
const Array& select(const CurvatureAtPoint& k, CurvatureBlock b);

// Curvature read off R(U, W)Z = [nabla_U, nabla_W]Z - nabla_[U,W] Z on adapted
// basis fields, with the Lie bracket taken in coordinate components.
Array commutator_curvature(const Connection& c, CurvatureBlock b);

// Vector field on the slit bundle in adapted components.
struct VectorField {
  std::vector<Jet> h, v;
};
VectorField horizontal_basis(const Connection& c, int b);
VectorField vertical_basis(const Connection& c, int b);
Jet apply(const Connection& c, const VectorField& U, const Jet& f);
VectorField lie_bracket(const Connection& c, const VectorField& U, const VectorField& W);
VectorField nabla(const Connection& c, const VectorField& U, const VectorField& Z);

// Point-valued interface.

struct NonlinearConnAtPoint {
  Array N;      // N^a_b
  Array dN_dy;  // [a][b][c] = dot_c N^a_b
  Array dN_dx;  // [a][b][c] = partial_c N^a_b
};

struct DConnAtPoint {
  Array L00, L10, C01, C11;
};

Array christoffel(const MetricModel& M, const AmbientPoint& p);
std::vector<double> spray(const MetricModel& M, const AmbientPoint& p);
NonlinearConnAtPoint cartan_nonlinear_connection(const MetricModel& M, const AmbientPoint& p);
std::vector<double> delta_derivative(const MetricModel& M, const AmbientPoint& p, const ScalarField& f);
DConnAtPoint cartan_metrical_connection(const MetricModel& M, const AmbientPoint& p);
std::pair<Array, Array> bracket_coefficients(const MetricModel& M, const AmbientPoint& p);
TorsionAtPoint torsion_tensors(const MetricModel& M, const AmbientPoint& p);
CurvatureAtPoint curvature_tensors(const MetricModel& M, const AmbientPoint& p);
Array commutator_curvature_oracle(const MetricModel& M, const AmbientPoint& p, CurvatureBlock b);

// Largest entry of the four metricity residuals
// g_ab|0c, g_ab|1c (C01), h_ab|0c (L10), h_ab|1c (C11).
struct MetricityResiduals {
  double g_h, g_v, h_h, h_v;
};
MetricityResiduals metricity(const Connection& c, const JetTensor& g, const JetTensor& h);
MetricityResiduals metricity(const CartanFields& f);

}  // namespace finslift
