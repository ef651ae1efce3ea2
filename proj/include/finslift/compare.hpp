#pragma once

// Intrinsic geometry of a submanifold (the Cartan construction applied to the
// restricted fundamental function) and its comparison with the induced one.
//
// All fields are jets over (u, v). "Closed form" objects are evaluated from
// the printed expressions; "oracle" objects are plain differences of
// independently computed quantities.

#include <string>
#include <vector>

#include "finslift/submanifold.hpp"

namespace finslift {

// F2(u, v) = F2(x(u), B(u) v) as a metric on the submanifold chart.
MetricModel intrinsic_model(const MetricModel& M, const Immersion& I);
inline AmbientPoint as_point(const SubPoint& sp) { return {sp.u, sp.v}; }

struct ComparisonFields {
  SubmanifoldFields sub;
  CartanFields intrinsic;
  Connection tangent_ring;  // tangent blocks, adapted to the intrinsic N instead of the induced one
  JetTensor D;              // intrinsic N - induced N
  JetTensor D_lit;          // closed form of D, literal reading
  Brackets intrinsic_br, induced_br;
  JetTensor D100, D101;                   // closed forms
  JetTensor dH00, dV10;                   // L00, L10: intrinsic - tangent
  JetTensor dH00_lit, dV10_lit, d10_lit;  // closed forms, literal readings
};

ComparisonFields comparison_fields(const MetricModel& M, const Immersion& I, const SubPoint& sp);

// Point-valued operations.

Array connection_difference(const MetricModel& M, const Immersion& I, const SubPoint& sp);

// max over alpha and the test functions of |delta_int_a f - delta_a f + D^b_a dot_b f|
double adapted_basis_residual(const ComparisonFields& cf, unsigned seed, int functions = 5);

// max over the test functions of the commutator of adapted fields minus the
// bracket coefficients applied to f
double bracket_commutator_residual(const Connection& c, unsigned seed, int functions = 5);

struct BracketDifference {
  Array D100, D101;            // closed forms
  Array R_diff, B_diff;        // intrinsic - induced brackets
};
BracketDifference bracket_difference(const ComparisonFields& cf);

struct DeformationDeltas {
  Array dH00, dV10;                  // oracle
  Array dH00_lit, dV10_lit, d10_lit;  // literal
};
DeformationDeltas deformation_deltas(const ComparisonFields& cf);

// Components of the deformation tensor in the intrinsic adapted basis:
// [alpha][beta][gamma] for D(delta_gamma, e_beta) with e_beta = delta_beta
// (00 blocks) or dot_beta (10 blocks).
struct DeformationComponents {
  Array D00H, D00V, D10H, D10V;
};
// From the difference of the two covariant derivatives on adapted fields.
DeformationComponents deformation_components(const ComparisonFields& cf);
// From the displayed component formulas, with the oracle deltas.
DeformationComponents deformation_components_closed(const ComparisonFields& cf);

struct ComparisonRow {
  std::string name;
  std::string tag;
  double abs_residual = 0;
  double residual = 0;  // abs_residual / (1 + max-abs of both sides)
  double tolerance = 0;
  bool informational = false;
  bool pass = true;
  std::vector<double> lhs, rhs;  // flattened sides
};
ComparisonRow make_row(std::string name, std::string tag, const Array& lhs, const Array& rhs,
                       double tolerance, bool informational = false);

std::vector<ComparisonRow> nonlinear_rows(const ComparisonFields& cf, unsigned seed);
std::vector<ComparisonRow> connection_rows(const ComparisonFields& cf);
std::vector<ComparisonRow> torsion_rows(const ComparisonFields& cf);
std::vector<ComparisonRow> curvature_rows(const ComparisonFields& cf);

}  // namespace finslift
