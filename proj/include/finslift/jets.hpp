#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet holds the Taylor coefficients c_alpha of a scalar around a base point,
//   f(p + d) = sum_{|alpha| <= order} c_alpha d^alpha,
// so that the mixed partial d^alpha f(p) equals alpha! * c_alpha. Arithmetic
// truncates at the smaller order of the operands, and differentiation lowers
// the order by one. Every derivative used by the geometry layer is taken this
// way; nothing is differentiated symbolically.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace finslift {

// Highest order any jet may carry. Curvature blocks of the metrical
// connection need five derivatives of F^2; the intrinsic fundamental function
// of a submanifold needs one more on the immersion.
inline constexpr int kMaxJetOrder = 6;

// Graded enumeration of monomials in `nvars` variables up to kMaxJetOrder.
// Monomials of degree <= k form a prefix of the enumeration for every k, so a
// jet of order k simply uses the first count(k) coefficients.
class MonomialTable {
 public:
  struct Pair {
    std::uint32_t a, b, r;  // coefficient a times coefficient b lands in r
  };

  static const MonomialTable& get(int nvars);

  int nvars() const { return nvars_; }
  std::size_t count(int order) const { return count_[static_cast<std::size_t>(order)]; }
  int degree(std::size_t idx) const { return degree_[idx]; }
  int exponent(std::size_t idx, int var) const {
    return exps_[idx * static_cast<std::size_t>(nvars_) + static_cast<std::size_t>(var)];
  }
  // Index of monomial idx * x_var, or -1 when that exceeds kMaxJetOrder.
  std::ptrdiff_t raise(int var, std::size_t idx) const;
  // Index of monomial idx / x_var, or -1 when x_var does not divide it.
  std::ptrdiff_t lower(int var, std::size_t idx) const;
  std::size_t index_of(std::span<const int> exps) const;
  std::span<const Pair> pairs(int order) const;

 private:
  explicit MonomialTable(int nvars);

  int nvars_;
  std::vector<std::size_t> count_;
  std::vector<int> degree_;
  std::vector<std::uint8_t> exps_;
  std::vector<std::ptrdiff_t> raise_;
  std::vector<std::ptrdiff_t> lower_;
  std::vector<Pair> pairs_;
  std::vector<std::size_t> pair_end_;
  std::vector<std::uint64_t> keys_;  // sorted packed exponents
  std::vector<std::size_t> key_index_;
};

class Jet {
 public:
  Jet() = default;

  static Jet constant(int nvars, int order, double value);
  static Jet variable(int nvars, int order, int var, double at);

  bool empty() const { return table_ == nullptr; }
  int nvars() const { return table_ ? table_->nvars() : 0; }
  int order() const { return order_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  std::span<const double> coeffs() const { return c_; }
  const MonomialTable& table() const { return *table_; }

  // Mixed partial d^alpha at the base point; `exps` holds one exponent per
  // variable.
  double partial(std::span<const int> exps) const;
  // First-order partial in one variable at the base point.
  double partial(int var) const;

  Jet derivative(int var) const;
  Jet truncated(int order) const;
  // Same jet with its constant term replaced by zero.
  Jet displacement() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);

 private:
  friend class Composer;
  friend Jet apply_series(const Jet& a, std::span<const double> taylor);

  void align_with(const Jet& o);

  const MonomialTable* table_ = nullptr;
  int order_ = 0;
  std::vector<double> c_;
};

// Univariate composition: given t_k = f^(k)(a0)/k!, returns f(a) as a jet.
Jet apply_series(const Jet& a, std::span<const double> taylor);

Jet reciprocal(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double exponent);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet square(const Jet& a);

// Substitutes displacement jets into an outer jet: the outer jet is a Taylor
// polynomial in k variables, the displacements are k jets (over another set of
// variables) whose constant terms are ignored. Used to pull objects computed
// on the ambient slit bundle back along an immersion.
class Composer {
 public:
  Composer(std::span<const Jet> displacements, int max_order);
  Jet operator()(const Jet& outer) const;
  int order() const { return order_; }

 private:
  const MonomialTable* outer_ = nullptr;
  int order_;
  std::vector<Jet> powers_;
};

using JetSpan = std::span<const Jet>;

// A scalar function of two groups of coordinates (x-slots then y-slots),
// evaluated on jets. Must be deterministic.
struct ScalarField {
  int n_x = 0;
  int n_y = 0;
  std::function<Jet(JetSpan x, JetSpan y)> eval;

  double operator()(std::span<const double> x, std::span<const double> y) const;
};

// One derivative slot of a multi-index.
struct Slot {
  enum Kind { X, Y };
  Kind kind;
  int index;
};
using MultiIndex = std::vector<Slot>;

inline Slot dx(int i) { return {Slot::X, i}; }
inline Slot dy(int i) { return {Slot::Y, i}; }

// Exact mixed partial of f at (x, y); only the slots named in `mi` are lifted
// to jet variables.
double partial(const ScalarField& f, std::span<const double> x, std::span<const double> y,
               const MultiIndex& mi);

// Nested central-difference estimate of the same partial, for cross-checks.
double fd_partial(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                  const MultiIndex& mi, double step);
// Step chosen per slot as eps^(1/(k+2)) * (1 + |coordinate|), k = |mi|.
double fd_partial(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                  const MultiIndex& mi);

}  // namespace finslift
