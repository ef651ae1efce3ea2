#include "finslift/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "finslift/errors.hpp"

namespace finslift {

namespace {

constexpr int kBitsPerVar = 3;  // exponents never exceed kMaxJetOrder < 8
constexpr int kMaxVars = 64 / kBitsPerVar;

std::uint64_t pack(std::span<const std::uint8_t> e) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    key |= static_cast<std::uint64_t>(e[i]) << (kBitsPerVar * i);
  }
  return key;
}

void enumerate_degree(int nvars, int degree, int var, std::vector<std::uint8_t>& cur,
                      std::vector<std::uint8_t>& out) {
  if (var == nvars - 1) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(degree);
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
    enumerate_degree(nvars, degree - e, var + 1, cur, out);
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

MonomialTable::MonomialTable(int nvars) : nvars_(nvars) {
  const auto nv = static_cast<std::size_t>(nvars);
  std::vector<std::uint8_t> cur(nv, 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    enumerate_degree(nvars, d, 0, cur, exps_);
    count_.push_back(exps_.size() / nv);
  }
  const std::size_t total = count_.back();
  degree_.resize(total);
  for (int d = 0, idx = 0; d <= kMaxJetOrder; ++d) {
    for (; static_cast<std::size_t>(idx) < count_[static_cast<std::size_t>(d)]; ++idx) {
      degree_[static_cast<std::size_t>(idx)] = d;
    }
  }

  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(total);
  for (std::size_t i = 0; i < total; ++i) {
    keyed[i] = {pack(std::span(exps_).subspan(i * nv, nv)), i};
  }
  std::sort(keyed.begin(), keyed.end());
  for (const auto& [k, i] : keyed) {
    keys_.push_back(k);
    key_index_.push_back(i);
  }
  auto find_key = [&](std::uint64_t key) -> std::ptrdiff_t {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return -1;
    return static_cast<std::ptrdiff_t>(key_index_[static_cast<std::size_t>(it - keys_.begin())]);
  };

  raise_.assign(nv * total, -1);
  lower_.assign(nv * total, -1);
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint64_t key = pack(std::span(exps_).subspan(i * nv, nv));
    for (std::size_t v = 0; v < nv; ++v) {
      const std::uint64_t unit = std::uint64_t{1} << (kBitsPerVar * v);
      if (degree_[i] < kMaxJetOrder) raise_[v * total + i] = find_key(key + unit);
      if (exps_[i * nv + v] > 0) lower_[v * total + i] = find_key(key - unit);
    }
  }

  std::vector<std::uint64_t> packed(total);
  for (std::size_t i = 0; i < total; ++i) packed[i] = pack(std::span(exps_).subspan(i * nv, nv));
  std::vector<std::vector<Pair>> by_degree(kMaxJetOrder + 1);
  for (std::size_t a = 0; a < total; ++a) {
    const int room = kMaxJetOrder - degree_[a];
    for (std::size_t b = 0; b < count_[static_cast<std::size_t>(room)]; ++b) {
      const auto r = static_cast<std::size_t>(find_key(packed[a] + packed[b]));
      by_degree[static_cast<std::size_t>(degree_[r])].push_back(
          {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
           static_cast<std::uint32_t>(r)});
    }
  }
  for (const auto& bucket : by_degree) {
    pairs_.insert(pairs_.end(), bucket.begin(), bucket.end());
    pair_end_.push_back(pairs_.size());
  }
}

const MonomialTable& MonomialTable::get(int nvars) {
  if (nvars < 1 || nvars > kMaxVars) {
    throw std::invalid_argument("jet variable count out of range: " + std::to_string(nvars));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const MonomialTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nvars];
  if (!slot) slot.reset(new MonomialTable(nvars));
  return *slot;
}

std::ptrdiff_t MonomialTable::raise(int var, std::size_t idx) const {
  return raise_[static_cast<std::size_t>(var) * count_.back() + idx];
}

std::ptrdiff_t MonomialTable::lower(int var, std::size_t idx) const {
  return lower_[static_cast<std::size_t>(var) * count_.back() + idx];
}

std::size_t MonomialTable::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != nvars_) {
    throw std::invalid_argument("multi-index length does not match jet variable count");
  }
  int deg = 0;
  std::vector<std::uint8_t> e(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0) throw std::invalid_argument("negative exponent in multi-index");
    deg += exps[i];
    e[i] = static_cast<std::uint8_t>(std::min(exps[i], 7));
  }
  if (deg > kMaxJetOrder) {
    throw OrderOverflow("derivative order " + std::to_string(deg) + " exceeds maximum " +
                        std::to_string(kMaxJetOrder));
  }
  const std::uint64_t key = pack(e);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  return key_index_[static_cast<std::size_t>(it - keys_.begin())];
}

std::span<const MonomialTable::Pair> MonomialTable::pairs(int order) const {
  return std::span(pairs_).first(pair_end_[static_cast<std::size_t>(order)]);
}

// ---------------------------------------------------------------------------

Jet Jet::constant(int nvars, int order, double value) {
  if (order < 0 || order > kMaxJetOrder) {
    throw OrderOverflow("jet order " + std::to_string(order) + " out of range");
  }
  Jet j;
  j.table_ = &MonomialTable::get(nvars);
  j.order_ = order;
  j.c_.assign(j.table_->count(order), 0.0);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int nvars, int order, int var, double at) {
  Jet j = constant(nvars, order, at);
  if (order >= 1) {
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(var)] = 1;
    j.c_[j.table_->index_of(e)] = 1.0;
  }
  return j;
}

double Jet::partial(std::span<const int> exps) const {
  const std::size_t idx = table_->index_of(exps);
  if (table_->degree(idx) > order_) {
    throw OrderOverflow("requested derivative exceeds jet order " + std::to_string(order_));
  }
  double scale = 1.0;
  for (int e : exps) scale *= factorial(e);
  return c_[idx] * scale;
}

double Jet::partial(int var) const {
  if (order_ < 1) throw OrderOverflow("first derivative of an order-0 jet");
  std::vector<int> e(static_cast<std::size_t>(nvars()), 0);
  e[static_cast<std::size_t>(var)] = 1;
  return c_[table_->index_of(e)];
}

Jet Jet::derivative(int var) const {
  if (order_ < 1) throw OrderOverflow("derivative of an order-0 jet");
  Jet r;
  r.table_ = table_;
  r.order_ = order_ - 1;
  const std::size_t n = table_->count(r.order_);
  r.c_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto up = static_cast<std::size_t>(table_->raise(var, i));
    r.c_[i] = (table_->exponent(i, var) + 1) * c_[up];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  Jet r = *this;
  if (order < order_) {
    r.order_ = order;
    r.c_.resize(table_->count(order));
  }
  return r;
}

Jet Jet::displacement() const {
  Jet r = *this;
  r.c_[0] = 0.0;
  return r;
}

void Jet::align_with(const Jet& o) {
  if (table_ != o.table_) {
    throw std::logic_error("jet arithmetic across different variable sets");
  }
  if (o.order_ < order_) {
    order_ = o.order_;
    c_.resize(table_->count(order_));
  }
}

Jet& Jet::operator+=(const Jet& o) {
  align_with(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  align_with(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.table_ != b.table_) throw std::logic_error("jet arithmetic across different variable sets");
  Jet r;
  r.table_ = a.table_;
  r.order_ = std::min(a.order_, b.order_);
  r.c_.assign(r.table_->count(r.order_), 0.0);
  const double* pa = a.c_.data();
  const double* pb = b.c_.data();
  double* pr = r.c_.data();
  for (const auto& p : r.table_->pairs(r.order_)) pr[p.r] += pa[p.a] * pb[p.b];
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }
Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (double& c : c_) c *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (double& c : c_) c /= s;
  return *this;
}
Jet Jet::operator-() const {
  Jet r = *this;
  for (double& c : r.c_) c = -c;
  return r;
}

Jet apply_series(const Jet& a, std::span<const double> taylor) {
  const Jet d = a.displacement();
  Jet r = Jet::constant(a.nvars(), a.order(), taylor[static_cast<std::size_t>(a.order())]);
  for (int k = a.order() - 1; k >= 0; --k) {
    r = r * d;
    r.c_[0] += taylor[static_cast<std::size_t>(k)];
  }
  return r;
}

namespace {

// Coefficients of (a0 + d)^r around a0: binom(r, k) a0^(r-k).
std::vector<double> power_series(double a0, double r, int order) {
  std::vector<double> t(static_cast<std::size_t>(order) + 1);
  double binom = 1.0;
  for (int k = 0; k <= order; ++k) {
    t[static_cast<std::size_t>(k)] = binom * std::pow(a0, r - k);
    binom *= (r - k) / (k + 1);
  }
  return t;
}

}  // namespace

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0 || !std::isfinite(a0)) throw DomainError("division by a jet with zero constant term");
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  double p = 1.0 / a0;
  for (auto& tk : t) {
    tk = p;
    p *= -1.0 / a0;
  }
  return apply_series(a, t);
}

Jet sqrt(const Jet& a) {
  if (!(a.value() > 0.0)) throw DomainError("sqrt of a jet with non-positive constant term");
  return apply_series(a, power_series(a.value(), 0.5, a.order()));
}

Jet pow(const Jet& a, double exponent) {
  if (!(a.value() > 0.0)) throw DomainError("pow of a jet with non-positive constant term");
  return apply_series(a, power_series(a.value(), exponent, a.order()));
}

Jet exp(const Jet& a) {
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  const double e = std::exp(a.value());
  for (int k = 0; k <= a.order(); ++k) t[static_cast<std::size_t>(k)] = e / factorial(k);
  return apply_series(a, t);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw DomainError("log of a jet with non-positive constant term");
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  t[0] = std::log(a0);
  for (int k = 1; k <= a.order(); ++k) {
    t[static_cast<std::size_t>(k)] = ((k % 2) ? 1.0 : -1.0) / (k * std::pow(a0, k));
  }
  return apply_series(a, t);
}

namespace {

std::vector<double> trig_series(double a0, int order, int shift) {
  std::vector<double> t(static_cast<std::size_t>(order) + 1);
  const double s = std::sin(a0);
  const double c = std::cos(a0);
  for (int k = 0; k <= order; ++k) {
    double v = 0.0;
    switch ((k + shift) % 4) {
      case 0: v = s; break;
      case 1: v = c; break;
      case 2: v = -s; break;
      case 3: v = -c; break;
    }
    t[static_cast<std::size_t>(k)] = v / factorial(k);
  }
  return t;
}

}  // namespace

Jet sin(const Jet& a) { return apply_series(a, trig_series(a.value(), a.order(), 0)); }
Jet cos(const Jet& a) { return apply_series(a, trig_series(a.value(), a.order(), 1)); }
Jet square(const Jet& a) { return a * a; }

// ---------------------------------------------------------------------------

Composer::Composer(std::span<const Jet> displacements, int max_order) {
  if (displacements.empty()) throw std::invalid_argument("composition needs displacements");
  order_ = max_order;
  for (const auto& d : displacements) order_ = std::min(order_, d.order());
  const auto& outer = MonomialTable::get(static_cast<int>(displacements.size()));
  outer_ = &outer;
  const int inner_vars = displacements.front().nvars();
  std::vector<Jet> disp;
  for (const auto& d : displacements) disp.push_back(d.truncated(order_).displacement());
  const std::size_t n = outer.count(order_);
  powers_.resize(n);
  powers_[0] = Jet::constant(inner_vars, order_, 1.0);
  for (std::size_t idx = 1; idx < n; ++idx) {
    int var = 0;
    while (outer.exponent(idx, var) == 0) ++var;
    const auto prev = static_cast<std::size_t>(outer.lower(var, idx));
    powers_[idx] = powers_[prev] * disp[static_cast<std::size_t>(var)];
  }
}

Jet Composer::operator()(const Jet& outer) const {
  const int order = std::min(order_, outer.order());
  if (&outer.table() != outer_) {
    throw std::logic_error("composition variable mismatch");
  }
  const std::size_t n = outer_->count(order);
  Jet r = Jet::constant(powers_[0].nvars(), order, 0.0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double c = outer.c_[idx];
    if (c == 0.0) continue;
    const auto& p = powers_[idx].c_;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += c * p[k];
  }
  return r;
}

// ---------------------------------------------------------------------------

double ScalarField::operator()(std::span<const double> x, std::span<const double> y) const {
  std::vector<Jet> xs, ys;
  for (double v : x) xs.push_back(Jet::constant(1, 0, v));
  for (double v : y) ys.push_back(Jet::constant(1, 0, v));
  return eval(xs, ys).value();
}

namespace {

void check_slots(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                 const MultiIndex& mi) {
  if (static_cast<int>(x.size()) != f.n_x || static_cast<int>(y.size()) != f.n_y) {
    throw std::invalid_argument("point dimensions do not match field arity");
  }
  if (static_cast<int>(mi.size()) > kMaxJetOrder) {
    throw OrderOverflow("multi-index order " + std::to_string(mi.size()) + " exceeds maximum " +
                        std::to_string(kMaxJetOrder));
  }
  for (const auto& s : mi) {
    const int limit = s.kind == Slot::X ? f.n_x : f.n_y;
    if (s.index < 0 || s.index >= limit) throw std::invalid_argument("multi-index slot out of range");
  }
}

}  // namespace

double partial(const ScalarField& f, std::span<const double> x, std::span<const double> y,
               const MultiIndex& mi) {
  check_slots(f, x, y, mi);
  // distinct slots become the active jet variables
  std::vector<std::pair<Slot::Kind, int>> active;
  std::vector<int> exps;
  for (const auto& s : mi) {
    auto key = std::make_pair(s.kind, s.index);
    auto it = std::find(active.begin(), active.end(), key);
    if (it == active.end()) {
      active.push_back(key);
      exps.push_back(1);
    } else {
      ++exps[static_cast<std::size_t>(it - active.begin())];
    }
  }
  const int order = static_cast<int>(mi.size());
  const int nv = std::max<int>(1, static_cast<int>(active.size()));
  auto lift = [&](Slot::Kind kind, std::span<const double> coords) {
    std::vector<Jet> out;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      auto it = std::find(active.begin(), active.end(), std::make_pair(kind, static_cast<int>(i)));
      if (it == active.end()) {
        out.push_back(Jet::constant(nv, order, coords[i]));
      } else {
        out.push_back(Jet::variable(nv, order, static_cast<int>(it - active.begin()), coords[i]));
      }
    }
    return out;
  };
  const auto xs = lift(Slot::X, x);
  const auto ys = lift(Slot::Y, y);
  const Jet r = f.eval(xs, ys);
  if (active.empty()) return r.value();
  return r.partial(exps);
}

double fd_partial(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                  const MultiIndex& mi, double step) {
  check_slots(f, x, y, mi);
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::function<double(std::size_t)> rec = [&](std::size_t k) -> double {
    if (k == mi.size()) return f(xs, ys);
    auto& coord = mi[k].kind == Slot::X ? xs[static_cast<std::size_t>(mi[k].index)]
                                        : ys[static_cast<std::size_t>(mi[k].index)];
    const double saved = coord;
    coord = saved + step;
    const double plus = rec(k + 1);
    coord = saved - step;
    const double minus = rec(k + 1);
    coord = saved;
    return (plus - minus) / (2.0 * step);
  };
  return rec(0);
}

double fd_partial(const ScalarField& f, std::span<const double> x, std::span<const double> y,
                  const MultiIndex& mi) {
  double scale = 0.0;
  for (const auto& s : mi) {
    const double c = s.kind == Slot::X ? x[static_cast<std::size_t>(s.index)]
                                       : y[static_cast<std::size_t>(s.index)];
    scale = std::max(scale, std::abs(c));
  }
  const double k = static_cast<double>(mi.size());
  const double step =
      std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2.0)) * (1.0 + scale);
  return fd_partial(f, x, y, mi, step);
}

}  // namespace finslift
