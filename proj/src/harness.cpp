#include "finslift/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "json.hpp"

#include "finslift/ambient.hpp"
#include "finslift/errors.hpp"

#ifndef FINSLIFT_SCENARIO_DIR
#define FINSLIFT_SCENARIO_DIR "scenarios"
#endif

namespace finslift {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& s, int line) {
  double v = 0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError("malformed number '" + t + "'", line);
  }
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("malformed integer '" + t + "'", line);
  }
  return v;
}

std::uint64_t parse_hex(const std::string& s, int line) {
  std::string t = trim(s);
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) t = t.substr(2);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, 16);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("malformed hexadecimal seed '" + trim(s) + "'", line);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_list(const std::string& s, int line) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_double(t, line));
  if (out.empty()) throw ConfigError("empty list", line);
  return out;
}

bool known_check(const std::string& name) {
  for (const auto& c : check_catalog()) {
    if (c.name == name || c.tag == name) return true;
  }
  return false;
}

// Broadcasts a single value to `dim` entries.
std::vector<double> fit(std::vector<double> v, int dim, const std::string& key, int line) {
  if (v.size() == 1 && dim > 1) v.assign(static_cast<std::size_t>(dim), v[0]);
  if (static_cast<int>(v.size()) != dim) {
    throw ConfigError(key + " needs " + std::to_string(dim) + " entries, got " + std::to_string(v.size()), line);
  }
  return v;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string name) {
  Scenario s;
  s.name = std::move(name);
  std::map<std::string, int> seen;
  std::map<std::string, std::string> raw;
  std::istringstream in{std::string(text)};
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", ln);
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string val = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", ln);
    if (seen.count(key)) throw ConfigError("duplicate key " + key, ln);
    seen[key] = ln;
    raw[key] = val;
  }

  auto line_of = [&](const std::string& k) { return seen.count(k) ? seen[k] : 0; };
  auto require = [&](const std::string& k) -> const std::string& {
    if (!raw.count(k)) throw ConfigError("missing required key " + k);
    return raw[k];
  };

  for (const auto& [key, val] : raw) {
    const int l = seen[key];
    if (key == "metric.kind") {
      s.metric_kind = val;
    } else if (key == "metric.n") {
      s.n = parse_int(val, l);
    } else if (key == "metric.p") {
      s.p = parse_double(val, l);
      if (!(s.p > 0)) throw ConfigError("metric.p must be positive", l);
    } else if (key.rfind("metric.params.", 0) == 0) {
      s.metric_params[key.substr(14)] = parse_list(val, l);
    } else if (key == "metric.box.lo") {
      s.metric_box.lo = parse_list(val, l);
    } else if (key == "metric.box.hi") {
      s.metric_box.hi = parse_list(val, l);
    } else if (key == "immersion.kind") {
      s.immersion_kind = val;
    } else if (key == "immersion.m") {
      s.m = parse_int(val, l);
    } else if (key.rfind("immersion.params.", 0) == 0) {
      s.immersion_params[key.substr(17)] = parse_list(val, l);
    } else if (key == "immersion.box.lo") {
      s.immersion_box.lo = parse_list(val, l);
    } else if (key == "immersion.box.hi") {
      s.immersion_box.hi = parse_list(val, l);
    } else if (key == "run.points") {
      s.points = parse_int(val, l);
      if (s.points < 1) throw ConfigError("run.points must be at least 1", l);
    } else if (key == "run.seed") {
      s.seed = parse_hex(val, l);
    } else if (key == "run.checks") {
      std::vector<std::string> names;
      if (!val.empty()) names = split(val, ',');
      for (const auto& c : names) {
        if (!known_check(c)) throw ConfigError("unknown check " + c, l);
      }
      s.checks = names;
    } else if (key.rfind("tol.", 0) == 0) {
      const std::string id = key.substr(4);
      if (!known_check(id)) throw ConfigError("unknown identity " + id, l);
      s.tol[id] = parse_double(val, l);
      if (!(s.tol[id] >= 0)) throw ConfigError("tolerance must be non-negative", l);
    } else {
      throw ConfigError("unknown key " + key, l);
    }
  }

  require("metric.kind");
  require("metric.n");
  require("immersion.kind");
  require("immersion.m");
  const int ln_n = line_of("metric.n"), ln_m = line_of("immersion.m");
  if (s.n < 2 || s.n > 4) throw ConfigError("metric.n must be between 2 and 4", ln_n);
  if (s.m < 2 || s.m >= s.n) throw ConfigError("immersion.m must satisfy 1 < m < n", ln_m);

  auto box = [&](Box& b, const std::string& prefix, int dim, double lo, double hi) {
    b.lo = b.lo.empty() ? std::vector<double>(static_cast<std::size_t>(dim), lo)
                        : fit(b.lo, dim, prefix + ".lo", line_of(prefix + ".lo"));
    b.hi = b.hi.empty() ? std::vector<double>(static_cast<std::size_t>(dim), hi)
                        : fit(b.hi, dim, prefix + ".hi", line_of(prefix + ".hi"));
    for (int i = 0; i < dim; ++i) {
      if (!(b.lo[static_cast<std::size_t>(i)] + 2e-3 < b.hi[static_cast<std::size_t>(i)])) {
        throw ConfigError(prefix + " is empty in coordinate " + std::to_string(i), line_of(prefix + ".hi"));
      }
    }
  };
  box(s.metric_box, "metric.box", s.n, 0.4, 1.2);
  box(s.immersion_box, "immersion.box", s.m, 0.4, 1.2);

  // Building the models validates kinds and parameter shapes.
  try {
    build_metric(s);
  } catch (const ConfigError& e) {
    if (e.line() > 0) throw;
    throw ConfigError(e.what(), line_of("metric.kind"));
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), line_of("metric.kind"));
  }
  try {
    build_immersion(s);
  } catch (const ConfigError& e) {
    if (e.line() > 0) throw;
    throw ConfigError(e.what(), line_of("immersion.kind"));
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), line_of("immersion.kind"));
  }
  return s;
}

std::string scenario_dir() {
  if (const char* env = std::getenv("FINSLIFT_SCENARIOS")) return env;
  return FINSLIFT_SCENARIO_DIR;
}

std::vector<std::string> shipped_scenarios() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(scenario_dir(), ec)) {
    if (e.path().extension() == ".scn") names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Scenario load_scenario(const std::string& ref) {
  std::filesystem::path path(ref);
  if (!std::filesystem::exists(path)) path = std::filesystem::path(scenario_dir()) / (ref + ".scn");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + ref);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.stem().string());
}

namespace {

const std::vector<double>* param(const std::map<std::string, std::vector<double>>& p, const std::string& k) {
  const auto it = p.find(k);
  return it == p.end() ? nullptr : &it->second;
}

Array matrix(const std::vector<double>& v, int rows, int cols, const std::string& key) {
  if (static_cast<int>(v.size()) != rows * cols) {
    throw ConfigError(key + " needs " + std::to_string(rows * cols) + " entries (row-major)");
  }
  Array a({rows, cols});
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = v[static_cast<std::size_t>(i * cols + j)];
  }
  return a;
}

void allow_only(const std::map<std::string, std::vector<double>>& p, std::initializer_list<const char*> names,
                const std::string& prefix) {
  for (const auto& [k, v] : p) {
    if (std::none_of(names.begin(), names.end(), [&](const char* n) { return k == n; })) {
      throw ConfigError("unknown parameter " + prefix + k);
    }
  }
}

double scalar(const std::map<std::string, std::vector<double>>& p, const std::string& k, double dflt,
              const std::string& prefix) {
  const auto* v = param(p, k);
  if (!v) return dflt;
  if (v->size() != 1) throw ConfigError(prefix + k + " must be a single number");
  return (*v)[0];
}

}  // namespace

MetricModel build_metric(const Scenario& s) {
  const auto& P = s.metric_params;
  const std::string pre = "metric.params.";
  if (s.metric_kind == "euclidean") {
    allow_only(P, {}, pre);
    return euclidean(s.n, s.p);
  }
  if (s.metric_kind == "sphere-chart") {
    allow_only(P, {}, pre);
    for (int i = 0; i + 1 < s.n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (!(s.metric_box.lo[ui] > 0 && s.metric_box.hi[ui] < M_PI)) {
        throw ConfigError("sphere-chart box must lie in (0, pi) in coordinate " + std::to_string(i));
      }
    }
    return sphere_chart(s.n, s.p);
  }
  if (s.metric_kind == "randers") {
    allow_only(P, {"a", "b", "b_grad"}, pre);
    const auto* b = param(P, "b");
    if (!b) throw ConfigError("missing required key metric.params.b");
    if (static_cast<int>(b->size()) != s.n) throw ConfigError("metric.params.b needs metric.n entries");
    Array a({s.n, s.n}, 0.0);
    for (int i = 0; i < s.n; ++i) a(i, i) = 1.0;
    if (const auto* av = param(P, "a")) a = matrix(*av, s.n, s.n, pre + "a");
    Array bg;
    if (const auto* gv = param(P, "b_grad")) bg = matrix(*gv, s.n, s.n, pre + "b_grad");
    return randers(a, *b, bg, s.p);
  }
  throw ConfigError("unknown metric.kind " + s.metric_kind);
}

Immersion build_immersion(const Scenario& s) {
  const auto& P = s.immersion_params;
  const std::string pre = "immersion.params.";
  const std::string& k = s.immersion_kind;
  auto need_surface = [&] {
    if (s.n != 3 || s.m != 2) throw ConfigError("immersion." + k + " needs m = 2 and n = 3");
  };
  if (k == "plane") {
    allow_only(P, {}, pre);
    return plane_immersion(s.m, s.n);
  }
  if (k == "linear") {
    allow_only(P, {"x0", "A"}, pre);
    std::vector<double> x0(static_cast<std::size_t>(s.n), 0.0);
    if (const auto* v = param(P, "x0")) {
      if (static_cast<int>(v->size()) != s.n) throw ConfigError("immersion.params.x0 needs metric.n entries");
      x0 = *v;
    }
    const auto* A = param(P, "A");
    if (!A) throw ConfigError("missing required key immersion.params.A");
    return linear_immersion(x0, matrix(*A, s.n, s.m, pre + "A"));
  }
  if (k == "sphere" || k == "cylinder") {
    need_surface();
    allow_only(P, {"radius"}, pre);
    const double r = scalar(P, "radius", 1.0, pre);
    if (!(r > 0)) throw ConfigError("immersion.params.radius must be positive");
    return k == "sphere" ? sphere_immersion(r) : cylinder_immersion(r);
  }
  if (k == "graph") {
    need_surface();
    allow_only(P, {}, pre);
    return graph_immersion();
  }
  throw ConfigError("unknown immersion.kind " + k);
}

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c = {
      {"ambient.metricity", "ambient", 1e-9, false, "g and h parallel for both derivative directions"},
      {"ambient.homogeneity", "ambient", 1e-10, false, "scaling of h, N, G and C01 in y at 0.5, 2, 3"},
      {"ambient.curvature-oracle.RH", "ambient", 1e-6, false, "formula vs commutator of covariant derivatives"},
      {"ambient.curvature-oracle.PH", "ambient", 1e-6, false, "formula vs commutator of covariant derivatives"},
      {"ambient.curvature-oracle.SH", "ambient", 1e-6, false, "formula vs commutator of covariant derivatives"},
      {"ambient.curvature-oracle.RV", "ambient", 1e-6, false, "formula vs commutator of covariant derivatives"},
      {"ambient.curvature-oracle.PV", "ambient", 1e-6, false, "formula vs commutator of covariant derivatives"},
      {"ambient.curvature-oracle.SV", "ambient", 1e-6, false, "formula vs commutator of covariant derivatives"},
      {"ambient.flat", "ambient", 1e-10, false, "euclidean: N, L00, C01, T00, R01, P10, RH, PH, SH vanish"},
      {"ambient.levi-civita", "ambient", 1e-10, false, "chart metric: L00 vs finite-difference Christoffels"},
      {"ambient.C01-zero", "ambient", 1e-11, false, "chart metric: C01 vanishes"},
      {"ambient.unit-sphere-curvature", "ambient", 1e-7, false, "sphere chart: RH of constant curvature 1"},
      {"frame.duality", "frame", 1e-11, false, "duality conditions and completeness"},
      {"frame.cobasis-restriction", "frame", 1e-9, false, "delta y = B delta v + Bbar K du on 20 directions"},
      {"submanifold.intrinsic-metric", "submanifold", 1e-10, false, "induced metric vs fundamental tensor of F(x(u), Bv)"},
      {"submanifold.tangent-metricity", "submanifold", 1e-9, false, "induced metric parallel for the tangent connection"},
      {"submanifold.normal-metricity", "submanifold", 1e-9, false, "normal metric parallel for the normal connection"},
      {"submanifold.round-metric", "submanifold", 1e-10, false, "euclidean sphere: induced metric r^2 diag(1, sin^2 u1)"},
      {"submanifold.gauss-christoffel", "submanifold", 1e-8, false, "euclidean sphere: tangent L00 vs round Christoffels"},
      {"compare.adapted-basis-relation", "nonlinear-difference", 1e-9, false, "intrinsic delta = induced delta - D dot"},
      {"compare.D-closed-form", "nonlinear-difference", 1e-7, true, "printed D vs intrinsic N - induced N"},
      {"compare.bracket-commutator-intrinsic", "brackets", 1e-8, false, "bracket coefficients vs commutators"},
      {"compare.bracket-commutator-induced", "brackets", 1e-8, false, "bracket coefficients vs commutators"},
      {"compare.bracket-difference-R", "brackets", 1e-7, false, "R difference vs closed form D100"},
      {"compare.bracket-difference-B", "brackets", 1e-7, false, "B difference vs closed form D101"},
      {"compare.bracket-difference-R-opposite-sign", "brackets", 1e-7, true, "same with the other sign convention"},
      {"compare.C01-intrinsic-equals-tangent", "connection-difference", 1e-8, false, "C01 blocks agree"},
      {"compare.C11-intrinsic-equals-tangent", "connection-difference", 1e-8, false, "C11 blocks agree"},
      {"compare.L00-delta-closed-form", "connection-difference", 1e-7, true, "printed L00 difference vs oracle"},
      {"compare.L10-delta-closed-form", "connection-difference", 1e-7, true, "printed L10 difference vs oracle"},
      {"compare.deformation-10-horizontal-zero", "deformation", 0.0, false, "structural zero block"},
      {"compare.deformation-00-horizontal", "deformation", 1e-7, false, "printed component vs covariant difference"},
      {"compare.deformation-00-vertical", "deformation", 1e-7, false, "printed component vs covariant difference"},
      {"compare.deformation-10-vertical", "deformation", 1e-7, true, "printed component vs covariant difference"},
      {"compare.T00-intrinsic-zero", "torsion", 1e-8, false, "intrinsic T00 vanishes"},
      {"compare.T00-tangent-zero", "torsion", 1e-8, true, "tangent T00 vanishes"},
      {"compare.S11-intrinsic-zero", "torsion", 1e-8, false, "intrinsic S11 vanishes"},
      {"compare.S11-tangent-zero", "torsion", 1e-8, false, "tangent S11 vanishes"},
      {"compare.P10-intrinsic-equals-tangent", "torsion", 1e-8, false, "P10 blocks agree"},
      {"compare.R01-difference", "torsion", 1e-7, false, "R01 difference equals D100"},
      {"compare.P11-difference", "torsion", 1e-7, false, "P11 difference from D101 and the L10 difference"},
      {"compare.P11-difference-closed-delta", "torsion", 1e-7, true, "same with the printed L10 difference"},
      {"compare.SH-intrinsic-equals-tangent", "curvature", 1e-8, false, "SH blocks agree"},
      {"compare.SV-intrinsic-equals-tangent", "curvature", 1e-8, false, "SV blocks agree"},
      {"compare.RH-difference-induced-adapted", "curvature", 1e-7, true, "printed RH difference, induced delta"},
      {"compare.RH-difference-intrinsic-adapted", "curvature", 1e-7, true, "printed RH difference, intrinsic delta"},
      {"compare.RV-difference-induced-adapted", "curvature", 1e-7, true, "printed RV difference, induced delta"},
      {"compare.RV-difference-intrinsic-adapted", "curvature", 1e-7, true, "printed RV difference, intrinsic delta"},
      {"compare.PH-difference-induced-adapted", "curvature", 1e-7, true, "printed PH difference, induced delta"},
      {"compare.PH-difference-intrinsic-adapted", "curvature", 1e-7, true, "printed PH difference, intrinsic delta"},
      {"compare.PV-difference-induced-adapted", "curvature", 1e-7, true, "printed PV difference, induced delta"},
      {"compare.PV-difference-intrinsic-adapted", "curvature", 1e-7, true, "printed PV difference, intrinsic delta"},
      {"point.domain-error", "point", 0.0, false, "a sample point could not be evaluated"},
  };
  return c;
}

namespace {

Array flat(const std::vector<double>& v) {
  Array a({static_cast<int>(v.size())});
  a.data() = v;
  return a;
}

void append(std::vector<double>& out, const Array& a) { out.insert(out.end(), a.data().begin(), a.data().end()); }

Array scaled(Array a, double s) {
  for (double& v : a.data()) v *= s;
  return a;
}

AmbientPoint scale_y(AmbientPoint p, double lam) {
  for (double& y : p.y) y *= lam;
  return p;
}

// Levi-Civita symbols from fourth-order central differences of g in x.
Array fd_christoffel(const MetricModel& M, const AmbientPoint& p) {
  const int n = M.n;
  const double h = 1e-3;
  Array dg({n, n, n});  // [a][b][c] = d_c g_ab
  for (int c = 0; c < n; ++c) {
    auto at = [&](double s) {
      AmbientPoint q = p;
      q.x[static_cast<std::size_t>(c)] += s;
      return fundamental_tensor(M, q);
    };
    const Array m2 = at(-2 * h), m1 = at(-h), p1 = at(h), p2 = at(2 * h);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) dg(a, b, c) = (m2(a, b) - 8 * m1(a, b) + 8 * p1(a, b) - p2(a, b)) / (12 * h);
    }
  }
  const Array g = fundamental_tensor(M, p);
  Eigen::MatrixXd ge(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) ge(a, b) = g(a, b);
  }
  const Eigen::MatrixXd gi = ge.inverse();
  Array G({n, n, n}, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) G(a, b, c) += 0.5 * gi(a, d) * (dg(d, c, b) + dg(b, d, c) - dg(b, c, d));
      }
    }
  }
  return G;
}

struct Raw {
  std::string name;
  Array lhs, rhs;
};

using Wanted = std::function<bool(const std::string&)>;

void ambient_checks(const Scenario& s, const MetricModel& M, const AmbientPoint& p, const Wanted& want,
                    std::vector<Raw>& out) {
  const bool riemannian = s.metric_kind != "randers";
  if (want("ambient.metricity")) {
    const auto r = metricity(cartan_fields(M, p));
    out.push_back({"ambient.metricity", flat({r.g_h, r.g_v, r.h_h, r.h_v}), Array({4}, 0.0)});
  }
  if (want("ambient.homogeneity")) {
    const auto h0 = homogeneous_lift(M, p).h;
    const auto N0 = cartan_nonlinear_connection(M, p).N;
    const auto G0 = flat(spray(M, p));
    const auto C0 = cartan_metrical_connection(M, p).C01;
    std::vector<double> lhs, rhs;
    for (double lam : {0.5, 2.0, 3.0}) {
      const auto q = scale_y(p, lam);
      append(lhs, scaled(homogeneous_lift(M, q).h, lam * lam));
      append(rhs, h0);
      append(lhs, cartan_nonlinear_connection(M, q).N);
      append(rhs, scaled(N0, lam));
      append(lhs, flat(spray(M, q)));
      append(rhs, scaled(G0, lam * lam));
      append(lhs, cartan_metrical_connection(M, q).C01);
      append(rhs, scaled(C0, 1 / lam));
    }
    out.push_back({"ambient.homogeneity", flat(lhs), flat(rhs)});
  }
  bool any_block = false;
  for (CurvatureBlock b : kAllBlocks) any_block = any_block || want("ambient.curvature-oracle." + block_name(b));
  const bool need_k = any_block || (s.metric_kind == "euclidean" && want("ambient.flat")) ||
                      (s.metric_kind == "sphere-chart" && want("ambient.unit-sphere-curvature"));
  CurvatureAtPoint k;
  if (need_k) k = curvature_tensors(M, p);
  for (CurvatureBlock b : kAllBlocks) {
    const std::string name = "ambient.curvature-oracle." + block_name(b);
    if (want(name)) out.push_back({name, select(k, b), commutator_curvature_oracle(M, p, b)});
  }
  if (s.metric_kind == "euclidean" && want("ambient.flat")) {
    const auto D = cartan_metrical_connection(M, p);
    const auto t = torsion_tensors(M, p);
    std::vector<double> v;
    for (const Array* a : std::initializer_list<const Array*>{&D.L00, &D.C01, &t.T00, &t.R01, &t.P10, &k.RH, &k.PH, &k.SH}) append(v, *a);
    append(v, cartan_nonlinear_connection(M, p).N);
    out.push_back({"ambient.flat", flat(v), Array({static_cast<int>(v.size())}, 0.0)});
  }
  if (riemannian && (want("ambient.levi-civita") || want("ambient.C01-zero"))) {
    const auto D = cartan_metrical_connection(M, p);
    if (want("ambient.levi-civita")) out.push_back({"ambient.levi-civita", D.L00, fd_christoffel(M, p)});
    if (want("ambient.C01-zero")) out.push_back({"ambient.C01-zero", D.C01, Array(D.C01.shape(), 0.0)});
  }
  if (s.metric_kind == "sphere-chart" && want("ambient.unit-sphere-curvature")) {
    const int n = M.n;
    const Array g = fundamental_tensor(M, p);
    Array want_rh({n, n, n, n}, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          for (int d = 0; d < n; ++d) want_rh(a, b, c, d) = (a == d) * g(b, c) - (a == c) * g(b, d);
        }
      }
    }
    out.push_back({"ambient.unit-sphere-curvature", k.RH, want_rh});
  }
}

}  // namespace

namespace {

// dy + N dx = B (dv + Nsub du) + Bbar K du along random directions through
// the point, derivatives by fourth-order central differences.
Raw cobasis_restriction(const MetricModel& M, const Immersion& I, const SubPoint& sp, std::uint64_t seed) {
  const int m = I.m, n = I.n, k = n - m;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  const AmbientPoint lifted = lift_point(I, sp);
  const Array N = cartan_nonlinear_connection(M, lifted).N;
  const Array Ns = induced_nonlinear_connection(M, I, sp);
  const FrameAtPoint f = build_frame(M, I, sp);
  std::vector<double> lhs_all, rhs_all;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> du(static_cast<std::size_t>(m)), dv(du.size());
    for (std::size_t i = 0; i < du.size(); ++i) {
      du[i] = dir(rng);
      dv[i] = dir(rng);
    }
    const double h = 1e-3;
    auto lift_at = [&](double s) {
      SubPoint q = sp;
      for (std::size_t i = 0; i < du.size(); ++i) {
        q.u[i] += s * du[i];
        q.v[i] += s * dv[i];
      }
      return lift_point(I, q);
    };
    const auto m2 = lift_at(-2 * h), m1 = lift_at(-h), p1 = lift_at(h), p2 = lift_at(2 * h);
    auto d = [&](auto get, int a) { return (get(m2, a) - 8 * get(m1, a) + 8 * get(p1, a) - get(p2, a)) / (12 * h); };
    auto gx = [](const AmbientPoint& p, int a) { return p.x[static_cast<std::size_t>(a)]; };
    auto gy = [](const AmbientPoint& p, int a) { return p.y[static_cast<std::size_t>(a)]; };
    for (int a = 0; a < n; ++a) {
      double lhs = d(gy, a);
      for (int b = 0; b < n; ++b) lhs += N(a, b) * d(gx, b);
      double rhs = 0;
      for (int al = 0; al < m; ++al) {
        double dva = dv[static_cast<std::size_t>(al)];
        for (int be = 0; be < m; ++be) dva += Ns(al, be) * du[static_cast<std::size_t>(be)];
        rhs += f.B(a, al) * dva;
      }
      for (int ab = 0; ab < k; ++ab) {
        for (int be = 0; be < m; ++be) rhs += f.Bbar(a, ab) * f.K(ab, be) * du[static_cast<std::size_t>(be)];
      }
      lhs_all.push_back(lhs);
      rhs_all.push_back(rhs);
    }
  }
  return {"frame.cobasis-restriction", flat(lhs_all), flat(rhs_all)};
}

void submanifold_checks(const Scenario& s, const MetricModel& M, const Immersion& I, const SubPoint& sp,
                        const SubmanifoldFields& sf, std::uint64_t seed, const Wanted& want,
                        std::vector<Raw>& out) {
  if (want("frame.duality")) {
    const auto r = duality(build_frame(M, I, sp));
    out.push_back({"frame.duality",
                   flat({r.tangent_tangent, r.tangent_normal, r.normal_tangent, r.normal_normal, r.completeness}),
                   Array({5}, 0.0)});
  }
  if (want("frame.cobasis-restriction")) out.push_back(cobasis_restriction(M, I, sp, seed));
  if (want("submanifold.intrinsic-metric")) {
    out.push_back({"submanifold.intrinsic-metric", values(sf.g_sub),
                   fundamental_tensor(intrinsic_model(M, I), as_point(sp))});
  }
  const std::vector<MixedIndex> tH{{Space::Tangent, false, IndexType::H}, {Space::Tangent, false, IndexType::H}};
  const std::vector<MixedIndex> tV{{Space::Tangent, false, IndexType::V}, {Space::Tangent, false, IndexType::V}};
  const std::vector<MixedIndex> nH{{Space::Normal, false, IndexType::H}, {Space::Normal, false, IndexType::H}};
  const std::vector<MixedIndex> nV{{Space::Normal, false, IndexType::V}, {Space::Normal, false, IndexType::V}};
  if (want("submanifold.tangent-metricity")) {
    std::vector<double> v;
    for (Direction dir : {Direction::H, Direction::V}) {
      append(v, values(relative_covariant_derivative(sf, sf.g_sub, tH, dir)));
      append(v, values(relative_covariant_derivative(sf, sf.h_sub, tV, dir)));
    }
    out.push_back({"submanifold.tangent-metricity", flat(v), Array({static_cast<int>(v.size())}, 0.0)});
  }
  if (want("submanifold.normal-metricity")) {
    const JetTensor gn = matmul(matmul(transpose(sf.Bbar), sf.g), sf.Bbar);
    const JetTensor h = sf.g.map([&](const Jet& j) { return (sf.p * sf.p) * reciprocal(sf.norm_sq) * j; });
    const JetTensor hn = matmul(matmul(transpose(sf.Bbar), h), sf.Bbar);
    std::vector<double> v;
    for (Direction dir : {Direction::H, Direction::V}) {
      append(v, values(relative_covariant_derivative(sf, gn, nH, dir)));
      append(v, values(relative_covariant_derivative(sf, hn, nV, dir)));
    }
    out.push_back({"submanifold.normal-metricity", flat(v), Array({static_cast<int>(v.size())}, 0.0)});
  }
  if (s.metric_kind == "euclidean" && s.immersion_kind == "sphere") {
    const auto it = s.immersion_params.find("radius");
    const double r = it == s.immersion_params.end() ? 1.0 : it->second.at(0);
    const double sn = std::sin(sp.u[0]), cs = std::cos(sp.u[0]);
    if (want("submanifold.round-metric")) {
      Array g({2, 2}, 0.0);
      g(0, 0) = r * r;
      g(1, 1) = r * r * sn * sn;
      out.push_back({"submanifold.round-metric", values(sf.g_sub), g});
    }
    if (want("submanifold.gauss-christoffel")) {
      Array chr({2, 2, 2}, 0.0);
      chr(0, 1, 1) = -sn * cs;
      chr(1, 0, 1) = chr(1, 1, 0) = cs / sn;
      out.push_back({"submanifold.gauss-christoffel", values(sf.tangent.L00), chr});
    }
  }
}

}  // namespace

namespace {

constexpr double kBoxMargin = 1e-3;
constexpr int kMaxDraws = 1000;

const CheckInfo* find_check(const std::string& name) {
  for (const auto& c : check_catalog()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::vector<double> in_box(const Box& b) {
    std::vector<double> x(b.lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::uniform_real_distribution<double> d(b.lo[i] + kBoxMargin, b.hi[i] - kBoxMargin);
      x[i] = d(rng_);
    }
    return x;
  }

  // components from [-2, -0.25] u [0.25, 2]
  std::vector<double> fiber(std::size_t dim) {
    std::uniform_real_distribution<double> mag(0.25, 2.0);
    std::bernoulli_distribution neg(0.5);
    std::vector<double> y(dim);
    for (double& c : y) {
      const double r = mag(rng_);
      c = neg(rng_) ? -r : r;
    }
    return y;
  }

 private:
  std::mt19937_64 rng_;
};

template <class Draw, class Accept>
auto draw_until(Draw draw, Accept accept, const std::string& what) {
  for (int i = 0; i < kMaxDraws; ++i) {
    auto p = draw();
    if (accept(p)) return p;
  }
  throw ConfigError("could not draw a " + what + " point away from the null section");
}

ReportRow to_row(int point, const std::string& name, const std::string& tag, double abs_res, double res,
                 const Scenario& s, const std::vector<double>& lhs, const std::vector<double>& rhs) {
  const CheckInfo* info = find_check(name);
  ReportRow r;
  r.point = point;
  r.identity = name;
  r.tag = tag;
  r.abs_residual = abs_res;
  r.residual = res;
  const auto it = s.tol.find(name);
  r.tolerance = it != s.tol.end() ? it->second : info->tolerance;
  r.informational = info->informational;
  r.pass = res <= r.tolerance;
  if (r.informational) {
    r.lhs = lhs;
    r.rhs = rhs;
  }
  return r;
}

ReportRow domain_error_row(int point, const std::string& stage, const std::exception& e) {
  ReportRow r;
  r.point = point;
  r.identity = "point.domain-error";
  r.tag = "point";
  r.pass = false;
  r.note = stage + ": " + e.what();
  return r;
}

}  // namespace

RunReport run_scenario(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  const MetricModel M = build_metric(s);
  const Immersion I = build_immersion(s);

  const Wanted want = [&](const std::string& name) {
    if (!s.checks) return true;
    const CheckInfo* info = find_check(name);
    for (const auto& c : *s.checks) {
      if (c == name || (info && c == info->tag)) return true;
    }
    return false;
  };
  auto want_tag = [&](std::initializer_list<const char*> tags) {
    for (const auto& c : check_catalog()) {
      for (const char* t : tags) {
        if (c.tag == t && want(c.name)) return true;
      }
    }
    return false;
  };
  const bool want_ambient = want_tag({"ambient"});
  const bool want_sub = want_tag({"frame", "submanifold"});
  const bool want_nonlinear = want_tag({"nonlinear-difference", "brackets"});
  const bool want_connection = want_tag({"connection-difference", "deformation"});
  const bool want_torsion = want_tag({"torsion"});
  const bool want_curvature = want_tag({"curvature"});
  const bool want_compare = want_nonlinear || want_connection || want_torsion || want_curvature;

  RunReport rep;
  rep.scenario = s;
  Sampler sampler(s.seed);
  for (int i = 0; i < s.points; ++i) {
    const AmbientPoint ap = draw_until(
        [&] { return AmbientPoint{sampler.in_box(s.metric_box), sampler.fiber(static_cast<std::size_t>(s.n))}; },
        [&](const AmbientPoint& p) {
          try {
            return norm_sq(M, p) >= kEpsNull;
          } catch (const GeometryError&) {
            return true;  // reported as a domain error below
          }
        },
        "sample");
    const SubPoint sp = draw_until(
        [&] { return SubPoint{sampler.in_box(s.immersion_box), sampler.fiber(static_cast<std::size_t>(s.m))}; },
        [&](const SubPoint& p) {
          try {
            return norm_sq(M, lift_point(I, p)) >= kEpsNull;
          } catch (const GeometryError&) {
            return true;
          }
        },
        "submanifold sample");
    std::vector<double> a = ap.x, b = sp.u;
    a.insert(a.end(), ap.y.begin(), ap.y.end());
    b.insert(b.end(), sp.v.begin(), sp.v.end());
    rep.ambient_points.push_back(a);
    rep.sub_points.push_back(b);

    const std::uint64_t point_seed = s.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1);
    std::vector<Raw> raw;
    if (want_ambient) {
      try {
        ambient_checks(s, M, ap, want, raw);
      } catch (const GeometryError& e) {
        rep.rows.push_back(domain_error_row(i, "ambient", e));
      }
    }
    if (want_sub || want_compare) {
      try {
        std::optional<ComparisonFields> cf;
        std::optional<SubmanifoldFields> own;
        if (want_compare) cf = comparison_fields(M, I, sp);
        else own = submanifold_fields(M, I, sp);
        const SubmanifoldFields& sf = cf ? cf->sub : *own;
        if (want_sub) submanifold_checks(s, M, I, sp, sf, point_seed, want, raw);
        if (cf) {
          std::vector<ComparisonRow> cr;
          auto add = [&](std::vector<ComparisonRow> v) { cr.insert(cr.end(), v.begin(), v.end()); };
          if (want_nonlinear) add(nonlinear_rows(*cf, static_cast<unsigned>(point_seed)));
          if (want_connection) add(connection_rows(*cf));
          if (want_torsion) add(torsion_rows(*cf));
          if (want_curvature) add(curvature_rows(*cf));
          for (const auto& c : cr) {
            const std::string name = "compare." + c.name;
            if (want(name)) rep.rows.push_back(to_row(i, name, c.tag, c.abs_residual, c.residual, s, c.lhs, c.rhs));
          }
        }
      } catch (const GeometryError& e) {
        rep.rows.push_back(domain_error_row(i, "submanifold", e));
      }
    }
    for (const auto& r : raw) {
      const auto c = make_row(r.name, find_check(r.name)->tag, r.lhs, r.rhs, 0.0);
      rep.rows.push_back(to_row(i, r.name, c.tag, c.abs_residual, c.residual, s, c.lhs, c.rhs));
    }
  }

  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const ReportRow& x, const ReportRow& y) {
    return std::tie(x.point, x.identity) < std::tie(y.point, y.identity);
  });
  std::map<std::string, IdentitySummary> sum;
  for (const auto& r : rep.rows) {
    auto [it, fresh] = sum.try_emplace(r.identity);
    IdentitySummary& e = it->second;
    if (fresh) {
      e.identity = r.identity;
      e.tag = r.tag;
      e.tolerance = r.tolerance;
      e.informational = r.informational;
    }
    ++e.rows;
    e.max_residual = std::max(e.max_residual, r.residual);
    e.pass = e.pass && r.pass;
  }
  for (auto& [name, e] : sum) {
    rep.summary.push_back(e);
    if (!e.informational && !e.pass) rep.pass = false;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::uppercase << std::hex << v;
  return os.str();
}

// ordered_json writer with every float printed as %.17g
void write(std::ostream& os, const ojson& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << pad << ojson(k).dump() << ": ";
      write(os, v, indent + 2);
    }
    os << "\n" << close << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    // numeric arrays stay on one line
    const bool scalars = std::all_of(j.begin(), j.end(), [](const ojson& e) { return e.is_number(); });
    os << (scalars ? "[" : "[\n");
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << (scalars ? ", " : ",\n");
      if (!scalars) os << pad;
      write(os, j[i], indent + 2);
    }
    if (scalars) {
      os << "]";
    } else {
      os << "\n" << close << "]";
    }
  } else if (j.is_number_float()) {
    os << num(j.get<double>());
  } else {
    os << j.dump();
  }
}

ojson params_json(const std::map<std::string, std::vector<double>>& p) {
  ojson o = ojson::object();
  for (const auto& [k, v] : p) o[k] = v;
  return o;
}

ojson scenario_json(const Scenario& s) {
  ojson o;
  o["name"] = s.name;
  o["metric"] = {{"kind", s.metric_kind},
                 {"n", s.n},
                 {"p", s.p},
                 {"params", params_json(s.metric_params)},
                 {"box", {{"lo", s.metric_box.lo}, {"hi", s.metric_box.hi}}}};
  o["immersion"] = {{"kind", s.immersion_kind},
                    {"m", s.m},
                    {"params", params_json(s.immersion_params)},
                    {"box", {{"lo", s.immersion_box.lo}, {"hi", s.immersion_box.hi}}}};
  o["run"] = {{"points", s.points}, {"seed", hex(s.seed)}};
  ojson tol = ojson::object();
  for (const auto& [k, v] : s.tol) tol[k] = v;
  o["tol"] = tol;
  o["checks"] = s.checks ? ojson(*s.checks) : ojson(nullptr);
  return o;
}

std::string machine(const RunReport& r) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["engine"] = kEngineVersion;
  doc["scenario"] = scenario_json(r.scenario);
  ojson pts = ojson::array();
  for (std::size_t i = 0; i < r.sub_points.size(); ++i) {
    pts.push_back({{"index", i}, {"ambient", r.ambient_points[i]}, {"submanifold", r.sub_points[i]}});
  }
  doc["points"] = pts;
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    ojson o = {{"point", row.point},
               {"identity", row.identity},
               {"tag", row.tag},
               {"abs_residual", row.abs_residual},
               {"residual", row.residual},
               {"tolerance", row.tolerance},
               {"informational", row.informational},
               {"pass", row.pass}};
    if (!row.note.empty()) o["note"] = row.note;
    if (row.informational) {
      o["lhs"] = row.lhs;
      o["rhs"] = row.rhs;
    }
    rows.push_back(o);
  }
  doc["rows"] = rows;
  ojson ids = ojson::array();
  for (const auto& e : r.summary) {
    ids.push_back({{"identity", e.identity},
                   {"tag", e.tag},
                   {"rows", e.rows},
                   {"max_residual", e.max_residual},
                   {"tolerance", e.tolerance},
                   {"informational", e.informational},
                   {"pass", e.pass}});
  }
  doc["summary"] = {{"pass", r.pass}, {"identities", ids}, {"wall_time_s", r.wall_time}};
  std::ostringstream os;
  write(os, doc, 0);
  os << "\n";
  return os.str();
}

}  // namespace

namespace {

std::string human(const RunReport& r) {
  const Scenario& s = r.scenario;
  std::ostringstream os;
  os << kEngineVersion << "  schema " << kSchemaVersion << "\n";
  os << "scenario " << s.name << ": " << s.metric_kind << " n=" << s.n << " p=" << num(s.p) << ", "
     << s.immersion_kind << " m=" << s.m << ", " << s.points << " points, seed " << hex(s.seed) << "\n";

  std::size_t w = std::string("identity").size();
  for (const auto& e : r.summary) w = std::max(w, e.identity.size());
  auto cell = [](const std::string& t, std::size_t width) {
    return t + std::string(width > t.size() ? width - t.size() : 0, ' ');
  };
  auto verdict = [](bool info, bool pass) -> std::string {
    if (info) return "info";
    return pass ? "PASS" : "FAIL";
  };

  if (!r.rows.empty()) {
    os << "\n" << cell("point", 6) << cell("identity", w + 2) << cell("residual", 26) << cell("tolerance", 26)
       << "verdict\n";
    for (const auto& row : r.rows) {
      os << cell(std::to_string(row.point), 6) << cell(row.identity, w + 2) << cell(num(row.residual), 26)
         << cell(num(row.tolerance), 26) << verdict(row.informational, row.pass);
      if (!row.note.empty()) os << "  " << row.note;
      os << "\n";
    }
  }

  os << "\nsummary\n" << cell("identity", w + 2) << cell("rows", 6) << cell("max residual", 26)
     << cell("tolerance", 26) << "verdict\n";
  for (const auto& e : r.summary) {
    os << cell(e.identity, w + 2) << cell(std::to_string(e.rows), 6) << cell(num(e.max_residual), 26)
       << cell(num(e.tolerance), 26) << verdict(e.informational, e.pass) << "\n";
  }
  os << "\noverall " << (r.pass ? "PASS" : "FAIL") << "  wall time " << num(r.wall_time) << " s\n";
  return os.str();
}

}  // namespace

std::string emit_report(const RunReport& r, Format f) { return f == Format::Machine ? machine(r) : human(r); }

int exit_code(const RunReport& r) { return r.pass ? 0 : 1; }

}  // namespace finslift
