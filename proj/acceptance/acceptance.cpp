// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "finslift/harness.hpp"
#include "json.hpp"

using namespace finslift;

namespace {

const std::vector<std::string> kShipped = {"euclidean-plane", "euclidean-sphere2", "riemannian-sphere-chart-linear",
                                           "randers-graph"};
// one scenario per built-in metric kind
const std::vector<std::string> kMetrics = {"euclidean-plane", "riemannian-sphere-chart-linear", "randers-graph"};

std::map<std::string, RunReport> g_full;

const RunReport& full(const std::string& name) {
  auto it = g_full.find(name);
  if (it == g_full.end()) it = g_full.emplace(name, run_scenario(load_scenario(name))).first;
  return it->second;
}

RunReport run_with(const std::string& name, std::vector<std::string> checks, int points) {
  Scenario s = load_scenario(name);
  s.checks = std::move(checks);
  s.points = points;
  return run_scenario(s);
}

// max residual of `identity`, or -1 when it produced no rows
double worst(const RunReport& r, const std::string& identity) {
  for (const auto& e : r.summary) {
    if (e.identity == identity) return e.max_residual;
  }
  return -1;
}

bool no_domain_errors(const RunReport& r) { return worst(r, "point.domain-error") < 0; }

struct Tally {
  bool ok = true;
  std::string detail;
  void need(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
  void bound(const RunReport& r, const std::string& scenario, const std::string& id, double tol) {
    const double w = worst(r, id);
    char buf[64];
    std::snprintf(buf, sizeof buf, " = %.3g", w);
    need(w >= 0 && w <= tol, scenario + " " + id + (w < 0 ? " missing" : buf));
  }
};

std::string strip_wall_time(const std::string& s) {
  auto j = nlohmann::ordered_json::parse(s);
  j["summary"].erase("wall_time_s");
  return j.dump();
}

}  // namespace

int main() {
  int failed = 0;
  auto criterion = [&](int k, const char* title, const std::function<Tally()>& body) {
    Tally t;
    try {
      t = body();
    } catch (const std::exception& e) {
      t.ok = false;
      t.detail = e.what();
    }
    std::printf("%s  %2d  %s%s%s\n", t.ok ? "PASS" : "FAIL", k, title, t.ok ? "" : "  -- ", t.ok ? "" : t.detail.c_str());
    std::fflush(stdout);
    failed += t.ok ? 0 : 1;
  };

  criterion(1, "flat case vanishes on euclidean-plane", [] {
    Tally t;
    const auto& r = full("euclidean-plane");
    t.need(no_domain_errors(r), "domain errors");
    t.bound(r, "euclidean-plane", "ambient.flat", 1e-10);
    for (const auto& e : r.summary) {
      if (e.identity.rfind("compare.", 0) == 0) t.bound(r, "euclidean-plane", e.identity, 1e-10);
    }
    return t;
  });

  criterion(2, "riemannian reduction on the sphere chart", [] {
    Tally t;
    const auto& r = full("riemannian-sphere-chart-linear");
    t.need(no_domain_errors(r), "domain errors");
    t.bound(r, "sphere-chart", "ambient.C01-zero", 1e-11);
    t.bound(r, "sphere-chart", "ambient.levi-civita", 1e-10);
    t.bound(r, "sphere-chart", "ambient.unit-sphere-curvature", 1e-7);
    return t;
  });

  criterion(3, "metricity at 20 points for every built-in metric", [] {
    Tally t;
    for (const auto& n : kMetrics) {
      const auto r = run_with(n, {"ambient.metricity"}, 20);
      t.need(no_domain_errors(r) && r.rows.size() == 20, n + " row count");
      t.bound(r, n, "ambient.metricity", 1e-9);
    }
    return t;
  });

  criterion(4, "homogeneity of h, N, G and C01 at 0.5, 2, 3", [] {
    Tally t;
    for (const auto& n : kMetrics) t.bound(full(n), n, "ambient.homogeneity", 1e-10);
    return t;
  });

  criterion(5, "curvature formulas agree with the commutator oracle", [] {
    Tally t;
    for (const auto& n : kMetrics) {
      for (const char* b : {"RH", "PH", "SH", "RV", "PV", "SV"}) {
        t.bound(full(n), n, std::string("ambient.curvature-oracle.") + b, 1e-6);
      }
    }
    return t;
  });

  criterion(6, "frame duality and cobasis restriction", [] {
    Tally t;
    for (const auto& n : kShipped) {
      t.bound(full(n), n, "frame.duality", 1e-11);
      t.bound(full(n), n, "frame.cobasis-restriction", 1e-9);
    }
    return t;
  });

  criterion(7, "gauss consistency on the round sphere", [] {
    Tally t;
    const auto& r = full("euclidean-sphere2");
    t.bound(r, "euclidean-sphere2", "submanifold.gauss-christoffel", 1e-8);
    t.bound(r, "euclidean-sphere2", "submanifold.round-metric", 1e-10);
    return t;
  });

  criterion(8, "intrinsic vs induced comparison identities", [] {
    Tally t;
    for (const auto& n : kShipped) {
      const auto& r = full(n);
      t.need(no_domain_errors(r), n + " domain errors");
      t.bound(r, n, "compare.adapted-basis-relation", 1e-9);
      t.bound(r, n, "compare.bracket-difference-R", 1e-7);
      t.bound(r, n, "compare.bracket-difference-B", 1e-7);
      for (const char* id : {"compare.C01-intrinsic-equals-tangent", "compare.C11-intrinsic-equals-tangent",
                             "compare.T00-intrinsic-zero", "compare.S11-intrinsic-zero",
                             "compare.P10-intrinsic-equals-tangent", "compare.SH-intrinsic-equals-tangent",
                             "compare.SV-intrinsic-equals-tangent"}) {
        t.bound(r, n, id, 1e-8);
      }
      t.bound(r, n, "compare.deformation-10-horizontal-zero", 0.0);
    }
    return t;
  });

  criterion(9, "literal formulas reported beside their oracles", [] {
    Tally t;
    for (const auto& n : kShipped) {
      const auto& r = full(n);
      const auto j = nlohmann::json::parse(emit_report(r, Format::Machine));
      t.need(exit_code(r) == 0, n + " asserted rows fail");
      for (const auto& c : check_catalog()) {
        if (!c.informational) continue;
        int found = 0;
        for (const auto& row : j["rows"]) {
          if (row["identity"] != c.name) continue;
          ++found;
          t.need(row["informational"].get<bool>(), n + " " + c.name + " not informational");
          t.need(row.contains("lhs") && row.contains("rhs") && row["lhs"].size() == row["rhs"].size() &&
                     !row["lhs"].empty(),
                 n + " " + c.name + " lacks both sides");
          t.need(row.contains("abs_residual") && row.contains("residual"), n + " " + c.name + " lacks discrepancy");
        }
        t.need(found == r.scenario.points, n + " " + c.name + " missing rows");
      }
    }
    return t;
  });

  criterion(10, "machine reports are byte-identical across runs", [] {
    Tally t;
    for (const auto& n : kShipped) {
      const std::string a = emit_report(full(n), Format::Machine);
      const std::string b = emit_report(run_scenario(load_scenario(n)), Format::Machine);
      t.need(strip_wall_time(a) == strip_wall_time(b), n + " differs");
    }
    return t;
  });

  return failed == 0 ? 0 : 1;
}
