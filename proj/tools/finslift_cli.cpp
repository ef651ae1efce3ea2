// finslift: run identity checks on a scenario and print the residual report.

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "finslift/errors.hpp"
#include "finslift/harness.hpp"

using namespace finslift;

namespace {

int run(const std::string& ref, const std::string& format, const std::vector<std::string>& checks, int points,
        const std::string& seed, const std::string& out) {
  Scenario s = load_scenario(ref);
  if (!checks.empty()) {
    for (const auto& c : checks) {
      bool known = false;
      for (const auto& info : check_catalog()) known = known || info.name == c || info.tag == c;
      if (!known) throw ConfigError("unknown check " + c);
    }
    s.checks = checks;
  }
  if (points > 0) s.points = points;
  if (!seed.empty()) {
    std::string t = seed;
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) t = t.substr(2);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s.seed, 16);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw ConfigError("malformed hexadecimal seed '" + seed + "'");
    }
  }
  const RunReport r = run_scenario(s);
  const std::string text = emit_report(r, format == "machine" ? Format::Machine : Format::Human);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + out);
    f << text;
  }
  return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler submanifold identity checks"};
  app.require_subcommand(1);

  std::string ref, format = "human", seed, out;
  std::vector<std::string> checks;
  int points = 0;
  auto* run_cmd = app.add_subcommand("run", "evaluate a scenario file or shipped scenario");
  run_cmd->add_option("scenario", ref, "scenario file or shipped name")->required();
  run_cmd->add_option("--format", format)->check(CLI::IsMember({"human", "machine"}));
  run_cmd->add_option("--checks", checks, "identity names or tags")->delimiter(',');
  run_cmd->add_option("--points", points)->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "hexadecimal");
  run_cmd->add_option("--out", out);

  auto* list_checks = app.add_subcommand("list-checks", "print the identity catalog");
  auto* list_scenarios = app.add_subcommand("list-scenarios", "print the shipped scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*list_checks) {
      for (const auto& c : check_catalog()) {
        std::cout << c.name << "\t" << c.tag << "\t" << c.tolerance << "\t"
                  << (c.informational ? "informational" : "asserted") << "\t" << c.description << "\n";
      }
      return 0;
    }
    if (*list_scenarios) {
      for (const auto& n : shipped_scenarios()) std::cout << n << "\n";
      return 0;
    }
    return run(ref, format, checks, points, seed, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
