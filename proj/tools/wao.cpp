#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "wao/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Brauer-Manin obstruction to weak approximation via Galois cohomology"};
  app.set_version_flag("--version", wao::kVersion);
  app.require_subcommand(1);
  wao::RunOptions o;
  std::string json_out;
  std::string level, set, tuple;
  long long bound = 0;
  auto common = [&](CLI::App* sub, bool scenario) {
    if (scenario) sub->add_option("--scenario", o.scenario, "scenario JSON file")->required();
    sub->add_option("--json", json_out, "write the JSON report to this file ('-' for stdout)");
  };
  auto* sha = app.add_subcommand("sha", "locally trivial classes Sha^q_S");
  common(sha, true);
  sha->add_option("--set", set, "place set name");
  sha->add_option("--degree", o.degree, "1 or 2");
  auto* ch = app.add_subcommand("ch", "localization cokernel Ch^1_S");
  common(ch, true);
  ch->add_option("--set", set, "place set name");
  ch->add_option("--level", level, "split or provider");
  ch->add_option("--bound", bound, "surjectivity search bound");
  auto* pair = app.add_subcommand("pair", "pairing matrix and perfectness certificate");
  common(pair, true);
  pair->add_option("--set", set, "place set name");
  pair->add_option("--bound", bound, "surjectivity search bound");
  auto* verdict = app.add_subcommand("verdict", "weak approximation verdict for a local tuple");
  common(verdict, true);
  verdict->add_option("--set", set, "place set name");
  verdict->add_option("--tuple", tuple, "tuple name");
  verdict->add_option("--bound", bound, "surjectivity search bound");
  auto* up = app.add_subcommand("units-pic", "kernel and cokernel of a character map");
  common(up, true);
  auto* self = app.add_subcommand("selftest", "run the property suite");
  common(self, false);
  auto* oracle = app.add_subcommand("oracle", "brute-force cross-checks on a scenario");
  common(oracle, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (!set.empty()) o.set = set;
  if (!tuple.empty()) o.tuple = tuple;
  if (!level.empty()) o.level = level;
  if (bound > 0) o.bound = bound;

  wao::RunResult r = wao::run_command(o);
  std::string dump = r.report.dump(2) + "\n";
  if (json_out == "-") {
    std::cout << dump;
  } else {
    std::cout << r.text;
    if (!json_out.empty()) {
      std::ofstream f(json_out);
      if (!f) {
        std::cerr << "cannot write " << json_out << "\n";
        return 2;
      }
      f << dump;
    }
  }
  if (r.exit_code == 2) std::cerr << r.report["error"]["message"].get<std::string>() << "\n";
  return r.exit_code;
}
