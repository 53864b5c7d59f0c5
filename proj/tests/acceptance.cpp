#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "wao/checks.hpp"
#include "wao/report.hpp"

using namespace wao;

namespace {

struct Timed {
  std::vector<CheckResult> results;
  double seconds = 0;
};

template <class F>
Timed timed(F f) {
  auto t0 = std::chrono::steady_clock::now();
  Timed t;
  t.results = f();
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

bool report(int n, const std::string& title, const Timed& t, double limit) {
  bool ok = true;
  std::size_t cases = 0, failures = 0;
  std::string first;
  for (const auto& r : t.results) {
    ok = ok && r.passed();
    cases += r.cases;
    failures += r.failures;
    if (first.empty() && !r.first_failure.empty()) first = r.id + ": " + r.first_failure;
  }
  bool fast = limit <= 0 || t.seconds < limit;
  std::printf("criterion %d: %s  %s  (%zu cases, %zu failures, %.1fs", n, ok && fast ? "PASS" : "FAIL", title.c_str(),
              cases, failures, t.seconds);
  if (limit > 0) std::printf(", limit %.0fs", limit);
  std::printf(")\n");
  if (!first.empty()) std::printf("    first failure: %s\n", first.c_str());
  if (!fast) std::printf("    over the time limit\n");
  std::fflush(stdout);
  return ok && fast;
}

}  // namespace

int main() {
  bool all = true;
  all &= report(1, "oracle equivalence", timed([] { return std::vector{check_oracle_grid()}; }), 60);
  all &= report(2, "homological identities",
                timed([] { return std::vector{check_dd_zero(), check_leibniz(500), check_anticommutation(50)}; }), 0);
  all &= report(3, "permutation lattices have Sha^2_S = 0", timed([] { return std::vector{check_permutation_sha2()}; }),
                0);
  all &= report(4, "connecting isomorphism", timed([] { return std::vector{check_connecting_iso()}; }), 0);
  all &= report(5, "duality", timed([] { return std::vector{check_duality()}; }), 120);
  all &= report(6, "local arithmetic",
                timed([] { return std::vector{check_hilbert_oracle(), check_reciprocity(100)}; }), 0);
  all &= report(7, "obstruction soundness",
                timed([] { return std::vector{check_obstruction_soundness(100), check_obstructed_tuple()}; }), 0);

  auto t0 = std::chrono::steady_clock::now();
  RunOptions o;
  o.command = "selftest";
  RunResult a = run_command(o);
  RunResult b = run_command(o);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string da = a.report.dump(2), db = b.report.dump(2);
  bool same = da == db;
  bool passed = a.exit_code == 0 && b.exit_code == 0;
  bool ok8 = same && passed;
  std::printf("criterion 8: %s  determinism  (two selftest reports, %zu bytes, %s, selftest %s, %.1fs)\n",
              ok8 ? "PASS" : "FAIL", da.size(), same ? "byte-identical" : "DIFFER", passed ? "passed" : "failed", secs);
  all &= ok8;
  std::printf("%s\n", all ? "all criteria PASS" : "some criteria FAIL");
  return all ? 0 : 1;
}
