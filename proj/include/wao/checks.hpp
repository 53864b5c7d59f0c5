#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wao/scenario.hpp"

namespace wao {

// ---- small catalogues shared by the test suites, selftest and acceptance

struct NamedGroup {
  std::string name;
  FinGroupPtr group;
};

/// |G| in {1, 2, 3, 4, 6, 8}, both groups of order 4 and all five of order 8.
std::vector<NamedGroup> small_groups();
/// Same action, coefficients reduced modulo n.
ModulePtr reduce_mod(const ModulePtr& m, long n);
/// All homomorphisms G -> {+-1}, as 0/1 vectors.
std::vector<std::vector<int>> sign_characters(const FiniteGroup& g);
/// Z/n (Z for n = 0) with g acting by (-1)^chi(g).
ModulePtr sign_module(const FinGroupPtr& g, const std::vector<int>& chi, long n);
/// Finite modules of order <= 16 over g.
std::vector<ModulePtr> small_modules(const FinGroupPtr& g);

/// |Sha^1| by enumerating every function Gamma -> M: locally trivial cocycles
/// divided by coboundaries.
Int brute_force_sha1_order(const ModulePtr& m, const std::vector<std::vector<std::size_t>>& conditions);

struct BundledCase {
  std::string name;
  DatumPtr datum;
  ModulePtr module;
  std::vector<std::vector<std::string>> sets;
};

/// The bundled data with their finite modules and place sets (empty, special,
/// special plus unramified, unramified only).
std::vector<DatumPtr> bundled_data();
std::vector<std::vector<std::string>> bundled_sets(const GaloisDatum& d);
std::vector<BundledCase> bundled_finite_cases();
/// Permutation lattices Z, Z[Gamma/<g>], Z[Gamma].
std::vector<ModulePtr> bundled_permutation_modules(const FinGroupPtr& g);

// ---- property checks

struct CheckResult {
  CheckResult() = default;
  CheckResult(std::string i, std::string n) : id(std::move(i)), name(std::move(n)) {}
  std::string id;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::string first_failure;
  bool passed() const { return failures == 0 && cases > 0; }
  void record(bool ok, const std::string& what);
  Json to_json() const;
};

CheckResult check_oracle_grid();
CheckResult check_dd_zero();
CheckResult check_leibniz(std::size_t pairs);
CheckResult check_anticommutation(std::size_t instances);
CheckResult check_permutation_sha2();
CheckResult check_connecting_iso();
CheckResult check_duality();
CheckResult check_hilbert_oracle();
CheckResult check_reciprocity(std::size_t pairs);
CheckResult check_obstruction_soundness(std::size_t per_scenario);
CheckResult check_obstructed_tuple();

// further module invariants covered by selftest
CheckResult check_snf_properties();
CheckResult check_double_duals();
CheckResult check_datum_validation();
CheckResult check_sha_properties();
CheckResult check_local_duality();
CheckResult check_pairing_properties();

struct NamedCheck {
  std::string id;
  std::function<CheckResult()> run;
};
std::vector<NamedCheck> selftest_checks();
/// Runs every selftest check; the report holds no timings.
Json selftest_report(bool* all_passed = nullptr);

}  // namespace wao
