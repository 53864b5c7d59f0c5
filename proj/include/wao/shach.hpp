#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wao/cohom.hpp"
#include "wao/locarith.hpp"
#include "wao/sites.hpp"

namespace wao {

/// A subgroup on which classes are required to restrict to zero.
struct Condition {
  std::string label;  // "<g>" for cyclic subgroups, the place label otherwise
  std::vector<std::size_t> subgroup;
};

/// Chebotarev condition set: every cyclic subgroup (up to conjugacy) and the
/// decomposition groups of the special places outside S.
std::vector<Condition> sha_conditions(const GaloisDatum& d, const std::vector<std::string>& s);

struct ShaGroup {
  std::size_t degree = 1;
  ModulePtr module;
  CohPtr ambient;
  GroupPtr group;
  std::shared_ptr<AbHom> incl;  // group -> ambient->group()
  std::vector<Condition> conditions;
  IntVec to_ambient(const IntVec& x) const { return incl->apply(x); }
};

/// Classes of H^q(Gamma, M) that vanish on every condition subgroup.
/// Degree 1 needs finite M; degree 2 needs a lattice.
ShaGroup sha(const GaloisDatum& d, const ModulePtr& m, const std::vector<std::string>& s, std::size_t q);
/// Re-checks that every generator restricts to zero on every condition subgroup.
bool verify_sha(const ShaGroup& sh);

struct ShaQuotient {
  GroupPtr group;
  std::shared_ptr<AbHom> proj;  // sha_S -> quotient
  /// For each smith generator of the quotient, a representative in sha_S coordinates.
  std::vector<IntVec> section;
};

ShaQuotient sha_rel_quotient(const ShaGroup& sha_s, const ShaGroup& sha_empty);

enum class ChLevel { Split, Provider };
std::string to_string(ChLevel l);

struct ProviderDiagnostics {
  long long bound = 0;
  bool kummer_complete = false;  // surjectivity search spanned every local square class group
  std::vector<GlobalSquareClass> kummer_generators;
  std::vector<std::vector<GlobalSquareClass>> lifted_classes;  // generators of the searched part of ker(delta)
  bool lambda_complete = true;  // every Frobenius class of auxiliary primes was represented
  std::size_t frobenius_classes = 0;
  std::size_t fixed_rank = 0, quotient_rank = 0;
};

/// 0 -> A = H^Gamma -> H -> B -> 0 with B of trivial action, and the local
/// maps H^1(Q_v, H) -> H^1(Q_v, B) used to lift global B-classes.
struct ProviderFiltration {
  std::vector<IntVec> fixed_gens;  // generators of A inside H
  std::shared_ptr<Quotient> quotient;  // H -> B
  std::vector<std::vector<GlobalSquareClass>> psi;  // psi[i][j]: field of the (i, j) entry of g -> (g - 1) s
  std::vector<std::shared_ptr<LocalH1>> b_local;
  std::vector<std::shared_ptr<HomSolver>> lift;
};

/// A global class of H^1(Q, H) for exponent-2 H given by explicit data:
/// Kummer terms (c, a) with a in H^Gamma, characters beta_j of B (one per smith
/// coordinate, with vanishing connecting class), and a class inflated from Gamma.
struct GlobalClassSpec {
  std::vector<std::pair<GlobalSquareClass, IntVec>> kummer;
  std::vector<GlobalSquareClass> beta;
  IntVec inflation;
};

/// Cokernel of localization H^1 -> (+)_{v in S} H^1_v.
struct ChGroup {
  ChLevel level = ChLevel::Split;
  ModulePtr module;
  std::vector<Place> places;
  std::vector<GroupPtr> local_groups;
  std::vector<std::size_t> offsets;
  GroupPtr product;
  std::shared_ptr<Quotient> quotient;  // product -> Ch
  std::vector<IntVec> image;           // localization image generators (product coordinates)
  std::vector<CohPtr> split_local;
  std::vector<std::shared_ptr<LocalH1>> provider_local;
  ProviderDiagnostics diagnostics;
  std::shared_ptr<ProviderFiltration> filtration;

  const GroupPtr& group() const { return quotient->group; }
  IntVec assemble(const std::vector<IntVec>& parts) const;
  std::vector<IntVec> split(const IntVec& x) const;
  IntVec project(const IntVec& x) const { return quotient->proj.apply(x); }
  /// A product-coordinate representative of each smith generator of Ch.
  std::vector<IntVec> generator_tuples() const;
};

ChGroup ch1(const DatumPtr& d, const ModulePtr& m, const std::vector<std::string>& s, ChLevel level,
            long long bound = 50);

/// Basis of the tuples of characters (beta_j) with sum_j psi_ij u beta_j = 0 in
/// Br(Q) for every i, among products of the candidate classes.
std::vector<std::vector<GlobalSquareClass>> liftable_characters(const std::vector<std::vector<GlobalSquareClass>>& psi,
                                                               const std::vector<GlobalSquareClass>& cands);

/// Localization over S of a global class (the B-part is lifted locally, which is
/// exact modulo the image of H^1(Q, A)).
IntVec localize_global_class(const ChGroup& ch, const GlobalClassSpec& spec);

/// Localization at v of the global Kummer-type class g -> sum_t chi_{c_t}(g) h_t
/// (each h_t fixed by Gamma).
IntVec localize_kummer(const LocalH1& local, const std::vector<std::pair<GlobalSquareClass, IntVec>>& terms);

struct ConnectingCertificate {
  IntVec sha1_factors, sha2_factors;
  bool lands_in_sha2 = false;
  bool injective = false;
  bool surjective = false;
  bool sha2_permutation_zero = false;
  std::string counterexample;
  bool ok() const { return lands_in_sha2 && injective && surjective && sha2_permutation_zero; }
};

/// The connecting map Sha^1_S(M) -> Sha^2_S(K) of 0 -> K -> P -> M -> 0.
ConnectingCertificate sha_connecting_iso(const Resolution& res, const GaloisDatum& d, const std::vector<std::string>& s);

}  // namespace wao
