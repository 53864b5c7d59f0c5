#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wao/cohom.hpp"
#include "wao/numth.hpp"
#include "wao/sites.hpp"

namespace wao {

/// Places are encoded as 0 (the real place) or a prime.
std::string place_label(long long v);
long long place_of_label(const std::string& label);

/// Fixed basis of Q_v^* / squares: {-1} at the real place, {2, -1, 5} at 2,
/// {p, u_p} at odd p with u_p the least quadratic nonresidue.
std::vector<long long> square_class_basis(long long v);

struct SquareClass {
  long long place = 0;
  std::vector<int> bits;
  long long representative() const;
  bool operator==(const SquareClass&) const = default;
};

SquareClass square_class_of(long long y, long long v);
SquareClass square_class_from_bits(long long v, std::vector<int> bits);
int hilbert_symbol(const SquareClass& a, const SquareClass& b);

/// Element of Q^* / squares: a sign and a finite set of primes.
struct GlobalSquareClass {
  int sign = 1;
  std::set<long long> primes;
  static GlobalSquareClass of(long long n);
  GlobalSquareClass operator*(const GlobalSquareClass& o) const;
  bool operator==(const GlobalSquareClass&) const = default;
  bool is_one() const { return sign == 1 && primes.empty(); }
  std::string to_string() const;
};

SquareClass localize_global(const GlobalSquareClass& g, long long v);
int hilbert_symbol(const GlobalSquareClass& a, const GlobalSquareClass& b, long long v);
/// Places where the symbol can be nontrivial: the real place, 2, and odd primes of the support.
std::vector<long long> bad_places(const std::vector<GlobalSquareClass>& classes);

/// Decides solvability of z^2 = a x^2 + b y^2 over Q_v by search: at odd and
/// dyadic places, primitive solutions modulo p^k with k <= 2 v_p(4ab) + 3,
/// accepted once Hensel's criterion certifies a lift.
int hilbert_oracle(long long a, long long b, long long v);

struct ReciprocityReport {
  std::map<long long, int> symbols;  // place -> (a, b)_v, nontrivial candidates only
  int product = 1;
  bool ok() const { return product == 1; }
};
ReciprocityReport reciprocity_check(long long a, long long b);

/// Square class c at v with (c, y)_v = (-1)^chi(rec_v(y)) for every y; chi is a
/// Z/2-valued homomorphism on the decomposition group, given on Gamma elements.
SquareClass local_character_class(const GaloisDatum& d, long long v, const std::function<int(std::size_t)>& chi);

enum class LocalModel { Kummer, Cochain };

/// H^1(Q_v, M) for an exponent-2 module M. Kummer model when the decomposition
/// group acts trivially (coordinates: square classes per smith coordinate of M);
/// otherwise the cochain model on the tame presentation of the local Galois group
/// (coordinates: classes of generator values modulo coboundaries).
class LocalH1 {
 public:
  /// force_cochain selects the cochain model even for trivial action (odd and real places).
  LocalH1(DatumPtr datum, Place place, ModulePtr module, bool force_cochain = false);

  const Place& place() const { return place_; }
  long long prime() const { return place_.prime; }
  LocalModel model() const { return model_; }
  const ModulePtr& module() const { return module_; }
  const GroupPtr& group() const { return group_; }
  const DatumPtr& datum() const { return datum_; }
  std::size_t basis_size() const { return basis_.size(); }
  const std::optional<LocalPresentation>& presentation() const { return pres_; }

  /// Kummer model: one square class per smith coordinate of M.
  IntVec from_square_classes(const std::vector<SquareClass>& c) const;
  std::vector<SquareClass> to_square_classes(const IntVec& x) const;

  /// Cochain model: values on the presentation generators (module coordinates).
  IntVec from_generator_values(const std::vector<IntVec>& values) const;
  std::vector<IntVec> generator_values(const IntVec& x) const;

  /// Comparison map from Gamma-level cochains: the cocycle given by its value
  /// at each element of Gamma (only elements of Gamma_v are queried).
  IntVec from_gamma_cocycle(const std::function<IntVec(std::size_t)>& f) const;
  IntVec from_gamma_cocycle(const Cochain& f) const;

 private:
  DatumPtr datum_;
  Place place_;
  ModulePtr module_;
  LocalModel model_;
  std::optional<LocalPresentation> pres_;
  std::vector<long long> basis_;
  GroupPtr group_;
  // cochain model
  std::shared_ptr<AbHom> relator_map_;  // M^k -> M
  std::shared_ptr<Subgroup> cocycles_;
  std::shared_ptr<HomSolver> cocycle_solver_;
  std::shared_ptr<Quotient> classes_;
};

/// inv_v of the cup product of alpha (in H^1 of the left module) and xi (in H^1 of
/// the right module) through an exponent-2 pairing into Z/2; returns 0 or 1/2.
mpq_class local_invariant_pairing(const LocalH1& left, const IntVec& alpha, const LocalH1& right, const IntVec& xi,
                                  const Pairing& pairing);

struct SurjectivityResult {
  bool ok = false;
  std::vector<GlobalSquareClass> generators;
  std::size_t target_dimension = 0;
  std::size_t achieved_dimension = 0;
};

/// Global square classes among -1, 2 and primes <= bound whose localizations span
/// the product of Q_v^*/squares over the given places.
SurjectivityResult surjectivity_search(const std::vector<long long>& places, long long bound);

}  // namespace wao
