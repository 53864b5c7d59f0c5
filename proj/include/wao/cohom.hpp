#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wao/gmod.hpp"

namespace wao {

/// Inhomogeneous cochain: one module element per tuple in Gamma^q.
/// Tuple (g_1..g_q) has index sum g_i N^(q-i); values are stored flattened.
struct Cochain {
  std::size_t degree = 0;
  ModulePtr module;
  IntVec values;

  std::size_t tuples() const;
  IntVec value(std::size_t tuple) const;
  void set_value(std::size_t tuple, const IntVec& v);
  bool operator==(const Cochain& o) const { return degree == o.degree && values == o.values; }
};

std::size_t tuple_count(std::size_t order, std::size_t q);
Cochain zero_cochain(const ModulePtr& m, std::size_t q);
/// Values reduced to normal form.
Cochain normalize_cochain(const Cochain& c);
Cochain add_cochains(const Cochain& a, const Cochain& b);
Cochain scale_cochain(const Int& k, const Cochain& a);
bool cochains_equal(const Cochain& a, const Cochain& b);

/// d: C^q -> C^{q+1}, applied directly (q <= 3).
Cochain apply_differential(const Cochain& f);
/// Matrix of d_q in the original generators (rows: tuple-major C^{q+1}).
IntMatrix differential_matrix(const GammaModule& m, std::size_t q);
/// d_q as a homomorphism of the cochain groups C^q -> C^{q+1}.
AbHom differential(const ModulePtr& m, std::size_t q);

class CohGroup;
using CohPtr = std::shared_ptr<const CohGroup>;

/// H^q(Gamma, M) with explicit cocycle representatives.
class CohGroup {
 public:
  std::size_t degree() const { return q_; }
  const ModulePtr& module() const { return m_; }
  const GroupPtr& group() const { return group_; }

  Cochain lift(const IntVec& x) const;
  /// Class of a cocycle (throws PreconditionError if z is not a cocycle).
  IntVec project(const Cochain& z) const;
  bool is_cocycle(const Cochain& z) const;

 private:
  friend CohPtr cohomology(const ModulePtr& m, std::size_t q);
  std::size_t q_ = 0;
  ModulePtr m_;
  GroupPtr group_;
  bool coker_path_ = false;
  // general path
  IntMatrix zbasis_;  // smith-coordinate cocycle lattice basis (columns)
  std::shared_ptr<LatticeSolver> zsolver_;
  GroupPtr raw_;
  // lattice path: coker of d_{q-1}
  SmithForm coker_;
  std::vector<std::size_t> torsion_idx_;
};

CohPtr cohomology(const ModulePtr& m, std::size_t q);

/// Restriction H^q(Gamma, M) -> H^q(Delta, M) on class coordinates.
IntVec restrict_class(const CohGroup& ambient, const IntVec& x, const SubgroupView& sub, const CohGroup& target);
Cochain restrict_cochain(const Cochain& c, const SubgroupView& sub, const ModulePtr& restricted);
AbHom restriction_map(const CohGroup& ambient, const SubgroupView& sub, const CohGroup& target);

/// Connecting map H^q(Gamma, C) -> H^{q+1}(Gamma, A) of 0 -> A -> B -> C -> 0.
class ConnectingMap {
 public:
  explicit ConnectingMap(ShortExactSequence ses);
  /// Cochain level: lift to B, differentiate, pull back to A.
  Cochain apply(const Cochain& c) const;
  IntVec apply_class(const CohGroup& hc, const IntVec& x, const CohGroup& ha) const;
  AbHom as_hom(const CohGroup& hc, const CohGroup& ha) const;
  const ShortExactSequence& ses() const { return ses_; }

 private:
  ShortExactSequence ses_;
  std::vector<IntVec> section_;  // preimages of C's generators in B
  std::shared_ptr<HomSolver> pull_;
};

/// (f u t)(g, h) = pairing(f(g), (g_1...g_p) t(h)).
Cochain cup(const Cochain& f, const Cochain& t, const Pairing& pairing);

struct ShapiroReport {
  IntVec induced_factors;
  IntVec sub_factors;
  bool isomorphic = false;
};
ShapiroReport shapiro_compare(const FinGroupPtr& g, const SubgroupView& sub, const ModulePtr& m, std::size_t q);

/// Exhaustive enumeration of cocycles and coboundaries (finite M only).
struct BruteCohomology {
  IntVec invariant_factors;
  Int order;
  std::size_t cocycles = 0;
  std::size_t coboundaries = 0;
};
constexpr double kBruteForceGuard = 1e6;
BruteCohomology brute_force_cohomology(const ModulePtr& m, std::size_t q);

/// Invariant factors of a finite abelian group from the orders of its k-torsion.
IntVec factors_from_torsion_counts(const Int& order, const std::function<Int(const Int&)>& torsion_order);

}  // namespace wao
