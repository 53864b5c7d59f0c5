#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wao/exactlat.hpp"

namespace wao {

class FiniteGroup;
using FinGroupPtr = std::shared_ptr<const FiniteGroup>;

/// Finite group given by its multiplication table on indices 0..N-1.
class FiniteGroup {
 public:
  /// Validates associativity, identity and inverses; throws PreconditionError
  /// naming a failing triple.
  FiniteGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::string> labels);

  static FinGroupPtr trivial();
  static FinGroupPtr cyclic(std::size_t n);
  static FinGroupPtr product(const std::vector<std::size_t>& orders);
  static FinGroupPtr units_mod(long m);
  static FinGroupPtr dihedral(std::size_t n);  // order 2n
  static FinGroupPtr quaternion();             // order 8
  static FinGroupPtr explicit_table(const std::vector<std::vector<std::size_t>>& table,
                                    std::vector<std::string> labels = {});
  static FinGroupPtr from_function(std::size_t n, const std::function<std::size_t(std::size_t, std::size_t)>& mul,
                                   std::vector<std::string> labels = {});

  std::size_t order() const { return n_; }
  std::size_t identity() const { return e_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * n_ + b]; }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  std::size_t pow(std::size_t a, long k) const;
  std::size_t element_order(std::size_t a) const;
  std::size_t exponent() const;
  bool is_abelian() const;
  const std::string& label(std::size_t a) const { return labels_[a]; }
  std::optional<std::size_t> find_label(const std::string& s) const;
  /// Residue represented by each element for unit groups mod m (empty otherwise).
  const std::vector<long>& residues() const { return residues_; }
  long modulus() const { return modulus_; }

  /// Sorted element list of the subgroup generated by gens.
  std::vector<std::size_t> generated(const std::vector<std::size_t>& gens) const;
  bool is_subgroup(const std::vector<std::size_t>& elems) const;
  std::vector<std::size_t> conjugate_subgroup(std::size_t g, const std::vector<std::size_t>& h) const;
  /// Distinct cyclic subgroups, one per conjugacy class, ordered by generator index.
  std::vector<std::vector<std::size_t>> cyclic_subgroup_classes() const;

 private:
  std::size_t n_ = 0;
  std::size_t e_ = 0;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inv_;
  std::vector<std::string> labels_;
  std::vector<long> residues_;
  long modulus_ = 0;
};

/// A subgroup materialized as a group of its own, with the embedding.
struct SubgroupView {
  FinGroupPtr group;
  std::vector<std::size_t> embed;  // sub index -> ambient index
  static SubgroupView make(const FinGroupPtr& ambient, const std::vector<std::size_t>& elems);
};

class GammaModule;
using ModulePtr = std::shared_ptr<const GammaModule>;

/// Finitely generated abelian group with a left action of a finite group.
class GammaModule {
 public:
  GammaModule(FinGroupPtr group, GroupPtr underlying, std::vector<IntMatrix> action,
              std::optional<std::vector<std::vector<std::size_t>>> permutation = std::nullopt,
              std::string name = {});

  static ModulePtr make(FinGroupPtr group, GroupPtr underlying, std::vector<IntMatrix> action,
                        std::optional<std::vector<std::vector<std::size_t>>> permutation = std::nullopt,
                        std::string name = {});
  static ModulePtr trivial(FinGroupPtr group, GroupPtr underlying, std::string name = {});

  const FinGroupPtr& group() const { return group_; }
  const GroupPtr& underlying() const { return underlying_; }
  std::size_t ngens() const { return underlying_->ngens(); }
  const IntMatrix& action(std::size_t g) const { return action_[g]; }
  const std::vector<IntMatrix>& actions() const { return action_; }
  IntVec act(std::size_t g, const IntVec& x) const;
  const std::string& name() const { return name_; }

  /// Gamma-set certificate for permutation modules: perm[g][i] = image of basis i.
  const std::optional<std::vector<std::vector<std::size_t>>>& permutation() const { return perm_; }
  bool is_permutation() const { return perm_.has_value(); }

  bool is_finite() const { return underlying_->is_finite(); }
  bool is_lattice() const;

  // Smith-coordinate view: M = Z^t / diag(d), with the action in those coordinates.
  const IntVec& factors() const { return underlying_->invariant_factors(); }
  std::size_t smith_rank() const { return factors().size(); }
  const IntMatrix& smith_action(std::size_t g) const { return smith_action_[g]; }

  ModulePtr restrict_to(const SubgroupView& sub) const;

 private:
  FinGroupPtr group_;
  GroupPtr underlying_;
  std::vector<IntMatrix> action_;
  std::vector<IntMatrix> smith_action_;
  std::optional<std::vector<std::vector<std::size_t>>> perm_;
  std::string name_;
};

class ModuleMap {
 public:
  ModuleMap(ModulePtr source, ModulePtr target, AbHom hom);
  const ModulePtr& source() const { return source_; }
  const ModulePtr& target() const { return target_; }
  const AbHom& hom() const { return hom_; }

 private:
  ModulePtr source_, target_;
  AbHom hom_;
};

/// Map Gamma -> (Z/n)^*.
struct CyclotomicCharacter {
  Int modulus;
  IntVec values;  // indexed by group element
  static CyclotomicCharacter trivial(const FinGroupPtr& g, const Int& n);
  void check(const FiniteGroup& g) const;
};

/// Bilinear map M x N -> P; tensor[k] is the ngens(M) x ngens(N) matrix of
/// the k-th output coordinate.
struct Pairing {
  ModulePtr left, right, target;
  std::vector<IntMatrix> tensor;
  IntVec apply(const IntVec& x, const IntVec& y) const;
  /// Throws PreconditionError if not well defined or not equivariant.
  void check() const;
};

ModulePtr permutation_module(const FinGroupPtr& g, const std::vector<std::vector<std::size_t>>& perm,
                             std::string name = {});
ModulePtr regular_module(const FinGroupPtr& g);
/// Z[G/H] for left cosets of the subgroup h.
ModulePtr coset_module(const FinGroupPtr& g, const std::vector<std::size_t>& h);
/// Ind_H^G of a module over the subgroup view.
ModulePtr induced_module(const FinGroupPtr& g, const SubgroupView& h, const GammaModule& m);

/// The F2[V4]-module of dimension 4 with a nonzero H^1 class vanishing on every
/// cyclic subgroup. Elements of product({2,2}) are indexed (a,b) -> 2a+b.
ModulePtr biquadratic_module(const FinGroupPtr& v4);

/// Z/n(chi): rank-one module with g acting by chi(g).
ModulePtr twisted_cyclic(const FinGroupPtr& g, const CyclotomicCharacter& chi);

struct TwistedDual {
  ModulePtr dual;
  Pairing eval;          // M x dual -> Z/n(chi)
  Pairing eval_flipped;  // dual x M -> Z/n(chi)
};

TwistedDual twisted_dual(const ModulePtr& m, const CyclotomicCharacter& chi);

/// Natural map M -> dual(dual(M)); an isomorphism for finite M.
ModuleMap double_dual_map(const ModulePtr& m, const CyclotomicCharacter& chi);

struct Resolution {
  ModulePtr p;
  ModuleMap pi;   // P -> M
  ModulePtr k;    // ker pi
  ModuleMap incl; // K -> P
};

Resolution quasi_trivial_resolution(const ModulePtr& m);

struct KernelModule {
  ModulePtr module;
  ModuleMap incl;
};
struct CokernelModule {
  ModulePtr module;
  ModuleMap proj;
};

KernelModule kernel_module(const ModuleMap& phi);
CokernelModule cokernel_module(const ModuleMap& phi);
inline ModulePtr units_module(const ModuleMap& phi) { return kernel_module(phi).module; }
inline ModulePtr picard_module(const ModuleMap& phi) { return cokernel_module(phi).module; }

struct ShortExactSequence {
  ModuleMap i;  // A -> B
  ModuleMap p;  // B -> C
  /// Throws PreconditionError if 0 -> A -> B -> C -> 0 is not exact.
  void check() const;
};

/// The dual sequence 0 -> C^v -> B^v -> A^v -> 0 with its evaluation pairings.
struct DualSequence {
  ShortExactSequence ses;
  TwistedDual a, b, c;
};
DualSequence dual_sequence(const ShortExactSequence& ses, const CyclotomicCharacter& chi);

}  // namespace wao
