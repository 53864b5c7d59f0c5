#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wao {

using Int = mpz_class;
using IntVec = std::vector<Int>;

class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input violates an operation's precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation is outside the supported scope.
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols = 0);
  static IntMatrix diagonal(const IntVec& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVec row(std::size_t i) const;
  IntVec col(std::size_t j) const;
  void set_col(std::size_t j, const IntVec& v);
  void append_row(const IntVec& v);

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& other) const;
  IntMatrix operator+(const IntMatrix& other) const;
  IntMatrix operator-(const IntMatrix& other) const;
  IntVec apply(const IntVec& x) const;
  IntMatrix select_cols(const std::vector<std::size_t>& idx) const;
  IntMatrix select_rows(const std::vector<std::size_t>& idx) const;
  static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
  static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

  bool is_zero() const;
  bool operator==(const IntMatrix& other) const = default;

  /// Exact determinant (fraction-free Bareiss elimination).
  Int determinant() const;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// U * M * V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal.
struct SmithForm {
  IntMatrix U, D, V;
  IntMatrix U_inv, V_inv;
  IntVec diagonal;  // length min(rows, cols)
  std::size_t rank = 0;
};

struct SnfOptions {
  bool want_u = true;
  bool want_v = true;
  bool want_u_inv = false;
  bool want_v_inv = false;
};

SmithForm snf(const IntMatrix& m, SnfOptions opts = {});

/// Sparse integer row used by the large cochain computations.
struct SparseRow {
  std::vector<std::pair<std::size_t, Int>> entries;
};

/// Basis (as columns) of the lattice {x in Z^n : row_i . x == 0 mod moduli[i]},
/// where a zero modulus means exact vanishing.
IntMatrix kernel_mod(const std::vector<SparseRow>& rows, const IntVec& moduli, std::size_t n);
IntMatrix kernel_mod(const IntMatrix& m, const IntVec& moduli);

/// Solves B c = v for a matrix B of full column rank; reuses one Smith form.
class LatticeSolver {
 public:
  explicit LatticeSolver(const IntMatrix& basis);
  std::optional<IntVec> solve(const IntVec& v) const;
  std::size_t dim() const { return k_; }

 private:
  SmithForm sf_;
  std::size_t k_ = 0;
};

/// General integer system A z = c.
std::optional<IntVec> solve_integer(const IntMatrix& a, const IntVec& c);

// ---------------------------------------------------------------------------

class AbelianGroup;
using GroupPtr = std::shared_ptr<const AbelianGroup>;

/// Finitely generated abelian group Z^n / (row span of relations).
class AbelianGroup {
 public:
  AbelianGroup(std::size_t ngens, IntMatrix relations);

  static GroupPtr make(std::size_t ngens, IntMatrix relations);
  static GroupPtr free(std::size_t n);
  static GroupPtr cyclic(const Int& order);
  /// Z/d_1 x ... x Z/d_k; a zero entry gives a free factor.
  static GroupPtr from_factors(const IntVec& factors);

  std::size_t ngens() const { return ngens_; }
  const IntMatrix& relations() const { return relations_; }

  /// Nontrivial invariant factors d_1 | d_2 | ... (0 encodes Z).
  const IntVec& invariant_factors() const { return factors_; }
  std::size_t free_rank() const;
  bool is_finite() const { return free_rank() == 0; }
  bool is_trivial() const { return factors_.empty(); }
  /// Order of a finite group; throws for infinite groups.
  Int order() const;
  Int exponent() const;

  IntVec normalize(const IntVec& x) const;
  IntVec add(const IntVec& x, const IntVec& y) const;
  IntVec sub(const IntVec& x, const IntVec& y) const;
  IntVec neg(const IntVec& x) const;
  IntVec scale(const Int& k, const IntVec& x) const;
  IntVec zero() const { return IntVec(ngens_, 0); }
  IntVec generator(std::size_t i) const;
  bool equal(const IntVec& x, const IntVec& y) const;
  bool is_zero(const IntVec& x) const;
  Int element_order(const IntVec& x) const;

  /// Coordinates in the cyclic decomposition (one per invariant factor,
  /// reduced modulo the factor).
  IntVec smith_coords(const IntVec& x) const;
  IntVec from_smith_coords(const IntVec& s) const;
  /// Matrix sending x to its smith coordinates (unreduced).
  const IntMatrix& to_smith() const { return to_smith_; }
  /// Columns are the cyclic generators expressed in the original generators.
  const IntMatrix& from_smith() const { return from_smith_; }

  /// All elements (finite groups only), in smith-coordinate lexicographic order.
  std::vector<IntVec> elements(std::size_t limit = 1u << 20) const;

  std::string describe() const;

 private:
  bool init_monomial();

  std::size_t ngens_;
  IntMatrix relations_;
  IntVec factors_;
  IntMatrix to_smith_;    // factors_.size() x ngens
  IntMatrix from_smith_;  // ngens x factors_.size()
};

class AbHom {
 public:
  /// matrix is ngens(target) x ngens(source); well-definedness is checked.
  AbHom(GroupPtr source, GroupPtr target, IntMatrix matrix);

  const GroupPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  IntVec apply(const IntVec& x) const;
  AbHom compose_after(const AbHom& first) const;  // this ∘ first
  bool is_zero() const;
  bool equals(const AbHom& other) const;
  std::optional<IntVec> preimage(const IntVec& y) const;
  bool is_injective() const;
  bool is_surjective() const;

 private:
  GroupPtr source_, target_;
  IntMatrix matrix_;
};

/// Repeated preimage queries for one homomorphism (one Smith form).
class HomSolver {
 public:
  explicit HomSolver(const AbHom& f);
  std::optional<IntVec> preimage(const IntVec& y) const;

 private:
  GroupPtr source_, target_;
  SmithForm sf_;
  std::size_t cols_ = 0;
};

struct Subgroup {
  GroupPtr group;
  AbHom incl;
};

struct Quotient {
  GroupPtr group;
  AbHom proj;
};

GroupPtr present_group(std::size_t n, const IntMatrix& relations);
Subgroup kernel_of_hom(const AbHom& f);
Quotient cokernel_of_hom(const AbHom& f);
/// Subgroup of g generated by the given elements.
Subgroup subgroup_generated(const GroupPtr& g, const std::vector<IntVec>& gens);
/// Quotient of g by the subgroup generated by the given elements.
Quotient quotient_by(const GroupPtr& g, const std::vector<IntVec>& gens);
GroupPtr direct_sum(const std::vector<GroupPtr>& parts);

// ---------------------------------------------------------------------------

struct ExactRow {
  AbHom first;   // A -> B
  AbHom second;  // B -> C
};

struct LadderCertificate {
  bool injective_at_a = false;
  bool composite_zero = false;
  bool image_equals_kernel = false;
  std::string kernel_orders;  // e.g. "2 -> 4 -> 2"
  bool exact() const { return injective_at_a && composite_zero && image_equals_kernel; }
};

struct LadderKernels {
  Subgroup ker_a, ker_b, ker_c;
  AbHom first, second;  // ker_a -> ker_b -> ker_c
  LadderCertificate certificate;
};

/// Kernel sequence of a commutative ladder of two left-exact rows.
LadderKernels exact_ladder_kernels(const ExactRow& top, const ExactRow& bottom,
                                   const AbHom& lambda_a, const AbHom& lambda_b,
                                   const AbHom& lambda_c);

/// Value in Q/Z, kept reduced in [0, 1).
mpq_class reduce_mod_one(const mpq_class& q);

struct FiniteDual {
  GroupPtr dual;
  GroupPtr source;
  /// eval(x, phi) in Q/Z.
  mpq_class eval(const IntVec& x, const IntVec& phi) const;
};

FiniteDual dual_finite(const GroupPtr& a);

}  // namespace wao
