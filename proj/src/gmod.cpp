#include "wao/gmod.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace wao {

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::string> labels)
    : n_(table.size()), labels_(std::move(labels)) {
  if (n_ == 0) throw PreconditionError("group table is empty");
  table_.resize(n_ * n_);
  for (std::size_t a = 0; a < n_; ++a) {
    if (table[a].size() != n_) throw PreconditionError("group table row " + std::to_string(a) + " has wrong length");
    for (std::size_t b = 0; b < n_; ++b) {
      if (table[a][b] >= n_)
        throw PreconditionError("group table entry (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
      table_[a * n_ + b] = table[a][b];
    }
  }
  bool found = false;
  for (std::size_t e = 0; e < n_ && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n_ && ok; ++x) ok = mul(e, x) == x && mul(x, e) == x;
    if (ok) {
      e_ = e;
      found = true;
    }
  }
  if (!found) throw PreconditionError("group table has no identity");
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      for (std::size_t c = 0; c < n_; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw PreconditionError("group table is not associative at (" + std::to_string(a) + "," +
                                  std::to_string(b) + "," + std::to_string(c) + ")");
  inv_.assign(n_, n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (mul(a, b) == e_) inv_[a] = b;
  for (std::size_t a = 0; a < n_; ++a)
    if (inv_[a] == n_) throw PreconditionError("element " + std::to_string(a) + " has no inverse");
  if (labels_.empty())
    for (std::size_t a = 0; a < n_; ++a) labels_.push_back(std::to_string(a));
  if (labels_.size() != n_) throw PreconditionError("group labels have wrong length");
}

FinGroupPtr FiniteGroup::from_function(std::size_t n, const std::function<std::size_t(std::size_t, std::size_t)>& mul,
                                       std::vector<std::string> labels) {
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = mul(a, b);
  return std::make_shared<const FiniteGroup>(std::move(t), std::move(labels));
}

FinGroupPtr FiniteGroup::explicit_table(const std::vector<std::vector<std::size_t>>& table,
                                        std::vector<std::string> labels) {
  return std::make_shared<const FiniteGroup>(table, std::move(labels));
}

FinGroupPtr FiniteGroup::trivial() { return cyclic(1); }

FinGroupPtr FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw PreconditionError("cyclic group of order 0");
  return from_function(n, [n](std::size_t a, std::size_t b) { return (a + b) % n; });
}

FinGroupPtr FiniteGroup::product(const std::vector<std::size_t>& orders) {
  std::size_t n = 1;
  for (auto o : orders) {
    if (o == 0) throw PreconditionError("product of cyclic groups: order 0");
    n *= o;
  }
  auto digits = [&](std::size_t x) {
    std::vector<std::size_t> d(orders.size());
    for (std::size_t i = orders.size(); i-- > 0;) {
      d[i] = x % orders[i];
      x /= orders[i];
    }
    return d;
  };
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < n; ++x) {
    auto d = digits(x);
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    labels.push_back(s + ")");
  }
  return from_function(
      n,
      [&](std::size_t a, std::size_t b) {
        auto da = digits(a), db = digits(b);
        std::size_t r = 0;
        for (std::size_t i = 0; i < orders.size(); ++i) r = r * orders[i] + (da[i] + db[i]) % orders[i];
        return r;
      },
      std::move(labels));
}

FinGroupPtr FiniteGroup::units_mod(long m) {
  if (m < 2) throw PreconditionError("units_mod: modulus must be at least 2");
  std::vector<long> res;
  for (long r = 1; r < m; ++r)
    if (std::gcd(r, m) == 1) res.push_back(r);
  if (m == 2) res = {1};
  std::map<long, std::size_t> idx;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < res.size(); ++i) {
    idx[res[i]] = i;
    labels.push_back(std::to_string(res[i]));
  }
  auto g = std::make_shared<FiniteGroup>(
      [&] {
        std::vector<std::vector<std::size_t>> t(res.size(), std::vector<std::size_t>(res.size()));
        for (std::size_t a = 0; a < res.size(); ++a)
          for (std::size_t b = 0; b < res.size(); ++b) t[a][b] = idx.at((res[a] * res[b]) % m);
        return t;
      }(),
      labels);
  g->residues_ = res;
  g->modulus_ = m;
  return g;
}

FinGroupPtr FiniteGroup::dihedral(std::size_t n) {
  // r^a s^b encoded as a + n b.
  std::vector<std::string> labels;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t a = 0; a < n; ++a) labels.push_back("r" + std::to_string(a) + (b ? "s" : ""));
  return from_function(
      2 * n,
      [n](std::size_t x, std::size_t y) {
        std::size_t a1 = x % n, b1 = x / n, a2 = y % n, b2 = y / n;
        std::size_t a = b1 ? (a1 + n - a2) % n : (a1 + a2) % n;
        return a + n * ((b1 + b2) % 2);
      },
      std::move(labels));
}

FinGroupPtr FiniteGroup::quaternion() {
  // Elements +-1, +-i, +-j, +-k as (sign, unit) with unit in {1,i,j,k}.
  static const int prod[4][4][2] = {{{1, 0}, {1, 1}, {1, 2}, {1, 3}},
                                    {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
                                    {{1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
                                    {{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}};
  std::vector<std::string> labels = {"1", "i", "j", "k", "-1", "-i", "-j", "-k"};
  return from_function(
      8,
      [](std::size_t x, std::size_t y) {
        int s1 = x < 4 ? 1 : -1, s2 = y < 4 ? 1 : -1;
        const int* p = prod[x % 4][y % 4];
        int s = s1 * s2 * p[0];
        return static_cast<std::size_t>(p[1] + (s < 0 ? 4 : 0));
      },
      std::move(labels));
}

std::size_t FiniteGroup::pow(std::size_t a, long k) const {
  std::size_t base = k < 0 ? inv(a) : a;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  std::size_t r = e_;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
  std::size_t k = 1, x = a;
  while (x != e_) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

std::size_t FiniteGroup::exponent() const {
  std::size_t e = 1;
  for (std::size_t a = 0; a < n_; ++a) e = std::lcm(e, element_order(a));
  return e;
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::optional<std::size_t> FiniteGroup::find_label(const std::string& s) const {
  for (std::size_t a = 0; a < n_; ++a)
    if (labels_[a] == s) return a;
  return std::nullopt;
}

std::vector<std::size_t> FiniteGroup::generated(const std::vector<std::size_t>& gens) const {
  std::vector<bool> in(n_, false);
  std::vector<std::size_t> list{e_};
  in[e_] = true;
  for (std::size_t i = 0; i < list.size(); ++i)
    for (auto g : gens) {
      std::size_t y = mul(list[i], g);
      if (!in[y]) {
        in[y] = true;
        list.push_back(y);
      }
    }
  std::sort(list.begin(), list.end());
  return list;
}

bool FiniteGroup::is_subgroup(const std::vector<std::size_t>& elems) const {
  std::vector<bool> in(n_, false);
  for (auto x : elems) {
    if (x >= n_) return false;
    in[x] = true;
  }
  if (!in[e_]) return false;
  for (auto x : elems) {
    if (!in[inv(x)]) return false;
    for (auto y : elems)
      if (!in[mul(x, y)]) return false;
  }
  return true;
}

std::vector<std::size_t> FiniteGroup::conjugate_subgroup(std::size_t g, const std::vector<std::size_t>& h) const {
  std::vector<std::size_t> out;
  for (auto x : h) out.push_back(mul(mul(g, x), inv(g)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<std::size_t>> FiniteGroup::cyclic_subgroup_classes() const {
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t a = 0; a < n_; ++a) {
    auto c = generated({a});
    if (seen.count(c)) continue;
    out.push_back(c);
    for (std::size_t g = 0; g < n_; ++g) seen.insert(conjugate_subgroup(g, c));
  }
  return out;
}

SubgroupView SubgroupView::make(const FinGroupPtr& ambient, const std::vector<std::size_t>& elems) {
  std::vector<std::size_t> sorted = elems;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!ambient->is_subgroup(sorted)) throw PreconditionError("element list is not a subgroup");
  std::map<std::size_t, std::size_t> pos;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    pos[sorted[i]] = i;
    labels.push_back(ambient->label(sorted[i]));
  }
  auto g = FiniteGroup::from_function(
      sorted.size(), [&](std::size_t a, std::size_t b) { return pos.at(ambient->mul(sorted[a], sorted[b])); },
      labels);
  return SubgroupView{g, sorted};
}

// ---------------------------------------------------------------------------
// GammaModule

namespace {

IntMatrix reduce_rows(IntMatrix m, const IntVec& d) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (d[i] != 0)
      for (std::size_t j = 0; j < m.cols(); ++j) mpz_mod(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), d[i].get_mpz_t());
  return m;
}

}  // namespace

GammaModule::GammaModule(FinGroupPtr group, GroupPtr underlying, std::vector<IntMatrix> action,
                         std::optional<std::vector<std::vector<std::size_t>>> permutation, std::string name)
    : group_(std::move(group)),
      underlying_(std::move(underlying)),
      action_(std::move(action)),
      perm_(std::move(permutation)),
      name_(std::move(name)) {
  const std::size_t n = underlying_->ngens();
  const std::size_t N = group_->order();
  if (action_.size() != N)
    throw PreconditionError("module action: expected " + std::to_string(N) + " matrices, got " +
                            std::to_string(action_.size()));
  for (std::size_t g = 0; g < N; ++g) {
    if (action_[g].rows() != n || action_[g].cols() != n)
      throw PreconditionError("module action[" + std::to_string(g) + "] has wrong shape");
    try {
      AbHom(underlying_, underlying_, action_[g]);
    } catch (const PreconditionError&) {
      throw PreconditionError("module action[" + std::to_string(g) + "] does not preserve the relations");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    IntVec e(n, 0);
    e[j] = 1;
    if (!underlying_->equal(action_[group_->identity()].col(j), e))
      throw PreconditionError("module action: identity does not act trivially on generator " + std::to_string(j));
  }
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t h = 0; h < N; ++h) {
      IntMatrix gh = action_[g] * action_[h];
      const IntMatrix& direct = action_[group_->mul(g, h)];
      for (std::size_t j = 0; j < n; ++j)
        if (!underlying_->equal(gh.col(j), direct.col(j)))
          throw PreconditionError("module action is not a homomorphism at (" + group_->label(g) + "," +
                                  group_->label(h) + ")");
    }
  if (perm_) {
    if (underlying_->relations().rows() != 0)
      throw PreconditionError("permutation certificate on a module with relations");
    if (perm_->size() != N) throw PreconditionError("permutation certificate has wrong length");
    for (std::size_t g = 0; g < N; ++g) {
      if ((*perm_)[g].size() != n) throw PreconditionError("permutation certificate row has wrong length");
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
          if (action_[g](i, j) != ((*perm_)[g][j] == i ? 1 : 0))
            throw PreconditionError("action matrix does not match the permutation certificate");
    }
  }
  const IntMatrix& t = underlying_->to_smith();
  const IntMatrix& f = underlying_->from_smith();
  smith_action_.reserve(N);
  for (std::size_t g = 0; g < N; ++g) smith_action_.push_back(reduce_rows(t * action_[g] * f, factors()));
}

ModulePtr GammaModule::make(FinGroupPtr group, GroupPtr underlying, std::vector<IntMatrix> action,
                            std::optional<std::vector<std::vector<std::size_t>>> permutation, std::string name) {
  return std::make_shared<const GammaModule>(std::move(group), std::move(underlying), std::move(action),
                                             std::move(permutation), std::move(name));
}

ModulePtr GammaModule::trivial(FinGroupPtr group, GroupPtr underlying, std::string name) {
  const std::size_t n = underlying->ngens();
  std::vector<IntMatrix> act(group->order(), IntMatrix::identity(n));
  std::optional<std::vector<std::vector<std::size_t>>> perm;
  if (underlying->relations().rows() == 0) {
    std::vector<std::size_t> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = i;
    perm.emplace(group->order(), id);
  }
  return make(std::move(group), std::move(underlying), std::move(act), std::move(perm), std::move(name));
}

IntVec GammaModule::act(std::size_t g, const IntVec& x) const { return underlying_->normalize(action_[g].apply(x)); }

bool GammaModule::is_lattice() const {
  return std::all_of(factors().begin(), factors().end(), [](const Int& d) { return d == 0; });
}

ModulePtr GammaModule::restrict_to(const SubgroupView& sub) const {
  std::vector<IntMatrix> act;
  std::optional<std::vector<std::vector<std::size_t>>> perm;
  if (perm_) perm.emplace();
  for (auto g : sub.embed) {
    act.push_back(action_[g]);
    if (perm_) perm->push_back((*perm_)[g]);
  }
  return make(sub.group, underlying_, std::move(act), std::move(perm), name_);
}

ModuleMap::ModuleMap(ModulePtr source, ModulePtr target, AbHom hom)
    : source_(std::move(source)), target_(std::move(target)), hom_(std::move(hom)) {
  if (source_->group()->order() != target_->group()->order())
    throw PreconditionError("module map between modules over different groups");
  const std::size_t N = source_->group()->order();
  for (std::size_t g = 0; g < N; ++g) {
    IntMatrix lhs = hom_.matrix() * source_->action(g);
    IntMatrix rhs = target_->action(g) * hom_.matrix();
    for (std::size_t j = 0; j < lhs.cols(); ++j)
      if (!target_->underlying()->equal(lhs.col(j), rhs.col(j)))
        throw PreconditionError("module map does not commute with the action of " + source_->group()->label(g));
  }
}

// ---------------------------------------------------------------------------

CyclotomicCharacter CyclotomicCharacter::trivial(const FinGroupPtr& g, const Int& n) {
  return CyclotomicCharacter{n, IntVec(g->order(), 1)};
}

void CyclotomicCharacter::check(const FiniteGroup& g) const {
  if (modulus < 1) throw PreconditionError("character modulus must be positive");
  if (values.size() != g.order()) throw PreconditionError("character has wrong number of values");
  auto red = [&](const Int& x) {
    Int r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    return r;
  };
  if (red(values[g.identity()]) != red(1)) throw PreconditionError("character is not 1 at the identity");
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      if (red(values[a] * values[b]) != red(values[g.mul(a, b)]))
        throw PreconditionError("character is not multiplicative at (" + g.label(a) + "," + g.label(b) + ")");
}

IntVec Pairing::apply(const IntVec& x, const IntVec& y) const {
  IntVec out(tensor.size(), 0);
  for (std::size_t k = 0; k < tensor.size(); ++k) {
    const IntMatrix& b = tensor[k];
    for (std::size_t i = 0; i < b.rows(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (b(i, j) != 0 && y[j] != 0) out[k] += x[i] * b(i, j) * y[j];
    }
  }
  return target->underlying()->normalize(out);
}

void Pairing::check() const {
  const std::size_t nl = left->ngens(), nr = right->ngens();
  if (tensor.size() != target->ngens()) throw PreconditionError("pairing tensor has wrong output dimension");
  for (const auto& b : tensor)
    if (b.rows() != nl || b.cols() != nr) throw PreconditionError("pairing tensor has wrong shape");
  auto unit = [](std::size_t n, std::size_t i) {
    IntVec e(n, 0);
    e[i] = 1;
    return e;
  };
  const auto& lr = left->underlying()->relations();
  const auto& rr = right->underlying()->relations();
  for (std::size_t r = 0; r < lr.rows(); ++r)
    for (std::size_t j = 0; j < nr; ++j)
      if (!target->underlying()->is_zero(apply(lr.row(r), unit(nr, j))))
        throw PreconditionError("pairing is not well defined on left relation " + std::to_string(r));
  for (std::size_t r = 0; r < rr.rows(); ++r)
    for (std::size_t i = 0; i < nl; ++i)
      if (!target->underlying()->is_zero(apply(unit(nl, i), rr.row(r))))
        throw PreconditionError("pairing is not well defined on right relation " + std::to_string(r));
  const std::size_t N = left->group()->order();
  for (std::size_t g = 0; g < N; ++g)
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t j = 0; j < nr; ++j) {
        IntVec lhs = apply(left->action(g).col(i), right->action(g).col(j));
        IntVec rhs = target->act(g, apply(unit(nl, i), unit(nr, j)));
        if (!target->underlying()->equal(lhs, rhs))
          throw PreconditionError("pairing is not equivariant under " + left->group()->label(g));
      }
}

// ---------------------------------------------------------------------------
// Constructions

ModulePtr permutation_module(const FinGroupPtr& g, const std::vector<std::vector<std::size_t>>& perm,
                             std::string name) {
  const std::size_t N = g->order();
  if (perm.size() != N) throw PreconditionError("permutation action has wrong number of rows");
  const std::size_t k = perm.empty() ? 0 : perm[0].size();
  for (std::size_t a = 0; a < N; ++a) {
    if (perm[a].size() != k) throw PreconditionError("permutation action rows differ in length");
    std::vector<bool> hit(k, false);
    for (auto x : perm[a]) {
      if (x >= k || hit[x]) throw PreconditionError("action of " + g->label(a) + " is not a permutation");
      hit[x] = true;
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    if (perm[g->identity()][i] != i) throw PreconditionError("identity does not act trivially on the index set");
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t i = 0; i < k; ++i)
        if (perm[g->mul(a, b)][i] != perm[a][perm[b][i]])
          throw PreconditionError("permutation action is not a homomorphism at (" + g->label(a) + "," + g->label(b) +
                                  ")");
  std::vector<IntMatrix> act;
  for (std::size_t a = 0; a < N; ++a) {
    IntMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m(perm[a][i], i) = 1;
    act.push_back(std::move(m));
  }
  return GammaModule::make(g, AbelianGroup::free(k), std::move(act), perm, std::move(name));
}

ModulePtr regular_module(const FinGroupPtr& g) {
  std::vector<std::vector<std::size_t>> perm(g->order(), std::vector<std::size_t>(g->order()));
  for (std::size_t a = 0; a < g->order(); ++a)
    for (std::size_t h = 0; h < g->order(); ++h) perm[a][h] = g->mul(a, h);
  return permutation_module(g, perm, "Z[G]");
}

namespace {

// Left coset representatives (smallest index in each coset) and coset lookup.
struct Cosets {
  std::vector<std::size_t> reps;
  std::vector<std::size_t> which;  // element -> coset index
};

Cosets left_cosets(const FiniteGroup& g, const std::vector<std::size_t>& h) {
  Cosets c;
  c.which.assign(g.order(), g.order());
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (c.which[x] != g.order()) continue;
    std::size_t idx = c.reps.size();
    c.reps.push_back(x);
    for (auto y : h) c.which[g.mul(x, y)] = idx;
  }
  return c;
}

}  // namespace

ModulePtr coset_module(const FinGroupPtr& g, const std::vector<std::size_t>& h) {
  if (!g->is_subgroup(h)) throw PreconditionError("coset_module: not a subgroup");
  Cosets c = left_cosets(*g, h);
  std::vector<std::vector<std::size_t>> perm(g->order(), std::vector<std::size_t>(c.reps.size()));
  for (std::size_t a = 0; a < g->order(); ++a)
    for (std::size_t j = 0; j < c.reps.size(); ++j) perm[a][j] = c.which[g->mul(a, c.reps[j])];
  return permutation_module(g, perm, "Z[G/H]");
}

ModulePtr induced_module(const FinGroupPtr& g, const SubgroupView& h, const GammaModule& m) {
  if (m.group()->order() != h.group->order()) throw PreconditionError("induced_module: module is not over the subgroup");
  Cosets c = left_cosets(*g, h.embed);
  std::map<std::size_t, std::size_t> sub_index;
  for (std::size_t i = 0; i < h.embed.size(); ++i) sub_index[h.embed[i]] = i;
  const std::size_t k = c.reps.size(), n = m.ngens();

  std::vector<GroupPtr> parts(k, m.underlying());
  GroupPtr under = direct_sum(parts);
  std::vector<IntMatrix> act;
  std::optional<std::vector<std::vector<std::size_t>>> perm;
  if (m.is_permutation()) perm.emplace();
  for (std::size_t a = 0; a < g->order(); ++a) {
    IntMatrix mat(k * n, k * n);
    std::vector<std::size_t> prow(k * n);
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t x = g->mul(a, c.reps[j]);
      std::size_t jj = c.which[x];
      std::size_t hh = sub_index.at(g->mul(g->inv(c.reps[jj]), x));
      const IntMatrix& b = m.action(hh);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) mat(jj * n + r, j * n + s) = b(r, s);
      if (perm)
        for (std::size_t s = 0; s < n; ++s) prow[j * n + s] = jj * n + (*m.permutation())[hh][s];
    }
    act.push_back(std::move(mat));
    if (perm) perm->push_back(std::move(prow));
  }
  return GammaModule::make(g, under, std::move(act), std::move(perm), "Ind(" + m.name() + ")");
}

ModulePtr twisted_cyclic(const FinGroupPtr& g, const CyclotomicCharacter& chi) {
  chi.check(*g);
  std::vector<IntMatrix> act;
  for (std::size_t a = 0; a < g->order(); ++a) {
    IntMatrix m(1, 1);
    mpz_mod(m(0, 0).get_mpz_t(), chi.values[a].get_mpz_t(), chi.modulus.get_mpz_t());
    act.push_back(m);
  }
  return GammaModule::make(g, AbelianGroup::cyclic(chi.modulus), std::move(act), std::nullopt,
                           "Z/" + chi.modulus.get_str() + "(chi)");
}

TwistedDual twisted_dual(const ModulePtr& m, const CyclotomicCharacter& chi) {
  const FinGroupPtr& g = m->group();
  chi.check(*g);
  if (!m->is_finite()) throw PreconditionError("twisted_dual: module is infinite");
  const Int& n = chi.modulus;
  const IntVec& d = m->factors();
  for (const auto& di : d)
    if (!mpz_divisible_p(n.get_mpz_t(), di.get_mpz_t()))
      throw PreconditionError("twisted_dual: exponent of the module does not divide " + n.get_str());
  const std::size_t t = d.size();
  std::vector<IntMatrix> act;
  for (std::size_t a = 0; a < g->order(); ++a) {
    const IntMatrix& ainv = m->smith_action(g->inv(a));
    IntMatrix mat(t, t);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        Int v = chi.values[a] * ainv(i, j) * d[j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d[i].get_mpz_t());
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), d[j].get_mpz_t());
        mat(j, i) = v;
      }
    act.push_back(std::move(mat));
  }
  ModulePtr dual = GammaModule::make(g, AbelianGroup::from_factors(d), std::move(act), std::nullopt,
                                     "dual(" + m->name() + ")");
  ModulePtr target = twisted_cyclic(g, chi);
  const IntMatrix& tm = m->underlying()->to_smith();
  IntMatrix b(m->ngens(), t);
  for (std::size_t a = 0; a < m->ngens(); ++a)
    for (std::size_t j = 0; j < t; ++j) b(a, j) = tm(j, a) * (n / d[j]);
  Pairing eval{m, dual, target, {b}};
  Pairing flipped{dual, m, target, {b.transpose()}};
  eval.check();
  return TwistedDual{dual, eval, flipped};
}

ModuleMap double_dual_map(const ModulePtr& m, const CyclotomicCharacter& chi) {
  TwistedDual d1 = twisted_dual(m, chi);
  TwistedDual d2 = twisted_dual(d1.dual, chi);
  // m -> (f -> <m, f>); the coordinate on the j-th dual-dual generator is the j-th smith coordinate of m.
  IntMatrix mat = m->underlying()->to_smith();
  if (mat.rows() == 0) mat = IntMatrix(0, m->ngens());
  return ModuleMap(m, d2.dual, AbHom(m->underlying(), d2.dual->underlying(), mat));
}

KernelModule kernel_module(const ModuleMap& phi) {
  Subgroup k = kernel_of_hom(phi.hom());
  const ModulePtr& src = phi.source();
  const std::size_t kn = k.group->ngens();
  std::vector<IntMatrix> act;
  for (std::size_t g = 0; g < src->group()->order(); ++g) {
    IntMatrix mat(kn, kn);
    for (std::size_t j = 0; j < kn; ++j) {
      IntVec img = src->act(g, k.incl.apply(k.group->generator(j)));
      auto pre = k.incl.preimage(img);
      if (!pre) throw MathError("kernel_module: kernel is not stable under the action");
      mat.set_col(j, *pre);
    }
    act.push_back(std::move(mat));
  }
  ModulePtr km = GammaModule::make(src->group(), k.group, std::move(act), std::nullopt, "ker");
  return KernelModule{km, ModuleMap(km, src, k.incl)};
}

CokernelModule cokernel_module(const ModuleMap& phi) {
  Quotient q = cokernel_of_hom(phi.hom());
  const ModulePtr& tgt = phi.target();
  const std::size_t cn = q.group->ngens();
  std::vector<IntVec> section;
  for (std::size_t j = 0; j < cn; ++j) {
    auto pre = q.proj.preimage(q.group->generator(j));
    if (!pre) throw MathError("cokernel_module: projection is not surjective");
    section.push_back(*pre);
  }
  std::vector<IntMatrix> act;
  for (std::size_t g = 0; g < tgt->group()->order(); ++g) {
    IntMatrix mat(cn, cn);
    for (std::size_t j = 0; j < cn; ++j) mat.set_col(j, q.proj.apply(tgt->act(g, section[j])));
    act.push_back(std::move(mat));
  }
  ModulePtr cm = GammaModule::make(tgt->group(), q.group, std::move(act), std::nullopt, "coker");
  return CokernelModule{cm, ModuleMap(tgt, cm, q.proj)};
}

Resolution quasi_trivial_resolution(const ModulePtr& m) {
  const FinGroupPtr& g = m->group();
  const std::size_t N = g->order(), n = m->ngens();
  std::vector<std::vector<std::size_t>> perm(N, std::vector<std::size_t>(N * n));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t h = 0; h < N; ++h) perm[a][j * N + h] = j * N + g->mul(a, h);
  ModulePtr p = permutation_module(g, perm, "P");
  IntMatrix pim(n, N * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t h = 0; h < N; ++h) {
      IntVec col = m->action(h).col(j);
      for (std::size_t r = 0; r < n; ++r) pim(r, j * N + h) = col[r];
    }
  ModuleMap pi(p, m, AbHom(p->underlying(), m->underlying(), pim));
  KernelModule k = kernel_module(pi);
  return Resolution{p, pi, k.module, k.incl};
}

void ShortExactSequence::check() const {
  if (i.target().get() != p.source().get() && i.target()->ngens() != p.source()->ngens())
    throw PreconditionError("short exact sequence: maps are not composable");
  if (!i.hom().is_injective()) throw PreconditionError("short exact sequence: first map is not injective");
  if (!p.hom().is_surjective()) throw PreconditionError("short exact sequence: second map is not surjective");
  if (!p.hom().compose_after(i.hom()).is_zero())
    throw PreconditionError("short exact sequence: composite is not zero");
  Subgroup k = kernel_of_hom(p.hom());
  for (std::size_t j = 0; j < k.group->ngens(); ++j)
    if (!i.hom().preimage(k.incl.apply(k.group->generator(j))))
      throw PreconditionError("short exact sequence: kernel is larger than the image");
}

namespace {

// Matrix of the transpose map Y^v -> X^v of h: X -> Y, in twisted-dual coordinates.
IntMatrix dual_matrix(const AbHom& h, const ModulePtr& x, const ModulePtr& y, const Int& n) {
  const IntVec& dx = x->factors();
  const IntVec& dy = y->factors();
  const IntMatrix& fx = x->underlying()->from_smith();
  IntMatrix out(dx.size(), dy.size());
  for (std::size_t k = 0; k < dx.size(); ++k) {
    IntVec sy = y->underlying()->smith_coords(h.apply(fx.col(k)));
    for (std::size_t j = 0; j < dy.size(); ++j) {
      Int v = sy[j] * (n / dy[j]);
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
      Int unit = n / dx[k];
      if (!mpz_divisible_p(v.get_mpz_t(), unit.get_mpz_t())) throw MathError("dual_matrix: value out of range");
      out(k, j) = v / unit;
    }
  }
  return out;
}

}  // namespace

DualSequence dual_sequence(const ShortExactSequence& ses, const CyclotomicCharacter& chi) {
  ses.check();
  TwistedDual a = twisted_dual(ses.i.source(), chi);
  TwistedDual b = twisted_dual(ses.i.target(), chi);
  TwistedDual c = twisted_dual(ses.p.target(), chi);
  IntMatrix pt = dual_matrix(ses.p.hom(), ses.p.source(), ses.p.target(), chi.modulus);
  IntMatrix it = dual_matrix(ses.i.hom(), ses.i.source(), ses.i.target(), chi.modulus);
  ModuleMap first(c.dual, b.dual, AbHom(c.dual->underlying(), b.dual->underlying(), pt));
  ModuleMap second(b.dual, a.dual, AbHom(b.dual->underlying(), a.dual->underlying(), it));
  ShortExactSequence dual{first, second};
  dual.check();
  return DualSequence{dual, a, b, c};
}

ModulePtr biquadratic_module(const FinGroupPtr& v4) {
  if (v4->order() != 4 || v4->exponent() != 2) throw PreconditionError("biquadratic_module: expected the Klein four group");
  IntMatrix a = IntMatrix::identity(4), b = IntMatrix::identity(4);
  a(1, 3) = 1;
  b(0, 3) = 1;
  b(1, 2) = 1;
  std::vector<IntMatrix> act = {IntMatrix::identity(4), b, a, a * b};
  return GammaModule::make(v4, AbelianGroup::from_factors({2, 2, 2, 2}), act, std::nullopt, "biquadratic");
}

}  // namespace wao
