#include "wao/locarith.hpp"

#include <algorithm>
#include <array>

namespace wao {

std::string place_label(long long v) { return v == 0 ? "inf" : std::to_string(v); }

long long place_of_label(const std::string& label) {
  if (label == "inf") return 0;
  std::size_t used = 0;
  long long p = 0;
  try {
    p = std::stoll(label, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != label.size() || !is_prime(p)) throw PreconditionError("not a place of Q: '" + label + "'");
  return p;
}

std::vector<long long> square_class_basis(long long v) {
  if (v == 0) return {-1};
  if (v == 2) return {2, -1, 5};
  if (!is_prime(v)) throw PreconditionError("square_class_basis: " + std::to_string(v) + " is not a prime");
  return {v, least_nonresidue(v)};
}

long long SquareClass::representative() const {
  auto basis = square_class_basis(place);
  long long r = 1;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) r *= basis[i];
  return r;
}

SquareClass square_class_of(long long y, long long v) {
  if (y == 0) throw PreconditionError("square class of zero");
  if (v == 0) return {0, {y < 0 ? 1 : 0}};
  int e = valuation(y, v);
  long long u = y;
  for (int i = 0; i < e; ++i) u /= v;
  if (v == 2) {
    long long r = mod(u, 8);
    return {2, {e % 2, mod(u, 4) == 3 ? 1 : 0, (r == 3 || r == 5) ? 1 : 0}};
  }
  return {v, {e % 2, legendre(u, v) == -1 ? 1 : 0}};
}

SquareClass square_class_from_bits(long long v, std::vector<int> bits) {
  if (bits.size() != square_class_basis(v).size())
    throw PreconditionError("square class at " + place_label(v) + ": wrong number of bits");
  for (int& b : bits) b &= 1;
  return {v, std::move(bits)};
}

int hilbert_symbol(const SquareClass& a, const SquareClass& b) {
  if (a.place != b.place) throw PreconditionError("hilbert_symbol: square classes at different places");
  return hilbert_symbol(a.representative(), b.representative(), a.place);
}

GlobalSquareClass GlobalSquareClass::of(long long n) {
  GlobalSquareClass g;
  g.sign = n < 0 ? -1 : 1;
  for (auto [p, e] : factorize(n))
    if (e % 2) g.primes.insert(p);
  return g;
}

GlobalSquareClass GlobalSquareClass::operator*(const GlobalSquareClass& o) const {
  GlobalSquareClass g;
  g.sign = sign * o.sign;
  std::set_symmetric_difference(primes.begin(), primes.end(), o.primes.begin(), o.primes.end(),
                                std::inserter(g.primes, g.primes.begin()));
  return g;
}

std::string GlobalSquareClass::to_string() const {
  std::string s = sign < 0 ? "-1" : "1";
  for (long long p : primes) s += "*" + std::to_string(p);
  return s;
}

SquareClass localize_global(const GlobalSquareClass& g, long long v) {
  SquareClass out{v, std::vector<int>(square_class_basis(v).size(), 0)};
  auto add = [&](long long y) {
    SquareClass c = square_class_of(y, v);
    for (std::size_t i = 0; i < c.bits.size(); ++i) out.bits[i] ^= c.bits[i];
  };
  if (g.sign < 0) add(-1);
  for (long long p : g.primes) add(p);
  return out;
}

int hilbert_symbol(const GlobalSquareClass& a, const GlobalSquareClass& b, long long v) {
  return hilbert_symbol(localize_global(a, v), localize_global(b, v));
}

std::vector<long long> bad_places(const std::vector<GlobalSquareClass>& classes) {
  std::set<long long> s = {0, 2};
  for (const auto& c : classes) s.insert(c.primes.begin(), c.primes.end());
  return {s.begin(), s.end()};
}

namespace {

using i128 = __int128;

long long ipow(long long p, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

int val128(i128 x, long long p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

int hilbert_oracle(long long a, long long b, long long v) {
  if (a == 0 || b == 0) throw PreconditionError("hilbert_oracle: arguments must be nonzero");
  if (v == 0) {
    // a x^2 + b y^2 takes a positive value iff one coefficient is positive
    for (int x = 0; x <= 1; ++x)
      for (int y = 0; y <= 1; ++y)
        if ((x || y) && a * x + b * y > 0) return 1;
    return -1;
  }
  const long long p = v;
  while (a % (p * p) == 0) a /= p * p;
  while (b % (p * p) == 0) b /= p * p;
  const int n = 2 * valuation(4 * a * b, p) + 3;
  const long long top = ipow(p, n);
  auto form = [&](i128 x, i128 y, i128 z) { return a * x * x + b * y * y - z * z; };
  bool survived = false;
  for (int chart = 0; chart < 3; ++chart) {
    auto point = [&](long long s, long long t) -> std::array<i128, 3> {
      if (chart == 0) return {1, s, t};
      if (chart == 1) return {s, 1, t};
      return {s, t, 1};
    };
    std::vector<std::pair<long long, long long>> nodes;
    for (long long s = 0; s < p; ++s)
      for (long long t = 0; t < p; ++t) {
        auto q = point(s, t);
        if (form(q[0], q[1], q[2]) % p == 0) nodes.push_back({s, t});
      }
    long long pk = p;
    for (int k = 1; k <= n && !nodes.empty(); ++k) {
      for (auto [s, t] : nodes) {
        auto q = point(s, t);
        i128 partial[3] = {2 * a * q[0], 2 * b * q[1], -2 * q[2]};
        for (auto d : partial) {
          int e = val128(d % pk, p, k);
          if (e < k && k >= 2 * e + 1) return 1;
        }
      }
      if (k == n) break;
      std::vector<std::pair<long long, long long>> next;
      const long long pk1 = pk * p;
      for (auto [s, t] : nodes)
        for (long long i = 0; i < p; ++i)
          for (long long j = 0; j < p; ++j) {
            long long s2 = s + i * pk, t2 = t + j * pk;
            auto q = point(s2, t2);
            if (form(q[0], q[1], q[2]) % pk1 == 0) next.push_back({s2, t2});
          }
      nodes = std::move(next);
      pk = pk1;
    }
    if (!nodes.empty() && pk >= top) survived = true;
  }
  return survived ? 1 : -1;
}

ReciprocityReport reciprocity_check(long long a, long long b) {
  ReciprocityReport r;
  std::set<long long> places = {0, 2};
  for (auto [p, e] : factorize(a)) places.insert(p);
  for (auto [p, e] : factorize(b)) places.insert(p);
  for (long long v : places) {
    int s = hilbert_symbol(a, b, v);
    r.symbols[v] = s;
    r.product *= s;
  }
  return r;
}

SquareClass local_character_class(const GaloisDatum& d, long long v, const std::function<int(std::size_t)>& chi) {
  auto basis = square_class_basis(v);
  std::vector<int> target;
  for (long long y : basis) target.push_back(chi(d.rec(v, y)) & 1);
  const std::size_t dim = basis.size();
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    SquareClass c{v, std::vector<int>(dim)};
    for (std::size_t i = 0; i < dim; ++i) c.bits[i] = mask >> i & 1;
    bool ok = true;
    for (std::size_t j = 0; j < dim && ok; ++j) ok = (hilbert_symbol(c.representative(), basis[j], v) == -1) == (target[j] == 1);
    if (ok) return c;
  }
  throw MathError("local_character_class: character at " + place_label(v) + " is not quadratic");
}

namespace {

struct SemiElem {
  IntVec h;
  std::size_t g;
};

SemiElem semi_mul(const GammaModule& m, const SemiElem& x, const SemiElem& y) {
  return {m.underlying()->add(x.h, m.act(x.g, y.h)), m.group()->mul(x.g, y.g)};
}

SemiElem semi_inv(const GammaModule& m, const SemiElem& x) {
  std::size_t gi = m.group()->inv(x.g);
  return {m.underlying()->neg(m.act(gi, x.h)), gi};
}

template <class T, class Mul>
T power(T x, long long e, const T& one, Mul mul) {
  T r = one;
  while (e > 0) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

// value at the relator of the 1-cochain with the given generator values
IntVec relator_value(const GammaModule& m, const LocalPresentation& lp, const std::vector<IntVec>& xs) {
  SemiElem acc{m.underlying()->zero(), m.group()->identity()};
  auto mul = [&](const SemiElem& x, const SemiElem& y) { return semi_mul(m, x, y); };
  for (auto [gen, e] : lp.relator) {
    SemiElem w{xs[gen], lp.images[gen]};
    if (e < 0) w = semi_inv(m, w);
    acc = mul(acc, power(w, e < 0 ? -e : e, SemiElem{m.underlying()->zero(), m.group()->identity()}, mul));
  }
  if (acc.g != m.group()->identity()) throw MathError("local presentation: relator does not hold in Gamma");
  return acc.h;
}

bool exponent_two(const GammaModule& m) {
  if (!m.is_finite()) return false;
  for (const auto& d : m.factors())
    if (d != 2) return false;
  return true;
}

}  // namespace

LocalH1::LocalH1(DatumPtr datum, Place place, ModulePtr module, bool force_cochain)
    : datum_(std::move(datum)), place_(std::move(place)), module_(std::move(module)) {
  const GammaModule& m = *module_;
  if (!exponent_two(m))
    throw Refusal("local H^1 at " + place_.label + ": only exponent-2 modules are supported (module " + m.name() + ")");
  if (!datum_->concrete()) throw Refusal("local H^1 at " + place_.label + ": abstract data have no local provider");
  bool trivial = true;
  for (std::size_t g : place_.decomposition)
    for (std::size_t j = 0; j < m.ngens() && trivial; ++j) {
      IntVec e = m.underlying()->generator(j);
      trivial = m.underlying()->equal(m.act(g, e), e);
    }
  const long long v = place_.kind == PlaceKind::Archimedean ? 0 : place_.prime;
  basis_ = square_class_basis(v);
  if (trivial && !force_cochain) {
    model_ = LocalModel::Kummer;
    group_ = AbelianGroup::from_factors(IntVec(m.smith_rank() * basis_.size(), 2));
    return;
  }
  model_ = LocalModel::Cochain;
  pres_ = local_presentation(*datum_, place_);
  if (!pres_)
    throw Refusal("local H^1 at " + place_.label + ": nontrivial action at a " +
                  (place_.provider == "dyadic" ? std::string("dyadic") : std::string("wildly ramified")) +
                  " place is not supported");
  const std::size_t k = pres_->images.size(), n = m.ngens();
  GroupPtr mk = direct_sum(std::vector<GroupPtr>(k, m.underlying()));
  IntMatrix rel(n, k * n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<IntVec> xs(k, m.underlying()->zero());
      xs[i] = m.underlying()->generator(j);
      rel.set_col(i * n + j, relator_value(m, *pres_, xs));
    }
  relator_map_ = std::make_shared<AbHom>(mk, m.underlying(), rel);
  cocycles_ = std::make_shared<Subgroup>(kernel_of_hom(*relator_map_));
  cocycle_solver_ = std::make_shared<HomSolver>(cocycles_->incl);
  std::vector<IntVec> bounds;
  for (std::size_t j = 0; j < n; ++j) {
    IntVec e = m.underlying()->generator(j), cob;
    for (std::size_t i = 0; i < k; ++i) {
      IntVec c = m.underlying()->sub(m.act(pres_->images[i], e), e);
      cob.insert(cob.end(), c.begin(), c.end());
    }
    auto pre = cocycle_solver_->preimage(cob);
    if (!pre) throw MathError("local H^1: coboundary is not a cocycle");
    bounds.push_back(*pre);
  }
  classes_ = std::make_shared<Quotient>(quotient_by(cocycles_->group, bounds));
  group_ = classes_->group;
}

IntVec LocalH1::from_square_classes(const std::vector<SquareClass>& c) const {
  if (model_ != LocalModel::Kummer) throw PreconditionError("local class at " + place_.label + " is not in the Kummer model");
  const std::size_t r = module_->smith_rank(), dim = basis_.size();
  if (c.size() != r) throw PreconditionError("local class at " + place_.label + ": expected " + std::to_string(r) + " square classes");
  IntVec x(r * dim, 0);
  for (std::size_t i = 0; i < r; ++i) {
    if (c[i].bits.size() != dim) throw PreconditionError("square class with the wrong basis at " + place_.label);
    for (std::size_t j = 0; j < dim; ++j) x[i * dim + j] = c[i].bits[j] & 1;
  }
  return x;
}

std::vector<SquareClass> LocalH1::to_square_classes(const IntVec& x) const {
  if (model_ != LocalModel::Kummer) throw PreconditionError("local class at " + place_.label + " is not in the Kummer model");
  const std::size_t r = module_->smith_rank(), dim = basis_.size();
  IntVec y = group_->normalize(x);
  const long long v = place_.kind == PlaceKind::Archimedean ? 0 : place_.prime;
  std::vector<SquareClass> out;
  for (std::size_t i = 0; i < r; ++i) {
    SquareClass c{v, std::vector<int>(dim)};
    for (std::size_t j = 0; j < dim; ++j) c.bits[j] = y[i * dim + j] != 0;
    out.push_back(c);
  }
  return out;
}

IntVec LocalH1::from_generator_values(const std::vector<IntVec>& values) const {
  if (model_ != LocalModel::Cochain) throw PreconditionError("local class at " + place_.label + " is not in the cochain model");
  if (values.size() != pres_->images.size())
    throw PreconditionError("local cocycle at " + place_.label + ": expected " + std::to_string(pres_->images.size()) + " generator values");
  IntVec flat;
  for (const auto& v : values) {
    if (v.size() != module_->ngens()) throw PreconditionError("local cocycle at " + place_.label + ": value of wrong length");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  if (!module_->underlying()->is_zero(relator_map_->apply(flat)))
    throw PreconditionError("local cochain at " + place_.label + " is not a cocycle");
  auto z = cocycle_solver_->preimage(flat);
  if (!z) throw MathError("local cocycle not found in the cocycle lattice");
  return classes_->proj.apply(*z);
}

std::vector<IntVec> LocalH1::generator_values(const IntVec& x) const {
  if (model_ != LocalModel::Cochain) throw PreconditionError("local class at " + place_.label + " is not in the cochain model");
  auto pre = classes_->proj.preimage(x);
  if (!pre) throw MathError("local class has no representative");
  IntVec flat = cocycles_->incl.apply(*pre);
  const std::size_t n = module_->ngens();
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < pres_->images.size(); ++i)
    out.push_back(module_->underlying()->normalize(IntVec(flat.begin() + i * n, flat.begin() + (i + 1) * n)));
  return out;
}

IntVec LocalH1::from_gamma_cocycle(const std::function<IntVec(std::size_t)>& f) const {
  if (model_ == LocalModel::Cochain) {
    std::vector<IntVec> vals;
    for (std::size_t img : pres_->images) vals.push_back(module_->underlying()->normalize(f(img)));
    return from_generator_values(vals);
  }
  const long long v = place_.kind == PlaceKind::Archimedean ? 0 : place_.prime;
  std::vector<SquareClass> classes;
  const GroupPtr& u = module_->underlying();
  for (std::size_t i = 0; i < module_->smith_rank(); ++i)
    classes.push_back(local_character_class(*datum_, v, [&](std::size_t g) {
      IntVec s = u->smith_coords(f(g));
      return static_cast<int>(mpz_class(s[i] % 2).get_si());
    }));
  return from_square_classes(classes);
}

IntVec LocalH1::from_gamma_cocycle(const Cochain& f) const {
  if (f.degree != 1 || f.module->group()->order() != module_->group()->order())
    throw PreconditionError("comparison map: expected a degree-1 cochain over Gamma");
  return from_gamma_cocycle([&](std::size_t g) { return f.value(g); });
}

namespace {

struct ExtElem {
  IntVec a, h;
  std::size_t g;
  int z;
};

int pair_bit(const Pairing& p, const IntVec& a, const IntVec& h) {
  IntVec v = p.target->underlying()->normalize(p.apply(a, h));
  IntVec s = p.target->underlying()->smith_coords(v);
  if (s.empty()) return 0;
  return static_cast<int>(mpz_class(s[0] % 2).get_si());
}

}  // namespace

mpq_class local_invariant_pairing(const LocalH1& left, const IntVec& alpha, const LocalH1& right, const IntVec& xi,
                                  const Pairing& pairing) {
  if (left.place().label != right.place().label || left.model() != right.model())
    throw PreconditionError("local pairing: classes live at different places or in different models");
  const IntVec& tf = pairing.target->factors();
  if (tf.size() != 1 || tf[0] != 2) throw PreconditionError("local pairing: target must be Z/2");
  if (left.model() == LocalModel::Kummer) {
    auto s = left.to_square_classes(alpha);
    auto c = right.to_square_classes(xi);
    const IntMatrix& lf = left.module()->underlying()->from_smith();
    const IntMatrix& rf = right.module()->underlying()->from_smith();
    int acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        if (pair_bit(pairing, lf.col(i), rf.col(j)) && hilbert_symbol(s[i], c[j]) == -1) acc ^= 1;
    mpq_class out(acc, 2);
    out.canonicalize();
    return out;
  }
  const GammaModule& lm = *left.module();
  const GammaModule& rm = *right.module();
  const FiniteGroup& g = *lm.group();
  // central extension of (L x R) x| Gamma by Z/2 defined by the cup-product cocycle
  auto mul = [&](const ExtElem& x, const ExtElem& y) {
    IntVec gy = rm.act(x.g, y.h);
    return ExtElem{lm.underlying()->add(x.a, lm.act(x.g, y.a)), rm.underlying()->add(x.h, gy), g.mul(x.g, y.g),
                   (x.z + y.z + pair_bit(pairing, x.a, gy)) & 1};
  };
  auto inv = [&](const ExtElem& x) {
    std::size_t gi = g.inv(x.g);
    return ExtElem{lm.underlying()->neg(lm.act(gi, x.a)), rm.underlying()->neg(rm.act(gi, x.h)), gi,
                   (pair_bit(pairing, x.a, x.h) - x.z) & 1};
  };
  const ExtElem one{lm.underlying()->zero(), rm.underlying()->zero(), g.identity(), 0};
  auto av = left.generator_values(alpha);
  auto xv = right.generator_values(xi);
  const auto& lp = *left.presentation();
  ExtElem acc = one;
  for (auto [gen, e] : lp.relator) {
    ExtElem w{av[gen], xv[gen], lp.images[gen], 0};
    if (e < 0) w = inv(w);
    acc = mul(acc, power(w, e < 0 ? -e : e, one, mul));
  }
  if (!lm.underlying()->is_zero(acc.a) || !rm.underlying()->is_zero(acc.h) || acc.g != g.identity())
    throw MathError("local pairing: relator lift left the kernel");
  mpq_class out(acc.z, 2);
  out.canonicalize();
  return out;
}

SurjectivityResult surjectivity_search(const std::vector<long long>& places, long long bound) {
  SurjectivityResult r;
  for (long long v : places) r.target_dimension += square_class_basis(v).size();
  std::vector<long long> candidates = {-1};
  for (long long p : primes_up_to(std::max<long long>(bound, 2))) candidates.push_back(p);
  // F2 row echelon of localization vectors
  std::vector<std::vector<int>> rows;
  std::vector<std::size_t> pivots;
  for (long long c : candidates) {
    if (r.achieved_dimension == r.target_dimension) break;
    std::vector<int> vec;
    for (long long v : places) {
      auto sc = square_class_of(c, v);
      vec.insert(vec.end(), sc.bits.begin(), sc.bits.end());
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (vec[pivots[i]])
        for (std::size_t j = 0; j < vec.size(); ++j) vec[j] ^= rows[i][j];
    auto it = std::find(vec.begin(), vec.end(), 1);
    if (it == vec.end()) continue;
    pivots.push_back(static_cast<std::size_t>(it - vec.begin()));
    rows.push_back(vec);
    r.generators.push_back(GlobalSquareClass::of(c));
    ++r.achieved_dimension;
  }
  r.ok = r.achieved_dimension == r.target_dimension;
  return r;
}

}  // namespace wao
