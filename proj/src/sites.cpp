#include "wao/sites.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "wao/numth.hpp"

namespace wao {

std::string to_string(PlaceKind k) {
  switch (k) {
    case PlaceKind::Unramified:
      return "unramified";
    case PlaceKind::Ramified:
      return "ramified";
    case PlaceKind::Archimedean:
      return "archimedean";
  }
  return "?";
}

namespace {

long long discriminant(long long d) { return mod(d, 4) == 1 ? d : 4 * d; }

// element of the Klein four group acting by (-1)^i on sqrt a and (-1)^j on sqrt b
std::size_t v4_index(int i, int j) { return static_cast<std::size_t>(2 * i + j); }

std::size_t cyclo_index(const FiniteGroup& g, long long r) {
  const auto& res = g.residues();
  long long x = mod(r, g.modulus());
  auto it = std::lower_bound(res.begin(), res.end(), x);
  if (it == res.end() || *it != x) throw PreconditionError("residue " + std::to_string(r) + " is not a unit");
  return static_cast<std::size_t>(it - res.begin());
}

// prime-to-p part of m and the p-power part
std::pair<long long, long long> split_modulus(long long m, long long p) {
  long long pk = 1;
  while (m % p == 0) {
    m /= p;
    pk *= p;
  }
  return {m, pk};
}

// x with x = a mod m1, x = b mod m2 (coprime moduli)
long long crt(long long a, long long m1, long long b, long long m2) {
  if (m1 == 1) return mod(b, m2);
  if (m2 == 1) return mod(a, m1);
  long long t = static_cast<long long>(static_cast<__int128>(mod(b - a, m2)) * inverse_mod(m1, m2) % m2);
  return mod(a + m1 * t, m1 * m2);
}

}  // namespace

DatumPtr GaloisDatum::cyclotomic(long long m) {
  if (m < 3) throw PreconditionError("cyclotomic datum: m must be at least 3");
  auto d = std::shared_ptr<GaloisDatum>(new GaloisDatum());
  d->type_ = DatumType::Cyclotomic;
  d->m_ = m;
  d->group_ = FiniteGroup::units_mod(m);
  const FiniteGroup& g = *d->group_;
  Place inf{"inf", 0, PlaceKind::Archimedean, g.generated({cyclo_index(g, m - 1)}), std::nullopt, "real"};
  d->special_.push_back(inf);
  for (auto [p, e] : factorize(m)) {
    auto [mp, pk] = split_modulus(m, p);
    if (pk == 2) continue;  // Q(zeta_m) = Q(zeta_{m/2}) is unramified at 2
    d->ramified_.push_back(p);
    std::vector<std::size_t> gv;
    for (std::size_t x = 0; x < g.order(); ++x) {
      long long r = g.residues()[x];
      long long pw = 1 % mp;
      bool hit = false;
      for (long long k = 0; k <= mp && !hit; ++k) {
        hit = mod(r, mp) == pw;
        pw = mod(pw * p, mp);
      }
      if (hit) gv.push_back(x);
    }
    bool wild = (p != 2 && pk > p) || (p == 2);
    std::string provider = p == 2 ? "dyadic" : (wild ? "none" : "tame");
    d->special_.push_back(Place{std::to_string(p), p, PlaceKind::Ramified, gv, std::nullopt, provider});
  }
  return d;
}

DatumPtr GaloisDatum::multiquadratic(long long a, long long b) {
  if (a == b || a == 1 || b == 1 || a == 0 || b == 0) throw PreconditionError("multiquadratic datum: degenerate a, b");
  if (squarefree_part(a) != a || squarefree_part(b) != b)
    throw PreconditionError("multiquadratic datum: a and b must be squarefree");
  if (squarefree_part(a * b) == 1) throw PreconditionError("multiquadratic datum: ab is a square");
  auto d = std::shared_ptr<GaloisDatum>(new GaloisDatum());
  d->type_ = DatumType::Multiquadratic;
  d->a_ = a;
  d->b_ = b;
  d->group_ = FiniteGroup::product({2, 2});
  const long long ab = squarefree_part(a * b);
  std::set<long long> ram;
  for (long long x : {a, b, ab}) {
    for (auto [p, e] : factorize(x)) ram.insert(p);
    if (mod(x, 4) != 1) ram.insert(2);
  }
  ram.erase(1);
  d->ramified_.assign(ram.begin(), ram.end());
  Place inf{"inf", 0, PlaceKind::Archimedean, {}, std::nullopt, "real"};
  inf.decomposition = d->group_->generated({v4_index(a < 0, b < 0)});
  d->special_.push_back(inf);
  for (long long p : d->ramified_) {
    // D_p is cut out by the quadratic subfields in which p splits
    auto splits = [&](long long x) {
      if (p == 2) return mod(x, 8) == 1;
      return x % p != 0 && legendre(x, p) == 1;
    };
    std::vector<std::size_t> gv;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        bool ok = !(splits(a) && i) && !(splits(b) && j) && !(splits(ab) && (i ^ j));
        if (ok) gv.push_back(v4_index(i, j));
      }
    std::sort(gv.begin(), gv.end());
    d->special_.push_back(Place{std::to_string(p), p, PlaceKind::Ramified, gv, std::nullopt, p == 2 ? "dyadic" : "tame"});
  }
  return d;
}

DatumPtr GaloisDatum::abstract(FinGroupPtr group, std::vector<Place> special,
                               std::map<long long, std::size_t> frobenius_table, bool chebotarev) {
  auto d = std::shared_ptr<GaloisDatum>(new GaloisDatum());
  d->type_ = DatumType::Abstract;
  d->group_ = std::move(group);
  std::set<std::string> seen;
  for (auto& p : special) {
    if (!seen.insert(p.label).second) throw PreconditionError("abstract datum: duplicate place label " + p.label);
    std::sort(p.decomposition.begin(), p.decomposition.end());
    if (p.prime > 0 && p.kind == PlaceKind::Ramified) d->ramified_.push_back(p.prime);
    p.provider = "none";
  }
  for (const auto& [p, g] : frobenius_table)
    if (g >= d->group_->order()) throw PreconditionError("abstract datum: Frobenius of " + std::to_string(p) + " out of range");
  d->special_ = std::move(special);
  d->frob_table_ = std::move(frobenius_table);
  d->chebotarev_ = chebotarev;
  return d;
}

std::string GaloisDatum::describe() const {
  switch (type_) {
    case DatumType::Cyclotomic:
      return "cyclotomic(" + std::to_string(m_) + ")";
    case DatumType::Multiquadratic:
      return "multiquadratic(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    case DatumType::Abstract:
      return "abstract(order " + std::to_string(group_->order()) + ")";
  }
  return "?";
}

bool GaloisDatum::is_ramified(long long p) const {
  return std::find(ramified_.begin(), ramified_.end(), p) != ramified_.end();
}

std::optional<std::size_t> GaloisDatum::frobenius(long long p) const {
  if (!is_prime(p) || is_ramified(p)) return std::nullopt;
  switch (type_) {
    case DatumType::Cyclotomic:
      if (m_ % p == 0) return std::nullopt;
      return cyclo_index(*group_, p);
    case DatumType::Multiquadratic:
      return v4_index(kronecker(a_, p) == -1, kronecker(b_, p) == -1);
    case DatumType::Abstract: {
      auto it = frob_table_.find(p);
      if (it == frob_table_.end()) return std::nullopt;
      return it->second;
    }
  }
  return std::nullopt;
}

const Place* GaloisDatum::find_special(const std::string& label) const {
  for (const auto& p : special_)
    if (p.label == label) return &p;
  return nullptr;
}

std::size_t GaloisDatum::rec(long long v, long long y) const {
  if (y == 0) throw PreconditionError("rec: zero argument");
  switch (type_) {
    case DatumType::Multiquadratic:
      return v4_index(hilbert_symbol(a_, y, v) == -1, hilbert_symbol(b_, y, v) == -1);
    case DatumType::Cyclotomic: {
      if (v == 0) return cyclo_index(*group_, y < 0 ? -1 : 1);
      auto [mp, pk] = split_modulus(m_, v);
      int j = valuation(y, v);
      long long u = y;
      for (int i = 0; i < j; ++i) u /= v;
      long long unr = mp == 1 ? 0 : powmod(v, j, mp);
      long long ram = pk == 1 ? 0 : inverse_mod(mod(u, pk), pk);
      return cyclo_index(*group_, crt(unr, mp, ram, pk));
    }
    case DatumType::Abstract:
      break;
  }
  throw Refusal("local reciprocity is not available for " + describe());
}

long long GaloisDatum::character_class(const std::vector<int>& chi) const {
  const FiniteGroup& g = *group_;
  if (chi.size() != g.order()) throw PreconditionError("character_class: wrong length");
  if (type_ == DatumType::Multiquadratic) {
    long long d = 1;
    if (chi[v4_index(1, 0)]) d *= a_;
    if (chi[v4_index(0, 1)]) d *= b_;
    return squarefree_part(d);
  }
  if (type_ == DatumType::Cyclotomic) {
    std::vector<long long> primes;
    for (auto [p, e] : factorize(m_)) primes.push_back(p);
    for (unsigned mask = 0; mask < (1u << primes.size()); ++mask)
      for (long long sign : {1, -1}) {
        long long d = sign;
        for (std::size_t i = 0; i < primes.size(); ++i)
          if (mask >> i & 1) d *= primes[i];
        long long disc = discriminant(d);
        if (m_ % disc != 0) continue;
        bool ok = true;
        for (std::size_t x = 0; x < g.order() && ok; ++x) {
          long long r = g.residues()[x];
          ok = (kronecker(disc, r) == -1) == (chi[x] == 1);
        }
        if (ok) return d;
      }
    throw MathError("character_class: no quadratic subfield matches the character");
  }
  throw Refusal("character_class is not available for " + describe());
}

Place place_data(const GaloisDatum& d, const std::string& label) {
  if (const Place* p = d.find_special(label)) return *p;
  long long p = 0;
  try {
    std::size_t used = 0;
    p = std::stoll(label, &used);
    if (used != label.size()) p = 0;
  } catch (const std::exception&) {
    p = 0;
  }
  if (p <= 1 || !is_prime(p)) throw PreconditionError("unknown place label '" + label + "'");
  auto f = d.frobenius(p);
  if (!f) throw PreconditionError("place " + label + " is ramified or has no Frobenius in " + d.describe());
  Place out{label, p, PlaceKind::Unramified, d.group()->generated({*f}), f, p == 2 ? "dyadic" : "tame"};
  if (!d.concrete()) out.provider = "none";
  return out;
}

std::optional<LocalPresentation> local_presentation(const GaloisDatum& d, const Place& v) {
  if (!d.concrete() || v.provider == "none" || v.provider == "dyadic") return std::nullopt;
  LocalPresentation lp;
  if (v.kind == PlaceKind::Archimedean) {
    lp.rec_args = {-1};
    lp.images = {d.rec(0, -1)};
    lp.relator = {{0, 2}};
    return lp;
  }
  const long long p = v.prime;
  // sigma: Frobenius lift fixing the radicals of p; tau: tame inertia generator
  lp.rec_args = {-p, primitive_root(p)};
  lp.images = {d.rec(p, -p), d.rec(p, primitive_root(p))};
  lp.relator = {{0, 1}, {1, 1}, {0, -1}, {1, -p}};
  return lp;
}

ValidationReport validate_datum(const GaloisDatum& d, long long bound) {
  ValidationReport r;
  const FiniteGroup& g = *d.group();
  for (const auto& pl : d.special_places())
    if (!g.is_subgroup(pl.decomposition)) {
      r.ok = false;
      r.failures.push_back("place " + pl.label + ": decomposition subgroup is not closed");
    }
  for (long long p : primes_up_to(bound)) {
    auto f = d.frobenius(p);
    if (f && !r.frobenius_witness.count(*f)) r.frobenius_witness[*f] = p;
  }
  for (std::size_t x = 0; x < g.order(); ++x)
    if (!r.frobenius_witness.count(x)) {
      r.ok = false;
      r.failures.push_back("element " + g.label(x) + " is not a Frobenius of any unramified prime <= " +
                           std::to_string(bound));
    }
  return r;
}

std::vector<std::vector<int>> quadratic_characters(const FiniteGroup& g) {
  // values on a generating set determine the character
  std::vector<std::size_t> gens;
  std::vector<std::size_t> span = {g.identity()};
  for (std::size_t x = 0; x < g.order(); ++x)
    if (!std::binary_search(span.begin(), span.end(), x)) {
      gens.push_back(x);
      span = g.generated(gens);
    }
  std::vector<std::vector<int>> out;
  for (unsigned long mask = 0; mask < (1ul << gens.size()); ++mask) {
    std::vector<int> chi(g.order(), -1);
    chi[g.identity()] = 0;
    std::vector<std::size_t> frontier = {g.identity()};
    bool ok = true;
    while (!frontier.empty() && ok) {
      std::vector<std::size_t> next;
      for (std::size_t x : frontier)
        for (std::size_t i = 0; i < gens.size(); ++i) {
          std::size_t y = g.mul(x, gens[i]);
          int val = chi[x] ^ static_cast<int>(mask >> i & 1);
          if (chi[y] < 0) {
            chi[y] = val;
            next.push_back(y);
          } else if (chi[y] != val) {
            ok = false;
          }
        }
      frontier = std::move(next);
    }
    for (std::size_t a = 0; a < g.order() && ok; ++a)
      for (std::size_t b = 0; b < g.order() && ok; ++b) ok = chi[g.mul(a, b)] == (chi[a] ^ chi[b]);
    if (ok) out.push_back(chi);
  }
  return out;
}

}  // namespace wao
