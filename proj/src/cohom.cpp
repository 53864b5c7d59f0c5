#include "wao/cohom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace wao {

std::size_t tuple_count(std::size_t order, std::size_t q) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < q; ++i) r *= order;
  return r;
}

namespace {

std::vector<std::size_t> decode(std::size_t idx, std::size_t n, std::size_t q) {
  std::vector<std::size_t> d(q);
  for (std::size_t i = q; i-- > 0;) {
    d[i] = idx % n;
    idx /= n;
  }
  return d;
}

std::size_t encode(const std::vector<std::size_t>& d, std::size_t n) {
  std::size_t r = 0;
  for (auto x : d) r = r * n + x;
  return r;
}

// The q+2 faces of the bar differential at a (q+1)-tuple: the first is acted on
// by g_1, the rest carry the sign (-1)^i.
struct Faces {
  std::size_t acting = 0;
  std::size_t tail = 0;
  std::vector<std::size_t> merged;  // i = 1..q
  std::size_t head = 0;
};

Faces faces(const FiniteGroup& g, std::size_t tau, std::size_t q) {
  const std::size_t n = g.order();
  auto d = decode(tau, n, q + 1);
  Faces f;
  f.acting = d[0];
  f.tail = encode(std::vector<std::size_t>(d.begin() + 1, d.end()), n);
  for (std::size_t i = 1; i <= q; ++i) {
    std::vector<std::size_t> m;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (j == i - 1) {
        m.push_back(g.mul(d[j], d[j + 1]));
        ++j;
      } else {
        m.push_back(d[j]);
      }
    }
    f.merged.push_back(encode(m, n));
  }
  f.head = encode(std::vector<std::size_t>(d.begin(), d.end() - 1), n);
  return f;
}

// Sparse rows of d_q in smith coordinates; row (tau, i) has modulus d_i.
std::vector<SparseRow> smith_differential_rows(const GammaModule& m, std::size_t q) {
  const FiniteGroup& g = *m.group();
  const std::size_t n = g.order(), t = m.smith_rank();
  const std::size_t out = tuple_count(n, q + 1);
  std::vector<SparseRow> rows(out * t);
  for (std::size_t tau = 0; tau < out; ++tau) {
    Faces f = faces(g, tau, q);
    const IntMatrix& a = m.smith_action(f.acting);
    for (std::size_t i = 0; i < t; ++i) {
      std::map<std::size_t, Int> acc;
      for (std::size_t k = 0; k < t; ++k)
        if (a(i, k) != 0) acc[f.tail * t + k] += a(i, k);
      for (std::size_t j = 0; j < f.merged.size(); ++j) acc[f.merged[j] * t + i] += (j % 2 == 0) ? -1 : 1;
      acc[f.head * t + i] += (q % 2 == 0) ? -1 : 1;
      auto& row = rows[tau * t + i].entries;
      for (auto& [c, v] : acc)
        if (v != 0) row.emplace_back(c, v);
    }
  }
  return rows;
}

IntVec row_moduli(const GammaModule& m, std::size_t tuples) {
  IntVec mod;
  mod.reserve(tuples * m.smith_rank());
  for (std::size_t tau = 0; tau < tuples; ++tau)
    for (const auto& d : m.factors()) mod.push_back(d);
  return mod;
}

IntMatrix dense(const std::vector<SparseRow>& rows, std::size_t cols) {
  IntMatrix out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r].entries) out(r, c) = v;
  return out;
}

// Cochain values (original coordinates) <-> smith coordinates, tuple by tuple.
IntVec to_smith_values(const Cochain& c) {
  const GammaModule& m = *c.module;
  const std::size_t t = m.smith_rank(), tuples = c.tuples();
  IntVec out(tuples * t);
  for (std::size_t tau = 0; tau < tuples; ++tau) {
    IntVec s = m.underlying()->smith_coords(c.value(tau));
    for (std::size_t i = 0; i < t; ++i) out[tau * t + i] = s[i];
  }
  return out;
}

Cochain from_smith_values(const ModulePtr& m, std::size_t q, const IntVec& s) {
  Cochain c = zero_cochain(m, q);
  const std::size_t t = m->smith_rank();
  for (std::size_t tau = 0; tau < c.tuples(); ++tau) {
    IntVec part(s.begin() + static_cast<std::ptrdiff_t>(tau * t), s.begin() + static_cast<std::ptrdiff_t>((tau + 1) * t));
    for (std::size_t i = 0; i < t; ++i)
      if (m->factors()[i] != 0) mpz_mod(part[i].get_mpz_t(), part[i].get_mpz_t(), m->factors()[i].get_mpz_t());
    c.set_value(tau, m->underlying()->from_smith_coords(part));
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cochains

std::size_t Cochain::tuples() const { return tuple_count(module->group()->order(), degree); }

IntVec Cochain::value(std::size_t tuple) const {
  const std::size_t n = module->ngens();
  return IntVec(values.begin() + static_cast<std::ptrdiff_t>(tuple * n),
                values.begin() + static_cast<std::ptrdiff_t>((tuple + 1) * n));
}

void Cochain::set_value(std::size_t tuple, const IntVec& v) {
  const std::size_t n = module->ngens();
  for (std::size_t i = 0; i < n; ++i) values[tuple * n + i] = v[i];
}

Cochain zero_cochain(const ModulePtr& m, std::size_t q) {
  Cochain c{q, m, {}};
  c.values.assign(tuple_count(m->group()->order(), q) * m->ngens(), 0);
  return c;
}

Cochain normalize_cochain(const Cochain& c) {
  Cochain r = c;
  for (std::size_t tau = 0; tau < c.tuples(); ++tau) r.set_value(tau, c.module->underlying()->normalize(c.value(tau)));
  return r;
}

Cochain add_cochains(const Cochain& a, const Cochain& b) {
  if (a.degree != b.degree || a.values.size() != b.values.size()) throw PreconditionError("adding unlike cochains");
  Cochain r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
  return normalize_cochain(r);
}

Cochain scale_cochain(const Int& k, const Cochain& a) {
  Cochain r = a;
  for (auto& v : r.values) v *= k;
  return normalize_cochain(r);
}

bool cochains_equal(const Cochain& a, const Cochain& b) {
  if (a.degree != b.degree || a.values.size() != b.values.size()) return false;
  for (std::size_t tau = 0; tau < a.tuples(); ++tau)
    if (!a.module->underlying()->equal(a.value(tau), b.value(tau))) return false;
  return true;
}

Cochain apply_differential(const Cochain& f) {
  if (f.degree > 3) throw PreconditionError("differential: degree above 3");
  const GammaModule& m = *f.module;
  const FiniteGroup& g = *m.group();
  const std::size_t q = f.degree, n = m.ngens();
  Cochain out = zero_cochain(f.module, q + 1);
  for (std::size_t tau = 0; tau < out.tuples(); ++tau) {
    Faces fc = faces(g, tau, q);
    IntVec v = m.action(fc.acting).apply(f.value(fc.tail));
    for (std::size_t j = 0; j < fc.merged.size(); ++j) {
      IntVec w = f.value(fc.merged[j]);
      for (std::size_t i = 0; i < n; ++i) v[i] += (j % 2 == 0) ? -w[i] : w[i];
    }
    IntVec w = f.value(fc.head);
    for (std::size_t i = 0; i < n; ++i) v[i] += (q % 2 == 0) ? -w[i] : w[i];
    out.set_value(tau, m.underlying()->normalize(v));
  }
  return out;
}

IntMatrix differential_matrix(const GammaModule& m, std::size_t q) {
  if (q > 3) throw PreconditionError("differential: degree above 3");
  const FiniteGroup& g = *m.group();
  const std::size_t N = g.order(), n = m.ngens();
  const std::size_t in = tuple_count(N, q), out = tuple_count(N, q + 1);
  IntMatrix d(out * n, in * n);
  for (std::size_t tau = 0; tau < out; ++tau) {
    Faces f = faces(g, tau, q);
    const IntMatrix& a = m.action(f.acting);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) d(tau * n + i, f.tail * n + k) += a(i, k);
      for (std::size_t j = 0; j < f.merged.size(); ++j) d(tau * n + i, f.merged[j] * n + i) += (j % 2 == 0) ? -1 : 1;
      d(tau * n + i, f.head * n + i) += (q % 2 == 0) ? -1 : 1;
    }
  }
  return d;
}

AbHom differential(const ModulePtr& m, std::size_t q) {
  const std::size_t N = m->group()->order();
  GroupPtr src = direct_sum(std::vector<GroupPtr>(tuple_count(N, q), m->underlying()));
  GroupPtr tgt = direct_sum(std::vector<GroupPtr>(tuple_count(N, q + 1), m->underlying()));
  return AbHom(src, tgt, differential_matrix(*m, q));
}

// ---------------------------------------------------------------------------
// Cohomology groups

CohPtr cohomology(const ModulePtr& m, std::size_t q) {
  if (q > 2) throw PreconditionError("cohomology: degree above 2");
  auto h = std::shared_ptr<CohGroup>(new CohGroup());
  h->q_ = q;
  h->m_ = m;
  const std::size_t N = m->group()->order(), t = m->smith_rank();
  const std::size_t vars = tuple_count(N, q) * t;

  if (m->is_lattice() && q >= 1) {
    // Cocycles are saturated, so H^q is the torsion of coker d_{q-1}.
    h->coker_path_ = true;
    IntMatrix dm = dense(smith_differential_rows(*m, q - 1), tuple_count(N, q - 1) * t);
    h->coker_ = snf(dm, SnfOptions{true, false, true, false});
    IntVec fac;
    for (std::size_t i = 0; i < h->coker_.rank; ++i)
      if (h->coker_.diagonal[i] > 1) {
        h->torsion_idx_.push_back(i);
        fac.push_back(h->coker_.diagonal[i]);
      }
    h->group_ = AbelianGroup::from_factors(fac);
    return h;
  }

  h->zbasis_ = kernel_mod(smith_differential_rows(*m, q), row_moduli(*m, tuple_count(N, q + 1)), vars);
  const std::size_t k = h->zbasis_.cols();
  IntMatrix rel(0, k);
  if (k > 0) {
    h->zsolver_ = std::make_shared<LatticeSolver>(h->zbasis_);
    auto add_rel = [&](const IntVec& v) {
      auto c = h->zsolver_->solve(v);
      if (!c) throw MathError("cohomology: boundary outside the cocycle lattice");
      rel.append_row(*c);
    };
    if (q >= 1) {
      IntMatrix dm = dense(smith_differential_rows(*m, q - 1), tuple_count(N, q - 1) * t);
      for (std::size_t j = 0; j < dm.cols(); ++j) add_rel(dm.col(j));
    }
    for (std::size_t v = 0; v < vars; ++v) {
      const Int& d = m->factors()[v % t];
      if (d == 0) continue;
      IntVec e(vars, 0);
      e[v] = d;
      add_rel(e);
    }
  }
  h->raw_ = AbelianGroup::make(k, rel);
  h->group_ = AbelianGroup::from_factors(h->raw_->invariant_factors());
  return h;
}

bool CohGroup::is_cocycle(const Cochain& z) const {
  if (z.degree != q_) return false;
  Cochain dz = apply_differential(z);
  for (std::size_t tau = 0; tau < dz.tuples(); ++tau)
    if (!m_->underlying()->is_zero(dz.value(tau))) return false;
  return true;
}

Cochain CohGroup::lift(const IntVec& x) const {
  IntVec c = group_->smith_coords(x);
  const std::size_t N = m_->group()->order(), t = m_->smith_rank();
  if (coker_path_) {
    IntVec w(coker_.U_inv.cols(), 0);
    for (std::size_t i = 0; i < torsion_idx_.size(); ++i) w[torsion_idx_[i]] = c[i];
    return from_smith_values(m_, q_, coker_.U_inv.apply(w));
  }
  if (zbasis_.cols() == 0) return zero_cochain(m_, q_);
  IntVec s = zbasis_.apply(raw_->from_smith().apply(c));
  (void)N;
  (void)t;
  return from_smith_values(m_, q_, s);
}

IntVec CohGroup::project(const Cochain& z) const {
  if (!is_cocycle(z)) throw PreconditionError("project: cochain is not a cocycle");
  IntVec s = to_smith_values(z);
  if (coker_path_) {
    IntVec u = coker_.U.apply(s);
    IntVec out(torsion_idx_.size());
    for (std::size_t i = 0; i < torsion_idx_.size(); ++i) out[i] = u[torsion_idx_[i]];
    return group_->normalize(out);
  }
  if (zbasis_.cols() == 0) return group_->zero();
  auto c = zsolver_->solve(s);
  if (!c) throw MathError("project: cocycle outside the computed cocycle lattice");
  return group_->normalize(raw_->smith_coords(*c));
}

// ---------------------------------------------------------------------------
// Restriction

Cochain restrict_cochain(const Cochain& c, const SubgroupView& sub, const ModulePtr& restricted) {
  const std::size_t N = c.module->group()->order(), M = sub.group->order();
  Cochain r = zero_cochain(restricted, c.degree);
  for (std::size_t tau = 0; tau < r.tuples(); ++tau) {
    auto d = decode(tau, M, c.degree);
    for (auto& x : d) x = sub.embed[x];
    r.set_value(tau, c.value(encode(d, N)));
  }
  return r;
}

IntVec restrict_class(const CohGroup& ambient, const IntVec& x, const SubgroupView& sub, const CohGroup& target) {
  if (target.module()->group()->order() != sub.group->order())
    throw PreconditionError("restrict_class: target is not over the subgroup");
  return target.project(restrict_cochain(ambient.lift(x), sub, target.module()));
}

AbHom restriction_map(const CohGroup& ambient, const SubgroupView& sub, const CohGroup& target) {
  const GroupPtr& a = ambient.group();
  IntMatrix mat(target.group()->ngens(), a->ngens());
  for (std::size_t j = 0; j < a->ngens(); ++j) mat.set_col(j, restrict_class(ambient, a->generator(j), sub, target));
  return AbHom(a, target.group(), mat);
}

// ---------------------------------------------------------------------------
// Connecting maps

ConnectingMap::ConnectingMap(ShortExactSequence ses) : ses_(std::move(ses)) {
  ses_.check();
  HomSolver up(ses_.p.hom());
  const std::size_t nc = ses_.p.target()->ngens();
  for (std::size_t j = 0; j < nc; ++j) {
    IntVec e(nc, 0);
    e[j] = 1;
    auto pre = up.preimage(e);
    if (!pre) throw MathError("connecting map: projection not surjective");
    section_.push_back(*pre);
  }
  pull_ = std::make_shared<HomSolver>(ses_.i.hom());
}

Cochain ConnectingMap::apply(const Cochain& c) const {
  const ModulePtr& b = ses_.p.source();
  const ModulePtr& a = ses_.i.source();
  Cochain lifted = zero_cochain(b, c.degree);
  for (std::size_t tau = 0; tau < c.tuples(); ++tau) {
    IntVec v = c.value(tau);
    IntVec w(b->ngens(), 0);
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0)
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += v[j] * section_[j][i];
    lifted.set_value(tau, b->underlying()->normalize(w));
  }
  Cochain db = apply_differential(lifted);
  Cochain out = zero_cochain(a, c.degree + 1);
  for (std::size_t tau = 0; tau < db.tuples(); ++tau) {
    auto pre = pull_->preimage(db.value(tau));
    if (!pre) throw PreconditionError("connecting map: input is not a cocycle");
    out.set_value(tau, *pre);
  }
  return out;
}

IntVec ConnectingMap::apply_class(const CohGroup& hc, const IntVec& x, const CohGroup& ha) const {
  return ha.project(apply(hc.lift(x)));
}

AbHom ConnectingMap::as_hom(const CohGroup& hc, const CohGroup& ha) const {
  IntMatrix mat(ha.group()->ngens(), hc.group()->ngens());
  for (std::size_t j = 0; j < hc.group()->ngens(); ++j)
    mat.set_col(j, apply_class(hc, hc.group()->generator(j), ha));
  return AbHom(hc.group(), ha.group(), mat);
}

// ---------------------------------------------------------------------------

Cochain cup(const Cochain& f, const Cochain& t, const Pairing& pairing) {
  if (f.module->ngens() != pairing.left->ngens() || t.module->ngens() != pairing.right->ngens())
    throw PreconditionError("cup: cochain modules do not match the pairing");
  pairing.check();
  const FiniteGroup& g = *f.module->group();
  const std::size_t N = g.order(), p = f.degree, q = t.degree;
  Cochain out = zero_cochain(pairing.target, p + q);
  const std::size_t tq = tuple_count(N, q);
  for (std::size_t a = 0; a < f.tuples(); ++a) {
    std::size_t prod = g.identity();
    for (auto x : decode(a, N, p)) prod = g.mul(prod, x);
    IntVec left = f.value(a);
    for (std::size_t b = 0; b < tq; ++b)
      out.set_value(a * tq + b, pairing.apply(left, pairing.right->act(prod, t.value(b))));
  }
  return out;
}

ShapiroReport shapiro_compare(const FinGroupPtr& g, const SubgroupView& sub, const ModulePtr& m, std::size_t q) {
  ModulePtr ind = induced_module(g, sub, *m);
  ShapiroReport r;
  r.induced_factors = cohomology(ind, q)->group()->invariant_factors();
  r.sub_factors = cohomology(m, q)->group()->invariant_factors();
  r.isomorphic = r.induced_factors == r.sub_factors;
  return r;
}

// ---------------------------------------------------------------------------
// Brute force

IntVec factors_from_torsion_counts(const Int& order, const std::function<Int(const Int&)>& torsion_order) {
  std::map<Int, std::vector<Int>> by_prime;  // prime -> cyclic p-power orders (descending)
  std::vector<std::pair<Int, Int>> primes;  // (p, full p-part)
  Int rest = order;
  for (Int p = 2; p * p <= rest; ++p) {
    if (!mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) continue;
    Int full = 1;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      rest /= p;
      full *= p;
    }
    primes.emplace_back(p, full);
  }
  if (rest > 1) primes.emplace_back(rest, rest);
  for (const auto& [p, full] : primes) {
    // r_j = number of cyclic p-factors of order >= p^j
    std::vector<std::size_t> r;
    Int prev = 1, pj = p;
    while (true) {
      Int cur = torsion_order(pj);
      Int ratio = cur / prev;
      std::size_t cnt = 0;
      while (ratio > 1) {
        ratio /= p;
        ++cnt;
      }
      if (cnt == 0) break;
      r.push_back(cnt);
      if (cur == full) break;
      prev = cur;
      pj *= p;
    }
    std::vector<Int> orders;
    for (std::size_t j = 0; j < r.size(); ++j) {
      std::size_t exact = r[j] - (j + 1 < r.size() ? r[j + 1] : 0);
      Int pw;
      mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), j + 1);
      for (std::size_t c = 0; c < exact; ++c) orders.push_back(pw);
    }
    std::sort(orders.rbegin(), orders.rend());
    by_prime[p] = orders;
  }
  std::size_t len = 0;
  for (auto& [p, v] : by_prime) len = std::max(len, v.size());
  IntVec out(len, 1);
  for (auto& [p, v] : by_prime)
    for (std::size_t i = 0; i < v.size(); ++i) out[len - 1 - i] *= v[i];
  return out;
}

BruteCohomology brute_force_cohomology(const ModulePtr& m, std::size_t q) {
  if (!m->is_finite()) throw Refusal("brute_force_cohomology: module is infinite");
  const FiniteGroup& g = *m->group();
  const std::size_t N = g.order();
  const IntVec& d = m->factors();
  const std::size_t t = d.size();
  std::size_t msize = 1;
  for (const auto& x : d) msize *= x.get_ui();
  const std::size_t tuples = tuple_count(N, q);
  if (std::pow(static_cast<double>(msize), static_cast<double>(tuples)) > kBruteForceGuard)
    throw Refusal("brute_force_cohomology: |M|^(|G|^q) exceeds the enumeration guard");

  std::vector<std::size_t> dd(t);
  for (std::size_t i = 0; i < t; ++i) dd[i] = d[i].get_ui();
  auto digits = [&](std::size_t e) {
    std::vector<std::size_t> v(t);
    for (std::size_t i = t; i-- > 0;) {
      v[i] = e % dd[i];
      e /= dd[i];
    }
    return v;
  };
  auto undigits = [&](const std::vector<std::size_t>& v) {
    std::size_t e = 0;
    for (std::size_t i = 0; i < t; ++i) e = e * dd[i] + v[i];
    return e;
  };
  std::vector<std::size_t> add(msize * msize), neg(msize);
  for (std::size_t a = 0; a < msize; ++a) {
    auto va = digits(a);
    std::vector<std::size_t> vn(t);
    for (std::size_t i = 0; i < t; ++i) vn[i] = (dd[i] - va[i]) % dd[i];
    neg[a] = undigits(vn);
    for (std::size_t b = 0; b < msize; ++b) {
      auto vb = digits(b);
      std::vector<std::size_t> s(t);
      for (std::size_t i = 0; i < t; ++i) s[i] = (va[i] + vb[i]) % dd[i];
      add[a * msize + b] = undigits(s);
    }
  }
  std::vector<std::size_t> act(N * msize);
  for (std::size_t x = 0; x < N; ++x) {
    const IntMatrix& a = m->smith_action(x);
    for (std::size_t e = 0; e < msize; ++e) {
      auto v = digits(e);
      std::vector<std::size_t> w(t);
      for (std::size_t i = 0; i < t; ++i) {
        Int acc = 0;
        for (std::size_t k = 0; k < t; ++k) acc += a(i, k) * static_cast<unsigned long>(v[k]);
        Int r;
        mpz_mod(r.get_mpz_t(), acc.get_mpz_t(), d[i].get_mpz_t());
        w[i] = r.get_ui();
      }
      act[x * msize + e] = undigits(w);
    }
  }

  using Code = std::vector<std::size_t>;  // element per tuple
  auto diff = [&](const Code& f, std::size_t deg) {
    const std::size_t out = tuple_count(N, deg + 1);
    Code r(out);
    for (std::size_t tau = 0; tau < out; ++tau) {
      Faces fc = faces(g, tau, deg);
      std::size_t v = act[fc.acting * msize + f[fc.tail]];
      for (std::size_t j = 0; j < fc.merged.size(); ++j) {
        std::size_t w = f[fc.merged[j]];
        v = add[v * msize + ((j % 2 == 0) ? neg[w] : w)];
      }
      std::size_t w = f[fc.head];
      v = add[v * msize + ((deg % 2 == 0) ? neg[w] : w)];
      r[tau] = v;
    }
    return r;
  };
  auto pack = [&](const Code& c) {
    std::uint64_t k = 0;
    for (std::size_t i = c.size(); i-- > 0;) k = k * msize + c[i];
    return k;
  };
  auto unpack = [&](std::uint64_t k, std::size_t len) {
    Code c(len);
    for (std::size_t i = 0; i < len; ++i) {
      c[i] = static_cast<std::size_t>(k % msize);
      k /= msize;
    }
    return c;
  };
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < tuples; ++i) total *= msize;

  std::unordered_set<std::uint64_t> bounds;
  if (q == 0) {
    bounds.insert(0);
  } else {
    const std::size_t lower = tuple_count(N, q - 1);
    std::uint64_t ltotal = 1;
    for (std::size_t i = 0; i < lower; ++i) ltotal *= msize;
    for (std::uint64_t k = 0; k < ltotal; ++k) bounds.insert(pack(diff(unpack(k, lower), q - 1)));
  }
  std::vector<std::uint64_t> cocycles;
  for (std::uint64_t k = 0; k < total; ++k) {
    Code df = diff(unpack(k, tuples), q);
    if (std::all_of(df.begin(), df.end(), [](std::size_t x) { return x == 0; })) cocycles.push_back(k);
  }
  BruteCohomology out;
  out.cocycles = cocycles.size();
  out.coboundaries = bounds.size();
  out.order = Int(static_cast<unsigned long>(cocycles.size() / bounds.size()));
  auto torsion = [&](const Int& k) {
    std::size_t cnt = 0;
    unsigned long kk = k.get_ui();
    for (auto code : cocycles) {
      Code c = unpack(code, tuples);
      for (auto& x : c) {
        auto v = digits(x);
        for (std::size_t i = 0; i < t; ++i) v[i] = (v[i] * (kk % dd[i])) % dd[i];
        x = undigits(v);
      }
      if (bounds.count(pack(c))) ++cnt;
    }
    return Int(static_cast<unsigned long>(cnt / bounds.size()));
  };
  out.invariant_factors = factors_from_torsion_counts(out.order, torsion);
  return out;
}

}  // namespace wao
