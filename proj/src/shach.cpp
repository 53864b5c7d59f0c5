#include "wao/shach.hpp"

#include <algorithm>
#include <set>

namespace wao {

std::vector<Condition> sha_conditions(const GaloisDatum& d, const std::vector<std::string>& s) {
  std::vector<Condition> out;
  const FiniteGroup& g = *d.group();
  for (const auto& h : g.cyclic_subgroup_classes()) {
    // label by the first element generating h
    std::string label;
    for (std::size_t x : h)
      if (g.generated({x}) == h) {
        label = "<" + g.label(x) + ">";
        break;
      }
    out.push_back({label, h});
  }
  std::set<std::string> in_s(s.begin(), s.end());
  for (const auto& p : d.special_places())
    if (!in_s.count(p.label)) out.push_back({p.label, p.decomposition});
  return out;
}

ShaGroup sha(const GaloisDatum& d, const ModulePtr& m, const std::vector<std::string>& s, std::size_t q) {
  if (q != 1 && q != 2) throw PreconditionError("sha: degree must be 1 or 2");
  if (!d.chebotarev()) throw Refusal("sha: the datum is not certified Chebotarev-closed");
  if (m->group()->order() != d.group()->order()) throw PreconditionError("sha: module group differs from the datum group");
  if (q == 1 && !m->is_finite()) throw Refusal("sha: degree 1 needs finite coefficients");
  if (q == 2 && !m->is_lattice())
    throw Refusal("sha: degree 2 is supported for lattices only (module " + m->name() + ")");
  for (const auto& label : s) place_data(d, label);

  ShaGroup out;
  out.degree = q;
  out.module = m;
  out.ambient = cohomology(m, q);
  out.conditions = sha_conditions(d, s);
  const GroupPtr& amb = out.ambient->group();
  std::vector<GroupPtr> parts;
  std::vector<IntMatrix> blocks;
  for (const auto& c : out.conditions) {
    auto view = SubgroupView::make(d.group(), c.subgroup);
    auto target = cohomology(m->restrict_to(view), q);
    AbHom r = restriction_map(*out.ambient, view, *target);
    parts.push_back(target->group());
    blocks.push_back(r.matrix());
  }
  IntMatrix stacked(0, amb->ngens());
  for (const auto& b : blocks) stacked = IntMatrix::vstack(stacked, b);
  GroupPtr prod = parts.empty() ? AbelianGroup::free(0) : direct_sum(parts);
  Subgroup k = kernel_of_hom(AbHom(amb, prod, stacked));
  out.group = k.group;
  out.incl = std::make_shared<AbHom>(k.incl);
  return out;
}

bool verify_sha(const ShaGroup& sh) {
  const FinGroupPtr& g = sh.module->group();
  for (const auto& c : sh.conditions) {
    auto view = SubgroupView::make(g, c.subgroup);
    auto target = cohomology(sh.module->restrict_to(view), sh.degree);
    for (std::size_t i = 0; i < sh.group->ngens(); ++i) {
      IntVec x = sh.to_ambient(sh.group->generator(i));
      if (!target->group()->is_zero(restrict_class(*sh.ambient, x, view, *target))) return false;
    }
  }
  return true;
}

ShaQuotient sha_rel_quotient(const ShaGroup& sha_s, const ShaGroup& sha_empty) {
  if (sha_s.degree != sha_empty.degree || sha_s.module != sha_empty.module)
    throw PreconditionError("sha_rel_quotient: groups of different modules or degrees");
  HomSolver solver(*sha_s.incl);
  std::vector<IntVec> sub;
  for (std::size_t i = 0; i < sha_empty.group->ngens(); ++i) {
    auto pre = solver.preimage(sha_empty.to_ambient(sha_empty.group->generator(i)));
    if (!pre) throw MathError("sha_rel_quotient: Sha_empty is not contained in Sha_S");
    sub.push_back(*pre);
  }
  Quotient q = quotient_by(sha_s.group, sub);
  ShaQuotient out{q.group, std::make_shared<AbHom>(q.proj), {}};
  const IntMatrix& fs = q.group->from_smith();
  for (std::size_t j = 0; j < fs.cols(); ++j) {
    auto pre = q.proj.preimage(fs.col(j));
    if (!pre) throw MathError("sha_rel_quotient: projection is not surjective");
    out.section.push_back(sha_s.group->normalize(*pre));
  }
  return out;
}

std::string to_string(ChLevel l) { return l == ChLevel::Split ? "split" : "provider"; }

IntVec ChGroup::assemble(const std::vector<IntVec>& parts) const {
  if (parts.size() != local_groups.size()) throw PreconditionError("Ch tuple: expected one class per place of S");
  IntVec x;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != local_groups[i]->ngens())
      throw PreconditionError("Ch tuple: class at " + places[i].label + " has the wrong length");
    x.insert(x.end(), parts[i].begin(), parts[i].end());
  }
  return product->normalize(x);
}

std::vector<IntVec> ChGroup::split(const IntVec& x) const {
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < local_groups.size(); ++i)
    out.push_back(local_groups[i]->normalize(IntVec(x.begin() + offsets[i], x.begin() + offsets[i] + local_groups[i]->ngens())));
  return out;
}

std::vector<IntVec> ChGroup::generator_tuples() const {
  std::vector<IntVec> out;
  const IntMatrix& fs = group()->from_smith();
  for (std::size_t j = 0; j < fs.cols(); ++j) {
    auto pre = quotient->proj.preimage(fs.col(j));
    if (!pre) throw MathError("Ch: projection is not surjective");
    out.push_back(product->normalize(*pre));
  }
  return out;
}

IntVec localize_kummer(const LocalH1& local, const std::vector<std::pair<GlobalSquareClass, IntVec>>& terms) {
  const GammaModule& m = *local.module();
  const long long v = local.place().kind == PlaceKind::Archimedean ? 0 : local.prime();
  if (local.model() == LocalModel::Kummer) {
    const std::size_t dim = square_class_basis(v).size();
    std::vector<SquareClass> cls(m.smith_rank(), SquareClass{v, std::vector<int>(dim, 0)});
    for (const auto& [c, h] : terms) {
      IntVec s = m.underlying()->smith_coords(h);
      SquareClass lc = localize_global(c, v);
      for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] % 2 != 0)
          for (std::size_t t = 0; t < dim; ++t) cls[k].bits[t] ^= lc.bits[t];
    }
    return local.from_square_classes(cls);
  }
  const auto& lp = *local.presentation();
  std::vector<IntVec> vals;
  for (long long y : lp.rec_args) {
    IntVec acc = m.underlying()->zero();
    for (const auto& [c, h] : terms)
      if (hilbert_symbol(c, GlobalSquareClass::of(y), v) == -1) acc = m.underlying()->add(acc, h);
    vals.push_back(acc);
  }
  return local.from_generator_values(vals);
}

namespace {

void finish(ChGroup& ch) {
  std::vector<GroupPtr> parts = ch.local_groups;
  ch.product = parts.empty() ? AbelianGroup::free(0) : direct_sum(parts);
  std::size_t off = 0;
  for (const auto& g : parts) {
    ch.offsets.push_back(off);
    off += g->ngens();
  }
  ch.quotient = std::make_shared<Quotient>(quotient_by(ch.product, ch.image));
}

std::vector<Place> resolve_places(const GaloisDatum& d, const std::vector<std::string>& s) {
  std::vector<Place> out;
  std::set<std::string> seen;
  for (const auto& label : s)
    if (seen.insert(label).second) out.push_back(place_data(d, label));
  return out;
}

// F2 kernel basis of a 0/1 matrix given by rows
std::vector<std::vector<int>> f2_kernel(std::vector<std::vector<int>> rows, std::size_t n) {
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][c])
        for (std::size_t j = 0; j < n; ++j) rows[i][j] ^= rows[r][j];
    pivcol.push_back(c);
    ++r;
  }
  std::vector<std::vector<int>> basis;
  std::set<std::size_t> pivots(pivcol.begin(), pivcol.end());
  for (std::size_t f = 0; f < n; ++f) {
    if (pivots.count(f)) continue;
    std::vector<int> x(n, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < pivcol.size(); ++i)
      if (rows[i][f]) x[pivcol[i]] = 1;
    basis.push_back(x);
  }
  return basis;
}

void ch1_split(ChGroup& ch, const GaloisDatum& d) {
  const ModulePtr& m = ch.module;
  auto global = cohomology(m, 1);
  std::vector<AbHom> res;
  for (const auto& p : ch.places) {
    auto view = SubgroupView::make(d.group(), p.decomposition);
    auto local = cohomology(m->restrict_to(view), 1);
    ch.split_local.push_back(local);
    ch.local_groups.push_back(local->group());
    res.push_back(restriction_map(*global, view, *local));
  }
  for (std::size_t i = 0; i < global->group()->ngens(); ++i) {
    IntVec x;
    for (const auto& r : res) {
      IntVec y = r.apply(global->group()->generator(i));
      x.insert(x.end(), y.begin(), y.end());
    }
    ch.image.push_back(x);
  }
  finish(ch);
}

IntVec lift_beta(const ChGroup& ch, const std::vector<GlobalSquareClass>& beta) {
  const ProviderFiltration& f = *ch.filtration;
  const IntMatrix& bfs = f.quotient->group->from_smith();
  std::vector<std::pair<GlobalSquareClass, IntVec>> terms;
  for (std::size_t j = 0; j < beta.size(); ++j) terms.push_back({beta[j], bfs.col(j)});
  IntVec x;
  for (std::size_t k = 0; k < ch.places.size(); ++k) {
    IntVec target = localize_kummer(*f.b_local[k], terms);
    auto pre = f.lift[k]->preimage(target);
    if (!pre) throw MathError("provider Ch: local obstruction to lifting a global B-class at " + ch.places[k].label);
    x.insert(x.end(), pre->begin(), pre->end());
  }
  return x;
}

void ch1_provider(ChGroup& ch, const DatumPtr& dp, long long bound) {
  const GaloisDatum& d = *dp;
  const ModulePtr& h = ch.module;
  const GammaModule& hm = *h;
  const FiniteGroup& g = *d.group();
  const GroupPtr& hu = hm.underlying();
  for (const auto& p : ch.places) {
    auto l = std::make_shared<LocalH1>(dp, p, h);
    ch.provider_local.push_back(l);
    ch.local_groups.push_back(l->group());
  }

  // filtration 0 -> A = H^Gamma -> H -> B -> 0
  IntMatrix stacked(0, hm.ngens());
  std::vector<GroupPtr> copies;
  for (std::size_t x = 0; x < g.order(); ++x) {
    stacked = IntMatrix::vstack(stacked, hm.action(x) - IntMatrix::identity(hm.ngens()));
    copies.push_back(hu);
  }
  Subgroup a = kernel_of_hom(AbHom(hu, direct_sum(copies), stacked));
  std::vector<IntVec> agens;
  const IntMatrix& afs = a.group->from_smith();
  for (std::size_t i = 0; i < afs.cols(); ++i) agens.push_back(hu->normalize(a.incl.apply(afs.col(i))));
  Quotient b = quotient_by(hu, agens);
  const std::size_t ra = agens.size(), rb = b.group->invariant_factors().size();
  ch.diagnostics.fixed_rank = ra;
  ch.diagnostics.quotient_rank = rb;
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t j = 0; j < hm.ngens(); ++j) {
      IntVec e = hu->generator(j);
      if (!b.group->is_zero(b.proj.apply(hu->sub(hm.act(x, e), e))))
        throw Refusal("provider Ch: module " + hm.name() + " has Loewy length above 2");
    }
  std::vector<IntVec> section;
  const IntMatrix& bfs = b.group->from_smith();
  for (std::size_t j = 0; j < rb; ++j) section.push_back(*b.proj.preimage(bfs.col(j)));
  HomSolver asolve(a.incl);
  auto filt = std::make_shared<ProviderFiltration>();
  ch.filtration = filt;
  filt->fixed_gens = agens;
  filt->quotient = std::make_shared<Quotient>(b);
  // psi_ij as quadratic characters of Gamma, then as global square classes
  std::vector<std::vector<GlobalSquareClass>> d_ij(ra, std::vector<GlobalSquareClass>(rb));
  for (std::size_t j = 0; j < rb; ++j) {
    std::vector<std::vector<int>> chi(ra, std::vector<int>(g.order(), 0));
    for (std::size_t x = 0; x < g.order(); ++x) {
      auto pre = asolve.preimage(hu->sub(hm.act(x, section[j]), section[j]));
      IntVec s = a.group->smith_coords(*pre);
      for (std::size_t i = 0; i < ra; ++i) chi[i][x] = s[i] % 2 != 0;
    }
    for (std::size_t i = 0; i < ra; ++i) d_ij[i][j] = GlobalSquareClass::of(d.character_class(chi[i]));
  }
  filt->psi = d_ij;

  std::vector<long long> sp;
  for (const auto& p : ch.places) sp.push_back(p.kind == PlaceKind::Archimedean ? 0 : p.prime);

  // Kummer part: H^1(Q, A) localized
  auto search = surjectivity_search(sp, bound);
  ch.diagnostics.bound = bound;
  ch.diagnostics.kummer_complete = search.ok;
  ch.diagnostics.kummer_generators = search.generators;
  for (const auto& c : search.generators)
    for (const auto& ai : agens) {
      IntVec x;
      for (const auto& l : ch.provider_local) {
        IntVec y = localize_kummer(*l, {{c, ai}});
        x.insert(x.end(), y.begin(), y.end());
      }
      ch.image.push_back(x);
    }

  if (rb > 0) {
    // candidate characters for the B-part
    std::set<long long> cand_primes;
    for (long long p : primes_up_to(std::max<long long>(bound, 2))) cand_primes.insert(p);
    for (long long v : sp)
      if (v > 0) cand_primes.insert(v);
    for (const auto& row : d_ij)
      for (const auto& c : row) cand_primes.insert(c.primes.begin(), c.primes.end());
    // an auxiliary prime q enters only through the squares mod q of -1, 2 and the
    // primes above, so one prime per such class completes the search
    std::vector<long long> basis = {-1, 2};
    for (long long p : cand_primes)
      if (p != 2) {
        bool special = std::find(sp.begin(), sp.end(), p) != sp.end();
        for (const auto& row : d_ij)
          for (const auto& c : row) special = special || c.primes.count(p);
        if (special) basis.push_back(p);
      }
    const std::size_t nclass = std::size_t{1} << basis.size();
    std::vector<char> hit(nclass, 0);
    std::size_t found = 0;
    for (long long q = 3; q < 10000000 && found < nclass; q += 2) {
      if (!is_prime(q) || std::find(basis.begin(), basis.end(), q) != basis.end()) continue;
      std::size_t cls = 0;
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (legendre(mod(basis[i], q), q) == -1) cls |= std::size_t{1} << i;
      if (!hit[cls]) {
        hit[cls] = 1;
        ++found;
        cand_primes.insert(q);
      }
    }
    ch.diagnostics.frobenius_classes = nclass;
    ch.diagnostics.lambda_complete = found == nclass;
    std::vector<GlobalSquareClass> cands = {GlobalSquareClass::of(-1)};
    for (long long p : cand_primes) cands.push_back(GlobalSquareClass::of(p));
    // local maps H^1(Q_v, H) -> H^1(Q_v, B)
    ModulePtr bm = GammaModule::trivial(d.group(), b.group, "B");
    std::vector<std::shared_ptr<LocalH1>> blocal;
    std::vector<std::shared_ptr<HomSolver>> lift;
    for (std::size_t k = 0; k < ch.places.size(); ++k) {
      const LocalH1& hl = *ch.provider_local[k];
      bool cochain = hl.model() == LocalModel::Cochain;
      auto bl = std::make_shared<LocalH1>(dp, ch.places[k], bm, cochain);
      IntMatrix mat(bl->group()->ngens(), hl.group()->ngens());
      for (std::size_t e = 0; e < hl.group()->ngens(); ++e) {
        IntVec img;
        if (cochain) {
          std::vector<IntVec> vals;
          for (const auto& val : hl.generator_values(hl.group()->generator(e))) vals.push_back(b.proj.apply(val));
          img = bl->from_generator_values(vals);
        } else {
          auto cls = hl.to_square_classes(hl.group()->generator(e));
          const long long v = sp[k];
          std::vector<SquareClass> out(rb, SquareClass{v, std::vector<int>(cls.empty() ? 0 : cls[0].bits.size(), 0)});
          for (std::size_t kk = 0; kk < cls.size(); ++kk) {
            IntVec s = b.group->smith_coords(b.proj.apply(hu->from_smith().col(kk)));
            for (std::size_t j = 0; j < rb; ++j)
              if (s[j] % 2 != 0)
                for (std::size_t t = 0; t < out[j].bits.size(); ++t) out[j].bits[t] ^= cls[kk].bits[t];
          }
          img = bl->from_square_classes(out);
        }
        mat.set_col(e, img);
      }
      blocal.push_back(bl);
      lift.push_back(std::make_shared<HomSolver>(AbHom(hl.group(), bl->group(), mat)));
    }
    filt->b_local = blocal;
    filt->lift = lift;
    for (const auto& beta : liftable_characters(d_ij, cands)) {
      ch.diagnostics.lifted_classes.push_back(beta);
      ch.image.push_back(lift_beta(ch, beta));
    }
  }

  // classes inflated from Gamma
  auto infl = cohomology(h, 1);
  for (std::size_t i = 0; i < infl->group()->ngens(); ++i) {
    Cochain z = infl->lift(infl->group()->generator(i));
    IntVec x;
    for (const auto& l : ch.provider_local) {
      IntVec y = l->from_gamma_cocycle(z);
      x.insert(x.end(), y.begin(), y.end());
    }
    ch.image.push_back(x);
  }
  finish(ch);
}

}  // namespace

std::vector<std::vector<GlobalSquareClass>> liftable_characters(const std::vector<std::vector<GlobalSquareClass>>& psi,
                                                               const std::vector<GlobalSquareClass>& cands) {
  const std::size_t ra = psi.size(), rb = ra ? psi[0].size() : 0, nc = cands.size(), ncol = rb * nc;
  std::set<long long> rowplaces = {0, 2};
  for (const auto& c : cands) rowplaces.insert(c.primes.begin(), c.primes.end());
  for (const auto& row : psi)
    for (const auto& c : row) rowplaces.insert(c.primes.begin(), c.primes.end());
  std::vector<std::vector<int>> rows;
  for (long long w : rowplaces)
    for (std::size_t i = 0; i < ra; ++i) {
      std::vector<int> r(ncol, 0);
      for (std::size_t j = 0; j < rb; ++j)
        for (std::size_t c = 0; c < nc; ++c) r[j * nc + c] = hilbert_symbol(psi[i][j], cands[c], w) == -1;
      rows.push_back(r);
    }
  std::vector<std::vector<GlobalSquareClass>> out;
  for (const auto& lam : f2_kernel(rows, ncol)) {
    std::vector<GlobalSquareClass> beta(rb);
    for (std::size_t j = 0; j < rb; ++j)
      for (std::size_t c = 0; c < nc; ++c)
        if (lam[j * nc + c]) beta[j] = beta[j] * cands[c];
    out.push_back(beta);
  }
  return out;
}

IntVec localize_global_class(const ChGroup& ch, const GlobalClassSpec& spec) {
  const GammaModule& h = *ch.module;
  IntVec x = ch.product->zero();
  if (!spec.inflation.empty()) {
    auto infl = cohomology(ch.module, 1);
    Cochain z = infl->lift(spec.inflation);
    IntVec y;
    for (std::size_t k = 0; k < ch.places.size(); ++k) {
      IntVec part;
      if (ch.level == ChLevel::Split) {
        auto view = SubgroupView::make(h.group(), ch.places[k].decomposition);
        part = ch.split_local[k]->project(restrict_cochain(z, view, ch.split_local[k]->module()));
      } else {
        part = ch.provider_local[k]->from_gamma_cocycle(z);
      }
      y.insert(y.end(), part.begin(), part.end());
    }
    x = ch.product->add(x, y);
  }
  if (spec.kummer.empty() && spec.beta.empty()) return x;
  if (ch.level != ChLevel::Provider) throw PreconditionError("global classes beyond inflation need the provider level");
  const ProviderFiltration& f = *ch.filtration;
  for (const auto& [c, a] : spec.kummer)
    for (std::size_t g = 0; g < h.group()->order(); ++g)
      if (!h.underlying()->equal(h.act(g, a), a)) throw PreconditionError("Kummer term coefficient is not Gamma-fixed");
  if (!spec.kummer.empty()) {
    IntVec y;
    for (const auto& l : ch.provider_local) {
      IntVec part = localize_kummer(*l, spec.kummer);
      y.insert(y.end(), part.begin(), part.end());
    }
    x = ch.product->add(x, y);
  }
  if (!spec.beta.empty()) {
    const std::size_t rb = f.quotient->group->invariant_factors().size();
    if (spec.beta.size() != rb)
      throw PreconditionError("expected " + std::to_string(rb) + " characters for the quotient by the fixed part");
    std::vector<GlobalSquareClass> all = spec.beta;
    for (const auto& row : f.psi) all.insert(all.end(), row.begin(), row.end());
    for (long long w : bad_places(all))
      for (std::size_t i = 0; i < f.psi.size(); ++i) {
        int prod = 1;
        for (std::size_t j = 0; j < rb; ++j) prod *= hilbert_symbol(f.psi[i][j], spec.beta[j], w);
        if (prod != 1)
          throw PreconditionError("characters have a nonzero connecting class (at " + place_label(w) + ")");
      }
    x = ch.product->add(x, lift_beta(ch, spec.beta));
  }
  return ch.product->normalize(x);
}

ChGroup ch1(const DatumPtr& d, const ModulePtr& m, const std::vector<std::string>& s, ChLevel level, long long bound) {
  if (m->group()->order() != d->group()->order()) throw PreconditionError("ch1: module group differs from the datum group");
  ChGroup ch;
  ch.level = level;
  ch.module = m;
  ch.places = resolve_places(*d, s);
  if (level == ChLevel::Split)
    ch1_split(ch, *d);
  else
    ch1_provider(ch, d, bound);
  return ch;
}

ConnectingCertificate sha_connecting_iso(const Resolution& res, const GaloisDatum& d, const std::vector<std::string>& s) {
  ConnectingCertificate cert;
  const ModulePtr& m = res.pi.target();
  ShaGroup s1 = sha(d, m, s, 1);
  ShaGroup s2 = sha(d, res.k, s, 2);
  cert.sha1_factors = s1.group->invariant_factors();
  cert.sha2_factors = s2.group->invariant_factors();
  ConnectingMap delta(ShortExactSequence{res.incl, res.pi});
  AbHom dh = delta.as_hom(*s1.ambient, *s2.ambient);
  HomSolver into(*s2.incl);
  IntMatrix mat(s2.group->ngens(), s1.group->ngens());
  cert.lands_in_sha2 = true;
  for (std::size_t i = 0; i < s1.group->ngens(); ++i) {
    IntVec x = s1.to_ambient(s1.group->generator(i));
    auto pre = into.preimage(dh.apply(x));
    if (!pre) {
      cert.lands_in_sha2 = false;
      cert.counterexample = "image of Sha^1 generator " + std::to_string(i) + " is not locally trivial";
      break;
    }
    mat.set_col(i, *pre);
  }
  if (cert.lands_in_sha2) {
    AbHom f(s1.group, s2.group, mat);
    cert.injective = f.is_injective();
    cert.surjective = f.is_surjective();
    if (!cert.injective) cert.counterexample = "connecting map has a kernel on Sha^1";
    else if (!cert.surjective) cert.counterexample = "connecting map misses part of Sha^2";
  }
  cert.sha2_permutation_zero = sha(d, res.p, s, 2).group->is_trivial();
  if (!cert.sha2_permutation_zero && cert.counterexample.empty()) cert.counterexample = "Sha^2 of the permutation module is nonzero";
  return cert;
}

}  // namespace wao
