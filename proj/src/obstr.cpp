#include "wao/obstr.hpp"

namespace wao {

DualitySetup make_duality(const DatumPtr& d, const ModulePtr& m, const std::vector<std::string>& s, ChLevel level,
                          long long bound) {
  auto td = twisted_dual(m, CyclotomicCharacter::trivial(m->group(), 2));
  DualitySetup ds{d, m, td.dual, td.eval, s, sha(*d, m, s, 1), sha(*d, m, {}, 1), {}, ch1(d, td.dual, s, level, bound), {}};
  ds.rel = sha_rel_quotient(ds.sha_s, ds.sha_empty);
  if (level == ChLevel::Provider)
    for (const auto& p : ds.ch.places) {
      bool cochain = ds.ch.provider_local[ds.module_local.size()]->model() == LocalModel::Cochain;
      ds.module_local.push_back(std::make_shared<LocalH1>(d, p, m, cochain));
    }
  return ds;
}

LocalClassTuple tuple_from_product(const ChGroup& ch, const IntVec& x) {
  LocalClassTuple t;
  t.level = ch.level;
  for (const auto& p : ch.places) t.places.push_back(p.label);
  t.classes = ch.split(ch.product->normalize(x));
  return t;
}

IntVec tuple_to_product(const ChGroup& ch, const LocalClassTuple& t) {
  if (t.level != ch.level) throw PreconditionError("tuple level " + to_string(t.level) + " does not match Ch level " + to_string(ch.level));
  if (t.places.size() != ch.places.size()) throw PreconditionError("tuple places do not match S");
  for (std::size_t i = 0; i < t.places.size(); ++i)
    if (t.places[i] != ch.places[i].label)
      throw PreconditionError("tuple place '" + t.places[i] + "' does not match S entry '" + ch.places[i].label + "'");
  return ch.assemble(t.classes);
}

IntVec c_S_class(const LocalClassTuple& t, const ChGroup& ch) { return ch.group()->normalize(ch.project(tuple_to_product(ch, t))); }

namespace {

mpq_class pair_product(const DualitySetup& ds, const IntVec& a, const IntVec& x) {
  if (ds.ch.level != ChLevel::Provider) throw PreconditionError("the Manin pairing needs provider-level local groups");
  Cochain z = ds.sha_s.ambient->lift(a);
  auto parts = ds.ch.split(x);
  mpq_class acc = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const LocalH1& ml = *ds.module_local[k];
    acc += local_invariant_pairing(ml, ml.from_gamma_cocycle(z), *ds.ch.provider_local[k], parts[k], ds.eval);
  }
  return reduce_mod_one(acc);
}

bool in_sha_s(const DualitySetup& ds, const IntVec& a) { return HomSolver(*ds.sha_s.incl).preimage(a).has_value(); }

}  // namespace

mpq_class manin_pairing(const DualitySetup& ds, const IntVec& a, const LocalClassTuple& t) {
  if (!in_sha_s(ds, a)) throw PreconditionError("manin_pairing: class is not in Sha^1_S");
  return pair_product(ds, a, tuple_to_product(ds.ch, t));
}

mpq_class manin_pairing_via_class(const DualitySetup& ds, const IntVec& a, const LocalClassTuple& t) {
  IntVec c = c_S_class(t, ds.ch);
  IntVec s = ds.ch.group()->smith_coords(c);
  auto gens = ds.ch.generator_tuples();
  IntVec x = ds.ch.product->zero();
  for (std::size_t j = 0; j < gens.size(); ++j) x = ds.ch.product->add(x, ds.ch.product->scale(s[j], gens[j]));
  if (!in_sha_s(ds, a)) throw PreconditionError("manin_pairing: class is not in Sha^1_S");
  return pair_product(ds, a, x);
}

std::vector<IntVec> sha_rel_basis(const DualitySetup& ds) {
  std::vector<IntVec> out;
  for (const auto& r : ds.rel.section) out.push_back(ds.sha_s.to_ambient(r));
  return out;
}

namespace {

// number of x in the group with sum_i x_i m[i][j] = 0 in Q/Z for all j
Int kernel_order(const GroupPtr& g, const std::vector<std::vector<mpq_class>>& m, bool rows) {
  std::size_t count = 0;
  for (const auto& x : g->elements()) {
    IntVec s = g->smith_coords(x);
    std::size_t other = rows ? (m.empty() ? 0 : m[0].size()) : m.size();
    bool zero = true;
    for (std::size_t j = 0; j < other && zero; ++j) {
      mpq_class acc = 0;
      for (std::size_t i = 0; i < s.size(); ++i) acc += mpq_class(s[i]) * (rows ? m[i][j] : m[j][i]);
      zero = reduce_mod_one(acc) == 0;
    }
    if (zero) ++count;
  }
  return Int(static_cast<unsigned long>(count));
}

}  // namespace

PerfectnessCertificate pairing_matrix_perfect(const DualitySetup& ds) {
  PerfectnessCertificate c;
  c.sha_factors = ds.rel.group->invariant_factors();
  c.ch_factors = ds.ch.group()->invariant_factors();
  auto rows = sha_rel_basis(ds);
  auto cols = ds.ch.generator_tuples();
  for (const auto& a : rows) {
    std::vector<mpq_class> r;
    for (const auto& x : cols) r.push_back(pair_product(ds, a, x));
    c.matrix.push_back(r);
  }
  c.left_kernel_order = kernel_order(ds.rel.group, c.matrix, true);
  c.right_kernel_order = kernel_order(ds.ch.group(), c.matrix, false);
  c.vanishes_on_global_image = true;
  for (std::size_t i = 0; i < ds.sha_s.group->ngens(); ++i) {
    IntVec a = ds.sha_s.to_ambient(ds.sha_s.group->generator(i));
    for (const auto& x : ds.ch.image)
      if (pair_product(ds, a, x) != 0) c.vanishes_on_global_image = false;
  }
  c.vanishes_on_sha_empty = true;
  for (std::size_t i = 0; i < ds.sha_empty.group->ngens(); ++i) {
    IntVec a = ds.sha_empty.to_ambient(ds.sha_empty.group->generator(i));
    for (const auto& x : cols)
      if (pair_product(ds, a, x) != 0) c.vanishes_on_sha_empty = false;
  }
  return c;
}

ObstructionReport wa_verdict(const DualitySetup& ds, const LocalClassTuple& t) {
  ObstructionReport r;
  r.ch_class = c_S_class(t, ds.ch);
  for (const auto& a : sha_rel_basis(ds)) {
    mpq_class v = reduce_mod_one(-manin_pairing(ds, a, t));
    r.pairing_values.push_back(v);
    if (v != 0 && !r.obstructed) {
      r.obstructed = true;
      r.witness = r.pairing_values.size() - 1;
      r.witness_value = v;
    }
  }
  return r;
}

IntVec local_push(const LocalH1& src, const IntVec& x, const LocalH1& dst, const AbHom& f) {
  if (src.place().label != dst.place().label || src.model() != dst.model())
    throw PreconditionError("local_push: classes live at different places or in different models");
  if (src.model() == LocalModel::Cochain) {
    std::vector<IntVec> vals;
    for (const auto& v : src.generator_values(x)) vals.push_back(f.apply(v));
    return dst.from_generator_values(vals);
  }
  auto cls = src.to_square_classes(x);
  const GroupPtr& su = src.module()->underlying();
  const GroupPtr& tu = dst.module()->underlying();
  const long long v = dst.place().kind == PlaceKind::Archimedean ? 0 : dst.prime();
  const std::size_t dim = square_class_basis(v).size();
  std::vector<SquareClass> out(dst.module()->smith_rank(), SquareClass{v, std::vector<int>(dim, 0)});
  for (std::size_t k = 0; k < cls.size(); ++k) {
    IntVec s = tu->smith_coords(f.apply(su->from_smith().col(k)));
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s[j] % 2 != 0)
        for (std::size_t t = 0; t < dim; ++t) out[j].bits[t] ^= cls[k].bits[t];
  }
  return dst.from_square_classes(out);
}

}  // namespace wao
