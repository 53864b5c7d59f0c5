#include <random>

#include "doctest.h"
#include "wao/obstr.hpp"

using namespace wao;

namespace {

ModulePtr mu2(const FinGroupPtr& g, std::size_t r = 1) {
  return GammaModule::trivial(g, AbelianGroup::from_factors(IntVec(r, 2)), r == 1 ? "mu2" : "mu2^2");
}

GlobalSquareClass random_class(std::mt19937_64& rng, long long bound) {
  static const auto primes = primes_up_to(2000);
  GlobalSquareClass c = GlobalSquareClass::of(rng() % 2 ? -1 : 1);
  std::size_t k = rng() % 3;
  for (std::size_t i = 0; i < k; ++i) {
    long long p = primes[rng() % primes.size()];
    if (p <= bound) c = c * GlobalSquareClass::of(p);
  }
  return c;
}

// a random class of H^1(Q, H) localized over S
IntVec random_global(const DualitySetup& ds, std::mt19937_64& rng) {
  const ChGroup& ch = ds.ch;
  GlobalClassSpec spec;
  auto infl = cohomology(ds.dual, 1);
  spec.inflation = infl->group()->zero();
  for (auto& x : spec.inflation) x = rng() % 4;
  const auto& f = *ch.filtration;
  for (const auto& a : f.fixed_gens) spec.kummer.push_back({random_class(rng, 2000), a});
  if (!f.psi.empty() && !f.psi[0].empty()) {
    std::vector<GlobalSquareClass> cands = {GlobalSquareClass::of(-1)};
    for (int i = 0; i < 6; ++i) cands.push_back(random_class(rng, 2000));
    for (const auto& row : f.psi) cands.insert(cands.end(), row.begin(), row.end());
    auto basis = liftable_characters(f.psi, cands);
    spec.beta.assign(f.psi[0].size(), GlobalSquareClass{});
    for (const auto& b : basis)
      if (rng() % 2)
        for (std::size_t j = 0; j < b.size(); ++j) spec.beta[j] = spec.beta[j] * b[j];
  }
  return localize_global_class(ch, spec);
}

}  // namespace

TEST_CASE("mu2 scenarios are perfect with trivial groups") {
  for (auto d : {GaloisDatum::cyclotomic(5), GaloisDatum::cyclotomic(8), GaloisDatum::multiquadratic(-1, 3)}) {
    std::vector<std::string> all;
    for (const auto& p : d->special_places())
      if (p.provider != "dyadic") all.push_back(p.label);
    for (auto s : std::vector<std::vector<std::string>>{{}, all, {"3", "7"}}) {
      if (d->is_ramified(3) && s.size() == 2 && s[0] == "3") continue;
      auto ds = make_duality(d, mu2(d->group()), s);
      auto cert = pairing_matrix_perfect(ds);
      CHECK(cert.perfect());
      CHECK(cert.sha_factors.empty());
      CHECK(cert.ch_factors.empty());
    }
  }
}

TEST_CASE("mu2 tuple outside the searched span") {
  auto d = GaloisDatum::cyclotomic(5);
  const auto m = mu2(d->group());
  // split level: Gamma_3 = Gamma_5 = Gamma, so the diagonal image leaves Z/2
  CHECK(ch1(d, m, {"3", "5"}, ChLevel::Split).group()->invariant_factors() == IntVec{2});

  // with candidates {-1, 2} only, the class of 3 at 3 is not reached
  auto small = make_duality(d, m, {"3", "5"}, ChLevel::Provider, 2);
  CHECK(!small.ch.diagnostics.kummer_complete);
  LocalClassTuple t{{"3", "5"}, {small.ch.provider_local[0]->from_square_classes({square_class_of(3, 3)}),
                                 small.ch.provider_local[1]->from_square_classes({square_class_of(1, 5)})}};
  CHECK(!small.ch.group()->is_zero(c_S_class(t, small.ch)));

  // with the default bound the search spans the product and every tuple is global
  auto full = make_duality(d, m, {"3", "5"});
  CHECK(full.ch.diagnostics.kummer_complete);
  CHECK(full.ch.group()->is_trivial());
  CHECK(wa_verdict(full, t).verdict() == "approximable");
  LocalClassTuple bad = t;
  bad.level = ChLevel::Split;
  CHECK_THROWS_AS(c_S_class(bad, full.ch), PreconditionError);
}

TEST_CASE("biquadratic scenario: perfect pairing and an obstructed tuple") {
  auto d = GaloisDatum::multiquadratic(5, 13);
  auto ds = make_duality(d, biquadratic_module(d->group()), {"5", "13"});
  auto cert = pairing_matrix_perfect(ds);
  CHECK(cert.perfect());
  REQUIRE(cert.matrix.size() == 1);
  REQUIRE(cert.matrix[0].size() == 1);
  CHECK(cert.matrix[0][0] == mpq_class(1, 2));

  auto gens = ds.ch.generator_tuples();
  auto t = tuple_from_product(ds.ch, gens[0]);
  auto rep = wa_verdict(ds, t);
  CHECK(rep.verdict() == "obstructed");
  CHECK(rep.witness == std::size_t{0});
  CHECK(rep.witness_value == mpq_class(1, 2));
  CHECK(manin_pairing(ds, sha_rel_basis(ds)[0], t) == manin_pairing_via_class(ds, sha_rel_basis(ds)[0], t));

  auto zero = tuple_from_product(ds.ch, ds.ch.product->zero());
  CHECK(wa_verdict(ds, zero).verdict() == "approximable");
  CHECK(manin_pairing(ds, ds.sha_s.ambient->group()->zero(), t) == 0);
}

TEST_CASE("globally localized tuples are unobstructed") {
  std::mt19937_64 rng(7);
  struct Case {
    DatumPtr d;
    bool biquadratic;
    std::vector<std::string> s;
  };
  std::vector<Case> cases = {{GaloisDatum::multiquadratic(5, 13), true, {"5", "13"}},
                             {GaloisDatum::multiquadratic(13, 17), true, {"13"}},
                             {GaloisDatum::multiquadratic(13, 17), true, {"13", "17", "3"}},
                             {GaloisDatum::cyclotomic(5), false, {"5", "inf"}},
                             {GaloisDatum::multiquadratic(-1, 3), false, {"3", "inf"}}};
  for (const auto& c : cases) {
    ModulePtr m = c.biquadratic ? biquadratic_module(c.d->group()) : mu2(c.d->group(), 2);
    auto ds = make_duality(c.d, m, c.s);
    CHECK(pairing_matrix_perfect(ds).perfect());
    auto basis = sha_rel_basis(ds);
    for (int trial = 0; trial < 30; ++trial) {
      auto t = tuple_from_product(ds.ch, random_global(ds, rng));
      CHECK(ds.ch.group()->is_zero(c_S_class(t, ds.ch)));
      for (std::size_t i = 0; i < ds.sha_s.group->ngens(); ++i)
        CHECK(manin_pairing(ds, ds.sha_s.to_ambient(ds.sha_s.group->generator(i)), t) == 0);
    }
    // bi-additivity and the two evaluation routes
    for (int trial = 0; trial < 10 && !basis.empty(); ++trial) {
      IntVec x = ds.ch.product->zero(), y = ds.ch.product->zero();
      for (auto& e : x) e = rng() % 2;
      for (auto& e : y) e = rng() % 2;
      auto tx = tuple_from_product(ds.ch, x), ty = tuple_from_product(ds.ch, y);
      auto txy = tuple_from_product(ds.ch, ds.ch.product->add(x, y));
      for (const auto& a : basis) {
        CHECK(manin_pairing(ds, a, txy) == reduce_mod_one(manin_pairing(ds, a, tx) + manin_pairing(ds, a, ty)));
        CHECK(manin_pairing(ds, a, tx) == manin_pairing_via_class(ds, a, tx));
        for (std::size_t i = 0; i < ds.sha_empty.group->ngens(); ++i) {
          IntVec a2 = ds.sha_s.ambient->group()->add(a, ds.sha_empty.to_ambient(ds.sha_empty.group->generator(i)));
          CHECK(manin_pairing(ds, a2, tx) == manin_pairing(ds, a, tx));
        }
      }
    }
  }
}

TEST_CASE("relative Sha vanishes when S holds only cyclic decomposition groups") {
  auto d = GaloisDatum::multiquadratic(13, 17);
  auto ds = make_duality(d, biquadratic_module(d->group()), {"13"});
  CHECK(ds.sha_empty.group->order() == 2);
  CHECK(ds.rel.group->is_trivial());
  CHECK(ds.ch.group()->is_trivial());
}

TEST_CASE("local functoriality of the pairing") {
  // f: M = mu2^2 -> M' = mu2 (first coordinate); f^D: H' -> H
  auto d = GaloisDatum::multiquadratic(5, 13);
  const auto& g = d->group();
  auto m = mu2(g, 2), m1 = mu2(g, 1);
  auto tm = twisted_dual(m, CyclotomicCharacter::trivial(g, 2));
  auto tm1 = twisted_dual(m1, CyclotomicCharacter::trivial(g, 2));
  AbHom f(m->underlying(), m1->underlying(), IntMatrix::from_rows({{1, 0}}));
  AbHom fd(tm1.dual->underlying(), tm.dual->underlying(), IntMatrix::from_rows({{1}, {0}}));
  for (const auto& label : {"5", "13", "inf", "3"}) {
    Place p = place_data(*d, label);
    for (bool cochain : {false, true}) {
      LocalH1 lm(d, p, m, cochain), lm1(d, p, m1, cochain), lh(d, p, tm.dual, cochain), lh1(d, p, tm1.dual, cochain);
      for (const auto& a : lm.group()->elements())
        for (const auto& xi : lh1.group()->elements())
          CHECK(local_invariant_pairing(lm1, local_push(lm, a, lm1, f), lh1, xi, tm1.eval) ==
                local_invariant_pairing(lm, a, lh, local_push(lh1, xi, lh, fd), tm.eval));
    }
  }
}
