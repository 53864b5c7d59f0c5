#include "doctest.h"
#include "support.hpp"
#include "wao/gmod.hpp"

using namespace wao;
using namespace wao::testing;

TEST_CASE("group constructors") {
  auto c4 = FiniteGroup::cyclic(4);
  CHECK(c4->order() == 4);
  CHECK(c4->generated({1}).size() == 4);
  auto u8 = FiniteGroup::units_mod(8);
  CHECK(u8->order() == 4);
  CHECK(u8->exponent() == 2);
  CHECK(u8->residues() == std::vector<long>{1, 3, 5, 7});
  auto v4 = FiniteGroup::product({2, 2});
  CHECK(v4->order() == 4);
  CHECK(v4->exponent() == 2);
  CHECK(FiniteGroup::dihedral(3)->order() == 6);
  CHECK_FALSE(FiniteGroup::dihedral(3)->is_abelian());
  CHECK(FiniteGroup::quaternion()->exponent() == 4);
  CHECK(FiniteGroup::units_mod(5)->exponent() == 4);
  // a Latin square that is not associative
  std::vector<std::vector<std::size_t>> bad = {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}};
  CHECK_THROWS_AS(FiniteGroup::explicit_table(bad), PreconditionError);
  std::vector<std::vector<std::size_t>> quasi = {{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1},
                                                 {4, 3, 1, 2, 0}};
  try {
    FiniteGroup::explicit_table(quasi);
    CHECK(false);
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("associative at (") != std::string::npos);
  }
}

TEST_CASE("subgroups and cyclic classes") {
  auto d4 = FiniteGroup::dihedral(4);
  CHECK(d4->is_subgroup(d4->generated({1})));
  CHECK_FALSE(d4->is_subgroup({0, 1}));
  // D4 has cyclic subgroups: 1, <r>, <r^2>, <s>,<r^2 s> (conj), <rs>,<r^3 s> (conj) -> 5 classes
  CHECK(d4->cyclic_subgroup_classes().size() == 5);
  CHECK(FiniteGroup::product({2, 2})->cyclic_subgroup_classes().size() == 4);
  CHECK_THROWS_AS(SubgroupView::make(d4, {0, 1}), PreconditionError);
}

TEST_CASE("permutation modules") {
  auto g = FiniteGroup::product({2, 2});
  auto one = permutation_module(g, std::vector<std::vector<std::size_t>>(4, std::vector<std::size_t>{0}));
  CHECK(one->underlying()->invariant_factors() == IntVec{0});
  CHECK(one->is_permutation());
  auto reg = regular_module(g);
  CHECK(reg->ngens() == 4);
  auto cos = coset_module(g, g->generated({1}));
  CHECK(cos->ngens() == 2);
  std::vector<std::vector<std::size_t>> bad(4, std::vector<std::size_t>{0, 0});
  CHECK_THROWS_AS(permutation_module(g, bad), PreconditionError);
}

TEST_CASE("module action checks") {
  auto c2 = FiniteGroup::cyclic(2);
  std::vector<IntMatrix> bad = {IntMatrix::identity(1), IntMatrix::from_rows({{2}})};
  CHECK_THROWS_AS(GammaModule::make(c2, AbelianGroup::free(1), bad), PreconditionError);
  std::vector<IntMatrix> ok = {IntMatrix::identity(1), IntMatrix::from_rows({{-1}})};
  CHECK_NOTHROW(GammaModule::make(c2, AbelianGroup::free(1), ok));
}

TEST_CASE("twisted duals") {
  auto c2 = FiniteGroup::cyclic(2);
  auto z2 = GammaModule::trivial(c2, AbelianGroup::cyclic(2));
  auto d = twisted_dual(z2, CyclotomicCharacter::trivial(c2, 2));
  CHECK(d.dual->factors() == IntVec{2});
  CHECK(d.dual->action(1)(0, 0) == 1);

  auto z4 = GammaModule::trivial(c2, AbelianGroup::cyclic(4));
  CyclotomicCharacter chi{4, {1, 3}};
  auto d4 = twisted_dual(z4, chi);
  CHECK(d4.dual->factors() == IntVec{4});
  CHECK(d4.dual->action(1)(0, 0) == 3);
  CHECK_THROWS_AS(twisted_dual(z4, CyclotomicCharacter::trivial(c2, 2)), PreconditionError);

  auto v4 = FiniteGroup::product({2, 2});
  auto bq = biquadratic_module(v4);
  auto chi2 = CyclotomicCharacter::trivial(v4, 2);
  ModuleMap dd = double_dual_map(bq, chi2);
  CHECK(dd.hom().is_injective());
  CHECK(dd.hom().is_surjective());
  // evaluation pairing is nondegenerate on the biquadratic module
  auto td = twisted_dual(bq, chi2);
  for (const auto& x : bq->underlying()->elements()) {
    if (bq->underlying()->is_zero(x)) continue;
    bool some = false;
    for (const auto& f : td.dual->underlying()->elements()) some = some || td.eval.apply(x, f)[0] != 0;
    CHECK(some);
  }
}

TEST_CASE("double duals of small modules") {
  for (const auto& [name, g] : small_groups()) {
    if (g->order() > 6) continue;
    for (const auto& m : small_modules(g)) {
      Int n = m->underlying()->exponent();
      auto dd = double_dual_map(m, CyclotomicCharacter::trivial(g, n));
      CHECK(dd.hom().is_injective());
      CHECK(dd.hom().is_surjective());
    }
  }
}

TEST_CASE("quasi-trivial resolutions") {
  auto triv = FiniteGroup::trivial();
  auto r = quasi_trivial_resolution(GammaModule::trivial(triv, AbelianGroup::free(1)));
  CHECK(r.p->ngens() == 1);
  CHECK(r.k->underlying()->is_trivial());
  auto r5 = quasi_trivial_resolution(GammaModule::trivial(triv, AbelianGroup::cyclic(5)));
  CHECK(r5.k->underlying()->invariant_factors() == IntVec{0});
  CHECK(r5.incl.hom().matrix()(0, 0) == 5);

  auto v4 = FiniteGroup::product({2, 2});
  auto rb = quasi_trivial_resolution(biquadratic_module(v4));
  CHECK(rb.p->ngens() == 16);
  CHECK(rb.k->is_lattice());
  CHECK(rb.k->underlying()->invariant_factors().size() == 16);
  CHECK(rb.pi.hom().is_surjective());
  // [P : K] = |M| = 16
  CHECK(abs(rb.incl.hom().matrix().determinant()) == 16);
}

TEST_CASE("units and picard modules") {
  auto c2 = FiniteGroup::cyclic(2);
  auto zero = GammaModule::trivial(c2, AbelianGroup::free(0));
  auto zn = GammaModule::trivial(c2, AbelianGroup::cyclic(6));
  ModuleMap phi(zero, zn, AbHom(zero->underlying(), zn->underlying(), IntMatrix(1, 0)));
  CHECK(units_module(phi)->underlying()->is_trivial());
  CHECK(picard_module(phi)->underlying()->invariant_factors() == IntVec{6});

  auto z = GammaModule::trivial(c2, AbelianGroup::free(1));
  ModuleMap two(z, z, AbHom(z->underlying(), z->underlying(), IntMatrix::from_rows({{2}})));
  CHECK(units_module(two)->underlying()->is_trivial());
  CHECK(picard_module(two)->underlying()->invariant_factors() == IntVec{2});

  auto v4 = FiniteGroup::product({2, 2});
  auto res = quasi_trivial_resolution(biquadratic_module(v4));
  CHECK(picard_module(res.pi)->underlying()->is_trivial());
  auto u = units_module(res.pi);
  CHECK(u->is_lattice());
  CHECK(u->underlying()->invariant_factors().size() == 16);
}

TEST_CASE("induced modules and dual sequences") {
  auto v4 = FiniteGroup::product({2, 2});
  auto sub = SubgroupView::make(v4, v4->generated({1}));
  auto z2 = GammaModule::trivial(sub.group, AbelianGroup::cyclic(2));
  auto ind = induced_module(v4, sub, *z2);
  CHECK(ind->underlying()->invariant_factors() == IntVec{2, 2});
  auto perm = induced_module(v4, sub, *GammaModule::trivial(sub.group, AbelianGroup::free(1)));
  CHECK(perm->is_permutation());

  // 0 -> Z/2 -> Z/4 -> Z/2 -> 0 with trivial action over C2, dualized mod 4
  auto c2 = FiniteGroup::cyclic(2);
  auto a = GammaModule::trivial(c2, AbelianGroup::cyclic(2));
  auto b = GammaModule::trivial(c2, AbelianGroup::cyclic(4));
  ShortExactSequence ses{ModuleMap(a, b, AbHom(a->underlying(), b->underlying(), IntMatrix::from_rows({{2}}))),
                         ModuleMap(b, a, AbHom(b->underlying(), a->underlying(), IntMatrix::from_rows({{1}})))};
  CHECK_NOTHROW(ses.check());
  auto ds = dual_sequence(ses, CyclotomicCharacter::trivial(c2, 4));
  CHECK(ds.ses.i.source()->factors() == IntVec{2});
  ShortExactSequence broken{ses.i, ModuleMap(b, a, AbHom(b->underlying(), a->underlying(), IntMatrix::from_rows({{0}})))};
  CHECK_THROWS_AS(broken.check(), PreconditionError);
}
