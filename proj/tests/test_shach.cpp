#include "doctest.h"
#include "support.hpp"
#include "wao/shach.hpp"

using namespace wao;

namespace {

ModulePtr mu2(const FinGroupPtr& g, std::size_t r = 1) {
  return GammaModule::trivial(g, AbelianGroup::from_factors(IntVec(r, 2)), r == 1 ? "mu2" : "mu2^2");
}

ModulePtr dual_of(const ModulePtr& m) {
  return twisted_dual(m, CyclotomicCharacter::trivial(m->group(), 2)).dual;
}

bool contained(const ShaGroup& small, const ShaGroup& big) {
  HomSolver s(*big.incl);
  for (std::size_t i = 0; i < small.group->ngens(); ++i)
    if (!s.preimage(small.to_ambient(small.group->generator(i)))) return false;
  return true;
}

std::vector<DatumPtr> data() {
  return {GaloisDatum::cyclotomic(5),          GaloisDatum::cyclotomic(8),          GaloisDatum::cyclotomic(12),
          GaloisDatum::multiquadratic(13, 17), GaloisDatum::multiquadratic(-1, 3), GaloisDatum::multiquadratic(5, 13)};
}

std::vector<std::vector<std::string>> s_sets(const GaloisDatum& d) {
  std::vector<std::vector<std::string>> out = {{}};
  std::vector<std::string> all;
  for (const auto& p : d.special_places()) {
    out.push_back({p.label});
    all.push_back(p.label);
  }
  out.push_back(all);
  return out;
}

}  // namespace

TEST_CASE("sha examples") {
  auto c5 = GaloisDatum::cyclotomic(5);
  CHECK(sha(*c5, mu2(c5->group()), {}, 1).group->is_trivial());
  auto c8 = GaloisDatum::cyclotomic(8);
  CHECK(sha(*c8, mu2(c8->group()), {}, 1).group->is_trivial());
  CHECK(sha(*c8, mu2(c8->group()), {"2", "inf"}, 1).group->is_trivial());

  auto d = GaloisDatum::multiquadratic(13, 17);
  auto bq = biquadratic_module(d->group());
  auto s = sha(*d, bq, {}, 1);
  CHECK(s.group->invariant_factors() == IntVec{2});
  CHECK(verify_sha(s));
}

TEST_CASE("sha orders against cocycle enumeration") {
  for (const auto& d : data()) {
    std::vector<ModulePtr> mods = {mu2(d->group()), mu2(d->group(), 2)};
    if (d->type() == DatumType::Multiquadratic) mods.push_back(biquadratic_module(d->group()));
    for (const auto& m : mods)
      for (auto s : s_sets(*d)) {
        std::vector<std::vector<std::size_t>> conds;
        for (const auto& c : sha_conditions(*d, s)) conds.push_back(c.subgroup);
        CHECK(sha(*d, m, s, 1).group->order() == testing::brute_force_sha1_order(m, conds));
      }
  }
}

TEST_CASE("sha refusals") {
  auto d = GaloisDatum::cyclotomic(8);
  auto z = GammaModule::trivial(d->group(), AbelianGroup::free(1), "Z");
  CHECK_THROWS_AS(sha(*d, z, {}, 1), Refusal);
  CHECK_THROWS_AS(sha(*d, mu2(d->group()), {}, 2), Refusal);
  CHECK_THROWS_AS(sha(*d, mu2(d->group()), {"4"}, 1), PreconditionError);
  CHECK(sha(*d, z, {}, 2).group->is_trivial());
}

TEST_CASE("sha monotonicity and S-dependence") {
  for (const auto& d : data()) {
    std::vector<ModulePtr> mods = {mu2(d->group()), mu2(d->group(), 2)};
    if (d->group()->order() == 4 && d->type() == DatumType::Multiquadratic) mods.push_back(biquadratic_module(d->group()));
    for (const auto& m : mods) {
      auto empty = sha(*d, m, {}, 1);
      CHECK(verify_sha(empty));
      for (auto s : s_sets(*d)) {
        auto sh = sha(*d, m, s, 1);
        CHECK(verify_sha(sh));
        CHECK(contained(empty, sh));
        // unramified places do not change Sha
        for (long long p : {3, 7, 11, 19, 23, 29, 31}) {
          if (d->is_ramified(p)) continue;
          auto s2 = s;
          s2.push_back(std::to_string(p));
          auto sh2 = sha(*d, m, s2, 1);
          CHECK(contained(sh, sh2));
          CHECK(contained(sh2, sh));
          break;
        }
        auto q = sha_rel_quotient(sh, empty);
        CHECK(q.group->order() * empty.group->order() == sh.group->order());
        if (s.empty()) CHECK(q.group->is_trivial());
      }
    }
  }
}

TEST_CASE("relative quotient on the (5,13) biquadratic scenario") {
  auto d = GaloisDatum::multiquadratic(5, 13);
  auto bq = biquadratic_module(d->group());
  auto se = sha(*d, bq, {}, 1);
  auto ss = sha(*d, bq, {"5", "13"}, 1);
  CHECK(se.group->is_trivial());
  CHECK(ss.group->invariant_factors() == IntVec{2});
  auto q = sha_rel_quotient(ss, se);
  CHECK(q.group->order() == 2);
  REQUIRE(q.section.size() == 1);
  CHECK(!ss.group->is_zero(q.section[0]));
  CHECK_THROWS_AS(sha_rel_quotient(se, ss), MathError);
}

TEST_CASE("split-level Ch") {
  auto c8 = GaloisDatum::cyclotomic(8);
  auto m = mu2(c8->group());
  CHECK(ch1(c8, m, {}, ChLevel::Split).group()->is_trivial());
  CHECK(ch1(c8, m, {"3"}, ChLevel::Split).group()->is_trivial());
  for (const auto& d : data())
    for (auto s : s_sets(*d)) {
      for (const auto& mod : {mu2(d->group()), mu2(d->group(), 2)}) {
        auto ch = ch1(d, mod, s, ChLevel::Split);
        // the composite H^1 -> product -> Ch is zero
        for (const auto& x : ch.image) CHECK(ch.group()->is_zero(ch.project(x)));
        CHECK(ch.quotient->proj.is_surjective());
      }
    }
}

TEST_CASE("provider-level Ch") {
  auto q = GaloisDatum::cyclotomic(5);
  auto ch = ch1(q, mu2(q->group()), {"5"}, ChLevel::Provider);
  CHECK(ch.diagnostics.kummer_complete);
  CHECK(ch.group()->is_trivial());
  CHECK(ch1(q, mu2(q->group()), {}, ChLevel::Provider).group()->is_trivial());
  for (const auto& d : data())
    for (auto s : s_sets(*d)) {
      auto c = ch1(d, mu2(d->group(), 2), s, ChLevel::Provider);
      CHECK(c.group()->is_trivial());
    }

  auto d = GaloisDatum::multiquadratic(5, 13);
  auto h = dual_of(biquadratic_module(d->group()));
  auto bch = ch1(d, h, {"5", "13"}, ChLevel::Provider);
  CHECK(bch.diagnostics.kummer_complete);
  CHECK(bch.group()->invariant_factors() == IntVec{2});
  for (const auto& x : bch.image) CHECK(bch.group()->is_zero(bch.project(x)));
  CHECK(ch1(d, h, {}, ChLevel::Provider).group()->is_trivial());
}

TEST_CASE("connecting isomorphism") {
  auto d = GaloisDatum::multiquadratic(5, 13);
  auto bq = biquadratic_module(d->group());
  for (auto s : std::vector<std::vector<std::string>>{{}, {"5", "13"}}) {
    auto cert = sha_connecting_iso(quasi_trivial_resolution(bq), *d, s);
    CHECK(cert.ok());
    CHECK(cert.sha1_factors == cert.sha2_factors);
  }
  auto c8 = GaloisDatum::cyclotomic(8);
  auto cert = sha_connecting_iso(quasi_trivial_resolution(mu2(c8->group())), *c8, {});
  CHECK(cert.ok());
  CHECK(cert.sha1_factors.empty());
}
