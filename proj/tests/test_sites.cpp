#include <algorithm>

#include "doctest.h"
#include "wao/locarith.hpp"
#include "wao/sites.hpp"

using namespace wao;

namespace {

std::vector<DatumPtr> bundled_data() {
  return {GaloisDatum::cyclotomic(5),          GaloisDatum::cyclotomic(8),           GaloisDatum::cyclotomic(12),
          GaloisDatum::cyclotomic(24),         GaloisDatum::multiquadratic(13, 17),  GaloisDatum::multiquadratic(-1, 3),
          GaloisDatum::multiquadratic(2, 5),   GaloisDatum::multiquadratic(5, 13)};
}

std::vector<std::size_t> labels_to_elems(const FiniteGroup& g, const std::vector<std::string>& labels) {
  std::vector<std::size_t> out;
  for (const auto& l : labels) out.push_back(*g.find_label(l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("cyclotomic data") {
  auto d12 = GaloisDatum::cyclotomic(12);
  CHECK(d12->find_special("inf")->decomposition == labels_to_elems(*d12->group(), {"1", "11"}));
  auto d8 = GaloisDatum::cyclotomic(8);
  CHECK(d8->find_special("2")->decomposition.size() == 4);
  auto d5 = GaloisDatum::cyclotomic(5);
  auto f2 = d5->frobenius(2);
  REQUIRE(f2);
  CHECK(d5->group()->label(*f2) == "2");
  CHECK(d5->group()->element_order(*f2) == 4);
  CHECK(place_data(*d5, "2").decomposition.size() == 4);
  CHECK_THROWS_AS(GaloisDatum::cyclotomic(2), PreconditionError);

  // |Gamma_p| = e f with e = phi(p^k), f = order of p mod m / p^k
  for (long long m : {5, 8, 12, 24, 15, 20, 21, 40}) {
    auto d = GaloisDatum::cyclotomic(m);
    for (const auto& pl : d->special_places()) {
      if (pl.kind != PlaceKind::Ramified) continue;
      long long p = pl.prime, pk = 1, rest = m;
      while (rest % p == 0) {
        rest /= p;
        pk *= p;
      }
      long long e = pk / p * (p - 1);
      long long f = multiplicative_order(p, rest);
      CAPTURE(m);
      CAPTURE(p);
      CHECK(static_cast<long long>(pl.decomposition.size()) == e * f);
    }
  }
}

TEST_CASE("multiquadratic data") {
  auto d = GaloisDatum::multiquadratic(13, 17);
  const auto& g = *d->group();
  CHECK(d->find_special("inf")->decomposition == std::vector<std::size_t>{0});
  // (13|3) = 1, (17|3) = -1: Frobenius fixes sqrt 13
  auto p3 = place_data(*d, "3");
  CHECK(p3.kind == PlaceKind::Unramified);
  CHECK(p3.decomposition == labels_to_elems(g, {"(0,0)", "(0,1)"}));
  // 13 = 5 mod 8 inert, 17 = 1 mod 8 split: Gamma_2 fixes sqrt 17
  CHECK(d->is_ramified(13));
  CHECK_FALSE(d->is_ramified(2));
  auto p2 = place_data(*d, "2");
  CHECK(p2.decomposition == labels_to_elems(g, {"(0,0)", "(1,0)"}));
  CHECK_THROWS_AS(GaloisDatum::multiquadratic(3, 12), PreconditionError);
  CHECK_THROWS_AS(GaloisDatum::multiquadratic(2, 2), PreconditionError);

  auto e = GaloisDatum::multiquadratic(5, 13);
  CHECK(e->find_special("5")->decomposition.size() == 4);
  CHECK(e->find_special("13")->decomposition.size() == 4);

  // Gamma_p trivial iff p splits in all three quadratic subfields
  for (const auto& dd : bundled_data()) {
    if (dd->type() != DatumType::Multiquadratic) continue;
    long long a = dd->a(), b = dd->b(), ab = squarefree_part(a * b);
    for (long long p : primes_up_to(200)) {
      if (dd->is_ramified(p)) continue;
      auto pl = place_data(*dd, std::to_string(p));
      bool split = kronecker(a, p) == 1 && kronecker(b, p) == 1 && kronecker(ab, p) == 1;
      CHECK((pl.decomposition.size() == 1) == split);
    }
  }
}

TEST_CASE("place lookup") {
  auto d8 = GaloisDatum::cyclotomic(8);
  auto p3 = place_data(*d8, "3");
  CHECK(p3.kind == PlaceKind::Unramified);
  CHECK(d8->group()->label(*p3.frobenius) == "3");
  CHECK(place_data(*d8, "2").kind == PlaceKind::Ramified);
  CHECK_THROWS_AS(place_data(*d8, "9"), PreconditionError);
  CHECK_THROWS_AS(place_data(*d8, "x"), PreconditionError);
  CHECK(place_data(*GaloisDatum::multiquadratic(13, 17), "inf").kind == PlaceKind::Archimedean);
}

TEST_CASE("Chebotarev smoke test") {
  auto d8 = GaloisDatum::cyclotomic(8);
  auto r = validate_datum(*d8, 100);
  CHECK(r.ok);
  const auto& g = *d8->group();
  CHECK(r.frobenius_witness.at(*g.find_label("1")) == 17);
  CHECK(r.frobenius_witness.at(*g.find_label("3")) == 3);
  CHECK(r.frobenius_witness.at(*g.find_label("5")) == 5);
  CHECK(r.frobenius_witness.at(*g.find_label("7")) == 7);
  CHECK(validate_datum(*GaloisDatum::multiquadratic(13, 17), 200).ok);
  for (const auto& d : bundled_data()) CHECK(validate_datum(*d, 500).ok);

  auto v4 = FiniteGroup::product({2, 2});
  Place bad{"P", 0, PlaceKind::Ramified, {0, 1, 2}, std::nullopt, "none"};
  auto ad = GaloisDatum::abstract(v4, {bad}, {{3, 1}, {5, 2}, {7, 3}, {11, 0}});
  auto ar = validate_datum(*ad, 20);
  CHECK_FALSE(ar.ok);
  REQUIRE(ar.failures.size() == 1);
  CHECK(ar.failures[0].find("place P") != std::string::npos);
}

TEST_CASE("local reciprocity agrees with decomposition groups") {
  for (const auto& d : bundled_data()) {
    const auto& g = *d->group();
    CAPTURE(d->describe());
    for (const auto& pl : d->special_places()) {
      long long v = pl.kind == PlaceKind::Archimedean ? 0 : pl.prime;
      std::vector<std::size_t> imgs;
      for (long long y : square_class_basis(v)) imgs.push_back(d->rec(v, y));
      if (v != 0) {
        // the full unit group matters when Gamma_v has exponent > 2
        imgs.push_back(d->rec(v, (v == 2 ? 3 : primitive_root(v))));
        if (v == 2) imgs.push_back(d->rec(v, 3));
      }
      CAPTURE(pl.label);
      CHECK(g.generated(imgs) == pl.decomposition);
    }
    for (long long p : primes_up_to(60)) {
      auto f = d->frobenius(p);
      if (!f) continue;
      CHECK(d->rec(p, p) == *f);
      CHECK(d->rec(p, (p == 2 ? 3 : primitive_root(p))) == g.identity());
    }
  }
}

TEST_CASE("quadratic characters and their fields") {
  for (const auto& d : bundled_data()) {
    const auto& g = *d->group();
    CAPTURE(d->describe());
    for (const auto& chi : quadratic_characters(g)) {
      long long dd = d->character_class(chi);
      long long disc = mod(dd, 4) == 1 ? dd : 4 * dd;
      for (long long q : primes_up_to(100)) {
        auto f = d->frobenius(q);
        if (!f || disc % q == 0) continue;
        CHECK((kronecker(disc, q) == -1) == (chi[*f] == 1));
      }
      for (const auto& pl : d->special_places()) {
        long long v = pl.kind == PlaceKind::Archimedean ? 0 : pl.prime;
        for (long long y : square_class_basis(v))
          CHECK((hilbert_symbol(dd, y, v) == -1) == (chi[d->rec(v, y)] == 1));
      }
    }
  }
  CHECK(quadratic_characters(*FiniteGroup::cyclic(4)).size() == 2);
  CHECK(quadratic_characters(*FiniteGroup::product({2, 2, 2})).size() == 8);
  CHECK(quadratic_characters(*FiniteGroup::dihedral(4)).size() == 4);
}

TEST_CASE("tame presentations") {
  for (const auto& d : bundled_data()) {
    const auto& g = *d->group();
    std::vector<Place> places = d->special_places();
    for (long long p : {3, 7, 11, 29})
      if (!d->is_ramified(p) && d->frobenius(p)) places.push_back(place_data(*d, std::to_string(p)));
    for (const auto& pl : places) {
      auto lp = local_presentation(*d, pl);
      if (pl.provider == "dyadic") {
        CHECK_FALSE(lp);
        continue;
      }
      REQUIRE(lp);
      CHECK(g.generated(lp->images) == pl.decomposition);
      std::size_t acc = g.identity();
      for (auto [gen, e] : lp->relator) acc = g.mul(acc, g.pow(lp->images[gen], e));
      CHECK(acc == g.identity());
    }
  }
}
