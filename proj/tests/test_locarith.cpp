#include <random>

#include "doctest.h"
#include "wao/locarith.hpp"

using namespace wao;

namespace {

ModulePtr mu2(const FinGroupPtr& g, std::size_t r = 1) {
  return GammaModule::trivial(g, AbelianGroup::from_factors(IntVec(r, 2)), r == 1 ? "mu2" : "mu2^r");
}

}  // namespace

TEST_CASE("square class groups") {
  CHECK(square_class_basis(0) == std::vector<long long>{-1});
  CHECK(square_class_basis(7) == std::vector<long long>{7, 3});
  CHECK(square_class_basis(2) == std::vector<long long>{2, -1, 5});
  CHECK(square_class_basis(5) == std::vector<long long>{5, 2});
  // every class representative lands on its own bits
  for (long long v : {0, 2, 3, 5, 7, 13}) {
    std::size_t dim = square_class_basis(v).size();
    for (unsigned m = 0; m < (1u << dim); ++m) {
      std::vector<int> bits(dim);
      for (std::size_t i = 0; i < dim; ++i) bits[i] = m >> i & 1;
      auto c = square_class_from_bits(v, bits);
      CHECK(square_class_of(c.representative(), v) == c);
    }
  }
}

TEST_CASE("Hilbert symbol examples") {
  for (long long v : {0, 2, 3, 5, 7})
    for (long long b : {-7, -1, 2, 3, 10, 15}) CHECK(hilbert_symbol(1, b, v) == 1);
  CHECK(hilbert_symbol(-1, -1, 0) == -1);
  CHECK(hilbert_symbol(-1, -1, 2) == -1);
  CHECK(hilbert_symbol(2, 5, 5) == -1);
  CHECK(hilbert_oracle(2, 5, 5) == -1);
  CHECK(hilbert_oracle(-1, -1, 2) == -1);
  CHECK(hilbert_oracle(-1, -1, 3) == 1);
  CHECK(hilbert_oracle(-1, -1, 0) == -1);
}

TEST_CASE("Hilbert symbol identities") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long long> dist(-300, 300);
  auto nz = [&] {
    long long x = 0;
    while (x == 0) x = dist(rng);
    return x;
  };
  for (int trial = 0; trial < 300; ++trial) {
    long long a = nz(), b = nz(), c = nz();
    for (long long v : {0, 2, 3, 5, 7, 11, 13}) {
      CHECK(hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v));
      CHECK(hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v));
      CHECK(hilbert_symbol(a, -a, v) == 1);
      if (a != 1) CHECK(hilbert_symbol(a, 1 - a, v) == 1);
    }
  }
}

TEST_CASE("Hilbert formula against the solvability oracle") {
  for (long long p : {3, 5, 7})
    for (long long a = -20; a <= 20; ++a)
      for (long long b = -20; b <= 20; ++b) {
        if (a == 0 || b == 0) continue;
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(p);
        CHECK(hilbert_symbol(a, b, p) == hilbert_oracle(a, b, p));
      }
  std::mt19937 rng(5);
  std::uniform_int_distribution<long long> dist(-1000, 1000);
  for (int i = 0; i < 100; ++i) {
    long long a = dist(rng), b = dist(rng);
    if (a == 0 || b == 0) continue;
    CHECK(hilbert_symbol(a, b, 2) == hilbert_oracle(a, b, 2));
    CHECK(hilbert_symbol(a, b, 0) == hilbert_oracle(a, b, 0));
  }
}

TEST_CASE("reciprocity") {
  auto r = reciprocity_check(-1, -1);
  CHECK(r.symbols.at(0) == -1);
  CHECK(r.symbols.at(2) == -1);
  CHECK(r.ok());
  for (auto [v, s] : reciprocity_check(1, 35).symbols) CHECK(s == 1);
  std::mt19937 rng(17);
  std::uniform_int_distribution<long long> dist(-10000, 10000);
  for (int i = 0; i < 100; ++i) {
    long long a = dist(rng), b = dist(rng);
    if (a == 0 || b == 0) continue;
    CHECK(reciprocity_check(a, b).ok());
  }
}

TEST_CASE("global square classes") {
  auto one = GlobalSquareClass::of(1);
  for (long long v : {0, 2, 3, 5, 7}) {
    auto c = localize_global(one, v);
    CHECK(std::all_of(c.bits.begin(), c.bits.end(), [](int b) { return b == 0; }));
  }
  CHECK(localize_global(GlobalSquareClass::of(5), 5).bits == std::vector<int>{1, 0});
  // -2 = 5 mod 7 is a nonresidue
  CHECK(localize_global(GlobalSquareClass::of(-2), 7).bits == std::vector<int>{0, 1});
  CHECK(GlobalSquareClass::of(-12) == GlobalSquareClass::of(-3));
  CHECK((GlobalSquareClass::of(6) * GlobalSquareClass::of(10)) == GlobalSquareClass::of(15));
  // symbols of global classes obey the product formula
  std::mt19937 rng(3);
  std::uniform_int_distribution<long long> dist(-500, 500);
  for (int i = 0; i < 50; ++i) {
    long long a = dist(rng), b = dist(rng);
    if (!a || !b) continue;
    auto ga = GlobalSquareClass::of(a), gb = GlobalSquareClass::of(b);
    int prod = 1;
    for (long long v : bad_places({ga, gb})) prod *= hilbert_symbol(ga, gb, v);
    CHECK(prod == 1);
  }
}

TEST_CASE("surjectivity search") {
  auto r = surjectivity_search({0}, 10);
  CHECK(r.ok);
  CHECK(r.generators == std::vector<GlobalSquareClass>{GlobalSquareClass::of(-1)});
  auto r5 = surjectivity_search({5}, 10);
  CHECK(r5.ok);
  CHECK(r5.generators == std::vector<GlobalSquareClass>{GlobalSquareClass::of(2), GlobalSquareClass::of(5)});
  auto r35 = surjectivity_search({3, 5}, 50);
  CHECK(r35.ok);
  CHECK(r35.generators.size() <= 4);
  auto fail = surjectivity_search({3, 5, 7, 11}, 3);
  CHECK_FALSE(fail.ok);
}

TEST_CASE("local H1 in the Kummer model") {
  auto d = GaloisDatum::cyclotomic(8);
  auto g = d->group();
  LocalH1 at7(d, place_data(*d, "7"), mu2(g));
  CHECK(at7.model() == LocalModel::Kummer);
  CHECK(at7.group()->order() == 4);
  LocalH1 inf(d, place_data(*d, "inf"), mu2(g, 2));
  CHECK(inf.group()->order() == 4);
  LocalH1 at2(d, place_data(*d, "2"), mu2(g));
  CHECK(at2.group()->order() == 8);
  CHECK_THROWS_AS(LocalH1(d, place_data(*d, "7"), GammaModule::trivial(g, AbelianGroup::cyclic(4))), Refusal);

  // the local pairing is the Hilbert symbol
  auto d5 = GaloisDatum::cyclotomic(5);
  auto m = mu2(d5->group());
  auto td = twisted_dual(m, CyclotomicCharacter::trivial(d5->group(), 2));
  LocalH1 left(d5, place_data(*d5, "5"), m), right(d5, place_data(*d5, "5"), td.dual);
  IntVec two = left.from_square_classes({square_class_of(2, 5)});
  IntVec five = right.from_square_classes({square_class_of(5, 5)});
  CHECK(local_invariant_pairing(left, two, right, five, td.eval) == mpq_class(1, 2));
  CHECK(local_invariant_pairing(left, left.group()->zero(), right, five, td.eval) == 0);
}

TEST_CASE("cochain model reproduces Hilbert symbols") {
  for (const auto& d : {GaloisDatum::multiquadratic(5, 13), GaloisDatum::cyclotomic(12)}) {
    auto g = d->group();
    auto m = mu2(g);
    auto td = twisted_dual(m, CyclotomicCharacter::trivial(g, 2));
    std::vector<Place> places = {place_data(*d, "inf")};
    for (long long p : {3, 5, 7, 11, 13})
      if (d->find_special(std::to_string(p)) || !d->is_ramified(p)) places.push_back(place_data(*d, std::to_string(p)));
    for (const auto& pl : places) {
      if (pl.provider != "tame" && pl.provider != "real") continue;
      LocalH1 left(d, pl, m, true), right(d, pl, td.dual, true);
      REQUIRE(left.model() == LocalModel::Cochain);
      long long v = pl.kind == PlaceKind::Archimedean ? 0 : pl.prime;
      auto basis = square_class_basis(v);
      CHECK(left.group()->order() == Int(1) << basis.size());
      const auto& lp = *left.presentation();
      // Kummer character of c on a generator with Artin symbol rec(y) is (c, y)_v
      auto cocycle = [&](long long c) {
        std::vector<IntVec> vals;
        for (long long y : lp.rec_args) vals.push_back({hilbert_symbol(c, y, v) == -1 ? 1 : 0});
        return vals;
      };
      for (unsigned i = 0; i < (1u << basis.size()); ++i)
        for (unsigned j = 0; j < (1u << basis.size()); ++j) {
          long long c1 = 1, c2 = 1;
          for (std::size_t k = 0; k < basis.size(); ++k) {
            if (i >> k & 1) c1 *= basis[k];
            if (j >> k & 1) c2 *= basis[k];
          }
          IntVec a = left.from_generator_values(cocycle(c1));
          IntVec x = right.from_generator_values(cocycle(c2));
          mpq_class expect(hilbert_symbol(c1, c2, v) == -1 ? 1 : 0, 2);
          expect.canonicalize();
          CAPTURE(pl.label);
          CAPTURE(c1);
          CAPTURE(c2);
          CHECK(local_invariant_pairing(left, a, right, x, td.eval) == expect);
        }
    }
  }
}

TEST_CASE("local duality for twisted modules") {
  auto d = GaloisDatum::multiquadratic(5, 13);
  auto g = d->group();
  auto chi = CyclotomicCharacter::trivial(g, 2);
  std::vector<ModulePtr> mods = {biquadratic_module(g)};
  for (const auto& h : {g->generated({1}), g->generated({2}), g->generated({3})}) {
    IntMatrix rel = IntMatrix::identity(2);
    rel(0, 0) = rel(1, 1) = 2;
    auto perm = coset_module(g, h);
    mods.push_back(GammaModule::make(g, AbelianGroup::make(2, rel), perm->actions(), std::nullopt, "induced"));
  }
  for (const auto& m : mods) {
    auto td = twisted_dual(m, chi);
    for (const char* label : {"5", "13", "inf", "3", "7"}) {
      Place pl = place_data(*d, label);
      LocalH1 left(d, pl, m), right(d, pl, td.dual);
      CAPTURE(m->name());
      CAPTURE(label);
      CHECK(left.group()->order() == right.group()->order());
      // nondegeneracy of the local cup product pairing
      auto la = left.group()->elements(), ra = right.group()->elements();
      for (const auto& a : la) {
        if (left.group()->is_zero(a)) continue;
        bool hit = false;
        for (const auto& x : ra)
          if (local_invariant_pairing(left, a, right, x, td.eval) != 0) hit = true;
        CHECK(hit);
      }
      // Euler characteristic at odd places: |H^1| = |H^0(M)| |H^0(M^v)|
      if (pl.kind != PlaceKind::Archimedean) {
        auto fixed = [&](const ModulePtr& mm) {
          long count = 0;
          for (const auto& e : mm->underlying()->elements()) {
            bool ok = true;
            for (std::size_t s : pl.decomposition) ok = ok && mm->underlying()->equal(mm->act(s, e), e);
            count += ok;
          }
          return count;
        };
        CHECK(left.group()->order() == Int(fixed(m) * fixed(td.dual)));
      }
      // the comparison map from Gamma_v-level classes is injective
      auto sub = SubgroupView::make(g, pl.decomposition);
      auto hv = cohomology(m->restrict_to(sub), 1);
      std::vector<IntVec> imgs;
      for (const auto& x : hv->group()->elements()) {
        Cochain c = hv->lift(x);
        IntVec y = left.from_gamma_cocycle([&](std::size_t gg) {
          auto it = std::find(sub.embed.begin(), sub.embed.end(), gg);
          return c.value(static_cast<std::size_t>(it - sub.embed.begin()));
        });
        imgs.push_back(y);
        CHECK(left.group()->is_zero(y) == hv->group()->is_zero(x));
      }
    }
  }
}
