#include <doctest.h>

#include "support.hpp"

using namespace ffdlog;

TEST_CASE("field arithmetic matches naive polynomial arithmetic mod the defining polynomial") {
  for (auto [p, e, m] : {std::tuple{2u, 2u, 3u}, {3u, 1u, 3u}, {5u, 1u, 4u}, {2u, 3u, 5u}, {3u, 2u, 5u}}) {
    const FieldTower F = FieldTower::standalone(p, e, m);
    CAPTURE(F.q());
    for (std::uint32_t i = 0; i < F.size(); ++i)
      for (std::uint32_t j = 0; j < F.size(); ++j) {
        const Fq2Elem a = F.element(i), b = F.element(j);
        const auto want = test::naive_mul(F.coords(a), F.coords(b), F.modulus(), p);
        REQUIRE(F.coords(F.mul(a, b)) == want);
        auto ca = F.coords(a), cb = F.coords(b);
        for (std::size_t t = 0; t < ca.size(); ++t) ca[t] = (ca[t] + cb[t]) % p;
        REQUIRE(F.add(a, b) == F.from_coords(ca));
      }
  }
}

TEST_CASE("inverse, frobenius and subfield") {
  const FieldTower F = FieldTower::standalone(2, 2, 3);
  CHECK(F.q() == 4);
  CHECK(F.size() == 16);
  for (std::uint32_t i = 1; i < F.size(); ++i) {
    const Fq2Elem a = F.element(i);
    CHECK(F.mul(a, F.inv(a)) == FieldTower::one());
    CHECK(F.frobenius(a) == F.pow(a, std::int64_t{4}));
    CHECK(F.frobenius(F.frobenius(a)) == a);
  }
  CHECK_THROWS_AS(F.inv(FieldTower::zero()), Error);
  CHECK(F.subfield().size() == 4);
  for (Fq2Elem a : F.subfield()) CHECK(F.pow(a, std::int64_t{4}) == a);

  // F_4 inside F_16: w^2 + w + 1 = 0 gives w (w + 1) = 1.
  int cube_roots = 0;
  for (Fq2Elem w : F.subfield()) {
    if (F.add(F.add(F.mul(w, w), w), FieldTower::one()) != FieldTower::zero()) continue;
    ++cube_roots;
    CHECK(F.mul(w, F.add(w, FieldTower::one())) == FieldTower::one());
    CHECK(F.inv(w) == F.add(w, FieldTower::one()));
  }
  CHECK(cube_roots == 2);
}

TEST_CASE("lambda is the first element of full order") {
  for (auto [p, e, m] : {std::tuple{2u, 2u, 3u}, {3u, 1u, 3u}, {5u, 1u, 4u}, {7u, 1u, 4u}}) {
    const FieldTower F = FieldTower::standalone(p, e, m);
    auto order = [&](Fq2Elem a) {
      std::uint32_t k = 1;
      for (Fq2Elem y = a; y != FieldTower::one(); y = F.mul(y, a)) ++k;
      return k;
    };
    std::uint32_t first = 0;
    for (std::uint32_t i = 1; i < F.size() && !first; ++i)
      if (order(F.element(i)) == F.size() - 1) first = i;
    CHECK(F.lambda().index == first);
    for (std::uint32_t i = 1; i < F.size(); ++i)
      CHECK(F.lambda_pow(F.small_dlog(F.element(i))) == F.element(i));
  }
}

TEST_CASE("field-only tower admits q = 2") {
  const FieldTower F = FieldTower::field_only(2, 1);
  CHECK(F.size() == 4);
  CHECK(F.m() == 0);
  CHECK(F.modulus() == std::vector<std::uint32_t>{1, 1, 1});
  // Both u and u + 1 have order 3; u comes first.
  CHECK(F.lambda().index == 2);
  const Fq2Elem u = F.element(2), u1 = F.element(3);
  CHECK(F.mul(u, u1) == FieldTower::one());
  CHECK(F.inv(u) == u1);
  CHECK(F.frobenius(u) == u1);
}

TEST_CASE("embedding mode and parameter validation") {
  const FieldTower E = FieldTower::build(2, 5);
  CHECK(E.q() == 8);
  CHECK(E.m() == 5);
  CHECK(E.n() == 5);
  CHECK_THROWS_AS(FieldTower::standalone(4, 1, 3), Error);
  CHECK_THROWS_AS(FieldTower::standalone(3, 1, 4), Error);
  CHECK_THROWS_AS(FieldTower::standalone(2, 1, 2), Error);
  CHECK_THROWS_AS(FieldTower::standalone(2, 6, 3), Error);
  CHECK(first_irreducible_fp(2, 2) == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(is_irreducible_fp(3, {1, 0, 1}));
  CHECK_FALSE(is_irreducible_fp(5, {1, 0, 1}));
}
