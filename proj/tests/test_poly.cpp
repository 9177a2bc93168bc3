#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace ffdlog;

namespace {

// Monic irreducibles of degree <= 3 over F_{q^2}: for these degrees, being
// irreducible is the same as having no root and (degree 3) nothing else to check.
bool has_no_root(const PolyRing& R, const Poly& f) {
  for (std::uint32_t i = 0; i < R.field().size(); ++i)
    if (R.eval(f, R.field().element(i)) == FieldTower::zero()) return false;
  return true;
}

std::vector<Poly> small_irreducibles(const PolyRing& R, unsigned max_degree) {
  const std::uint32_t Q = R.field().size();
  std::vector<Poly> out;
  for (unsigned d = 1; d <= max_degree; ++d) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= Q;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly f = R.decode(code);
      f.resize(d + 1);
      f[d] = FieldTower::one();
      if (d == 1 || has_no_root(R, f)) out.push_back(f);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("division identity and small examples") {
  const auto F = test::tower(2, 2, 3);
  const PolyRing R(*F);
  const Poly one = R.constant(FieldTower::one());
  const Poly x1 = R.linear(FieldTower::one());
  const Poly x2p1 = R.add(R.monomial(FieldTower::one(), 2), one);
  auto [q, r] = R.divrem(x2p1, x1);
  CHECK(q == x1);
  CHECK(r.empty());
  const Poly x3px = R.add(R.monomial(FieldTower::one(), 3), R.x());
  CHECK(R.gcd(x3px, x2p1) == x2p1);
  CHECK_THROWS_AS(R.divrem(one, Poly{}), Error);

  std::mt19937_64 rng(7);
  for (int it = 0; it < 300; ++it) {
    const Poly a = test::random_below(*F, 9, rng);
    Poly b = test::random_below(*F, 5, rng);
    if (b.empty()) continue;
    auto [qq, rr] = R.divrem(a, b);
    CHECK(R.add(R.mul(qq, b), rr) == a);
    CHECK(PolyRing::degree(rr) < PolyRing::degree(b));
    const Poly g = R.gcd(a.empty() ? b : a, b);
    CHECK(R.divides(g, b));
    if (!a.empty()) CHECK(R.divides(g, a));
  }
}

TEST_CASE("factorization of small examples") {
  const auto F = test::tower(2, 2, 3);
  const PolyRing R(*F);
  const Poly x1 = R.linear(FieldTower::one());
  const Factorization f = R.factor(R.mul(x1, x1));
  REQUIRE(f.factors.size() == 1);
  CHECK(f.factors[0].poly == x1);
  CHECK(f.factors[0].multiplicity == 2);

  const auto F5 = test::tower(5, 1, 4);
  const PolyRing R5(*F5);
  const Poly x2mx = R5.sub(R5.monomial(FieldTower::one(), 2), R5.x());
  const Factorization g = R5.factor(x2mx);
  REQUIRE(g.factors.size() == 2);
  std::set<std::uint64_t> codes;
  for (const auto& fac : g.factors) codes.insert(R5.encode(fac.poly));
  CHECK(codes.count(R5.encode(R5.x())) == 1);
  CHECK(codes.count(R5.encode(R5.linear(F5->neg(FieldTower::one())))) == 1);
  CHECK_THROWS_AS(R.factor(Poly{}), Error);
}

TEST_CASE("factor agrees with trial division by all small irreducibles") {
  const auto F = test::tower(2, 2, 3);
  const PolyRing R(*F);
  const auto irr = small_irreducibles(R, 3);
  std::mt19937_64 rng(11);
  for (int it = 0; it < 60; ++it) {
    Poly f = random_poly(*F, 6, rng);
    const Factorization fac = R.factor(f);
    CHECK(R.expand(fac) == f);
    for (const auto& fc : fac.factors) CHECK(R.is_irreducible(fc.poly));

    // Trial division leaves a cofactor with no factor of degree <= 3, which
    // for degree <= 6 is 1 or irreducible.
    std::map<std::uint64_t, unsigned> want;
    Poly rest = R.monic(f);
    for (const Poly& d : irr)
      while (PolyRing::degree(rest) >= PolyRing::degree(d) && R.divides(d, rest)) {
        ++want[R.encode(d)];
        rest = R.div(rest, d);
      }
    if (PolyRing::degree(rest) > 0) ++want[R.encode(rest)];
    std::map<std::uint64_t, unsigned> got;
    for (const auto& fc : fac.factors) got[R.encode(fc.poly)] = fc.multiplicity;
    CHECK(got == want);
  }
}

TEST_CASE("irreducible counts follow the necklace formula") {
  const auto F = test::tower(2, 2, 3);
  const PolyRing R(*F);
  std::size_t deg2 = 0, deg3 = 0;
  for (std::uint64_t code = 0; code < 16 * 16 * 16; ++code) {
    Poly f = R.decode(code);
    f.resize(4);
    f[3] = FieldTower::one();
    deg3 += R.is_irreducible(f);
    if (code < 256) {
      Poly g = R.decode(code);
      g.resize(3);
      g[2] = FieldTower::one();
      deg2 += R.is_irreducible(g);
    }
  }
  CHECK(deg2 == (256 - 16) / 2);
  CHECK(deg3 == (4096 - 16) / 3);

  const auto F5 = test::tower(5, 1, 4);
  const PolyRing R5(*F5);
  std::size_t c = 0;
  for (std::uint64_t code = 0; code < 625; ++code) {
    Poly g = R5.decode(code);
    g.resize(3);
    g[2] = FieldTower::one();
    c += R5.is_irreducible(g);
  }
  CHECK(c == (625 - 25) / 2);
}

TEST_CASE("splits_into_linears agrees with factor") {
  const auto F = test::tower(3, 1, 3);
  const PolyRing R(*F);
  std::mt19937_64 rng(5);
  for (int it = 0; it < 1000; ++it) {
    const unsigned d = 1 + static_cast<unsigned>(rng() % 3);
    const Poly f = random_poly(*F, d, rng);
    const auto s = R.splits_into_linears(f);
    const Factorization fac = R.factor(f);
    bool all_linear = true;
    for (const auto& fc : fac.factors) all_linear &= PolyRing::degree(fc.poly) == 1;
    REQUIRE(s.has_value() == all_linear);
    if (!s) continue;
    Poly prod = R.constant(s->unit);
    for (auto [theta, k] : s->linears) prod = R.mul(prod, R.pow(R.linear(theta), k));
    CHECK(prod == f);
  }
  CHECK(R.splits_into_linears(R.constant(FieldTower::one()))->linears.empty());
}

TEST_CASE("modular arithmetic") {
  const auto F = test::tower(5, 1, 4);
  const PolyRing R(*F);
  std::mt19937_64 rng(3);
  const Poly mod = random_poly(*F, 4, rng);
  for (int it = 0; it < 50; ++it) {
    const Poly a = R.rem(random_poly(*F, 6, rng), mod);
    const unsigned k = static_cast<unsigned>(rng() % 40);
    Poly want = R.constant(FieldTower::one());
    for (unsigned i = 0; i < k; ++i) want = R.mulmod(want, a, mod);
    CHECK(R.powmod(a, k, mod) == R.rem(want, mod));
    if (auto inv = R.invmod(a, mod)) CHECK(R.mulmod(*inv, a, mod) == R.constant(FieldTower::one()));
    else CHECK(PolyRing::degree(R.gcd(a.empty() ? mod : a, mod)) > 0);
  }
}

TEST_CASE("text and code round trips") {
  const auto F = test::tower(2, 2, 3);
  const PolyRing R(*F);
  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    const Poly f = test::random_below(*F, 6, rng);
    CHECK(R.from_text(R.to_text(f)) == f);
    CHECK(R.decode(R.encode(f)) == f);
  }
  CHECK(R.to_text(R.x()) == "0000 1000");
  CHECK_THROWS_AS(R.from_text("10"), Error);
  CHECK_THROWS_AS(R.from_text("1002"), Error);
}
