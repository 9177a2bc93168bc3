#include <doctest.h>

#include "support.hpp"

using namespace ffdlog;

namespace {

unsigned valuation(const PolyRing& R, const Poly& f, const Poly& p) {
  if (f.empty()) return 0;
  unsigned k = 0;
  for (Poly t = f; R.divides(p, t); t = R.div(t, p)) ++k;
  return k;
}

// h1^w ((aP+b)^q (cP+d) - (aP+b) (cP+d)^q) mod h, with the q-th powers taken literally.
Poly direct_numerator(const CosetRep& m, const Poly& P, const FieldSetup& s) {
  const PolyRing R = s.ring();
  const unsigned q = s.tower->q();
  const Poly aPb = R.add(R.scale(P, m.a), R.constant(m.b));
  const Poly cPd = R.add(R.scale(P, m.c), R.constant(m.d));
  const Poly v = R.sub(R.mulmod(R.powmod(aPb, q, s.h), cPd, s.h), R.mulmod(aPb, R.powmod(cPd, q, s.h), s.h));
  return R.mulmod(R.pow(s.h1, static_cast<unsigned>(PolyRing::degree(P))), v, s.h);
}

}  // namespace

TEST_CASE("descent numerator matches the direct expression modulo h") {
  const FieldSetup& s = test::setup(5, 1, 4, 1, 2);
  const PolyRing R = s.ring();
  const auto cosets = enumerate_cosets(*s.tower);
  std::mt19937_64 rng(12);
  for (int it = 0; it < 6; ++it) {
    const Poly P = random_poly(*s.tower, 2 + it % 2, rng);
    const int w = PolyRing::degree(P);
    for (const auto& m : cosets) {
      const DescentNumerator N = descent_numerator(m, P, s);
      CHECK(N.h1_exponent == static_cast<unsigned>(w));
      CHECK(PolyRing::degree(N.poly) <= w * (static_cast<int>(s.D) + 1));
      CHECK(R.rem(N.poly, s.h) == direct_numerator(m, P, s));
    }
  }
  for (const auto& m : cosets) CHECK(descent_numerator(m, R.x(), s).poly == numerator(m, s));
  CHECK_THROWS_AS(descent_numerator(cosets[0], R.constant(FieldTower::one()), s), Error);
}

TEST_CASE("accepted descent relations hold in F_g with independently computed trap exponents") {
  for (auto [p, e, m] : {std::tuple{5u, 1u, 4u}, {2u, 3u, 4u}}) {
    const FieldSetup& s = test::setup(p, e, m, 1, 2);
    const PolyRing R = s.ring();
    const Poly hg = R.div(s.h, s.g);
    CosetOptions co;
    if (s.tower->q() > 5) {
      co.mode = CosetMode::Sampled;
      co.samples = 150;
    }
    const auto cosets = enumerate_cosets(*s.tower, co);
    std::mt19937_64 rng(13);
    std::size_t accepted = 0;
    for (int it = 0; it < 8; ++it) {
      Poly P = random_poly(*s.tower, 2 + it % 2, rng);
      // Plant a trap in one translate now and then.
      if (it % 2 == 0) {
        const Poly gi = s.cofactors().front().poly;
        if (PolyRing::degree(gi) <= PolyRing::degree(P)) P = R.add(R.mul(gi, R.x()), R.constant(FieldTower::one()));
        if (PolyRing::degree(P) >= static_cast<int>(m)) P = gi;
      }
      for (const auto& c : cosets) {
        RelationMiss miss;
        const auto rel = try_descent_relation(c, P, s, &miss);
        if (!rel) continue;
        ++accepted;
        CHECK(miss == RelationMiss::None);
        CHECK(verify_descent_relation(*rel, P, s));
        const Poly N = descent_numerator(c, P, s).poly;
        for (const auto& f : s.cofactors()) {
          std::int64_t want = -static_cast<std::int64_t>(valuation(R, N, f.poly));
          const unsigned cap = valuation(R, hg, f.poly);
          for (std::uint32_t b = 0; b < s.tower->size(); ++b)
            if (rel->translate_exps[b])
              want += rel->translate_exps[b] *
                      std::min(cap, valuation(R, R.sub(P, R.constant(s.tower->element(b))), f.poly));
          std::int64_t got = 0;
          for (const auto& [gi, si] : rel->traps)
            if (gi == f.poly) got = si;
          CHECK(got == want);
        }
        for (const auto& [u, cu] : rel->rhs) CHECK(PolyRing::degree(u) <= PolyRing::degree(P) / 2);
        for (auto x : rel->translate_exps) CHECK((x == 0 || x == 1));

        DescentRelation broken = *rel;
        broken.c_lambda += 1;
        CHECK_FALSE(verify_descent_relation(broken, P, s));
      }
    }
    CHECK(accepted > 0);
  }
}

TEST_CASE("randomizing targets that share a factor with h") {
  const FieldSetup& s = test::setup(5, 1, 4, 1, 2);
  const PolyRing R = s.ring();
  std::mt19937_64 rng(3);
  const Poly P = R.linear(s.tower->element(7));
  const auto [same, k1] = randomize_if_shared(P, s, rng);
  if (PolyRing::degree(R.gcd(P, s.h)) == 0) {
    CHECK(same == P);
    CHECK(k1 == 1);
  }
  const Poly gi = R.rem(s.cofactors().front().poly, s.g);
  const auto [moved, k] = randomize_if_shared(gi, s, rng);
  CHECK(PolyRing::degree(R.gcd(moved, s.h)) == 0);
  CHECK(moved == R.powmod(gi, k, s.g));
  CHECK(gcd(k, s.L) == 1);
  CHECK_THROWS_AS(randomize_if_shared(s.g, s, rng), Error);
}

TEST_CASE("full descent and dlog on a small field") {
  const FieldSetup& s = test::setup(5, 1, 4, 1, 2);
  const auto& sv = test::solved(5, 1, 4);
  const PolyRing R = s.ring();
  REQUIRE(s.L > 1);

  const Poly lin = R.linear(s.tower->element(3));
  const DescentResult d = full_descent(lin, s);
  CHECK(d.nodes.empty());
  CHECK(d.max_depth == 0);
  CHECK(d.exps[FactorBase::linear_column(s.tower->element(3))] == 1);

  const Poly eta = R.add(R.monomial(FieldTower::one(), 2), R.linear(s.tower->element(4)));
  DescentOptions opt;
  try {
    const DlogResult one = dlog(eta, eta, s, sv.logs, opt);
    REQUIRE(one.x);
    CHECK(*one.x == 1);
    const DlogResult zero = dlog(R.constant(FieldTower::one()), eta, s, sv.logs, opt);
    REQUIRE(zero.x);
    CHECK(*zero.x == 0);
  } catch (const HeuristicFailure& e) {
    MESSAGE("descent heuristic failure: " << e.what());
  }

  std::mt19937_64 rng(99);
  std::size_t answered = 0, failed = 0;
  const BigInt N = s.group_order();
  for (int it = 0; it < 8; ++it) {
    const Poly P = random_poly(*s.tower, 2 + it % 2, rng);
    try {
      const TargetLog t = target_log(P, s, sv.logs, opt);
      ++answered;
      const BigInt lmu = sv.table.log_of(R, R.rem(sv.logs.mu, s.g));
      CHECK(mod(t.log * lmu - BigInt(sv.table.log_of(R, R.rem(P, s.g))), N) == 0);
      // The descent's exponents give the L-part of P.
      const Poly lhs = R.powmod(phi(t.descent.exps, s), s.v, s.g);
      if (t.attempts == 1 && PolyRing::degree(R.gcd(P, s.h)) == 0) CHECK(lhs == R.powmod(P, s.v, s.g));
      CHECK(descent_trace(t.descent, s).find("exps") != std::string::npos);
    } catch (const HeuristicFailure&) {
      ++failed;
    }
  }
  MESSAGE("q=5 descent: " << answered << " answered, " << failed << " heuristic failures");
  CHECK(answered + failed == 8);
  CHECK_THROWS_AS(full_descent(s.g, s), Error);
}

TEST_CASE("trivial L gives an empty descent") {
  const FieldSetup& s = test::setup(2, 2, 3, 1, 2);
  REQUIRE(s.L == 1);
  const auto& sv = test::solved(2, 2, 3);
  const PolyRing R = s.ring();
  std::mt19937_64 rng(1);
  for (int it = 0; it < 50; ++it) {
    const Poly gamma = random_poly(*s.tower, 2, rng), eta = random_poly(*s.tower, 1 + it % 2, rng);
    const DlogResult r = dlog(gamma, eta, s, sv.logs);
    const BigInt lg = sv.table.log_of(R, R.rem(gamma, s.g)), le = sv.table.log_of(R, R.rem(eta, s.g));
    const BigInt N = s.group_order();
    CHECK(r.x.has_value() == (mod(lg, gcd(le, N)) == 0));
    if (r.x) CHECK(mod(*r.x * le - lg, N) == 0);
    CHECK(r.gamma.descent.nodes.empty());
  }
}
