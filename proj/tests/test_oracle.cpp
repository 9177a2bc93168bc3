#include <doctest.h>

#include <deque>

#include "support.hpp"

using namespace ffdlog;

namespace {

// Breadth-first closure of <F_h> inside F_h^x by codes.
std::vector<std::uint64_t> closure(const FieldSetup& s) {
  const PolyRing R = s.ring();
  const FactorBase fb(*s.tower);
  std::uint64_t size = 1;
  for (int i = 0; i < PolyRing::degree(s.h); ++i) size *= s.tower->size();
  std::vector<Poly> gens;
  for (std::size_t c = 0; c < fb.size(); ++c) gens.push_back(R.rem(fb.element(c, s), s.h));
  std::vector<char> seen(size, 0);
  std::vector<std::uint64_t> out;
  std::deque<Poly> todo{R.constant(FieldTower::one())};
  seen[1] = 1;
  out.push_back(1);
  while (!todo.empty()) {
    const Poly a = todo.front();
    todo.pop_front();
    for (const Poly& g : gens) {
      const Poly b = R.mulmod(a, g, s.h);
      const std::uint64_t code = R.encode(b);
      if (seen[code]) continue;
      seen[code] = 1;
      out.push_back(code);
      todo.push_back(b);
    }
  }
  return out;
}

std::size_t count_killed_by(const FieldSetup& s, const std::vector<std::uint64_t>& elems, const BigInt& k) {
  const PolyRing R = s.ring();
  const Poly one = R.constant(FieldTower::one());
  std::size_t n = 0;
  for (auto code : elems) n += R.powmod(R.decode(code), k, s.h) == one;
  return n;
}

}  // namespace

TEST_CASE("brute table") {
  const FieldSetup& s = test::setup(2, 2, 3, 1, 2);
  const LogTable T = brute_logs(s);
  const PolyRing R = s.ring();
  CHECK(T.order == 4095);
  CHECK(T.logs.size() == 4096);
  CHECK(T.logs[0] == LogTable::kNoLog);
  CHECK(T.log_of(R, R.constant(FieldTower::one())) == 0);
  CHECK(T.log_of(R, T.generator) == 1);
  std::vector<char> hit(4095, 0);
  for (std::uint64_t c = 1; c < 4096; ++c) hit[T.logs[c]] = 1;
  for (char h : hit) CHECK(h);
  std::mt19937_64 rng(2);
  for (int it = 0; it < 100; ++it) {
    const Poly a = R.rem(random_poly(*s.tower, 2, rng), s.g), b = R.rem(random_poly(*s.tower, 2, rng), s.g);
    CHECK((T.log_of(R, a) + T.log_of(R, b)) % 4095 == T.log_of(R, R.mulmod(a, b, s.g)));
  }
  CHECK_THROWS_AS(brute_logs(s, 1000), Error);
}

TEST_CASE("group structure of a good setup") {
  const FieldSetup& s = test::setup(5, 1, 4, 1, 2);
  const RelationMatrix Rm = generate_all(s);
  const GroupStructureReport g = group_structure(s, &Rm);
  CHECK(g.factorbase_size == s.tower->size() + 2);
  CHECK(g.unit_group_order % g.order == 0);
  if (g.complete) {
    BigInt prod = 1;
    for (const auto& d : g.invariants) prod *= d;
    CHECK(prod == g.order);
  }
  for (const auto& pr : g.primes) {
    if (s.L % pr.prime != 0) continue;
    CHECK(pr.cyclic);
    CHECK(pr.rank_checked);
    CHECK(pr.rank + 1 == Rm.columns);
  }
  const ObstructionReport o = obstruction_probe(s);
  CHECK_FALSE(o.predicate);
  CHECK_FALSE(o.rank_deficient);
  CHECK(o.consistent());
}

TEST_CASE("obstruction instance: closure agrees with the reported structure") {
  const FieldSetup bad = search_obstruction(test::tower(3, 1, 3), 1, 3);
  int cubics = 0;
  for (const auto& f : bad.h_factorization.factors) cubics += PolyRing::degree(f.poly) == 3;
  CHECK(cubics >= 2);

  const ObstructionReport o = obstruction_probe(bad);
  CHECK(o.predicate);
  CHECK(o.rank_deficient);
  CHECK(o.consistent());
  REQUIRE(o.structure.complete);

  const auto elems = closure(bad);
  CHECK(BigInt(static_cast<unsigned long>(elems.size())) == o.structure.order);
  // Two cyclic factors of order divisible by 13 give 169 elements killed by 13.
  CHECK(count_killed_by(bad, elems, 13) == 169);
  for (const auto& d : o.structure.invariants)
    CHECK(count_killed_by(bad, elems, d) >= static_cast<std::size_t>(d.get_ui()));
}

TEST_CASE("p-part by closure for a squared factor") {
  const auto F = test::tower(3, 1, 3);
  const PolyRing R(*F);
  Poly g;
  for (std::uint64_t code = 0; g.empty(); ++code) {
    Poly c = R.decode(code);
    c.resize(4);
    c[3] = FieldTower::one();
    if (R.is_irreducible(c)) g = c;
  }
  const Poly h = R.mul(g, g);
  const Poly h1(h.begin() + 3, h.end());
  Poly low(h.begin(), h.begin() + 3);
  PolyRing::normalize(low);
  const FieldSetup s = make_unchecked_setup(F, 1, 3, R.neg(low), h1);
  const GroupStructureReport rep = group_structure(s);
  REQUIRE(rep.complete);
  const auto elems = closure(s);
  CHECK(BigInt(static_cast<unsigned long>(elems.size())) == rep.order);
  CHECK(rep.unit_group_order == BigInt(728) * 729);
}

TEST_CASE("pipeline verification catches a corrupted relation") {
  const FieldSetup& s = test::setup(5, 1, 4, 1, 2);
  const auto& sv = test::solved(5, 1, 4);
  const PipelineReport good = verify_pipeline(s, sv.R, sv.table);
  CHECK(good.ok);
  CHECK(good.witness.empty());

  RelationMatrix bad = sv.R;
  for (auto& row : bad.rows) {
    if (row.exps[FactorBase::kLambda] == static_cast<std::int64_t>(s.tower->size()) - 1) continue;
    row.exps[2] += 1;
    break;
  }
  const PipelineReport r = verify_pipeline(s, bad, sv.table);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.witness.empty());
  MESSAGE("witness: " << r.witness);
}
