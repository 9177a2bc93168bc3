#include <doctest.h>

#include <numeric>

#include "support.hpp"

using namespace ffdlog;

namespace {

IntMatrix random_matrix(std::size_t r, std::size_t c, int bound, std::mt19937_64& rng) {
  IntMatrix M(r, c);
  std::uniform_int_distribution<int> pick(-bound, bound);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) M(i, j) = pick(rng);
  return M;
}

test::Dense dense(const IntMatrix& M) {
  test::Dense d(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) d[i] = M.row(i);
  return d;
}

void check_decomposition(const IntMatrix& M) {
  const InvariantDecomposition dec = snf(M);
  REQUIRE(dec.size() == M.cols());
  const IntMatrix D = dec.U * M * dec.V;
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j) CHECK(D(i, j) == (i == j ? dec.diag[i] : BigInt(0)));
  CHECK(dec.V * dec.Vinv == IntMatrix::identity(M.cols()));
  CHECK(abs(determinant(dec.U)) == 1);
  for (std::size_t i = 0; i + 1 < dec.size(); ++i) {
    CHECK(dec.diag[i] >= 0);
    if (dec.diag[i] != 0) CHECK(dec.diag[i + 1] % dec.diag[i] == 0);
    else CHECK(dec.diag[i + 1] == 0);
  }
  const auto want = test::naive_invariants(dense(M), M.cols());
  for (std::size_t i = 0; i < dec.size(); ++i) CHECK(dec.diag[i] == (i < want.size() ? want[i] : BigInt(0)));
}

}  // namespace

TEST_CASE("snf small examples") {
  const auto d = snf(IntMatrix::from_rows({{2, 0}, {0, 3}}, 2));
  CHECK(d.diag == std::vector<BigInt>{1, 6});
  const auto z = snf(IntMatrix::from_rows({{0, 0}, {0, 0}}, 2));
  CHECK(z.diag == std::vector<BigInt>{0, 0});
  const auto tall = snf(IntMatrix::from_rows({{4}, {6}}, 1));
  CHECK(tall.diag == std::vector<BigInt>{2});
  check_decomposition(IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, 3));
}

TEST_CASE("snf matches the elimination oracle on random matrices") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 40; ++it) {
    const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 8;
    check_decomposition(random_matrix(r, c, 1 + static_cast<int>(rng() % 20), rng));
  }
  // Low rank and sparse inputs.
  for (int it = 0; it < 10; ++it) {
    IntMatrix A = random_matrix(6, 2, 5, rng), B = random_matrix(2, 6, 5, rng);
    check_decomposition(A * B);
  }
}

TEST_CASE("projections onto summands") {
  const IntMatrix M = IntMatrix::from_rows({{2, 0, 0}, {0, 6, 0}}, 3);
  const InvariantDecomposition dec = snf(M);
  CHECK(dec.diag == std::vector<BigInt>{2, 6, 0});
  for (std::size_t i = 0; i < dec.size(); ++i)
    for (std::size_t j = 0; j < dec.size(); ++j) {
      const BigInt c = project_coord(dec.basis_vector(i), dec, j);
      CHECK(c == (i == j ? BigInt(dec.diag[j] == 1 ? 0 : 1) : BigInt(0)));
    }
  // Rows of M project to zero.
  for (std::size_t r = 0; r < M.rows(); ++r)
    for (std::size_t j = 0; j < dec.size(); ++j) CHECK(project_coord(M.row(r), dec, j) == 0);

  const InvariantDecomposition cyc = snf(IntMatrix::from_rows({{1, -1}, {0, 5}}, 2));
  CHECK(cyc.diag == std::vector<BigInt>{1, 5});
  const BigInt t = project_theta({1, 0}, cyc);
  CHECK(t != 0);
  CHECK(mod(project_theta({2, 0}, cyc) - 2 * t, 5) == 0);
  CHECK(mod(project_theta({0, 1}, cyc) - t, 5) == 0);
}

TEST_CASE("gcd splitting") {
  const IntMatrix M = IntMatrix::from_rows({{9}, {1}}, 1);
  const ModSplitResult r = gcd_split_reduce(M, 12, 1, 1);
  REQUIRE(r.blocks.size() == 2);
  CHECK(r.blocks[0].modulus == 3);
  CHECK(r.blocks[1].modulus == 4);
  for (const auto& b : r.blocks) {
    const IntMatrix P = replay(M, b);
    CHECK(P == b.reduced);
    CHECK(gcd(b.reduced(0, 0), b.modulus) == 1);
  }
  // Prime modulus never splits.
  const ModSplitResult p = gcd_split_reduce(IntMatrix::from_rows({{3, 1}, {1, 4}}, 2), 7, 2, 2);
  CHECK(p.blocks.size() == 1);
  CHECK(p.blocks[0].modulus == 7);
  const ModSplitResult id = gcd_split_reduce(IntMatrix::identity(3), 30, 3, 3);
  CHECK(id.blocks.size() == 1);
  CHECK_THROWS_AS(gcd_split_reduce(IntMatrix::from_rows({{5}, {10}}, 1), 5, 1, 1), HeuristicFailure);
}

TEST_CASE("solve_mod agrees with solving after factoring") {
  std::mt19937_64 rng(33);
  int solved = 0;
  for (int it = 0; it < 60; ++it) {
    const std::size_t n = 1 + rng() % 6, rows = n + rng() % 4;
    const BigInt L = 2 + rng() % 999999;
    const IntMatrix M = random_matrix(rows, n, 40, rng);
    const IntMatrix T = random_matrix(n, 2, 1000, rng);
    IntMatrix C = M * T;
    C.reduce_mod(L);
    const auto want = test::factored_solve(dense(M), dense(C), n, L);
    if (!want) {
      CHECK_THROWS_AS(solve_mod(M, C, L), HeuristicFailure);
      continue;
    }
    ++solved;
    const IntMatrix got = solve_mod(M, C, L);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(mod(got(i, j), L) == mod((*want)[i][j], L));
        CHECK(mod(got(i, j) - T(i, j), L) == 0);
      }
  }
  CHECK(solved > 30);
  // Inconsistent trailing rows.
  const IntMatrix M = IntMatrix::from_rows({{1}, {1}}, 1);
  const IntMatrix C = IntMatrix::from_rows({{1}, {2}}, 1);
  CHECK_THROWS_AS(solve_mod(M, C, 7), HeuristicFailure);
  CHECK(solve_mod(M, C, 7, false)(0, 0) == 1);
}

TEST_CASE("crt and rank") {
  CHECK(crt({{1, 2}, {2, 3}}) == std::pair<BigInt, BigInt>{5, 6});
  CHECK_THROWS_AS(crt({{1, 4}, {1, 6}}), Error);
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    const BigInt a = 1 + rng() % 40, b = 1 + rng() % 40;
    if (gcd(a, b) != 1) continue;
    const BigInt x = rng() % 1600, r1 = mod(x, a), r2 = mod(x, b);
    const auto [y, n] = crt({{r1, a}, {r2, b}});
    CHECK(n == a * b);
    CHECK(y == mod(x, a * b));
  }
  CHECK(rank_mod_prime(IntMatrix::from_rows({{2, 4}, {1, 2}}, 2), 3) == 1);
  CHECK(rank_mod_prime(IntMatrix::from_rows({{2, 4}, {1, 3}}, 2), 2) == 1);
  CHECK(rank_mod_prime(IntMatrix::from_rows({{2, 4}, {1, 3}}, 2), 3) == 2);
  CHECK(determinant(IntMatrix::from_rows({{2, 4}, {1, 3}}, 2)) == 2);
}

TEST_CASE("pohlig-hellman in Z/8 and Z/360") {
  auto run = [](std::int64_t n, std::int64_t base, std::int64_t target) {
    const BigInt N = n;
    return pohlig_hellman_order<BigInt>(
        BigInt(base), BigInt(target), factor_integer(N), BigInt(0),
        [&](const BigInt& a, const BigInt& b) { return mod(a + b, N); },
        [&](const BigInt& a, const BigInt& k) { return mod(a * k, N); });
  };
  auto r = run(8, 1, 5);
  REQUIRE(r);
  CHECK(r->first == 5);
  CHECK(r->second == 8);
  CHECK_FALSE(run(8, 2, 1));
  auto s = run(8, 2, 6);
  REQUIRE(s);
  CHECK(s->first == 3);
  CHECK(s->second == 4);
  for (std::int64_t base = 1; base < 360; base += 7)
    for (std::int64_t x = 0; x < 360; x += 13) {
      auto t = run(360, base, base * x % 360);
      REQUIRE(t);
      CHECK(mod(t->first * base - base * x, 360) == 0);
      CHECK(t->second == 360 / std::gcd<std::int64_t>(base, 360));
    }
}
