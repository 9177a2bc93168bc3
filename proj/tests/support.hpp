#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <memory>
#include <random>
#include <tuple>
#include <vector>

#include "ffdlog/oracle.hpp"

namespace ffdlog::test {

inline std::shared_ptr<const FieldTower> tower(std::uint32_t p, std::uint32_t e, std::uint32_t m) {
  static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::shared_ptr<const FieldTower>> cache;
  auto& t = cache[{p, e, m}];
  if (!t) t = std::make_shared<const FieldTower>(FieldTower::standalone(p, e, m));
  return t;
}

/// First good setup whose relation matrix has full rank mod L, cached.
inline const FieldSetup& setup(std::uint32_t p, std::uint32_t e, std::uint32_t m, unsigned C, unsigned D) {
  static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, unsigned, unsigned>, FieldSetup> cache;
  auto key = std::make_tuple(p, e, m, C, D);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, search_good(tower(p, e, m), C, D, relations_full_rank)).first;
  return it->second;
}

struct Solved {
  RelationMatrix R;
  InvariantDecomposition dec;
  FactorbaseLogs logs;
  LogTable table;
};

inline const Solved& solved(std::uint32_t p, std::uint32_t e, std::uint32_t m) {
  static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Solved> cache;
  auto key = std::make_tuple(p, e, m);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const FieldSetup& s = setup(p, e, m, 1, 2);
    Solved r;
    r.R = generate_all(s);
    r.dec = snf(relation_matrix(r.R));
    r.logs = factorbase_logs(r.dec, s);
    r.table = brute_logs(s);
    it = cache.emplace(key, std::move(r)).first;
  }
  return it->second;
}

inline Poly random_below(const FieldTower& F, unsigned bound_degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, F.size() - 1);
  Poly f(bound_degree);
  for (auto& c : f) c = Fq2Elem{pick(rng)};
  PolyRing::normalize(f);
  return f;
}

/// Naive F_p[u]/(f) product on coordinate vectors, independent of the tables.
inline std::vector<std::uint32_t> naive_mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                            const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const std::size_t k = f.size() - 1;
  std::vector<std::uint64_t> prod(2 * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  for (std::size_t d = 2 * k - 1; d >= k; --d) {
    const std::uint64_t c = prod[d];
    if (!c) continue;
    for (std::size_t t = 0; t <= k; ++t) prod[d - k + t] = (prod[d - k + t] + (p - c) * f[t]) % p;
  }
  return {prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(k)};
}

using Dense = std::vector<std::vector<BigInt>>;

/// Invariant factors by plain elimination on a copy (smallest nonzero entry as
/// pivot, no transforms), then pairwise (gcd, lcm) normalization of the
/// diagonal. Length min(rows, cols).
inline std::vector<BigInt> naive_invariants(Dense a, std::size_t cols) {
  const std::size_t rows = a.size(), n = std::min(rows, cols);
  std::vector<BigInt> d;
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
      if (pi == rows) break;
      std::swap(a[t], a[pi]);
      for (auto& row : a) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const BigInt f = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= f * a[t][j];
        clean &= a[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const BigInt f = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= f * a[i][t];
        clean &= a[t][j] == 0;
      }
      if (clean) break;
    }
    d.push_back(abs(a[t][t]));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const BigInt g = gcd(d[i], d[j]), l = lcm(d[i], d[j]);
      d[i] = g;
      d[j] = l;
    }
  // Zeros sort last.
  std::stable_partition(d.begin(), d.end(), [](const BigInt& x) { return x != 0; });
  return d;
}

/// Solves M T = C mod L by factoring L, eliminating modulo each prime power
/// with unit pivots, and recombining with CRT. nullopt when M lacks a unit
/// pivot modulo some prime.
inline std::optional<Dense> factored_solve(const Dense& M, const Dense& C, std::size_t n, const BigInt& L) {
  const std::size_t rows = M.size(), k = C.empty() ? 0 : C[0].size();
  Dense acc(n, std::vector<BigInt>(k, 0));
  BigInt modulus = 1;
  for (const auto& pf : factor_integer(L)) {
    const BigInt pk = pow_ui(pf.prime, pf.exponent);
    Dense A(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < n; ++j) A[i].push_back(mod(M[i][j], pk));
      for (std::size_t j = 0; j < k; ++j) A[i].push_back(mod(C[i][j], pk));
    }
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t pi = rows;
      for (std::size_t i = t; i < rows && pi == rows; ++i)
        if (gcd(A[i][t], pf.prime) == 1) pi = i;
      if (pi == rows) return std::nullopt;
      std::swap(A[t], A[pi]);
      const BigInt inv = *inverse_mod(A[t][t], pk);
      for (auto& x : A[t]) x = mod(x * inv, pk);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == t || A[i][t] == 0) continue;
        const BigInt f = A[i][t];
        for (std::size_t j = 0; j < n + k; ++j) A[i][j] = mod(A[i][j] - f * A[t][j], pk);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        // x = acc mod modulus, x = A mod pk.
        const BigInt& r = A[i][n + j];
        const BigInt step = mod((r - acc[i][j]) * *inverse_mod(modulus, pk), pk);
        acc[i][j] += modulus * step;
      }
    modulus *= pk;
  }
  return acc;
}

}  // namespace ffdlog::test
