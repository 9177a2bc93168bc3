#include "ffdlog/dlog_engine.hpp"

namespace ffdlog {

Poly phi_mod(const std::vector<BigInt>& kappa, const FieldSetup& setup, const Poly& modulus) {
  const FieldTower& F = *setup.tower;
  const PolyRing ring(F);
  const FactorBase fb(F);
  if (kappa.size() != fb.size()) throw Error("phi: exponent vector length mismatch");
  const BigInt lambda_order = F.size() - 1;
  Poly r = ring.constant(F.pow(F.lambda(), mod(kappa[FactorBase::kLambda], lambda_order)));
  for (std::size_t c = 1; c < kappa.size(); ++c) {
    if (kappa[c] == 0) continue;
    r = ring.mulmod(r, ring.powmod(fb.element(c, setup), kappa[c], modulus), modulus);
  }
  return ring.rem(r, modulus);
}

Poly phi(const std::vector<BigInt>& kappa, const FieldSetup& setup) {
  const BigInt N = setup.group_order();
  std::vector<BigInt> k(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) k[i] = mod(kappa[i], N);
  return phi_mod(k, setup, setup.g);
}

Poly pow_g(const Poly& a, const BigInt& k, const FieldSetup& setup) {
  return setup.ring().powmod(a, mod(k, setup.group_order()), setup.g);
}

IntMatrix relation_matrix(const RelationMatrix& R) {
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(R.rows.size());
  for (const auto& r : R.rows) rows.push_back(r.exps);
  return IntMatrix::from_rows(rows, R.columns);
}

BigInt l_idempotent(const FieldSetup& setup) {
  if (setup.L == 1) return 0;
  return setup.v * *inverse_mod(setup.v, setup.L);
}

bool check_snf_condition(const InvariantDecomposition& dec, const FieldSetup& setup) {
  if (dec.size() < 2) return true;
  const BigInt d = dec.diag[dec.size() - 2];
  return gcd(gcd(d, setup.group_order()), setup.L) == 1;
}

namespace {

std::vector<BigInt> unit_vector(std::size_t n, std::size_t c, const BigInt& scale = 1) {
  std::vector<BigInt> v(n, 0);
  v[c] = scale;
  return v;
}

bool is_one(const Poly& p) { return p.size() == 1 && p[0] == FieldTower::one(); }

void require_condition(const InvariantDecomposition& dec, const FieldSetup& setup) {
  if (!check_snf_condition(dec, setup))
    throw HeuristicFailure("obstruction: gcd(d_{|F|-1}, q^{2m}-1) is not q^{2C}-smooth");
  const BigInt& last = dec.diag.back();
  if (last != 0 && !mpz_divisible_p(last.get_mpz_t(), setup.L.get_mpz_t()))
    throw HeuristicFailure("relation lattice: L does not divide the last invariant factor");
}

std::vector<BigInt> prime_divisors(const FieldSetup& setup) {
  std::vector<BigInt> ps;
  for (const auto& f : setup.v_factors) ps.push_back(f.prime);
  if (setup.L > 1)
    for (const auto& f : factor_integer(setup.L)) ps.push_back(f.prime);
  return ps;
}

std::optional<std::pair<BigInt, BigInt>> v_part_log(const Poly& base, const Poly& target, const FieldSetup& setup) {
  const PolyRing ring = setup.ring();
  const Poly one = ring.constant(FieldTower::one());
  auto mul = [&](const Poly& a, const Poly& b) { return ring.mulmod(a, b, setup.g); };
  auto pw = [&](const Poly& a, const BigInt& k) { return ring.powmod(a, k, setup.g); };
  return pohlig_hellman_order(pow_g(base, setup.L, setup), pow_g(target, setup.L, setup), setup.v_factors, one,
                              mul, pw);
}

}  // namespace

Generator find_generator(const InvariantDecomposition& dec, const FieldSetup& setup) {
  require_condition(dec, setup);
  const std::size_t n = dec.size();
  const BigInt N = setup.group_order();
  Generator gen;
  gen.vec.assign(n, 0);

  const BigInt w = l_idempotent(setup);
  const auto e_last = dec.basis_vector(n - 1);
  for (std::size_t c = 0; c < n; ++c) gen.vec[c] = mod(w * e_last[c], N);
  gen.gamma_L = phi(gen.vec, setup);
  if (!is_one(pow_g(gen.gamma_L, setup.L, setup)))
    throw Error("find_generator: gamma_L^L != 1 (inconsistent relations)");
  if (setup.L > 1)
    for (const auto& f : factor_integer(setup.L))
      if (is_one(pow_g(gen.gamma_L, setup.L / f.prime, setup)))
        throw HeuristicFailure("find_generator: phi(e_|F|) has no element of order L in its L-part");

  // For each prime power l^a of v, the first column whose l-component has
  // full order, lifted with the CRT idempotent of l^a.
  for (const auto& pf : setup.v_factors) {
    const BigInt la = pow_ui(pf.prime, pf.exponent);
    const BigInt cof = N / la;
    const BigInt E = cof * *inverse_mod(cof, la);
    std::size_t chosen = n;
    for (std::size_t c = 0; c < n && chosen == n; ++c) {
      const Poly comp = phi(unit_vector(n, c, cof), setup);
      if (!is_one(pow_g(comp, la / pf.prime, setup))) chosen = c;
    }
    if (chosen == n)
      throw HeuristicFailure("find_generator: no factorbase element has full " + to_string(pf.prime) +
                             "-primary order");
    gen.v_columns.push_back(chosen);
    gen.vec[chosen] = mod(gen.vec[chosen] + E, N);
  }
  gen.mu = phi(gen.vec, setup);
  if (!is_one(pow_g(gen.mu, N, setup))) throw Error("find_generator: mu^N != 1");
  for (const auto& r : prime_divisors(setup))
    if (is_one(pow_g(gen.mu, N / r, setup)))
      throw Error("find_generator: constructed mu does not have order q^{2m}-1");
  return gen;
}

std::optional<BigInt> subgroup_dlog(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                                    const InvariantDecomposition& dec, const FieldSetup& setup) {
  require_condition(dec, setup);
  const BigInt& L = setup.L;
  BigInt jL = 0, mL = 1;
  if (L > 1) {
    const BigInt t1 = mod(project_theta(a, dec), L), t2 = mod(project_theta(b, dec), L);
    const BigInt g = gcd(t2, L);
    if (!mpz_divisible_p(t1.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
    mL = L / g;
    jL = mod((t1 / g) * *inverse_mod(t2 / g, mL), mL);
  }
  const Poly A = phi(a, setup), B = phi(b, setup);
  auto vpart = v_part_log(B, A, setup);
  if (!vpart) return std::nullopt;
  const BigInt j = crt({{jL, mL}, {vpart->first, vpart->second}}).first;
  if (pow_g(B, j, setup) != A) throw Error("subgroup_dlog: result failed verification");
  return j;
}

FactorbaseLogs factorbase_logs(const InvariantDecomposition& dec, const FieldSetup& setup) {
  const Generator gen = find_generator(dec, setup);
  const std::size_t n = dec.size();
  FactorbaseLogs out;
  out.method = LogMethod::Snf;
  out.mu = gen.mu;
  out.mu_vec = gen.vec;
  out.theta.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    auto j = subgroup_dlog(unit_vector(n, c), gen.vec, dec, setup);
    if (!j) throw Error("factorbase_logs: column " + std::to_string(c) + " not in <mu>");
    const Poly beta = phi(unit_vector(n, c), setup);
    if (pow_g(out.mu, *j, setup) != beta)
      throw Error("factorbase_logs: verification failed at column " + std::to_string(c));
    out.theta[c] = *j;
  }
  return out;
}

AlgIIResult algII_solve(const RelationMatrix& R, const FieldSetup& setup) {
  const std::size_t n = R.columns;
  const BigInt N = setup.group_order();
  const PolyRing ring = setup.ring();
  AlgIIResult out;
  out.logs.assign(n, 0);
  out.alpha_L = ring.constant(FieldTower::one());
  if (setup.L == 1) return out;

  const IntMatrix M = relation_matrix(R);
  const ModSplitResult split = gcd_split_reduce(M, setup.L, n - 1, n);
  std::vector<std::vector<BigInt>> block_logs;
  for (const ModBlock& b : split.blocks) {
    const BigInt& Li = b.modulus;
    for (std::size_t i = n - 1; i < M.rows(); ++i)
      if (b.reduced(i, n - 1) != 0)
        throw HeuristicFailure("algII: relations have full rank modulo " + to_string(Li));
    std::vector<BigInt> y(n, 0);
    y[n - 1] = 1;
    for (std::size_t j = n - 1; j-- > 0;) {
      BigInt s = 0;
      for (std::size_t l = j + 1; l < n; ++l) s += b.reduced(j, l) * y[l];
      y[j] = mod(-s * *inverse_mod(b.reduced(j, j), Li), Li);
    }
    std::vector<BigInt> logs(n);
    for (std::size_t j = 0; j < n; ++j) logs[b.col_perm[j]] = y[j];

    const BigInt cof = N / Li;
    const BigInt e = cof * *inverse_mod(cof, Li);
    AlgIIBlock blk;
    blk.modulus = Li;
    blk.free_column = b.col_perm[n - 1];
    blk.alpha = phi(unit_vector(n, blk.free_column, e), setup);
    if (is_one(blk.alpha))
      throw HeuristicFailure("algII: generator candidate is trivial modulo " + to_string(Li));
    for (std::size_t c = 0; c < n; ++c)
      if (phi(unit_vector(n, c, e), setup) != pow_g(blk.alpha, logs[c], setup))
        throw Error("algII: log of column " + std::to_string(c) + " failed verification modulo " + to_string(Li));
    out.alpha_L = ring.mulmod(out.alpha_L, blk.alpha, setup.g);
    out.blocks.push_back(std::move(blk));
    block_logs.push_back(std::move(logs));
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::pair<BigInt, BigInt>> res;
    for (std::size_t i = 0; i < out.blocks.size(); ++i) res.push_back({block_logs[i][c], out.blocks[i].modulus});
    out.logs[c] = crt(res).first;
  }
  return out;
}

std::optional<std::size_t> cross_check(const FactorbaseLogs& logs, const AlgIIResult& alg2, const FieldSetup& setup) {
  const BigInt& L = setup.L;
  if (L == 1) return std::nullopt;
  std::vector<std::pair<BigInt, BigInt>> res;
  for (const auto& b : alg2.blocks) res.push_back({mod(logs.theta[b.free_column], b.modulus), b.modulus});
  const BigInt k = crt(res).first;
  for (std::size_t c = 0; c < logs.theta.size(); ++c)
    if (mod(logs.theta[c] - alg2.logs[c] * k, L) != 0) return c;
  return std::nullopt;
}

BigInt log_with_lpart(const Poly& gamma, const BigInt& lpart, const FactorbaseLogs& logs, const FieldSetup& setup) {
  auto vpart = v_part_log(logs.mu, gamma, setup);
  if (!vpart) throw Error("log_with_lpart: element not in <mu> (mu is not a generator)");
  const BigInt x = crt({{mod(lpart, setup.L), setup.L}, {vpart->first, vpart->second}}).first;
  if (pow_g(logs.mu, x, setup) != setup.ring().rem(gamma, setup.g))
    throw Error("log_with_lpart: L-part log is inconsistent with the element");
  return x;
}

bool relations_full_rank(const FieldSetup& setup) {
  if (setup.L == 1) return true;
  const RelationMatrix R = generate_all(setup);
  const IntMatrix M = relation_matrix(R);
  for (const auto& f : factor_integer(setup.L))
    if (rank_mod_prime(M, f.prime) + 1 < R.columns) return false;
  return true;
}

}  // namespace ffdlog
