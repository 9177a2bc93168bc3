#include "ffdlog/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ffdlog {

std::uint64_t LogTable::log_of(const PolyRing& ring, const Poly& reduced) const {
  const std::uint64_t code = ring.encode(reduced);
  if (code >= logs.size() || logs[code] == kNoLog) throw Error("log table: element not in table");
  return logs[code];
}

namespace {

bool is_one(const Poly& p) { return p.size() == 1 && p[0] == FieldTower::one(); }

bool has_full_order(const PolyRing& ring, const Poly& a, const BigInt& N, const IntFactors& fac, const Poly& g) {
  if (ring.rem(a, g).empty()) return false;
  for (const auto& f : fac)
    if (is_one(ring.powmod(a, N / f.prime, g))) return false;
  return true;
}

// Dense residue walk for generators x + c: one shift and one scaled add per step.
void walk_linear(const FieldTower& F, const Poly& g, Fq2Elem c, std::uint64_t N, std::vector<std::uint32_t>& logs) {
  const std::size_t m = g.size() - 1;
  const std::uint64_t Q = F.size();
  std::vector<Fq2Elem> cur(m, FieldTower::zero()), next(m);
  cur[0] = FieldTower::one();
  for (std::uint64_t k = 0; k < N; ++k) {
    std::uint64_t code = 0;
    for (std::size_t i = m; i-- > 0;) code = code * Q + cur[i].index;
    if (logs[code] != LogTable::kNoLog) throw Error("brute_logs: walk revisited an element");
    logs[code] = static_cast<std::uint32_t>(k);
    const Fq2Elem top = cur[m - 1];
    for (std::size_t i = 0; i < m; ++i) {
      Fq2Elem s = i ? cur[i - 1] : FieldTower::zero();
      s = F.sub(s, F.mul(top, g[i]));
      next[i] = F.add(s, F.mul(c, cur[i]));
    }
    cur.swap(next);
  }
}

}  // namespace

LogTable brute_logs(const FieldSetup& setup, std::uint64_t bound) {
  const PolyRing ring = setup.ring();
  const FieldTower& F = *setup.tower;
  const BigInt N = setup.group_order();
  if (N > bound || N >= LogTable::kNoLog) throw Error("brute_logs: group order " + to_string(N) + " exceeds bound");
  const std::uint64_t n = to_u64(N);
  const Poly g = ring.monic(setup.g);
  const IntFactors fac = factor_integer(N);

  LogTable t;
  t.order = n;
  t.logs.assign(n + 1, LogTable::kNoLog);
  for (std::uint32_t c = 0; c < F.size(); ++c) {
    const Poly cand = ring.linear(F.element(c));
    if (!has_full_order(ring, cand, N, fac, g)) continue;
    t.generator = cand;
    walk_linear(F, g, F.element(c), n, t.logs);
    return t;
  }
  for (std::uint64_t code = 2; code <= n; ++code) {
    const Poly cand = ring.decode(code);
    if (!has_full_order(ring, cand, N, fac, g)) continue;
    t.generator = cand;
    Poly cur = ring.constant(FieldTower::one());
    for (std::uint64_t k = 0; k < n; ++k) {
      auto& slot = t.logs[ring.encode(cur)];
      if (slot != LogTable::kNoLog) throw Error("brute_logs: walk revisited an element");
      slot = static_cast<std::uint32_t>(k);
      cur = ring.mulmod(cur, cand, g);
    }
    return t;
  }
  throw Error("brute_logs: no primitive element found");
}

namespace {

unsigned valuation(BigInt n, const BigInt& l) {
  unsigned a = 0;
  while (n != 0 && mpz_divisible_p(n.get_mpz_t(), l.get_mpz_t())) {
    n /= l;
    ++a;
  }
  return a;
}

// Invariant factors of (Y + diag(D) Z^k) / diag(D) Z^k, all > 1.
std::vector<BigInt> subgroup_invariants(const std::vector<std::vector<BigInt>>& Y, const std::vector<BigInt>& D) {
  const std::size_t k = D.size();
  IntMatrix M(Y.size() + k, k);
  for (std::size_t i = 0; i < Y.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) M(i, j) = Y[i][j];
  for (std::size_t j = 0; j < k; ++j) M(Y.size() + j, j) = D[j];
  const InvariantDecomposition dec = snf(M, {.track_u = false});
  // The lattice has basis diag(d) V^{-1}; the relations of the quotient are
  // diag(D) in that basis: D V diag(d)^{-1}.
  IntMatrix X(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const BigInt num = D[i] * dec.V(i, j);
      if (!mpz_divisible_p(num.get_mpz_t(), dec.diag[j].get_mpz_t()))
        throw Error("group_structure: lattice basis change is not integral");
      X(i, j) = num / dec.diag[j];
    }
  std::vector<BigInt> out;
  for (const BigInt& d : snf(X, {.track_u = false}).diag)
    if (abs(d) > 1) out.push_back(abs(d));
  return out;
}

// Exponents of a finite abelian p-group from |G[p^k]| = p^{sum min(k, e_i)}.
std::vector<BigInt> p_group_invariants(const std::vector<std::size_t>& kernel_logs, const BigInt& p) {
  // kernel_logs[k] = log_p |G[p^k]|, k = 0, 1, ...
  std::vector<BigInt> out;
  for (std::size_t k = 1; k < kernel_logs.size(); ++k) {
    const std::size_t at_least_k = kernel_logs[k] - kernel_logs[k - 1];
    const std::size_t at_least_next = k + 1 < kernel_logs.size() ? kernel_logs[k + 1] - kernel_logs[k] : 0;
    for (std::size_t i = at_least_next; i < at_least_k; ++i) out.push_back(pow_ui(p, k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PrimeReport l_part(const FieldSetup& setup, const std::vector<Poly>& fb, const BigInt& l) {
  const PolyRing ring = setup.ring();
  const std::uint32_t Q = setup.tower->size();
  const Poly one = ring.constant(FieldTower::one());
  PrimeReport rep;
  rep.prime = l;
  std::vector<std::vector<BigInt>> Y(fb.size());
  std::vector<BigInt> D;
  for (const auto& f : setup.h_factorization.factors) {
    const unsigned d = static_cast<unsigned>(PolyRing::degree(f.poly));
    const BigInt n = pow_ui(BigInt(Q), d) - 1;
    const unsigned a = valuation(n, l);
    if (a == 0) continue;
    const BigInt la = pow_ui(l, a);
    const BigInt cof = n / la;
    auto mul = [&](const Poly& x, const Poly& y) { return ring.mulmod(x, y, f.poly); };
    auto pw = [&](const Poly& x, const BigInt& k) { return ring.powmod(x, k, f.poly); };
    Poly u;
    for (std::uint64_t code = 1;; ++code) {
      const Poly w = ring.decode(code);
      if (PolyRing::degree(w) >= static_cast<int>(d)) throw Error("group_structure: no l-primary generator");
      u = pw(w, cof);
      if (!is_one(pw(u, la / l))) break;
    }
    for (std::size_t c = 0; c < fb.size(); ++c) {
      const Poly b = pw(ring.rem(fb[c], f.poly), cof);
      auto r = pohlig_hellman_order(u, b, IntFactors{{l, a}}, one, mul, pw);
      if (!r) throw Error("group_structure: l-component outside the cyclic l-part");
      Y[c].push_back(r->first);
    }
    D.push_back(la);
  }
  if (!D.empty()) rep.invariants = subgroup_invariants(Y, D);
  rep.cyclic = rep.invariants.size() <= 1;
  return rep;
}

std::vector<BigInt> closure_p_part(const FieldSetup& setup, const std::vector<Poly>& fb, const BigInt& unit_order,
                                   std::uint64_t bound) {
  const PolyRing ring = setup.ring();
  const BigInt p = setup.tower->p();
  BigInt cof = unit_order;
  while (mpz_divisible_p(cof.get_mpz_t(), p.get_mpz_t())) cof /= p;
  std::vector<Poly> gens;
  for (const Poly& b : fb) {
    Poly t = ring.powmod(b, cof, setup.h);
    if (!is_one(t)) gens.push_back(std::move(t));
  }
  const Poly one = ring.constant(FieldTower::one());
  std::set<Poly> seen{one};
  std::vector<Poly> frontier{one};
  while (!frontier.empty()) {
    std::vector<Poly> next;
    for (const Poly& a : frontier)
      for (const Poly& g : gens) {
        Poly b = ring.mulmod(a, g, setup.h);
        if (seen.insert(b).second) next.push_back(std::move(b));
      }
    if (seen.size() > bound) throw Error("group_structure: p-part closure exceeds bound");
    frontier.swap(next);
  }
  std::vector<std::size_t> by_order;  // elements of order exactly p^k
  for (const Poly& a : seen) {
    std::size_t k = 0;
    for (Poly y = a; !is_one(y); y = ring.powmod(y, p, setup.h)) ++k;
    if (by_order.size() <= k) by_order.resize(k + 1, 0);
    ++by_order[k];
  }
  std::vector<std::size_t> kernel_logs;
  std::size_t acc = 0;
  for (std::size_t k = 0; k < by_order.size(); ++k) {
    acc += by_order[k];
    std::size_t lg = 0;
    for (BigInt s = acc; s > 1; s /= p) ++lg;
    kernel_logs.push_back(lg);
  }
  return p_group_invariants(kernel_logs, p);
}

}  // namespace

GroupStructureReport group_structure(const FieldSetup& setup, const RelationMatrix* R,
                                     const GroupStructureOptions& opt) {
  const PolyRing ring = setup.ring();
  const FactorBase fbase(*setup.tower);
  const std::uint32_t Q = setup.tower->size();
  GroupStructureReport out;
  out.factorbase_size = fbase.size();
  out.unit_group_order = unit_group_order(setup.h_factorization, Q);

  std::vector<Poly> fb;
  for (std::size_t c = 0; c < fbase.size(); ++c) {
    Poly e = ring.rem(fbase.element(c, setup), setup.h);
    if (!ring.invmod(e, setup.h)) throw Error("group_structure: " + fbase.label(c, ring) + " is not a unit mod h");
    fb.push_back(std::move(e));
  }

  std::set<BigInt> primes;
  std::set<unsigned> degrees;
  bool squarefree = true;
  for (const auto& f : setup.h_factorization.factors) {
    degrees.insert(static_cast<unsigned>(PolyRing::degree(f.poly)));
    if (f.multiplicity > 1) squarefree = false;
  }
  for (unsigned d : degrees)
    for (const auto& pf : factor_integer(pow_ui(BigInt(Q), d) - 1)) primes.insert(pf.prime);
  std::set<BigInt> l_primes;
  if (setup.L > 1)
    for (const auto& pf : factor_integer(setup.L)) l_primes.insert(pf.prime);

  std::optional<IntMatrix> Rm;
  if (R) Rm = relation_matrix(*R);

  std::map<BigInt, std::vector<BigInt>> parts;
  for (const BigInt& l : primes) {
    const bool needed = l_primes.count(l) > 0;
    if (!needed && l > opt.prime_bound) {
      out.complete = false;
      continue;
    }
    PrimeReport rep = l_part(setup, fb, l);
    if (needed && Rm) {
      rep.rank_checked = true;
      rep.rank = rank_mod_prime(*Rm, l);
    }
    parts[l] = rep.invariants;
    out.primes.push_back(std::move(rep));
  }
  if (!squarefree) {
    PrimeReport rep;
    rep.prime = setup.tower->p();
    rep.invariants = closure_p_part(setup, fb, out.unit_group_order, opt.closure_bound);
    rep.cyclic = rep.invariants.size() <= 1;
    parts[rep.prime] = rep.invariants;
    out.primes.push_back(std::move(rep));
  }

  for (const auto& [l, inv] : parts)
    for (const BigInt& d : inv) out.order *= d;
  if (out.complete) {
    std::size_t len = 0;
    for (const auto& [l, inv] : parts) len = std::max(len, inv.size());
    out.invariants.assign(len, 1);
    for (const auto& [l, inv] : parts) {
      // inv is ascending; align its largest entry with the last slot.
      for (std::size_t i = 0; i < inv.size(); ++i) out.invariants[len - inv.size() + i] *= inv[i];
    }
  }
  return out;
}

ObstructionReport obstruction_probe(const FieldSetup& candidate, const RelgenOptions& opt) {
  ObstructionReport out;
  const RelationMatrix R = generate_all(candidate, opt);
  out.relation_rows = R.rows.size();
  out.structure = group_structure(candidate, &R);
  const PolyRing ring = candidate.ring();
  std::ostringstream os;
  os << "h = " << ring.pretty(candidate.h) << "\n";
  for (const auto& f : candidate.h_factorization.factors)
    os << "  factor deg " << PolyRing::degree(f.poly) << " mult " << f.multiplicity << ": " << ring.pretty(f.poly)
       << "\n";
  os << "relations " << R.rows.size() << " over " << R.columns << " columns\n";
  for (const auto& pr : out.structure.primes) {
    if (!pr.rank_checked) continue;
    const bool non_cyclic = !pr.cyclic;
    const bool deficient = pr.rank + 1 < R.columns;
    out.predicate = out.predicate || non_cyclic;
    out.rank_deficient = out.rank_deficient || deficient;
    os << "l = " << pr.prime << ": l-part invariants [";
    for (std::size_t i = 0; i < pr.invariants.size(); ++i) os << (i ? " " : "") << pr.invariants[i];
    os << "] " << (non_cyclic ? "non-cyclic" : "cyclic") << ", rank " << pr.rank << " of " << R.columns - 1 << "\n";
  }
  os << "predicate " << (out.predicate ? "true" : "false") << ", rank deficient "
     << (out.rank_deficient ? "true" : "false") << ", " << (out.consistent() ? "consistent" : "INCONSISTENT")
     << "\n";
  out.text = os.str();
  return out;
}

std::string verify_logs(const FactorbaseLogs& logs, const FieldSetup& setup, const LogTable& table) {
  const PolyRing ring = setup.ring();
  const FactorBase fb(*setup.tower);
  const BigInt N = setup.group_order();
  const BigInt t_mu = table.log_of(ring, ring.rem(logs.mu, setup.g));
  for (std::size_t c = 0; c < logs.theta.size(); ++c) {
    const BigInt t = table.log_of(ring, ring.rem(fb.element(c, setup), setup.g));
    if (mod(t - logs.theta[c] * t_mu, N) != 0)
      return "column " + fb.label(c, ring) + ": table log " + to_string(t) + ", theta " + to_string(logs.theta[c]);
  }
  return {};
}

}  // namespace ffdlog

namespace ffdlog {

Poly random_poly(const FieldTower& F, unsigned d, std::mt19937_64& rng) {
  Poly P;
  for (unsigned i = 0; i < d; ++i) P.push_back(F.element(static_cast<std::uint32_t>(rng() % F.size())));
  P.push_back(F.element(static_cast<std::uint32_t>(1 + rng() % (F.size() - 1))));
  return P;
}

PipelineReport verify_pipeline(const FieldSetup& setup, const RelationMatrix& R, const LogTable& table,
                               const PipelineOptions& opt) {
  const PolyRing ring = setup.ring();
  const FieldTower& F = *setup.tower;
  PipelineReport rep;
  auto fail = [&](const std::string& why) {
    rep.ok = false;
    if (rep.witness.empty()) rep.witness = why;
  };
  FactorbaseLogs logs;
  try {
    const InvariantDecomposition dec = snf(relation_matrix(R));
    logs = factorbase_logs(dec, setup);
    const AlgIIResult alg2 = algII_solve(R, setup);
    if (auto c = cross_check(logs, alg2, setup))
      fail("solvers disagree at column " + FactorBase(F).label(*c, ring));
  } catch (const std::exception& e) {
    fail(std::string("factorbase stage: ") + e.what());
    return rep;
  }
  if (std::string w = verify_logs(logs, setup, table); !w.empty()) fail(w);

  const BigInt N = setup.group_order();
  const unsigned top = std::min(opt.max_degree, F.m() - 1);
  const unsigned bottom = std::min(opt.min_degree, top);
  std::mt19937_64 rng(opt.seed);
  for (std::size_t i = 0; i < opt.dlog_samples; ++i) {
    Poly gamma, eta;
    do gamma = random_poly(F, bottom + static_cast<unsigned>(rng() % (top - bottom + 1)), rng);
    while (ring.rem(gamma, setup.g).empty());
    do eta = random_poly(F, bottom + static_cast<unsigned>(rng() % (top - bottom + 1)), rng);
    while (ring.rem(eta, setup.g).empty());
    DescentOptions dopt = opt.descent;
    dopt.seed = opt.seed + i;
    try {
      const DlogResult r = dlog(gamma, eta, setup, logs, dopt);
      ++rep.dlog_answered;
      const BigInt tg = table.log_of(ring, ring.rem(gamma, setup.g));
      const BigInt te = table.log_of(ring, ring.rem(eta, setup.g));
      const BigInt gte = gcd(te, N);
      const bool member = mpz_divisible_p(tg.get_mpz_t(), gte.get_mpz_t()) != 0;
      const bool match = r.x ? mod(te * *r.x - tg, N) == 0 : !member;
      if (!match) {
        ++rep.dlog_mismatch;
        fail("dlog mismatch for gamma = " + ring.pretty(gamma) + ", eta = " + ring.pretty(eta));
      }
      for (const TargetLog* t : {&r.gamma, &r.eta})
        for (const DescentNode& n : t->descent.nodes) {
          const unsigned w = static_cast<unsigned>(PolyRing::degree(n.target));
          unsigned lg = 0;
          while ((1u << lg) < w) ++lg;
          if (n.depth > lg + 1) rep.depth_ok = false;
          rep.max_depth = std::max(rep.max_depth, n.depth);
          rep.max_v_ratio = std::max(rep.max_v_ratio, double(n.V.size()) / (double(F.size()) * w));
        }
    } catch (const HeuristicFailure&) {
      ++rep.dlog_failed;
    } catch (const std::exception& e) {
      ++rep.dlog_mismatch;
      fail(std::string("dlog error: ") + e.what());
    }
  }
  return rep;
}

}  // namespace ffdlog

namespace ffdlog {

FieldSetup search_obstruction(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D) {
  const PolyRing ring(*tower);
  const std::uint64_t Q = tower->size();
  const int m = static_cast<int>(tower->m());
  std::uint64_t h0_codes = 1;
  for (unsigned i = 0; i <= D; ++i) h0_codes *= Q;
  for (unsigned d1 = 0; d1 <= D; ++d1) {
    std::uint64_t h1_codes = 1;
    for (unsigned i = 0; i < d1; ++i) h1_codes *= Q;
    for (std::uint64_t c1 = 0; c1 < h1_codes; ++c1) {
      Poly h1 = ring.decode(c1);
      h1.resize(d1 + 1, FieldTower::zero());
      h1[d1] = FieldTower::one();
      for (std::uint64_t c0 = 1; c0 < h0_codes; ++c0) {
        const Poly h0 = ring.decode(c0);
        if (PolyRing::degree(ring.gcd(h0, h1)) != 0) continue;
        const Poly h = make_h(ring, h0, h1);
        if (PolyRing::degree(h) < 2 * m) continue;
        if (ring.splits_into_linears(h)) continue;
        const Factorization fac = ring.factor(h);
        int top = 0;
        bool linear = false;
        for (const auto& f : fac.factors) {
          if (PolyRing::degree(f.poly) == 1) linear = true;
          if (PolyRing::degree(f.poly) == m) ++top;
        }
        if (!linear && top >= 2) return make_unchecked_setup(tower, C, D, h0, h1);
      }
    }
  }
  throw HeuristicFailure("search_obstruction: no h with two degree-m factors within the degree bound");
}

}  // namespace ffdlog
