#include "ffdlog/descent.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ffdlog {

namespace {

Poly h_over_g(const FieldSetup& setup) { return setup.ring().exact_div(setup.h, setup.g); }

std::vector<Poly> trap_factors(const FieldSetup& setup) {
  std::vector<Poly> out;
  for (const auto& f : setup.cofactors()) out.push_back(f.poly);
  return out;
}

// Uniform-ish k in [2, N) with gcd(k, L) = 1.
BigInt random_exponent(const FieldSetup& setup, std::mt19937_64& rng) {
  const BigInt N = setup.group_order();
  if (N <= 2) return 1;
  for (;;) {
    BigInt k = 0;
    for (std::size_t bits = 0; bits < mpz_sizeinbase(N.get_mpz_t(), 2) + 64; bits += 64) {
      k <<= 64;
      k += BigInt(std::to_string(rng()));
    }
    k = mod(k, N - 2) + 2;
    if (gcd(k, setup.L) == 1) return k;
  }
}

// Factorization that also accepts nonzero constants.
Factorization factor_any(const PolyRing& ring, const Poly& f) {
  if (PolyRing::degree(f) == 0) return {f[0], {}};
  return ring.factor(f);
}

}  // namespace

std::size_t DescentNode::columns() const { return (relations.empty() ? 0 : relations[0].translate_exps.size()) + traps.size(); }

DescentNumerator descent_numerator(const CosetRep& m, const Poly& P, const FieldSetup& setup) {
  const PolyRing ring = setup.ring();
  const FieldTower& F = *setup.tower;
  const int w = PolyRing::degree(P);
  if (w < 1) throw Error("descent_numerator: target must have positive degree");
  const Poly Pt = ring.frobenius_coeffs(P);
  // N_P = sum_i Pt_i h0^i h1^(w-i)
  Poly NP;
  for (int i = 0; i <= w; ++i) {
    if (Pt[i].is_zero()) continue;
    NP = ring.add(NP, ring.scale(ring.mul(ring.pow(setup.h0, i), ring.pow(setup.h1, w - i)), Pt[i]));
  }
  const Poly h1w = ring.pow(setup.h1, w);
  auto q = [&](Fq2Elem a) { return F.frobenius(a); };
  const Poly A = ring.add(ring.scale(NP, q(m.a)), ring.scale(h1w, q(m.b)));
  const Poly B = ring.add(ring.scale(NP, q(m.c)), ring.scale(h1w, q(m.d)));
  const Poly aPb = ring.add(ring.scale(P, m.a), ring.constant(m.b));
  const Poly cPd = ring.add(ring.scale(P, m.c), ring.constant(m.d));
  return {ring.sub(ring.mul(A, cPd), ring.mul(aPb, B)), static_cast<unsigned>(w)};
}

Poly stripped_translate(const Poly& P, Fq2Elem beta, const FieldSetup& setup) {
  const PolyRing ring = setup.ring();
  const Poly t = ring.sub(P, ring.constant(beta));
  return ring.exact_div(t, ring.gcd(t, h_over_g(setup)));
}

std::optional<DescentRelation> try_descent_relation(const CosetRep& m, const Poly& P, const FieldSetup& setup,
                                                    RelationMiss* miss) {
  const PolyRing ring = setup.ring();
  const FieldTower& F = *setup.tower;
  auto fail = [&](RelationMiss why) -> std::optional<DescentRelation> {
    if (miss) *miss = why;
    return std::nullopt;
  };
  const DescentNumerator num = descent_numerator(m, P, setup);
  if (num.poly.empty()) return fail(RelationMiss::ZeroNumerator);
  if (ring.divides(setup.g, num.poly)) return fail(RelationMiss::DividedByG);

  const int bound = PolyRing::degree(P) / 2;
  const Poly hg = h_over_g(setup);
  const Factorization fac = factor_any(ring, num.poly);
  std::map<Poly, std::int64_t> traps;
  DescentRelation rel;
  rel.coset = m;
  for (const auto& f : fac.factors) {
    if (ring.divides(f.poly, hg))
      traps[f.poly] -= f.multiplicity;
    else if (PolyRing::degree(f.poly) <= bound)
      rel.rhs.push_back({f.poly, f.multiplicity});
    else
      return fail(RelationMiss::NotSmooth);
  }

  // Left side: (cP+d) prod_alpha ((a - alpha c) P + (b - alpha d)) = K prod (P - beta).
  rel.translate_exps.assign(F.size(), 0);
  Fq2Elem K = FieldTower::one();
  auto take = [&](Fq2Elem A, Fq2Elem B) {
    if (A.is_zero()) {
      K = F.mul(K, B);
      return;
    }
    K = F.mul(K, A);
    const Fq2Elem beta = F.neg(F.div(B, A));
    rel.translate_exps[beta.index] += 1;
  };
  take(m.c, m.d);
  for (Fq2Elem alpha : F.subfield()) take(F.sub(m.a, F.mul(alpha, m.c)), F.sub(m.b, F.mul(alpha, m.d)));

  const std::vector<Poly> gis = trap_factors(setup);
  for (std::uint32_t b = 0; b < F.size(); ++b) {
    if (rel.translate_exps[b] == 0) continue;
    const Poly t = ring.sub(P, ring.constant(F.element(b)));
    Poly common = ring.gcd(t, hg);
    for (const Poly& gi : gis)
      while (PolyRing::degree(common) > 0 && ring.divides(gi, common)) {
        traps[gi] += rel.translate_exps[b];
        common = ring.div(common, gi);
      }
  }
  for (const auto& [gi, s] : traps)
    if (s != 0) rel.traps.push_back({gi, s});
  rel.c_lambda = F.small_dlog(F.div(fac.unit, K));
  rel.c_h1 = -static_cast<std::int64_t>(num.h1_exponent);
  if (miss) *miss = RelationMiss::None;
  return rel;
}

bool verify_descent_relation(const DescentRelation& rel, const Poly& P, const FieldSetup& setup) {
  const PolyRing ring = setup.ring();
  const FieldTower& F = *setup.tower;
  const Poly& g = setup.g;
  Poly lhs = ring.constant(FieldTower::one());
  for (std::uint32_t b = 0; b < rel.translate_exps.size(); ++b)
    if (rel.translate_exps[b] != 0)
      lhs = ring.mulmod(lhs, ring.powmod(stripped_translate(P, F.element(b), setup), rel.translate_exps[b], g), g);
  for (const auto& [gi, s] : rel.traps) lhs = ring.mulmod(lhs, ring.powmod(gi, s, g), g);
  Poly rhs = ring.constant(F.lambda_pow(rel.c_lambda));
  rhs = ring.mulmod(rhs, ring.powmod(setup.h1, rel.c_h1, g), g);
  for (const auto& [u, c] : rel.rhs) rhs = ring.mulmod(rhs, ring.powmod(u, c, g), g);
  return lhs == rhs;
}

std::pair<Poly, BigInt> randomize_if_shared(const Poly& P, const FieldSetup& setup, std::mt19937_64& rng,
                                            unsigned attempts) {
  const PolyRing ring = setup.ring();
  const Poly base = ring.rem(P, setup.g);
  if (base.empty()) throw Error("descent: target is zero modulo g, log undefined");
  if (PolyRing::degree(ring.gcd(base, setup.h)) == 0) return {base, 1};
  for (unsigned i = 0; i < attempts; ++i) {
    const BigInt k = random_exponent(setup, rng);
    Poly r = ring.powmod(base, k, setup.g);
    if (PolyRing::degree(ring.gcd(r, setup.h)) == 0) return {std::move(r), k};
  }
  throw HeuristicFailure("descent: no power of the target coprime to h within the attempt bound");
}

DescentNode build_system(const Poly& P, const FieldSetup& setup, const CosetOptions& cosets) {
  const PolyRing ring = setup.ring();
  DescentNode node;
  node.target = P;
  std::vector<Poly> traps, V;
  for (const CosetRep& m : enumerate_cosets(*setup.tower, cosets)) {
    ++node.cosets_tried;
    RelationMiss miss;
    auto rel = try_descent_relation(m, P, setup, &miss);
    if (!rel) {
      if (miss == RelationMiss::DividedByG) ++node.rejected_by_g;
      continue;
    }
    for (const auto& t : rel->traps) traps.push_back(t.first);
    for (const auto& u : rel->rhs) V.push_back(u.first);
    node.relations.push_back(std::move(*rel));
  }
  if (node.relations.empty())
    throw HeuristicFailure("descent: no relation for " + ring.pretty(P) + " among " +
                           std::to_string(node.cosets_tried) + " cosets");
  auto uniq = [](std::vector<Poly>& v) {
    std::sort(v.begin(), v.end(), canonical_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(traps);
  uniq(V);
  node.traps = std::move(traps);
  node.V = std::move(V);
  for (const Poly& u : node.V)
    if (PolyRing::degree(u) > 1) node.children.push_back(u);
  return node;
}

void solve_step(DescentNode& node, const FieldSetup& setup) {
  const PolyRing ring = setup.ring();
  const FieldTower& F = *setup.tower;
  const std::size_t Q = F.size(), G = node.traps.size(), nv = node.V.size();
  const std::size_t n = Q + G, k = nv + 2;
  node.expression.assign(k, 0);
  if (setup.L == 1) return;

  auto index_of = [](const std::vector<Poly>& v, const Poly& p) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), p, canonical_less) - v.begin());
  };
  IntMatrix M(node.relations.size(), n), C(node.relations.size(), k);
  for (std::size_t r = 0; r < node.relations.size(); ++r) {
    const DescentRelation& rel = node.relations[r];
    for (std::size_t b = 0; b < Q; ++b) M(r, b) = rel.translate_exps[b];
    for (const auto& [gi, s] : rel.traps) M(r, Q + index_of(node.traps, gi)) = s;
    for (const auto& [u, c] : rel.rhs) C(r, index_of(node.V, u)) = c;
    C(r, nv) = rel.c_lambda;
    C(r, nv + 1) = rel.c_h1;
  }
  // Trailing rows are relations among the V_P symbols themselves, not
  // contradictions, so they are not checked.
  const IntMatrix T = solve_mod(M, C, setup.L, false);

  std::vector<Poly> sym(node.V);
  sym.push_back(ring.constant(F.lambda()));
  sym.push_back(setup.h1);
  const BigInt& v = setup.v;
  for (std::size_t j = 0; j < n; ++j) {
    const Poly elem = j < Q ? stripped_translate(node.target, F.element(static_cast<std::uint32_t>(j)), setup)
                            : node.traps[j - Q];
    Poly rhs = ring.constant(FieldTower::one());
    for (std::size_t c = 0; c < k; ++c)
      if (T(j, c) != 0) rhs = ring.mulmod(rhs, ring.powmod(sym[c], v * T(j, c), setup.g), setup.g);
    if (ring.powmod(elem, v, setup.g) != rhs)
      throw Error("solve_step: expression for column " + std::to_string(j) + " of " + ring.pretty(node.target) +
                  " failed verification");
  }
  for (std::size_t c = 0; c < k; ++c) node.expression[c] = T(0, c);
}

DescentResult full_descent(const Poly& P, const FieldSetup& setup, const DescentOptions& opt) {
  const PolyRing ring = setup.ring();
  const FieldTower& F = *setup.tower;
  const FactorBase fb(F);
  const BigInt& L = setup.L;
  const Poly target = ring.rem(P, setup.g);
  if (target.empty()) throw Error("descent: target is zero modulo g");
  if (PolyRing::degree(ring.gcd(target, setup.h)) != 0) throw Error("descent: target shares a factor with h");

  DescentResult out;
  out.exps.assign(fb.size(), 0);
  if (L == 1) return out;

  std::map<Poly, std::vector<BigInt>> memo;
  std::function<std::vector<BigInt>(const Poly&, unsigned)> resolve = [&](const Poly& f, unsigned depth) {
    if (auto it = memo.find(f); it != memo.end()) return it->second;
    std::vector<BigInt> e(fb.size(), 0);
    if (PolyRing::degree(f) == 1) {
      e[FactorBase::linear_column(f[0])] = 1;
      return e;
    }
    out.max_depth = std::max(out.max_depth, depth);
    DescentNode node = build_system(f, setup, opt.cosets);
    node.depth = depth;
    solve_step(node, setup);
    for (std::size_t c = 0; c < node.V.size(); ++c) {
      if (node.expression[c] == 0) continue;
      const auto sub = resolve(node.V[c], depth + 1);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += node.expression[c] * sub[i];
    }
    e[FactorBase::kLambda] += node.expression[node.V.size()];
    e[FactorBase::kH1] += node.expression[node.V.size() + 1];
    for (auto& x : e) x = mod(x, L);
    node.resolved = e;
    out.nodes.push_back(std::move(node));
    memo.emplace(f, e);
    return e;
  };

  const Factorization fac = factor_any(ring, target);
  out.exps[FactorBase::kLambda] = F.small_dlog(fac.unit);
  for (const auto& f : fac.factors) {
    const auto e = resolve(f.poly, 1);
    for (std::size_t i = 0; i < e.size(); ++i) out.exps[i] += f.multiplicity * e[i];
  }
  for (auto& x : out.exps) x = mod(x, L);
  return out;
}

TargetLog target_log(const Poly& gamma, const FieldSetup& setup, const FactorbaseLogs& logs,
                     const DescentOptions& opt) {
  const PolyRing ring = setup.ring();
  const BigInt& L = setup.L;
  std::mt19937_64 rng(opt.seed);
  const Poly G = ring.rem(gamma, setup.g);
  if (G.empty()) throw Error("dlog: element is zero modulo g");
  std::string last;
  TargetLog out;
  for (unsigned attempt = 0; attempt <= opt.retries; ++attempt) {
    ++out.attempts;
    try {
      BigInt k = 1;
      Poly P = G;
      if (attempt > 0) {
        k = random_exponent(setup, rng);
        P = ring.powmod(G, k, setup.g);
      }
      auto [Pc, k2] = randomize_if_shared(P, setup, rng, opt.coprime_attempts);
      k *= k2;
      out.descent = full_descent(Pc, setup, opt);
      BigInt lp = 0;
      for (std::size_t c = 0; c < out.descent.exps.size(); ++c) lp += out.descent.exps[c] * logs.theta[c];
      const BigInt lpart = L == 1 ? BigInt(0) : mod(lp * *inverse_mod(k, L), L);
      out.log = log_with_lpart(G, lpart, logs, setup);
      return out;
    } catch (const HeuristicFailure& e) {
      last = e.what();
    }
  }
  throw HeuristicFailure("descent: retry budget exhausted after " + std::to_string(out.attempts) +
                         " attempts; last failure: " + last);
}

DlogResult dlog(const Poly& gamma, const Poly& eta, const FieldSetup& setup, const FactorbaseLogs& logs,
                const DescentOptions& opt) {
  DlogResult out;
  out.gamma = target_log(gamma, setup, logs, opt);
  out.eta = target_log(eta, setup, logs, opt);
  const BigInt N = setup.group_order();
  const BigInt d = gcd(out.eta.log, N);
  if (!mpz_divisible_p(out.gamma.log.get_mpz_t(), d.get_mpz_t())) return out;
  const BigInt Nd = N / d;
  const BigInt x = Nd == 1 ? BigInt(0) : mod((out.gamma.log / d) * *inverse_mod(out.eta.log / d, Nd), Nd);
  const PolyRing ring = setup.ring();
  if (ring.powmod(eta, x, setup.g) != ring.rem(gamma, setup.g))
    throw Error("dlog: claimed log failed verification");
  out.x = x;
  return out;
}

std::string descent_trace(const DescentResult& r, const FieldSetup& setup) {
  const PolyRing ring = setup.ring();
  const FactorBase fb(*setup.tower);
  std::ostringstream os;
  for (const DescentNode& n : r.nodes) {
    os << "node " << ring.to_text(n.target) << "\n";
    os << "  degree " << PolyRing::degree(n.target) << " depth " << n.depth << "\n";
    os << "  cosets " << n.cosets_tried << " relations " << n.relations.size() << " rejected_by_g "
       << n.rejected_by_g << "\n";
    os << "  G_P " << n.traps.size();
    for (const Poly& t : n.traps) os << " " << ring.to_text(t);
    os << "\n  V_P " << n.V.size() << "\n  children";
    for (const Poly& c : n.children) os << " " << ring.to_text(c);
    os << "\n  resolved";
    for (std::size_t c = 0; c < n.resolved.size(); ++c)
      if (n.resolved[c] != 0) os << " " << fb.label(c, ring) << ":" << n.resolved[c];
    os << "\nend\n";
  }
  os << "exps";
  for (std::size_t c = 0; c < r.exps.size(); ++c)
    if (r.exps[c] != 0) os << " " << fb.label(c, ring) << ":" << r.exps[c];
  os << "\n";
  return os.str();
}

}  // namespace ffdlog
