#include "ffdlog/select.hpp"

#include <numeric>

namespace ffdlog {

BigInt FieldSetup::smooth_bound() const { return pow_ui(BigInt(tower->size()), C); }

std::vector<Factor> FieldSetup::cofactors() const {
  std::vector<Factor> out;
  for (const auto& f : h_factorization.factors) {
    if (f.poly == g) {
      if (f.multiplicity > 1) out.push_back({f.poly, f.multiplicity - 1});
      continue;
    }
    out.push_back(f);
  }
  return out;
}

SmoothSplit smooth_split(const BigInt& N, std::uint64_t bound) {
  if (N < 1) throw Error("smooth_split: N must be positive");
  SmoothSplit s;
  s.v = 1;
  BigInt rest = N;
  for (std::uint64_t p : primes_up_to(bound)) {
    if (rest == 1) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= static_cast<unsigned long>(p);
      ++e;
    }
    if (e) {
      const BigInt bp = static_cast<unsigned long>(p);
      s.v *= pow_ui(bp, e);
      s.v_factors.push_back({bp, e});
    }
  }
  s.L = rest;
  return s;
}

BigInt unit_group_order(const Factorization& fac, std::uint32_t Q) {
  if (fac.factors.empty()) throw Error("unit_group_order: constant input");
  BigInt r = 1;
  for (const auto& f : fac.factors) {
    const unsigned d = static_cast<unsigned>(PolyRing::degree(f.poly));
    r *= (pow_ui(BigInt(Q), d) - 1) * pow_ui(BigInt(Q), d * (f.multiplicity - 1));
  }
  return r;
}

BigInt gcd_subfield_identity(std::uint32_t Q, unsigned d, unsigned m) {
  if (d == 0 || m == 0) throw Error("gcd_subfield_identity: degrees must be positive");
  return pow_ui(BigInt(Q), std::gcd(d, m)) - 1;
}

Poly make_h(const PolyRing& ring, const Poly& h0, const Poly& h1) {
  return ring.sub(ring.mul(h1, ring.monomial(FieldTower::one(), ring.field().q())), h0);
}

GoodReport is_good(const PolyRing& ring, const Poly& h0, const Poly& h1, unsigned m, unsigned C) {
  const FieldTower& F = ring.field();
  GoodReport rep;
  rep.h = make_h(ring, h0, h1);
  if (PolyRing::degree(rep.h) < static_cast<int>(m)) {
    rep.failure = "h has degree below m";
    return rep;
  }
  rep.h_factorization = ring.factor(rep.h);
  const auto& fs = rep.h_factorization.factors;

  const Factor* g = nullptr;
  bool repeated_m = false;
  for (const auto& f : fs) {
    if (PolyRing::degree(f.poly) != static_cast<int>(m)) continue;
    if (f.multiplicity == 1) {
      g = &f;
      break;
    }
    repeated_m = true;
  }
  if (!g) {
    rep.failure = repeated_m ? "condition 2: the degree-m factor is repeated"
                             : "condition 1: no irreducible factor of degree m";
    return rep;
  }
  rep.g = g->poly;
  for (const auto& f : fs)
    if (PolyRing::degree(f.poly) == 1) {
      rep.failure = "condition 3: h has a linear factor";
      return rep;
    }

  const std::uint32_t Q = F.size();
  const BigInt N = pow_ui(BigInt(Q), m) - 1;
  const BigInt L = smooth_split(N, to_u64(pow_ui(BigInt(Q), C))).L;
  for (const auto& f : fs) {
    if (&f == g) continue;
    const unsigned d = static_cast<unsigned>(PolyRing::degree(f.poly));
    // The p-power part of the unit group order is coprime to q^{2m}-1.
    if (gcd(gcd_subfield_identity(Q, d, m), L) != 1) {
      rep.failure = "condition 4: gcd(|F_{h/g}^x|, q^{2m}-1) is not smooth";
      rep.offending_degree = static_cast<int>(d);
      return rep;
    }
  }
  if (PolyRing::degree(ring.gcd(h0, h1)) != 0) {
    rep.failure = "gcd(h0, h1) is not 1";
    return rep;
  }
  rep.good = true;
  return rep;
}

namespace {

FieldSetup finish(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D, const Poly& h0,
                  const Poly& h1, GoodReport rep) {
  FieldSetup s;
  s.tower = std::move(tower);
  s.C = C;
  s.D = D;
  s.h0 = h0;
  s.h1 = h1;
  s.h = std::move(rep.h);
  s.g = std::move(rep.g);
  s.h_factorization = std::move(rep.h_factorization);
  const std::uint32_t Q = s.tower->size();
  auto sp = smooth_split(pow_ui(BigInt(Q), s.tower->m()) - 1, to_u64(pow_ui(BigInt(Q), C)));
  s.v = sp.v;
  s.L = sp.L;
  s.v_factors = std::move(sp.v_factors);
  return s;
}

// Cheap rejection before factoring: roots of h and a common factor of h0, h1.
bool prefilter(const PolyRing& ring, const Poly& h0, const Poly& h1) {
  const FieldTower& F = ring.field();
  for (std::uint32_t a = 0; a < F.size(); ++a) {
    const Fq2Elem x{a};
    const Fq2Elem val = F.sub(F.mul(ring.eval(h1, x), F.pow(x, static_cast<std::int64_t>(F.q()))),
                              ring.eval(h0, x));
    if (val.is_zero()) return false;
  }
  if (h0.empty()) return false;
  return PolyRing::degree(ring.gcd(h0, h1)) == 0;
}

}  // namespace

FieldSetup make_setup(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D, const Poly& h0,
                      const Poly& h1) {
  if (C < 1) throw Error("setup: C must be at least 1");
  if (PolyRing::degree(h0) > static_cast<int>(D) || PolyRing::degree(h1) > static_cast<int>(D))
    throw Error("setup: h0 or h1 exceeds the degree bound D");
  PolyRing ring(*tower);
  GoodReport rep = is_good(ring, h0, h1, tower->m(), C);
  if (!rep.good) throw Error("setup: h is not good (" + rep.failure + ")");
  return finish(std::move(tower), C, D, h0, h1, std::move(rep));
}

FieldSetup make_unchecked_setup(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D, const Poly& h0,
                                const Poly& h1) {
  if (C < 1) throw Error("setup: C must be at least 1");
  PolyRing ring(*tower);
  GoodReport rep;
  rep.h = make_h(ring, h0, h1);
  rep.h_factorization = ring.factor(rep.h);
  for (const auto& f : rep.h_factorization.factors)
    if (PolyRing::degree(f.poly) == static_cast<int>(tower->m())) {
      rep.g = f.poly;
      break;
    }
  if (rep.g.empty()) throw Error("setup: h has no irreducible factor of degree m");
  return finish(std::move(tower), C, D, h0, h1, std::move(rep));
}

FieldSetup search_good(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D,
                       const SetupFilter& filter) {
  const FieldTower& F = *tower;
  if (C < 1) throw Error("search_good: C must be at least 1");
  if (F.m() == F.q() && D < 2) throw Error("search_good: m = q requires D >= 2");
  if (F.m() + 1 == F.q() && D < 1) throw Error("search_good: m = q - 1 requires D >= 1");
  PolyRing ring(F);
  const std::uint64_t Q = F.size();
  std::uint64_t h0_count = 1;
  for (unsigned i = 0; i <= D; ++i) h0_count *= Q;

  for (unsigned d1 = 0; d1 <= D; ++d1) {
    std::uint64_t h1_count = 1;
    for (unsigned i = 0; i < d1; ++i) h1_count *= Q;
    for (std::uint64_t c1 = 0; c1 < h1_count; ++c1) {
      Poly h1 = ring.decode(c1);
      h1.resize(d1 + 1, FieldTower::zero());
      h1[d1] = FieldTower::one();
      for (std::uint64_t c0 = 0; c0 < h0_count; ++c0) {
        const Poly h0 = ring.decode(c0);
        if (!prefilter(ring, h0, h1)) continue;
        GoodReport rep = is_good(ring, h0, h1, F.m(), C);
        if (!rep.good) continue;
        FieldSetup s = finish(tower, C, D, h0, h1, std::move(rep));
        if (!filter || filter(s)) return s;
      }
    }
  }
  throw HeuristicFailure("search_good: no good h with deg h0, deg h1 <= " + std::to_string(D));
}

}  // namespace ffdlog
