#pragma once

#include <functional>
#include <memory>
#include <string>

#include "ffdlog/poly.hpp"

namespace ffdlog {

/// A validated configuration h = h1 x^q - h0 with its degree-m factor g and the
/// split q^{2m} - 1 = v L into smooth and rough parts.
struct FieldSetup {
  std::shared_ptr<const FieldTower> tower;
  unsigned C = 0;
  unsigned D = 0;
  Poly h0, h1, h, g;
  Factorization h_factorization;
  BigInt v, L;
  IntFactors v_factors;

  PolyRing ring() const { return PolyRing(*tower); }
  /// q^{2m} - 1.
  BigInt group_order() const { return v * L; }
  /// q^{2C}.
  BigInt smooth_bound() const;
  /// Irreducible factors of h other than g, with multiplicity.
  std::vector<Factor> cofactors() const;
};

struct SmoothSplit {
  BigInt v, L;
  IntFactors v_factors;
};

/// v is the largest divisor of N whose primes are all <= bound.
SmoothSplit smooth_split(const BigInt& N, std::uint64_t bound);

/// prod (Q^d - 1) Q^{d(a-1)} over factors of degree d and multiplicity a, Q = q^2.
BigInt unit_group_order(const Factorization& fac, std::uint32_t Q);

/// gcd(Q^d - 1, Q^m - 1) = Q^{gcd(d,m)} - 1.
BigInt gcd_subfield_identity(std::uint32_t Q, unsigned d, unsigned m);

struct GoodReport {
  bool good = false;
  /// Empty when good, otherwise names the first failing condition.
  std::string failure;
  Poly h, g;
  Factorization h_factorization;
  /// Degree of the cofactor whose gcd with q^{2m}-1 is not smooth (condition 4).
  int offending_degree = -1;
};

/// Checks, in order: a degree-m irreducible factor g exists; g^2 does not
/// divide h; no linear factors; gcd(|F_{h/g}^x|, q^{2m}-1) is q^{2C}-smooth;
/// and gcd(h0, h1) = 1.
GoodReport is_good(const PolyRing& ring, const Poly& h0, const Poly& h1, unsigned m, unsigned C);

/// h1 x^q - h0.
Poly make_h(const PolyRing& ring, const Poly& h0, const Poly& h1);

/// Extra acceptance test applied to good setups during the search.
using SetupFilter = std::function<bool(const FieldSetup&)>;

/// First good pair in the fixed enumeration order: monic h1 by degree then
/// code, h0 by code over all polynomials of degree <= D. When `filter` is set,
/// good setups it rejects are skipped.
FieldSetup search_good(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D,
                       const SetupFilter& filter = {});

/// Builds a setup around any h with a degree-m irreducible factor, without
/// the goodness checks (obstruction experiments).
FieldSetup make_unchecked_setup(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D, const Poly& h0,
                                const Poly& h1);

/// Builds a setup from explicit h0, h1; throws if the pair is not good.
FieldSetup make_setup(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D, const Poly& h0,
                      const Poly& h1);

}  // namespace ffdlog
