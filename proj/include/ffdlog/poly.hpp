#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffdlog/field_tower.hpp"

namespace ffdlog {

/// Dense polynomial over F_{q^2}, ascending degree, no trailing zeros. The
/// zero polynomial is the empty vector.
using Poly = std::vector<Fq2Elem>;

struct Factor {
  Poly poly;  // monic irreducible
  unsigned multiplicity = 1;
};

struct Factorization {
  Fq2Elem unit = FieldTower::one();
  std::vector<Factor> factors;
};

/// unit * prod (x + theta)^mult.
struct LinearSplit {
  Fq2Elem unit = FieldTower::one();
  std::vector<std::pair<Fq2Elem, unsigned>> linears;  // (theta, mult), theta ascending
};

/// Canonical ordering: degree first, then coefficients in ascending-degree order.
std::strong_ordering canonical_compare(const Poly& a, const Poly& b);
inline bool canonical_less(const Poly& a, const Poly& b) { return canonical_compare(a, b) < 0; }

class PolyRing {
 public:
  explicit PolyRing(const FieldTower& field) : F_(field) {}

  const FieldTower& field() const { return F_; }

  /// -1 for the zero polynomial.
  static int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }
  static void normalize(Poly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
  }
  static Fq2Elem lead(const Poly& f) { return f.empty() ? FieldTower::zero() : f.back(); }

  Poly constant(Fq2Elem c) const;
  Poly x() const { return {FieldTower::zero(), FieldTower::one()}; }
  /// x + theta.
  Poly linear(Fq2Elem theta) const { return {theta, FieldTower::one()}; }
  Poly monomial(Fq2Elem c, unsigned k) const;

  Poly add(const Poly& a, const Poly& b) const;
  Poly sub(const Poly& a, const Poly& b) const;
  Poly neg(const Poly& a) const;
  Poly scale(const Poly& a, Fq2Elem c) const;
  Poly mul(const Poly& a, const Poly& b) const;
  Poly pow(const Poly& a, unsigned k) const;
  /// (quotient, remainder); throws on a zero divisor.
  std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) const;
  Poly div(const Poly& a, const Poly& b) const { return divrem(a, b).first; }
  Poly rem(const Poly& a, const Poly& b) const;
  /// Exact division; throws if b does not divide a.
  Poly exact_div(const Poly& a, const Poly& b) const;
  bool divides(const Poly& d, const Poly& a) const { return rem(a, d).empty(); }
  Fq2Elem eval(const Poly& f, Fq2Elem at) const;

  Poly mulmod(const Poly& a, const Poly& b, const Poly& mod) const { return rem(mul(a, b), mod); }
  Poly powmod(const Poly& a, const BigInt& k, const Poly& mod) const;
  /// Inverse modulo `mod`; nullopt when not a unit.
  std::optional<Poly> invmod(const Poly& a, const Poly& mod) const;

  Poly monic(const Poly& f) const;
  Poly derivative(const Poly& f) const;
  /// Monic gcd; throws when both inputs are zero.
  Poly gcd(const Poly& a, const Poly& b) const;
  /// Coefficient-wise q-th power.
  Poly frobenius_coeffs(const Poly& f) const;
  /// f(g(x)).
  Poly compose(const Poly& f, const Poly& g) const;

  /// Complete factorization into monic irreducibles, canonical order.
  Factorization factor(const Poly& f) const;
  Poly expand(const Factorization& fac) const;
  bool is_irreducible(const Poly& f) const;
  /// Root search; nullopt unless every irreducible factor is linear. A nonzero
  /// constant splits with no linears.
  std::optional<LinearSplit> splits_into_linears(const Poly& f) const;

  /// Base-Q integer encoding sum c_i.index * Q^i, used for hashing and tables.
  std::uint64_t encode(const Poly& f) const;
  Poly decode(std::uint64_t code) const;

  /// Space-separated coefficient tokens, ascending degree, each the base-p
  /// digit string of the coordinates (lowest coordinate first).
  std::string to_text(const Poly& f) const;
  Poly from_text(const std::string& text) const;
  std::string elem_to_text(Fq2Elem a) const;
  Fq2Elem elem_from_text(const std::string& token) const;

  /// Human readable form, e.g. "x^2 + [01]x + [1]".
  std::string pretty(const Poly& f) const;

 private:
  std::vector<Poly> berlekamp_split(const Poly& f) const;
  void squarefree_factor(const Poly& f, unsigned scale, std::vector<Factor>& out) const;

  const FieldTower& F_;
};

}  // namespace ffdlog
