#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ffdlog/numtheory.hpp"

namespace ffdlog {

/// Element of F_{q^2}. `index` packs the coordinate vector over F_p in base p,
/// coordinate 0 least significant, so index order is coordinate-lexicographic.
struct Fq2Elem {
  std::uint32_t index = 0;

  constexpr bool is_zero() const { return index == 0; }
  friend constexpr auto operator<=>(Fq2Elem, Fq2Elem) = default;
};

/// F_p ⊂ F_{q^2} with q = p^e, represented as F_p[u]/(f) with deg f = 2e, plus
/// the degree parameter m of the target field F_{q^{2m}} and a fixed generator
/// lambda of F_{q^2}^x. Immutable after construction; all arithmetic is
/// table driven.
class FieldTower {
 public:
  static constexpr std::uint32_t kMaxQ = 32;

  /// Embedding mode: q = p^ceil(log_p n), m the largest multiple of n in (q/2, q].
  static FieldTower build(std::uint32_t p, std::uint32_t n);
  /// Any 2 < m <= q with q = p^e.
  static FieldTower standalone(std::uint32_t p, std::uint32_t e, std::uint32_t m);
  /// F_{q^2} alone with m = 0, for computations that never touch F_{q^{2m}}
  /// (coset enumeration). Admits q = 2, where no valid m exists.
  static FieldTower field_only(std::uint32_t p, std::uint32_t e);
  /// Rebuilds a tower from serialized parameters; `modulus` holds the F_p
  /// coefficients of the defining polynomial in ascending degree.
  static FieldTower from_parts(std::uint32_t p, std::uint32_t e, std::uint32_t m,
                               std::vector<std::uint32_t> modulus);

  std::uint32_t p() const { return p_; }
  std::uint32_t e() const { return e_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t m() const { return m_; }
  /// Target degree in embedding mode, 0 for standalone towers.
  std::uint32_t n() const { return n_; }
  /// q^2.
  std::uint32_t size() const { return size_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  static constexpr Fq2Elem zero() { return {0}; }
  static constexpr Fq2Elem one() { return {1}; }
  Fq2Elem lambda() const { return lambda_; }
  Fq2Elem element(std::uint32_t index) const;
  Fq2Elem from_coords(std::span<const std::uint32_t> coords) const;
  std::vector<std::uint32_t> coords(Fq2Elem a) const;

  Fq2Elem add(Fq2Elem a, Fq2Elem b) const { return {add_[a.index * size_ + b.index]}; }
  Fq2Elem neg(Fq2Elem a) const { return {neg_[a.index]}; }
  Fq2Elem sub(Fq2Elem a, Fq2Elem b) const { return add(a, neg(b)); }
  Fq2Elem mul(Fq2Elem a, Fq2Elem b) const {
    if (a.is_zero() || b.is_zero()) return zero();
    return {exp_[log_[a.index] + log_[b.index]]};
  }
  Fq2Elem inv(Fq2Elem a) const;
  Fq2Elem div(Fq2Elem a, Fq2Elem b) const { return mul(a, inv(b)); }
  Fq2Elem pow(Fq2Elem a, std::int64_t k) const;
  Fq2Elem pow(Fq2Elem a, const BigInt& k) const;
  /// a^q.
  Fq2Elem frobenius(Fq2Elem a) const;

  /// Exhaustive log base lambda, in [0, q^2 - 1).
  std::uint32_t small_dlog(Fq2Elem a) const;
  Fq2Elem lambda_pow(std::int64_t k) const;

  bool in_subfield(Fq2Elem a) const { return frobenius(a) == a; }
  /// F_q inside F_{q^2}, in index order.
  const std::vector<Fq2Elem>& subfield() const { return subfield_; }

 private:
  FieldTower(std::uint32_t p, std::uint32_t e, std::uint32_t m, std::uint32_t n,
             std::vector<std::uint32_t> modulus);

  std::uint32_t p_, e_, q_, m_, n_, size_;
  std::vector<std::uint32_t> modulus_;
  Fq2Elem lambda_;
  std::vector<std::uint32_t> add_, neg_, log_, exp_;
  std::vector<Fq2Elem> subfield_;
};

/// Lexicographically first monic irreducible polynomial of the given degree
/// over F_p (coefficients ascending, monic leading 1 included).
std::vector<std::uint32_t> first_irreducible_fp(std::uint32_t p, std::uint32_t degree);

/// Exhaustive divisor check over F_p.
bool is_irreducible_fp(std::uint32_t p, const std::vector<std::uint32_t>& f);

}  // namespace ffdlog
