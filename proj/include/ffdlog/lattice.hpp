#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ffdlog/numtheory.hpp"

namespace ffdlog {

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  /// row i += f * row j.
  void addmul_row(std::size_t i, std::size_t j, const BigInt& f);
  /// col i += f * col j.
  void addmul_col(std::size_t i, std::size_t j, const BigInt& f);
  void negate_row(std::size_t i);
  void negate_col(std::size_t i);
  /// Reduces every entry to [0, m).
  void reduce_mod(const BigInt& m);

  std::vector<BigInt> row(std::size_t i) const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> a_;
};

/// Bareiss fraction-free determinant of a square matrix.
BigInt determinant(const IntMatrix& m);

/// Rank over Z/lZ for a prime l.
std::size_t rank_mod_prime(const IntMatrix& m, const BigInt& l);

/// U M V = diag(d_0, ..., d_{cols-1}) padded with zeros, d_i | d_{i+1},
/// d_i >= 0. The quotient Z^cols / rowspace(M) is the sum of Z/d_i, with the
/// i-th summand generated by row i of V^{-1}.
struct InvariantDecomposition {
  std::vector<BigInt> diag;
  IntMatrix U, V, Vinv;

  std::size_t size() const { return diag.size(); }
  /// Row i of V^{-1}.
  std::vector<BigInt> basis_vector(std::size_t i) const { return Vinv.row(i); }
};

struct SnfOptions {
  bool track_u = true;
};

InvariantDecomposition snf(const IntMatrix& m, const SnfOptions& opt = {});

/// Coordinate of kappa on the last summand, reduced mod its invariant factor
/// (unreduced if that factor is 0).
BigInt project_theta(const std::vector<BigInt>& kappa, const InvariantDecomposition& dec);
/// Coordinate on summand i.
BigInt project_coord(const std::vector<BigInt>& kappa, const InvariantDecomposition& dec, std::size_t i);

/// One elementary row operation recorded by gcd_split_reduce.
struct RowOp {
  enum class Kind { Swap, AddMul } kind;
  std::size_t target, source;
  BigInt factor;  // AddMul: row target += factor * row source
};

/// One coprime block of the modulus after gcd splitting.
struct ModBlock {
  BigInt modulus;
  /// The reduced matrix, columns already permuted, entries in [0, modulus).
  IntMatrix reduced;
  /// reduced column j is original column col_perm[j].
  std::vector<std::size_t> col_perm;
  /// Row operations applied (in order) to the original matrix mod `modulus`.
  std::vector<RowOp> script;
  std::size_t pivots = 0;
};

struct ModSplitResult {
  std::vector<ModBlock> blocks;
};

/// Triangularizes M modulo L without factoring L. Pivots are sought column by
/// column among columns [pivot, pivot_col_limit), rows [pivot, rows). A
/// nonzero non-unit entry r splits L into Lhat = L / (M1 M2 ... ) and L / Lhat
/// with M1 = gcd(r, L), M2 = gcd(r, L / M1), ...; both halves continue from
/// the current state. Each block stops after `pivot_count` unit pivots.
/// Throws HeuristicFailure naming the block when no usable pivot remains.
ModSplitResult gcd_split_reduce(const IntMatrix& M, const BigInt& L, std::size_t pivot_count,
                                std::size_t pivot_col_limit);

/// Replays a block's script and column permutation on M (for verification).
IntMatrix replay(const IntMatrix& M, const ModBlock& block);

/// Solves M T = C (mod L) for T with n = M.cols() rows, assuming M has full
/// column rank modulo every prime of L. Rows beyond the first n must be
/// consistent unless `require_consistent` is false (the rhs columns are then
/// symbols with unknown relations of their own); inconsistency throws
/// HeuristicFailure.
IntMatrix solve_mod(const IntMatrix& M, const IntMatrix& C, const BigInt& L, bool require_consistent = true);

/// Chinese remaindering; returns (x, prod of moduli). Throws on non-coprime moduli.
std::pair<BigInt, BigInt> crt(const std::vector<std::pair<BigInt, BigInt>>& residues);

/// Discrete log in a cyclic group given a factored multiple of the base's
/// order. Group elements are combined with `mul(a, b)` and `pow(a, k)` for
/// k >= 0. Per-prime digits are found by exhaustive search, so primes must be
/// small. Returns (x, ord(base)) with x reduced mod ord(base), or nullopt if
/// target is not in <base>.
template <class Elem, class Mul, class Pow>
std::optional<std::pair<BigInt, BigInt>> pohlig_hellman_order(const Elem& base, const Elem& target,
                                                              const IntFactors& order_factors,
                                                              const Elem& identity, Mul mul, Pow pow) {
  const BigInt n = expand(order_factors);
  std::vector<std::pair<BigInt, BigInt>> residues;
  for (const auto& pf : order_factors) {
    const BigInt& l = pf.prime;
    const BigInt pa = pow_ui(l, pf.exponent);
    const Elem g = pow(base, n / pa);
    const Elem t = pow(target, n / pa);
    // Order of g is l^b.
    unsigned b = 0;
    for (Elem y = g; !(y == identity); y = pow(y, l)) ++b;
    const BigInt lb = pow_ui(l, b);
    if (!(pow(t, lb) == identity)) return std::nullopt;
    if (b == 0) continue;
    const Elem gamma = pow(g, lb / l);  // order l
    BigInt x = 0, lk = 1;
    for (unsigned k = 0; k < b; ++k) {
      const Elem shifted = mul(t, pow(g, lb - x));
      const Elem hk = pow(shifted, lb / (lk * l));
      std::optional<BigInt> digit;
      Elem acc = identity;
      for (BigInt d = 0; d < l; ++d) {
        if (acc == hk) {
          digit = d;
          break;
        }
        acc = mul(acc, gamma);
      }
      if (!digit) return std::nullopt;
      x += *digit * lk;
      lk *= l;
    }
    residues.push_back({x, lb});
  }
  const auto [x, order] = residues.empty() ? std::pair<BigInt, BigInt>{0, 1} : crt(residues);
  if (!(pow(base, x) == target)) return std::nullopt;
  return std::pair<BigInt, BigInt>{x, order};
}

template <class Elem, class Mul, class Pow>
std::optional<BigInt> pohlig_hellman(const Elem& base, const Elem& target, const IntFactors& order_factors,
                                     const Elem& identity, Mul mul, Pow pow) {
  auto r = pohlig_hellman_order(base, target, order_factors, identity, mul, pow);
  if (!r) return std::nullopt;
  return r->first;
}

}  // namespace ffdlog
