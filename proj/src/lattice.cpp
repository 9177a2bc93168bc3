#include "ffdlog/lattice.hpp"

#include <algorithm>

namespace ffdlog {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("IntMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

void IntMatrix::addmul_row(std::size_t i, std::size_t j, const BigInt& f) {
  if (f == 0) return;
  for (std::size_t k = 0; k < cols_; ++k)
    if ((*this)(j, k) != 0) (*this)(i, k) += f * (*this)(j, k);
}

void IntMatrix::addmul_col(std::size_t i, std::size_t j, const BigInt& f) {
  if (f == 0) return;
  for (std::size_t k = 0; k < rows_; ++k)
    if ((*this)(k, j) != 0) (*this)(k, i) += f * (*this)(k, j);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
}

void IntMatrix::negate_col(std::size_t i) {
  for (std::size_t k = 0; k < rows_; ++k) (*this)(k, i) = -(*this)(k, i);
}

void IntMatrix::reduce_mod(const BigInt& m) {
  for (auto& x : a_) x = mod(x, m);
}

std::vector<BigInt> IntMatrix::row(std::size_t i) const {
  return {a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const BigInt& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error("IntMatrix: dimension mismatch in product");
  IntMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

BigInt determinant(const IntMatrix& m_in) {
  if (m_in.rows() != m_in.cols()) throw Error("determinant: matrix is not square");
  const std::size_t n = m_in.rows();
  if (n == 0) return 1;
  IntMatrix m = m_in;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank_mod_prime(const IntMatrix& m_in, const BigInt& l) {
  IntMatrix m = m_in;
  m.reduce_mod(l);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t p = rank;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, rank);
    const BigInt inv = *inverse_mod(m(rank, c), l);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const BigInt f = mod(-m(i, c) * inv, l);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = mod(m(i, j) + f * m(rank, j), l);
    }
    ++rank;
  }
  return rank;
}

namespace {

// Nearest integer to a / b, b != 0.
BigInt round_div(const BigInt& a, const BigInt& b) {
  if (b < 0) return round_div(-a, -b);
  BigInt q;
  const BigInt num = 2 * a + b, den = 2 * b;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

}  // namespace

InvariantDecomposition snf(const IntMatrix& m, const SnfOptions& opt) {
  if (m.rows() == 0 || m.cols() == 0) throw Error("snf: empty matrix");
  const std::size_t R = m.rows(), C = m.cols();
  IntMatrix A = m;
  InvariantDecomposition dec;
  dec.U = opt.track_u ? IntMatrix::identity(R) : IntMatrix();
  dec.V = IntMatrix::identity(C);
  dec.Vinv = IntMatrix::identity(C);

  auto row_swap = [&](std::size_t i, std::size_t j) {
    A.swap_rows(i, j);
    if (opt.track_u) dec.U.swap_rows(i, j);
  };
  auto row_addmul = [&](std::size_t i, std::size_t j, const BigInt& f) {
    A.addmul_row(i, j, f);
    if (opt.track_u) dec.U.addmul_row(i, j, f);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    A.swap_cols(i, j);
    dec.V.swap_cols(i, j);
    dec.Vinv.swap_rows(i, j);
  };
  // col i += f col j; V <- V E, V^{-1} <- E^{-1} V^{-1}.
  auto col_addmul = [&](std::size_t i, std::size_t j, const BigInt& f) {
    A.addmul_col(i, j, f);
    dec.V.addmul_col(i, j, f);
    dec.Vinv.addmul_row(j, i, -f);
  };

  const std::size_t K = std::min(R, C);
  for (std::size_t t = 0; t < K; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block.
      std::size_t pi = R, pj = C;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j) {
          if (A(i, j) == 0) continue;
          if (pi == R || mpz_cmpabs(A(i, j).get_mpz_t(), A(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi == R) break;
      row_swap(t, pi);
      col_swap(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (A(i, t) == 0) continue;
        row_addmul(i, t, -round_div(A(i, t), A(t, t)));
        if (A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (A(t, j) == 0) continue;
        col_addmul(j, t, -round_div(A(t, j), A(t, t)));
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (!mpz_divisible_p(A(i, j).get_mpz_t(), A(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == R) break;
      row_addmul(t, bad, 1);
    }
    if (A(t, t) < 0) {
      A.negate_row(t);
      if (opt.track_u) dec.U.negate_row(t);
    }
  }
  dec.diag.assign(C, 0);
  for (std::size_t t = 0; t < K; ++t) dec.diag[t] = A(t, t);
  return dec;
}

BigInt project_coord(const std::vector<BigInt>& kappa, const InvariantDecomposition& dec, std::size_t i) {
  if (kappa.size() != dec.V.rows()) throw Error("project_theta: vector length mismatch");
  BigInt s = 0;
  for (std::size_t k = 0; k < kappa.size(); ++k)
    if (kappa[k] != 0) s += kappa[k] * dec.V(k, i);
  if (dec.diag[i] != 0) s = mod(s, dec.diag[i]);
  return s;
}

BigInt project_theta(const std::vector<BigInt>& kappa, const InvariantDecomposition& dec) {
  return project_coord(kappa, dec, dec.size() - 1);
}

namespace {

struct SplitState {
  BigInt L;
  IntMatrix A;
  std::vector<std::size_t> perm;
  std::vector<RowOp> script;
  std::size_t t = 0;
};

// Part of L coprime to r, following M1 = gcd(r, L), M2 = gcd(r, L / M1), ...
BigInt coprime_part(const BigInt& r, const BigInt& L) {
  BigInt cur = L;
  for (;;) {
    const BigInt Mi = gcd(r, cur);
    if (Mi == 1) return cur;
    cur /= Mi;
  }
}

}  // namespace

ModSplitResult gcd_split_reduce(const IntMatrix& M, const BigInt& L, std::size_t pivot_count,
                                std::size_t pivot_col_limit) {
  if (L < 1) throw Error("gcd_split_reduce: modulus must be positive");
  if (pivot_col_limit > M.cols() || pivot_count > pivot_col_limit)
    throw Error("gcd_split_reduce: pivot bounds exceed the matrix");
  ModSplitResult result;
  std::vector<SplitState> work;
  {
    SplitState s;
    s.L = L;
    s.A = M;
    s.A.reduce_mod(L);
    s.perm.resize(M.cols());
    for (std::size_t j = 0; j < M.cols(); ++j) s.perm[j] = j;
    work.push_back(std::move(s));
  }

  while (!work.empty()) {
    SplitState s = std::move(work.back());
    work.pop_back();
    if (s.L == 1) {
      result.blocks.push_back({s.L, std::move(s.A), std::move(s.perm), std::move(s.script), pivot_count});
      continue;
    }
    bool split = false;
    while (s.t < pivot_count && !split) {
      const std::size_t t = s.t;
      std::size_t pi = M.rows(), pj = 0;
      for (std::size_t j = t; j < pivot_col_limit && pi == M.rows() && !split; ++j)
        for (std::size_t i = t; i < M.rows(); ++i) {
          const BigInt& r = s.A(i, j);
          if (r == 0) continue;
          if (gcd(r, s.L) == 1) {
            pi = i;
            pj = j;
            break;
          }
          const BigInt Lhat = coprime_part(r, s.L);
          if (Lhat == 1) continue;  // r is nilpotent modulo s.L
          SplitState other = s;
          other.L = s.L / Lhat;
          other.A.reduce_mod(other.L);
          s.L = Lhat;
          s.A.reduce_mod(s.L);
          work.push_back(std::move(other));
          work.push_back(std::move(s));
          split = true;
          break;
        }
      if (split) break;
      if (pi == M.rows())
        throw HeuristicFailure("gcd_split_reduce: rank deficiency modulo " + to_string(s.L) + " (factor of " +
                               to_string(L) + ") after " + std::to_string(t) + " pivots");
      if (pi != t) {
        s.A.swap_rows(pi, t);
        s.script.push_back({RowOp::Kind::Swap, t, pi, 0});
      }
      if (pj != t) {
        s.A.swap_cols(pj, t);
        std::swap(s.perm[pj], s.perm[t]);
      }
      const BigInt inv = *inverse_mod(s.A(t, t), s.L);
      for (std::size_t i = t + 1; i < M.rows(); ++i) {
        if (s.A(i, t) == 0) continue;
        const BigInt f = mod(-s.A(i, t) * inv, s.L);
        for (std::size_t j = t; j < M.cols(); ++j)
          if (s.A(t, j) != 0) s.A(i, j) = mod(s.A(i, j) + f * s.A(t, j), s.L);
        s.script.push_back({RowOp::Kind::AddMul, i, t, f});
      }
      ++s.t;
    }
    if (split) continue;
    result.blocks.push_back({s.L, std::move(s.A), std::move(s.perm), std::move(s.script), s.t});
  }
  std::sort(result.blocks.begin(), result.blocks.end(),
            [](const ModBlock& a, const ModBlock& b) { return a.modulus < b.modulus; });
  return result;
}

IntMatrix replay(const IntMatrix& M, const ModBlock& block) {
  IntMatrix A = M;
  A.reduce_mod(block.modulus);
  for (const auto& op : block.script) {
    if (op.kind == RowOp::Kind::Swap)
      A.swap_rows(op.target, op.source);
    else
      A.addmul_row(op.target, op.source, op.factor);
  }
  A.reduce_mod(block.modulus);
  IntMatrix P(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) P(i, j) = A(i, block.col_perm[j]);
  return P;
}

IntMatrix solve_mod(const IntMatrix& M, const IntMatrix& C, const BigInt& L, bool require_consistent) {
  if (M.rows() != C.rows()) throw Error("solve_mod: row count mismatch");
  const std::size_t n = M.cols(), k = C.cols();
  IntMatrix A(M.rows(), n + k);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) A(i, j) = M(i, j);
    for (std::size_t j = 0; j < k; ++j) A(i, n + j) = C(i, j);
  }
  const ModSplitResult res = gcd_split_reduce(A, L, n, n);

  std::vector<IntMatrix> partial;
  std::vector<BigInt> moduli;
  for (const ModBlock& b : res.blocks) {
    const BigInt& Li = b.modulus;
    IntMatrix T(n, k);
    if (Li != 1) {
      for (std::size_t i = n; i < A.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (require_consistent && b.reduced(i, n + j) != 0)
            throw HeuristicFailure("solve_mod: inconsistent system modulo " + to_string(Li));
      // Back substitution in permuted coordinates.
      IntMatrix Tp(n, k);
      for (std::size_t jj = n; jj-- > 0;) {
        const BigInt inv = *inverse_mod(b.reduced(jj, jj), Li);
        for (std::size_t c = 0; c < k; ++c) {
          BigInt s = b.reduced(jj, n + c);
          for (std::size_t l = jj + 1; l < n; ++l) s -= b.reduced(jj, l) * Tp(l, c);
          Tp(jj, c) = mod(s * inv, Li);
        }
      }
      for (std::size_t jj = 0; jj < n; ++jj)
        for (std::size_t c = 0; c < k; ++c) T(b.col_perm[jj], c) = Tp(jj, c);
    }
    partial.push_back(std::move(T));
    moduli.push_back(Li);
  }
  IntMatrix out(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<std::pair<BigInt, BigInt>> res_ic;
      for (std::size_t b = 0; b < partial.size(); ++b) res_ic.push_back({partial[b](i, c), moduli[b]});
      out(i, c) = crt(res_ic).first;
    }
  return out;
}

std::pair<BigInt, BigInt> crt(const std::vector<std::pair<BigInt, BigInt>>& residues) {
  BigInt x = 0, M = 1;
  for (const auto& [r, m] : residues) {
    if (m < 1) throw Error("crt: moduli must be positive");
    if (gcd(M, m) != 1) throw Error("crt: moduli " + to_string(M) + " and " + to_string(m) + " are not coprime");
    // x + M * t = r (mod m)
    const BigInt t = mod((r - x) * *inverse_mod(M, m), m);
    x += M * t;
    M *= m;
  }
  return {mod(x, M), M};
}

}  // namespace ffdlog
