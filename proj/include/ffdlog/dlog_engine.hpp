#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffdlog/lattice.hpp"
#include "ffdlog/relations.hpp"

namespace ffdlog {

/// Product of factorbase elements raised to kappa, in F_{q^2}[x]/(g).
Poly phi(const std::vector<BigInt>& kappa, const FieldSetup& setup);
/// Same modulo an arbitrary modulus (negative exponents need units).
Poly phi_mod(const std::vector<BigInt>& kappa, const FieldSetup& setup, const Poly& modulus);

/// a^k in F_g, exponent reduced mod q^{2m}-1.
Poly pow_g(const Poly& a, const BigInt& k, const FieldSetup& setup);

IntMatrix relation_matrix(const RelationMatrix& R);

/// Setup filter: the exhaustive relation matrix has rank |F| - 1 modulo every
/// prime of L (true when L = 1).
bool relations_full_rank(const FieldSetup& setup);

/// gcd(d_{|F|-1}, q^{2m}-1) is q^{2C}-smooth.
bool check_snf_condition(const InvariantDecomposition& dec, const FieldSetup& setup);

/// Generator mu of F_g^x with its exponent vector over the factorbase.
struct Generator {
  Poly mu;
  std::vector<BigInt> vec;
  /// gamma_L = phi(e_last)^{v (v^{-1} mod L)}, order L.
  Poly gamma_L;
  /// For each prime power of v, the column whose component was used.
  std::vector<std::size_t> v_columns;
};

Generator find_generator(const InvariantDecomposition& dec, const FieldSetup& setup);

/// j with phi(a) = phi(b)^j in F_g^x, or nullopt when phi(a) is not in <phi(b)>.
/// The result is reduced modulo the order of phi(b).
std::optional<BigInt> subgroup_dlog(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                                    const InvariantDecomposition& dec, const FieldSetup& setup);

enum class LogMethod { Snf, ModSplit };

struct FactorbaseLogs {
  LogMethod method = LogMethod::Snf;
  Poly mu;
  std::vector<BigInt> mu_vec;
  /// mu^{theta[c]} = column c in F_g, theta in [0, q^{2m}-1).
  std::vector<BigInt> theta;
};

/// Algorithm I end to end from a decomposition; every column is verified.
FactorbaseLogs factorbase_logs(const InvariantDecomposition& dec, const FieldSetup& setup);

struct AlgIIBlock {
  BigInt modulus;
  /// Original index of the column left without a pivot.
  std::size_t free_column = 0;
  Poly alpha;  // generator of F_g^x[modulus]
};

/// Generator alpha_L of F_g^x[L] (isomorphic to F_h^x[L] for good setups)
/// and per-column logs t with pi_L(column) = alpha_L^t.
struct AlgIIResult {
  Poly alpha_L;
  std::vector<BigInt> logs;
  std::vector<AlgIIBlock> blocks;
};

AlgIIResult algII_solve(const RelationMatrix& R, const FieldSetup& setup);

/// Checks theta_c = t_c * k (mod L) for all columns, with k = log_mu(alpha_L)
/// read off the free columns. Returns the offending column or nullopt.
std::optional<std::size_t> cross_check(const FactorbaseLogs& logs, const AlgIIResult& alg2,
                                       const FieldSetup& setup);

/// log_mu of an arbitrary element of F_g^x given the log of its L-part
/// (as theta mod L); the v-part is found with Pohlig-Hellman.
BigInt log_with_lpart(const Poly& gamma, const BigInt& lpart, const FactorbaseLogs& logs, const FieldSetup& setup);

/// The CRT idempotent for the L-part: v * (v^{-1} mod L).
BigInt l_idempotent(const FieldSetup& setup);

}  // namespace ffdlog
