#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ffdlog {

using BigInt = mpz_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A heuristic assumption failed or an obstruction was detected (rank
/// deficiency, missing generator, descent exhausted its retries). The CLI maps
/// this to exit code 2.
class HeuristicFailure : public Error {
 public:
  using Error::Error;
};

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;
};
using IntFactors = std::vector<PrimePower>;

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

BigInt pow_ui(const BigInt& base, unsigned long exponent);

/// Least non-negative residue.
BigInt mod(const BigInt& a, const BigInt& m);

std::optional<BigInt> inverse_mod(const BigInt& a, const BigInt& m);

bool is_probable_prime(const BigInt& n);

/// Full factorization: trial division by small primes, then Brent's rho.
/// Sorted by prime.
IntFactors factor_integer(BigInt n);

BigInt expand(const IntFactors& factors);

std::uint64_t to_u64(const BigInt& n);

inline std::string to_string(const BigInt& n) { return n.get_str(); }

}  // namespace ffdlog
