#include "ffdlog/numtheory.hpp"

#include <algorithm>
#include <map>

namespace ffdlog {

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

BigInt pow_ui(const BigInt& base, unsigned long exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::optional<BigInt> inverse_mod(const BigInt& a, const BigInt& m) {
  if (m == 1) return BigInt(0);
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return std::nullopt;
  return r;
}

bool is_probable_prime(const BigInt& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

namespace {

// Brent's variant of Pollard rho; n composite and odd.
BigInt rho_split(const BigInt& n) {
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, g = 1, ys, q = 1;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto f = [&](const BigInt& v) { return mod(v * v + c, n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mod(q * abs(x - y), n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const BigInt& n, std::map<BigInt, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  BigInt d = rho_split(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

IntFactors factor_integer(BigInt n) {
  if (n < 1) throw Error("factor_integer: argument must be positive");
  std::map<BigInt, unsigned> found;
  for (std::uint64_t p : primes_up_to(10000)) {
    if (n == 1) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++found[BigInt(static_cast<unsigned long>(p))];
      n /= static_cast<unsigned long>(p);
    }
  }
  factor_into(n, found);
  IntFactors result;
  for (auto& [p, e] : found) result.push_back({p, e});
  return result;
}

BigInt expand(const IntFactors& factors) {
  BigInt r = 1;
  for (const auto& f : factors) r *= pow_ui(f.prime, f.exponent);
  return r;
}

std::uint64_t to_u64(const BigInt& n) {
  if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) throw Error("integer does not fit in 64 bits");
  std::uint64_t r = 0;
  mpz_export(&r, nullptr, -1, sizeof r, 0, 0, n.get_mpz_t());
  return r;
}

}  // namespace ffdlog
