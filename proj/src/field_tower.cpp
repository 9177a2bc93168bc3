#include "ffdlog/field_tower.hpp"

#include <algorithm>
#include <string>

namespace ffdlog {

namespace {

using FpPoly = std::vector<std::uint32_t>;

bool is_prime_small(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of a by a monic b over F_p.
FpPoly rem_monic(FpPoly a, const FpPoly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const std::uint32_t c = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i)
      a[shift + i] = (a[shift + i] + (p - c) * b[i]) % p;
    trim(a);
  }
  return a;
}

FpPoly digits(std::uint32_t value, std::uint32_t p, std::size_t len) {
  FpPoly d(len);
  for (auto& x : d) {
    x = value % p;
    value /= p;
  }
  return d;
}

std::uint32_t ipow(std::uint32_t b, std::uint32_t e) {
  std::uint32_t r = 1;
  while (e--) r *= b;
  return r;
}

// Multiplication in F_p[u]/(f) on coordinate vectors, used only while the
// tables are being built.
FpPoly slow_mul(const FpPoly& a, const FpPoly& b, const FpPoly& f, std::uint32_t p) {
  FpPoly prod(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  FpPoly r = rem_monic(prod, f, p);
  r.resize(f.size() - 1, 0);
  return r;
}

FpPoly slow_pow(FpPoly a, std::uint64_t k, const FpPoly& f, std::uint32_t p) {
  FpPoly r(f.size() - 1, 0);
  r[0] = 1;
  while (k) {
    if (k & 1) r = slow_mul(r, a, f, p);
    a = slow_mul(a, a, f, p);
    k >>= 1;
  }
  return r;
}

}  // namespace

bool is_irreducible_fp(std::uint32_t p, const FpPoly& f_in) {
  FpPoly f = f_in;
  trim(f);
  if (f.size() < 2) return false;
  const std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
  // Make monic for the remainder routine.
  std::uint32_t lc = f.back(), lc_inv = 1;
  while ((lc * lc_inv) % p != 1) ++lc_inv;
  for (auto& c : f) c = (c * lc_inv) % p;
  for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
    const std::uint32_t count = ipow(p, d);
    for (std::uint32_t low = 0; low < count; ++low) {
      FpPoly div = digits(low, p, d);
      div.push_back(1);
      if (rem_monic(f, div, p).empty()) return false;
    }
  }
  return true;
}

FpPoly first_irreducible_fp(std::uint32_t p, std::uint32_t degree) {
  const std::uint32_t count = ipow(p, degree);
  for (std::uint32_t low = 0; low < count; ++low) {
    FpPoly f = digits(low, p, degree);
    f.push_back(1);
    if (is_irreducible_fp(p, f)) return f;
  }
  throw Error("no irreducible polynomial found (unreachable)");
}

FieldTower FieldTower::build(std::uint32_t p, std::uint32_t n) {
  if (!is_prime_small(p)) throw Error("build_tower: p = " + std::to_string(p) + " is not prime");
  if (n < 2) throw Error("build_tower: n must be at least 2");
  std::uint32_t q = 1, e = 0;
  while (q < n) {
    q *= p;
    ++e;
    if (q > kMaxQ) throw Error("build_tower: q exceeds the desk-scale bound " + std::to_string(kMaxQ));
  }
  const std::uint32_t m = (q / n) * n;
  if (2 * m <= q) throw Error("build_tower: internal invariant violated, no multiple of n in (q/2, q]");
  if (m <= 2)
    throw Error("build_tower: embedding gives m = " + std::to_string(m) +
                " which violates 2 < m; use a standalone tower");
  return FieldTower(p, e, m, n, first_irreducible_fp(p, 2 * e));
}

FieldTower FieldTower::standalone(std::uint32_t p, std::uint32_t e, std::uint32_t m) {
  if (!is_prime_small(p)) throw Error("build_standalone: p = " + std::to_string(p) + " is not prime");
  if (e == 0) throw Error("build_standalone: e must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) q *= p;
  if (q > kMaxQ) throw Error("build_standalone: q exceeds the desk-scale bound " + std::to_string(kMaxQ));
  if (m <= 2 || m > q)
    throw Error("build_standalone: need 2 < m <= q, got m = " + std::to_string(m) +
                ", q = " + std::to_string(q));
  return FieldTower(p, e, m, 0, first_irreducible_fp(p, 2 * e));
}

FieldTower FieldTower::field_only(std::uint32_t p, std::uint32_t e) {
  if (!is_prime_small(p)) throw Error("field_only: p = " + std::to_string(p) + " is not prime");
  if (e == 0 || ipow(p, e) > kMaxQ) throw Error("field_only: q out of range");
  return FieldTower(p, e, 0, 0, first_irreducible_fp(p, 2 * e));
}

FieldTower FieldTower::from_parts(std::uint32_t p, std::uint32_t e, std::uint32_t m,
                                  std::vector<std::uint32_t> modulus) {
  FieldTower probe = standalone(p, e, m);  // validates p, e, m
  if (modulus.size() != 2 * e + 1 || modulus.back() != 1)
    throw Error("tower: defining polynomial must be monic of degree 2e");
  for (auto c : modulus)
    if (c >= p) throw Error("tower: defining polynomial coefficient out of range");
  if (!is_irreducible_fp(p, modulus)) throw Error("tower: defining polynomial is reducible");
  if (modulus == probe.modulus_) return probe;
  return FieldTower(p, e, m, 0, std::move(modulus));
}

FieldTower::FieldTower(std::uint32_t p, std::uint32_t e, std::uint32_t m, std::uint32_t n,
                       std::vector<std::uint32_t> modulus)
    : p_(p), e_(e), q_(ipow(p, e)), m_(m), n_(n), size_(ipow(p, 2 * e)), modulus_(std::move(modulus)) {
  const std::uint32_t k = 2 * e_;
  const std::uint32_t order = size_ - 1;

  std::vector<std::uint32_t> order_primes;
  for (std::uint32_t r = 2, x = order; r <= x; ++r) {
    if (x % r) continue;
    order_primes.push_back(r);
    while (x % r == 0) x /= r;
  }

  // Generator: first element in index order whose order is exactly q^2 - 1.
  FpPoly one(k, 0);
  one[0] = 1;
  std::uint32_t gen = 0;
  for (std::uint32_t idx = 2; idx < size_ && gen == 0; ++idx) {
    FpPoly a = digits(idx, p_, k);
    bool ok = true;
    for (std::uint32_t r : order_primes)
      if (slow_pow(a, order / r, modulus_, p_) == one) {
        ok = false;
        break;
      }
    if (ok) gen = idx;
  }
  if (gen == 0) throw Error("tower: no generator found (unreachable)");
  lambda_ = {gen};

  auto encode = [&](const FpPoly& a) {
    std::uint32_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * p_ + a[i];
    return v;
  };

  log_.assign(size_, 0);
  exp_.assign(2 * order, 0);
  FpPoly cur = one;
  const FpPoly g = digits(gen, p_, k);
  for (std::uint32_t i = 0; i < order; ++i) {
    const std::uint32_t v = encode(cur);
    exp_[i] = exp_[i + order] = v;
    log_[v] = i;
    cur = slow_mul(cur, g, modulus_, p_);
  }

  add_.resize(static_cast<std::size_t>(size_) * size_);
  neg_.resize(size_);
  std::vector<FpPoly> all(size_);
  for (std::uint32_t i = 0; i < size_; ++i) all[i] = digits(i, p_, k);
  for (std::uint32_t i = 0; i < size_; ++i) {
    FpPoly n(k);
    for (std::uint32_t t = 0; t < k; ++t) n[t] = (p_ - all[i][t]) % p_;
    neg_[i] = encode(n);
    for (std::uint32_t j = 0; j < size_; ++j) {
      FpPoly s(k);
      for (std::uint32_t t = 0; t < k; ++t) s[t] = (all[i][t] + all[j][t]) % p_;
      add_[static_cast<std::size_t>(i) * size_ + j] = encode(s);
    }
  }

  for (std::uint32_t i = 0; i < size_; ++i)
    if (in_subfield({i})) subfield_.push_back({i});
}

Fq2Elem FieldTower::element(std::uint32_t index) const {
  if (index >= size_) throw Error("field element index out of range");
  return {index};
}

Fq2Elem FieldTower::from_coords(std::span<const std::uint32_t> c) const {
  if (c.size() != 2 * e_) throw Error("field element: wrong number of coordinates");
  std::uint32_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw Error("field element: coordinate out of range");
    v = v * p_ + c[i];
  }
  return {v};
}

std::vector<std::uint32_t> FieldTower::coords(Fq2Elem a) const { return digits(a.index, p_, 2 * e_); }

Fq2Elem FieldTower::inv(Fq2Elem a) const {
  if (a.is_zero()) throw Error("inversion of zero in F_{q^2}");
  const std::uint32_t order = size_ - 1;
  return {exp_[(order - log_[a.index]) % order]};
}

Fq2Elem FieldTower::pow(Fq2Elem a, std::int64_t k) const {
  if (a.is_zero()) {
    if (k == 0) return one();
    if (k < 0) throw Error("negative power of zero");
    return zero();
  }
  const std::int64_t order = size_ - 1;
  std::int64_t t = (static_cast<std::int64_t>(log_[a.index]) * (k % order)) % order;
  if (t < 0) t += order;
  return {exp_[t]};
}

Fq2Elem FieldTower::pow(Fq2Elem a, const BigInt& k) const {
  const BigInt order = size_ - 1;
  if (a.is_zero()) {
    if (k == 0) return one();
    if (k < 0) throw Error("negative power of zero");
    return zero();
  }
  return pow(a, static_cast<std::int64_t>(mod(k, order).get_si()));
}

Fq2Elem FieldTower::frobenius(Fq2Elem a) const { return pow(a, static_cast<std::int64_t>(q_)); }

std::uint32_t FieldTower::small_dlog(Fq2Elem a) const {
  if (a.is_zero()) throw Error("small_dlog of zero");
  return log_[a.index];
}

Fq2Elem FieldTower::lambda_pow(std::int64_t k) const { return pow(lambda_, k); }

}  // namespace ffdlog
