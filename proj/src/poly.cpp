#include "ffdlog/poly.hpp"

#include <algorithm>
#include <sstream>

namespace ffdlog {

std::strong_ordering canonical_compare(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] <=> b[i];
  return std::strong_ordering::equal;
}

Poly PolyRing::constant(Fq2Elem c) const {
  if (c.is_zero()) return {};
  return {c};
}

Poly PolyRing::monomial(Fq2Elem c, unsigned k) const {
  if (c.is_zero()) return {};
  Poly r(k + 1, FieldTower::zero());
  r[k] = c;
  return r;
}

Poly PolyRing::add(const Poly& a, const Poly& b) const {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Fq2Elem x = i < a.size() ? a[i] : FieldTower::zero();
    const Fq2Elem y = i < b.size() ? b[i] : FieldTower::zero();
    r[i] = F_.add(x, y);
  }
  normalize(r);
  return r;
}

Poly PolyRing::sub(const Poly& a, const Poly& b) const { return add(a, neg(b)); }

Poly PolyRing::neg(const Poly& a) const {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F_.neg(a[i]);
  return r;
}

Poly PolyRing::scale(const Poly& a, Fq2Elem c) const {
  if (c.is_zero()) return {};
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F_.mul(a[i], c);
  return r;
}

Poly PolyRing::mul(const Poly& a, const Poly& b) const {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, FieldTower::zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F_.add(r[i + j], F_.mul(a[i], b[j]));
  }
  normalize(r);
  return r;
}

Poly PolyRing::pow(const Poly& a, unsigned k) const {
  Poly r = constant(FieldTower::one()), base = a;
  while (k) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return r;
}

std::pair<Poly, Poly> PolyRing::divrem(const Poly& a, const Poly& b) const {
  if (b.empty()) throw Error("polynomial division by zero");
  Poly r = a;
  normalize(r);
  if (r.size() < b.size()) return {{}, r};
  const Fq2Elem inv_lead = F_.inv(b.back());
  const std::size_t db = b.size() - 1;
  Poly q(r.size() - db, FieldTower::zero());
  for (std::size_t k = r.size() - 1;; --k) {
    const Fq2Elem c = F_.mul(r[k], inv_lead);
    const std::size_t shift = k - db;
    q[shift] = c;
    if (!c.is_zero())
      for (std::size_t i = 0; i <= db; ++i) r[shift + i] = F_.sub(r[shift + i], F_.mul(c, b[i]));
    if (k == db) break;
  }
  r.resize(db);
  normalize(r);
  normalize(q);
  return {q, r};
}

Poly PolyRing::rem(const Poly& a, const Poly& b) const {
  if (b.empty()) throw Error("polynomial division by zero");
  if (a.size() < b.size()) {
    Poly r = a;
    normalize(r);
    return r;
  }
  Poly r = a;
  const Fq2Elem inv_lead = F_.inv(b.back());
  const std::size_t db = b.size() - 1;
  for (std::size_t k = r.size() - 1; k >= db; --k) {
    if (!r[k].is_zero()) {
      const Fq2Elem c = F_.mul(r[k], inv_lead);
      const std::size_t shift = k - db;
      for (std::size_t i = 0; i <= db; ++i) r[shift + i] = F_.sub(r[shift + i], F_.mul(c, b[i]));
    }
    if (k == db) break;
  }
  r.resize(db);
  normalize(r);
  return r;
}

Poly PolyRing::exact_div(const Poly& a, const Poly& b) const {
  auto [q, r] = divrem(a, b);
  if (!r.empty()) throw Error("exact_div: divisor does not divide");
  return q;
}

Fq2Elem PolyRing::eval(const Poly& f, Fq2Elem at) const {
  Fq2Elem r = FieldTower::zero();
  for (std::size_t i = f.size(); i-- > 0;) r = F_.add(F_.mul(r, at), f[i]);
  return r;
}

Poly PolyRing::powmod(const Poly& a, const BigInt& k, const Poly& m) const {
  if (k < 0) {
    auto inv = invmod(a, m);
    if (!inv) throw Error("powmod: negative power of a non-unit");
    return powmod(*inv, -k, m);
  }
  Poly r = rem(constant(FieldTower::one()), m);
  Poly base = rem(a, m);
  const std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(r, r, m);
    if (mpz_tstbit(k.get_mpz_t(), i)) r = mulmod(r, base, m);
  }
  return r;
}

std::optional<Poly> PolyRing::invmod(const Poly& a, const Poly& m) const {
  // Extended Euclid tracking the cofactor of a.
  Poly r0 = m, r1 = rem(a, m);
  Poly s0, s1 = constant(FieldTower::one());
  while (!r1.empty()) {
    auto [q, r] = divrem(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (degree(r0) != 0) return std::nullopt;
  return rem(scale(s0, F_.inv(r0[0])), m);
}

Poly PolyRing::monic(const Poly& f) const {
  if (f.empty()) return {};
  return scale(f, F_.inv(f.back()));
}

Poly PolyRing::derivative(const Poly& f) const {
  if (f.size() <= 1) return {};
  Poly r(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) {
    Fq2Elem c = FieldTower::zero();
    for (std::size_t t = 0; t < i % F_.p(); ++t) c = F_.add(c, f[i]);
    r[i - 1] = c;
  }
  normalize(r);
  return r;
}

Poly PolyRing::gcd(const Poly& a, const Poly& b) const {
  Poly x = a, y = b;
  normalize(x);
  normalize(y);
  if (x.empty() && y.empty()) throw Error("gcd of two zero polynomials");
  while (!y.empty()) {
    Poly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

Poly PolyRing::frobenius_coeffs(const Poly& f) const {
  Poly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = F_.frobenius(f[i]);
  return r;
}

Poly PolyRing::compose(const Poly& f, const Poly& g) const {
  Poly r;
  for (std::size_t i = f.size(); i-- > 0;) r = add(mul(r, g), constant(f[i]));
  return r;
}

// Berlekamp on a monic squarefree f: the fixed space of b -> b^Q in
// F_Q[x]/(f) has dimension equal to the number of irreducible factors, and
// gcds with b - sigma over sigma in F_Q separate them.
std::vector<Poly> PolyRing::berlekamp_split(const Poly& f) const {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return {f};
  const std::uint32_t Q = F_.size();

  std::vector<Poly> rows(n);
  rows[0] = constant(FieldTower::one());
  const Poly xq = powmod(x(), BigInt(Q), f);
  for (std::size_t i = 1; i < n; ++i) rows[i] = mulmod(rows[i - 1], xq, f);

  // M[k][j] = coefficient k of (x^{jQ} - x^j); solve M b = 0.
  std::vector<std::vector<Fq2Elem>> M(n, std::vector<Fq2Elem>(n, FieldTower::zero()));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < rows[j].size(); ++k) M[k][j] = rows[j][k];
    M[j][j] = F_.sub(M[j][j], FieldTower::one());
  }
  std::vector<int> pivot_of_col(n, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t piv = rank;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) continue;
    std::swap(M[piv], M[rank]);
    const Fq2Elem inv = F_.inv(M[rank][col]);
    for (auto& e : M[rank]) e = F_.mul(e, inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == rank || M[r][col].is_zero()) continue;
      const Fq2Elem c = M[r][col];
      for (std::size_t t = 0; t < n; ++t) M[r][t] = F_.sub(M[r][t], F_.mul(c, M[rank][t]));
    }
    pivot_of_col[col] = static_cast<int>(rank);
    ++rank;
  }
  const std::size_t r = n - rank;
  if (r == 1) return {f};

  std::vector<Poly> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    Poly b(n, FieldTower::zero());
    b[free] = FieldTower::one();
    for (std::size_t col = 0; col < n; ++col)
      if (pivot_of_col[col] >= 0) b[col] = F_.neg(M[pivot_of_col[col]][free]);
    normalize(b);
    if (degree(b) >= 1) basis.push_back(b);
  }

  std::vector<Poly> factors{f};
  for (const Poly& b : basis) {
    if (factors.size() == r) break;
    std::vector<Poly> next;
    for (const Poly& u : factors) {
      if (degree(u) <= 1) {
        next.push_back(u);
        continue;
      }
      std::vector<Poly> parts;
      for (std::uint32_t s = 0; s < Q; ++s) {
        Poly g = gcd(u, sub(b, constant(Fq2Elem{s})));
        if (degree(g) >= 1) parts.push_back(std::move(g));
      }
      for (auto& pt : parts) next.push_back(std::move(pt));
    }
    factors = std::move(next);
  }
  if (factors.size() != r) throw Error("berlekamp: factor count does not match fixed-space dimension");
  return factors;
}

void PolyRing::squarefree_factor(const Poly& f, unsigned scale_by, std::vector<Factor>& out) const {
  if (degree(f) < 1) return;
  Poly rest = f;
  const Poly d = derivative(rest);
  if (!d.empty()) {
    // Product of the irreducibles whose multiplicity is prime to p.
    const Poly core = div(rest, gcd(rest, d));
    for (const Poly& g : berlekamp_split(monic(core))) {
      unsigned mult = 0;
      for (;;) {
        auto [qq, rr] = divrem(rest, g);
        if (!rr.empty()) break;
        rest = std::move(qq);
        ++mult;
      }
      out.push_back({g, mult * scale_by});
    }
  }
  if (degree(rest) < 1) return;
  // Every remaining multiplicity is divisible by p: rest = r(x)^p.
  const std::uint32_t p = F_.p();
  const std::int64_t root_exp = F_.size() / p;
  Poly r((rest.size() - 1) / p + 1);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = F_.pow(rest[k * p], root_exp);
  squarefree_factor(monic(r), scale_by * p, out);
}

Factorization PolyRing::factor(const Poly& f_in) const {
  Poly f = f_in;
  normalize(f);
  if (degree(f) < 1) throw Error("factor: constant input");
  Factorization result;
  result.unit = f.back();
  std::vector<Factor> raw;
  squarefree_factor(monic(f), 1, raw);
  std::sort(raw.begin(), raw.end(),
            [](const Factor& a, const Factor& b) { return canonical_less(a.poly, b.poly); });
  for (auto& fa : raw) {
    if (!result.factors.empty() && result.factors.back().poly == fa.poly)
      result.factors.back().multiplicity += fa.multiplicity;
    else
      result.factors.push_back(std::move(fa));
  }
  return result;
}

Poly PolyRing::expand(const Factorization& fac) const {
  Poly r = constant(fac.unit);
  for (const auto& fa : fac.factors) r = mul(r, pow(fa.poly, fa.multiplicity));
  return r;
}

bool PolyRing::is_irreducible(const Poly& f_in) const {
  Poly f = f_in;
  normalize(f);
  const int n = degree(f);
  if (n < 1) return false;
  if (n == 1) return true;
  f = monic(f);
  const BigInt Q = F_.size();
  // Rabin: x^{Q^n} = x mod f and gcd(x^{Q^{n/r}} - x, f) = 1 for primes r | n.
  std::vector<Poly> frob(n + 1);
  frob[0] = x();
  for (int i = 1; i <= n; ++i) frob[i] = powmod(frob[i - 1], Q, f);
  if (!sub(frob[n], rem(x(), f)).empty()) return false;
  for (int r = 2, t = n; r <= t; ++r) {
    if (t % r) continue;
    while (t % r == 0) t /= r;
    if (degree(gcd(sub(frob[n / r], x()), f)) != 0) return false;
  }
  return true;
}

std::optional<LinearSplit> PolyRing::splits_into_linears(const Poly& f_in) const {
  Poly f = f_in;
  normalize(f);
  if (f.empty()) return std::nullopt;
  LinearSplit out;
  out.unit = f.back();
  f = monic(f);
  for (std::uint32_t t = 0; t < F_.size() && degree(f) >= 1; ++t) {
    const Fq2Elem theta{t};
    const Fq2Elem root = F_.neg(theta);
    unsigned mult = 0;
    while (degree(f) >= 1 && eval(f, root).is_zero()) {
      // Synthetic division by x - root.
      Poly q(f.size() - 1);
      Fq2Elem carry = FieldTower::zero();
      for (std::size_t i = f.size(); i-- > 1;) {
        carry = F_.add(F_.mul(carry, root), f[i]);
        q[i - 1] = carry;
      }
      f = std::move(q);
      ++mult;
    }
    if (mult) out.linears.push_back({theta, mult});
  }
  if (degree(f) != 0) return std::nullopt;
  return out;
}

std::uint64_t PolyRing::encode(const Poly& f) const {
  const std::uint64_t Q = F_.size();
  std::uint64_t code = 0;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (code > (UINT64_MAX - f[i].index) / Q) throw Error("encode: polynomial too large for 64-bit code");
    code = code * Q + f[i].index;
  }
  return code;
}

Poly PolyRing::decode(std::uint64_t code) const {
  Poly f;
  while (code) {
    f.push_back({static_cast<std::uint32_t>(code % F_.size())});
    code /= F_.size();
  }
  return f;
}

namespace {
constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}
}  // namespace

std::string PolyRing::elem_to_text(Fq2Elem a) const {
  std::string s;
  for (auto c : F_.coords(a)) s.push_back(kDigits[c]);
  return s;
}

Fq2Elem PolyRing::elem_from_text(const std::string& token) const {
  if (token.size() != 2 * F_.e()) throw Error("bad field element token '" + token + "'");
  std::vector<std::uint32_t> c;
  for (char ch : token) {
    const int v = digit_value(ch);
    if (v < 0 || static_cast<std::uint32_t>(v) >= F_.p())
      throw Error("bad digit in field element token '" + token + "'");
    c.push_back(static_cast<std::uint32_t>(v));
  }
  return F_.from_coords(c);
}

std::string PolyRing::to_text(const Poly& f) const {
  if (f.empty()) return elem_to_text(FieldTower::zero());
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s.push_back(' ');
    s += elem_to_text(f[i]);
  }
  return s;
}

Poly PolyRing::from_text(const std::string& text) const {
  std::istringstream in(text);
  Poly f;
  std::string tok;
  while (in >> tok) f.push_back(elem_from_text(tok));
  normalize(f);
  return f;
}

std::string PolyRing::pretty(const Poly& f) const {
  if (f.empty()) return "0";
  std::string s;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    const bool unit = f[i] == FieldTower::one();
    if (!unit || i == 0) s += "[" + elem_to_text(f[i]) + "]";
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

}  // namespace ffdlog
