#include "ffdlog/relations.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <thread>

namespace ffdlog {

std::string FactorBase::label(std::size_t col, const PolyRing& ring) const {
  if (col == kLambda) return "lambda";
  if (col == kH1) return "h1";
  return "x+" + ring.elem_to_text(linear_theta(col));
}

Poly FactorBase::element(std::size_t col, const FieldSetup& setup) const {
  const PolyRing ring = setup.ring();
  if (col == kLambda) return ring.constant(setup.tower->lambda());
  if (col == kH1) return setup.h1;
  return ring.linear(linear_theta(col));
}

std::vector<std::uint32_t> coset_invariant(const FieldTower& F, Fq2Elem a, Fq2Elem b, Fq2Elem c, Fq2Elem d) {
  const std::uint32_t inf = F.size();
  // Inverse map z -> (d z - b) / (-c z + a).
  const Fq2Elem nb = F.neg(b), nc = F.neg(c);
  std::vector<std::uint32_t> pts;
  pts.reserve(F.q() + 1);
  for (Fq2Elem alpha : F.subfield()) {
    const Fq2Elem den = F.add(F.mul(nc, alpha), a);
    if (den.is_zero())
      pts.push_back(inf);
    else
      pts.push_back(F.div(F.add(F.mul(d, alpha), nb), den).index);
  }
  pts.push_back(c.is_zero() ? inf : F.div(d, nc).index);
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<CosetRep> enumerate_cosets(const FieldTower& F, const CosetOptions& opt) {
  const std::uint32_t Q = F.size();
  const std::size_t total = static_cast<std::size_t>(F.q()) * (static_cast<std::size_t>(F.q()) * F.q() + 1);
  std::map<std::vector<std::uint32_t>, CosetRep> found;
  auto offer = [&](Fq2Elem a, Fq2Elem b, Fq2Elem c, Fq2Elem d) {
    auto inv = coset_invariant(F, a, b, c, d);
    if (found.count(inv)) return;
    CosetRep rep{a, b, c, d, inv};
    found.emplace(std::move(inv), std::move(rep));
  };

  if (opt.mode == CosetMode::Exhaustive) {
    if (F.q() > kExhaustiveMaxQ)
      throw Error("enumerate_cosets: exhaustive mode is limited to q <= " + std::to_string(kExhaustiveMaxQ));
    const Fq2Elem zero = FieldTower::zero(), one = FieldTower::one();
    // a = 0, b = 1: det = -c.
    for (std::uint32_t c = 1; c < Q; ++c)
      for (std::uint32_t d = 0; d < Q; ++d) offer(zero, one, {c}, {d});
    // a = 1: det = d - bc.
    for (std::uint32_t b = 0; b < Q; ++b)
      for (std::uint32_t c = 0; c < Q; ++c) {
        const Fq2Elem bc = F.mul({b}, {c});
        for (std::uint32_t d = 0; d < Q; ++d)
          if (Fq2Elem{d} != bc) offer(one, {b}, {c}, {d});
      }
    if (found.size() != total) throw Error("enumerate_cosets: coset count mismatch (internal)");
  } else {
    const std::size_t target = std::min(opt.samples, total);
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, Q - 1);
    while (found.size() < target) {
      Fq2Elem a{pick(rng)}, b{pick(rng)}, c{pick(rng)}, d{pick(rng)};
      if (F.sub(F.mul(a, d), F.mul(b, c)).is_zero()) continue;
      const Fq2Elem lead = !a.is_zero() ? a : !b.is_zero() ? b : c;
      const Fq2Elem s = F.inv(lead);
      offer(F.mul(a, s), F.mul(b, s), F.mul(c, s), F.mul(d, s));
    }
  }
  std::vector<CosetRep> out;
  out.reserve(found.size());
  for (auto& [k, rep] : found) out.push_back(std::move(rep));
  return out;
}

Poly numerator(const CosetRep& m, const FieldSetup& setup) {
  const FieldTower& F = *setup.tower;
  const PolyRing ring(F);
  const Fq2Elem aq = F.frobenius(m.a), bq = F.frobenius(m.b), cq = F.frobenius(m.c), dq = F.frobenius(m.d);
  const Fq2Elem k1 = F.sub(F.mul(m.c, aq), F.mul(m.a, cq));
  const Fq2Elem k2 = F.sub(F.mul(m.d, aq), F.mul(m.b, cq));
  const Fq2Elem k3 = F.sub(F.mul(m.c, bq), F.mul(m.a, dq));
  const Fq2Elem k4 = F.sub(F.mul(m.d, bq), F.mul(m.b, dq));
  // (k1 x + k2) h0 + (k3 x + k4) h1
  return ring.add(ring.mul({k2, k1}, setup.h0), ring.mul({k4, k3}, setup.h1));
}

namespace {

std::int64_t lambda_exponent(const FieldTower& F, Fq2Elem value) {
  return static_cast<std::int64_t>(F.small_dlog(value));
}

}  // namespace

std::optional<RelationRow> try_relation(const CosetRep& m, const FieldSetup& setup, const FactorBase& fb) {
  const FieldTower& F = *setup.tower;
  const PolyRing ring(F);
  const Poly N = numerator(m, setup);
  if (N.empty()) return std::nullopt;
  auto split = ring.splits_into_linears(N);
  if (!split) return std::nullopt;

  RelationRow row;
  row.exps.assign(fb.size(), 0);
  Fq2Elem K = FieldTower::one();
  auto lhs_linear = [&](Fq2Elem lin, Fq2Elem cst) {
    if (lin.is_zero()) {
      K = F.mul(K, cst);
      return;
    }
    K = F.mul(K, lin);
    row.exps[FactorBase::linear_column(F.div(cst, lin))] += 1;
  };
  lhs_linear(m.c, m.d);
  for (Fq2Elem alpha : F.subfield())
    lhs_linear(F.sub(m.a, F.mul(alpha, m.c)), F.sub(m.b, F.mul(alpha, m.d)));
  row.exps[FactorBase::kH1] += 1;
  for (const auto& [theta, mult] : split->linears)
    row.exps[FactorBase::linear_column(theta)] -= static_cast<std::int64_t>(mult);
  row.exps[FactorBase::kLambda] = lambda_exponent(F, F.div(K, split->unit));

  std::string prov = "coset";
  for (Fq2Elem e : {m.a, m.b, m.c, m.d}) prov += " " + ring.elem_to_text(e);
  row.provenance = prov;
  return row;
}

RelationRow lambda_order_row(const FieldSetup& setup, const FactorBase& fb) {
  RelationRow row;
  row.exps.assign(fb.size(), 0);
  row.exps[FactorBase::kLambda] = static_cast<std::int64_t>(setup.tower->size()) - 1;
  row.provenance = "lambda-order";
  return row;
}

std::optional<RelationRow> h1_split_row(const FieldSetup& setup, const FactorBase& fb) {
  const FieldTower& F = *setup.tower;
  const PolyRing ring(F);
  auto split = ring.splits_into_linears(setup.h1);
  if (!split) return std::nullopt;
  RelationRow row;
  row.exps.assign(fb.size(), 0);
  row.exps[FactorBase::kH1] = 1;
  for (const auto& [theta, mult] : split->linears)
    row.exps[FactorBase::linear_column(theta)] -= static_cast<std::int64_t>(mult);
  // h1 / (unit * prod) = 1, so lambda carries -log(unit).
  const std::int64_t order = static_cast<std::int64_t>(F.size()) - 1;
  row.exps[FactorBase::kLambda] = (order - lambda_exponent(F, split->unit)) % order;
  row.provenance = "h1-split";
  return row;
}

RelationMatrix generate_all(const FieldSetup& setup, const RelgenOptions& opt, const std::string& digest) {
  const FieldTower& F = *setup.tower;
  const FactorBase fb(F);
  const auto cosets = enumerate_cosets(F, opt.cosets);
  std::vector<std::optional<RelationRow>> found(cosets.size());

  const unsigned threads = std::max(1u, opt.threads);
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < cosets.size(); i += threads) found[i] = try_relation(cosets[i], setup, fb);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  RelationMatrix R;
  R.columns = fb.size();
  R.setup_digest = digest;
  R.cosets_tried = cosets.size();
  std::set<std::vector<std::int64_t>> seen;
  auto insert = [&](RelationRow row) {
    if (!verify_row(row.exps, setup)) throw Error("relation row failed verification: " + row.provenance);
    if (!seen.insert(row.exps).second) ++R.duplicate_rows;
    R.rows.push_back(std::move(row));
  };
  for (auto& r : found)
    if (r) {
      ++R.splitting;
      insert(std::move(*r));
    }
  insert(lambda_order_row(setup, fb));
  if (auto r = h1_split_row(setup, fb)) insert(std::move(*r));
  return R;
}

std::pair<Poly, Poly> evaluate_row(const std::vector<std::int64_t>& exps, const FieldSetup& setup,
                                   const Poly& modulus) {
  const FieldTower& F = *setup.tower;
  const PolyRing ring(F);
  const FactorBase fb(F);
  Poly pos = ring.constant(FieldTower::one()), neg = pos;
  // The lambda column is a constant; fold it into one field exponent.
  const std::int64_t le = exps[FactorBase::kLambda];
  if (le > 0) pos = ring.constant(F.lambda_pow(le));
  if (le < 0) neg = ring.constant(F.lambda_pow(-le));
  for (std::size_t col = 1; col < exps.size(); ++col) {
    const std::int64_t e = exps[col];
    if (e == 0) continue;
    const Poly t = ring.powmod(fb.element(col, setup), BigInt(static_cast<long>(e > 0 ? e : -e)), modulus);
    if (e > 0)
      pos = ring.mulmod(pos, t, modulus);
    else
      neg = ring.mulmod(neg, t, modulus);
  }
  return {ring.rem(pos, modulus), ring.rem(neg, modulus)};
}

bool verify_row_mod(const std::vector<std::int64_t>& exps, const FieldSetup& setup, const Poly& modulus) {
  auto [pos, neg] = evaluate_row(exps, setup, modulus);
  return pos == neg;
}

bool verify_row(const std::vector<std::int64_t>& exps, const FieldSetup& setup) {
  return verify_row_mod(exps, setup, setup.h);
}

}  // namespace ffdlog
