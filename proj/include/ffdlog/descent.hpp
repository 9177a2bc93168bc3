#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ffdlog/dlog_engine.hpp"

namespace ffdlog {

struct DescentOptions {
  /// Re-randomizations of a top-level target after a failed descent.
  unsigned retries = 5;
  /// Attempts at finding a power of the target coprime to h.
  unsigned coprime_attempts = 64;
  std::uint64_t seed = 1;
  CosetOptions cosets;
};

/// (aP+b)^q (cP+d) - (aP+b) (cP+d)^q with P^q replaced by N_P / h1^w, where
/// N_P = h1^w P~(h0/h1); the true value is poly / h1^h1_exponent mod h.
struct DescentNumerator {
  Poly poly;
  unsigned h1_exponent = 0;
};

DescentNumerator descent_numerator(const CosetRep& m, const Poly& P, const FieldSetup& setup);

/// prod_{beta} t_beta^{r_beta} * prod_i g_i^{s_i} = lambda^{c_lambda} h1^{c_h1} prod_u u^{c_u} in F_g,
/// where t_beta = (P - beta) / gcd(P - beta, h/g).
struct DescentRelation {
  CosetRep coset;
  std::vector<std::int64_t> translate_exps;              // indexed by beta.index, entries 0/1
  std::vector<std::pair<Poly, std::int64_t>> traps;      // (g_i, s_i), s_i != 0
  std::vector<std::pair<Poly, std::int64_t>> rhs;        // (u, c_u), u monic
  std::int64_t c_lambda = 0;
  std::int64_t c_h1 = 0;
};

/// t_beta for the given translate.
Poly stripped_translate(const Poly& P, Fq2Elem beta, const FieldSetup& setup);

enum class RelationMiss { None, NotSmooth, DividedByG, ZeroNumerator };

/// Accepts m when every irreducible factor of N_{m,P} has degree <= floor(w/2)
/// or divides h; g itself dividing N rejects the coset.
std::optional<DescentRelation> try_descent_relation(const CosetRep& m, const Poly& P, const FieldSetup& setup,
                                                    RelationMiss* miss = nullptr);

/// Both sides of a relation evaluated in F_g; equal iff the relation holds.
bool verify_descent_relation(const DescentRelation& rel, const Poly& P, const FieldSetup& setup);

struct DescentNode {
  Poly target;
  unsigned depth = 0;
  std::size_t cosets_tried = 0;
  std::size_t rejected_by_g = 0;
  std::vector<DescentRelation> relations;
  /// G_P and V_P in canonical order.
  std::vector<Poly> traps;
  std::vector<Poly> V;
  /// Members of V_P of degree > 1.
  std::vector<Poly> children;
  /// Target's exponents over V_P, then lambda, then h1 (mod L).
  std::vector<BigInt> expression;
  /// Target's exponents over the factorbase (mod L).
  std::vector<BigInt> resolved;
  std::size_t columns() const;
};

/// gcd(P, h) = 1 check with random-power fallback modulo g. Returns (P', k)
/// with P' = P^k mod g and k a unit mod L.
std::pair<Poly, BigInt> randomize_if_shared(const Poly& P, const FieldSetup& setup, std::mt19937_64& rng,
                                            unsigned attempts = 64);

/// Collects relations for P. Throws HeuristicFailure when none is found.
DescentNode build_system(const Poly& P, const FieldSetup& setup, const CosetOptions& cosets = {});

/// Solves M_P modulo L for the target (and every column) over V_P + {lambda, h1};
/// each expression is verified after projecting to the L-torsion. Fills
/// node.expression. Throws HeuristicFailure on rank deficiency.
void solve_step(DescentNode& node, const FieldSetup& setup);

struct DescentResult {
  /// Exponents over the factorbase, valid in F_g^x[L] (mod L).
  std::vector<BigInt> exps;
  std::vector<DescentNode> nodes;
  unsigned max_depth = 0;
};

/// Expresses the L-part of a nonzero P (deg < m, coprime to h) over the
/// factorbase. P is factored first; linear factors and the leading unit are
/// read off directly and each higher-degree factor is descended, with a memo
/// shared across the tree.
DescentResult full_descent(const Poly& P, const FieldSetup& setup, const DescentOptions& opt = {});

struct TargetLog {
  BigInt log;  // base mu, in [0, q^{2m}-1)
  unsigned attempts = 0;
  DescentResult descent;
};

/// log_mu(gamma) through the descent for the L-part and Pohlig-Hellman for the
/// v-part; re-randomizes on heuristic failure.
TargetLog target_log(const Poly& gamma, const FieldSetup& setup, const FactorbaseLogs& logs,
                     const DescentOptions& opt = {});

struct DlogResult {
  std::optional<BigInt> x;  // gamma = eta^x in F_g
  TargetLog gamma, eta;
};

/// Throws HeuristicFailure when the descent fails within the retry budget.
DlogResult dlog(const Poly& gamma, const Poly& eta, const FieldSetup& setup, const FactorbaseLogs& logs,
                const DescentOptions& opt = {});

/// One block per node: target, |G_P|, relation count, children, expression.
std::string descent_trace(const DescentResult& r, const FieldSetup& setup);

}  // namespace ffdlog
