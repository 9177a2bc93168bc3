#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffdlog/descent.hpp"

namespace ffdlog {

/// Exhaustive log table of F_g^x, indexed by the base-Q code of the reduced
/// polynomial.
struct LogTable {
  Poly generator;
  std::uint64_t order = 0;
  std::vector<std::uint32_t> logs;  // kNoLog at code 0

  static constexpr std::uint32_t kNoLog = UINT32_MAX;
  std::uint64_t log_of(const PolyRing& ring, const Poly& reduced) const;
};

constexpr std::uint64_t kBruteBound = std::uint64_t{1} << 25;

/// Walks the powers of the first primitive element found in code order.
LogTable brute_logs(const FieldSetup& setup, std::uint64_t bound = kBruteBound);

struct PrimeReport {
  BigInt prime;
  /// Invariant factors (powers of `prime`, > 1) of the prime-primary part of <F_h>.
  std::vector<BigInt> invariants;
  bool cyclic = true;
  /// Only for primes of L.
  bool rank_checked = false;
  std::size_t rank = 0;
};

struct GroupStructureReport {
  /// Invariant factors d_1 | d_2 | ... of <F_h>, all > 1. Empty when
  /// `complete` is false.
  std::vector<BigInt> invariants;
  BigInt order = 1;
  bool complete = true;
  BigInt unit_group_order;
  std::vector<PrimeReport> primes;
  std::size_t factorbase_size = 0;
};

struct GroupStructureOptions {
  /// Primes above this bound are skipped (making the report incomplete),
  /// except primes of L, which are required.
  std::uint64_t prime_bound = std::uint64_t{1} << 16;
  /// Closure size bound for the p-part when h is not squarefree.
  std::uint64_t closure_bound = kBruteBound;
};

/// Structure of the subgroup of F_h^x generated by the factorbase. For each
/// prime l != p the l-components are read off logs in every F_{g_i}; the
/// p-part (non-squarefree h only) is enumerated by closure. When `R` is given,
/// rank(R mod l) is reported for the primes of L.
GroupStructureReport group_structure(const FieldSetup& setup, const RelationMatrix* R = nullptr,
                                     const GroupStructureOptions& opt = {});

struct ObstructionReport {
  /// Some prime l > q^{2C} dividing q^{2m}-1 has a non-cyclic l-part in <F_h>.
  bool predicate = false;
  /// Some prime l of L has rank(R mod l) < |F| - 1.
  bool rank_deficient = false;
  bool consistent() const { return predicate == rank_deficient; }
  GroupStructureReport structure;
  std::size_t relation_rows = 0;
  std::string text;
};

/// Relation generation and group structure for an arbitrary h = h1 x^q - h0
/// with a degree-m factor, skipping the goodness checks.
ObstructionReport obstruction_probe(const FieldSetup& candidate, const RelgenOptions& opt = {});

/// First h = h1 x^q - h0 (same enumeration order as search_good) with at
/// least two distinct irreducible factors of degree m, no linear factor and
/// gcd(h0, h1) = 1, wrapped as an unchecked setup. Throws HeuristicFailure
/// when the degree bound is exhausted.
FieldSetup search_obstruction(std::shared_ptr<const FieldTower> tower, unsigned C, unsigned D);

/// Every theta_c must satisfy table[c] = theta_c * table[mu] (mod q^{2m}-1).
/// Returns a description of the first mismatch, or an empty string.
std::string verify_logs(const FactorbaseLogs& logs, const FieldSetup& setup, const LogTable& table);

struct PipelineOptions {
  /// Random (gamma, eta) pairs pushed through the descent.
  std::size_t dlog_samples = 0;
  /// Degrees of the sampled polynomials, clipped to m - 1.
  unsigned min_degree = 2, max_degree = 3;
  std::uint64_t seed = 1;
  DescentOptions descent;
};

struct PipelineReport {
  /// False on any mismatch or failed factorbase stage. Descent heuristic
  /// failures are counted, not treated as mismatches.
  bool ok = true;
  std::string witness;
  std::size_t dlog_answered = 0;
  std::size_t dlog_failed = 0;
  std::size_t dlog_mismatch = 0;
  unsigned max_depth = 0;
  /// Largest |V_P| / (q^2 w) over all descent nodes.
  double max_v_ratio = 0;
  bool depth_ok = true;
};

/// SNF logs, modular-splitting logs and their cross check, every theta against
/// the table, then sampled descent logs against the table.
PipelineReport verify_pipeline(const FieldSetup& setup, const RelationMatrix& R, const LogTable& table,
                               const PipelineOptions& opt = {});

/// Uniform polynomial of exact degree d.
Poly random_poly(const FieldTower& F, unsigned d, std::mt19937_64& rng);

}  // namespace ffdlog
