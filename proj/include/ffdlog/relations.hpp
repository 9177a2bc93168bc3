#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffdlog/select.hpp"

namespace ffdlog {

/// Column 0 is lambda, column 1 is h1(zeta), column 2 + theta.index is zeta + theta.
struct FactorBase {
  std::uint32_t Q = 0;

  explicit FactorBase(const FieldTower& F) : Q(F.size()) {}
  std::size_t size() const { return Q + 2; }
  static constexpr std::size_t kLambda = 0;
  static constexpr std::size_t kH1 = 1;
  static std::size_t linear_column(Fq2Elem theta) { return 2 + theta.index; }
  static Fq2Elem linear_theta(std::size_t col) { return {static_cast<std::uint32_t>(col - 2)}; }
  std::string label(std::size_t col, const PolyRing& ring) const;
  /// The column's element as a polynomial (reduced mod nothing).
  Poly element(std::size_t col, const FieldSetup& setup) const;
};

/// A 2x2 matrix over F_{q^2} with nonzero determinant. `invariant` is the
/// sorted image of P^1(F_q) under the inverse map; it is constant exactly on
/// the cosets PGL(2,q) * m, which are the classes producing identical rows.
/// Points of P^1(F_{q^2}) are coded as element index, infinity as q^2.
struct CosetRep {
  Fq2Elem a, b, c, d;
  std::vector<std::uint32_t> invariant;
};

std::vector<std::uint32_t> coset_invariant(const FieldTower& F, Fq2Elem a, Fq2Elem b, Fq2Elem c, Fq2Elem d);

enum class CosetMode { Exhaustive, Sampled };

struct CosetOptions {
  CosetMode mode = CosetMode::Exhaustive;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
};

/// Exhaustive: first normalized matrix (first nonzero entry 1) in index order
/// per invariant. Sampled: seeded random matrices, distinct invariants. Both
/// return representatives sorted by invariant.
std::vector<CosetRep> enumerate_cosets(const FieldTower& F, const CosetOptions& opt = {});

/// Exhaustive enumeration is allowed up to this q.
constexpr std::uint32_t kExhaustiveMaxQ = 16;

/// (ca^q - ac^q) x h0 + (da^q - bc^q) h0 + (cb^q - ad^q) x h1 + (db^q - bd^q) h1.
Poly numerator(const CosetRep& m, const FieldSetup& setup);

struct RelationRow {
  std::vector<std::int64_t> exps;  // dense over the factorbase
  std::string provenance;
};

std::optional<RelationRow> try_relation(const CosetRep& m, const FieldSetup& setup, const FactorBase& fb);

/// Exponent q^2 - 1 on lambda.
RelationRow lambda_order_row(const FieldSetup& setup, const FactorBase& fb);

/// When h1 splits into linears (always for constant h1) its column is tied to
/// the others by h1 = unit * prod (x + theta)^mult.
std::optional<RelationRow> h1_split_row(const FieldSetup& setup, const FactorBase& fb);

struct RelationMatrix {
  std::size_t columns = 0;
  std::vector<RelationRow> rows;
  std::string setup_digest;
  std::size_t cosets_tried = 0;
  std::size_t splitting = 0;
  std::size_t duplicate_rows = 0;
};

struct RelgenOptions {
  CosetOptions cosets;
  unsigned threads = 1;
};

RelationMatrix generate_all(const FieldSetup& setup, const RelgenOptions& opt = {},
                            const std::string& setup_digest = "");

/// Product of column elements raised to the row's exponents, reduced mod `modulus`.
/// Negative exponents are moved to the other side, so the result is returned
/// as (positive part, negative part).
std::pair<Poly, Poly> evaluate_row(const std::vector<std::int64_t>& exps, const FieldSetup& setup,
                                   const Poly& modulus);

/// True iff the row's product is 1 in F_{q^2}[x]/(modulus) (default h).
bool verify_row(const std::vector<std::int64_t>& exps, const FieldSetup& setup);
bool verify_row_mod(const std::vector<std::int64_t>& exps, const FieldSetup& setup, const Poly& modulus);

}  // namespace ffdlog
