#pragma once

#include <string>
#include <string_view>

#include "ffdlog/dlog_engine.hpp"

namespace ffdlog {

// Line-oriented text formats, one artifact per file. Each begins with a
// "ffdlog-<kind> 1" header; later stages record the digest of the setup file
// they were built against.

std::string sha256_hex(std::string_view data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string format_tower(const FieldTower& F);
FieldTower parse_tower(const std::string& text);

std::string format_setup(const FieldSetup& setup);
/// Rebuilds and re-validates the setup; derived fields in the file must agree.
FieldSetup parse_setup(const std::string& text);

std::string format_relations(const RelationMatrix& R);
/// Checks the setup digest and re-verifies every row modulo h.
RelationMatrix parse_relations(const std::string& text, const FieldSetup& setup, const std::string& setup_digest);

std::string format_decomposition(const InvariantDecomposition& dec);
InvariantDecomposition parse_decomposition(const std::string& text);

struct LogsFile {
  FactorbaseLogs logs;
  std::string setup_digest;
  /// Present when the modular-splitting solver ran as well.
  std::optional<AlgIIResult> alg2;
};

std::string format_logs(const LogsFile& f, const FieldSetup& setup);
/// Checks the digest and re-verifies mu^theta_c = column c for every c.
LogsFile parse_logs(const std::string& text, const FieldSetup& setup, const std::string& setup_digest);

}  // namespace ffdlog
