#include "ffdlog/textio.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ffdlog {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

namespace {

class Record {
 public:
  Record(const std::string& text, const std::string& kind) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "ffdlog-" + kind + " 1")
      throw Error("expected a " + kind + " file (header 'ffdlog-" + kind + " 1')");
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto sp = line.find(' ');
      entries_.push_back({line.substr(0, sp), sp == std::string::npos ? "" : line.substr(sp + 1)});
    }
  }

  const std::string& get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    throw Error("missing field '" + key + "'");
  }
  std::vector<std::string> all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
      if (k == key) out.push_back(v);
    return out;
  }
  bool has(const std::string& key) const {
    for (const auto& e : entries_)
      if (e.first == key) return true;
    return false;
  }
  unsigned long number(const std::string& key) const { return std::stoul(get(key)); }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::vector<BigInt> parse_ints(const std::string& s) {
  std::istringstream in(s);
  std::vector<BigInt> out;
  std::string tok;
  while (in >> tok) out.emplace_back(tok);
  return out;
}

template <class Seq>
std::string join(const Seq& v) {
  std::ostringstream os;
  bool first = true;
  for (const auto& x : v) {
    if (!first) os << ' ';
    os << x;
    first = false;
  }
  return os.str();
}

void tower_lines(std::ostream& os, const FieldTower& F) {
  os << "p " << F.p() << "\ne " << F.e() << "\nm " << F.m() << "\nn " << F.n() << "\nmodulus "
     << join(F.modulus()) << "\n";
}

FieldTower tower_from(const Record& r) {
  std::vector<std::uint32_t> modulus;
  for (const BigInt& c : parse_ints(r.get("modulus"))) modulus.push_back(static_cast<std::uint32_t>(to_u64(c)));
  const auto p = static_cast<std::uint32_t>(r.number("p"));
  const auto n = static_cast<std::uint32_t>(r.number("n"));
  FieldTower F = FieldTower::from_parts(p, static_cast<std::uint32_t>(r.number("e")),
                                        static_cast<std::uint32_t>(r.number("m")), std::move(modulus));
  if (n != 0) {
    const FieldTower E = FieldTower::build(p, n);
    if (E.e() != F.e() || E.m() != F.m() || E.modulus() != F.modulus())
      throw Error("tower: embedding parameters disagree with the recorded field");
    return E;
  }
  return F;
}

std::string factors_text(const IntFactors& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << (i ? " " : "") << f[i].prime;
    if (f[i].exponent > 1) os << "^" << f[i].exponent;
  }
  return os.str();
}

}  // namespace

std::string format_tower(const FieldTower& F) {
  std::ostringstream os;
  os << "ffdlog-tower 1\n";
  tower_lines(os, F);
  return os.str();
}

FieldTower parse_tower(const std::string& text) { return tower_from(Record(text, "tower")); }

std::string format_setup(const FieldSetup& s) {
  const PolyRing ring = s.ring();
  std::ostringstream os;
  os << "ffdlog-setup 1\n";
  tower_lines(os, *s.tower);
  os << "C " << s.C << "\nD " << s.D << "\n";
  os << "h0 " << ring.to_text(s.h0) << "\nh1 " << ring.to_text(s.h1) << "\n";
  os << "# derived\n";
  os << "h " << ring.to_text(s.h) << "\ng " << ring.to_text(s.g) << "\n";
  os << "v " << s.v << "\nL " << s.L << "\nv_factors " << factors_text(s.v_factors) << "\n";
  os << "# h = " << ring.pretty(s.h) << "\n# g = " << ring.pretty(s.g) << "\n";
  return os.str();
}

FieldSetup parse_setup(const std::string& text) {
  const Record r(text, "setup");
  auto tower = std::make_shared<const FieldTower>(tower_from(r));
  const PolyRing ring(*tower);
  FieldSetup s = make_setup(tower, static_cast<unsigned>(r.number("C")), static_cast<unsigned>(r.number("D")),
                            ring.from_text(r.get("h0")), ring.from_text(r.get("h1")));
  if (ring.from_text(r.get("h")) != s.h || ring.from_text(r.get("g")) != s.g || BigInt(r.get("v")) != s.v ||
      BigInt(r.get("L")) != s.L || r.get("v_factors") != factors_text(s.v_factors))
    throw Error("setup: recorded derived fields disagree with the recomputed setup");
  return s;
}

std::string format_relations(const RelationMatrix& R) {
  std::ostringstream os;
  os << "ffdlog-relations 1\n";
  os << "setup " << R.setup_digest << "\ncolumns " << R.columns << "\nrows " << R.rows.size() << "\n";
  os << "cosets_tried " << R.cosets_tried << "\nsplitting " << R.splitting << "\nduplicates " << R.duplicate_rows
     << "\n";
  for (const auto& row : R.rows) os << "row " << join(row.exps) << " ; " << row.provenance << "\n";
  return os.str();
}

RelationMatrix parse_relations(const std::string& text, const FieldSetup& setup, const std::string& setup_digest) {
  const Record r(text, "relations");
  RelationMatrix R;
  R.setup_digest = r.get("setup");
  if (R.setup_digest != setup_digest) throw Error("relations: built for a different setup (digest mismatch)");
  R.columns = r.number("columns");
  if (R.columns != FactorBase(*setup.tower).size()) throw Error("relations: column count does not match the setup");
  R.cosets_tried = r.number("cosets_tried");
  R.splitting = r.number("splitting");
  R.duplicate_rows = r.number("duplicates");
  for (const std::string& line : r.all("row")) {
    const auto semi = line.find(" ; ");
    RelationRow row;
    for (const BigInt& x : parse_ints(line.substr(0, semi))) row.exps.push_back(x.get_si());
    if (semi != std::string::npos) row.provenance = line.substr(semi + 3);
    if (row.exps.size() != R.columns) throw Error("relations: row has the wrong length");
    if (!verify_row(row.exps, setup)) throw Error("relations: row failed verification: " + row.provenance);
    R.rows.push_back(std::move(row));
  }
  if (R.rows.size() != r.number("rows")) throw Error("relations: row count mismatch");
  return R;
}

std::string format_decomposition(const InvariantDecomposition& dec) {
  std::ostringstream os;
  os << "ffdlog-decomposition 1\nsize " << dec.size() << "\ndiag " << join(dec.diag) << "\n";
  for (std::size_t i = 0; i < dec.size(); ++i) os << "V " << join(dec.V.row(i)) << "\n";
  for (std::size_t i = 0; i < dec.size(); ++i) os << "Vinv " << join(dec.Vinv.row(i)) << "\n";
  return os.str();
}

InvariantDecomposition parse_decomposition(const std::string& text) {
  const Record r(text, "decomposition");
  InvariantDecomposition dec;
  const std::size_t n = r.number("size");
  dec.diag = parse_ints(r.get("diag"));
  auto matrix = [&](const std::string& key) {
    const auto rows = r.all(key);
    if (rows.size() != n) throw Error("decomposition: " + key + " has the wrong number of rows");
    IntMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = parse_ints(rows[i]);
      if (v.size() != n) throw Error("decomposition: " + key + " row has the wrong length");
      for (std::size_t j = 0; j < n; ++j) M(i, j) = v[j];
    }
    return M;
  };
  if (dec.diag.size() != n) throw Error("decomposition: diag has the wrong length");
  dec.V = matrix("V");
  dec.Vinv = matrix("Vinv");
  if (dec.V * dec.Vinv != IntMatrix::identity(n)) throw Error("decomposition: V and Vinv are not inverse");
  return dec;
}

std::string format_logs(const LogsFile& f, const FieldSetup& setup) {
  const PolyRing ring = setup.ring();
  std::ostringstream os;
  os << "ffdlog-logs 1\nsetup " << f.setup_digest << "\n";
  os << "method " << (f.logs.method == LogMethod::Snf ? "snf" : "modsplit") << "\n";
  os << "mu " << ring.to_text(f.logs.mu) << "\nmu_vec " << join(f.logs.mu_vec) << "\n";
  os << "theta " << join(f.logs.theta) << "\n";
  if (f.alg2) {
    os << "alg2_alpha " << ring.to_text(f.alg2->alpha_L) << "\n";
    for (const auto& b : f.alg2->blocks)
      os << "alg2_block " << b.modulus << " " << b.free_column << " ; " << ring.to_text(b.alpha) << "\n";
    os << "alg2_logs " << join(f.alg2->logs) << "\n";
  }
  return os.str();
}

LogsFile parse_logs(const std::string& text, const FieldSetup& setup, const std::string& setup_digest) {
  const Record r(text, "logs");
  const PolyRing ring = setup.ring();
  LogsFile f;
  f.setup_digest = r.get("setup");
  if (f.setup_digest != setup_digest) throw Error("logs: built for a different setup (digest mismatch)");
  const std::string method = r.get("method");
  if (method != "snf" && method != "modsplit") throw Error("logs: unknown method '" + method + "'");
  f.logs.method = method == "snf" ? LogMethod::Snf : LogMethod::ModSplit;
  f.logs.mu = ring.from_text(r.get("mu"));
  f.logs.mu_vec = parse_ints(r.get("mu_vec"));
  f.logs.theta = parse_ints(r.get("theta"));
  const std::size_t n = FactorBase(*setup.tower).size();
  if (f.logs.theta.size() != n || f.logs.mu_vec.size() != n) throw Error("logs: vector length mismatch");
  if (phi(f.logs.mu_vec, setup) != ring.rem(f.logs.mu, setup.g)) throw Error("logs: mu_vec does not evaluate to mu");
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<BigInt> e(n, 0);
    e[c] = 1;
    if (pow_g(f.logs.mu, f.logs.theta[c], setup) != phi(e, setup))
      throw Error("logs: theta fails verification at column " + std::to_string(c));
  }
  if (r.has("alg2_alpha")) {
    AlgIIResult a;
    a.alpha_L = ring.from_text(r.get("alg2_alpha"));
    for (const std::string& line : r.all("alg2_block")) {
      const auto semi = line.find(" ; ");
      const auto head = parse_ints(line.substr(0, semi));
      if (head.size() != 2 || semi == std::string::npos) throw Error("logs: malformed alg2_block");
      a.blocks.push_back({head[0], static_cast<std::size_t>(to_u64(head[1])), ring.from_text(line.substr(semi + 3))});
    }
    a.logs = parse_ints(r.get("alg2_logs"));
    if (a.logs.size() != n) throw Error("logs: alg2 vector length mismatch");
    f.alg2 = std::move(a);
  }
  return f;
}

}  // namespace ffdlog
