// ffdlog: file-per-stage driver for the discrete log pipeline.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

#include "ffdlog/descent.hpp"
#include "ffdlog/oracle.hpp"
#include "ffdlog/textio.hpp"

namespace fs = std::filesystem;
using namespace ffdlog;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kUsage = 1, kHeuristic = 2;

struct Common {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

std::string in_dir(const Common& c, const std::string& explicit_path, const std::string& name) {
  return explicit_path.empty() ? (fs::path(c.out_dir) / name).string() : explicit_path;
}

// Appends one stage record to <out-dir>/manifest.json.
class Manifest {
 public:
  Manifest(const Common& c, std::string stage) : dir_(c.out_dir), stage_(std::move(stage)) {
    start_ = std::chrono::steady_clock::now();
    entry_["stage"] = stage_;
    entry_["seed"] = c.seed;
    entry_["threads"] = c.threads;
  }
  json& params() { return entry_["params"]; }
  void output(const std::string& path, const std::string& content) {
    write_file(path, content);
    entry_["artifacts"][fs::path(path).filename().string()] = sha256_hex(content);
  }
  void input(const std::string& path, const std::string& content) {
    entry_["inputs"][fs::path(path).filename().string()] = sha256_hex(content);
  }
  void finish(int status) {
    entry_["status"] = status;
    entry_["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const fs::path file = fs::path(dir_) / "manifest.json";
    json m = json::object();
    if (fs::exists(file)) m = json::parse(read_file(file.string()));
    m["stages"].push_back(entry_);
    for (const auto& [k, v] : entry_["params"].items()) m["run"][k] = v;
    write_file(file.string(), m.dump(2) + "\n");
  }

 private:
  std::string dir_, stage_;
  json entry_;
  std::chrono::steady_clock::time_point start_;
};

struct Loaded {
  FieldSetup setup;
  std::string digest;
};

Loaded load_setup(const std::string& path, Manifest& man) {
  const std::string text = read_file(path);
  man.input(path, text);
  return {parse_setup(text), sha256_hex(text)};
}

CosetOptions coset_options(const std::string& mode, std::size_t samples, std::uint64_t seed) {
  CosetOptions o;
  o.mode = mode == "sampled" ? CosetMode::Sampled : CosetMode::Exhaustive;
  o.samples = samples;
  o.seed = seed;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete logarithms in F_{q^{2m}} for small q"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out-dir", common.out_dir, "Directory for stage files and manifest.json");
  app.add_option("--seed", common.seed, "Seed for sampled cosets and descent randomization");
  app.add_option("--threads", common.threads, "Worker threads for relation generation");

  // setup
  auto* c_setup = app.add_subcommand("setup", "Build the field tower");
  std::uint32_t p = 0, e = 0, n = 0, m = 0;
  c_setup->add_option("--p", p, "Characteristic")->required();
  c_setup->add_option("--e", e, "q = p^e (standalone mode, with --m)");
  c_setup->add_option("--n", n, "Target degree (embedding mode)");
  c_setup->add_option("--m", m, "Extension degree over F_{q^2} (standalone mode)");

  // select
  auto* c_select = app.add_subcommand("select", "Search for a good h = h1 x^q - h0");
  std::string tower_path;
  unsigned C = 2, D = 3;
  bool any_rank = false;
  c_select->add_option("--tower", tower_path, "Tower file (default <out-dir>/tower.txt)");
  c_select->add_option("--C", C, "Smoothness parameter: primes <= q^{2C} count as smooth");
  c_select->add_option("--D", D, "Degree bound for h0, h1");
  c_select->add_flag("--any-rank", any_rank, "Accept the first good h even if its relations are rank deficient mod L");

  // relgen
  auto* c_relgen = app.add_subcommand("relgen", "Generate factorbase relations");
  std::string setup_path, coset_mode = "exhaustive";
  std::size_t samples = 0;
  c_relgen->add_option("--setup", setup_path, "Setup file (default <out-dir>/setup.txt)");
  c_relgen->add_option("--coset-mode", coset_mode, "exhaustive or sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  c_relgen->add_option("--samples", samples, "Number of sampled cosets");

  // solve
  auto* c_solve = app.add_subcommand("solve", "Factorbase logs from the relation matrix");
  std::string relations_path, method = "both";
  c_solve->add_option("--setup", setup_path);
  c_solve->add_option("--relations", relations_path, "Relations file (default <out-dir>/relations.txt)");
  c_solve->add_option("--method", method, "snf, modsplit or both")->check(CLI::IsMember({"snf", "modsplit", "both"}));

  // descend / dlog
  std::string logs_path, target, gamma_text, eta_text;
  unsigned retry_budget = 5;
  auto* c_descend = app.add_subcommand("descend", "Descend one target to the factorbase");
  c_descend->add_option("--setup", setup_path);
  c_descend->add_option("--logs", logs_path, "Logs file (default <out-dir>/logs.txt)");
  c_descend->add_option("--target", target, "Polynomial as coefficient tokens, constant term first")->required();
  c_descend->add_option("--retry-budget", retry_budget);
  c_descend->add_option("--coset-mode", coset_mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
  c_descend->add_option("--samples", samples);

  auto* c_dlog = app.add_subcommand("dlog", "x with eta^x = gamma in F_{q^{2m}}");
  c_dlog->add_option("--setup", setup_path);
  c_dlog->add_option("--logs", logs_path);
  c_dlog->add_option("--gamma", gamma_text, "Polynomial tokens, constant term first")->required();
  c_dlog->add_option("--eta", eta_text, "Polynomial tokens, constant term first")->required();
  c_dlog->add_option("--retry-budget", retry_budget);
  c_dlog->add_option("--coset-mode", coset_mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
  c_dlog->add_option("--samples", samples);

  // verify
  auto* c_verify = app.add_subcommand("verify", "Check the pipeline against brute-force logs");
  std::size_t dlog_samples = 0;
  c_verify->add_option("--setup", setup_path);
  c_verify->add_option("--relations", relations_path);
  c_verify->add_option("--dlog-samples", dlog_samples, "Random (gamma, eta) pairs to push through the descent");
  c_verify->add_option("--retry-budget", retry_budget);

  // probe
  auto* c_probe = app.add_subcommand("probe", "Group structure and rank check for any h with a degree-m factor");
  std::string h0_text, h1_text;
  c_probe->add_option("--tower", tower_path);
  c_probe->add_option("--setup", setup_path, "Probe a saved setup instead of --h0/--h1");
  c_probe->add_option("--C", C);
  c_probe->add_option("--D", D);
  c_probe->add_option("--h0", h0_text, "Polynomial tokens, constant term first");
  c_probe->add_option("--h1", h1_text, "Polynomial tokens, constant term first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  fs::create_directories(common.out_dir);
  const fs::path out = common.out_dir;
  std::string stage = app.get_subcommands().front()->get_name();
  Manifest man(common, stage);
  int status = kOk;
  try {
    if (*c_setup) {
      std::optional<FieldTower> F;
      if (n != 0) {
        if (e != 0 || m != 0) throw CLI::ValidationError("setup", "--n excludes --e/--m");
        F = FieldTower::build(p, n);
        man.params()["n"] = n;
      } else {
        if (e == 0 || m == 0) throw CLI::ValidationError("setup", "need --n, or both --e and --m");
        F = FieldTower::standalone(p, e, m);
      }
      man.params()["p"] = F->p();
      man.params()["e"] = F->e();
      man.params()["m"] = F->m();
      man.output((out / "tower.txt").string(), format_tower(*F));
      std::cout << "q = " << F->q() << ", m = " << F->m() << ", |F_{q^2m}^x| = "
                << pow_ui(BigInt(F->size()), F->m()) - 1 << "\n";
    } else if (*c_select) {
      const std::string path = in_dir(common, tower_path, "tower.txt");
      const std::string text = read_file(path);
      man.input(path, text);
      auto tower = std::make_shared<const FieldTower>(parse_tower(text));
      man.params()["C"] = C;
      man.params()["D"] = D;
      man.params()["full_rank_filter"] = !any_rank;
      const FieldSetup s = search_good(tower, C, D, any_rank ? SetupFilter{} : SetupFilter{relations_full_rank});
      man.output((out / "setup.txt").string(), format_setup(s));
      const PolyRing ring = s.ring();
      std::cout << "h0 = " << ring.pretty(s.h0) << "\nh1 = " << ring.pretty(s.h1) << "\ng = " << ring.pretty(s.g)
                << "\nv = " << s.v << "\nL = " << s.L << "\n";
    } else if (*c_relgen) {
      const Loaded ld = load_setup(in_dir(common, setup_path, "setup.txt"), man);
      RelgenOptions opt;
      opt.cosets = coset_options(coset_mode, samples, common.seed);
      opt.threads = common.threads;
      man.params()["coset_mode"] = coset_mode;
      man.params()["samples"] = samples;
      const RelationMatrix R = generate_all(ld.setup, opt, ld.digest);
      man.output((out / "relations.txt").string(), format_relations(R));
      std::cout << "cosets " << R.cosets_tried << ", splitting " << R.splitting << ", rows " << R.rows.size()
                << ", columns " << R.columns << "\n";
    } else if (*c_solve) {
      const Loaded ld = load_setup(in_dir(common, setup_path, "setup.txt"), man);
      const std::string rpath = in_dir(common, relations_path, "relations.txt");
      const std::string rtext = read_file(rpath);
      man.input(rpath, rtext);
      const RelationMatrix R = parse_relations(rtext, ld.setup, ld.digest);
      man.params()["method"] = method;
      const InvariantDecomposition dec = snf(relation_matrix(R));
      man.output((out / "decomposition.txt").string(), format_decomposition(dec));
      if (!check_snf_condition(dec, ld.setup)) {
        std::cerr << "obstruction: gcd(d_{|F|-1}, q^{2m}-1) is not smooth\n";
        status = kHeuristic;
      } else {
        LogsFile lf;
        lf.setup_digest = ld.digest;
        lf.logs = factorbase_logs(dec, ld.setup);
        if (method != "snf") {
          lf.alg2 = algII_solve(R, ld.setup);
          if (method == "both") {
            if (auto c = cross_check(lf.logs, *lf.alg2, ld.setup)) {
              std::cerr << "solvers disagree at column " << *c << "\n";
              status = kHeuristic;
            } else {
              std::cout << "snf and modsplit logs agree on all " << R.columns << " columns\n";
            }
          }
          if (method == "modsplit") lf.logs.method = LogMethod::ModSplit;
        }
        man.output((out / "logs.txt").string(), format_logs(lf, ld.setup));
        std::cout << "mu = " << ld.setup.ring().pretty(lf.logs.mu) << "\n";
      }
    } else if (*c_descend || *c_dlog) {
      const Loaded ld = load_setup(in_dir(common, setup_path, "setup.txt"), man);
      const std::string lpath = in_dir(common, logs_path, "logs.txt");
      const std::string ltext = read_file(lpath);
      man.input(lpath, ltext);
      const LogsFile lf = parse_logs(ltext, ld.setup, ld.digest);
      const PolyRing ring = ld.setup.ring();
      DescentOptions dopt;
      dopt.retries = retry_budget;
      dopt.seed = common.seed;
      dopt.cosets = coset_options(coset_mode, samples, common.seed);
      man.params()["retry_budget"] = retry_budget;
      if (*c_descend) {
        const TargetLog t = target_log(ring.from_text(target), ld.setup, lf.logs, dopt);
        man.output((out / "descent.txt").string(), descent_trace(t.descent, ld.setup));
        std::cout << "log_mu = " << t.log << " (attempts " << t.attempts << ", nodes " << t.descent.nodes.size()
                  << ")\n";
      } else {
        const DlogResult r = dlog(ring.from_text(gamma_text), ring.from_text(eta_text), ld.setup, lf.logs, dopt);
        man.output((out / "descent_gamma.txt").string(), descent_trace(r.gamma.descent, ld.setup));
        man.output((out / "descent_eta.txt").string(), descent_trace(r.eta.descent, ld.setup));
        if (r.x)
          std::cout << *r.x << "\n";
        else
          std::cout << "none (gamma is not in <eta>)\n";
      }
    } else if (*c_verify) {
      const Loaded ld = load_setup(in_dir(common, setup_path, "setup.txt"), man);
      const std::string rpath = in_dir(common, relations_path, "relations.txt");
      const std::string rtext = read_file(rpath);
      man.input(rpath, rtext);
      const RelationMatrix R = parse_relations(rtext, ld.setup, ld.digest);
      const LogTable table = brute_logs(ld.setup);
      PipelineOptions popt;
      popt.dlog_samples = dlog_samples;
      popt.seed = common.seed;
      popt.descent.retries = retry_budget;
      const PipelineReport rep = verify_pipeline(ld.setup, R, table, popt);
      std::cout << "factorbase logs: " << (rep.ok ? "match" : "MISMATCH") << "\n";
      if (dlog_samples)
        std::cout << "dlog: answered " << rep.dlog_answered << ", descent failed " << rep.dlog_failed
                  << ", mismatched " << rep.dlog_mismatch << "\n";
      if (!rep.ok) {
        std::cerr << rep.witness << "\n";
        status = kHeuristic;
      }
    } else if (*c_probe) {
      FieldSetup s;
      if (!setup_path.empty()) {
        s = load_setup(setup_path, man).setup;
      } else {
        const std::string path = in_dir(common, tower_path, "tower.txt");
        const std::string text = read_file(path);
        man.input(path, text);
        auto tower = std::make_shared<const FieldTower>(parse_tower(text));
        const PolyRing ring(*tower);
        s = make_unchecked_setup(tower, C, D, ring.from_text(h0_text), ring.from_text(h1_text));
      }
      RelgenOptions opt;
      opt.threads = common.threads;
      const ObstructionReport rep = obstruction_probe(s, opt);
      std::cout << rep.text;
      if (rep.predicate || rep.rank_deficient) status = kHeuristic;
    }
  } catch (const CLI::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    status = kUsage;
  } catch (const HeuristicFailure& err) {
    std::cerr << "heuristic failure: " << err.what() << "\n";
    status = kHeuristic;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    status = kUsage;
  }
  man.finish(status);
  return status;
}
