// pfgr: command-line driver over the C API.
//
//   pfgr window|geometry|mf|all [flags]   run suites, exit 0 iff every check passes
//   pfgr model gen [flags]                generate and print a seeded model
//   pfgr model show --model m.json        print a stored model and its rank census
//
// Precedence: flags > --config file > defaults. Exit codes: 0 pass, 1 check
// failure or computation error, 2 configuration error.

#include <fstream>
#include <iostream>
#include <map>
#include <vector>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pfgr/pfgr.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitConfig, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CliError{kExitConfig, "cannot write " + path};
  out << text;
}

void check(pfgr_status s, const std::string& what) {
  if (s == PFGR_OK) return;
  const int code = s == PFGR_ERR_COMPUTATION || s == PFGR_ERR_INTERNAL ? kExitFail : kExitConfig;
  throw CliError{code, what + ": " + pfgr_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pfgr_free_string(s);
  return out;
}

struct Config {
  pfgr_config* c = nullptr;
  Config() { check(pfgr_config_create(&c), "config"); }
  ~Config() { pfgr_config_destroy(c); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
  void set(const std::string& key, const std::string& value) {
    check(pfgr_config_set(c, key.c_str(), value.c_str()), "--" + key);
  }
};

struct Flags {
  // Config keys in the order they are applied; field precedes q.
  std::vector<std::string> order{"field",   "q",       "seed",     "d",     "dp_cutoff", "dx_cutoff",
                                 "trunc",   "samples", "census_q", "suite", "l_bound",   "m_bound"};
  std::map<std::string, std::string> values;
  std::string config_path;
  std::string model_path;
  std::string out_path;
  std::string format = "text";
  bool timings = false;
};

void add_flags(CLI::App& app, Flags& f) {
  const std::map<std::string, std::string> help{
      {"field", "Q or Fq (F_<q> also accepted)"},
      {"q", "prime for the finite field (default 101)"},
      {"seed", "model and sampling seed"},
      {"d", "odd dimension d >= 5 (default 7)"},
      {"dp_cutoff", "p-degree cutoff on the X1 side"},
      {"dx_cutoff", "x-degree cutoff on the X2 side"},
      {"trunc", "internal-degree truncation for matrix-factorization Ext"},
      {"samples", "smoothness and normal-map samples"},
      {"census_q", "comma-separated census primes"},
      {"suite", "comma-separated suites: window, geometry, mf, all"},
      {"l_bound", "rectangle height (default (d-1)/2)"},
      {"m_bound", "rectangle width (default d)"}};
  for (const auto& key : f.order) {
    std::string flag = "--" + key;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    app.add_option(flag, f.values[key], help.at(key));
  }
  app.add_option("--config", f.config_path, "JSON configuration file");
  app.add_option("--model", f.model_path, "stored model JSON");
  app.add_option("--out", f.out_path, "write the JSON report here");
  app.add_option("--format", f.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--timings", f.timings, "include wall times");
}

void apply(Config& cfg, const Flags& f, const CLI::App& app, const std::string& subcommand_suite) {
  if (!f.config_path.empty()) check(pfgr_config_load_json(cfg.c, read_file(f.config_path).c_str()), f.config_path);
  if (!subcommand_suite.empty()) cfg.set("suite", subcommand_suite);
  for (const auto& key : f.order) {
    std::string flag = "--" + key;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    if (app.count(flag) > 0) cfg.set(key, f.values.at(key));
  }
  if (!f.model_path.empty()) cfg.set("model", read_file(f.model_path));
}

int run_suites(Config& cfg, const Flags& f) {
  pfgr_report* r = nullptr;
  check(pfgr_run(cfg.c, &r), "run");
  char* s = nullptr;
  const auto done = [&](pfgr_status st) {
    if (st != PFGR_OK) pfgr_report_destroy(r);
    check(st, "report");
  };
  done(pfgr_report_json(r, f.timings ? 1 : 0, &s));
  const std::string json_text = take(s);
  if (!f.out_path.empty()) write_file(f.out_path, json_text);
  if (f.format == "json") {
    std::cout << json_text;
  } else {
    done(pfgr_report_text(r, f.timings ? 1 : 0, &s));
    std::cout << take(s);
  }
  const int passed = pfgr_report_passed(r);
  pfgr_report_destroy(r);
  return passed ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfgr: window, geometry and matrix-factorization checks for linear sections of Gr(2,d) and the Pfaffian locus"};
  app.require_subcommand(1);
  Flags flags;

  std::map<std::string, CLI::App*> suites;
  for (const char* name : {"window", "geometry", "mf", "all"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " suite");
    add_flags(*sub, flags);
    suites[name] = sub;
  }
  suites["all"]->description("run every suite");

  auto* model = app.add_subcommand("model", "model management");
  model->require_subcommand(1);
  auto* gen = model->add_subcommand("gen", "generate a seeded model");
  add_flags(*gen, flags);
  auto* show = model->add_subcommand("show", "print a stored model and its census");
  add_flags(*show, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Config cfg;
    for (const auto& [name, sub] : suites) {
      if (!sub->parsed()) continue;
      // An explicit --suite wins over the subcommand's own selection.
      apply(cfg, flags, *sub, name);
      return run_suites(cfg, flags);
    }
    if (gen->parsed()) {
      apply(cfg, flags, *gen, "");
      pfgr_model* m = nullptr;
      check(pfgr_model_generate(cfg.c, &m), "model gen");
      char* s = nullptr;
      const auto st = pfgr_model_json(m, &s);
      pfgr_model_destroy(m);
      check(st, "model json");
      const auto text = take(s);
      if (!flags.out_path.empty()) write_file(flags.out_path, text);
      std::cout << text;
      return 0;
    }
    if (show->parsed()) {
      if (flags.model_path.empty()) throw CliError{kExitConfig, "model show needs --model"};
      apply(cfg, flags, *show, "");
      const auto text = read_file(flags.model_path);
      pfgr_model* m = nullptr;
      check(pfgr_model_from_json(text.c_str(), &m), flags.model_path);
      char* s = nullptr;
      auto st = pfgr_model_json(m, &s);
      if (st == PFGR_OK) std::cout << take(s);
      char* cj = nullptr;
      if (st == PFGR_OK) st = pfgr_config_json(cfg.c, &cj);
      std::vector<unsigned> qs;
      if (st == PFGR_OK) qs = nlohmann::json::parse(take(cj)).at("census_q").get<std::vector<unsigned>>();
      for (unsigned q : qs) {
        if (st != PFGR_OK) break;
        st = pfgr_model_census_csv(m, q, &s);
        if (st == PFGR_OK) std::cout << take(s);
      }
      pfgr_model_destroy(m);
      check(st, "model show");
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "pfgr: " << e.message << "\n";
    return e.code;
  }
  return kExitConfig;
}
