#include "pfgr/suite.hpp"

#include <charconv>
#include <chrono>
#include <iomanip>
#include <sstream>

#include "pfgr/mf.hpp"
#include "pfgr/windows.hpp"

namespace pfgr::suite {

namespace {

using nlohmann::json;

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

int parse_small(const std::string& key, const std::string& value) {
  const auto v = parse_int(key, value);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(key + ": out of range");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string scalar_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + scalar_string(e);
    return s;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace

void SuiteConfig::validate() const {
  if (field.kind == geometry::FieldSpec::Kind::prime && !is_prime(field.q))
    throw ConfigError("q = " + std::to_string(field.q) + " is not prime");
  if ((run_geometry || run_mf) && field.kind == geometry::FieldSpec::Kind::prime && field.q < 5)
    throw ConfigError("the model needs q >= 5");
  if (d < 5) throw ConfigError("d must be at least 5");
  if (d % 2 == 0 && (run_geometry || run_mf)) throw ConfigError("the Pfaffian construction needs odd d");
  const std::pair<const char*, int> positive[] = {{"dp_cutoff", dp_cutoff},
                                                  {"dx_cutoff", dx_cutoff},
                                                  {"trunc", trunc},
                                                  {"samples", samples},
                                                  {"rank_points", rank_points},
                                                  {"critical_positives", critical_positives},
                                                  {"critical_near_misses", critical_near_misses},
                                                  {"critical_random", critical_random},
                                                  {"en_cutoff", en_cutoff}};
  for (const auto& [name, v] : positive)
    if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
  if (l_bound < 0 || m_bound < 0) throw ConfigError("rectangle bounds must be positive");
  if (census_qs.empty()) throw ConfigError("census_q needs at least one prime");
  for (auto q : census_qs)
    if (!is_prime(q)) throw ConfigError("census q = " + std::to_string(q) + " is not prime");
  if (!run_window && !run_geometry && !run_mf) throw ConfigError("no suite selected");
  if (model) {
    try {
      const auto m = geometry::PfaffianModel::from_json(*model);
      if (m.d() != d) throw ConfigError("stored model has d = " + std::to_string(m.d()));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("stored model: ") + e.what());
    }
  }
}

void SuiteConfig::set(const std::string& key, const std::string& value) {
  if (key == "field") {
    if (value == "Q" || value == "rational") {
      field = geometry::FieldSpec::rational();
    } else if (value == "F" || value == "Fq" || value == "prime") {
      field = geometry::FieldSpec::prime(field.q ? field.q : 101);
    } else if (value.rfind("F_", 0) == 0) {
      field = geometry::FieldSpec::prime(static_cast<std::uint32_t>(parse_int(key, value.substr(2))));
    } else {
      throw ConfigError("field: expected Q, Fq or F_<q>, got '" + value + "'");
    }
  } else if (key == "q") {
    const auto q = parse_int(key, value);
    if (q < 2 || q > INT32_MAX) throw ConfigError("q out of range");
    if (field.kind == geometry::FieldSpec::Kind::rational) throw ConfigError("q given with field Q");
    field = geometry::FieldSpec::prime(static_cast<std::uint32_t>(q));
  } else if (key == "seed") {
    const auto v = parse_int(key, value);
    if (v < 0) throw ConfigError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(v);
  } else if (key == "d") {
    d = parse_small(key, value);
  } else if (key == "dp_cutoff" || key == "dp-cutoff") {
    dp_cutoff = parse_small(key, value);
  } else if (key == "dx_cutoff" || key == "dx-cutoff") {
    dx_cutoff = parse_small(key, value);
  } else if (key == "trunc") {
    trunc = parse_small(key, value);
  } else if (key == "samples") {
    samples = parse_small(key, value);
  } else if (key == "census_q" || key == "census-q") {
    census_qs.clear();
    for (const auto& s : split(value)) {
      const auto q = parse_int(key, s);
      if (q < 2 || q > 1000) throw ConfigError("census q out of range");
      census_qs.push_back(static_cast<std::uint32_t>(q));
    }
  } else if (key == "l_bound" || key == "l-bound") {
    l_bound = parse_small(key, value);
    if (l_bound < 1) throw ConfigError("l_bound must be positive");
  } else if (key == "m_bound" || key == "m-bound") {
    m_bound = parse_small(key, value);
    if (m_bound < 1) throw ConfigError("m_bound must be positive");
  } else if (key == "rank_points") {
    rank_points = parse_small(key, value);
  } else if (key == "critical_positives") {
    critical_positives = parse_small(key, value);
  } else if (key == "critical_near_misses") {
    critical_near_misses = parse_small(key, value);
  } else if (key == "critical_random") {
    critical_random = parse_small(key, value);
  } else if (key == "en_cutoff") {
    en_cutoff = parse_small(key, value);
  } else if (key == "suite") {
    run_window = run_geometry = run_mf = false;
    for (const auto& s : split(value)) {
      if (s == "all") {
        run_window = run_geometry = run_mf = true;
      } else if (s == "window") {
        run_window = true;
      } else if (s == "geometry") {
        run_geometry = true;
      } else if (s == "mf") {
        run_mf = true;
      } else {
        throw ConfigError("suite: unknown suite '" + s + "'");
      }
    }
  } else if (key == "model") {
    try {
      model = json::parse(value);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
  } else {
    throw std::out_of_range("unknown configuration key '" + key + "'");
  }
}

void SuiteConfig::merge_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  // field before q, so that {"field": "Fq", "q": 7} works in any key order.
  if (j.contains("field")) {
    const auto& f = j.at("field");
    if (f.is_object()) {
      try {
        field = geometry::FieldSpec::from_json(f);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("field: ") + e.what());
      }
    } else {
      set("field", scalar_string(f));
    }
  }
  for (const auto& [key, v] : j.items()) {
    if (key == "field" || key == "schema_version") continue;
    if (key == "model") {
      model = v;
      continue;
    }
    set(key, scalar_string(v));
  }
}

json SuiteConfig::to_json() const {
  json suites = json::array();
  if (run_window) suites.push_back("window");
  if (run_geometry) suites.push_back("geometry");
  if (run_mf) suites.push_back("mf");
  json j = {{"field", field.to_json()},
            {"seed", seed},
            {"d", d},
            {"dp_cutoff", dp_cutoff},
            {"dx_cutoff", dx_cutoff},
            {"trunc", trunc},
            {"samples", samples},
            {"census_q", census_qs},
            {"l_bound", rect_l()},
            {"m_bound", rect_m()},
            {"rank_points", rank_points},
            {"critical_positives", critical_positives},
            {"critical_near_misses", critical_near_misses},
            {"critical_random", critical_random},
            {"en_cutoff", en_cutoff},
            {"suite", suites}};
  if (model) j["model"] = *model;
  return j;
}

bool Report::passed() const {
  for (const auto& r : records)
    if (!r.passed) return false;
  return true;
}

json Report::to_json(bool include_timings) const {
  json recs = json::array();
  for (const auto& r : records) {
    json e = {{"check_name", r.check_name},
              {"anchor", r.anchor},
              {"parameters", r.parameters},
              {"verdict", r.passed ? "PASS" : "FAIL"},
              {"witness", r.witness}};
    if (include_timings) e["wall_time"] = r.wall_time;
    recs.push_back(std::move(e));
  }
  json j = {{"schema_version", kSchemaVersion},
            {"config", config.to_json()},
            {"records", recs},
            {"verdict", passed() ? "PASS" : "FAIL"}};
  if (model) j["model"] = *model;
  return j;
}

std::string Report::text(bool include_timings) const {
  std::ostringstream os;
  os << "pfgr report, schema " << kSchemaVersion << ": field " << config.field.name() << ", seed " << config.seed
     << ", d " << config.d << "\n";
  std::size_t ok = 0;
  for (const auto& r : records) {
    ok += r.passed ? 1 : 0;
    os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(34) << r.check_name;
    if (include_timings) os << std::right << std::setw(9) << std::fixed << std::setprecision(3) << r.wall_time << "s  ";
    os << r.anchor << "\n";
    if (!r.passed) os << "      witness: " << r.witness.dump() << "\n";
  }
  os << "verdict: " << (passed() ? "PASS" : "FAIL") << " (" << ok << "/" << records.size() << " checks passed)\n";
  return os.str();
}

geometry::PfaffianModel model_for(const SuiteConfig& config) {
  if (config.model) return geometry::PfaffianModel::from_json(*config.model);
  geometry::ModelOptions opts;
  opts.census_qs = config.census_qs;
  return geometry::random_model(config.seed, config.field, config.d, opts);
}

Report run(const SuiteConfig& config) {
  config.validate();
  Report rep;
  rep.config = config;
  const int n = config.d;
  const auto seed = config.seed;

  std::optional<geometry::PfaffianModel> model;
  if (config.run_geometry || config.run_mf) {
    rep.records.push_back(timed([&] {
      CheckRecord r;
      r.check_name = "model_generation";
      r.anchor = "a general A satisfies the rank and smoothness assumptions";
      r.parameters = {{"d", n}, {"field", config.field.name()}, {"seed", seed}, {"stored", config.model.has_value()}};
      try {
        model = model_for(config);
        r.passed = true;
        r.witness = {{"attempts", model->attempts()}, {"entry_bound", model->entry_bound()}};
      } catch (const std::exception& e) {
        r.passed = false;
        r.witness = {{"error", e.what()}};
      }
      return r;
    }));
    if (model) rep.model = model->to_json();
  }

  if (config.run_window) {
    const int l = config.rect_l(), m = config.rect_m();
    const int l_max = (n - 1) / 2 - 1;
    rep.records.push_back(timed([&] { return windows::nonnegative_twist_sweep(n, l_max); }));
    rep.records.push_back(timed([&] { return windows::negative_twist_sweep(n, l_max, -50); }));
    const auto start = std::chrono::steady_clock::now();
    auto ex = windows::exceptional_report(l, m, n, {config.dp_cutoff, config.dx_cutoff});
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto c : ex.checks) {
      // The report runs its checks in one pass; split its time evenly.
      if (c.wall_time == 0) c.wall_time = total / static_cast<double>(ex.checks.size());
      rep.records.push_back(std::move(c));
    }
    rep.records.push_back(
        timed([&] { return windows::hom0_cross_check(l, m, n, config.dp_cutoff, config.dx_cutoff); }));
    rep.records.push_back(timed([&] { return windows::even_window_candidates(n + 1); }));
  }

  if (config.run_geometry && model) {
    const auto& md = *model;
    const int s = config.samples;
    rep.records.push_back(timed([&] { return geometry::full_rank_check(md); }));
    rep.records.push_back(timed([&] { return geometry::census_check(md, config.census_qs); }));
    rep.records.push_back(timed([&] { return geometry::y1_smoothness_check(md, s, seed); }));
    rep.records.push_back(timed([&] { return geometry::y2_smoothness_check(md, s, seed); }));
    rep.records.push_back(timed([&] { return geometry::rank_doubling_check(md, config.rank_points, s, seed); }));
    rep.records.push_back(timed([&] {
      return geometry::critical_locus_check(md, config.critical_positives, config.critical_near_misses,
                                            config.critical_random, seed);
    }));
    rep.records.push_back(timed([&] { return geometry::normal_map_check(md, s, seed); }));
    rep.records.push_back(timed([&] { return geometry::isotropic_extension_check(md, std::min(s, 10), seed); }));
    rep.records.push_back(timed([&] { return geometry::underlying_scheme_check(md, seed); }));
    if (config.field.kind == geometry::FieldSpec::Kind::rational)
      rep.records.push_back(timed([&] { return geometry::rational_pfaffian_check(md, std::min(s, 20), seed); }));
  }

  if (config.run_mf) {
    const int t = config.trunc;
    rep.records.push_back(timed([] { return mf::mf_verify_check(); }));
    rep.records.push_back(timed([&] { return mf::knorrer_base_check(t); }));
    rep.records.push_back(timed([&] { return mf::contractibility_check(t); }));
    rep.records.push_back(timed([] { return mf::koszul_perturb_check(); }));
    rep.records.push_back(timed([&] { return mf::tensor_law_check(t); }));
    rep.records.push_back(timed([&] { return mf::periodicity_check(t); }));
    rep.records.push_back(timed([&] { return mf::eagon_northcott_check(n - 3, config.en_cutoff); }));
    if (model) rep.records.push_back(timed([&] { return mf::knorrer_rank_check(*model, t, seed); }));
  }
  return rep;
}

}  // namespace pfgr::suite
