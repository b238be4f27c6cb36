#include <set>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pfgr/pfgr.h"

namespace {

using nlohmann::json;

// Owns a string returned through the C API.
std::string take(char* s) {
  std::string out = s ? s : "";
  pfgr_free_string(s);
  return out;
}

struct Config {
  pfgr_config* c = nullptr;
  Config() { REQUIRE(pfgr_config_create(&c) == PFGR_OK); }
  ~Config() { pfgr_config_destroy(c); }
};

}  // namespace

TEST_CASE("c api: null arguments are rejected") {
  CHECK(pfgr_config_create(nullptr) == PFGR_ERR_INVALID_ARGUMENT);
  CHECK(pfgr_config_set(nullptr, "d", "5") == PFGR_ERR_INVALID_ARGUMENT);
  CHECK(std::string(pfgr_last_error()).size() > 0);
  CHECK(pfgr_run(nullptr, nullptr) == PFGR_ERR_INVALID_ARGUMENT);
  CHECK(pfgr_report_passed(nullptr) == 0);
  pfgr_config_destroy(nullptr);
  pfgr_report_destroy(nullptr);
  pfgr_model_destroy(nullptr);
}

TEST_CASE("c api: config setters and validation") {
  Config c;
  CHECK(pfgr_config_validate(c.c) == PFGR_OK);
  CHECK(pfgr_config_set(c.c, "nonsense", "1") == PFGR_ERR_NOT_FOUND);
  CHECK(pfgr_config_set(c.c, "d", "seven") == PFGR_ERR_CONFIG);
  CHECK(pfgr_config_set(c.c, "suite", "window,bogus") == PFGR_ERR_CONFIG);

  CHECK(pfgr_config_set(c.c, "d", "4") == PFGR_OK);
  CHECK(pfgr_config_validate(c.c) == PFGR_ERR_CONFIG);
  CHECK(pfgr_config_set(c.c, "d", "5") == PFGR_OK);
  CHECK(pfgr_config_set(c.c, "q", "100") == PFGR_OK);
  CHECK(pfgr_config_validate(c.c) == PFGR_ERR_CONFIG);
  CHECK(std::string(pfgr_last_error()).find("prime") != std::string::npos);
  CHECK(pfgr_config_set(c.c, "q", "103") == PFGR_OK);
  CHECK(pfgr_config_set(c.c, "trunc", "0") == PFGR_OK);
  CHECK(pfgr_config_validate(c.c) == PFGR_ERR_CONFIG);
  CHECK(pfgr_config_set(c.c, "trunc", "3") == PFGR_OK);
  CHECK(pfgr_config_set(c.c, "census_q", "2,4") == PFGR_OK);
  CHECK(pfgr_config_validate(c.c) == PFGR_ERR_CONFIG);
  CHECK(pfgr_config_set(c.c, "census_q", "2,3") == PFGR_OK);
  CHECK(pfgr_config_validate(c.c) == PFGR_OK);

  char* s = nullptr;
  REQUIRE(pfgr_config_json(c.c, &s) == PFGR_OK);
  const auto j = json::parse(take(s));
  CHECK(j["d"] == 5);
  CHECK(j["trunc"] == 3);
  CHECK(j["field"]["q"] == 103);
  CHECK(j["census_q"] == json::array({2, 3}));
  CHECK(j["l_bound"] == 2);
  CHECK(j["m_bound"] == 5);
}

TEST_CASE("c api: json config loads atomically") {
  Config c;
  CHECK(pfgr_config_load_json(c.c, R"({"d": 5, "suite": ["window"], "dp_cutoff": 6})") == PFGR_OK);
  CHECK(pfgr_config_load_json(c.c, R"({"d": 9, "bogus": 1})") == PFGR_ERR_NOT_FOUND);
  CHECK(pfgr_config_load_json(c.c, "{not json") == PFGR_ERR_CONFIG);
  CHECK(pfgr_config_load_json(c.c, "[1, 2]") == PFGR_ERR_CONFIG);
  char* s = nullptr;
  REQUIRE(pfgr_config_json(c.c, &s) == PFGR_OK);
  const auto j = json::parse(take(s));
  CHECK(j["d"] == 5);
  CHECK(j["dp_cutoff"] == 6);
  CHECK(j["suite"] == json::array({"window"}));
}

TEST_CASE("c api: window suite for d = 5 runs deterministically") {
  Config c;
  REQUIRE(pfgr_config_set(c.c, "suite", "window") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "d", "5") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "dp_cutoff", "6") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "dx_cutoff", "6") == PFGR_OK);

  std::string first;
  for (int i = 0; i < 2; ++i) {
    pfgr_report* r = nullptr;
    REQUIRE(pfgr_run(c.c, &r) == PFGR_OK);
    CHECK(pfgr_report_passed(r) == 1);
    char* s = nullptr;
    REQUIRE(pfgr_report_json(r, 0, &s) == PFGR_OK);
    const auto text = take(s);
    if (i == 0) {
      first = text;
      const auto j = json::parse(text);
      CHECK(j["schema_version"] == "1.0");
      CHECK(j["verdict"] == "PASS");
      CHECK(!j.contains("model"));
      for (const auto& rec : j["records"]) {
        CHECK(rec["verdict"] == "PASS");
        CHECK(!rec["anchor"].get<std::string>().empty());
        CHECK(!rec.contains("wall_time"));
      }
    } else {
      CHECK(text == first);
    }
    REQUIRE(pfgr_report_text(r, 1, &s) == PFGR_OK);
    CHECK(take(s).find("verdict: PASS") != std::string::npos);
    pfgr_report_destroy(r);
  }
}

TEST_CASE("c api: a wrong rectangle fails and names a pair") {
  Config c;
  REQUIRE(pfgr_config_set(c.c, "suite", "window") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "l_bound", "3") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "m_bound", "8") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "dp_cutoff", "4") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "dx_cutoff", "4") == PFGR_OK);
  pfgr_report* r = nullptr;
  REQUIRE(pfgr_run(c.c, &r) == PFGR_OK);
  CHECK(pfgr_report_passed(r) == 0);
  char* s = nullptr;
  REQUIRE(pfgr_report_json(r, 0, &s) == PFGR_OK);
  const auto j = json::parse(take(s));
  CHECK(j["verdict"] == "FAIL");
  bool named = false;
  for (const auto& rec : j["records"])
    if (rec["verdict"] == "FAIL" && rec["witness"].dump().find("source") != std::string::npos) named = true;
  CHECK(named);
  pfgr_report_destroy(r);
}

TEST_CASE("c api: model generation, round trip and census") {
  Config c;
  REQUIRE(pfgr_config_set(c.c, "d", "5") == PFGR_OK);
  REQUIRE(pfgr_config_set(c.c, "seed", "3") == PFGR_OK);
  pfgr_model* m = nullptr;
  REQUIRE(pfgr_model_generate(c.c, &m) == PFGR_OK);
  char* s = nullptr;
  REQUIRE(pfgr_model_json(m, &s) == PFGR_OK);
  const auto text = take(s);

  pfgr_model* back = nullptr;
  REQUIRE(pfgr_model_from_json(text.c_str(), &back) == PFGR_OK);
  REQUIRE(pfgr_model_json(back, &s) == PFGR_OK);
  CHECK(take(s) == text);

  REQUIRE(pfgr_model_census_csv(m, 2, &s) == PFGR_OK);
  CHECK(!take(s).empty());
  CHECK(pfgr_model_census_csv(m, 4, &s) == PFGR_ERR_CONFIG);
  CHECK(pfgr_model_from_json("{\"d\": 5}", &back) != PFGR_OK);
  pfgr_model_destroy(back);
  pfgr_model_destroy(m);
}

TEST_CASE("c api: report records are unique and the verdict is their conjunction") {
  for (const char* suites : {"all", "window,mf", "geometry"}) {
    Config c;
    REQUIRE(pfgr_config_set(c.c, "suite", suites) == PFGR_OK);
    REQUIRE(pfgr_config_set(c.c, "d", "5") == PFGR_OK);
    REQUIRE(pfgr_config_set(c.c, "samples", "10") == PFGR_OK);
    REQUIRE(pfgr_config_set(c.c, "trunc", "3") == PFGR_OK);
    REQUIRE(pfgr_config_set(c.c, "rank_points", "500") == PFGR_OK);
    pfgr_report* r = nullptr;
    REQUIRE(pfgr_run(c.c, &r) == PFGR_OK);
    char* s = nullptr;
    REQUIRE(pfgr_report_json(r, 1, &s) == PFGR_OK);
    const auto j = json::parse(take(s));
    std::set<std::string> names;
    bool all = true;
    for (const auto& rec : j["records"]) {
      CHECK(names.insert(rec["check_name"].get<std::string>()).second);
      CHECK(rec["wall_time"].get<double>() >= 0.0);
      all = all && rec["verdict"] == "PASS";
    }
    CHECK((j["verdict"] == "PASS") == all);
    CHECK(pfgr_report_passed(r) == (all ? 1 : 0));
    // The model comes first whenever geometry or mf runs.
    const bool needs_model = std::string(suites) != "window";
    CHECK((j["records"][0]["check_name"] == "model_generation") == needs_model);
    CHECK(j.contains("model") == needs_model);
    pfgr_report_destroy(r);
  }
}
