#include "pfgr/pfgr.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "pfgr/geometry.hpp"
#include "pfgr/suite.hpp"

struct pfgr_config {
  pfgr::suite::SuiteConfig cfg;
};
struct pfgr_report {
  pfgr::suite::Report rep;
};
struct pfgr_model {
  pfgr::geometry::PfaffianModel model;
};

namespace {

thread_local std::string g_last_error;

pfgr_status fail(pfgr_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps exceptions from the core onto status codes.
template <class Fn>
pfgr_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const pfgr::suite::ConfigError& e) {
    return fail(PFGR_ERR_CONFIG, e.what());
  } catch (const std::out_of_range& e) {
    return fail(PFGR_ERR_NOT_FOUND, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PFGR_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PFGR_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PFGR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PFGR_ERR_COMPUTATION, e.what());
  } catch (...) {
    return fail(PFGR_ERR_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* pfgr_version(void) { return "1.0.0"; }

const char* pfgr_last_error(void) { return g_last_error.c_str(); }

void pfgr_free_string(char* s) { std::free(s); }

pfgr_status pfgr_config_create(pfgr_config** out) {
  if (!out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null out-parameter");
  return guarded([&] {
    *out = new pfgr_config{};
    return PFGR_OK;
  });
}

void pfgr_config_destroy(pfgr_config* c) { delete c; }

pfgr_status pfgr_config_set(pfgr_config* c, const char* key, const char* value) {
  if (!c || !key || !value) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    c->cfg.set(key, value);
    return PFGR_OK;
  });
}

pfgr_status pfgr_config_load_json(pfgr_config* c, const char* json_text) {
  if (!c || !json_text) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    // Applied to a copy so a bad file leaves the config untouched.
    auto next = c->cfg;
    next.merge_json(nlohmann::json::parse(json_text));
    c->cfg = std::move(next);
    return PFGR_OK;
  });
}

pfgr_status pfgr_config_validate(const pfgr_config* c) {
  if (!c) return fail(PFGR_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    c->cfg.validate();
    return PFGR_OK;
  });
}

pfgr_status pfgr_config_json(const pfgr_config* c, char** out) {
  if (!c || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(c->cfg.to_json().dump(2));
    return PFGR_OK;
  });
}

pfgr_status pfgr_run(const pfgr_config* c, pfgr_report** out) {
  if (!c || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new pfgr_report{pfgr::suite::run(c->cfg)};
    return PFGR_OK;
  });
}

int pfgr_report_passed(const pfgr_report* r) { return r && r->rep.passed() ? 1 : 0; }

pfgr_status pfgr_report_json(const pfgr_report* r, int include_timings, char** out) {
  if (!r || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(r->rep.to_json(include_timings != 0).dump(2) + "\n");
    return PFGR_OK;
  });
}

pfgr_status pfgr_report_text(const pfgr_report* r, int include_timings, char** out) {
  if (!r || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(r->rep.text(include_timings != 0));
    return PFGR_OK;
  });
}

void pfgr_report_destroy(pfgr_report* r) { delete r; }

pfgr_status pfgr_model_generate(const pfgr_config* c, pfgr_model** out) {
  if (!c || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto cfg = c->cfg;
    cfg.run_geometry = true;
    cfg.model.reset();
    cfg.validate();
    *out = new pfgr_model{pfgr::suite::model_for(cfg)};
    return PFGR_OK;
  });
}

pfgr_status pfgr_model_from_json(const char* json_text, pfgr_model** out) {
  if (!json_text || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new pfgr_model{pfgr::geometry::PfaffianModel::from_json(nlohmann::json::parse(json_text))};
    return PFGR_OK;
  });
}

pfgr_status pfgr_model_json(const pfgr_model* m, char** out) {
  if (!m || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(m->model.to_json().dump(2) + "\n");
    return PFGR_OK;
  });
}

pfgr_status pfgr_model_census_csv(const pfgr_model* m, uint32_t q, char** out) {
  if (!m || !out) return fail(PFGR_ERR_INVALID_ARGUMENT, "null argument");
  if (!pfgr::is_prime(q)) return fail(PFGR_ERR_CONFIG, "census q must be prime");
  return guarded([&] {
    *out = copy_string(pfgr::geometry::rank_census(m->model, q).csv());
    return PFGR_OK;
  });
}

void pfgr_model_destroy(pfgr_model* m) { delete m; }

}  // extern "C"
