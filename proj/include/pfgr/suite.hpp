#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfgr/check.hpp"
#include "pfgr/geometry.hpp"

// Batch driver: configuration, suite execution in dependency order, reports.
namespace pfgr::suite {

inline constexpr const char* kSchemaVersion = "1.0";

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
  geometry::FieldSpec field = geometry::FieldSpec::prime(101);
  std::uint64_t seed = 1;
  int d = 7;
  int dp_cutoff = 12;
  int dx_cutoff = 12;
  int trunc = 4;     // internal-degree cutoff for matrix-factorization Ext
  int samples = 100;  // smoothness, normal map and rank-doubling samples on Y2
  std::vector<std::uint32_t> census_qs{2, 3, 5};
  int l_bound = 0;  // 0 selects the default rectangle ((d-1)/2, d)
  int m_bound = 0;
  int rank_points = 10000;
  int critical_positives = 1000;
  int critical_near_misses = 1000;
  int critical_random = 10000;
  int en_cutoff = 8;
  bool run_window = true;
  bool run_geometry = true;
  bool run_mf = true;
  std::optional<nlohmann::json> model;  // a stored PfaffianModel instead of generating one

  int rect_l() const { return l_bound > 0 ? l_bound : (d - 1) / 2; }
  int rect_m() const { return m_bound > 0 ? m_bound : d; }

  // Throws ConfigError.
  void validate() const;
  // String-valued setter shared by flags, JSON files and the C API. Throws
  // ConfigError for bad values and std::out_of_range for unknown keys.
  void set(const std::string& key, const std::string& value);
  // Applies every key of a JSON object; same errors as set().
  void merge_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Report {
  SuiteConfig config;
  std::optional<nlohmann::json> model;
  std::vector<CheckRecord> records;

  bool passed() const;
  nlohmann::json to_json(bool include_timings = false) const;
  std::string text(bool include_timings = false) const;
};

// Model first (when geometry or mf is selected), then window, geometry, mf.
// Validates the config first.
Report run(const SuiteConfig& config);

// The seeded model a config would use.
geometry::PfaffianModel model_for(const SuiteConfig& config);

}  // namespace pfgr::suite
