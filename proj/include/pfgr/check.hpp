#pragma once

#include <chrono>
#include <string>
#include <utility>

#include "json.hpp"

namespace pfgr {

// One certified statement: what was checked, on which parameters, the
// verdict, and a witness (counterexample on failure, summary on success).
struct CheckRecord {
  std::string check_name;
  std::string anchor;
  nlohmann::json parameters = nlohmann::json::object();
  bool passed = false;
  nlohmann::json witness = nlohmann::json::object();
  double wall_time = 0.0;
};

// Runs fn() -> CheckRecord and stamps the elapsed wall time.
template <class Fn>
CheckRecord timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckRecord r = std::forward<Fn>(fn)();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace pfgr
