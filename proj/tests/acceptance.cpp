// Acceptance run: one PASS/FAIL line per criterion, with time limits pinned
// here. Exit status is nonzero iff some criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfgr/geometry.hpp"
#include "pfgr/mf.hpp"
#include "pfgr/windows.hpp"

using namespace pfgr;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(const CheckRecord& r) {
    if (r.passed) return;
    ok = false;
    detail += r.check_name + " failed: " + r.witness.dump().substr(0, 400) + "; ";
  }
  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    detail += what + "; ";
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> body;
};

// Criteria 1-10 for one dimension; the rectangle is ((d-1)/2, d).
std::vector<Criterion> criteria(int d, int id_offset, const std::string& tag) {
  const int l = (d - 1) / 2;
  const int pairs = d * l * d * l;
  const int cutoff = 12;
  auto model = std::make_shared<std::optional<geometry::PfaffianModel>>();
  const std::uint64_t seed = 1;
  const auto get_model = [model, d]() -> const geometry::PfaffianModel& {
    if (!*model) {
      geometry::ModelOptions opts;
      opts.census_qs = {2, 3, 5};
      *model = geometry::random_model(seed, geometry::FieldSpec::prime(101), d, opts);
    }
    return **model;
  };

  std::vector<Criterion> out;
  out.push_back({id_offset + 1, tag + "nonnegative-twist Ext sweep", 5.0, [=] {
                   Outcome o;
                   o.require(windows::nonnegative_twist_sweep(d, l - 1));
                   return o;
                 }});
  out.push_back({id_offset + 2, tag + "negative-twist Ext sweep with dominance tail", 5.0, [=] {
                   Outcome o;
                   const auto r = windows::negative_twist_sweep(d, l - 1, -50);
                   o.require(r);
                   o.require(r.witness.value("dominance_tail_holds", false), "dominance tail");
                   return o;
                 }});
  out.push_back({id_offset + 3, tag + "strong exceptional rectangle", 10.0, [=] {
                   Outcome o;
                   const auto r = windows::strong_exceptional_check(l, d, d);
                   o.require(r);
                   o.require(r.witness.value("objects", 0) == l * d, "object count");
                   return o;
                 }});
  out.push_back({id_offset + 4, tag + "no higher Ext on X1 and X2, nu <= 6", 60.0, [=] {
                   Outcome o;
                   o.require(windows::x1_persistence_check(l, d, d, cutoff));
                   const auto x2 = windows::x2_persistence_check(l, d, d, cutoff);
                   o.require(x2);
                   const auto& nu = x2.witness["max_nu"];
                   o.require(nu.is_null() || nu.get<int>() <= d - 1, "max det power");
                   return o;
                 }});
  out.push_back({id_offset + 5, tag + "Hom0 agreement across the three models", 60.0, [=] {
                   Outcome o;
                   const auto r = windows::hom0_cross_check(l, d, d, cutoff, cutoff);
                   o.require(r);
                   o.require(r.witness.value("pairs", 0) == pairs, "pair count " + r.witness["pairs"].dump());
                   return o;
                 }});
  out.push_back({id_offset + 6, tag + "window size and fibre generator count", 1.0, [=] {
                   Outcome o;
                   const auto r = windows::window_size_check(l, d, d);
                   o.require(r);
                   o.require(r.witness.value("window_size", 0) == l * d, "window size");
                   o.require(r.witness.value("fibre_generators", 0) == l, "fibre generators");
                   return o;
                 }});
  out.push_back({id_offset + 7, tag + "geometry certificates over F_101", 120.0, [=] {
                   Outcome o;
                   const auto& m = get_model();
                   o.require(geometry::full_rank_check(m));
                   const auto census = geometry::census_check(m, {2, 3, 5});
                   o.require(census);
                   const auto y1 = geometry::y1_smoothness_check(m, 100, seed);
                   o.require(y1);
                   o.require(y1.witness.value("found", 0) == 100 && y1.witness.value("expected_rank", 0) == d,
                             "Y1 sample count");
                   const auto y2 = geometry::y2_smoothness_check(m, 100, seed);
                   o.require(y2);
                   o.require(y2.witness.value("found", 0) == 100, "Y2 sample count");
                   const auto rd = geometry::rank_doubling_check(m, 10000, 100, seed);
                   o.require(rd);
                   o.require(rd.witness.value("tested", 0) >= 10000, "rank doubling sample count");
                   return o;
                 }});
  out.push_back({id_offset + 8, tag + "critical locus equivalence", 60.0, [=] {
                   Outcome o;
                   const auto r = geometry::critical_locus_check(get_model(), 1000, 1000, 10000, seed);
                   o.require(r);
                   o.require(r.witness.value("disagreements", -1) == 0, "disagreements");
                   return o;
                 }});
  out.push_back({id_offset + 9, tag + "normal map has rank 3", 30.0, [=] {
                   Outcome o;
                   const auto r = geometry::normal_map_check(get_model(), 100, seed);
                   o.require(r);
                   o.require(r.witness.value("found", 0) == 100, "normal map sample count");
                   return o;
                 }});
  out.push_back({id_offset + 10, tag + "matrix factorization engine", 60.0, [=] {
                   Outcome o;
                   o.require(mf::knorrer_base_check(4));
                   o.require(mf::contractibility_check(4));
                   o.require(mf::koszul_perturb_check());
                   const auto en = mf::eagon_northcott_check(d - 3, 8);
                   o.require(en);
                   if (d == 7)
                     o.require(en.witness["ranks"] == nlohmann::json::array({1, 6, 8, 3}), "Eagon-Northcott ranks");
                   return o;
                 }});
  return out;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;

  for (const auto& c : criteria(7, 0, "")) {
    const auto start = clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double t = std::chrono::duration<double>(clock::now() - start).count();
    const bool pass = o.ok && t < c.limit_seconds;
    if (!pass) ++failures;
    std::printf("criterion %2d %s  %-48s %8.3f s (limit %.0f s)%s%s\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                t, c.limit_seconds, o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
  }

  // The d = 5 analogues of 1-10 with rectangle (2,5), under one budget.
  {
    const double limit = 120.0;
    const auto start = clock::now();
    std::string detail;
    for (const auto& c : criteria(5, 0, "d=5 ")) {
      Outcome o;
      try {
        o = c.body();
      } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
      }
      if (!o.ok) detail += "[" + std::to_string(c.id) + "] " + o.detail;
    }
    const double t = std::chrono::duration<double>(clock::now() - start).count();
    const bool pass = detail.empty() && t < limit;
    if (!pass) ++failures;
    std::printf("criterion 11 %s  %-48s %8.3f s (limit %.0f s)%s%s\n", pass ? "PASS" : "FAIL",
                "d=5 analogues of 1-10, rectangle (2,5)", t, limit, detail.empty() ? "" : "  ", detail.c_str());
  }
  std::printf("acceptance: %s (%d failing)\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
