#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include <json.hpp>

#include "wittsplit/catalog.hpp"

using namespace wittsplit;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wittsplit");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

GroupSpec spec(Family f, int n, int p, int r = 1) { return GroupSpec{f, n, p, r, 1, {}}; }

}  // namespace

TEST_CASE("built-in catalog shape") {
  const auto c = builtin_catalog();
  CHECK(c.size() == 28);
  CHECK(filter_catalog(c, "kind=gamma").size() == 26);
  CHECK(filter_catalog(c, "kind=quotient").size() == 2);
  std::set<std::string> ids;
  for (const auto& e : c) {
    CAPTURE(e.id);
    ids.insert(e.id);
    CHECK_FALSE(e.basis.empty());
    if (e.expected == "Zero") CHECK(e.method() == "full-Sylow");
    if (e.is_quotient()) CHECK(e.expected == "NonSplit");
    else CHECK((e.expected == "Zero" || e.expected == "NonZero"));
  }
  CHECK(ids.size() == c.size());
  int zero = 0;
  for (const auto& e : c) zero += e.expected == "Zero";
  CHECK(zero == 10);
  // Only the G2 entry over F3 uses a restriction.
  const auto g3 = filter_catalog(c, "id=G2/F3");
  REQUIRE(g3.size() == 1);
  CHECK(g3[0].method() == "subgroup-restriction");
  CHECK(g3[0].subgroup.roots.size() == 3);
}

TEST_CASE("catalog filters") {
  const auto c = builtin_catalog();
  CHECK(filter_catalog(c, "").size() == 28);
  CHECK(filter_catalog(c, "q=2").size() == 14);
  CHECK(filter_catalog(c, "q=3").size() == 6);
  CHECK(filter_catalog(c, "q=4").size() == 5);
  CHECK(filter_catalog(c, "family=PGSp4").size() == 2);
  CHECK(filter_catalog(c, "family=PGSp").size() == 2);
  CHECK(filter_catalog(c, "family=G2").size() == 2);
  CHECK(filter_catalog(c, "family=SL, n=2").size() == 5);
  CHECK(filter_catalog(c, "p=2,n=3").size() == 7);
  CHECK(filter_catalog(c, "q=7").empty());
  CHECK_THROWS_AS(filter_catalog(c, "colour=red"), DomainError);
  CHECK_THROWS_AS(filter_catalog(c, "q"), DomainError);
  CHECK_THROWS_AS(filter_catalog(c, "q=two"), DomainError);
}

TEST_CASE("quotient ideals") {
  for (const auto& e : filter_catalog(builtin_catalog(), "kind=quotient")) {
    CAPTURE(e.id);
    CHECK(quotient_rows(e).size() == 6);
  }
}

TEST_CASE("simplicity rule") {
  CHECK(predicted_not_simple(spec(Family::SL, 3, 3)));
  CHECK(predicted_not_simple(spec(Family::SL, 2, 2)));
  CHECK(predicted_not_simple(spec(Family::PGL, 2, 2, 2)));
  CHECK(predicted_not_simple(spec(Family::SL, 4, 2)));
  CHECK(predicted_not_simple(spec(Family::Sp, 4, 2)));
  CHECK(predicted_not_simple(spec(Family::G2, 14, 3)));
  CHECK_FALSE(predicted_not_simple(spec(Family::SL, 2, 3)));
  CHECK_FALSE(predicted_not_simple(spec(Family::SU, 3, 2)));
  CHECK_FALSE(predicted_not_simple(spec(Family::PGSp, 4, 3)));
  CHECK_FALSE(predicted_not_simple(spec(Family::G2, 14, 2)));
  CHECK(center_order(spec(Family::SL, 4, 2)) == 4);
  CHECK(isogeny_degree(spec(Family::PGSp, 4, 2)) == 2);
  CHECK(lie_suite_instances().size() >= 20);
}

TEST_CASE("classification report") {
  RunOptions o;
  o.timing = false;
  const auto entries = filter_catalog(builtin_catalog(), "q=3");
  const RunReport a = run_classify(entries, o);
  REQUIRE(a.entries.size() == 6);
  for (const auto& e : a.entries) {
    CAPTURE(e.entry.id);
    CHECK(e.match());
    CHECK(e.reruns.size() == 3);
    CHECK(e.reruns_consistent);
    if (e.computed == "Zero") {
      CHECK(e.witness_verified);
      CHECK_FALSE(e.witness.empty());
      REQUIRE(e.mutation_detected.has_value());
      CHECK(*e.mutation_detected);
    } else {
      CHECK(e.certificate.has_value());
    }
  }
  CHECK(a.pass());

  SUBCASE("byte-identical across runs and worker counts") {
    const std::string ja = report_json(a, false);
    CHECK(report_json(run_classify(entries, o), false) == ja);
    RunOptions o4 = o;
    o4.jobs = 4;
    CHECK(report_json(run_classify(entries, o4), false) == ja);
    CHECK(report_csv(run_classify(entries, o4), false) == report_csv(a, false));
  }
  SUBCASE("JSON schema") {
    const auto j = nlohmann::json::parse(report_json(a));
    for (const char* k : {"version", "seed", "entries", "suites", "pass"}) CHECK(j.contains(k));
    for (const auto& e : j["entries"])
      for (const char* k : {"id", "family", "n", "q", "level", "expected", "computed", "method", "sylow_order",
                            "module_dim_fp", "elapsed_ms"})
        CHECK(e.contains(k));
    CHECK(j["pass"] == true);
    CHECK(j["suites"].contains("section_controls"));
  }
  SUBCASE("CSV rows") {
    std::istringstream csv(report_csv(a));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 7);
  }
}

TEST_CASE("empty selection passes vacuously") {
  const RunReport r = run_classify(filter_catalog(builtin_catalog(), "q=7"), RunOptions{});
  CHECK(r.entries.empty());
  CHECK(r.pass());
}

TEST_CASE("guard violations are reported per entry") {
  RunOptions o;
  o.unknown_guard = 10;
  const RunReport r = run_classify(filter_catalog(builtin_catalog(), "id=PGL3/F2"), o);
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].computed == "Error");
  CHECK_FALSE(r.entries[0].error.empty());
  CHECK_FALSE(r.pass());
}

TEST_CASE("command line exit codes") {
  CHECK(run_cli({"classify", "--filter", "q=3", "--no-timing"}) == 0);
  CHECK(run_cli({"classify", "--filter", "bogus=1"}) == 2);
  CHECK(run_cli({"classify", "--jobs", "0"}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"witness", "quaternion"}) == 0);
  CHECK(run_cli({"witness", "PGU3/F2"}) == 0);
  CHECK(run_cli({"witness", "nonexistent"}) == 2);
  CHECK(run_cli({"dump-rootdata", "G2"}) == 0);
  CHECK(run_cli({"dump-rootdata", "E9"}) == 2);
  CHECK(run_cli({"extension", "--family", "SL", "--n", "3", "--p", "2"}) == 0);
  CHECK(run_cli({"extension", "--family", "Spin", "--n", "3"}) == 2);
  CHECK(run_cli({"extension", "--family", "G2", "--p", "3", "--long-roots"}) == 0);
  // The exit code follows the report's pass flag.
  RunOptions o;
  const bool pgsp_pass = run_classify(filter_catalog(builtin_catalog(), "family=PGSp4"), o).pass();
  CHECK(run_cli({"classify", "--filter", "family=PGSp4"}) == (pgsp_pass ? 0 : 1));
}
