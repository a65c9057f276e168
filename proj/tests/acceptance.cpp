// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <string>
#include <vector>

#include "wittsplit/catalog.hpp"

using namespace wittsplit;

namespace {

int failures = 0;

void report(int n, const char* title, bool ok, const std::string& detail) {
  std::printf("criterion %d (%s): %s - %s\n", n, title, ok ? "PASS" : "FAIL", detail.c_str());
  failures += !ok;
}

// All checks of the given names pass; failing subjects are appended to `bad`.
bool all_pass(const SuiteReport& s, const std::vector<std::string>& names, int& count, std::string& bad) {
  bool ok = true;
  for (const auto& n : names)
    for (const auto& c : s.named(n)) {
      ++count;
      if (!c.pass) {
        ok = false;
        bad += (bad.empty() ? "" : "; ") + c.name + " " + c.subject + " (computed " + c.computed + ")";
      }
    }
  return ok;
}

}  // namespace

int main() {
  RunOptions o;
  const auto catalog = builtin_catalog();

  // 1. Classification of the 26 gamma entries.
  const RunReport gamma = run_classify(filter_catalog(catalog, "kind=gamma"), o);
  {
    int matched = 0;
    double total = 0, worst = 0;
    std::string bad;
    for (const auto& e : gamma.entries) {
      matched += e.match();
      total += e.elapsed_ms;
      worst = std::max(worst, e.elapsed_ms);
      if (!e.match()) bad += "; " + e.entry.id + " expected " + e.entry.expected + ", computed " + e.computed;
    }
    const bool ok = matched == 26 && gamma.entries.size() == 26 && worst <= 60000 && total <= 600000;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%zu match, slowest %.0f ms, total %.0f ms", matched, gamma.entries.size(),
                  worst, total);
    report(1, "classification", ok, buf + bad);
  }

  // 2. Quaternion lift table and its corruptions.
  {
    const QuaternionFixture f = quaternion_fixture();
    const QuaternionReport q = verify_quaternion(f);
    const CorruptionSweep sw = quaternion_corruption_sweep(f);
    const bool ok = f.lift_pairs.size() == 1 && q.ok() && sw.tried > 0 && sw.still_verified == 0;
    report(2, "witness fixture", ok,
           "order " + std::to_string(q.group_order) + ", lift identities " + (q.lift_identities ? "ok" : "fail") +
               ", " + std::to_string(sw.still_verified) + " of " + std::to_string(sw.tried) +
               " corruptions still verify");
  }

  // 3. Quotient extensions.
  const RunReport quot = run_classify(filter_catalog(catalog, "kind=quotient"), o);
  {
    bool ok = quot.entries.size() == 2;
    std::string detail;
    for (const auto& e : quot.entries) {
      ok = ok && e.computed == "NonSplit";
      detail += (detail.empty() ? "" : ", ") + e.entry.id + " " + e.computed;
    }
    report(3, "quotient extensions", ok, detail);
  }

  // 4. Lie suite.
  {
    const SuiteReport lie = run_lie_suite(o);
    int count = 0;
    std::string bad;
    const bool ok = all_pass(lie,
                             {"simplicity", "invariant_lines", "unique_simple_submodule", "nonsplit_lambda_mod_ideal",
                              "quotient_simple_nontrivial", "unique_maximal_submodule"},
                             count, bad) &&
                    lie.named("simplicity").size() >= 20;
    report(4, "Lie suite", ok,
           std::to_string(count) + " checks over " + std::to_string(lie.named("simplicity").size()) + " instances" +
               (bad.empty() ? "" : "; failing: " + bad));
  }

  const SuiteReport props = run_property_suite(o);

  // 5. Structural invariants and section independence.
  {
    int count = 0;
    std::string bad;
    bool ok = all_pass(props, {"commutator_identity", "sylow_order", "kernel_additivity"}, count, bad);
    int reruns = 0;
    for (const auto* rep : {&gamma, &quot})
      for (const auto& s : rep->suites) ok = all_pass(s, {"section_reruns"}, reruns, bad) && ok;
    for (const auto* rep : {&gamma, &quot})
      for (const auto& e : rep->entries) ok = ok && e.reruns.size() >= 3;
    report(5, "structural invariants", ok,
           std::to_string(count) + " property checks, " + std::to_string(reruns) + " entries with 3 reruns" +
               (bad.empty() ? "" : "; failing: " + bad));
  }

  // 6. Ingredient checks.
  {
    int count = 0;
    std::string bad;
    const bool ok =
        all_pass(props, {"proper_image", "pth_power_kernel", "commutator_formula_w3", "torus_squares"}, count, bad) &&
        count == 4;
    report(6, "ingredient checks", ok, std::to_string(count) + " checks" + (bad.empty() ? "" : "; failing: " + bad));
  }

  // 7. Structure constants against root strings and the divisibility pattern.
  {
    int count = 0;
    std::string bad;
    const bool ok = all_pass(props, {"root_string_constants", "divisibility_pattern"}, count, bad) && count > 0;
    report(7, "oracle integrity", ok,
           std::to_string(count) + " root-system checks" + (bad.empty() ? "" : "; failing: " + bad));
  }
  return failures ? 1 : 0;
}
