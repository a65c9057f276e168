#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wittsplit/group_model.hpp"
#include "wittsplit/section_engine.hpp"

namespace wittsplit {

enum class QuotientKind { None, BracketOfLambda, MaximalSubmodule };

struct CatalogEntry {
  std::string id;
  GroupSpec spec;
  // "Zero"/"NonZero" for gamma entries, "Split"/"NonSplit" for quotient entries.
  std::string expected;
  std::string basis;  // short note on where the expected value comes from
  SubgroupChoice subgroup;  // Sylow: full-Sylow method, otherwise a restriction
  QuotientKind quotient = QuotientKind::None;

  bool is_quotient() const { return quotient != QuotientKind::None; }
  std::string method() const;
};

std::vector<CatalogEntry> builtin_catalog();

// Comma-separated key=value terms, all of which must match. Keys: q, p, n,
// family (with or without the size, e.g. PGSp or PGSp4), id, kind (gamma or
// quotient). Throws DomainError on an unknown key or malformed term.
std::vector<CatalogEntry> filter_catalog(const std::vector<CatalogEntry>& all, const std::string& filter);

// Ambient Lie vectors spanning the ideal of a quotient entry.
KRows quotient_rows(const CatalogEntry& e);

struct RunOptions {
  uint64_t seed = 1;
  int jobs = 1;
  bool timing = true;  // false: elapsed_ms is not measured
  long unknown_guard = 20000;
  uint64_t line_guard = 2000000;
  int reruns = 3;
};

struct EntryRecord {
  CatalogEntry entry;
  std::string computed;
  std::string method;
  std::string subgroup;
  uint64_t sylow_order = 0;
  bool index_coprime = false;
  int module_dim_fp = 0;
  long unknowns = 0, rank = 0;
  double elapsed_ms = 0;
  bool witness_verified = false;
  std::vector<std::string> witness;  // twisted section on the generators, level-2 encoding
  std::optional<CertificateRow> certificate;
  std::string certificate_g, certificate_h;  // level-1 encodings
  std::vector<std::string> reruns;
  bool reruns_consistent = true;
  std::optional<bool> mutation_detected;  // Split verdicts only
  std::string error;

  bool match() const { return error.empty() && computed == entry.expected; }
};

struct CheckRecord {
  std::string name;     // e.g. "simplicity"
  std::string subject;  // instance label
  std::string expected, computed;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string name;
  std::vector<CheckRecord> checks;
  bool pass() const;
  // Checks with the given name (all when empty).
  std::vector<CheckRecord> named(const std::string& name) const;
};

struct RunReport {
  uint64_t seed = 1;
  std::vector<EntryRecord> entries;
  std::vector<SuiteReport> suites;
  bool pass() const;
};

EntryRecord classify_entry(const CatalogEntry& e, const RunOptions& opts);
// Entries run on a pool of opts.jobs workers; records keep catalog order.
// Adds a "section_controls" suite (randomized sections, mutation controls).
RunReport run_classify(const std::vector<CatalogEntry>& entries, const RunOptions& opts);

// Center order o(H) and isogeny degree c(H) of the algebraic group.
int center_order(const GroupSpec& spec);
int isogeny_degree(const GroupSpec& spec);
// Dynkin letter and rank of the root system of the family.
std::pair<char, int> dynkin_type(const GroupSpec& spec);
// Lie(H) is not simple iff the type is A_{pn-1}, or p = 2 and the type is
// B/C (including A1 = C1) or D_n, n >= 3 (including A3 = D3), or p = 3 and G2.
bool predicted_not_simple(const GroupSpec& spec);

std::vector<GroupSpec> lie_suite_instances();
SuiteReport run_lie_suite(const RunOptions& opts);
SuiteReport run_property_suite(const RunOptions& opts);

// timing = false writes elapsed_ms as 0, for byte-identical reports.
std::string report_json(const RunReport& r, bool timing = true);
std::string report_csv(const RunReport& r, bool timing = true);

int cli_main(int argc, char** argv);

}  // namespace wittsplit
