#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "wittsplit/catalog.hpp"
#include "wittsplit/lie_analysis.hpp"
#include "wittsplit/root_data.hpp"

namespace wittsplit {

namespace {

struct Common {
  std::string json_path, csv_path;
  uint64_t seed = 1;
  int jobs = 1;
  bool guard_override = false;
  bool no_timing = false;

  RunOptions options() const {
    RunOptions o;
    o.seed = seed;
    o.jobs = jobs;
    o.timing = !no_timing;
    if (guard_override) {
      o.unknown_guard = std::numeric_limits<long>::max();
      o.line_guard = std::numeric_limits<uint64_t>::max();
    }
    return o;
  }
};

void add_common(CLI::App* sub, Common& c, bool with_filter_outputs) {
  sub->add_option("--json", c.json_path, "Write the JSON report to this path");
  if (with_filter_outputs) sub->add_option("--csv", c.csv_path, "Write a CSV summary to this path");
  sub->add_option("--seed", c.seed, "Seed for randomized checks")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  sub->add_flag("--guard-override", c.guard_override, "Lift the size guards");
  sub->add_flag("--no-timing", c.no_timing, "Write elapsed_ms as 0 (byte-identical reports)");
}

bool write_file(const std::string& path, const std::string& text) {
  if (path.empty()) return true;
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

void print_checks(const SuiteReport& s) {
  for (const auto& c : s.checks)
    std::printf("%-4s %-28s %-26s expected=%s computed=%s%s%s\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                c.subject.c_str(), c.expected.c_str(), c.computed.c_str(), c.note.empty() ? "" : "  # ",
                c.note.c_str());
  std::printf("suite %s: %s\n", s.name.c_str(), s.pass() ? "pass" : "FAIL");
}

void print_entries(const RunReport& r) {
  std::printf("%-22s %-9s %-12s %-5s %-21s %6s %4s %8s\n", "id", "expected", "computed", "match", "method", "|Q|",
              "dim", "ms");
  for (const auto& e : r.entries) {
    std::printf("%-22s %-9s %-12s %-5s %-21s %6llu %4d %8.1f\n", e.entry.id.c_str(), e.entry.expected.c_str(),
                e.computed.c_str(), e.match() ? "yes" : "NO", e.method.c_str(),
                static_cast<unsigned long long>(e.sylow_order), e.module_dim_fp, e.elapsed_ms);
    if (!e.error.empty()) std::printf("    error: %s\n", e.error.c_str());
  }
}

int finish(const RunReport& r, const Common& c) {
  const bool timing = !c.no_timing;
  if (!write_file(c.json_path, report_json(r, timing))) return 2;
  if (!write_file(c.csv_path, report_csv(r, timing))) return 2;
  std::printf("overall: %s\n", r.pass() ? "pass" : "FAIL");
  return r.pass() ? 0 : 1;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, ',')) out.push_back(std::stoi(t));
  return out;
}

std::vector<std::pair<int, int>> parse_positions(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, ',')) {
    const auto dash = t.find('-');
    if (dash == std::string::npos) throw DomainError("support positions are written i-j");
    out.emplace_back(std::stoi(t.substr(0, dash)), std::stoi(t.substr(dash + 1)));
  }
  return out;
}

void print_matrix(const WittRingContext& R, int n, const Matrix& m) {
  for (int i = 0; i < n; ++i) {
    std::printf("    [");
    for (int j = 0; j < n; ++j) std::printf(" %8s", R.encode(R.from_code(m[i * n + j])).c_str());
    std::printf(" ]\n");
  }
}

int witness_quaternion() {
  const QuaternionFixture f = quaternion_fixture();
  std::printf("ring: W2(F4) = GR(4,2), a = code %u\n", f.a);
  std::printf("lift pair (t_a, t_a+1): (%s, %s); %zu pair(s) in the ring\n",
              f.ring->encode(f.ring->from_code(f.t_a)).c_str(), f.ring->encode(f.ring->from_code(f.t_a1)).c_str(),
              f.lift_pairs.size());
  for (size_t i = 0; i < f.table.lifts.size(); ++i) {
    std::printf("  X%zu =\n", i + 1);
    print_matrix(*f.ring, f.table.n, f.table.lifts[i]);
  }
  const QuaternionReport q = verify_quaternion(f);
  std::printf("lift identities: %s\nrelations: %s\ngroup order: %llu\ninvolutions: %d\n",
              q.lift_identities ? "ok" : "FAIL", q.relations ? "ok" : "FAIL",
              static_cast<unsigned long long>(q.group_order), q.involutions);
  std::printf("reduction injective: %s\nreduction onto the tau-fixed unitriangular group: %s\n",
              q.reduction_injective ? "ok" : "FAIL", q.reduction_onto_fixed ? "ok" : "FAIL");
  const CorruptionSweep sw = quaternion_corruption_sweep(f);
  std::printf("single-entry corruptions: %ld tried, %ld still verify\n", sw.tried, sw.still_verified);
  const bool ok = q.ok() && sw.still_verified == 0;
  std::printf("verification: %s\n", ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

int witness_entry(const CatalogEntry& e, const RunOptions& o) {
  const EntryRecord r = classify_entry(e, o);
  std::printf("%s: expected %s, computed %s (%s, %s)\n", e.id.c_str(), e.expected.c_str(), r.computed.c_str(),
              r.method.c_str(), r.subgroup.c_str());
  if (!r.error.empty()) std::printf("error: %s\n", r.error.c_str());
  for (size_t i = 0; i < r.witness.size(); ++i) std::printf("  s(g%zu) = %s\n", i + 1, r.witness[i].c_str());
  if (!r.witness.empty()) std::printf("witness verified on all pairs: %s\n", r.witness_verified ? "yes" : "no");
  if (r.certificate)
    std::printf("inconsistent row %ld: g = %s, h = %s, coordinate %d\n", r.certificate->row, r.certificate_g.c_str(),
                r.certificate_h.c_str(), r.certificate->coordinate);
  return r.match() ? 0 : 1;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Splitting of reductions of reductive groups over truncated Witt rings"};
  app.require_subcommand(1);

  Common c;
  std::string filter;
  auto* classify = app.add_subcommand("classify", "Run the built-in catalog");
  classify->add_option("--filter", filter, "Comma-separated key=value terms (q, p, n, family, id, kind)");
  add_common(classify, c, true);

  auto* lie = app.add_subcommand("lie-suite", "Adjoint-module structure checks");
  add_common(lie, c, false);

  auto* props = app.add_subcommand("props", "Randomized and exhaustive property checks");
  add_common(props, c, false);

  std::string witness_name;
  auto* witness = app.add_subcommand("witness", "Print and verify a witness: 'quaternion' or a catalog id");
  witness->add_option("name", witness_name, "quaternion, or a catalog id such as PGU3/F2")->required();
  witness->add_option("--seed", c.seed, "Seed for randomized sections");

  std::string family, roots, support, quotient = "none";
  int n = 2, p = 2, r = 1;
  bool long_roots = false, all_pairs = false;
  uint64_t section_seed = 0;
  auto* ext = app.add_subcommand("extension", "Decide splitting for a custom group and subgroup");
  ext->add_option("--family", family, "SL, GL, Sp, GSp, SU, GU, PGL, PGSp, PGU or G2")->required();
  ext->add_option("--n", n, "Matrix size")->capture_default_str();
  ext->add_option("--p", p, "Characteristic")->capture_default_str();
  ext->add_option("--r", r, "Degree of the residue field over F_p")->capture_default_str();
  ext->add_option("--roots", roots, "Positive root ids of the subgroup, comma separated");
  ext->add_flag("--long-roots", long_roots, "Restrict to the long positive roots");
  ext->add_option("--support", support, "Strictly upper positions i-j, comma separated");
  ext->add_option("--quotient", quotient, "Ideal to divide by")
      ->check(CLI::IsMember({"none", "derived", "maximal", "lambda-bracket"}))
      ->capture_default_str();
  ext->add_flag("--all-pairs", all_pairs, "Use every pair (g, h) as an equation");
  ext->add_option("--section-seed", section_seed, "Randomize the set-theoretic section (0: Teichmueller)");
  ext->add_flag("--guard-override", c.guard_override, "Lift the unknown guard");

  std::string root_type;
  auto* dump = app.add_subcommand("dump-rootdata", "Print root data and structure constants as JSON");
  dump->add_option("type", root_type, "A1, A2, A3, C2, C3 or G2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify) {
      std::vector<CatalogEntry> entries;
      try {
        entries = filter_catalog(builtin_catalog(), filter);
      } catch (const DomainError& e) {
        std::cerr << "bad filter: " << e.what() << "\n";
        return 2;
      }
      const RunReport rep = run_classify(entries, c.options());
      print_entries(rep);
      for (const auto& s : rep.suites)
        for (const auto& ch : s.checks)
          if (!ch.pass) std::printf("control FAIL: %s %s (%s)\n", ch.name.c_str(), ch.subject.c_str(), ch.computed.c_str());
      return finish(rep, c);
    }
    if (*lie || *props) {
      RunReport rep;
      rep.seed = c.seed;
      rep.suites.push_back(*lie ? run_lie_suite(c.options()) : run_property_suite(c.options()));
      print_checks(rep.suites.back());
      return finish(rep, c);
    }
    if (*witness) {
      if (witness_name == "quaternion") return witness_quaternion();
      const auto hits = filter_catalog(builtin_catalog(), "id=" + witness_name);
      if (hits.empty()) {
        std::cerr << "unknown witness: " << witness_name << "\n";
        return 2;
      }
      RunOptions o = c.options();
      o.reruns = 0;
      return witness_entry(hits[0], o);
    }
    if (*ext) {
      GroupSpec spec;
      try {
        const auto f = parse_family(family);
        if (!f) throw DomainError("unknown family " + family);
        spec = GroupSpec{*f, *f == Family::G2 ? 14 : n, p, r, 1, {}};
        GroupContext probe(spec);
        ExtensionOptions eo;
        if (long_roots) {
          std::vector<int> lr;
          for (int a = 0; a < probe.roots().num_positive; ++a)
            if (!probe.roots().is_short(a)) lr.push_back(a);
          eo.subgroup = SubgroupChoice::by_roots(lr);
        } else if (!roots.empty()) {
          eo.subgroup = SubgroupChoice::by_roots(parse_int_list(roots));
        } else if (!support.empty()) {
          eo.subgroup = SubgroupChoice::by_support(parse_positions(support));
        }
        if (quotient != "none") {
          LieModule L(spec);
          Submodule nsub;
          if (quotient == "derived") nsub = L.derived_subalgebra();
          if (quotient == "maximal") {
            const auto maxes = maximal_submodules(L.module_ops());
            if (maxes.size() != 1) throw DomainError("maximal submodule is not unique");
            nsub = maxes[0];
          }
          if (quotient == "lambda-bracket") {
            const Submodule lam = L.lambda_image();
            KRows rows;
            for (const auto& x : lam.basis)
              for (const auto& y : lam.basis) rows.push_back(L.bracket(x, y));
            nsub = L.span(rows);
          }
          KRows amb;
          for (const auto& v : nsub.basis) amb.push_back(L.ambient(v));
          if (!amb.empty()) eo.quotient = amb;
        }
        eo.section_seed = section_seed;
        const ExtensionInstance inst(spec, eo);
        const SplitDecision d = decide_split(inst, all_pairs ? SolveMode::AllPairs : SolveMode::Generators,
                                             c.guard_override ? std::numeric_limits<long>::max() : 20000);
        const SylowCheck sc = sylow_check(spec);
        std::printf("group: %s\nsubgroup: %s, |Q| = %d\nmodule dim over F_p: %d (full %d)\n", spec.label().c_str(),
                    eo.subgroup.describe().c_str(), inst.order(), inst.dim(), inst.full_dim());
        std::printf("unknowns: %ld, rank: %ld\nverdict: %s\n", d.unknowns, d.rank, verdict_name(d.verdict).c_str());
        if (d.verdict == Verdict::Split)
          std::printf("witness verified: %s\n", d.witness_verified ? "yes" : "no");
        else
          std::printf("certificate row %ld (g %d, h %d, coordinate %d)\n", d.certificate.row, d.certificate.g,
                      d.certificate.h, d.certificate.coordinate);
        std::printf("Sylow index prime to p: %s\n", sc.index_coprime ? "yes" : "no");
        return d.verdict == Verdict::Split && !d.witness_verified ? 1 : 0;
      } catch (const DomainError& e) {
        std::cerr << "invalid extension: " << e.what() << "\n";
        return 2;
      } catch (const std::invalid_argument& e) {
        std::cerr << "invalid number in a list option\n";
        return 2;
      }
    }
    if (*dump) {
      try {
        std::cout << dump_root_data_json(build_chevalley_data(build_root_system(root_type)));
      } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace wittsplit
