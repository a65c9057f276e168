#include "wittsplit/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wittsplit/lie_analysis.hpp"
#include "wittsplit/root_data.hpp"

namespace wittsplit {

namespace {

GroupSpec gs(Family f, int n, int p, int r = 1) { return GroupSpec{f, n, p, r, 1, {}}; }

CatalogEntry gamma_entry(Family f, int n, int p, int r, const char* expected, const char* basis) {
  CatalogEntry e;
  e.spec = gs(f, n, p, r);
  e.id = e.spec.label();
  e.expected = expected;
  e.basis = basis;
  return e;
}

std::vector<int> long_positive_roots(const GroupSpec& spec) {
  GroupContext g(spec);
  std::vector<int> out;
  for (int a = 0; a < g.roots().num_positive; ++a)
    if (!g.roots().is_short(a)) out.push_back(a);
  return out;
}

uint64_t ipow(uint64_t b, int e) {
  uint64_t out = 1;
  while (e-- > 0) out *= b;
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

bool family_matches(const GroupSpec& s, const std::string& v) {
  const std::string fam = family_name(s.family);
  const std::string label = s.label();
  const std::string head = label.substr(0, label.find('/'));
  return v == fam || v == fam + std::to_string(s.n) || v == head;
}

KRows ambient_rows(const LieModule& L, const Submodule& s) {
  KRows out;
  for (const auto& v : s.basis) out.push_back(L.ambient(v));
  return out;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// ------------------------------------------------------------------ catalog

std::string CatalogEntry::method() const {
  return subgroup.kind == SubgroupChoice::Sylow ? "full-Sylow" : "subgroup-restriction";
}

std::vector<CatalogEntry> builtin_catalog() {
  using F = Family;
  std::vector<CatalogEntry> c = {
      gamma_entry(F::PGL, 2, 2, 1, "Zero", "adjoint classification, q = 2"),
      gamma_entry(F::PGL, 2, 3, 1, "Zero", "adjoint classification, q = 3"),
      gamma_entry(F::PGL, 2, 2, 2, "Zero", "adjoint classification, q = 4; also the Weil restriction row over Z/4"),
      gamma_entry(F::PGL, 3, 2, 1, "Zero", "adjoint classification, q = 2"),
      gamma_entry(F::PGU, 3, 2, 1, "Zero", "adjoint classification, q = 2"),
      gamma_entry(F::PGU, 4, 2, 1, "Zero", "adjoint classification, q = 2"),
      gamma_entry(F::G2, 14, 2, 1, "Zero", "adjoint classification, q = 2, split G2"),
      gamma_entry(F::SL, 3, 2, 1, "Zero", "simply connected classification, q = 2"),
      gamma_entry(F::SU, 3, 2, 1, "Zero", "simply connected classification, q = 2"),
      gamma_entry(F::SL, 2, 3, 1, "Zero", "simply connected classification, q = 3"),
      gamma_entry(F::SL, 2, 2, 1, "NonZero", "exhaustive search for an order-2 lift"),
      gamma_entry(F::SL, 2, 2, 2, "NonZero", "unipotent commutator obstruction, SL2 and SU"),
      gamma_entry(F::SU, 4, 2, 1, "NonZero", "unipotent commutator obstruction, SL2 and SU"),
      gamma_entry(F::SU, 3, 2, 2, "NonZero", "unipotent commutator obstruction, SL2 and SU"),
      gamma_entry(F::SL, 2, 5, 1, "NonZero", "p-th power obstruction in rank one"),
      gamma_entry(F::SL, 2, 3, 2, "NonZero", "p-th power obstruction in rank one"),
      gamma_entry(F::PGL, 2, 2, 3, "NonZero", "p-th power obstruction in rank one"),
      gamma_entry(F::PGL, 3, 3, 1, "NonZero", "nonvanishing 31 entry of a commutator word"),
      gamma_entry(F::PGSp, 4, 3, 1, "NonZero", "nonvanishing entry of a commutator word"),
      gamma_entry(F::PGSp, 4, 2, 1, "NonZero", "quotient by the simply connected bracket has no section"),
      gamma_entry(F::Sp, 4, 2, 1, "NonZero", "excluded from the simply connected q = 2 list"),
      gamma_entry(F::PGL, 4, 2, 1, "NonZero", "commuting root lifts forced by a diagonal entry"),
      gamma_entry(F::SL, 3, 2, 2, "NonZero", "commutator obstruction over F4"),
      gamma_entry(F::PGL, 3, 2, 2, "NonZero", "commutator obstruction over F4"),
      gamma_entry(F::PGU, 3, 3, 1, "NonZero", "commutator obstruction in the unitary Sylow"),
      gamma_entry(F::G2, 14, 3, 1, "NonZero", "restriction to the long-root A2 subgroup"),
  };
  for (auto& e : c)
    if (e.spec.family == Family::G2 && e.spec.p == 3) e.subgroup = SubgroupChoice::by_roots(long_positive_roots(e.spec));

  CatalogEntry q15;
  q15.spec = gs(Family::GSp, 4, 2);
  q15.id = "GSp4/F2:mod-bracket";
  q15.expected = "NonSplit";
  q15.basis = "GSp4 modulo the bracket of the simply connected image";
  q15.quotient = QuotientKind::BracketOfLambda;
  c.push_back(q15);

  CatalogEntry q18;
  q18.spec = gs(Family::Sp, 4, 2);
  q18.id = "Sp4/F2:mod-maximal";
  q18.expected = "NonSplit";
  q18.basis = "Sp4 modulo its unique maximal submodule";
  q18.quotient = QuotientKind::MaximalSubmodule;
  c.push_back(q18);
  return c;
}

std::vector<CatalogEntry> filter_catalog(const std::vector<CatalogEntry>& all, const std::string& filter) {
  std::vector<std::pair<std::string, std::string>> terms;
  std::stringstream ss(filter);
  std::string term;
  while (std::getline(ss, term, ',')) {
    term = trim(term);
    if (term.empty()) continue;
    const auto eq = term.find('=');
    if (eq == std::string::npos) throw DomainError("filter term without '=': " + term);
    const std::string key = trim(term.substr(0, eq)), val = trim(term.substr(eq + 1));
    if (key != "q" && key != "p" && key != "n" && key != "family" && key != "id" && key != "kind")
      throw DomainError("unknown filter key: " + key);
    if (val.empty()) throw DomainError("empty filter value for " + key);
    terms.emplace_back(key, val);
  }
  auto as_int = [](const std::string& v) {
    size_t pos = 0;
    long x = -1;
    try {
      x = std::stol(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != v.size()) throw DomainError("filter value is not an integer: " + v);
    return x;
  };
  std::vector<CatalogEntry> out;
  for (const auto& e : all) {
    bool ok = true;
    for (const auto& [key, val] : terms) {
      if (key == "q") ok = ok && static_cast<long>(ipow(e.spec.p, e.spec.r)) == as_int(val);
      if (key == "p") ok = ok && e.spec.p == as_int(val);
      if (key == "n") ok = ok && e.spec.n == as_int(val);
      if (key == "family") ok = ok && family_matches(e.spec, val);
      if (key == "id") ok = ok && e.id == val;
      if (key == "kind") {
        if (val != "gamma" && val != "quotient") throw DomainError("kind is gamma or quotient");
        ok = ok && e.is_quotient() == (val == "quotient");
      }
    }
    if (ok) out.push_back(e);
  }
  return out;
}

KRows quotient_rows(const CatalogEntry& e) {
  LieModule L(e.spec);
  switch (e.quotient) {
    case QuotientKind::None:
      return {};
    case QuotientKind::BracketOfLambda: {
      const Submodule lam = L.lambda_image();
      KRows c;
      for (const auto& x : lam.basis)
        for (const auto& y : lam.basis) c.push_back(L.bracket(x, y));
      return ambient_rows(L, L.span(c));
    }
    case QuotientKind::MaximalSubmodule: {
      const auto maxes = maximal_submodules(L.module_ops());
      if (maxes.size() != 1) throw DomainError("maximal submodule is not unique");
      return ambient_rows(L, maxes[0]);
    }
  }
  return {};
}

// ------------------------------------------------------------------ classify

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

std::vector<CheckRecord> SuiteReport::named(const std::string& name) const {
  std::vector<CheckRecord> out;
  for (const auto& c : checks)
    if (name.empty() || c.name == name) out.push_back(c);
  return out;
}

bool RunReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const EntryRecord& e) { return e.match(); }) &&
         std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.pass(); });
}

EntryRecord classify_entry(const CatalogEntry& e, const RunOptions& opts) {
  EntryRecord r;
  r.entry = e;
  r.method = e.method();
  r.subgroup = e.subgroup.describe();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ExtensionOptions eo;
    eo.subgroup = e.subgroup;
    if (e.is_quotient()) eo.quotient = quotient_rows(e);
    const ExtensionInstance ext(e.spec, eo);

    SplitDecision d;
    if (e.is_quotient()) {
      d = decide_split(ext, SolveMode::Generators, opts.unknown_guard);
      r.computed = verdict_name(d.verdict);
      r.index_coprime = sylow_check(e.spec).index_coprime;
    } else {
      const GammaResult g = e.subgroup.kind == SubgroupChoice::Sylow
                                ? classify_gamma(ext, opts.unknown_guard)
                                : certify_nonsplit_by_restriction(ext, opts.unknown_guard);
      d = g.decision;
      r.computed = gamma_name(g.gamma);
      r.index_coprime = g.sylow.index_coprime;
    }
    r.sylow_order = static_cast<uint64_t>(ext.order());
    r.module_dim_fp = d.module_dim_fp;
    r.unknowns = d.unknowns;
    r.rank = d.rank;
    r.witness_verified = d.witness_verified;
    if (d.verdict == Verdict::Split) {
      for (const auto& m : d.witness_generators) r.witness.push_back(ext.level2().encode(m));
    } else {
      r.certificate = d.certificate;
      r.certificate_g = ext.level1().encode(ext.elements()[d.certificate.g].m);
      r.certificate_h = ext.level1().encode(ext.elements()[d.certificate.h].m);
    }
    if (opts.timing) r.elapsed_ms = ms_since(t0);

    for (int i = 1; i <= opts.reruns; ++i) {
      ExtensionOptions ro = eo;
      ro.section_seed = opts.seed * 1000003ULL + static_cast<uint64_t>(i);
      const Verdict v = decide_split(ExtensionInstance(e.spec, ro), SolveMode::Generators, opts.unknown_guard).verdict;
      r.reruns.push_back(verdict_name(v));
      r.reruns_consistent = r.reruns_consistent && v == d.verdict;
    }
    if (d.verdict == Verdict::Split && ext.order() > 1 && ext.dim() > 0)
      r.mutation_detected = mutation_control(ext, opts.seed).detected();
  } catch (const std::exception& ex) {
    r.computed = "Error";
    r.error = ex.what();
    if (opts.timing) r.elapsed_ms = ms_since(t0);
  }
  return r;
}

RunReport run_classify(const std::vector<CatalogEntry>& entries, const RunOptions& opts) {
  RunReport rep;
  rep.seed = opts.seed;
  rep.entries.resize(entries.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < entries.size(); i = next++) rep.entries[i] = classify_entry(entries[i], opts);
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(entries.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SuiteReport controls{"section_controls", {}};
  for (const auto& e : rep.entries) {
    if (!e.error.empty()) continue;
    std::string got;
    for (const auto& v : e.reruns) got += (got.empty() ? "" : ",") + v;
    controls.checks.push_back({"section_reruns", e.entry.id, "consistent", got, e.reruns_consistent,
                               std::to_string(e.reruns.size()) + " randomized sections"});
    if (e.mutation_detected)
      controls.checks.push_back({"mutation_control", e.entry.id, "detected",
                                 *e.mutation_detected ? "detected" : "missed", *e.mutation_detected, ""});
    if (e.computed == "Zero" || (e.entry.is_quotient() && e.computed == "Split"))
      controls.checks.push_back({"witness_verified", e.entry.id, "true", e.witness_verified ? "true" : "false",
                                 e.witness_verified, ""});
  }
  rep.suites.push_back(std::move(controls));
  return rep;
}

// ------------------------------------------------------------------ Lie suite

int center_order(const GroupSpec& s) {
  switch (s.family) {
    case Family::SL:
    case Family::SU:
      return s.n;
    case Family::Sp:
      return 2;
    case Family::PGL:
    case Family::PGSp:
    case Family::PGU:
    case Family::G2:
      return 1;
    default:
      throw DomainError("center order is defined for semisimple families only");
  }
}

int isogeny_degree(const GroupSpec& s) {
  switch (s.family) {
    case Family::PGL:
    case Family::PGU:
      return s.n;
    case Family::PGSp:
      return 2;
    case Family::SL:
    case Family::SU:
    case Family::Sp:
    case Family::G2:
      return 1;
    default:
      throw DomainError("isogeny degree is defined for semisimple families only");
  }
}

std::pair<char, int> dynkin_type(const GroupSpec& s) {
  switch (s.family) {
    case Family::Sp:
    case Family::GSp:
    case Family::PGSp:
      return {'C', s.n / 2};
    case Family::G2:
      return {'G', 2};
    default:
      return {'A', s.n - 1};
  }
}

bool predicted_not_simple(const GroupSpec& s) {
  const auto [t, rank] = dynkin_type(s);
  const int p = s.p;
  if (t == 'A' && (rank + 1) % p == 0) return true;
  if (p == 2 && (t == 'B' || t == 'C' || (t == 'A' && rank == 1))) return true;
  if (p == 2 && ((t == 'D' && rank >= 3) || (t == 'A' && rank == 3))) return true;
  if (p == 3 && t == 'G') return true;
  return false;
}

std::vector<GroupSpec> lie_suite_instances() {
  using F = Family;
  std::vector<GroupSpec> out;
  for (F f : {F::SL, F::PGL})
    for (auto [p, r] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{2, 2}}) out.push_back(gs(f, 2, p, r));
  for (F f : {F::SL, F::PGL})
    for (int p : {2, 3}) out.push_back(gs(f, 3, p));
  out.push_back(gs(F::SL, 4, 2));
  out.push_back(gs(F::PGL, 4, 2));
  for (F f : {F::Sp, F::PGSp})
    for (int p : {2, 3}) out.push_back(gs(f, 4, p));
  out.push_back(gs(F::SU, 3, 2));
  out.push_back(gs(F::PGU, 3, 2));
  out.push_back(gs(F::G2, 14, 2));
  out.push_back(gs(F::G2, 14, 3));
  out.push_back(gs(F::Sp, 6, 2));
  out.push_back(gs(F::PGSp, 6, 2));
  return out;
}

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

bool is_adjoint(const GroupSpec& s) {
  return s.family == Family::PGL || s.family == Family::PGSp || s.family == Family::PGU || s.family == Family::G2;
}

void lie_checks(const GroupSpec& s, const RunOptions& opts, std::vector<CheckRecord>& out) {
  const std::string who = s.label();
  auto add = [&](const std::string& name, const std::string& expected, const std::string& computed,
                 const std::string& note = "") {
    out.push_back({name, who, expected, computed, expected == computed, note});
  };
  try {
    const LieModule L(s);
    const OperatorSet m = L.module_ops();
    const FieldContext& k = L.field();
    const int p = s.p, o = center_order(s), c = isogeny_degree(s);
    const bool simple = L.is_simple_algebra();
    add("simplicity", predicted_not_simple(s) ? "not simple" : "simple", simple ? "simple" : "not simple");

    // Lambda differs from the derived algebra only for p = 2, type C, simply connected.
    const auto [t, rank] = dynkin_type(s);
    const bool differ = p == 2 && (s.family == Family::Sp || (s.family == Family::SL && s.n == 2));
    add("lambda_vs_derived", differ ? "different" : "equal",
        L.lambda_image() == L.derived_subalgebra() ? "equal" : "different");

    if (std::gcd(p, o) == 1) {
      const auto lines = invariant_lines(m, LineMode::FixedPoints, opts.line_guard);
      add("invariant_lines", "0", std::to_string(lines.size()), "gcd(p, o(H)) = 1");
      if (simple) {
        const auto mins = minimal_submodules(m, LineMode::FixedPoints, opts.line_guard);
        add("irreducible", "yes", yes_no(mins.size() == 1 && mins[0] == L.whole()), "Lie algebra simple");
      }
    }
    const bool q2_sl2 = s.family == Family::SL && s.n == 2 && s.p == 2 && s.r == 1;
    if (o % p == 0 && std::gcd(p, c) == 1 && !q2_sl2) {
      const Submodule z = L.group_center();
      add("supplement", "none", supplement_exists(m, z, LineMode::FixedPoints, opts.line_guard) ? "exists" : "none",
          "center dim " + std::to_string(z.dim()));
    }

    const bool exceptional = is_adjoint(s) && ((p == 2 && t == 'C') || (p == 3 && t == 'G'));
    if (exceptional) {
      const Submodule I = L.exceptional_ideal();
      const auto mins = minimal_submodules(m, LineMode::FixedPoints, opts.line_guard);
      add("unique_simple_submodule", "exceptional ideal",
          mins.size() == 1 && mins[0] == I ? "exceptional ideal" : std::to_string(mins.size()) + " minimal",
          "ideal dim " + std::to_string(I.dim()));
      if (t == 'G' || (rank % 2 == 1 && rank >= 3)) {
        const Submodule lam = L.lambda_image();
        add("nonsplit_lambda_mod_ideal", "non-split", module_extension_splits(m, lam, I) ? "split" : "non-split");
        const OperatorSet q = quotient_by(restrict_to(m, lam), coords_in(k, lam, I));
        const auto qm = maximal_submodules(q, LineMode::FixedPoints, opts.line_guard);
        add("quotient_simple_nontrivial", "yes",
            yes_no(qm.size() == 1 && qm[0].dim() == 0 && !acts_trivially(q)),
            "quotient dim " + std::to_string(q.dim));
        if (t == 'C')
          add("quotient_lines", "0",
              std::to_string(invariant_lines(quotient_by(m, I), LineMode::FixedPoints, opts.line_guard).size()),
              "Lie(H)/I");
      }
    }
    // Simply connected type C: the derived algebra is the only maximal submodule (C1 needs k != F2).
    if ((s.family == Family::Sp || (s.family == Family::SL && s.n == 2)) && p == 2 && !q2_sl2) {
      const auto maxes = maximal_submodules(m, LineMode::FixedPoints, opts.line_guard);
      add("unique_maximal_sc", "derived algebra",
          maxes.size() == 1 && maxes[0] == L.derived_subalgebra() ? "derived algebra"
                                                                  : std::to_string(maxes.size()) + " maximal");
    }
    if (is_adjoint(s)) {
      const Submodule lam = L.lambda_image();
      const OperatorSet ml = restrict_to(m, lam);
      const auto maxes = maximal_submodules(ml, LineMode::FixedPoints, opts.line_guard);
      const bool ok = maxes.size() == 1 && !acts_trivially(quotient_by(ml, maxes[0]));
      add("unique_maximal_submodule", "unique, nontrivial quotient",
          ok ? "unique, nontrivial quotient" : std::to_string(maxes.size()) + " maximal",
          "Lambda dim " + std::to_string(lam.dim()));
    }
  } catch (const std::exception& ex) {
    out.push_back({"error", who, "", ex.what(), false, "guard or construction failure"});
  }
}

}  // namespace

SuiteReport run_lie_suite(const RunOptions& opts) {
  const auto inst = lie_suite_instances();
  std::vector<std::vector<CheckRecord>> per(inst.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < inst.size(); i = next++) lie_checks(inst[i], opts, per[i]);
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(inst.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  SuiteReport rep{"lie", {}};
  for (auto& v : per) rep.checks.insert(rep.checks.end(), v.begin(), v.end());
  return rep;
}

// ------------------------------------------------------------- property suite

namespace {

// Coordinates of an ambient adjoint-module matrix over the Chevalley basis, mod p.
std::optional<KVec> chevalley_coords(const GroupContext& g, const KVec& x) {
  const ChevalleyData& c = *g.chevalley();
  const FieldContext& k = g.field();
  KRows basis;
  for (int b = 0; b < c.dim; ++b) {
    const IntMatrix ad = c.ad(b);
    KVec v;
    for (const auto& row : ad)
      for (long long e : row) v.push_back(k.from_int(e).code);
    basis.push_back(v);
  }
  return SpanCoords(k, basis, static_cast<int>(x.size())).coords(x);
}

struct SpotResult {
  bool found = false;
  bool sum_component_zero = false;
  bool inside_string = false;
};

// g = x_alpha(1), x = e_beta; component of AD(g)x - x at alpha + beta, and
// containment in the span of the roots i alpha + beta, i >= 1.
SpotResult root_pair_spot(const GroupContext& g, int alpha, int beta) {
  SpotResult r;
  const ChevalleyData& c = *g.chevalley();
  const RootDatum& d = c.datum;
  const int sum = d.sum(alpha, beta);
  if (sum < 0) return r;
  const FieldContext& k = g.field();
  KVec x;
  for (const auto& row : c.ad(c.basis_of_root(beta)))
    for (long long e : row) x.push_back(k.from_int(e).code);
  const Matrix gbar = g.root_element(alpha, 1);
  KVec y = g.adjoint_action(gbar, x);
  for (size_t i = 0; i < y.size(); ++i) y[i] = k.sub_raw(y[i], x[i]);
  const auto co = chevalley_coords(g, y);
  if (!co) return r;
  r.found = true;
  r.sum_component_zero = (*co)[c.basis_of_root(sum)] == 0;
  std::vector<bool> allowed(c.dim, false);
  int cur = beta;
  while ((cur = d.sum(alpha, cur)) >= 0) allowed[c.basis_of_root(cur)] = true;
  r.inside_string = true;
  for (int b = 0; b < c.dim; ++b)
    if (!allowed[b] && (*co)[b] != 0) r.inside_string = false;
  return r;
}

// Independent statement of the three exceptional cases via angles and lengths.
bool exceptional_by_angle(const RootDatum& d, int p, int a, int b) {
  if (d.sum(a, b) < 0 || !d.has_two_lengths()) return false;
  if (!d.is_short(a) || !d.is_short(b)) return false;
  const int ip = d.inner(a, b);
  if (d.label == "G2") return (p == 3 && 2 * ip == d.sq_length[a]) || (p == 2 && 2 * ip == -d.sq_length[a]);
  return p == 2 && ip == 0;
}

}  // namespace

SuiteReport run_property_suite(const RunOptions& opts) {
  using F = Family;
  SuiteReport rep{"props", {}};
  auto add = [&](const std::string& name, const std::string& who, bool ok, const std::string& computed,
                 const std::string& note = "") {
    rep.checks.push_back({name, who, "pass", computed, ok, note});
  };
  auto guarded = [&](const std::string& name, const std::string& who, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& ex) {
      add(name, who, false, "error", ex.what());
    }
  };
  const uint64_t seed = opts.seed;

  // Commutator identity at levels 1..3.
  const std::vector<GroupSpec> split = {gs(F::SL, 2, 2),   gs(F::SL, 2, 3),   gs(F::SL, 2, 2, 2), gs(F::SL, 2, 5),
                                        gs(F::SL, 3, 2),   gs(F::SL, 3, 3),   gs(F::SL, 4, 2),    gs(F::PGL, 2, 3),
                                        gs(F::PGL, 3, 2),  gs(F::Sp, 4, 2),   gs(F::Sp, 4, 3),    gs(F::PGSp, 4, 3),
                                        gs(F::G2, 14, 2),  gs(F::G2, 14, 3)};
  for (const auto& s : split)
    for (int level = 1; level <= 3; ++level) {
      const GroupSpec sl = s.at_level(level);
      guarded("commutator_identity", sl.label(), [&] {
        const long bad = commutator_identity_violations(GroupContext(sl), 25, seed + level);
        add("commutator_identity", sl.label(), bad == 0, std::to_string(bad) + " violations", "25 samples per pair");
      });
    }

  // |U(k)| against the p-part of the enumerated order.
  const std::vector<GroupSpec> enumerable = {
      gs(F::SL, 2, 2),  gs(F::SL, 2, 3),  gs(F::SL, 2, 2, 2), gs(F::SL, 2, 5),   gs(F::SL, 2, 3, 2),
      gs(F::PGL, 2, 2), gs(F::PGL, 2, 3), gs(F::PGL, 2, 2, 2), gs(F::PGL, 2, 2, 3), gs(F::SL, 3, 2),
      gs(F::SL, 3, 3),  gs(F::PGL, 3, 2), gs(F::SU, 3, 2),    gs(F::PGU, 3, 2),  gs(F::Sp, 4, 2),
      gs(F::PGSp, 4, 2), gs(F::G2, 14, 2)};
  for (const auto& s : enumerable)
    guarded("sylow_order", s.label(), [&] {
      const GroupContext g(s);
      const BfsResult b = bfs_enumerate(g);
      const uint64_t u = unipotent_sylow(g).size();
      const bool ok = u == p_part(b.order, s.p) && u == unipotent_order(s) && b.order == order_polynomial(s);
      add("sylow_order", s.label(), ok,
          "|G| = " + std::to_string(b.order) + ", |U| = " + std::to_string(u));
    });

  // Kernel additivity, exhaustive for kernels up to 2^14 elements.
  const std::vector<GroupSpec> kernels = {gs(F::SL, 2, 2),   gs(F::SL, 2, 3),  gs(F::SL, 2, 2, 2), gs(F::SL, 2, 5),
                                          gs(F::SL, 2, 3, 2), gs(F::PGL, 2, 2, 3), gs(F::SL, 3, 2), gs(F::PGL, 3, 2),
                                          gs(F::SL, 3, 3),   gs(F::SU, 3, 2),  gs(F::PGU, 3, 2),  gs(F::Sp, 4, 2),
                                          gs(F::PGSp, 4, 2), gs(F::G2, 14, 2)};
  for (const auto& s : kernels)
    guarded("kernel_additivity", s.label(), [&] {
      const GroupContext g2(s.at_level(2));
      const uint64_t expect = ipow(s.p, g2.lie_dim_fp());
      const uint64_t got = kernel_additivity_exhaustive(g2, 1u << 14);
      add("kernel_additivity", s.label(), got == expect, std::to_string(got) + " kernel elements");
    });

  // Exceptional root pairs in G2 over F2: the alpha+beta component of AD(g)x - x.
  guarded("exceptional_pair_spot", "G2/F2", [&] {
    const GroupContext g(gs(F::G2, 14, 2));
    const RootDatum& d = g.roots();
    int ex_a = -1, ex_b = -1, ord_a = -1, ord_b = -1;
    for (int a = 0; a < d.size() && (ex_a < 0 || ord_a < 0); ++a)
      for (int b = 0; b < d.size(); ++b) {
        if (b == a || b == d.neg(a) || d.sum(a, b) < 0) continue;
        if (ex_a < 0 && exceptional_by_angle(d, 2, a, b)) ex_a = a, ex_b = b;
        if (ord_a < 0 && !exceptional_by_angle(d, 2, a, b) && !d.is_short(a) && d.is_short(b)) ord_a = a, ord_b = b;
      }
    const SpotResult ex = root_pair_spot(g, ex_a, ex_b), ord = root_pair_spot(g, ord_a, ord_b);
    add("exceptional_pair_spot", "G2/F2", ex.found && ex.sum_component_zero && ex.inside_string,
        ex.sum_component_zero ? "component zero" : "component nonzero", "short roots at 120 degrees");
    add("ordinary_pair_spot", "G2/F2", ord.found && !ord.sum_component_zero && ord.inside_string,
        ord.sum_component_zero ? "component zero" : "component nonzero", "long and short root");
  });

  // Structure constants against root strings, and the p-divisibility pattern.
  for (const std::string type : {"A1", "A2", "A3", "C2", "C3", "G2"})
    guarded("root_string_constants", type, [&] {
      const RootDatum d = build_root_system(type);
      const ChevalleyData c = build_chevalley_data(d);
      long pairs = 0, bad_abs = 0, bad_pattern = 0;
      for (int a = 0; a < d.size(); ++a)
        for (int b = 0; b < d.size(); ++b) {
          if (b == a || b == d.neg(a) || d.sum(a, b) < 0) continue;
          ++pairs;
          long long m11 = 0;
          for (const auto& t : commutator_constants(c, a, b))
            if (t.i == 1 && t.j == 1) m11 = t.m;
          if (std::llabs(m11) != root_string(d, a, b).first + 1) ++bad_abs;
          for (int p : {2, 3, 5}) {
            const bool divisible = m11 % p == 0;
            if (divisible != exceptional_by_angle(d, p, a, b) || divisible != is_exceptional_pair(d, p, a, b))
              ++bad_pattern;
          }
        }
      add("root_string_constants", type, bad_abs == 0, std::to_string(bad_abs) + " of " + std::to_string(pairs));
      add("divisibility_pattern", type, bad_pattern == 0, std::to_string(bad_pattern) + " mismatches");
    });

  // Explicit lift table of the quaternion Sylow lift.
  guarded("quaternion", "SU3/F2", [&] {
    const QuaternionFixture f = quaternion_fixture();
    add("lift_pair", "GR(4,2)", f.lift_pairs.size() == 1,
        std::to_string(f.lift_pairs.size()) + " pair(s); t_a = " + std::to_string(f.t_a) +
            ", t_a1 = " + std::to_string(f.t_a1));
    const QuaternionReport q = verify_quaternion(f);
    add("quaternion", "SU3/F2", q.ok(),
        "order " + std::to_string(q.group_order) + ", involutions " + std::to_string(q.involutions));
    const CorruptionSweep sw = quaternion_corruption_sweep(f);
    add("corruption_sweep", "SU3/F2", sw.tried > 0 && sw.still_verified == 0,
        std::to_string(sw.still_verified) + " of " + std::to_string(sw.tried) + " verified",
        std::to_string(sw.group_checks_passed) + " pass the group checks alone");
  });

  guarded("ingredients", "-", [&] {
    const IngredientReport ir = ingredient_checks(seed, 100);
    add("proper_image", "SL2(Z/4) -> PGL2(Z/4)", ir.proper_image,
        "image " + std::to_string(ir.image_order) + " of " + std::to_string(ir.pgl_order));
    add("pth_power_kernel", "SL2(Z/27)", ir.cubes_cover_kernel, "kernel " + std::to_string(ir.kernel_size));
    add("commutator_formula_w3", "SL3(Z/8)", ir.commutator_formula,
        std::to_string(ir.commutator_pairs) + " pairs");
    add("torus_squares", "(Z/8)^*", ir.torus_squares, ir.torus_squares ? "ok" : "failed");
  });

  guarded("entry_chase", "-", [&] {
    const int trials = 50;
    const ChaseResult c1 = chase_pgl3(trials, seed), c2 = chase_pgsp4(trials, seed), c3 = chase_pgu3(trials, seed),
                      c4 = chase_pth_power(5, trials, seed);
    auto note = [](const ChaseResult& c) {
      return std::to_string(c.entry_nonzero + c.scalar_power + c.reduction_wrong) + " bad of " +
             std::to_string(c.trials);
    };
    add("entry_chase", "PGL3 over Z/9", c1.ok(), note(c1));
    add("entry_chase", "PGSp4 over Z/9", c2.ok(), note(c2));
    add("entry_chase", "PGU3 over W2(F9)", c3.ok(), note(c3));
    add("pth_power_lift", "W2(F5)", c4.ok(), note(c4));
  });

  for (const auto& s : {gs(F::SL, 2, 3), gs(F::PGL, 3, 2), gs(F::SU, 3, 2), gs(F::G2, 14, 2), gs(F::PGSp, 4, 3)})
    guarded("cocycle_identity", s.label(), [&] {
      const ExtensionInstance ext(s);
      const long bad = cocycle_identity_violations(ext, 64, 20000, seed);
      const bool ok = bad == 0 && cocycle_normalized(ext) && ext.cocycle_table_serial() == ext.cocycle();
      add("cocycle_identity", s.label(), ok, std::to_string(bad) + " violations, |Q| = " + std::to_string(ext.order()));
    });
  return rep;
}

// ------------------------------------------------------------------ reports

std::string report_json(const RunReport& r, bool timing) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["version"] = 1;
  j["seed"] = r.seed;
  j["entries"] = ordered_json::array();
  for (const auto& e : r.entries) {
    ordered_json x;
    x["id"] = e.entry.id;
    x["family"] = family_name(e.entry.spec.family);
    x["n"] = e.entry.spec.n;
    x["q"] = ipow(e.entry.spec.p, e.entry.spec.r);
    x["level"] = 2;
    x["expected"] = e.entry.expected;
    x["computed"] = e.computed;
    x["match"] = e.match();
    x["basis"] = e.entry.basis;
    x["method"] = e.method;
    x["subgroup"] = e.subgroup;
    x["sylow_order"] = e.sylow_order;
    x["index_coprime"] = e.index_coprime;
    x["module_dim_fp"] = e.module_dim_fp;
    x["unknowns"] = e.unknowns;
    x["rank"] = e.rank;
    x["elapsed_ms"] = timing ? e.elapsed_ms : 0.0;
    if (!e.witness.empty()) {
      x["witness"] = e.witness;
      x["witness_verified"] = e.witness_verified;
    }
    if (e.certificate)
      x["certificate_row"] = {{"row", e.certificate->row},
                              {"g", e.certificate_g},
                              {"h", e.certificate_h},
                              {"coordinate", e.certificate->coordinate}};
    x["reruns"] = e.reruns;
    if (e.mutation_detected) x["mutation_detected"] = *e.mutation_detected;
    if (!e.error.empty()) x["error"] = e.error;
    j["entries"].push_back(std::move(x));
  }
  j["suites"] = ordered_json::object();
  for (const auto& s : r.suites) {
    ordered_json sj;
    sj["pass"] = s.pass();
    sj["checks"] = ordered_json::array();
    for (const auto& c : s.checks)
      sj["checks"].push_back({{"name", c.name},
                              {"subject", c.subject},
                              {"expected", c.expected},
                              {"computed", c.computed},
                              {"pass", c.pass},
                              {"note", c.note}});
    j["suites"][s.name] = std::move(sj);
  }
  j["pass"] = r.pass();
  return j.dump(2) + "\n";
}

std::string report_csv(const RunReport& r, bool timing) {
  std::ostringstream os;
  os << "id,family,n,q,level,expected,computed,match,method,sylow_order,module_dim_fp,unknowns,rank,elapsed_ms\n";
  for (const auto& e : r.entries)
    os << e.entry.id << ',' << family_name(e.entry.spec.family) << ',' << e.entry.spec.n << ','
       << ipow(e.entry.spec.p, e.entry.spec.r) << ",2," << e.entry.expected << ',' << e.computed << ','
       << (e.match() ? "true" : "false") << ',' << e.method << ',' << e.sylow_order << ',' << e.module_dim_fp << ','
       << e.unknowns << ',' << e.rank << ',' << (timing ? e.elapsed_ms : 0.0) << '\n';
  return os.str();
}

}  // namespace wittsplit
