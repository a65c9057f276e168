#include "wittsplit/section_engine.hpp"

#include <omp.h>

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

namespace wittsplit {

namespace {

uint32_t digit_pow(int p, int l) {
  uint32_t v = 1;
  while (l-- > 0) v *= static_cast<uint32_t>(p);
  return v;
}

KVec random_vector(std::mt19937_64& rng, int dim, int p) {
  std::uniform_int_distribution<int> d(0, p - 1);
  KVec v(dim);
  for (auto& x : v) x = static_cast<uint32_t>(d(rng));
  return v;
}

}  // namespace

std::string verdict_name(Verdict v) { return v == Verdict::Split ? "Split" : "NonSplit"; }

std::string gamma_name(Gamma g) {
  switch (g) {
    case Gamma::Zero: return "Zero";
    case Gamma::NonZero: return "NonZero";
    default: return "Inconclusive";
  }
}

std::string SubgroupChoice::describe() const {
  std::string out;
  switch (kind) {
    case Sylow: return "sylow";
    case Roots:
      out = "roots{";
      for (size_t i = 0; i < roots.size(); ++i) out += (i ? "," : "") + std::to_string(roots[i]);
      return out + "}";
    case Support:
      out = "support{";
      for (size_t i = 0; i < support.size(); ++i)
        out += (i ? "," : "") + std::to_string(support[i].first + 1) + std::to_string(support[i].second + 1);
      return out + "}";
  }
  return out;
}

// ------------------------------------------------------------------ extension

ExtensionInstance::ExtensionInstance(const GroupSpec& spec, const ExtensionOptions& opts)
    : spec_(spec), opts_(opts) {
  g1_ = std::make_shared<GroupContext>(spec.at_level(1));
  g2_ = std::make_shared<GroupContext>(spec.at_level(2));
  p_ = spec.p;
  switch (opts.subgroup.kind) {
    case SubgroupChoice::Sylow: elements_ = unipotent_sylow(*g1_); break;
    case SubgroupChoice::Roots: elements_ = unipotent_subgroup(*g1_, opts.subgroup.roots); break;
    case SubgroupChoice::Support: elements_ = unipotent_subgroup_by_support(*g1_, opts.subgroup.support); break;
  }
  const Matrix id = g1_->identity();
  auto it = std::find_if(elements_.begin(), elements_.end(), [&](const UnipotentElement& u) { return u.m == id; });
  if (it == elements_.end()) throw DomainError("unipotent group lacks the identity");
  std::iter_swap(elements_.begin(), it);

  const int n = order();
  for (int i = 0; i < n; ++i) index_.emplace(elements_[i].m, i);
  table_.resize(static_cast<size_t>(n) * n);
  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int c = index_of(g1_->mul(elements_[a].m, elements_[b].m));
      table_[static_cast<size_t>(a) * n + b] = c;
      if (c == 0) inverse_[a] = b;
    }

  // Greedy generating set, closure by the multiplication table.
  std::vector<char> in(n, 0);
  in[0] = 1;
  int covered = 1;
  for (int e = 1; e < n && covered < n; ++e) {
    if (in[e]) continue;
    gens_.push_back(e);
    std::vector<int> all = {0};
    std::fill(in.begin(), in.end(), 0);
    in[0] = 1;
    for (size_t head = 0; head < all.size(); ++head)
      for (int g : gens_) {
        const int y = mul(all[head], g);
        if (!in[y]) {
          in[y] = 1;
          all.push_back(y);
        }
      }
    covered = static_cast<int>(all.size());
  }

  build_module();

  sections_.resize(n);
  std::mt19937_64 rng(opts.section_seed);
  for (int i = 0; i < n; ++i) {
    Matrix s = unipotent_section(*g1_, elements_[i], *g2_);
    if (opts.section_seed != 0 && i != 0) s = g2_->mul(kernel_element(random_vector(rng, full_dim_, p_)), s);
    if (reduce_element(*g2_, s, *g1_) != elements_[i].m) throw DomainError("section does not reduce to its element");
    sections_[i] = std::move(s);
  }
  cocycle_ = cocycle_table_parallel();
}

int ExtensionInstance::index_of(const Matrix& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) throw DomainError("element outside the unipotent group");
  return it->second;
}

void ExtensionInstance::build_module() {
  const GroupContext& g = *g2_;
  const FieldContext& fp = g.prime_field();
  const FieldContext& k = g.field();
  full_dim_ = g.lie_dim_fp();

  if (opts_.quotient) {
    KRows rows;
    for (const KVec& v : *opts_.quotient)
      for (int l = 0; l < k.r(); ++l) {
        auto c = g.lie_coords_fp(vec_scale(k, digit_pow(k.p(), l), v));
        if (!c) throw DomainError("quotient generator is not in the Lie space");
        rows.push_back(*c);
      }
    Echelon e = rref(fp, rows, full_dim_);
    n_rows_ = e.rows;
    n_pivots_ = e.pivots;
  }
  std::vector<char> pivot(full_dim_, 0);
  for (int c : n_pivots_) pivot[c] = 1;
  for (int c = 0; c < full_dim_; ++c)
    if (!pivot[c]) free_cols_.push_back(c);
  dim_ = static_cast<int>(free_cols_.size());

  action_.resize(order());
  for (int q = 0; q < order(); ++q) {
    const Matrix& m = elements_[q].m;
    const Matrix minv = g.field_inverse(m);
    KRows cols(full_dim_);
    for (int j = 0; j < full_dim_; ++j) {
      KVec e(full_dim_, 0);
      e[j] = 1;
      auto c = g.lie_coords_fp(g.adjoint_action(m, minv, g.lie_from_fp(e)));
      if (!c) throw DomainError("adjoint action leaves the Lie space");
      cols[j] = *c;
    }
    const KRows full = mat_transpose(cols);
    for (const auto& r : n_rows_)
      if (!is_zero(project(mat_vec(fp, full, r)))) throw DomainError("quotient ideal is not stable");
    KRows a(dim_, KVec(dim_, 0));
    for (int j = 0; j < dim_; ++j) {
      const KVec img = project(cols[free_cols_[j]]);
      for (int i = 0; i < dim_; ++i) a[i][j] = img[i];
    }
    action_[q] = std::move(a);
  }
}

KVec ExtensionInstance::project(const KVec& full) const {
  const FieldContext& fp = g2_->prime_field();
  KVec v = full;
  for (size_t t = 0; t < n_rows_.size(); ++t)
    if (v[n_pivots_[t]]) vec_axpy(fp, v, fp.neg_raw(v[n_pivots_[t]]), n_rows_[t]);
  KVec out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = v[free_cols_[i]];
  return out;
}

KVec ExtensionInstance::lift(const KVec& c) const {
  KVec out(full_dim_, 0);
  for (int i = 0; i < dim_; ++i) out[free_cols_[i]] = c[i];
  return out;
}

KVec ExtensionInstance::module_vector(const Matrix& kernel_element) const {
  auto c = g2_->lie_coords_fp(g2_->kernel_vector(kernel_element));
  if (!c) throw DomainError("kernel element outside the Lie space");
  return *c;
}

Matrix ExtensionInstance::kernel_element(const KVec& full) const { return g2_->lie_lift(g2_->lie_from_fp(full)); }

std::vector<KVec> ExtensionInstance::cocycle_table_parallel() const {
  const long n = order();
  std::vector<Matrix> inv(n);
  for (long i = 0; i < n; ++i) inv[i] = g2_->inverse(sections_[i]);
  std::vector<KVec> out(n * n);
  const GroupContext& g = *g2_;
#pragma omp parallel for schedule(dynamic, 16)
  for (long idx = 0; idx < n * n; ++idx) {
    const int a = static_cast<int>(idx / n), b = static_cast<int>(idx % n);
    const Matrix k = g.mul(g.mul(sections_[a], sections_[b]), inv[mul(a, b)]);
    out[idx] = project(module_vector(k));
  }
  return out;
}

std::vector<KVec> ExtensionInstance::cocycle_table_serial() const {
  const int n = order();
  std::vector<KVec> out;
  out.reserve(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Matrix k = g2_->mul(g2_->mul(sections_[a], sections_[b]), g2_->inverse(sections_[mul(a, b)]));
      out.push_back(project(module_vector(k)));
    }
  return out;
}

// ------------------------------------------------------------------ cocycles

long cocycle_identity_violations(const ExtensionInstance& ext, int exhaustive_limit, int samples, uint64_t seed) {
  const FieldContext& fp = ext.level2().prime_field();
  const int n = ext.order();
  auto bad = [&](int g, int h, int l) {
    const KVec lhs = vec_add(fp, ext.cocycle(g, h), ext.cocycle(ext.mul(g, h), l));
    const KVec rhs = vec_add(fp, mat_vec(fp, ext.action(g), ext.cocycle(h, l)), ext.cocycle(g, ext.mul(h, l)));
    return lhs != rhs;
  };
  long count = 0;
  if (n <= exhaustive_limit) {
#pragma omp parallel for reduction(+ : count) schedule(dynamic)
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        for (int l = 0; l < n; ++l) count += bad(g, h, l);
    return count;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, n - 1);
  for (int i = 0; i < samples; ++i) {
    const int g = d(rng), h = d(rng), l = d(rng);
    count += bad(g, h, l);
  }
  return count;
}

bool cocycle_normalized(const ExtensionInstance& ext) {
  for (int g = 0; g < ext.order(); ++g)
    if (!is_zero(ext.cocycle(0, g)) || !is_zero(ext.cocycle(g, 0))) return false;
  return true;
}

// ------------------------------------------------------------------ solving

SplitDecision decide_split(const ExtensionInstance& ext, SolveMode mode, long unknown_guard) {
  SplitDecision out;
  const int n = ext.order(), d = ext.dim(), p = ext.p();
  out.order = n;
  out.module_dim_fp = d;
  out.unknowns = static_cast<long>(n - 1) * d;
  if (out.unknowns > unknown_guard) throw DomainError("linear system exceeds the unknown guard");
  auto var = [d](int q, int i) { return (q - 1) * d + i; };

  std::vector<int> rows_g;
  if (mode == SolveMode::AllPairs) {
    for (int g = 1; g < n; ++g) rows_g.push_back(g);
  } else {
    rows_g = ext.generators();
  }

  FpSolver solver(p, static_cast<int>(std::max<long>(out.unknowns, 1)));
  std::vector<std::pair<int, int>> terms;
  for (int g : rows_g) {
    const KRows& a = ext.action(g);
    for (int h = 0; h < n && solver.consistent(); ++h) {
      const int gh = ext.mul(g, h);
      const KVec& c = ext.cocycle(g, h);
      for (int i = 0; i < d; ++i) {
        terms.clear();
        if (h != 0)
          for (int j = 0; j < d; ++j)
            if (a[i][j]) terms.push_back({var(h, j), static_cast<int>(a[i][j])});
        if (gh != 0) terms.push_back({var(gh, i), p - 1});
        terms.push_back({var(g, i), 1});
        const long row = solver.rows_added();
        solver.add_sparse_row(terms, static_cast<int>(c[i]));
        if (!solver.consistent()) {
          out.certificate = {row, g, h, i};
          break;
        }
      }
    }
    if (!solver.consistent()) break;
  }
  out.rank = solver.rank();
  if (!solver.consistent()) {
    out.verdict = Verdict::NonSplit;
    return out;
  }
  out.verdict = Verdict::Split;
  const auto x = solver.solution();
  out.beta.assign(n, KVec(d, 0));
  for (int q = 1; q < n; ++q)
    for (int i = 0; i < d; ++i) out.beta[q][i] = x[var(q, i)];
  out.witness_verified = verify_twisted_section(ext, out.beta);
  const auto twisted = twisted_section(ext, out.beta);
  for (int g : ext.generators()) out.witness_generators.push_back(twisted[g]);
  return out;
}

std::vector<Matrix> twisted_section(const ExtensionInstance& ext, const std::vector<KVec>& beta) {
  const FieldContext& fp = ext.level2().prime_field();
  std::vector<Matrix> out(ext.order());
  for (int q = 0; q < ext.order(); ++q) {
    const KVec minus = vec_scale(fp, fp.neg_raw(1), ext.lift(beta[q]));
    out[q] = ext.level2().mul(ext.kernel_element(minus), ext.sections()[q]);
  }
  return out;
}

bool verify_twisted_section(const ExtensionInstance& ext, const std::vector<KVec>& beta) {
  const GroupContext& g2 = ext.level2();
  const auto t = twisted_section(ext, beta);
  const int n = ext.order();
  std::vector<Matrix> inv(n);
  for (int i = 0; i < n; ++i) inv[i] = g2.inverse(t[i]);
  bool ok = true;
#pragma omp parallel for reduction(&& : ok) schedule(dynamic)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Matrix k = g2.mul(g2.mul(t[a], t[b]), inv[ext.mul(a, b)]);
      ok = ok && g2.in_reduction_kernel(k) && is_zero(ext.project(ext.module_vector(k)));
    }
  return ok;
}

// ------------------------------------------------------------ classification

SylowCheck sylow_check(const GroupSpec& spec) {
  SylowCheck c;
  const GroupSpec s1 = spec.at_level(1);
  c.group_order = order_polynomial(s1);
  c.sylow_order = unipotent_order(s1);
  c.index_coprime = c.sylow_order > 0 && c.group_order % c.sylow_order == 0 &&
                    (c.group_order / c.sylow_order) % static_cast<uint64_t>(spec.p) != 0;
  return c;
}

GammaResult classify_gamma(const ExtensionInstance& ext, long unknown_guard) {
  GammaResult r;
  r.sylow = sylow_check(ext.level1().spec());
  r.decision = decide_split(ext, SolveMode::Generators, unknown_guard);
  r.decision.method = "full-Sylow";
  if (r.decision.verdict == Verdict::NonSplit)
    r.gamma = Gamma::NonZero;
  else if (r.sylow.index_coprime && r.decision.witness_verified)
    r.gamma = Gamma::Zero;
  return r;
}

GammaResult certify_nonsplit_by_restriction(const ExtensionInstance& ext, long unknown_guard) {
  GammaResult r;
  r.sylow = sylow_check(ext.level1().spec());
  r.decision = decide_split(ext, SolveMode::Generators, unknown_guard);
  r.decision.method = "subgroup-restriction";
  r.gamma = r.decision.verdict == Verdict::NonSplit ? Gamma::NonZero : Gamma::Inconclusive;
  return r;
}

GammaResult classify_gamma(const GroupSpec& spec, const std::optional<KRows>& quotient) {
  ExtensionOptions opts;
  opts.quotient = quotient;
  return classify_gamma(ExtensionInstance(spec, opts));
}

GammaResult certify_nonsplit_by_restriction(const GroupSpec& spec, const SubgroupChoice& sub) {
  ExtensionOptions opts;
  opts.subgroup = sub;
  return certify_nonsplit_by_restriction(ExtensionInstance(spec, opts));
}

std::vector<Verdict> rerun_with_random_sections(const GroupSpec& spec, ExtensionOptions opts, int reruns) {
  std::vector<Verdict> out;
  for (int i = 1; i <= reruns; ++i) {
    opts.section_seed = static_cast<uint64_t>(i);
    ExtensionInstance ext(spec, opts);
    out.push_back(decide_split(ext).verdict);
  }
  return out;
}

MutationResult mutation_control(const ExtensionInstance& ext, uint64_t seed) {
  MutationResult r;
  if (ext.order() < 2 || ext.dim() == 0) return r;
  std::mt19937_64 rng(seed);
  KVec e;
  do e = random_vector(rng, ext.dim(), ext.p());
  while (is_zero(e));
  const FieldContext& fp = ext.level2().prime_field();
  std::vector<KVec> table = ext.cocycle();
  const size_t pos = static_cast<size_t>(1) * ext.order() + 1;
  table[pos] = vec_add(fp, table[pos], e);
  ExtensionInstance mutated = ext;
  mutated.set_cocycle(std::move(table));
  r.identity_violated = cocycle_identity_violations(mutated, 64, 20000, seed) > 0;
  r.verdict = decide_split(mutated, SolveMode::AllPairs).verdict;
  return r;
}

// ---------------------------------------------------------------- lift tables

Matrix ring_identity(int n) {
  Matrix m(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) m[i * n + i] = 1;
  return m;
}

Matrix ring_mat_mul(const WittRingContext& R, int n, const Matrix& a, const Matrix& b) {
  Matrix c(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      const uint32_t x = a[i * n + l];
      if (!x) continue;
      for (int j = 0; j < n; ++j) c[i * n + j] = R.add_raw(c[i * n + j], R.mul_raw(x, b[l * n + j]));
    }
  return c;
}

namespace {

Matrix word_product(const WittRingContext& R, const LiftTable& t, const std::vector<int>& w) {
  Matrix m = ring_identity(t.n);
  for (int letter : w) {
    if (letter < 0 || letter >= static_cast<int>(t.lifts.size())) throw DomainError("relation word uses an unknown letter");
    m = ring_mat_mul(R, t.n, m, t.lifts[letter]);
  }
  return m;
}

}  // namespace

bool verify_lift_relations(const WittRingContext& R, const LiftTable& t) {
  for (const auto& m : t.lifts)
    if (m.size() != static_cast<size_t>(t.n) * t.n) throw DomainError("lift table has a malformed matrix");
  for (const auto& [lhs, rhs] : t.relations)
    if (word_product(R, t, lhs) != word_product(R, t, rhs)) return false;
  return true;
}

std::vector<Matrix> generated_group(const WittRingContext& R, int n, const std::vector<Matrix>& gens, size_t cap) {
  std::unordered_set<Matrix, MatrixHash> seen = {ring_identity(n)};
  std::vector<Matrix> all = {ring_identity(n)};
  for (size_t head = 0; head < all.size(); ++head)
    for (const auto& g : gens) {
      Matrix y = ring_mat_mul(R, n, all[head], g);
      if (seen.insert(y).second) {
        all.push_back(std::move(y));
        if (all.size() > cap) return {};
      }
    }
  return all;
}

QuaternionFixture quaternion_fixture() {
  QuaternionFixture f;
  f.ring = std::make_unique<WittRingContext>(2, 2, 2);
  const WittRingContext& R = *f.ring;
  const FieldContext& k = R.residue_field();
  f.a = 2;  // the class of x in F_2[x]/(x^2 + x + 1)
  const uint32_t a1 = k.add_raw(f.a, 1);
  std::vector<uint32_t> lifts_a, lifts_a1;
  for (uint32_t z = 0; z < R.size(); ++z) {
    if (R.to_field_raw(z) == f.a) lifts_a.push_back(z);
    if (R.to_field_raw(z) == a1) lifts_a1.push_back(z);
  }
  for (uint32_t x : lifts_a)
    for (uint32_t y : lifts_a1)
      if (R.add_raw(x, y) == 1 && R.mul_raw(x, y) == 1) f.lift_pairs.push_back({x, y});
  if (f.lift_pairs.empty()) throw DomainError("no lift pair with t_a + t_{a+1} = t_a t_{a+1} = 1");
  f.t_a = f.lift_pairs[0].first;
  f.t_a1 = f.lift_pairs[0].second;

  const uint32_t t = f.t_a, t1 = f.t_a1;
  auto c = [&](int v) { return R.core().from_int(v); };
  const uint32_t two_t = R.mul_raw(c(2), t);
  const uint32_t three_2t = R.add_raw(c(3), two_t);
  const uint32_t two_2t = R.add_raw(c(2), two_t);
  f.table.n = 3;
  f.table.lifts = {
      {1, 1, t, c(2), three_2t, c(3), 0, 0, 1},
      {1, t, t, two_2t, 1, t1, 0, 0, three_2t},
      {c(3), two_t, three_2t, 0, c(3), 0, 0, 0, 1},
  };
  f.table.relations = {{{2, 2}, {}}, {{0, 0}, {2}}, {{1, 1}, {2}}, {{0, 1, 0, 1}, {2}}};
  return f;
}

std::vector<Matrix> tau_fixed_unitriangular(const FieldContext& k) {
  std::vector<Matrix> out;
  const uint32_t q = k.q();
  for (uint32_t x = 0; x < q; ++x)
    for (uint32_t y = 0; y < q; ++y)
      for (uint32_t z = 0; z < q; ++z) {
        if (x != k.frob_raw(z)) continue;
        if (y != k.frob_raw(k.sub_raw(k.mul_raw(x, z), y))) continue;
        out.push_back({1, x, y, 0, 1, z, 0, 0, 1});
      }
  return out;
}

namespace {

QuaternionReport check_quaternion(const WittRingContext& R, uint32_t a, const LiftTable& table) {
  QuaternionReport r;
  const FieldContext& k = R.residue_field();
  if (table.n != 3 || table.lifts.size() != 3) throw DomainError("quaternion table needs three 3 x 3 lifts");
  // t_a and t_{a+1} as they occur in the table; every t-dependent entry must agree.
  const Matrix &x1 = table.lifts[0], &x2 = table.lifts[1], &x3 = table.lifts[2];
  const uint32_t t = x1[2], t1 = x2[5];
  const uint32_t two_t = R.mul_raw(R.core().from_int(2), t);
  const uint32_t three_2t = R.add_raw(R.core().from_int(3), two_t);
  const bool consistent = x1[4] == three_2t && x2[1] == t && x2[2] == t &&
                          x2[3] == R.add_raw(R.core().from_int(2), two_t) && x2[8] == three_2t && x3[1] == two_t &&
                          x3[2] == three_2t;
  r.lift_identities = consistent && R.add_raw(t, t1) == 1 && R.mul_raw(t, t1) == 1 && R.to_field_raw(t) == a &&
                      R.to_field_raw(t1) == k.add_raw(a, 1);
  r.relations = verify_lift_relations(R, table);
  const auto group = generated_group(R, table.n, table.lifts, 64);
  r.group_order = group.size();
  const Matrix id = ring_identity(table.n);
  std::set<Matrix> reductions;
  for (const auto& g : group) {
    if (g != id && ring_mat_mul(R, table.n, g, g) == id) ++r.involutions;
    Matrix red(g.size());
    for (size_t i = 0; i < g.size(); ++i) red[i] = R.to_field_raw(g[i]);
    reductions.insert(red);
  }
  r.reduction_injective = !group.empty() && reductions.size() == group.size();
  const auto fixed = tau_fixed_unitriangular(k);
  r.reduction_onto_fixed = reductions == std::set<Matrix>(fixed.begin(), fixed.end());
  return r;
}

}  // namespace

QuaternionReport verify_quaternion(const QuaternionFixture& f) {
  return check_quaternion(*f.ring, f.a, f.table);
}

CorruptionSweep quaternion_corruption_sweep(const QuaternionFixture& f) {
  CorruptionSweep s;
  const WittRingContext& R = *f.ring;
  for (size_t m = 0; m < f.table.lifts.size(); ++m)
    for (size_t e = 0; e < f.table.lifts[m].size(); ++e)
      for (uint32_t v = 0; v < R.size(); ++v) {
        if (v == f.table.lifts[m][e]) continue;
        LiftTable t = f.table;
        t.lifts[m][e] = v;
        ++s.tried;
        const QuaternionReport rep = check_quaternion(R, f.a, t);
        if (rep.ok()) ++s.still_verified;
        if (rep.relations && rep.group_order == 8 && rep.involutions == 1 && rep.reduction_injective &&
            rep.reduction_onto_fixed)
          ++s.group_checks_passed;
      }
  return s;
}

// --------------------------------------------------------------- entry chases

namespace {

Matrix random_ring_matrix(std::mt19937_64& rng, const WittRingContext& R, int n) {
  std::uniform_int_distribution<uint32_t> d(0, R.size() - 1);
  Matrix m(static_cast<size_t>(n) * n);
  for (auto& x : m) x = d(rng);
  return m;
}

// base + p * y
Matrix perturb(const WittRingContext& R, const Matrix& base, const Matrix& y) {
  const uint32_t p = R.core().from_int(R.p());
  Matrix out(base.size());
  for (size_t i = 0; i < base.size(); ++i) out[i] = R.add_raw(base[i], R.mul_raw(p, y[i]));
  return out;
}

Matrix ring_pow(const WittRingContext& R, int n, const Matrix& a, int e) {
  Matrix out = ring_identity(n);
  for (int i = 0; i < e; ++i) out = ring_mat_mul(R, n, out, a);
  return out;
}

bool is_principal_scalar(const WittRingContext& R, int n, const Matrix& a) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && a[i * n + j] != 0) return false;
  for (int i = 1; i < n; ++i)
    if (a[i * n + i] != a[0]) return false;
  return R.to_field_raw(a[0]) == 1;
}

// X3 = X1 X2 X1^2 X2^2 with Xi = base_i + p Y_i; checks the (row, col) entry
// and the reduction of X3 against `expected` (field codes).
ChaseResult run_chase(const WittRingContext& R, int n, const Matrix& b1, const Matrix& b2, int row, int col,
                      const Matrix& expected, int trials, uint64_t seed) {
  ChaseResult res;
  std::mt19937_64 rng(seed);
  const int p = R.p();
  for (int t = 0; t < trials; ++t) {
    const Matrix x1 = perturb(R, b1, random_ring_matrix(rng, R, n));
    const Matrix x2 = perturb(R, b2, random_ring_matrix(rng, R, n));
    const Matrix x1s = ring_mat_mul(R, n, x1, x1), x2s = ring_mat_mul(R, n, x2, x2);
    const Matrix x3 = ring_mat_mul(R, n, ring_mat_mul(R, n, ring_mat_mul(R, n, x1, x2), x1s), x2s);
    ++res.trials;
    if (x3[row * n + col] != 0) ++res.entry_nonzero;
    Matrix red(x3.size());
    for (size_t i = 0; i < x3.size(); ++i) red[i] = R.to_field_raw(x3[i]);
    if (red != expected) ++res.reduction_wrong;
    if (is_principal_scalar(R, n, ring_pow(R, n, x3, p))) ++res.scalar_power;
  }
  return res;
}

void set(const WittRingContext& R, Matrix& m, int n, int i, int j, int v) {
  m[(i - 1) * n + (j - 1)] = R.add_raw(m[(i - 1) * n + (j - 1)], R.core().from_int(v));
}

}  // namespace

ChaseResult chase_pgl3(int trials, uint64_t seed) {
  WittRingContext R(3, 1, 2);
  const int n = 3;
  Matrix b1 = ring_identity(n), b2 = ring_identity(n), e = ring_identity(n);
  set(R, b1, n, 1, 2, 1);
  set(R, b2, n, 2, 3, 1);
  e[0 * n + 2] = 1;
  return run_chase(R, n, b1, b2, 2, 0, e, trials, seed);
}

ChaseResult chase_pgsp4(int trials, uint64_t seed) {
  WittRingContext R(3, 1, 2);
  const int n = 4;
  Matrix b1 = ring_identity(n), b2 = ring_identity(n);
  set(R, b1, n, 1, 2, 1);
  set(R, b1, n, 4, 3, -1);
  set(R, b2, n, 1, 4, -1);
  set(R, b2, n, 2, 3, -1);
  Matrix e = ring_identity(n);
  e[0 * n + 2] = 1;
  return run_chase(R, n, b1, b2, 2, 0, e, trials, seed);
}

ChaseResult chase_pgu3(int trials, uint64_t seed) {
  WittRingContext R(3, 2, 2);
  const FieldContext& k = R.residue_field();
  uint32_t a = 0;
  for (uint32_t z = 1; z < k.q(); ++z)
    if (k.add_raw(k.mul_raw(z, z), 1) == 0) {
      a = z;
      break;
    }
  if (!a) throw DomainError("F_9 has no square root of -1");
  const int n = 3;
  const uint32_t two_a = k.add_raw(a, a);
  Matrix b1 = ring_identity(n), b2 = ring_identity(n);
  b1[0 * n + 1] = R.teich_raw(a);
  b1[1 * n + 2] = R.teich_raw(two_a);
  b1[0 * n + 2] = R.core().from_int(2);
  b2[0 * n + 1] = R.teich_raw(k.add_raw(a, 1));
  b2[1 * n + 2] = R.teich_raw(k.add_raw(two_a, 1));
  b2[0 * n + 2] = 1;
  Matrix e = ring_identity(n);
  e[0 * n + 2] = two_a;
  return run_chase(R, n, b1, b2, 2, 0, e, trials, seed);
}

ChaseResult chase_pth_power(int p, int trials, uint64_t seed) {
  WittRingContext R(p, 1, 2);
  const int n = 2;
  Matrix base = ring_identity(n), expected = ring_identity(n);
  base[1] = 1;
  expected[1] = R.core().from_int(p);
  ChaseResult res;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Matrix x = perturb(R, base, random_ring_matrix(rng, R, n));
    ++res.trials;
    if (ring_pow(R, n, x, p) != expected) ++res.entry_nonzero;
  }
  return res;
}

// ---------------------------------------------------------- ingredient checks

namespace {

uint32_t det3(const WittRingContext& R, const Matrix& m) {
  auto at = [&](int i, int j) { return m[i * 3 + j]; };
  auto term = [&](int a, int b, int c) { return R.mul_raw(R.mul_raw(at(0, a), at(1, b)), at(2, c)); };
  uint32_t pos = R.add_raw(R.add_raw(term(0, 1, 2), term(1, 2, 0)), term(2, 0, 1));
  uint32_t neg = R.add_raw(R.add_raw(term(0, 2, 1), term(1, 0, 2)), term(2, 1, 0));
  return R.sub_raw(pos, neg);
}

}  // namespace

IngredientReport ingredient_checks(uint64_t seed, int commutator_pairs) {
  IngredientReport rep;

  // SL2(Z/4) -> PGL2(Z/4).
  {
    GroupContext sl(GroupSpec{Family::SL, 2, 2, 1, 2, {}});
    GroupContext pgl2(GroupSpec{Family::PGL, 2, 2, 1, 2, {}});
    GroupContext pgl1(GroupSpec{Family::PGL, 2, 2, 1, 1, {}});
    std::unordered_set<Matrix, MatrixHash> image, reduced;
    for (const auto& g : bfs_enumerate(sl).elements) image.insert(pgl2.canonical(g));
    for (const auto& g : image) reduced.insert(reduce_element(pgl2, g, pgl1));
    rep.image_order = image.size();
    rep.pgl_order = bfs_enumerate(pgl2).order;
    rep.proper_image = image.size() < rep.pgl_order && reduced.size() == bfs_enumerate(pgl1).order;
  }

  // Cubes in SL2(Z/27) cover the kernel to SL2(Z/9).
  {
    GroupContext g3(GroupSpec{Family::SL, 2, 3, 1, 3, {}});
    GroupContext g2(GroupSpec{Family::SL, 2, 3, 1, 2, {}});
    const auto all = bfs_enumerate(g3).elements;
    std::unordered_set<Matrix, MatrixHash> cubes;
    for (const auto& g : all) cubes.insert(g3.pow(g, 3));
    const Matrix id2 = g2.identity();
    bool ok = true;
    for (const auto& g : all)
      if (reduce_element(g3, g, g2) == id2) {
        ++rep.kernel_size;
        ok = ok && cubes.count(g);
      }
    rep.cubes_cover_kernel = ok && rep.kernel_size == 27;
  }

  // Commutators of kernel elements of SL3(Z/8) -> SL3(Z/2).
  {
    GroupContext g(GroupSpec{Family::SL, 3, 2, 1, 3, {}});
    const WittRingContext& R = g.ring();
    std::mt19937_64 rng(seed);
    auto kernel_element = [&](Matrix& half) {
      Matrix h = perturb(R, ring_identity(3), random_ring_matrix(rng, R, 3));
      // Units of Z/8 are their own cubes up to inversion: c^3 = c.
      const uint32_t c = R.inv_raw(det3(R, h));
      for (auto& x : h) x = R.mul_raw(c, x);
      half.assign(9, 0);
      for (int i = 0; i < 9; ++i) half[i] = (R.sub_raw(h[i], i % 4 == 0 ? 1 : 0) / 2) % 2;
      return h;
    };
    bool ok = true;
    for (int t = 0; t < commutator_pairs; ++t) {
      Matrix x, y;
      const Matrix hx = kernel_element(x), hy = kernel_element(y);
      ok = ok && g.is_member(hx) && g.is_member(hy);
      const Matrix comm = g.mul(g.mul(hx, hy), g.mul(g.inverse(hx), g.inverse(hy)));
      Matrix expect = ring_identity(3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          int v = 0;
          for (int l = 0; l < 3; ++l) v += static_cast<int>(x[i * 3 + l] * y[l * 3 + j]) - static_cast<int>(y[i * 3 + l] * x[l * 3 + j]);
          expect[i * 3 + j] = R.add_raw(expect[i * 3 + j], R.core().from_int(4 * v));
        }
      ok = ok && comm == expect;
      ++rep.commutator_pairs;
    }
    rep.commutator_formula = ok;
  }

  // Squares of 1 + 2Z/8 against 1 + 4Z/8.
  {
    std::set<int> squares, deep;
    for (int u = 1; u < 8; u += 2) squares.insert(u * u % 8);
    for (int u = 1; u < 8; u += 2)
      if (u % 4 == 1) deep.insert(u);
    rep.torus_squares = squares == std::set<int>{1} && deep == std::set<int>{1, 5} && squares != deep;
  }
  return rep;
}

}  // namespace wittsplit
