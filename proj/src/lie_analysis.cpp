#include "wittsplit/lie_analysis.hpp"

#include <omp.h>

#include <algorithm>
#include <set>

namespace wittsplit {

namespace {

// Semi-echelon basis under construction: each row has a leading 1 at its
// pivot and zeros at the pivots of earlier rows.
class Spinner {
 public:
  Spinner(const FieldContext& k, int dim) : k_(k), dim_(dim) {}

  // Reduces v against the current rows; appends it when independent.
  bool add(KVec& v) {
    reduce(v);
    int lead = -1;
    for (int i = 0; i < dim_; ++i)
      if (v[i]) {
        lead = i;
        break;
      }
    if (lead < 0) return false;
    v = vec_scale(k_, k_.inv_raw(v[lead]), v);
    rows_.push_back(v);
    pivots_.push_back(lead);
    return true;
  }
  void reduce(KVec& v) const {
    for (size_t t = 0; t < rows_.size(); ++t)
      if (v[pivots_[t]]) vec_axpy(k_, v, k_.neg_raw(v[pivots_[t]]), rows_[t]);
  }
  int size() const { return static_cast<int>(rows_.size()); }
  const KRows& rows() const { return rows_; }

 private:
  const FieldContext& k_;
  int dim_;
  KRows rows_;
  std::vector<int> pivots_;
};

Submodule spin_with(const OperatorSet& m, const KRows& seeds, int stop_above = -1) {
  Spinner sp(*m.k, m.dim);
  std::vector<KVec> queue;
  for (KVec v : seeds)
    if (sp.add(v)) queue.push_back(v);
  while (!queue.empty()) {
    KVec v = std::move(queue.back());
    queue.pop_back();
    for (const auto& op : m.ops) {
      KVec w = mat_vec(*m.k, op, v);
      if (sp.add(w)) queue.push_back(std::move(w));
    }
    if (stop_above >= 0 && sp.size() > stop_above) break;
  }
  return make_subspace(*m.k, sp.rows(), m.dim);
}

KRows nil_kernel(const OperatorSet& m) {
  KRows rows;
  for (const auto& op : m.nil)
    for (const auto& r : op) rows.push_back(r);
  return kernel(*m.k, rows, m.dim);
}

uint64_t lines_in(uint64_t q, int c) {
  uint64_t total = 0, pw = 1;
  for (int j = 0; j < c; ++j) {
    total += pw;
    if (pw > (1ull << 40)) return ~0ull;
    pw *= q;
  }
  return total;
}

// idx-th normalized coefficient vector of length c (leading entry 1).
KVec decode_line(uint64_t idx, uint64_t q, int c) {
  KVec out(c, 0);
  for (int lead = 0; lead < c; ++lead) {
    uint64_t block = 1;
    for (int t = lead + 1; t < c; ++t) block *= q;
    if (idx < block) {
      out[lead] = 1;
      for (int t = c - 1; t > lead; --t) {
        out[t] = static_cast<uint32_t>(idx % q);
        idx /= q;
      }
      return out;
    }
    idx -= block;
  }
  throw DomainError("line index out of range");
}

KVec combine(const FieldContext& k, const KRows& basis, const KVec& c, int dim) {
  KVec v(dim, 0);
  for (size_t i = 0; i < c.size(); ++i) vec_axpy(k, v, c[i], basis[i]);
  return v;
}

KRows candidate_basis(const OperatorSet& m, LineMode mode) {
  return mode == LineMode::FixedPoints ? nil_kernel(m) : identity_rows(m.dim);
}

std::vector<Submodule> minimal_among(const FieldContext& k, std::set<KRows> spins, int dim) {
  std::vector<Submodule> all;
  for (const auto& b : spins) all.push_back(make_subspace(k, b, dim));
  std::sort(all.begin(), all.end(), [](const Submodule& a, const Submodule& b) {
    return a.dim() != b.dim() ? a.dim() < b.dim() : a.basis < b.basis;
  });
  std::vector<Submodule> out;
  for (const auto& s : all) {
    bool minimal = true;
    for (const auto& t : out)
      if (s.contains(k, t)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(s);
  }
  return out;
}

void check_stable(const OperatorSet& m, const Submodule& s) {
  if (!is_stable(m, s)) throw DomainError("computed subspace is not stable");
}

}  // namespace

// ------------------------------------------------------------------ subspaces

Submodule make_subspace(const FieldContext& k, const KRows& rows, int dim) {
  Echelon e = rref(k, rows, dim);
  return Submodule{std::move(e.rows), std::move(e.pivots)};
}

bool Submodule::contains(const FieldContext& k, const KVec& v) const {
  KVec w = v;
  for (size_t t = 0; t < basis.size(); ++t)
    if (w[pivots[t]]) vec_axpy(k, w, k.neg_raw(w[pivots[t]]), basis[t]);
  return is_zero(w);
}

bool Submodule::contains(const FieldContext& k, const Submodule& other) const {
  for (const auto& v : other.basis)
    if (!contains(k, v)) return false;
  return true;
}

Submodule subspace_sum(const FieldContext& k, const Submodule& a, const Submodule& b, int dim) {
  KRows rows = a.basis;
  rows.insert(rows.end(), b.basis.begin(), b.basis.end());
  return make_subspace(k, rows, dim);
}

Submodule coords_in(const FieldContext& k, const Submodule& outer, const Submodule& inner) {
  if (!outer.contains(k, inner)) throw DomainError("subspace is not contained in the ambient submodule");
  KRows rows;
  for (const auto& v : inner.basis) {
    KVec c(outer.dim());
    for (int t = 0; t < outer.dim(); ++t) c[t] = v[outer.pivots[t]];
    rows.push_back(c);
  }
  return make_subspace(k, rows, outer.dim());
}

Submodule annihilator(const FieldContext& k, const Submodule& s, int dim) {
  return make_subspace(k, kernel(k, s.basis, dim), dim);
}

// ------------------------------------------------------------------ operators

bool is_stable(const OperatorSet& m, const Submodule& s) {
  for (const auto& op : m.ops)
    for (const auto& v : s.basis)
      if (!s.contains(*m.k, mat_vec(*m.k, op, v))) return false;
  return true;
}

Submodule spin(const OperatorSet& m, const KRows& seeds) {
  Submodule s = spin_with(m, seeds);
  check_stable(m, s);
  return s;
}

OperatorSet restrict_to(const OperatorSet& m, const Submodule& s) {
  check_stable(m, s);
  const FieldContext& k = *m.k;
  auto restrict_op = [&](const KRows& op) {
    KRows out(s.dim(), KVec(s.dim(), 0));
    for (int u = 0; u < s.dim(); ++u) {
      const KVec img = mat_vec(k, op, s.basis[u]);
      if (!s.contains(k, img)) throw DomainError("operator does not preserve the subspace");
      for (int t = 0; t < s.dim(); ++t) out[t][u] = img[s.pivots[t]];
    }
    return out;
  };
  OperatorSet out{m.k, s.dim(), {}, {}};
  for (const auto& op : m.ops) out.ops.push_back(restrict_op(op));
  for (const auto& op : m.nil) out.nil.push_back(restrict_op(op));
  return out;
}

OperatorSet quotient_by(const OperatorSet& m, const Submodule& s) {
  check_stable(m, s);
  const FieldContext& k = *m.k;
  std::vector<int> free_cols;
  for (int c = 0, t = 0; c < m.dim; ++c) {
    if (t < s.dim() && s.pivots[t] == c) {
      ++t;
      continue;
    }
    free_cols.push_back(c);
  }
  const int qd = static_cast<int>(free_cols.size());
  auto quotient_op = [&](const KRows& op) {
    KRows out(qd, KVec(qd, 0));
    for (int j = 0; j < qd; ++j) {
      KVec e(m.dim, 0);
      e[free_cols[j]] = 1;
      KVec img = mat_vec(k, op, e);
      for (int t = 0; t < s.dim(); ++t)
        if (img[s.pivots[t]]) vec_axpy(k, img, k.neg_raw(img[s.pivots[t]]), s.basis[t]);
      for (int i = 0; i < qd; ++i) out[i][j] = img[free_cols[i]];
    }
    return out;
  };
  OperatorSet out{m.k, qd, {}, {}};
  for (const auto& op : m.ops) out.ops.push_back(quotient_op(op));
  for (const auto& op : m.nil) out.nil.push_back(quotient_op(op));
  return out;
}

OperatorSet dual(const OperatorSet& m) {
  OperatorSet out{m.k, m.dim, {}, {}};
  for (const auto& op : m.ops) out.ops.push_back(mat_transpose(op));
  for (const auto& op : m.nil) out.nil.push_back(mat_transpose(op));
  return out;
}

uint64_t candidate_line_count(const OperatorSet& m, LineMode mode) {
  const int c = mode == LineMode::FixedPoints ? static_cast<int>(nil_kernel(m).size()) : m.dim;
  return lines_in(m.k->q(), c);
}

std::vector<Submodule> minimal_submodules(const OperatorSet& m, LineMode mode, uint64_t guard) {
  const FieldContext& k = *m.k;
  const KRows basis = candidate_basis(m, mode);
  const int c = static_cast<int>(basis.size());
  const uint64_t q = k.q(), total = lines_in(q, c);
  if (total > guard) throw DomainError("line enumeration exceeds the guard");
  if (m.dim > 0 && c == 0) throw DomainError("nil operators have no common kernel");

  const int threads = omp_get_max_threads();
  std::vector<std::set<KRows>> found(threads);
#pragma omp parallel
  {
    auto& mine = found[omp_get_thread_num()];
#pragma omp for schedule(dynamic, 64)
    for (int64_t idx = 0; idx < static_cast<int64_t>(total); ++idx) {
      const KVec v = combine(k, basis, decode_line(static_cast<uint64_t>(idx), q, c), m.dim);
      mine.insert(spin_with(m, {v}).basis);
    }
  }
  std::set<KRows> all;
  for (auto& s : found) all.insert(s.begin(), s.end());
  auto out = minimal_among(k, std::move(all), m.dim);
  for (const auto& s : out) check_stable(m, s);
  return out;
}

std::vector<Submodule> minimal_submodules_serial(const OperatorSet& m, uint64_t guard) {
  const FieldContext& k = *m.k;
  const uint64_t q = k.q(), total = lines_in(q, m.dim);
  if (total > guard) throw DomainError("line enumeration exceeds the guard");
  std::set<KRows> all;
  for (uint64_t idx = 0; idx < total; ++idx) all.insert(spin_with(m, {decode_line(idx, q, m.dim)}).basis);
  return minimal_among(k, std::move(all), m.dim);
}

std::vector<Submodule> maximal_submodules(const OperatorSet& m, LineMode mode, uint64_t guard) {
  std::vector<Submodule> out;
  for (const auto& s : minimal_submodules(dual(m), mode, guard)) {
    Submodule a = annihilator(*m.k, s, m.dim);
    check_stable(m, a);
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end(), [](const Submodule& a, const Submodule& b) { return a.basis < b.basis; });
  return out;
}

std::vector<KVec> invariant_lines(const OperatorSet& m, LineMode mode, uint64_t guard) {
  const FieldContext& k = *m.k;
  const KRows basis = candidate_basis(m, mode);
  const int c = static_cast<int>(basis.size());
  const uint64_t q = k.q(), total = lines_in(q, c);
  if (total > guard) throw DomainError("line enumeration exceeds the guard");
  std::vector<KVec> out;
  for (uint64_t idx = 0; idx < total; ++idx) {
    KVec v = combine(k, basis, decode_line(idx, q, c), m.dim);
    int lead = 0;
    while (!v[lead]) ++lead;
    v = vec_scale(k, k.inv_raw(v[lead]), v);
    bool stable = true;
    for (const auto& op : m.ops) {
      const KVec w = mat_vec(k, op, v);
      if (w != vec_scale(k, w[lead], v)) {
        stable = false;
        break;
      }
    }
    if (stable) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool acts_trivially(const OperatorSet& m) {
  const KRows id = identity_rows(m.dim);
  for (const auto& op : m.ops)
    if (op != id) return false;
  return true;
}

bool module_extension_splits(const OperatorSet& m, const Submodule& s, const Submodule& n) {
  const FieldContext& k = *m.k;
  const OperatorSet ms = restrict_to(m, s);
  const Submodule nn = coords_in(k, s, n);
  if (!is_stable(ms, nn)) throw DomainError("kernel subspace is not stable");
  const int d = ms.dim, dn = nn.dim();
  std::vector<int> free_cols;
  for (int c = 0, t = 0; c < d; ++c) {
    if (t < dn && nn.pivots[t] == c) {
      ++t;
      continue;
    }
    free_cols.push_back(c);
  }
  const int dq = static_cast<int>(free_cols.size());
  if (dq == 0 || dn == 0) return true;
  // Unknown X[j][t]: section of free column j is e_j + sum_t X[j][t] n_t.
  const int nvars = dq * dn;
  KRows rows;
  KVec rhs;
  for (const auto& op : ms.ops) {
    KRows an(dn);
    for (int t = 0; t < dn; ++t) an[t] = mat_vec(k, op, nn.basis[t]);
    for (int j = 0; j < dq; ++j) {
      KVec e(d, 0);
      e[free_cols[j]] = 1;
      const KVec y = mat_vec(k, op, e);
      KVec qy(dq);
      {
        KVec red = y;
        for (int t = 0; t < dn; ++t)
          if (red[nn.pivots[t]]) vec_axpy(k, red, k.neg_raw(red[nn.pivots[t]]), nn.basis[t]);
        for (int i = 0; i < dq; ++i) qy[i] = red[free_cols[i]];
      }
      KVec r = y;
      for (int i = 0; i < dq; ++i) r[free_cols[i]] = k.sub_raw(r[free_cols[i]], qy[i]);
      // sum_t X[j][t] (A n_t) - sum_i qy_i sum_t X[i][t] n_t = -r
      for (int coord = 0; coord < d; ++coord) {
        KVec row(nvars, 0);
        for (int t = 0; t < dn; ++t) {
          row[j * dn + t] = k.add_raw(row[j * dn + t], an[t][coord]);
          for (int i = 0; i < dq; ++i)
            if (qy[i] && nn.basis[t][coord])
              row[i * dn + t] = k.sub_raw(row[i * dn + t], k.mul_raw(qy[i], nn.basis[t][coord]));
        }
        rows.push_back(std::move(row));
        rhs.push_back(k.neg_raw(r[coord]));
      }
    }
  }
  return solve(k, rows, rhs, nvars).has_value();
}

bool supplement_exists(const OperatorSet& m, const Submodule& z, LineMode mode, uint64_t guard) {
  if (m.dim == 0) return false;
  for (const auto& mx : maximal_submodules(m, mode, guard))
    if (subspace_sum(*m.k, mx, z, m.dim).dim() == m.dim) return true;
  return false;
}

// ------------------------------------------------------------------ Lie modules

Family simply_connected_family(Family f) {
  switch (f) {
    case Family::GL:
    case Family::PGL: return Family::SL;
    case Family::GSp:
    case Family::PGSp: return Family::Sp;
    case Family::GU:
    case Family::PGU: return Family::SU;
    default: return f;
  }
}

LieModule::LieModule(const GroupSpec& spec, ActingGroup acting) {
  if (spec.s != 1) throw DomainError("Lie modules are built at level 1");
  ctx_ = std::make_shared<GroupContext>(spec);
  if (!ctx_->spec().gram.empty()) throw DomainError("Lie modules need the default form");
  if (acting == ActingGroup::SimplyConnected && simply_connected_family(spec.family) != spec.family) {
    GroupSpec sc = spec;
    sc.family = simply_connected_family(spec.family);
    acting_ = std::make_shared<GroupContext>(sc);
  } else {
    acting_ = ctx_;
  }
  provenance_ = spec.label();
  const GroupContext& g = *ctx_;
  const FieldContext& k = field();
  const KRows& basis = g.lie_basis_k();
  dim_ = static_cast<int>(basis.size());
  const int n = g.dim();

  for (int i = 0; i < dim_; ++i) {
    if (spec.family == Family::G2) {
      const auto& c = *g.chevalley();
      const int rank = c.datum.rank;
      if (i < rank) {
        labels_.push_back("h" + std::to_string(i + 1));
      } else {
        const int a = i - rank;
        std::string s = a < c.datum.num_positive ? "e(" : "f(";
        const auto& co = c.datum.coeffs[a];
        for (size_t t = 0; t < co.size(); ++t) s += (t ? "," : "") + std::to_string(std::abs(co[t]));
        labels_.push_back(s + ")");
      }
      continue;
    }
    int pos = 0;
    while (!basis[i][pos]) ++pos;
    labels_.push_back("E" + std::to_string(pos / n + 1) + std::to_string(pos % n + 1));
  }

  table_.assign(dim_, std::vector<KVec>(dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) table_[i][j] = coords(g.lie_bracket(basis[i], basis[j]));

  for (const auto& x : acting_->generators()) action_.push_back(act_matrix(x));

  const GroupContext& a = *acting_;
  std::vector<Matrix> unip;
  if (a.has_roots()) {
    for (int r = 0; r < a.roots().num_positive; ++r)
      for (uint32_t l = 0, t = 1; l < static_cast<uint32_t>(spec.r); ++l, t *= spec.p) unip.push_back(a.root_element(r, t));
  } else {
    for (const auto& u : unipotent_sylow(a)) unip.push_back(u.m);
  }
  for (const auto& u : unip) {
    KRows m = act_matrix(u);
    for (int i = 0; i < dim_; ++i) m[i][i] = k.sub_raw(m[i][i], 1);
    unipotent_.push_back(std::move(m));
  }
}

KVec LieModule::coords(const KVec& ambient) const {
  auto c = ctx_->lie_coords_k(ctx_->normalize_lie(ambient));
  if (!c) throw DomainError("vector is not in the Lie algebra");
  return *c;
}

KVec LieModule::ambient(const KVec& c) const { return ctx_->lie_from_k(c); }

KVec LieModule::bracket(const KVec& x, const KVec& y) const {
  const FieldContext& k = field();
  KVec out(dim_, 0);
  for (int i = 0; i < dim_; ++i) {
    if (!x[i]) continue;
    for (int j = 0; j < dim_; ++j)
      if (y[j]) vec_axpy(k, out, k.mul_raw(x[i], y[j]), table_[i][j]);
  }
  return out;
}

KRows LieModule::act_matrix(const Matrix& g) const {
  const KRows& basis = ctx_->lie_basis_k();
  const Matrix ginv = ctx_->field_inverse(g);
  KRows m(dim_, KVec(dim_, 0));
  for (int j = 0; j < dim_; ++j) {
    const KVec c = coords(ctx_->adjoint_action(g, ginv, basis[j]));
    for (int i = 0; i < dim_; ++i) m[i][j] = c[i];
  }
  return m;
}

OperatorSet LieModule::module_ops() const { return OperatorSet{&field(), dim_, action_, unipotent_}; }

OperatorSet LieModule::ideal_ops() const {
  OperatorSet out{&field(), dim_, {}, {}};
  auto ad = [&](const KVec& x) {
    KRows m(dim_, KVec(dim_, 0));
    for (int j = 0; j < dim_; ++j) {
      KVec e(dim_, 0);
      e[j] = 1;
      const KVec b = bracket(x, e);
      for (int i = 0; i < dim_; ++i) m[i][j] = b[i];
    }
    return m;
  };
  for (int i = 0; i < dim_; ++i) {
    KVec e(dim_, 0);
    e[i] = 1;
    out.ops.push_back(ad(e));
  }
  for (const auto& x : ctx_->lie_nil_upper()) out.nil.push_back(ad(coords(x)));
  return out;
}

bool LieModule::validate() const {
  const FieldContext& k = field();
  for (int i = 0; i < dim_; ++i) {
    if (!is_zero(table_[i][i])) return false;
    for (int j = 0; j < dim_; ++j)
      if (vec_add(k, table_[i][j], table_[j][i]) != KVec(dim_, 0)) return false;
  }
  auto unit = [&](int i) {
    KVec e(dim_, 0);
    e[i] = 1;
    return e;
  };
  for (int a = 0; a < dim_; ++a)
    for (int b = a + 1; b < dim_; ++b)
      for (int c = b + 1; c < dim_; ++c) {
        KVec s = bracket(unit(a), table_[b][c]);
        s = vec_add(k, s, bracket(unit(b), table_[c][a]));
        s = vec_add(k, s, bracket(unit(c), table_[a][b]));
        if (!is_zero(s)) return false;
      }
  for (const auto& m : action_) {
    if (!mat_inverse(k, m)) return false;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const KVec lhs = mat_vec(k, m, table_[i][j]);
        KVec ci(dim_), cj(dim_);
        for (int t = 0; t < dim_; ++t) {
          ci[t] = m[t][i];
          cj[t] = m[t][j];
        }
        if (lhs != bracket(ci, cj)) return false;
      }
  }
  return true;
}

Submodule LieModule::whole() const { return span(identity_rows(dim_)); }

Submodule LieModule::derived_subalgebra() const {
  KRows rows;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) rows.push_back(table_[i][j]);
  Submodule s = span(rows);
  check_stable(module_ops(), s);
  return s;
}

Submodule LieModule::center() const {
  KRows eqs;
  for (int i = 0; i < dim_; ++i)
    for (int r = 0; r < dim_; ++r) {
      KVec row(dim_);
      for (int j = 0; j < dim_; ++j) row[j] = table_[i][j][r];
      eqs.push_back(row);
    }
  Submodule s = span(kernel(field(), eqs, dim_));
  check_stable(module_ops(), s);
  return s;
}

Submodule LieModule::group_center() const {
  const FieldContext& k = field();
  KRows eqs;
  for (int i = 0; i < dim_; ++i)
    for (int r = 0; r < dim_; ++r) {
      KVec row(dim_);
      for (int j = 0; j < dim_; ++j) row[j] = table_[i][j][r];
      eqs.push_back(row);
    }
  for (const auto& m : action_)
    for (int i = 0; i < dim_; ++i) {
      KVec row = m[i];
      row[i] = k.sub_raw(row[i], 1);
      eqs.push_back(row);
    }
  return span(kernel(k, eqs, dim_));
}

Submodule LieModule::lambda_image() const {
  KRows seeds;
  for (const auto& x : ctx_->lie_nil_upper()) seeds.push_back(coords(x));
  for (const auto& x : ctx_->lie_nil_lower()) seeds.push_back(coords(x));
  Submodule s = span(seeds);
  for (;;) {
    KRows rows = s.basis;
    for (int i = 0; i < s.dim(); ++i)
      for (int j = i + 1; j < s.dim(); ++j) rows.push_back(bracket(s.basis[i], s.basis[j]));
    Submodule next = span(rows);
    if (next.dim() == s.dim()) break;
    s = std::move(next);
  }
  check_stable(module_ops(), s);
  return s;
}

KRows LieModule::short_root_vectors() const {
  const GroupContext& g = *ctx_;
  if (!g.has_roots() || !g.roots().has_two_lengths()) throw DomainError("no short roots for this family");
  const auto& d = g.roots();
  KRows out;
  for (int a = 0; a < d.size(); ++a) {
    if (!d.is_short(a)) continue;
    if (g.family() == Family::G2) {
      out.push_back(coords(g.lie_basis_k()[g.chevalley()->basis_of_root(a)]));
      continue;
    }
    const IntMatrix& x = g.root_vector(a);
    const int n = g.dim(), p = g.spec().p;
    KVec v(n * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v[i * n + j] = static_cast<uint32_t>(((x[i][j] % p) + p) % p);
    out.push_back(coords(v));
  }
  return out;
}

Submodule LieModule::exceptional_ideal() const {
  const GroupSpec& s = ctx_->spec();
  const bool symplectic = s.family == Family::Sp || s.family == Family::PGSp || s.family == Family::GSp;
  const bool ok = (symplectic && s.p == 2 && s.n >= 4) || (s.family == Family::G2 && (s.p == 2 || s.p == 3));
  if (!ok) throw DomainError("exceptional ideal is defined for C_n with p = 2 and G2 with p = 2, 3");
  Submodule i = ideal_closure(short_root_vectors());
  check_stable(module_ops(), i);
  return i;
}

bool LieModule::is_simple_algebra() const {
  for (const auto& s : minimal_submodules(ideal_ops()))
    if (s.dim() < dim_) return false;
  return true;
}

}  // namespace wittsplit
