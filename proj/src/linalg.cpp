#include "wittsplit/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace wittsplit {

namespace {

Echelon rref_impl(const FieldContext& k, KRows rows, int ncols, KRows* transform) {
  const int n = static_cast<int>(rows.size());
  if (transform) *transform = identity_rows(n);
  Echelon out;
  int r = 0;
  for (int c = 0; c < ncols && r < n; ++c) {
    int sel = -1;
    for (int i = r; i < n; ++i)
      if (rows[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[r], rows[sel]);
    if (transform) std::swap((*transform)[r], (*transform)[sel]);
    const uint32_t inv = k.inv_raw(rows[r][c]);
    rows[r] = vec_scale(k, inv, rows[r]);
    if (transform) (*transform)[r] = vec_scale(k, inv, (*transform)[r]);
    for (int i = 0; i < n; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const uint32_t f = k.neg_raw(rows[i][c]);
      vec_axpy(k, rows[i], f, rows[r]);
      if (transform) vec_axpy(k, (*transform)[i], f, (*transform)[r]);
    }
    out.pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  if (transform) transform->resize(r);
  out.rows = std::move(rows);
  return out;
}

}  // namespace

KVec vec_add(const FieldContext& k, const KVec& a, const KVec& b) {
  KVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = k.add_raw(a[i], b[i]);
  return out;
}

KVec vec_scale(const FieldContext& k, uint32_t c, const KVec& a) {
  KVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = k.mul_raw(c, a[i]);
  return out;
}

void vec_axpy(const FieldContext& k, KVec& a, uint32_t c, const KVec& b) {
  if (c == 0) return;
  for (size_t i = 0; i < a.size(); ++i)
    if (b[i]) a[i] = k.add_raw(a[i], k.mul_raw(c, b[i]));
}

bool is_zero(const KVec& v) {
  for (uint32_t x : v)
    if (x) return false;
  return true;
}

KVec mat_vec(const FieldContext& k, const KRows& m, const KVec& v) {
  KVec out(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i) {
    uint32_t acc = 0;
    for (size_t j = 0; j < v.size(); ++j)
      if (m[i][j] && v[j]) acc = k.add_raw(acc, k.mul_raw(m[i][j], v[j]));
    out[i] = acc;
  }
  return out;
}

KRows mat_mul(const FieldContext& k, const KRows& a, const KRows& b) {
  const size_t n = a.size(), inner = b.size(), m = inner ? b[0].size() : 0;
  KRows out(n, KVec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < inner; ++l)
      if (a[i][l]) vec_axpy(k, out[i], a[i][l], b[l]);
  return out;
}

KRows mat_transpose(const KRows& a) {
  if (a.empty()) return {};
  KRows out(a[0].size(), KVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
  return out;
}

KRows identity_rows(int n) {
  KRows out(n, KVec(n, 0));
  for (int i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

std::optional<KRows> mat_inverse(const FieldContext& k, const KRows& a) {
  const int n = static_cast<int>(a.size());
  KRows t;
  auto e = rref_impl(k, a, n, &t);
  if (static_cast<int>(e.pivots.size()) < n) return std::nullopt;
  return t;
}

Echelon rref(const FieldContext& k, KRows rows, int ncols) { return rref_impl(k, std::move(rows), ncols, nullptr); }

int rank(const FieldContext& k, const KRows& rows, int ncols) {
  return static_cast<int>(rref(k, rows, ncols).pivots.size());
}

KRows kernel(const FieldContext& k, const KRows& a, int ncols) {
  auto e = rref(k, a, ncols);
  std::vector<int> is_pivot(ncols, -1);
  for (size_t i = 0; i < e.pivots.size(); ++i) is_pivot[e.pivots[i]] = static_cast<int>(i);
  KRows out;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f] >= 0) continue;
    KVec v(ncols, 0);
    v[f] = 1;
    for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = k.neg_raw(e.rows[i][f]);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<KVec> solve(const FieldContext& k, const KRows& a, const KVec& b, int ncols) {
  KRows aug = a;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto e = rref(k, aug, ncols + 1);
  KVec x(ncols, 0);
  for (size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == ncols) return std::nullopt;
    x[e.pivots[i]] = e.rows[i][ncols];
  }
  return x;
}

// ------------------------------------------------------------------ SpanCoords

SpanCoords::SpanCoords(const FieldContext& k, const KRows& basis, int ncols)
    : k_(&k), ncols_(ncols), basis_(basis) {
  ech_ = rref_impl(k, basis, ncols, &transform_);
  if (ech_.pivots.size() != basis.size()) throw DomainError("SpanCoords: family is linearly dependent");
  pivots_ = ech_.pivots;
}

std::optional<KVec> SpanCoords::coords(const KVec& v) const {
  KVec w = v;
  KVec c(pivots_.size(), 0);
  for (size_t i = 0; i < pivots_.size(); ++i) {
    const uint32_t a = w[pivots_[i]];
    if (!a) continue;
    vec_axpy(*k_, w, k_->neg_raw(a), ech_.rows[i]);
    vec_axpy(*k_, c, a, transform_[i]);
  }
  if (!is_zero(w)) return std::nullopt;
  return c;
}

KVec SpanCoords::combine(const KVec& coords) const {
  KVec out(ncols_, 0);
  for (size_t i = 0; i < coords.size(); ++i) vec_axpy(*k_, out, coords[i], basis_[i]);
  return out;
}

// -------------------------------------------------------------------- FpSolver

FpSolver::FpSolver(int p, int nvars) : p_(p), nvars_(nvars), words_((nvars + 1 + 63) / 64) {
  col_to_pivot_.assign(nvars, -1);
  inv_.assign(p, 0);
  for (int a = 1; a < p; ++a)
    for (int b = 1; b < p; ++b)
      if ((a * b) % p == 1) inv_[a] = static_cast<uint8_t>(b);
}

void FpSolver::add_row(const std::vector<uint8_t>& coeffs, uint8_t rhs) {
  std::vector<uint64_t> packed;
  std::vector<uint8_t> bytes;
  if (p_ == 2) {
    packed.assign(words_, 0);
    for (int i = 0; i < nvars_; ++i)
      if (coeffs[i] & 1) packed[i >> 6] |= uint64_t(1) << (i & 63);
    if (rhs & 1) packed[nvars_ >> 6] |= uint64_t(1) << (nvars_ & 63);
  } else {
    bytes.assign(coeffs.begin(), coeffs.begin() + nvars_);
    bytes.push_back(rhs);
  }
  insert(packed, bytes);
}

void FpSolver::add_sparse_row(const std::vector<std::pair<int, int>>& terms, int rhs) {
  std::vector<uint8_t> coeffs(nvars_, 0);
  for (auto [i, c] : terms) coeffs[i] = static_cast<uint8_t>(((coeffs[i] + c) % p_ + p_) % p_);
  add_row(coeffs, static_cast<uint8_t>(((rhs % p_) + p_) % p_));
}

void FpSolver::insert(std::vector<uint64_t>& packed, std::vector<uint8_t>& bytes) {
  const long index = rows_added_++;
  if (inconsistent_row_ >= 0) return;
  if (p_ == 2) {
    for (int c = 0; c < nvars_; ++c) {
      if (!((packed[c >> 6] >> (c & 63)) & 1)) continue;
      const int pv = col_to_pivot_[c];
      if (pv < 0) {
        col_to_pivot_[c] = static_cast<int>(pivot_col_.size());
        pivot_col_.push_back(c);
        packed_rows_.push_back(std::move(packed));
        return;
      }
      const auto& prow = packed_rows_[pv];
      for (int w = c >> 6; w < words_; ++w) packed[w] ^= prow[w];
    }
    if ((packed[nvars_ >> 6] >> (nvars_ & 63)) & 1) inconsistent_row_ = index;
    return;
  }
  for (int c = 0; c < nvars_; ++c) {
    const int v = bytes[c];
    if (!v) continue;
    const int pv = col_to_pivot_[c];
    if (pv < 0) {
      const int inv = inv_[v];
      for (int j = c; j <= nvars_; ++j) bytes[j] = static_cast<uint8_t>((bytes[j] * inv) % p_);
      col_to_pivot_[c] = static_cast<int>(pivot_col_.size());
      pivot_col_.push_back(c);
      byte_rows_.push_back(std::move(bytes));
      return;
    }
    const auto& prow = byte_rows_[pv];
    const int f = p_ - v;
    for (int j = c; j <= nvars_; ++j)
      if (prow[j]) bytes[j] = static_cast<uint8_t>((bytes[j] + f * prow[j]) % p_);
  }
  if (bytes[nvars_]) inconsistent_row_ = index;
}

std::vector<uint8_t> FpSolver::solution() const {
  if (!consistent()) throw DomainError("FpSolver: system is inconsistent");
  std::vector<uint8_t> x(nvars_, 0);
  // Process pivots from the rightmost leading column down.
  std::vector<int> order(pivot_col_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pivot_col_[a] > pivot_col_[b]; });
  for (int pv : order) {
    const int c = pivot_col_[pv];
    if (p_ == 2) {
      const auto& row = packed_rows_[pv];
      int acc = (row[nvars_ >> 6] >> (nvars_ & 63)) & 1;
      for (int j = c + 1; j < nvars_; ++j)
        if (x[j] && ((row[j >> 6] >> (j & 63)) & 1)) acc ^= 1;
      x[c] = static_cast<uint8_t>(acc);
    } else {
      const auto& row = byte_rows_[pv];
      int acc = row[nvars_];
      for (int j = c + 1; j < nvars_; ++j)
        if (x[j] && row[j]) acc = (acc + (p_ - row[j]) * x[j]) % p_;
      x[c] = static_cast<uint8_t>(acc);
    }
  }
  return x;
}

}  // namespace wittsplit
