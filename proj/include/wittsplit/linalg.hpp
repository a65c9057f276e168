#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wittsplit/ring_arith.hpp"

namespace wittsplit {

// Dense vectors and matrices over a finite field, stored as element codes.
using KVec = std::vector<uint32_t>;
using KRows = std::vector<KVec>;

struct Echelon {
  KRows rows;               // reduced row echelon form, pivot entries 1
  std::vector<int> pivots;  // pivot column of each row
};

Echelon rref(const FieldContext& k, KRows rows, int ncols);
int rank(const FieldContext& k, const KRows& rows, int ncols);
// Basis of {x : A x = 0}, A given by rows of length ncols.
KRows kernel(const FieldContext& k, const KRows& a, int ncols);
// Some x with A x = b, free variables set to zero.
std::optional<KVec> solve(const FieldContext& k, const KRows& a, const KVec& b, int ncols);

KVec vec_add(const FieldContext& k, const KVec& a, const KVec& b);
KVec vec_scale(const FieldContext& k, uint32_t c, const KVec& a);
// a += c * b
void vec_axpy(const FieldContext& k, KVec& a, uint32_t c, const KVec& b);
bool is_zero(const KVec& v);
// Matrix (row-major rows) times column vector.
KVec mat_vec(const FieldContext& k, const KRows& m, const KVec& v);
KRows mat_mul(const FieldContext& k, const KRows& a, const KRows& b);
KRows mat_transpose(const KRows& a);
std::optional<KRows> mat_inverse(const FieldContext& k, const KRows& a);
KRows identity_rows(int n);

// Coordinates with respect to a fixed linearly independent family.
class SpanCoords {
 public:
  SpanCoords() = default;
  SpanCoords(const FieldContext& k, const KRows& basis, int ncols);
  int dim() const { return static_cast<int>(pivots_.size()); }
  // Coordinates of v, or nullopt when v is outside the span.
  std::optional<KVec> coords(const KVec& v) const;
  KVec combine(const KVec& coords) const;
  bool contains(const KVec& v) const { return coords(v).has_value(); }

 private:
  const FieldContext* k_ = nullptr;
  int ncols_ = 0;
  KRows basis_;
  Echelon ech_;
  std::vector<int> pivots_;
  KRows transform_;  // ech rows = transform * basis
};

// Incremental row reduction over F_p with an augmented right-hand side.
// Rows over F_2 are packed in 64-bit words; other primes use byte rows.
// Pivoting is deterministic: the leading column of a row selects its pivot
// and rows are consumed in insertion order.
class FpSolver {
 public:
  FpSolver(int p, int nvars);
  int nvars() const { return nvars_; }
  int rank() const { return static_cast<int>(pivot_col_.size()); }
  bool consistent() const { return inconsistent_row_ < 0; }
  // Index (insertion order) of the first row that reduced to 0 = nonzero.
  long inconsistent_row() const { return inconsistent_row_; }
  long rows_added() const { return rows_added_; }
  // Adds the equation sum coeffs[i] x_i = rhs (coeffs values in [0, p)).
  void add_row(const std::vector<uint8_t>& coeffs, uint8_t rhs);
  // Sparse variant: (index, coefficient) pairs, repeated indices accumulate.
  void add_sparse_row(const std::vector<std::pair<int, int>>& terms, int rhs);
  // A solution with free variables zero; requires consistent().
  std::vector<uint8_t> solution() const;

 private:
  void insert(std::vector<uint64_t>& packed, std::vector<uint8_t>& bytes);
  int p_, nvars_, words_;
  long rows_added_ = 0;
  long inconsistent_row_ = -1;
  std::vector<int> pivot_col_;
  std::vector<int> col_to_pivot_;
  std::vector<std::vector<uint64_t>> packed_rows_;  // p = 2, rhs at bit nvars
  std::vector<std::vector<uint8_t>> byte_rows_;     // p odd, rhs at index nvars
  std::vector<uint8_t> inv_;
};

}  // namespace wittsplit
