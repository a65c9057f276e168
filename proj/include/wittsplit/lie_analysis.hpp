#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wittsplit/group_model.hpp"
#include "wittsplit/linalg.hpp"

namespace wittsplit {

// Subspace of k^d in reduced row echelon form; equal subspaces compare equal.
struct Submodule {
  KRows basis;
  std::vector<int> pivots;
  int dim() const { return static_cast<int>(basis.size()); }
  bool contains(const FieldContext& k, const KVec& v) const;
  bool contains(const FieldContext& k, const Submodule& other) const;
  friend bool operator==(const Submodule& a, const Submodule& b) { return a.basis == b.basis; }
};

Submodule make_subspace(const FieldContext& k, const KRows& rows, int dim);
Submodule subspace_sum(const FieldContext& k, const Submodule& a, const Submodule& b, int dim);
// Coordinates of the subspace `inner` with respect to the echelon basis of `outer`.
Submodule coords_in(const FieldContext& k, const Submodule& outer, const Submodule& inner);

// A finite set of k-linear operators on k^d. Stable subspaces are the
// subspaces invariant under every operator in `ops`. Every nonzero stable
// subspace must meet the common kernel of `nil`; this holds when `nil`
// consists of u - 1 for the elements u of a p-subgroup generated inside the
// acting group, or of a Lie algebra of nilpotent operators in the span of ops.
struct OperatorSet {
  const FieldContext* k = nullptr;
  int dim = 0;
  std::vector<KRows> ops;
  std::vector<KRows> nil;
};

enum class LineMode { FixedPoints, Exhaustive };

bool is_stable(const OperatorSet& m, const Submodule& s);
// Smallest stable subspace containing the seeds.
Submodule spin(const OperatorSet& m, const KRows& seeds);
OperatorSet restrict_to(const OperatorSet& m, const Submodule& s);
OperatorSet quotient_by(const OperatorSet& m, const Submodule& s);
// Contragredient: transposed operators; stable subspaces correspond to annihilators.
OperatorSet dual(const OperatorSet& m);
Submodule annihilator(const FieldContext& k, const Submodule& s, int dim);

// Number of k-lines in the subspace spanned by the common kernel of `nil`
// (FixedPoints) or in k^d (Exhaustive).
uint64_t candidate_line_count(const OperatorSet& m, LineMode mode);
std::vector<Submodule> minimal_submodules(const OperatorSet& m, LineMode mode = LineMode::FixedPoints,
                                          uint64_t guard = 2000000);
// Serial reference for the exhaustive spin.
std::vector<Submodule> minimal_submodules_serial(const OperatorSet& m, uint64_t guard = 2000000);
std::vector<Submodule> maximal_submodules(const OperatorSet& m, LineMode mode = LineMode::FixedPoints,
                                          uint64_t guard = 2000000);
// Lines invariant under every operator.
std::vector<KVec> invariant_lines(const OperatorSet& m, LineMode mode = LineMode::FixedPoints,
                                  uint64_t guard = 2000000);
bool acts_trivially(const OperatorSet& m);
// Is there an equivariant linear section of s -> s/n? (n inside s, both stable)
bool module_extension_splits(const OperatorSet& m, const Submodule& s, const Submodule& n);
// Is there a proper stable V with V + z = k^d?
bool supplement_exists(const OperatorSet& m, const Submodule& z, LineMode mode = LineMode::FixedPoints,
                       uint64_t guard = 2000000);

enum class ActingGroup { Own, SimplyConnected };

// Lie(G_k) in k-coordinates with the adjoint action of a group of k-points.
class LieModule {
 public:
  explicit LieModule(const GroupSpec& spec, ActingGroup acting = ActingGroup::SimplyConnected);

  const GroupContext& group() const { return *ctx_; }
  const GroupContext& acting_group() const { return *acting_; }
  const FieldContext& field() const { return ctx_->lie_field(); }
  int dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& provenance() const { return provenance_; }

  KVec coords(const KVec& ambient) const;
  KVec ambient(const KVec& coords) const;
  KVec bracket(const KVec& x, const KVec& y) const;
  const KVec& bracket_basis(int i, int j) const { return table_[i][j]; }
  const std::vector<KRows>& action() const { return action_; }
  KRows act_matrix(const Matrix& g) const;

  // Operators for submodules under the acting group, and for ideals.
  OperatorSet module_ops() const;
  OperatorSet ideal_ops() const;

  // Alternating, Jacobi on basis triples, action invertible and bracket preserving.
  bool validate() const;

  Submodule whole() const;
  Submodule span(const KRows& coords) const { return make_subspace(field(), coords, dim_); }
  Submodule derived_subalgebra() const;
  Submodule center() const;
  // Center intersected with the fixed space of the acting group.
  Submodule group_center() const;
  Submodule lambda_image() const;
  Submodule exceptional_ideal() const;
  Submodule ideal_closure(const KRows& seeds) const { return spin(ideal_ops(), seeds); }
  Submodule module_spin(const KRows& seeds) const { return spin(module_ops(), seeds); }
  // No proper nonzero ideal.
  bool is_simple_algebra() const;
  KRows short_root_vectors() const;

 private:
  std::shared_ptr<const GroupContext> ctx_, acting_;
  int dim_ = 0;
  std::vector<std::string> labels_;
  std::string provenance_;
  std::vector<std::vector<KVec>> table_;
  std::vector<KRows> action_, unipotent_;
};

// Simply connected family with the same root datum; identity for G2.
Family simply_connected_family(Family f);

}  // namespace wittsplit
