#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wittsplit/linalg.hpp"
#include "wittsplit/ring_arith.hpp"
#include "wittsplit/root_data.hpp"

namespace wittsplit {

enum class Family { SL, GL, Sp, GSp, SU, GU, PGL, PGSp, PGU, G2 };

std::string family_name(Family f);
std::optional<Family> parse_family(const std::string& name);

struct GroupSpec {
  Family family = Family::SL;
  int n = 2;  // matrix size; 14 for G2 (adjoint module)
  int p = 2, r = 1, s = 1;
  // Optional n x n Gram matrix overriding the default anti-diagonal form.
  std::vector<int> gram;

  GroupSpec at_level(int level) const {
    GroupSpec out = *this;
    out.s = level;
    return out;
  }
  std::string label() const;  // e.g. "PGU3/F4"
};

// Row-major n x n matrix of coefficient codes.
using Matrix = std::vector<uint32_t>;

struct MatrixHash {
  size_t operator()(const Matrix& m) const;
};

struct UnipotentElement {
  std::vector<uint32_t> coords;  // field codes
  std::vector<int> root_ids;     // root of each coordinate (split families)
  Matrix m;                      // level-1 matrix
};

class GroupContext {
 public:
  explicit GroupContext(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  Family family() const { return spec_.family; }
  int dim() const { return n_; }
  int level() const { return spec_.s; }
  bool projective() const;
  bool unitary() const;
  bool has_roots() const { return chev_ != nullptr; }

  // Coefficient ring of the matrices: W_s(F_q), or W_s(F_{q^2}) for unitary families.
  const WittRingContext& ring() const { return *ring_; }
  const FieldContext& field() const { return ring_->residue_field(); }
  const FieldContext& prime_field() const { return *fp_; }
  uint32_t q() const;
  const std::vector<int>& gram() const { return gram_; }
  uint32_t involution_raw(uint32_t a) const;  // sigma on ring codes; identity for split families

  // Group operations (results canonicalized for projective families).
  Matrix identity() const;
  Matrix mul(const Matrix& a, const Matrix& b) const;
  Matrix inverse(const Matrix& a) const;
  Matrix pow(const Matrix& a, uint64_t e) const;
  Matrix canonical(const Matrix& a) const;
  std::string encode(const Matrix& a) const;
  std::vector<uint32_t> defect(const Matrix& a) const;
  bool is_member(const Matrix& a) const;

  // Root data (split families and G2).
  const RootDatum& roots() const;
  const ChevalleyData* chevalley() const { return chev_.get(); }
  // x_alpha(t), t a ring code.
  Matrix root_element(int alpha, uint32_t t) const;
  // Integer Chevalley-basis realization of e_alpha (matrix families).
  const IntMatrix& root_vector(int alpha) const;

  const std::vector<Matrix>& generators() const { return generators_; }

  // Lie space: ambient vectors of length dim()^2 over field().
  int lie_dim_fp() const { return static_cast<int>(lie_basis_fp_.size()); }
  const KRows& lie_basis_fp() const { return lie_basis_fp_; }
  std::optional<KVec> lie_coords_fp(const KVec& x) const;
  KVec lie_from_fp(const KVec& c) const;
  // k-structure: k = F_q for split families, F_p for unitary families over F_p.
  const FieldContext& lie_field() const;
  const KRows& lie_basis_k() const;
  std::optional<KVec> lie_coords_k(const KVec& x) const;
  KVec lie_from_k(const KVec& c) const;
  KVec normalize_lie(KVec x) const;
  KVec lie_bracket(const KVec& x, const KVec& y) const;
  // Strictly upper / lower parts of the Lie space as k-spans (ambient vectors).
  KRows lie_nil_upper() const;
  KRows lie_nil_lower() const;

  // Level-s kernel of reduction to level s-1 (s >= 2).
  bool in_reduction_kernel(const Matrix& g) const;
  KVec kernel_vector(const Matrix& g) const;
  Matrix lie_lift(const KVec& x) const;
  // AD(gbar) x for a level-1 matrix gbar given by field codes.
  KVec adjoint_action(const Matrix& gbar, const KVec& x) const;
  KVec adjoint_action(const Matrix& gbar, const Matrix& gbar_inv, const KVec& x) const;
  Matrix field_inverse(const Matrix& gbar) const;
  Matrix field_mul(const Matrix& a, const Matrix& b) const;

 private:
  std::vector<uint32_t> defect_in(const WittRingContext& R, const Matrix& a) const;
  void init_form();
  void init_roots();
  void init_lie();
  void init_generators();
  Matrix diag(const std::vector<uint32_t>& d) const;

  GroupSpec spec_;
  int n_ = 0;
  std::unique_ptr<WittRingContext> ring_;
  std::unique_ptr<FieldContext> fp_;
  std::vector<int> gram_;
  std::unique_ptr<ChevalleyData> chev_;
  std::vector<IntMatrix> root_vectors_;
  std::vector<Matrix> generators_;
  KRows lie_basis_fp_, lie_basis_k_;
  SpanCoords lie_span_fp_, lie_span_k_;
  bool k_via_flatten_ = false;
};

// Digit reduction to a lower level (same family, same field).
Matrix reduce_element(const GroupContext& from, const Matrix& g, const GroupContext& to);
// A member of `upper` (one level higher) reducing to g; digit lift corrected
// by a linear solve in the kernel coset.
Matrix lift_element(const GroupContext& lower, const Matrix& g, const GroupContext& upper);

std::vector<uint32_t> flatten_fp(const FieldContext& k, const KVec& x);
KVec unflatten_fp(const FieldContext& k, const std::vector<uint32_t>& digits);

// |G(F_q)| from the classical order formulas.
uint64_t order_polynomial(const GroupSpec& spec);
uint64_t p_part(uint64_t n, int p);
uint64_t unipotent_order(const GroupSpec& spec);

// Level-1 unipotent Sylow subgroup U(k) in normal-form coordinates.
std::vector<UnipotentElement> unipotent_sylow(const GroupContext& ctx);
// Product of root subgroups over a positive root subset closed under addition.
std::vector<UnipotentElement> unipotent_subgroup(const GroupContext& ctx, const std::vector<int>& positive_roots);
// Unitriangular members supported on the given strictly upper positions.
std::vector<UnipotentElement> unipotent_subgroup_by_support(const GroupContext& ctx,
                                                            const std::vector<std::pair<int, int>>& positions);
// Member of `upper` lifting a level-1 unipotent element: products of
// Teichmueller root elements for split families, corrected lifts otherwise.
Matrix unipotent_section(const GroupContext& lower, const UnipotentElement& u, const GroupContext& upper);

// Number of (root pair, sample) combinations at which the group commutator
// of x_alpha(s), x_beta(t) differs from the ordered product given by
// commutator_constants; samples are uniform ring elements.
long commutator_identity_violations(const GroupContext& ctx, int samples, uint64_t seed);

// Level-2 context: every element of the reduction kernel (enumerated as
// lie_lift of the F_p-span) is a member, kernel_vector inverts lie_lift, and
// kernel_vector(g * b) = kernel_vector(g) + kernel_vector(b) for every g and
// every basis lift b. Returns the kernel size, or 0 on failure.
uint64_t kernel_additivity_exhaustive(const GroupContext& level2, uint64_t limit);

struct BfsResult {
  uint64_t order = 0;
  std::vector<Matrix> elements;
};

// Level-synchronous BFS; products of each frontier are computed in parallel.
BfsResult bfs_enumerate(const GroupContext& ctx, uint64_t guard = 1000000);
// Queue-based reference implementation.
BfsResult bfs_enumerate_serial(const GroupContext& ctx, uint64_t guard = 1000000);

}  // namespace wittsplit
