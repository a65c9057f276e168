#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wittsplit/group_model.hpp"
#include "wittsplit/linalg.hpp"

namespace wittsplit {

enum class Verdict { Split, NonSplit };
enum class SolveMode { Generators, AllPairs };

std::string verdict_name(Verdict v);

// Which level-1 unipotent group the extension is restricted to.
struct SubgroupChoice {
  enum Kind { Sylow, Roots, Support } kind = Sylow;
  std::vector<int> roots;                      // positive root ids (Roots)
  std::vector<std::pair<int, int>> support;    // strictly upper positions (Support)

  static SubgroupChoice sylow() { return {}; }
  static SubgroupChoice by_roots(std::vector<int> r) { return {Roots, std::move(r), {}}; }
  static SubgroupChoice by_support(std::vector<std::pair<int, int>> s) { return {Support, {}, std::move(s)}; }
  std::string describe() const;
};

struct ExtensionOptions {
  SubgroupChoice subgroup;
  // Ambient Lie vectors (over the residue field) whose k-span is the ideal N.
  std::optional<KRows> quotient;
  // 0: Teichmueller section. Otherwise s(q) is twisted by a pseudo-random
  // kernel element lie_lift(X_q) drawn from this seed (X_1 = 0).
  uint64_t section_seed = 0;
};

// Pull-back of G(W_2(k)) -> G(k) to a unipotent group Q, with kernel
// Lie_{F_p}(G_k) or its quotient by a stable ideal N. Module vectors are
// F_p coordinates of M/N.
class ExtensionInstance {
 public:
  ExtensionInstance(const GroupSpec& spec, const ExtensionOptions& opts = {});

  const GroupContext& level1() const { return *g1_; }
  const GroupContext& level2() const { return *g2_; }
  const ExtensionOptions& options() const { return opts_; }
  int p() const { return p_; }

  int order() const { return static_cast<int>(elements_.size()); }
  const std::vector<UnipotentElement>& elements() const { return elements_; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * order() + b]; }
  int inv(int a) const { return inverse_[a]; }
  int index_of(const Matrix& level1_matrix) const;
  // Greedy generating set (indices).
  const std::vector<int>& generators() const { return gens_; }

  // Dimension of M (before the quotient) and of M/N over F_p.
  int full_dim() const { return full_dim_; }
  int dim() const { return dim_; }
  const KRows& action(int q) const { return action_[q]; }
  // F_p coordinates of M -> M/N and a complementary lift M/N -> M.
  KVec project(const KVec& full) const;
  KVec lift(const KVec& quotient_coords) const;
  // Kernel element of the level-2 group as a vector of M.
  KVec module_vector(const Matrix& kernel_element) const;
  Matrix kernel_element(const KVec& full) const;

  const std::vector<Matrix>& sections() const { return sections_; }
  // c(g,h) = s(g)s(h)s(gh)^-1 as an element of M/N; row-major |Q| x |Q|.
  const std::vector<KVec>& cocycle() const { return cocycle_; }
  const KVec& cocycle(int g, int h) const { return cocycle_[static_cast<size_t>(g) * order() + h]; }
  void set_cocycle(std::vector<KVec> table) { cocycle_ = std::move(table); }

  // Recomputation of the table: OpenMP over rows, and the serial reference.
  std::vector<KVec> cocycle_table_parallel() const;
  std::vector<KVec> cocycle_table_serial() const;

 private:
  void build_module();

  GroupSpec spec_;
  ExtensionOptions opts_;
  std::shared_ptr<const GroupContext> g1_, g2_;
  int p_ = 2;
  std::vector<UnipotentElement> elements_;
  std::vector<int> table_, inverse_, gens_;
  std::unordered_map<Matrix, int, MatrixHash> index_;
  int full_dim_ = 0, dim_ = 0;
  // N in reduced echelon form inside F_p^full_dim; complement = non-pivot columns.
  KRows n_rows_;
  std::vector<int> n_pivots_, free_cols_;
  std::vector<KRows> action_;
  std::vector<Matrix> sections_;
  std::vector<KVec> cocycle_;
};

// Number of triples violating c(g,h) + c(gh,l) = g.c(h,l) + c(g,hl); every
// triple when |Q| <= exhaustive_limit, otherwise `samples` random triples.
long cocycle_identity_violations(const ExtensionInstance& ext, int exhaustive_limit = 64, int samples = 20000,
                                 uint64_t seed = 1);
bool cocycle_normalized(const ExtensionInstance& ext);

struct CertificateRow {
  long row = -1;  // insertion index in the linear system
  int g = -1, h = -1, coordinate = -1;
};

struct SplitDecision {
  Verdict verdict = Verdict::Split;
  std::string method;  // "full-Sylow" or "subgroup-restriction"
  int order = 0;
  int module_dim_fp = 0;
  long unknowns = 0;
  long rank = 0;
  // Split: beta(q) in M/N coordinates, and the twisted section on generators.
  std::vector<KVec> beta;
  std::vector<Matrix> witness_generators;
  bool witness_verified = false;
  // NonSplit: first inconsistent row.
  CertificateRow certificate;
};

// Solves c(g,h) = g.beta(h) - beta(gh) + beta(g) over F_p. Generators mode
// uses the rows with g in the generating set only, which is equivalent for a
// cocycle.
SplitDecision decide_split(const ExtensionInstance& ext, SolveMode mode = SolveMode::Generators,
                           long unknown_guard = 20000);

// Twisted section q -> lie_lift(-beta(q)) s(q).
std::vector<Matrix> twisted_section(const ExtensionInstance& ext, const std::vector<KVec>& beta);
// The twisted section is a homomorphism modulo N on all |Q|^2 pairs.
bool verify_twisted_section(const ExtensionInstance& ext, const std::vector<KVec>& beta);

enum class Gamma { Zero, NonZero, Inconclusive };
std::string gamma_name(Gamma g);

struct SylowCheck {
  uint64_t group_order = 0;
  uint64_t sylow_order = 0;
  bool index_coprime = false;
};
SylowCheck sylow_check(const GroupSpec& spec);

struct GammaResult {
  Gamma gamma = Gamma::Inconclusive;
  SplitDecision decision;
  SylowCheck sylow;
};

// Full Sylow decision; Zero needs Split together with a p-prime index.
GammaResult classify_gamma(const GroupSpec& spec, const std::optional<KRows>& quotient = std::nullopt);
// NonSplit certifies NonZero; Split is inconclusive.
GammaResult certify_nonsplit_by_restriction(const GroupSpec& spec, const SubgroupChoice& sub);
// Same decisions on an already built extension (Sylow or restricted).
GammaResult classify_gamma(const ExtensionInstance& ext, long unknown_guard = 20000);
GammaResult certify_nonsplit_by_restriction(const ExtensionInstance& ext, long unknown_guard = 20000);

// Verdicts under `reruns` randomized sections (seeds 1..reruns).
std::vector<Verdict> rerun_with_random_sections(const GroupSpec& spec, ExtensionOptions opts, int reruns);

struct MutationResult {
  bool identity_violated = false;
  Verdict verdict = Verdict::Split;  // AllPairs decision on the mutated table
  bool detected() const { return identity_violated || verdict == Verdict::NonSplit; }
};
// Adds a nonzero vector to c(g0,h0) for the first non-identity pair.
MutationResult mutation_control(const ExtensionInstance& ext, uint64_t seed = 1);

// ---------------------------------------------------------------- lift tables

// Matrices over a Galois ring with relation words; word letters index the lifts.
struct LiftTable {
  int n = 0;
  std::vector<Matrix> lifts;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> relations;
};

Matrix ring_mat_mul(const WittRingContext& R, int n, const Matrix& a, const Matrix& b);
Matrix ring_identity(int n);
bool verify_lift_relations(const WittRingContext& R, const LiftTable& t);
// Closure of the lifts under multiplication; empty when it exceeds `cap`.
std::vector<Matrix> generated_group(const WittRingContext& R, int n, const std::vector<Matrix>& gens, size_t cap);

struct QuaternionFixture {
  std::unique_ptr<WittRingContext> ring;  // W_2(F_4)
  uint32_t a = 0;                          // field code of a generator of F_4 over F_2
  std::vector<std::pair<uint32_t, uint32_t>> lift_pairs;  // all (t_a, t_{a+1}) found
  uint32_t t_a = 0, t_a1 = 0;
  LiftTable table;  // X1, X2, X3 with X3^2 = 1, X1^2 = X2^2 = (X1X2)^2 = X3
};

QuaternionFixture quaternion_fixture();
// Upper unitriangular A over F_4 with tau(A) = A, tau the conjugate-transpose-type
// involution (x, y, z) -> (tau z, tau(xz - y), tau x).
std::vector<Matrix> tau_fixed_unitriangular(const FieldContext& f4);

struct QuaternionReport {
  // The table's t-entries agree, t_a + t_{a+1} = t_a t_{a+1} = 1, and they lift a, a + 1.
  bool lift_identities = false;
  bool relations = false;
  uint64_t group_order = 0;
  int involutions = 0;
  bool reduction_injective = false;
  bool reduction_onto_fixed = false;
  bool ok() const {
    return lift_identities && relations && group_order == 8 && involutions == 1 && reduction_injective &&
           reduction_onto_fixed;
  }
};
QuaternionReport verify_quaternion(const QuaternionFixture& f);

struct CorruptionSweep {
  long tried = 0;
  long still_verified = 0;
  // Corrupted tables that still pass the group-theoretic checks alone (the
  // 13 entries of X1 and X2 may be any lift of a); they fail the t-consistency.
  long group_checks_passed = 0;
};
// Replaces each single entry of each lift by every other ring value.
CorruptionSweep quaternion_corruption_sweep(const QuaternionFixture& f);

// --------------------------------------------------------------- entry chases

struct ChaseResult {
  int trials = 0;
  int entry_nonzero = 0;     // trials where the checked entry is not 0
  int scalar_power = 0;      // trials where X3^p is a scalar in 1 + pW_2
  int reduction_wrong = 0;   // trials where X3 mod p is not the expected matrix
  bool ok() const { return trials > 0 && entry_nonzero == 0 && scalar_power == 0 && reduction_wrong == 0; }
};

// X1 = I + E12 + 3Y1, X2 = I + E23 + 3Y2 over Z/9; 31 entry of X1 X2 X1^2 X2^2.
ChaseResult chase_pgl3(int trials, uint64_t seed);
// X1 = I + E12 - E43 + 3Y1, X2 = I - E14 - E23 + 3Y2 over Z/9.
ChaseResult chase_pgsp4(int trials, uint64_t seed);
// Over W_2(F_9) with a^2 + 1 = 0 and Teichmueller coefficients.
ChaseResult chase_pgu3(int trials, uint64_t seed);
// (I + E12 + pY)^p = I + pE12 over W_2(F_p), p >= 5.
ChaseResult chase_pth_power(int p, int trials, uint64_t seed);

// ---------------------------------------------------------- ingredient checks

struct IngredientReport {
  bool proper_image = false;      // SL2(Z/4) -> PGL2(Z/4) proper, onto PGL2(F_2)
  bool cubes_cover_kernel = false;  // Ker(SL2(Z/27) -> SL2(Z/9)) consists of cubes
  bool commutator_formula = false;  // kernel commutators in SL3(Z/8)
  bool torus_squares = false;       // squares of Ker(units Z/8 -> Z/2) miss Ker(-> Z/4)
  uint64_t image_order = 0, pgl_order = 0, kernel_size = 0;
  int commutator_pairs = 0;
  bool all() const { return proper_image && cubes_cover_kernel && commutator_formula && torus_squares; }
};
IngredientReport ingredient_checks(uint64_t seed = 1, int commutator_pairs = 100);

}  // namespace wittsplit
