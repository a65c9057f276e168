#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wittsplit {

using IntVec = std::vector<long long>;
using IntMatrix = std::vector<IntVec>;  // row-major, square

// Root system in the Bourbaki realization. Roots are indexed: positive roots
// first (by height, then lexicographically in simple-root coefficients),
// followed by their negatives in the same order.
struct RootDatum {
  std::string label;
  int rank = 0;
  int ambient_dim = 0;
  std::vector<std::vector<int>> roots;   // ambient coordinates
  std::vector<std::vector<int>> coeffs;  // coefficients over the simple roots
  std::vector<int> sq_length;
  std::vector<int> simple;  // root indices of the simple roots
  int num_positive = 0;

  int size() const { return static_cast<int>(roots.size()); }
  bool is_positive(int a) const { return a < num_positive; }
  int neg(int a) const { return a < num_positive ? a + num_positive : a - num_positive; }
  int index_of(const std::vector<int>& v) const;
  // Index of roots[a] + roots[b], or -1.
  int sum(int a, int b) const;
  int inner(int a, int b) const;
  // <beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha).
  int cartan(int beta, int alpha) const;
  bool is_short(int a) const;
  bool has_two_lengths() const;
  int height(int a) const;
  // Coefficients of alpha^vee over the simple coroots.
  std::vector<int> coroot_coeffs(int a) const;
};

RootDatum build_root_system(std::string_view label);

// (s, t): beta - s alpha, ..., beta + t alpha is the alpha-string through beta.
std::pair<int, int> root_string(const RootDatum& d, int alpha, int beta);

struct CommutatorTerm {
  int i = 0, j = 0;
  int root = -1;  // index of i alpha + j beta
  long long m = 0;
};

// Chevalley basis {h_1..h_rank, e_a for every root a}: basis index of e_a is
// rank + a.
struct ChevalleyData {
  RootDatum datum;
  std::vector<std::vector<int>> N;  // N[a][b], zero when a + b is not a root
  int dim = 0;
  std::vector<int> bracket;  // [(x*dim + y)*dim + z] = coefficient of basis z in [x, y]
  std::vector<int> nilpotency;  // smallest n with (ad e_a)^n = 0
  std::vector<std::vector<IntMatrix>> divided_powers;  // [a][k] = (ad e_a)^k / k!, k < nilpotency
  std::map<std::pair<int, int>, std::vector<CommutatorTerm>> commutators;

  int basis_of_root(int a) const { return datum.rank + a; }
  int bracket_coeff(int x, int y, int z) const { return bracket[(x * dim + y) * dim + z]; }
  IntMatrix ad(int x) const;
  // x_a(t) in the adjoint representation, for integer t.
  IntMatrix root_element(int a, long long t) const;
};

ChevalleyData build_chevalley_data(const RootDatum& d);

int structure_constant(const ChevalleyData& c, int alpha, int beta);
const std::vector<CommutatorTerm>& commutator_constants(const ChevalleyData& c, int alpha, int beta);
bool is_exceptional_pair(const RootDatum& d, int p, int alpha, int beta);

// Deterministic JSON document with roots and integer constants.
std::string dump_root_data_json(const ChevalleyData& c);

IntMatrix int_identity(int n);
IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b);

}  // namespace wittsplit
