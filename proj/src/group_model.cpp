#include "wittsplit/group_model.hpp"

#include <algorithm>
#include <boost/container_hash/hash.hpp>
#include <numeric>
#include <omp.h>
#include <random>
#include <sstream>
#include <unordered_set>

namespace wittsplit {

namespace {

template <class Ar>
Matrix mat_mul_raw(const Ar& R, int n, const Matrix& a, const Matrix& b) {
  Matrix out(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      const uint32_t x = a[i * n + l];
      if (!x) continue;
      const uint32_t* brow = &b[l * n];
      uint32_t* orow = &out[i * n];
      for (int j = 0; j < n; ++j)
        if (brow[j]) orow[j] = R.add_raw(orow[j], R.mul_raw(x, brow[j]));
    }
  return out;
}

// Gauss-Jordan with unit pivots; works over fields and local rings.
template <class Ar, class Unit>
std::optional<Matrix> mat_inv_raw(const Ar& R, int n, Matrix a, Unit is_unit) {
  Matrix inv(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (is_unit(a[r * n + c])) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    if (piv != c)
      for (int j = 0; j < n; ++j) {
        std::swap(a[piv * n + j], a[c * n + j]);
        std::swap(inv[piv * n + j], inv[c * n + j]);
      }
    const uint32_t u = R.inv_raw(a[c * n + c]);
    for (int j = 0; j < n; ++j) {
      a[c * n + j] = R.mul_raw(u, a[c * n + j]);
      inv[c * n + j] = R.mul_raw(u, inv[c * n + j]);
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || !a[r * n + c]) continue;
      const uint32_t f = R.neg_raw(a[r * n + c]);
      for (int j = 0; j < n; ++j) {
        if (a[c * n + j]) a[r * n + j] = R.add_raw(a[r * n + j], R.mul_raw(f, a[c * n + j]));
        if (inv[c * n + j]) inv[r * n + j] = R.add_raw(inv[r * n + j], R.mul_raw(f, inv[c * n + j]));
      }
    }
  }
  return inv;
}

uint32_t det_raw(const WittRingContext& R, int n, const Matrix& a) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  uint32_t acc = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    uint32_t term = 1;
    for (int i = 0; i < n && term; ++i) term = R.mul_raw(term, a[i * n + perm[i]]);
    acc = inversions % 2 ? R.sub_raw(acc, term) : R.add_raw(acc, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

IntMatrix int_bracket(const IntMatrix& x, const IntMatrix& y) {
  IntMatrix a = int_mul(x, y), b = int_mul(y, x);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) a[i][j] -= b[i][j];
  return a;
}

bool int_is_zero(const IntMatrix& m) {
  for (const auto& row : m)
    for (long long v : row)
      if (v) return false;
  return true;
}

std::vector<uint32_t> unit_group_generators(const WittRingContext& R) {
  std::vector<uint32_t> gens;
  std::unordered_set<uint32_t> sub = {1};
  for (uint32_t u = 1; u < R.size(); ++u) {
    if (!R.is_unit_raw(u) || sub.count(u)) continue;
    gens.push_back(u);
    std::vector<uint32_t> frontier(sub.begin(), sub.end());
    while (!frontier.empty()) {
      std::vector<uint32_t> next;
      for (uint32_t x : frontier)
        for (uint32_t g : gens) {
          const uint32_t y = R.mul_raw(x, g);
          if (sub.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
  }
  return gens;
}

uint64_t ipow(uint64_t b, int e) {
  uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Closure of a generating list inside a small finite group.
std::vector<Matrix> closure(const GroupContext& ctx, const std::vector<Matrix>& gens, size_t cap) {
  std::unordered_set<Matrix, MatrixHash> seen = {ctx.identity()};
  std::vector<Matrix> all = {ctx.identity()};
  for (size_t head = 0; head < all.size(); ++head)
    for (const auto& g : gens) {
      Matrix y = ctx.mul(all[head], g);
      if (seen.insert(y).second) {
        all.push_back(std::move(y));
        if (all.size() > cap) throw DomainError("subgroup closure exceeded its bound");
      }
    }
  return all;
}

std::vector<Matrix> greedy_generators(const GroupContext& ctx, const std::vector<Matrix>& elems) {
  std::vector<Matrix> gens;
  std::unordered_set<Matrix, MatrixHash> sub = {ctx.identity()};
  for (const auto& e : elems) {
    if (sub.count(e)) continue;
    gens.push_back(e);
    auto all = closure(ctx, gens, elems.size() + 1);
    sub = std::unordered_set<Matrix, MatrixHash>(all.begin(), all.end());
    if (sub.size() == elems.size()) break;
  }
  return gens;
}

}  // namespace

size_t MatrixHash::operator()(const Matrix& m) const { return boost::hash_range(m.begin(), m.end()); }

std::string family_name(Family f) {
  switch (f) {
    case Family::SL: return "SL";
    case Family::GL: return "GL";
    case Family::Sp: return "Sp";
    case Family::GSp: return "GSp";
    case Family::SU: return "SU";
    case Family::GU: return "GU";
    case Family::PGL: return "PGL";
    case Family::PGSp: return "PGSp";
    case Family::PGU: return "PGU";
    case Family::G2: return "G2adjoint";
  }
  return "?";
}

std::optional<Family> parse_family(const std::string& name) {
  for (Family f : {Family::SL, Family::GL, Family::Sp, Family::GSp, Family::SU, Family::GU, Family::PGL, Family::PGSp,
                   Family::PGU, Family::G2})
    if (family_name(f) == name) return f;
  if (name == "G2") return Family::G2;
  return std::nullopt;
}

std::string GroupSpec::label() const {
  std::ostringstream os;
  if (family == Family::G2)
    os << "G2";
  else
    os << family_name(family) << n;
  os << "/F" << ipow(p, r);
  if (s > 1) os << "@W" << s;
  return os.str();
}

// ---------------------------------------------------------------- GroupContext

GroupContext::GroupContext(GroupSpec spec) : spec_(std::move(spec)) {
  const Family f = spec_.family;
  if (spec_.s < 1 || spec_.s > 3) throw DomainError("level must be 1, 2 or 3");
  if (spec_.r < 1 || spec_.r > 4) throw DomainError("unsupported field degree");
  auto need = [&](std::initializer_list<int> ok) {
    if (std::find(ok.begin(), ok.end(), spec_.n) == ok.end())
      throw DomainError("unsupported matrix size for " + family_name(f));
  };
  switch (f) {
    case Family::SL:
    case Family::GL:
    case Family::PGL: need({2, 3, 4}); break;
    case Family::Sp:
    case Family::GSp:
    case Family::PGSp: need({4, 6}); break;
    case Family::SU:
    case Family::GU:
    case Family::PGU: need({2, 3, 4}); break;
    case Family::G2: spec_.n = 14; break;
  }
  n_ = spec_.n;
  ring_ = std::make_unique<WittRingContext>(spec_.p, unitary() ? 2 * spec_.r : spec_.r, spec_.s);
  fp_ = std::make_unique<FieldContext>(spec_.p, 1);
  init_form();
  init_roots();
  init_lie();
  init_generators();
}

bool GroupContext::projective() const {
  return spec_.family == Family::PGL || spec_.family == Family::PGSp || spec_.family == Family::PGU;
}

bool GroupContext::unitary() const {
  return spec_.family == Family::SU || spec_.family == Family::GU || spec_.family == Family::PGU;
}

uint32_t GroupContext::q() const { return static_cast<uint32_t>(ipow(spec_.p, spec_.r)); }

void GroupContext::init_form() {
  const int n = n_;
  const Family f = spec_.family;
  const bool symplectic = f == Family::Sp || f == Family::GSp || f == Family::PGSp;
  if (!spec_.gram.empty()) {
    if (static_cast<int>(spec_.gram.size()) != n * n) throw DomainError("Gram matrix has the wrong size");
    gram_ = spec_.gram;
  } else if (symplectic) {
    gram_.assign(n * n, 0);
    for (int a = 0; a < n; ++a) gram_[a * n + (n - 1 - a)] = a < n / 2 ? 1 : -1;
  } else if (unitary()) {
    gram_.assign(n * n, 0);
    for (int a = 0; a < n; ++a) gram_[a * n + (n - 1 - a)] = 1;
  }
}

uint32_t GroupContext::involution_raw(uint32_t a) const {
  if (!unitary()) return a;
  for (int i = 0; i < spec_.r; ++i) a = ring_->frob_raw(a);
  return a;
}

const RootDatum& GroupContext::roots() const {
  if (!chev_) throw DomainError("family has no root data");
  return chev_->datum;
}

const IntMatrix& GroupContext::root_vector(int alpha) const {
  if (root_vectors_.empty()) throw DomainError("no integral root vectors for this family");
  return root_vectors_.at(alpha);
}

void GroupContext::init_roots() {
  const Family f = spec_.family;
  const int n = n_;
  if (f == Family::G2) {
    chev_ = std::make_unique<ChevalleyData>(build_chevalley_data(build_root_system("G2")));
    return;
  }
  const bool linear = f == Family::SL || f == Family::GL || f == Family::PGL;
  const bool symplectic = f == Family::Sp || f == Family::GSp || f == Family::PGSp;
  if (!(linear || (symplectic && spec_.gram.empty()))) return;

  const std::string label = linear ? "A" + std::to_string(n - 1) : "C" + std::to_string(n / 2);
  chev_ = std::make_unique<ChevalleyData>(build_chevalley_data(build_root_system(label)));
  const RootDatum& d = chev_->datum;
  const int m = n / 2;

  auto E = [&](int a, int b) {
    IntMatrix x(n, IntVec(n, 0));
    x[a][b] = 1;
    return x;
  };
  IntMatrix J(n, IntVec(n, 0));
  if (symplectic)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J[i][j] = gram_[i * n + j];

  auto weight = [&](int a) {
    std::vector<int> w(d.ambient_dim, 0);
    if (linear)
      w[a] = 1;
    else if (a < m)
      w[a] = 1;
    else
      w[n - 1 - a] = -1;
    return w;
  };
  auto raw_vector = [&](int g) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        std::vector<int> w = weight(a), wb = weight(b);
        for (int i = 0; i < d.ambient_dim; ++i) w[i] -= wb[i];
        if (w != d.roots[g]) continue;
        if (linear) return E(a, b);
        // Project E_ab into sp: E_ab - J^{-1} E_ba J, with J^{-1} = -J.
        IntMatrix y = int_mul(int_mul(J, E(b, a)), J);
        if (y == E(a, b)) return E(a, b);
        IntMatrix x = E(a, b);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) x[i][j] += y[i][j];
        return x;
      }
    throw DomainError("no matrix position for root");
  };

  const int N = d.size(), P = d.num_positive;
  root_vectors_.assign(N, {});
  for (int g = 0; g < P; ++g) {
    IntMatrix raw = raw_vector(g);
    if (d.height(g) == 1) {
      root_vectors_[g] = raw;
      continue;
    }
    // Extraspecial pair, matching the structure-constant propagation.
    int best = -1, other = -1;
    for (int a = 0; a < P && best < 0; ++a) {
      std::vector<int> v(d.ambient_dim);
      for (int i = 0; i < d.ambient_dim; ++i) v[i] = d.roots[g][i] - d.roots[a][i];
      const int b = d.index_of(v);
      if (b >= 0 && b < P && a < b) {
        best = a;
        other = b;
      }
    }
    const IntMatrix c = int_bracket(root_vectors_[best], root_vectors_[other]);
    const long long nab = chev_->N[best][other];
    IntMatrix x(n, IntVec(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (c[i][j] % nab != 0) throw DomainError("root vector calibration failed");
        x[i][j] = c[i][j] / nab;
      }
    if (x != raw) {
      IntMatrix neg = raw;
      for (auto& row : neg)
        for (auto& v : row) v = -v;
      if (x != neg) throw DomainError("root vector calibration failed");
    }
    root_vectors_[g] = x;
  }
  for (int g = 0; g < P; ++g) {
    IntMatrix y = raw_vector(d.neg(g));
    const IntMatrix h = int_bracket(root_vectors_[g], y);
    const IntMatrix t = int_bracket(h, root_vectors_[g]);
    long long c = 0;
    for (int i = 0; i < n && !c; ++i)
      for (int j = 0; j < n && !c; ++j)
        if (root_vectors_[g][i][j]) c = t[i][j] / root_vectors_[g][i][j];
    if (c == -2)
      for (auto& row : y)
        for (auto& v : row) v = -v;
    else if (c != 2)
      throw DomainError("coroot normalization failed");
    root_vectors_[d.neg(g)] = y;
  }
  // Every bracket relation of the Chevalley basis holds in the realization.
  for (int a = 0; a < N; ++a) {
    if (!int_is_zero(int_mul(root_vectors_[a], root_vectors_[a]))) throw DomainError("root vector is not square-zero");
    for (int b = 0; b < N; ++b) {
      if (b == a || b == d.neg(a)) continue;
      const IntMatrix c = int_bracket(root_vectors_[a], root_vectors_[b]);
      const int s = d.sum(a, b);
      IntMatrix expect(n, IntVec(n, 0));
      if (s >= 0)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) expect[i][j] = chev_->N[a][b] * root_vectors_[s][i][j];
      if (c != expect) throw DomainError("realized root vectors violate the structure constants");
    }
  }
}

Matrix GroupContext::root_element(int alpha, uint32_t t) const {
  if (!chev_) throw DomainError("root elements need a split family with the default form");
  const WittRingContext& R = *ring_;
  const int n = n_;
  if (spec_.family == Family::G2) {
    Matrix out(n * n, 0);
    uint32_t tk = 1;
    for (const auto& dk : chev_->divided_powers.at(alpha)) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (dk[i][j]) out[i * n + j] = R.add_raw(out[i * n + j], R.mul_raw(R.core().from_int(dk[i][j]), tk));
      tk = R.mul_raw(tk, t);
    }
    return out;
  }
  const IntMatrix& x = root_vectors_.at(alpha);
  Matrix out = identity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (x[i][j]) out[i * n + j] = R.add_raw(out[i * n + j], R.mul_raw(R.core().from_int(x[i][j]), t));
  return canonical(out);
}

// ------------------------------------------------------------- group operations

Matrix GroupContext::identity() const {
  Matrix m(n_ * n_, 0);
  for (int i = 0; i < n_; ++i) m[i * n_ + i] = 1;
  return m;
}

Matrix GroupContext::mul(const Matrix& a, const Matrix& b) const {
  return canonical(mat_mul_raw(*ring_, n_, a, b));
}

Matrix GroupContext::inverse(const Matrix& a) const {
  const WittRingContext& R = *ring_;
  auto inv = mat_inv_raw(R, n_, a, [&](uint32_t x) { return R.is_unit_raw(x); });
  if (!inv) throw DomainError("matrix is not invertible");
  return canonical(*inv);
}

Matrix GroupContext::pow(const Matrix& a, uint64_t e) const {
  Matrix out = identity(), b = a;
  while (e) {
    if (e & 1) out = mul(out, b);
    b = mul(b, b);
    e >>= 1;
  }
  return out;
}

Matrix GroupContext::canonical(const Matrix& a) const {
  if (!projective()) return a;
  const WittRingContext& R = *ring_;
  for (uint32_t x : a)
    if (R.is_unit_raw(x)) {
      if (x == 1) return a;
      const uint32_t u = R.inv_raw(x);
      Matrix out(a.size());
      for (size_t i = 0; i < a.size(); ++i) out[i] = R.mul_raw(u, a[i]);
      return out;
    }
  throw DomainError("canonicalize: matrix has no unit entry");
}

std::string GroupContext::encode(const Matrix& a) const {
  std::string out;
  for (int i = 0; i < n_; ++i) {
    if (i) out += " / ";
    for (int j = 0; j < n_; ++j) {
      if (j) out += ' ';
      out += ring_->encode(ring_->from_code(a[i * n_ + j]));
    }
  }
  return out;
}

std::vector<uint32_t> GroupContext::defect(const Matrix& a) const { return defect_in(*ring_, a); }

std::vector<uint32_t> GroupContext::defect_in(const WittRingContext& R, const Matrix& a) const {
  const int n = n_;
  const Family f = spec_.family;
  std::vector<uint32_t> out;
  auto form_defect = [&](bool twisted, bool similitude) {
    Matrix at(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        uint32_t x = a[j * n + i];
        if (twisted)
          for (int k = 0; k < spec_.r; ++k) x = R.frob_raw(x);
        at[i * n + j] = x;
      }
    Matrix J(n * n);
    for (int i = 0; i < n * n; ++i) J[i] = R.core().from_int(gram_[i]);
    const Matrix M = mat_mul_raw(R, n, mat_mul_raw(R, n, at, J), a);
    uint32_t mu = 1;
    if (similitude) {
      int fpos = 0;
      while (gram_[fpos] == 0) ++fpos;
      mu = R.mul_raw(M[fpos], R.core().from_int(gram_[fpos]));
    }
    for (int i = 0; i < n * n; ++i) out.push_back(R.sub_raw(M[i], R.mul_raw(mu, J[i])));
  };
  switch (f) {
    case Family::SL: out.push_back(R.sub_raw(det_raw(R, n, a), 1)); break;
    case Family::GL:
    case Family::PGL: break;
    case Family::Sp: form_defect(false, false); break;
    case Family::GSp:
    case Family::PGSp: form_defect(false, true); break;
    case Family::SU:
      form_defect(true, false);
      out.push_back(R.sub_raw(det_raw(R, n, a), 1));
      break;
    case Family::GU:
    case Family::PGU: form_defect(true, true); break;
    case Family::G2: {
      // The matrix acts on the Chevalley basis as a Lie algebra automorphism.
      const int d = n;
      const std::vector<int>& c = chev_->bracket;
      for (int x = 0; x < d; ++x)
        for (int y = x + 1; y < d; ++y) {
          std::vector<uint32_t> lhs(d, 0), rhs(d, 0);
          for (int z = 0; z < d; ++z) {
            const int cz = c[(x * d + y) * d + z];
            if (!cz) continue;
            const uint32_t cc = R.core().from_int(cz);
            for (int w = 0; w < d; ++w) lhs[w] = R.add_raw(lhs[w], R.mul_raw(cc, a[w * d + z]));
          }
          for (int u = 0; u < d; ++u) {
            const uint32_t au = a[u * d + x];
            if (!au) continue;
            for (int v = 0; v < d; ++v) {
              const uint32_t av = a[v * d + y];
              if (!av) continue;
              const uint32_t prod = R.mul_raw(au, av);
              for (int z = 0; z < d; ++z) {
                const int cz = c[(u * d + v) * d + z];
                if (cz) rhs[z] = R.add_raw(rhs[z], R.mul_raw(R.core().from_int(cz), prod));
              }
            }
          }
          for (int z = 0; z < d; ++z) out.push_back(R.sub_raw(lhs[z], rhs[z]));
        }
      break;
    }
  }
  return out;
}

bool GroupContext::is_member(const Matrix& a) const {
  if (static_cast<int>(a.size()) != n_ * n_) return false;
  const WittRingContext& R = *ring_;
  if (!mat_inv_raw(R, n_, a, [&](uint32_t x) { return R.is_unit_raw(x); })) return false;
  if (projective() && canonical(a) != a) return false;
  for (uint32_t x : defect(a))
    if (x) return false;
  return true;
}

Matrix GroupContext::diag(const std::vector<uint32_t>& d) const {
  Matrix m(n_ * n_, 0);
  for (int i = 0; i < n_; ++i) m[i * n_ + i] = d[i];
  return canonical(m);
}

// ------------------------------------------------------------------- Lie space

std::vector<uint32_t> flatten_fp(const FieldContext& k, const KVec& x) {
  const int r = k.r(), p = k.p();
  std::vector<uint32_t> out;
  out.reserve(x.size() * r);
  for (uint32_t c : x)
    for (int l = 0; l < r; ++l) {
      out.push_back(c % p);
      c /= p;
    }
  return out;
}

KVec unflatten_fp(const FieldContext& k, const std::vector<uint32_t>& digits) {
  const int r = k.r(), p = k.p();
  KVec out(digits.size() / r, 0);
  for (size_t i = 0; i < out.size(); ++i) {
    uint32_t c = 0;
    for (int l = r - 1; l >= 0; --l) c = c * p + digits[i * r + l];
    out[i] = c;
  }
  return out;
}

void GroupContext::init_lie() {
  const int n = n_, nn = n * n;
  const FieldContext& k = field();
  const FieldContext& fp = *fp_;
  const int ra = k.r(), p = spec_.p;
  const int nvars = nn * ra;

  if (spec_.family == Family::G2) {
    for (int b = 0; b < n; ++b) {
      const IntMatrix ad = chev_->ad(b);
      for (int l = 0; l < ra; ++l) {
        KVec v(nn, 0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const long long c = ((ad[i][j] % p) + p) % p;
            if (c) v[i * n + j] = k.mul_raw(static_cast<uint32_t>(c), ipow(p, l));
          }
        lie_basis_fp_.push_back(v);
      }
    }
  } else {
    WittRingContext R2(p, ra, 2);
    const uint32_t pc = R2.core().from_int(p);
    std::vector<std::vector<uint32_t>> columns;
    for (int v = 0; v < nvars; ++v) {
      Matrix A(nn, 0);
      for (int i = 0; i < n; ++i) A[i * n + i] = 1;
      const int pos = v / ra, l = v % ra;
      A[pos] = R2.add_raw(A[pos], R2.mul_raw(pc, R2.lift_raw(static_cast<uint32_t>(ipow(p, l)))));
      std::vector<uint32_t> d = defect_in(R2, A);
      KVec dk(d.size());
      for (size_t i = 0; i < d.size(); ++i) dk[i] = R2.lie_coordinate_raw(d[i]);
      columns.push_back(flatten_fp(k, dk));
    }
    KRows rows;
    if (!columns.empty() && !columns[0].empty()) rows = mat_transpose(columns);
    if (projective())
      for (int l = 0; l < ra; ++l) {
        KVec row(nvars, 0);
        row[l] = 1;
        rows.push_back(row);
      }
    for (const auto& v : kernel(fp, rows, nvars)) lie_basis_fp_.push_back(unflatten_fp(k, v));
  }

  // Expected dimension over the base field F_q.
  int expect = 0;
  const Family f = spec_.family;
  switch (f) {
    case Family::SL:
    case Family::PGL:
    case Family::SU:
    case Family::PGU: expect = nn - 1; break;
    case Family::GL: expect = nn; break;
    case Family::GU: expect = nn + 1; break;
    case Family::Sp:
    case Family::PGSp: expect = n * (n + 1) / 2; break;
    case Family::GSp: expect = n * (n + 1) / 2 + 1; break;
    case Family::G2: expect = 14; break;
  }
  if (lie_dim_fp() != expect * spec_.r) throw DomainError("Lie space has unexpected dimension");

  KRows flat;
  for (const auto& v : lie_basis_fp_) flat.push_back(flatten_fp(k, v));
  lie_span_fp_ = SpanCoords(fp, flat, nvars);

  if (unitary()) {
    k_via_flatten_ = true;
    if (spec_.r == 1) lie_basis_k_ = lie_basis_fp_;
    return;
  }
  KRows kb;
  for (const auto& v : lie_basis_fp_) {
    KRows trial = kb;
    trial.push_back(v);
    if (rank(k, trial, nn) > static_cast<int>(kb.size())) kb = std::move(trial);
  }
  if (static_cast<int>(kb.size()) * spec_.r != lie_dim_fp()) throw DomainError("Lie space is not k-stable");
  lie_basis_k_ = kb;
  lie_span_k_ = SpanCoords(k, kb, nn);
}

std::optional<KVec> GroupContext::lie_coords_fp(const KVec& x) const {
  return lie_span_fp_.coords(flatten_fp(field(), x));
}

KVec GroupContext::lie_from_fp(const KVec& c) const {
  const FieldContext& k = field();
  KVec out(n_ * n_, 0);
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i]) vec_axpy(k, out, c[i], lie_basis_fp_[i]);
  return out;
}

const FieldContext& GroupContext::lie_field() const {
  if (!k_via_flatten_) return field();
  if (spec_.r != 1) throw DomainError("k-structure of unitary Lie algebras needs q = p");
  return *fp_;
}

const KRows& GroupContext::lie_basis_k() const {
  (void)lie_field();
  return lie_basis_k_;
}

std::optional<KVec> GroupContext::lie_coords_k(const KVec& x) const {
  if (k_via_flatten_) {
    (void)lie_field();
    return lie_coords_fp(x);
  }
  return lie_span_k_.coords(x);
}

KVec GroupContext::lie_from_k(const KVec& c) const {
  if (k_via_flatten_) return lie_from_fp(c);
  const FieldContext& k = field();
  KVec out(n_ * n_, 0);
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i]) vec_axpy(k, out, c[i], lie_basis_k_[i]);
  return out;
}

KVec GroupContext::normalize_lie(KVec x) const {
  if (!projective()) return x;
  const FieldContext& k = field();
  const uint32_t c = x[0];
  if (!c) return x;
  for (int i = 0; i < n_; ++i) x[i * n_ + i] = k.sub_raw(x[i * n_ + i], c);
  return x;
}

KVec GroupContext::lie_bracket(const KVec& x, const KVec& y) const {
  const FieldContext& k = field();
  Matrix a = mat_mul_raw(k, n_, x, y), b = mat_mul_raw(k, n_, y, x);
  for (size_t i = 0; i < a.size(); ++i) a[i] = k.sub_raw(a[i], b[i]);
  return normalize_lie(a);
}

KRows GroupContext::lie_nil_upper() const {
  const int n = n_;
  if (spec_.family == Family::G2) {
    KRows out;
    for (int a = 0; a < chev_->datum.num_positive; ++a) out.push_back(lie_basis_k_[chev_->basis_of_root(a)]);
    return out;
  }
  // Elements of the k-basis span with all diagonal and lower entries zero.
  const FieldContext& lk = lie_field();
  const KRows& B = lie_basis_k();
  KRows rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      if (k_via_flatten_) {
        for (int l = 0; l < field().r(); ++l) {
          KVec row;
          for (const auto& b : B) row.push_back(flatten_fp(field(), KVec{b[i * n + j]})[l]);
          rows.push_back(row);
        }
      } else {
        KVec row;
        for (const auto& b : B) row.push_back(b[i * n + j]);
        rows.push_back(row);
      }
    }
  KRows out;
  for (const auto& c : kernel(lk, rows, static_cast<int>(B.size()))) out.push_back(lie_from_k(c));
  return out;
}

KRows GroupContext::lie_nil_lower() const {
  const int n = n_;
  if (spec_.family == Family::G2) {
    KRows out;
    const auto& d = chev_->datum;
    for (int a = 0; a < d.num_positive; ++a) out.push_back(lie_basis_k_[chev_->basis_of_root(d.neg(a))]);
    return out;
  }
  KRows out;
  for (const auto& x : lie_nil_upper()) {
    // Transposition maps the strictly upper part onto the strictly lower
    // part for every supported form up to sign; verify membership.
    KVec t(n * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t[j * n + i] = x[i * n + j];
    if (!lie_coords_k(t)) {
      // Conjugate by the anti-diagonal permutation instead.
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[(n - 1 - i) * n + (n - 1 - j)] = x[i * n + j];
      t = normalize_lie(t);
      if (!lie_coords_k(t)) throw DomainError("no lower nilpotent counterpart");
    }
    out.push_back(t);
  }
  return out;
}

bool GroupContext::in_reduction_kernel(const Matrix& g) const {
  if (level() < 2) throw DomainError("reduction kernel needs level >= 2");
  const WittRingContext& R = *ring_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const uint32_t x = R.sub_raw(g[i * n_ + j], i == j ? 1 : 0);
      if (R.reduce_raw(x, level() - 1) != 0) return false;
    }
  return true;
}

KVec GroupContext::kernel_vector(const Matrix& g) const {
  if (!in_reduction_kernel(g)) throw DomainError("kernel_vector: element does not reduce to the identity");
  const WittRingContext& R = *ring_;
  KVec x(n_ * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) x[i * n_ + j] = R.lie_coordinate_raw(R.sub_raw(g[i * n_ + j], i == j ? 1 : 0));
  return x;
}

Matrix GroupContext::lie_lift(const KVec& x) const {
  if (level() < 2) throw DomainError("lie_lift needs level >= 2");
  const KVec y = normalize_lie(x);
  Matrix m = identity();
  for (int i = 0; i < n_ * n_; ++i) m[i] = ring_->add_raw(m[i], ring_->lie_embed_raw(y[i]));
  return canonical(m);
}

Matrix GroupContext::field_mul(const Matrix& a, const Matrix& b) const { return mat_mul_raw(field(), n_, a, b); }

Matrix GroupContext::field_inverse(const Matrix& gbar) const {
  const FieldContext& k = field();
  auto inv = mat_inv_raw(k, n_, gbar, [](uint32_t x) { return x != 0; });
  if (!inv) throw DomainError("matrix is not invertible over the residue field");
  return *inv;
}

KVec GroupContext::adjoint_action(const Matrix& gbar, const KVec& x) const {
  return adjoint_action(gbar, field_inverse(gbar), x);
}

KVec GroupContext::adjoint_action(const Matrix& gbar, const Matrix& gbar_inv, const KVec& x) const {
  const FieldContext& k = field();
  return normalize_lie(mat_mul_raw(k, n_, mat_mul_raw(k, n_, gbar, x), gbar_inv));
}

// ------------------------------------------------------------------ generators

void GroupContext::init_generators() {
  const Family f = spec_.family;
  const WittRingContext& R = *ring_;
  const int n = n_;
  if (unitary()) {
    if (level() > 1) {
      GroupContext lower(spec_.at_level(level() - 1));
      for (const auto& g : lower.generators()) generators_.push_back(lift_element(lower, g, *this));
      for (const auto& x : lie_basis_fp_) generators_.push_back(lie_lift(x));
      return;
    }
    auto U = unipotent_sylow(*this);
    std::vector<Matrix> uel;
    for (auto& u : U) uel.push_back(u.m);
    auto ug = greedy_generators(*this, uel);
    Matrix J(n * n, 0);
    for (int i = 0; i < n; ++i) J[i * n + (n - 1 - i)] = 1;
    for (const auto& g : ug) {
      generators_.push_back(g);
      generators_.push_back(mul(mul(J, g), J));
    }
    // Diagonal members.
    const uint32_t qq = R.size();
    std::vector<Matrix> tor;
    std::vector<uint32_t> d(n, 1);
    uint64_t total = ipow(qq, n);
    for (uint64_t code = 0; code < total; ++code) {
      uint64_t c = code;
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        d[i] = static_cast<uint32_t>(c % qq);
        c /= qq;
        ok &= d[i] != 0;
      }
      if (!ok) continue;
      Matrix m(n * n, 0);
      for (int i = 0; i < n; ++i) m[i * n + i] = d[i];
      m = canonical(m);
      if (is_member(m)) tor.push_back(m);
    }
    for (const auto& g : greedy_generators(*this, tor)) generators_.push_back(g);
    return;
  }
  if (!chev_) return;  // matrix arithmetic only (non-default form)
  const RootDatum& d = roots();
  std::vector<uint32_t> ts;
  for (int l = 0; l < spec_.r; ++l) ts.push_back(R.teich_raw(static_cast<uint32_t>(ipow(spec_.p, l))));
  for (int a : d.simple)
    for (uint32_t t : ts) {
      generators_.push_back(root_element(a, t));
      generators_.push_back(root_element(d.neg(a), t));
    }
  if (f == Family::G2) return;
  for (uint32_t u : unit_group_generators(R)) {
    const uint32_t ui = R.inv_raw(u);
    std::vector<uint32_t> dg(n, 1);
    switch (f) {
      case Family::SL:
        dg[0] = u;
        dg[1] = ui;
        break;
      case Family::GL:
      case Family::PGL: dg[0] = u; break;
      case Family::Sp:
        dg[0] = u;
        dg[n - 1] = ui;
        break;
      case Family::GSp:
      case Family::PGSp:
        for (int i = 0; i < n / 2; ++i) dg[i] = u;
        break;
      default: break;
    }
    generators_.push_back(diag(dg));
  }
}

// ------------------------------------------------------------ level transport

Matrix reduce_element(const GroupContext& from, const Matrix& g, const GroupContext& to) {
  if (from.family() != to.family() || from.field().q() != to.field().q() || to.level() >= from.level())
    throw DomainError("reduce_element: incompatible contexts");
  Matrix out(g.size());
  for (size_t i = 0; i < g.size(); ++i) out[i] = from.ring().reduce_raw(g[i], to.level());
  return to.canonical(out);
}

Matrix lift_element(const GroupContext& lower, const Matrix& g, const GroupContext& upper) {
  if (upper.level() != lower.level() + 1 || upper.family() != lower.family())
    throw DomainError("lift_element: incompatible contexts");
  if (upper.family() == Family::G2) throw DomainError("lift_element: G2 elements lift through root elements");
  const WittRingContext& R = upper.ring();
  const FieldContext& k = upper.field();
  const int n = upper.dim(), nn = n * n, ra = k.r(), p = k.p(), s = upper.level();
  Matrix a0(nn);
  for (int i = 0; i < nn; ++i) a0[i] = R.lift_from_level_raw(g[i], lower.level());
  const std::vector<uint32_t> d0 = upper.defect(a0);
  if (std::all_of(d0.begin(), d0.end(), [](uint32_t x) { return x == 0; })) return upper.canonical(a0);
  const uint32_t ps = R.core().from_int(static_cast<int64_t>(ipow(p, s - 1)));
  const int nvars = nn * ra;
  std::vector<std::vector<uint32_t>> columns;
  for (int v = 0; v < nvars; ++v) {
    Matrix a = a0;
    const int pos = v / ra, l = v % ra;
    a[pos] = R.add_raw(a[pos], R.mul_raw(ps, R.lift_raw(static_cast<uint32_t>(ipow(p, l)))));
    auto dv = upper.defect(a);
    KVec col(dv.size());
    for (size_t i = 0; i < dv.size(); ++i) col[i] = R.lie_coordinate_raw(R.sub_raw(dv[i], d0[i]));
    columns.push_back(flatten_fp(k, col));
  }
  KVec rhs_k(d0.size());
  for (size_t i = 0; i < d0.size(); ++i) rhs_k[i] = R.lie_coordinate_raw(R.neg_raw(d0[i]));
  const auto rhs = flatten_fp(k, rhs_k);
  const FieldContext& fp = upper.prime_field();
  auto z = solve(fp, mat_transpose(columns), rhs, nvars);
  if (!z) throw DomainError("lift_element: no member lift exists");
  const KVec zk = unflatten_fp(k, *z);
  Matrix a = a0;
  for (int i = 0; i < nn; ++i)
    if (zk[i]) a[i] = R.add_raw(a[i], R.mul_raw(ps, R.lift_raw(zk[i])));
  a = upper.canonical(a);
  if (!upper.is_member(a)) throw DomainError("lift_element: corrected lift is not a member");
  return a;
}

// ------------------------------------------------------------------- orders

uint64_t order_polynomial(const GroupSpec& spec) {
  using u128 = unsigned __int128;
  const u128 q = ipow(spec.p, spec.r);
  const int n = spec.n;
  auto pw = [&](int e) {
    u128 r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
  };
  u128 out = 0;
  switch (spec.family) {
    case Family::SL:
    case Family::PGL:
    case Family::GL: {
      out = pw(n * (n - 1) / 2);
      for (int i = 2; i <= n; ++i) out *= pw(i) - 1;
      if (spec.family == Family::GL) out *= q - 1;
      break;
    }
    case Family::Sp:
    case Family::PGSp:
    case Family::GSp: {
      const int m = n / 2;
      out = pw(m * m);
      for (int i = 1; i <= m; ++i) out *= pw(2 * i) - 1;
      if (spec.family == Family::GSp) out *= q - 1;
      break;
    }
    case Family::SU:
    case Family::PGU:
    case Family::GU: {
      out = pw(n * (n - 1) / 2);
      for (int i = 1; i <= n; ++i) out *= (i % 2) ? pw(i) + 1 : pw(i) - 1;
      if (spec.family == Family::GU)
        out *= q - 1;
      else
        out /= q + 1;
      break;
    }
    case Family::G2: out = pw(6) * (pw(6) - 1) * (pw(2) - 1); break;
  }
  if (out > static_cast<u128>(UINT64_MAX)) throw DomainError("group order overflows");
  return static_cast<uint64_t>(out);
}

uint64_t p_part(uint64_t n, int p) {
  uint64_t out = 1;
  while (n && n % p == 0) {
    n /= p;
    out *= p;
  }
  return out;
}

uint64_t unipotent_order(const GroupSpec& spec) {
  const uint64_t q = ipow(spec.p, spec.r);
  const int n = spec.n;
  switch (spec.family) {
    case Family::Sp:
    case Family::GSp:
    case Family::PGSp: return ipow(q, (n / 2) * (n / 2));
    case Family::G2: return ipow(q, 6);
    default: return ipow(q, n * (n - 1) / 2);
  }
}

// --------------------------------------------------------------- unipotents

namespace {

std::vector<UnipotentElement> root_products(const GroupContext& ctx, const std::vector<int>& roots) {
  const uint32_t q = ctx.field().q();
  const uint64_t total = ipow(q, static_cast<int>(roots.size()));
  std::vector<UnipotentElement> out;
  out.reserve(total);
  for (uint64_t code = 0; code < total; ++code) {
    UnipotentElement u;
    uint64_t c = code;
    u.m = ctx.identity();
    for (int a : roots) {
      const uint32_t t = static_cast<uint32_t>(c % q);
      c /= q;
      u.coords.push_back(t);
      u.root_ids.push_back(a);
      if (t) u.m = ctx.mul(u.m, ctx.root_element(a, t));
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<UnipotentElement> unitriangular_members(const GroupContext& ctx,
                                                    const std::vector<std::pair<int, int>>& positions) {
  const uint32_t Q = ctx.field().q();
  const int n = ctx.dim();
  const uint64_t total = ipow(Q, static_cast<int>(positions.size()));
  std::vector<UnipotentElement> out;
  for (uint64_t code = 0; code < total; ++code) {
    UnipotentElement u;
    u.m = ctx.identity();
    uint64_t c = code;
    for (auto [i, j] : positions) {
      const uint32_t t = static_cast<uint32_t>(c % Q);
      c /= Q;
      u.coords.push_back(t);
      u.m[i * n + j] = t;
    }
    if (ctx.is_member(u.m)) out.push_back(std::move(u));
  }
  return out;
}

void check_closed(const GroupContext& ctx, const std::vector<UnipotentElement>& els) {
  std::unordered_set<Matrix, MatrixHash> set;
  for (const auto& u : els) set.insert(u.m);
  for (const auto& a : els)
    for (const auto& b : els)
      if (!set.count(ctx.mul(a.m, b.m))) throw DomainError("unipotent subset is not closed under multiplication");
}

}  // namespace

std::vector<UnipotentElement> unipotent_sylow(const GroupContext& ctx) {
  if (ctx.level() != 1) throw DomainError("unipotent_sylow needs a level-1 context");
  std::vector<UnipotentElement> out;
  if (ctx.unitary()) {
    const int n = ctx.dim();
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pos.push_back({i, j});
    out = unitriangular_members(ctx, pos);
  } else {
    std::vector<int> pos(ctx.roots().num_positive);
    std::iota(pos.begin(), pos.end(), 0);
    out = root_products(ctx, pos);
  }
  if (out.size() != unipotent_order(ctx.spec())) throw DomainError("unipotent Sylow has the wrong order");
  return out;
}

std::vector<UnipotentElement> unipotent_subgroup(const GroupContext& ctx, const std::vector<int>& positive_roots) {
  if (ctx.level() != 1) throw DomainError("unipotent_subgroup needs a level-1 context");
  const RootDatum& d = ctx.roots();
  std::vector<int> sorted = positive_roots;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> full;
  for (int a : sorted) {
    if (a < 0 || a >= d.num_positive) throw DomainError("subgroup roots must be positive");
    full.push_back(a);
    full.push_back(d.neg(a));
  }
  for (int a : full)
    for (int b : full) {
      const int s = d.sum(a, b);
      if (s >= 0 && std::find(full.begin(), full.end(), s) == full.end())
        throw DomainError("root subset is not closed under addition");
    }
  auto out = root_products(ctx, sorted);
  check_closed(ctx, out);
  return out;
}

std::vector<UnipotentElement> unipotent_subgroup_by_support(const GroupContext& ctx,
                                                            const std::vector<std::pair<int, int>>& positions) {
  if (ctx.level() != 1) throw DomainError("unipotent_subgroup_by_support needs a level-1 context");
  for (auto [i, j] : positions)
    if (!(0 <= i && i < j && j < ctx.dim())) throw DomainError("support positions must be strictly upper");
  auto out = unitriangular_members(ctx, positions);
  check_closed(ctx, out);
  return out;
}

Matrix unipotent_section(const GroupContext& lower, const UnipotentElement& u, const GroupContext& upper) {
  if (lower.level() != 1) throw DomainError("unipotent_section lifts level-1 elements");
  if (lower.unitary()) {
    Matrix m = u.m;
    const GroupContext* cur = &lower;
    std::unique_ptr<GroupContext> mid;
    for (int s = 2; s <= upper.level(); ++s) {
      if (s == upper.level()) return lift_element(*cur, m, upper);
      auto next = std::make_unique<GroupContext>(lower.spec().at_level(s));
      m = lift_element(*cur, m, *next);
      mid = std::move(next);
      cur = mid.get();
    }
    return m;
  }
  if (u.root_ids.size() != u.coords.size()) throw DomainError("unipotent_section: missing root coordinates");
  const WittRingContext& R = upper.ring();
  Matrix m = upper.identity();
  for (size_t i = 0; i < u.coords.size(); ++i)
    if (u.coords[i]) m = upper.mul(m, upper.root_element(u.root_ids[i], R.teich_raw(u.coords[i])));
  return m;
}

// --------------------------------------------------------------- invariants

long commutator_identity_violations(const GroupContext& ctx, int samples, uint64_t seed) {
  const ChevalleyData* c = ctx.chevalley();
  if (!c) throw DomainError("commutator identity needs root data");
  const RootDatum& d = c->datum;
  const WittRingContext& R = ctx.ring();
  std::mt19937_64 rng(seed);
  long bad = 0;
  for (int a = 0; a < d.size(); ++a)
    for (int b = 0; b < d.size(); ++b) {
      if (b == a || b == d.neg(a)) continue;
      const auto& terms = commutator_constants(*c, a, b);
      for (int rep = 0; rep < samples; ++rep) {
        const uint32_t s = static_cast<uint32_t>(rng() % R.size()), t = static_cast<uint32_t>(rng() % R.size());
        const Matrix lhs = ctx.mul(ctx.mul(ctx.root_element(a, s), ctx.root_element(b, t)),
                                   ctx.mul(ctx.root_element(a, R.neg_raw(s)), ctx.root_element(b, R.neg_raw(t))));
        Matrix rhs = ctx.identity();
        for (const auto& term : terms) {
          uint32_t arg = R.core().from_int(term.m);
          for (int e = 0; e < term.i; ++e) arg = R.mul_raw(arg, s);
          for (int e = 0; e < term.j; ++e) arg = R.mul_raw(arg, t);
          rhs = ctx.mul(rhs, ctx.root_element(term.root, arg));
        }
        bad += lhs != rhs;
      }
    }
  return bad;
}

uint64_t kernel_additivity_exhaustive(const GroupContext& ctx, uint64_t limit) {
  if (ctx.level() != 2) throw DomainError("kernel additivity is checked at level 2");
  const int dim = ctx.lie_dim_fp(), p = ctx.spec().p;
  const uint64_t size = ipow(p, dim);
  if (size > limit) throw DomainError("kernel exceeds the exhaustive limit");
  const FieldContext& k = ctx.field();
  std::vector<Matrix> basis_lifts;
  std::vector<KVec> basis_vecs;
  for (const auto& b : ctx.lie_basis_fp()) {
    basis_vecs.push_back(b);
    basis_lifts.push_back(ctx.lie_lift(b));
  }
  std::unordered_set<KVec, MatrixHash> seen;
  bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
  for (long code = 0; code < static_cast<long>(size); ++code) {
    KVec c(dim);
    uint64_t x = code;
    for (int i = 0; i < dim; ++i) {
      c[i] = static_cast<uint32_t>(x % p);
      x /= p;
    }
    const KVec v = ctx.lie_from_fp(c);
    const Matrix g = ctx.lie_lift(v);
    bool good = ctx.is_member(g) && ctx.in_reduction_kernel(g) && ctx.kernel_vector(g) == ctx.normalize_lie(v);
    for (size_t i = 0; i < basis_lifts.size() && good; ++i) {
      const KVec sum = vec_add(k, ctx.kernel_vector(g), ctx.kernel_vector(basis_lifts[i]));
      good = ctx.kernel_vector(ctx.mul(g, basis_lifts[i])) == sum;
    }
    ok = ok && good;
  }
  if (!ok) return 0;
  for (long code = 0; code < static_cast<long>(size); ++code) {
    KVec c(dim);
    uint64_t x = code;
    for (int i = 0; i < dim; ++i) {
      c[i] = static_cast<uint32_t>(x % p);
      x /= p;
    }
    if (!seen.insert(ctx.kernel_vector(ctx.lie_lift(ctx.lie_from_fp(c)))).second) return 0;
  }
  return size;
}

// ---------------------------------------------------------------------- BFS

BfsResult bfs_enumerate(const GroupContext& ctx, uint64_t guard) {
  if (ctx.level() == 1 && order_polynomial(ctx.spec()) > guard) throw DomainError("BFS order guard exceeded");
  const auto& gens = ctx.generators();
  BfsResult res;
  std::unordered_set<Matrix, MatrixHash> seen;
  res.elements.push_back(ctx.identity());
  seen.insert(res.elements[0]);
  std::vector<size_t> frontier = {0};
  while (!frontier.empty()) {
    const long total = static_cast<long>(frontier.size() * gens.size());
    std::vector<Matrix> cand(total);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) cand[i] = ctx.mul(res.elements[frontier[i / gens.size()]], gens[i % gens.size()]);
    std::vector<size_t> next;
    for (auto& c : cand)
      if (seen.insert(c).second) {
        res.elements.push_back(std::move(c));
        next.push_back(res.elements.size() - 1);
        if (res.elements.size() > guard) throw DomainError("BFS order guard exceeded");
      }
    frontier = std::move(next);
  }
  res.order = res.elements.size();
  return res;
}

BfsResult bfs_enumerate_serial(const GroupContext& ctx, uint64_t guard) {
  if (ctx.level() == 1 && order_polynomial(ctx.spec()) > guard) throw DomainError("BFS order guard exceeded");
  BfsResult res;
  std::unordered_set<Matrix, MatrixHash> seen;
  res.elements.push_back(ctx.identity());
  seen.insert(res.elements[0]);
  for (size_t head = 0; head < res.elements.size(); ++head)
    for (const auto& g : ctx.generators()) {
      Matrix y = ctx.mul(res.elements[head], g);
      if (seen.insert(y).second) {
        res.elements.push_back(std::move(y));
        if (res.elements.size() > guard) throw DomainError("BFS order guard exceeded");
      }
    }
  res.order = res.elements.size();
  return res;
}

}  // namespace wittsplit
