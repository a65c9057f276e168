#include "wittsplit/root_data.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <json.hpp>
#include <numeric>
#include <set>

#include "wittsplit/ring_arith.hpp"

namespace wittsplit {

namespace {

using Rat = boost::rational<long long>;

int dot(const std::vector<int>& a, const std::vector<int>& b) {
  int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<std::vector<int>> simple_roots_for(std::string_view label, int& rank, int& ambient) {
  std::vector<std::vector<int>> out;
  if (label == "A1" || label == "A2" || label == "A3") {
    rank = label[1] - '0';
    ambient = rank + 1;
    for (int i = 0; i < rank; ++i) {
      std::vector<int> v(ambient, 0);
      v[i] = 1;
      v[i + 1] = -1;
      out.push_back(v);
    }
  } else if (label == "C2" || label == "C3") {
    rank = label[1] - '0';
    ambient = rank;
    for (int i = 0; i + 1 < rank; ++i) {
      std::vector<int> v(ambient, 0);
      v[i] = 1;
      v[i + 1] = -1;
      out.push_back(v);
    }
    std::vector<int> v(ambient, 0);
    v[rank - 1] = 2;
    out.push_back(v);
  } else if (label == "G2") {
    rank = 2;
    ambient = 3;
    out.push_back({1, -1, 0});
    out.push_back({-2, 1, 1});
  } else {
    throw DomainError("unsupported root system label");
  }
  return out;
}

}  // namespace

int RootDatum::index_of(const std::vector<int>& v) const {
  for (int a = 0; a < size(); ++a)
    if (roots[a] == v) return a;
  return -1;
}

int RootDatum::sum(int a, int b) const {
  std::vector<int> v(ambient_dim);
  for (int i = 0; i < ambient_dim; ++i) v[i] = roots[a][i] + roots[b][i];
  return index_of(v);
}

int RootDatum::inner(int a, int b) const { return dot(roots[a], roots[b]); }

int RootDatum::cartan(int beta, int alpha) const { return 2 * inner(beta, alpha) / sq_length[alpha]; }

bool RootDatum::has_two_lengths() const {
  return *std::max_element(sq_length.begin(), sq_length.end()) != *std::min_element(sq_length.begin(), sq_length.end());
}

bool RootDatum::is_short(int a) const {
  return sq_length[a] == *std::min_element(sq_length.begin(), sq_length.end());
}

int RootDatum::height(int a) const { return std::accumulate(coeffs[a].begin(), coeffs[a].end(), 0); }

std::vector<int> RootDatum::coroot_coeffs(int a) const {
  std::vector<int> out(rank);
  for (int i = 0; i < rank; ++i) {
    const int num = coeffs[a][i] * sq_length[simple[i]];
    if (num % sq_length[a] != 0) throw DomainError("non-integral coroot coefficient");
    out[i] = num / sq_length[a];
  }
  return out;
}

RootDatum build_root_system(std::string_view label) {
  RootDatum d;
  d.label = std::string(label);
  const auto simple = simple_roots_for(label, d.rank, d.ambient_dim);

  // Orbit of the simple roots under simple reflections, tracking coefficients.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> found;
  std::set<std::vector<int>> seen;
  for (int i = 0; i < d.rank; ++i) {
    std::vector<int> c(d.rank, 0);
    c[i] = 1;
    found.push_back({simple[i], c});
    seen.insert(simple[i]);
  }
  for (size_t head = 0; head < found.size(); ++head) {
    for (int i = 0; i < d.rank; ++i) {
      auto [v, c] = found[head];
      const int pair = 2 * dot(v, simple[i]) / dot(simple[i], simple[i]);
      for (int j = 0; j < d.ambient_dim; ++j) v[j] -= pair * simple[i][j];
      c[i] -= pair;
      if (seen.insert(v).second) found.push_back({v, c});
    }
  }
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pos;
  for (auto& [v, c] : found) {
    const bool nonneg = std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; });
    const bool nonpos = std::all_of(c.begin(), c.end(), [](int x) { return x <= 0; });
    if (!nonneg && !nonpos) throw DomainError("root with mixed-sign coefficients");
    if (nonneg) pos.push_back({v, c});
  }
  std::sort(pos.begin(), pos.end(), [](const auto& x, const auto& y) {
    const int hx = std::accumulate(x.second.begin(), x.second.end(), 0);
    const int hy = std::accumulate(y.second.begin(), y.second.end(), 0);
    if (hx != hy) return hx < hy;
    return x.second < y.second;
  });
  d.num_positive = static_cast<int>(pos.size());
  for (auto& [v, c] : pos) {
    d.roots.push_back(v);
    d.coeffs.push_back(c);
  }
  for (auto& [v, c] : pos) {
    std::vector<int> nv(v), nc(c);
    for (auto& x : nv) x = -x;
    for (auto& x : nc) x = -x;
    d.roots.push_back(nv);
    d.coeffs.push_back(nc);
  }
  if (d.roots.size() != found.size()) throw DomainError("root system is not symmetric");
  for (int a = 0; a < d.size(); ++a) d.sq_length.push_back(dot(d.roots[a], d.roots[a]));
  for (int i = 0; i < d.rank; ++i) d.simple.push_back(d.index_of(simple[i]));
  return d;
}

std::pair<int, int> root_string(const RootDatum& d, int alpha, int beta) {
  if (beta == alpha || beta == d.neg(alpha)) throw DomainError("root_string needs beta != +-alpha");
  auto shifted = [&](int k) {
    std::vector<int> v(d.ambient_dim);
    for (int i = 0; i < d.ambient_dim; ++i) v[i] = d.roots[beta][i] + k * d.roots[alpha][i];
    return d.index_of(v);
  };
  int s = 0, t = 0;
  while (shifted(-(s + 1)) >= 0) ++s;
  while (shifted(t + 1) >= 0) ++t;
  return {s, t};
}

bool is_exceptional_pair(const RootDatum& d, int p, int alpha, int beta) {
  if (d.sum(alpha, beta) < 0) return false;
  if (!d.has_two_lengths() || !d.is_short(alpha) || !d.is_short(beta)) return false;
  const int ip = d.inner(alpha, beta);
  if (d.label == "G2") return (p == 3 && ip > 0) || (p == 2 && ip < 0);
  if (d.label[0] == 'B' || d.label[0] == 'C' || d.label == "F4") return p == 2 && ip == 0;
  return false;
}

IntMatrix int_identity(int n) {
  IntMatrix m(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b) {
  const size_t n = a.size();
  IntMatrix out(n, IntVec(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < n; ++l) {
      const long long x = a[i][l];
      if (!x) continue;
      for (size_t j = 0; j < n; ++j) out[i][j] += x * b[l][j];
    }
  return out;
}

IntMatrix ChevalleyData::ad(int x) const {
  IntMatrix m(dim, IntVec(dim, 0));
  for (int y = 0; y < dim; ++y)
    for (int z = 0; z < dim; ++z) m[z][y] = bracket_coeff(x, y, z);
  return m;
}

IntMatrix ChevalleyData::root_element(int a, long long t) const {
  IntMatrix out(dim, IntVec(dim, 0));
  long long tk = 1;
  for (const auto& dk : divided_powers[a]) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out[i][j] += tk * dk[i][j];
    tk *= t;
  }
  return out;
}

namespace {

// Sign-consistent structure constants from the extraspecial pairs.
std::vector<std::vector<int>> propagate_structure_constants(const RootDatum& d) {
  const int n = d.size();
  std::vector<std::vector<Rat>> val(n, std::vector<Rat>(n, Rat(0)));
  std::vector<std::vector<char>> known(n, std::vector<char>(n, 0));
  bool changed = false;
  auto set = [&](int a, int b, Rat v) {
    if (known[a][b]) {
      if (val[a][b] != v) throw DomainError("inconsistent structure constant propagation");
      return;
    }
    known[a][b] = 1;
    val[a][b] = v;
    changed = true;
  };

  for (int xi = 0; xi < d.num_positive; ++xi) {
    int best = -1;
    for (int a = 0; a < d.num_positive && best < 0; ++a) {
      const auto bv = [&] {
        std::vector<int> v(d.ambient_dim);
        for (int i = 0; i < d.ambient_dim; ++i) v[i] = d.roots[xi][i] - d.roots[a][i];
        return d.index_of(v);
      }();
      if (bv >= 0 && bv < d.num_positive && a < bv) best = a;
    }
    if (best < 0) continue;
    std::vector<int> v(d.ambient_dim);
    for (int i = 0; i < d.ambient_dim; ++i) v[i] = d.roots[xi][i] - d.roots[best][i];
    const int b = d.index_of(v);
    set(best, b, Rat(root_string(d, best, b).first + 1));
  }

  auto sq = [&](int a, int b) {
    long long s = 0;
    for (int i = 0; i < d.ambient_dim; ++i) {
      const long long x = d.roots[a][i] + d.roots[b][i];
      s += x * x;
    }
    return s;
  };

  do {
    changed = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!known[a][b]) continue;
        const Rat v = val[a][b];
        set(b, a, -v);
        set(d.neg(a), d.neg(b), -v);
        const int c = d.neg(d.sum(a, b));
        set(b, c, v * Rat(d.sq_length[a], d.sq_length[c]));
        set(c, a, v * Rat(d.sq_length[b], d.sq_length[c]));
      }
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        if (s == r || s == d.neg(r) || d.sum(r, s) < 0 || known[r][s]) continue;
        for (int t = 0; t < n; ++t) {
          if (t == d.neg(r) || t == d.neg(s)) continue;
          std::vector<int> uv(d.ambient_dim);
          for (int i = 0; i < d.ambient_dim; ++i) uv[i] = -(d.roots[r][i] + d.roots[s][i] + d.roots[t][i]);
          const int u = d.index_of(uv);
          if (u < 0 || u == d.neg(r) || u == d.neg(s) || u == d.neg(t)) continue;
          if (!known[t][u] || val[t][u].numerator() == 0) continue;
          Rat rest(0);
          bool ok = true;
          if (d.sum(s, t) >= 0) {
            if (!known[s][t] || !known[r][u]) ok = false;
            else rest += val[s][t] * val[r][u] / Rat(sq(s, t));
          }
          if (d.sum(t, r) >= 0) {
            if (!known[t][r] || !known[s][u]) ok = false;
            else rest += val[t][r] * val[s][u] / Rat(sq(t, r));
          }
          if (!ok) continue;
          set(r, s, -rest * Rat(sq(r, s)) / val[t][u]);
          break;
        }
      }
  } while (changed);

  std::vector<std::vector<int>> N(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (d.sum(a, b) < 0) continue;
      if (!known[a][b]) throw DomainError("structure constant left undetermined");
      if (val[a][b].denominator() != 1) throw DomainError("non-integral structure constant");
      N[a][b] = static_cast<int>(val[a][b].numerator());
    }
  return N;
}

void verify_jacobi(const ChevalleyData& c) {
  const int dim = c.dim;
  auto br = [&](int x, const std::vector<long long>& v) {
    std::vector<long long> out(dim, 0);
    for (int y = 0; y < dim; ++y) {
      if (!v[y]) continue;
      for (int z = 0; z < dim; ++z) out[z] += v[y] * c.bracket_coeff(x, y, z);
    }
    return out;
  };
  for (int x = 0; x < dim; ++x)
    for (int y = 0; y < dim; ++y)
      for (int z = 0; z < dim; ++z) {
        std::vector<long long> ey(dim, 0), ez(dim, 0), ex(dim, 0);
        ex[x] = ey[y] = ez[z] = 1;
        auto t1 = br(x, br(y, ez));
        auto t2 = br(y, br(z, ex));
        auto t3 = br(z, br(x, ey));
        for (int i = 0; i < dim; ++i)
          if (t1[i] + t2[i] + t3[i] != 0) throw DomainError("Jacobi identity fails");
      }
}

// Commutator constants, peeled off the group commutator in the
// characteristic-0 adjoint representation.
std::vector<CommutatorTerm> oracle_commutator(const ChevalleyData& c, int alpha, int beta, const IntVec& h_generic) {
  const RootDatum& d = c.datum;
  std::vector<CommutatorTerm> cand;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      std::vector<int> v(d.ambient_dim);
      for (int k = 0; k < d.ambient_dim; ++k) v[k] = i * d.roots[alpha][k] + j * d.roots[beta][k];
      const int g = d.index_of(v);
      if (g >= 0) cand.push_back({i, j, g, 0});
    }
  std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
    return std::make_pair(x.i + x.j, x.i) < std::make_pair(y.i + y.j, y.i);
  });
  auto gamma_h = [&](int g) {
    long long s = 0;
    for (int i = 0; i < d.rank; ++i) s += h_generic[i] * d.cartan(g, d.simple[i]);
    return s;
  };
  const std::vector<std::pair<long long, long long>> samples = {{1, 1}, {2, 1}, {1, 2}, {2, 3}, {3, 2}, {-1, 2}, {3, -1}};
  std::vector<bool> fixed(cand.size(), false);
  for (auto [s, t] : samples) {
    IntMatrix P = int_mul(int_mul(c.root_element(alpha, s), c.root_element(beta, t)),
                          int_mul(c.root_element(alpha, -s), c.root_element(beta, -t)));
    for (size_t k = 0; k < cand.size(); ++k) {
      const int g = cand[k].root;
      long long ph = 0;
      for (int i = 0; i < d.rank; ++i) ph += P[c.basis_of_root(g)][i] * h_generic[i];
      const long long gh = gamma_h(g);
      if (ph % gh != 0) throw DomainError("commutator oracle: non-integral coefficient");
      const long long coef = -ph / gh;
      long long mono = 1;
      for (int e = 0; e < cand[k].i; ++e) mono *= s;
      for (int e = 0; e < cand[k].j; ++e) mono *= t;
      if (coef % mono != 0) throw DomainError("commutator oracle: coefficient is not a monomial multiple");
      const long long m = coef / mono;
      if (fixed[k] && cand[k].m != m) throw DomainError("commutator oracle: inconsistent constants");
      cand[k].m = m;
      fixed[k] = true;
      P = int_mul(c.root_element(g, -coef), P);
    }
    if (P != int_identity(c.dim)) throw DomainError("commutator oracle: residual is not the identity");
  }
  std::vector<CommutatorTerm> out;
  for (auto& t : cand)
    if (t.m != 0) out.push_back(t);
  return out;
}

}  // namespace

ChevalleyData build_chevalley_data(const RootDatum& d) {
  ChevalleyData c;
  c.datum = d;
  c.N = propagate_structure_constants(d);
  const int rank = d.rank, n = d.size();
  c.dim = rank + n;
  const int dim = c.dim;
  c.bracket.assign(dim * dim * dim, 0);
  auto put = [&](int x, int y, int z, int v) {
    c.bracket[(x * dim + y) * dim + z] += v;
  };
  for (int a = 0; a < n; ++a) {
    const int ea = rank + a;
    for (int i = 0; i < rank; ++i) {
      const int v = d.cartan(a, d.simple[i]);
      put(i, ea, ea, v);
      put(ea, i, ea, -v);
    }
    const auto cc = d.coroot_coeffs(a);
    for (int i = 0; i < rank; ++i) put(ea, rank + d.neg(a), i, cc[i]);
    for (int b = 0; b < n; ++b) {
      const int s = d.sum(a, b);
      if (s >= 0) put(ea, rank + b, rank + s, c.N[a][b]);
    }
  }
  verify_jacobi(c);

  c.nilpotency.resize(n);
  c.divided_powers.resize(n);
  for (int a = 0; a < n; ++a) {
    const IntMatrix ad = c.ad(rank + a);
    IntMatrix power = int_identity(dim);
    long long fact = 1;
    for (int k = 0;; ++k) {
      if (k > 0) fact *= k;
      bool zero = true;
      IntMatrix dk(dim, IntVec(dim, 0));
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          if (power[i][j] % fact != 0) throw DomainError("divided power is not integral");
          dk[i][j] = power[i][j] / fact;
          zero &= dk[i][j] == 0;
        }
      if (zero) {
        c.nilpotency[a] = k;
        break;
      }
      c.divided_powers[a].push_back(dk);
      power = int_mul(power, ad);
      if (k > 8) throw DomainError("root vector is not nilpotent");
    }
  }

  IntVec h(rank, 0);
  bool found = false;
  for (long long base = 3; base < 50 && !found; ++base) {
    long long w = 1;
    for (int i = 0; i < rank; ++i, w *= base) h[i] = w;
    found = true;
    for (int a = 0; a < n && found; ++a) {
      long long s = 0;
      for (int i = 0; i < rank; ++i) s += h[i] * d.cartan(a, d.simple[i]);
      found = s != 0;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (b == a || b == d.neg(a)) continue;
      c.commutators[{a, b}] = oracle_commutator(c, a, b, h);
    }
  return c;
}

int structure_constant(const ChevalleyData& c, int alpha, int beta) {
  if (c.datum.sum(alpha, beta) < 0) return 0;
  return c.N[alpha][beta];
}

const std::vector<CommutatorTerm>& commutator_constants(const ChevalleyData& c, int alpha, int beta) {
  auto it = c.commutators.find({alpha, beta});
  if (it == c.commutators.end()) throw DomainError("commutator constants need beta != +-alpha");
  return it->second;
}

std::string dump_root_data_json(const ChevalleyData& c) {
  const RootDatum& d = c.datum;
  nlohmann::ordered_json j;
  j["type"] = d.label;
  j["rank"] = d.rank;
  j["roots"] = d.roots;
  j["simple_coefficients"] = d.coeffs;
  j["num_positive"] = d.num_positive;
  j["simple"] = d.simple;
  j["squared_lengths"] = d.sq_length;
  std::vector<std::vector<int>> cartan(d.rank, std::vector<int>(d.rank));
  for (int i = 0; i < d.rank; ++i)
    for (int k = 0; k < d.rank; ++k) cartan[i][k] = d.cartan(d.simple[i], d.simple[k]);
  j["cartan"] = cartan;
  auto sc = nlohmann::ordered_json::array();
  for (int a = 0; a < d.size(); ++a)
    for (int b = 0; b < d.size(); ++b)
      if (d.sum(a, b) >= 0) sc.push_back({a, b, c.N[a][b]});
  j["structure_constants"] = sc;
  auto cm = nlohmann::ordered_json::array();
  for (const auto& [key, terms] : c.commutators) {
    auto tj = nlohmann::ordered_json::array();
    for (const auto& t : terms) tj.push_back({t.i, t.j, t.m});
    cm.push_back({{"alpha", key.first}, {"beta", key.second}, {"terms", tj}});
  }
  j["commutator_constants"] = cm;
  j["nilpotency"] = c.nilpotency;
  return j.dump(1);
}

}  // namespace wittsplit
