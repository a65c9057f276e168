#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <unordered_set>

#include "wittsplit/group_model.hpp"

using namespace wittsplit;

namespace {

GroupSpec spec(Family f, int n, int p, int r = 1, int s = 1) { return GroupSpec{f, n, p, r, s, {}}; }

Matrix random_word(const GroupContext& g, std::mt19937_64& rng, int len = 12) {
  Matrix m = g.identity();
  for (int i = 0; i < len; ++i) m = g.mul(m, g.generators()[rng() % g.generators().size()]);
  return m;
}

KVec random_lie(const GroupContext& g, std::mt19937_64& rng) {
  KVec c(g.lie_dim_fp());
  for (auto& x : c) x = static_cast<uint32_t>(rng() % g.spec().p);
  return g.lie_from_fp(c);
}

KVec field_vec(const GroupContext& g, std::initializer_list<uint32_t> v) {
  KVec out(v);
  REQUIRE(static_cast<int>(out.size()) == g.dim() * g.dim());
  return out;
}

}  // namespace

TEST_CASE("BFS orders match the classical order formulas") {
  const std::vector<std::pair<GroupSpec, uint64_t>> cases = {
      {spec(Family::SL, 2, 2), 6},          {spec(Family::PGL, 3, 2), 168},     {spec(Family::G2, 14, 2), 12096},
      {spec(Family::Sp, 4, 2), 720},        {spec(Family::SU, 4, 2), 25920},    {spec(Family::PGL, 2, 2, 2), 60},
      {spec(Family::PGU, 3, 2), 216},       {spec(Family::PGU, 4, 2), 25920},   {spec(Family::PGSp, 4, 3), 51840},
      {spec(Family::SL, 2, 3, 2), 720},     {spec(Family::PGL, 2, 2, 3), 504},  {spec(Family::GSp, 4, 2), 720},
      {spec(Family::SL, 3, 3), 5616},       {spec(Family::PGU, 3, 3), 6048},    {spec(Family::GL, 2, 2, 2), 180},
  };
  for (const auto& [s, order] : cases) {
    CAPTURE(s.label());
    GroupContext g(s);
    for (const auto& x : g.generators()) CHECK(g.is_member(x));
    auto res = bfs_enumerate(g);
    CHECK(res.order == order);
    CHECK(order_polynomial(s) == order);
    auto U = unipotent_sylow(g);
    CHECK(U.size() == p_part(res.order, s.p));
  }
}

TEST_CASE("parallel and serial BFS agree") {
  for (const auto& s : {spec(Family::PGL, 3, 2), spec(Family::SU, 3, 2), spec(Family::Sp, 4, 2)}) {
    GroupContext g(s);
    auto a = bfs_enumerate(g), b = bfs_enumerate_serial(g);
    CHECK(a.order == b.order);
    std::set<Matrix> sa(a.elements.begin(), a.elements.end()), sb(b.elements.begin(), b.elements.end());
    CHECK(sa == sb);
  }
}

TEST_CASE("BFS guard") {
  GroupContext g(spec(Family::Sp, 6, 2));
  CHECK(order_polynomial(g.spec()) == 1451520);
  CHECK_THROWS_AS(bfs_enumerate(g), DomainError);
  GroupContext small(spec(Family::PGL, 3, 2));
  CHECK_THROWS_AS(bfs_enumerate_serial(small, 100), DomainError);
}

TEST_CASE("projective orders times units give the linear orders") {
  for (auto [n, p, r] : std::vector<std::array<int, 3>>{{2, 2, 2}, {3, 2, 1}, {2, 3, 1}}) {
    GroupContext pg(spec(Family::PGL, n, p, r)), gl(spec(Family::GL, n, p, r));
    const uint64_t q = pg.q();
    CHECK(bfs_enumerate(pg).order * (q - 1) == bfs_enumerate(gl).order);
  }
}

TEST_CASE("unsupported specs are rejected") {
  CHECK_THROWS_AS(GroupContext(spec(Family::SL, 5, 2)), DomainError);
  CHECK_THROWS_AS(GroupContext(spec(Family::Sp, 3, 2)), DomainError);
  CHECK_THROWS_AS(GroupContext(spec(Family::SL, 2, 2, 1, 4)), DomainError);
  CHECK_THROWS_AS(GroupContext(spec(Family::SU, 3, 2)).root_element(0, 1), DomainError);
}

TEST_CASE("root elements") {
  GroupContext sl3(spec(Family::SL, 3, 2, 2));
  const auto& d = sl3.roots();
  const int a1 = d.simple[0];
  for (uint32_t t = 0; t < sl3.ring().size(); ++t) {
    Matrix expect = sl3.identity();
    expect[0 * 3 + 1] = t;
    CHECK(sl3.root_element(a1, t) == expect);
  }

  GroupContext sp(spec(Family::Sp, 4, 3, 1, 2));
  const WittRingContext& R = sp.ring();
  std::mt19937_64 rng(5);
  for (int a = 0; a < sp.roots().size(); ++a) {
    CHECK(sp.root_element(a, 0) == sp.identity());
    for (int i = 0; i < 50; ++i) {
      const uint32_t s = rng() % R.size(), t = rng() % R.size();
      CHECK(sp.mul(sp.root_element(a, s), sp.root_element(a, t)) == sp.root_element(a, R.add_raw(s, t)));
      CHECK(sp.is_member(sp.root_element(a, s)));
    }
  }

  // Reduction commutes with root elements.
  GroupContext sp1(spec(Family::Sp, 4, 3));
  for (int a = 0; a < sp.roots().size(); ++a)
    for (uint32_t t = 0; t < R.size(); ++t)
      CHECK(reduce_element(sp, sp.root_element(a, t), sp1) == sp1.root_element(a, R.reduce_raw(t, 1)));

  // G2: divided powers give integral matrices; the elements preserve the bracket.
  for (int level : {1, 2}) {
    GroupContext g2(spec(Family::G2, 14, 2, 1, level));
    for (int a = 0; a < 12; ++a) CHECK(g2.is_member(g2.root_element(a, 1)));
  }
  GroupContext g2(spec(Family::G2, 14, 3, 1, 2));
  Matrix bad = g2.root_element(0, 1);
  bad[5] = g2.ring().add_raw(bad[5], 1);
  CHECK_FALSE(g2.is_member(bad));
}

TEST_CASE("commutator identity holds at levels 1 to 3") {
  const std::vector<GroupSpec> bases = {spec(Family::SL, 3, 2),   spec(Family::SL, 3, 3),   spec(Family::SL, 4, 2),
                                        spec(Family::Sp, 4, 2),   spec(Family::Sp, 4, 3),   spec(Family::PGL, 3, 2, 2),
                                        spec(Family::PGSp, 4, 2), spec(Family::G2, 14, 2),  spec(Family::G2, 14, 3),
                                        spec(Family::SL, 2, 5)};
  for (const auto& b : bases)
    for (int level = 1; level <= 3; ++level) {
      GroupContext g(b.at_level(level));
      CAPTURE(g.spec().label());
      CHECK(commutator_identity_violations(g, 25, 17 + level) == 0);
    }
}

TEST_CASE("group operations") {
  GroupContext pgsp(spec(Family::PGSp, 4, 2, 1, 2));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    Matrix g = random_word(pgsp, rng);
    CHECK(pgsp.is_member(g));
    CHECK(pgsp.mul(g, pgsp.inverse(g)) == pgsp.identity());
  }
  GroupContext pgl(spec(Family::PGL, 2, 2, 1, 2));
  CHECK(pgl.canonical({3, 0, 0, 3}) == pgl.identity());
  CHECK(pgl.encode(pgl.canonical({3, 0, 0, 3})) == pgl.encode(pgl.identity()));
}

TEST_CASE("canonical projective representatives") {
  GroupContext z9(spec(Family::PGL, 2, 3, 1, 2));
  const Matrix m = {3, 1, 1, 0};
  CHECK(z9.canonical(m) == m);
  CHECK_THROWS_AS(z9.canonical({3, 3, 6, 0}), DomainError);

  GroupContext gr(spec(Family::PGL, 3, 2, 2, 2));
  const WittRingContext& R = gr.ring();
  std::mt19937_64 rng(3);
  int tested = 0;
  while (tested < 100) {
    Matrix a(9);
    for (auto& x : a) x = rng() % R.size();
    std::optional<Matrix> inv;
    try {
      gr.inverse(a);
    } catch (const DomainError&) {
      continue;
    }
    ++tested;
    const Matrix c = gr.canonical(a);
    CHECK(gr.canonical(c) == c);
    for (uint32_t u = 0; u < R.size(); ++u) {
      if (!R.is_unit_raw(u)) continue;
      Matrix b(9);
      for (int i = 0; i < 9; ++i) b[i] = R.mul_raw(u, a[i]);
      CHECK(gr.canonical(b) == c);
    }
  }
}

TEST_CASE("reduction and lifting") {
  GroupContext sl4(spec(Family::SL, 2, 2, 1, 2)), sl1(spec(Family::SL, 2, 2));
  CHECK(reduce_element(sl4, {1, 2, 0, 1}, sl1) == sl1.identity());

  GroupContext u2(spec(Family::PGU, 3, 2, 1, 2)), u1(spec(Family::PGU, 3, 2));
  const auto& g1 = u1.generators();
  REQUIRE(u2.generators().size() >= g1.size());
  for (size_t i = 0; i < g1.size(); ++i) {
    CHECK(u2.is_member(u2.generators()[i]));
    CHECK(reduce_element(u2, u2.generators()[i], u1) == g1[i]);
  }
  // Every level-1 element of SU3(F2) lifts to a member.
  GroupContext su1(spec(Family::SU, 3, 2)), su2(spec(Family::SU, 3, 2, 1, 2));
  for (const auto& g : bfs_enumerate(su1).elements) {
    const Matrix l = lift_element(su1, g, su2);
    CHECK(su2.is_member(l));
    CHECK(reduce_element(su2, l, su1) == g);
  }
  // Level 2 to 3 in the symplectic similitude quotient.
  GroupContext ps2(spec(Family::PGSp, 4, 3, 1, 2)), ps3(spec(Family::PGSp, 4, 3, 1, 3));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Matrix g = random_word(ps2, rng);
    const Matrix l = lift_element(ps2, g, ps3);
    CHECK(ps3.is_member(l));
    CHECK(reduce_element(ps3, l, ps2) == g);
  }
}

TEST_CASE("kernel vectors") {
  GroupContext sl(spec(Family::SL, 2, 2, 1, 2));
  const KVec e = sl.kernel_vector({1, 2, 0, 1});
  CHECK(e == KVec{0, 1, 0, 0});
  CHECK(sl.lie_coords_fp(e).has_value());
  CHECK_THROWS_AS(sl.kernel_vector({1, 1, 0, 1}), DomainError);

  // The kernel of PGL2(Z/4) -> PGL2(F2) has 2^3 elements.
  GroupContext pgl(spec(Family::PGL, 2, 2, 1, 2));
  auto all = bfs_enumerate(pgl);
  CHECK(all.order == 48);
  std::vector<Matrix> ker;
  for (const auto& g : all.elements)
    if (pgl.in_reduction_kernel(g)) ker.push_back(g);
  CHECK(ker.size() == 8);
  for (const auto& g : ker)
    for (const auto& h : ker) {
      const Matrix c = pgl.mul(pgl.mul(g, h), pgl.mul(pgl.inverse(g), pgl.inverse(h)));
      CHECK(is_zero(pgl.kernel_vector(c)));
      CHECK(pgl.kernel_vector(pgl.mul(g, h)) == vec_add(pgl.field(), pgl.kernel_vector(g), pgl.kernel_vector(h)));
    }

  for (const auto& s : {spec(Family::SL, 2, 2), spec(Family::PGL, 3, 2), spec(Family::Sp, 4, 2), spec(Family::SU, 3, 2),
                        spec(Family::PGL, 2, 2, 2), spec(Family::SL, 3, 3), spec(Family::G2, 14, 2),
                        spec(Family::PGU, 3, 2)}) {
    GroupContext g(s.at_level(2));
    CAPTURE(g.spec().label());
    const uint64_t expect = 1ull << 0;
    (void)expect;
    const uint64_t size = kernel_additivity_exhaustive(g, 1ull << 14);
    uint64_t q_dim = 1;
    for (int i = 0; i < g.lie_dim_fp(); ++i) q_dim *= s.p;
    CHECK(size == q_dim);
  }
  // Sampled additivity above the exhaustive limit.
  GroupContext pgu(spec(Family::PGU, 4, 2, 1, 2));
  CHECK_THROWS_AS(kernel_additivity_exhaustive(pgu, 1ull << 14), DomainError);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const KVec x = random_lie(pgu, rng), y = random_lie(pgu, rng);
    CHECK(pgu.kernel_vector(pgu.mul(pgu.lie_lift(x), pgu.lie_lift(y))) == vec_add(pgu.field(), x, y));
  }
}

TEST_CASE("Lie space dimensions") {
  CHECK(GroupContext(spec(Family::SL, 2, 2)).lie_dim_fp() == 3);
  CHECK(GroupContext(spec(Family::PGL, 3, 2)).lie_dim_fp() == 8);
  CHECK(GroupContext(spec(Family::G2, 14, 3)).lie_dim_fp() == 14);
  CHECK(GroupContext(spec(Family::GSp, 4, 2)).lie_dim_fp() == 11);
  CHECK(GroupContext(spec(Family::Sp, 6, 2)).lie_dim_fp() == 21);
  CHECK(GroupContext(spec(Family::PGU, 3, 2, 2)).lie_dim_fp() == 16);
  GroupContext sl(spec(Family::SL, 3, 2, 2));
  CHECK(sl.lie_basis_k().size() == 8);
  CHECK(sl.lie_nil_upper().size() == 3);
  CHECK(sl.lie_nil_lower().size() == 3);
  GroupContext su(spec(Family::SU, 3, 2));
  CHECK(su.lie_nil_upper().size() == 3);
  CHECK(su.lie_nil_lower().size() == 3);
  CHECK_THROWS_AS(GroupContext(spec(Family::SU, 3, 2, 2)).lie_basis_k(), DomainError);
}

TEST_CASE("adjoint action") {
  GroupContext sl(spec(Family::SL, 2, 3));
  const KVec e = field_vec(sl, {0, 1, 0, 0});
  CHECK(sl.adjoint_action(sl.identity(), e) == e);
  for (uint32_t t : {1u, 2u}) {
    const uint32_t ti = sl.field().inv_raw(t);
    const KVec img = sl.adjoint_action({t, 0, 0, ti}, e);
    CHECK(img == field_vec(sl, {0, sl.field().mul_raw(t, t), 0, 0}));
  }
  // Conjugation of lifted kernel elements agrees with AD for every lift.
  GroupContext l1(spec(Family::PGSp, 4, 3)), l2(spec(Family::PGSp, 4, 3, 1, 2));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Matrix gbar = random_word(l1, rng);
    const KVec x = random_lie(l2, rng);
    const Matrix g = l2.mul(lift_element(l1, gbar, l2), l2.lie_lift(random_lie(l2, rng)));
    const Matrix conj = l2.mul(l2.mul(g, l2.lie_lift(x)), l2.inverse(g));
    CHECK(l2.kernel_vector(conj) == l1.adjoint_action(gbar, x));
  }
  // Action law and bracket preservation.
  for (const auto& s : {spec(Family::PGSp, 4, 2), spec(Family::G2, 14, 2), spec(Family::PGU, 3, 2), spec(Family::SL, 3, 3)}) {
    GroupContext g(s);
    CAPTURE(s.label());
    for (int i = 0; i < 20; ++i) {
      const Matrix a = random_word(g, rng), b = random_word(g, rng);
      const KVec x = random_lie(g, rng), y = random_lie(g, rng);
      CHECK(g.adjoint_action(g.mul(a, b), x) == g.adjoint_action(a, g.adjoint_action(b, x)));
      CHECK(g.adjoint_action(a, g.lie_bracket(x, y)) == g.lie_bracket(g.adjoint_action(a, x), g.adjoint_action(a, y)));
      CHECK(g.lie_coords_fp(g.adjoint_action(a, x)).has_value());
    }
  }
}

TEST_CASE("unipotent Sylow subgroups") {
  GroupContext sl(spec(Family::SL, 2, 2));
  auto U = unipotent_sylow(sl);
  REQUIRE(U.size() == 2);
  CHECK(U[0].m == sl.identity());
  CHECK(U[1].m == Matrix{1, 1, 0, 1});
  CHECK(unipotent_sylow(GroupContext(spec(Family::SU, 3, 2))).size() == 8);
  CHECK(unipotent_sylow(GroupContext(spec(Family::G2, 14, 2))).size() == 64);
  CHECK_THROWS_AS(unipotent_sylow(GroupContext(spec(Family::SL, 2, 2, 1, 2))), DomainError);

  // Normal-form coordinates are a bijection.
  GroupContext g2(spec(Family::G2, 14, 3));
  auto V = unipotent_sylow(g2);
  std::unordered_set<Matrix, MatrixHash> mats;
  for (const auto& u : V) mats.insert(u.m);
  CHECK(mats.size() == 729);

  // Sections reduce to the level-1 elements.
  for (const auto& s : {spec(Family::PGSp, 4, 2), spec(Family::PGU, 3, 2), spec(Family::G2, 14, 2)}) {
    GroupContext lo(s), hi(s.at_level(2));
    for (const auto& u : unipotent_sylow(lo)) {
      const Matrix m = unipotent_section(lo, u, hi);
      CHECK(hi.is_member(m));
      CHECK(reduce_element(hi, m, lo) == u.m);
    }
  }
}

TEST_CASE("unipotent subgroups from root subsets") {
  GroupContext g2(spec(Family::G2, 14, 3));
  const auto& d = g2.roots();
  std::vector<int> longs;
  for (int a = 0; a < d.num_positive; ++a)
    if (!d.is_short(a)) longs.push_back(a);
  CHECK(unipotent_subgroup(g2, longs).size() == 27);

  GroupContext sl3(spec(Family::SL, 3, 2, 2));
  CHECK(unipotent_subgroup(sl3, {sl3.roots().simple[0]}).size() == 4);
  CHECK_THROWS_AS(unipotent_subgroup(sl3, {0, 1}), DomainError);

  GroupContext sp(spec(Family::Sp, 4, 2));
  std::vector<int> sp_long;
  for (int a = 0; a < sp.roots().num_positive; ++a)
    if (!sp.roots().is_short(a)) sp_long.push_back(a);
  CHECK(unipotent_subgroup(sp, sp_long).size() == 4);

  GroupContext su4(spec(Family::SU, 4, 2));
  auto S = unipotent_subgroup_by_support(su4, {{0, 1}, {2, 3}});
  CHECK(S.size() == 4);
  for (const auto& u : S) CHECK(u.m[2 * 4 + 3] == su4.field().neg_raw(su4.field().frob_raw(u.m[1])));
}

TEST_CASE("symplectic form override") {
  std::vector<int> psi(16, 0);
  // psi(e_i, e_j) = 1 when j - i = 2.
  psi[0 * 4 + 2] = 1;
  psi[1 * 4 + 3] = 1;
  psi[2 * 4 + 0] = -1;
  psi[3 * 4 + 1] = -1;
  GroupSpec s = spec(Family::PGSp, 4, 3, 1, 2);
  s.gram = psi;
  GroupContext g(s);
  CHECK_FALSE(g.has_roots());
  CHECK(g.lie_dim_fp() == 10);
  const uint32_t m1 = g.ring().neg_raw(1);
  // I + E12 - E43 preserves psi.
  Matrix x = g.identity();
  x[0 * 4 + 1] = 1;
  x[3 * 4 + 2] = m1;
  CHECK(g.is_member(x));
}
