#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wittsplit/lie_analysis.hpp"

using namespace wittsplit;

namespace {

GroupSpec spec(Family f, int n, int p, int r = 1) { return GroupSpec{f, n, p, r, 1, {}}; }

KVec unit(int d, int i) {
  KVec e(d, 0);
  e[i] = 1;
  return e;
}

// Independent check of stability: apply every operator to a random element.
bool randomly_stable(const OperatorSet& m, const Submodule& s, std::mt19937_64& rng) {
  for (int rep = 0; rep < 20; ++rep) {
    KVec v(m.dim, 0);
    for (const auto& b : s.basis) vec_axpy(*m.k, v, static_cast<uint32_t>(rng() % m.k->q()), b);
    for (const auto& op : m.ops)
      if (!s.contains(*m.k, mat_vec(*m.k, op, v))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("Lie module construction and invariants") {
  const std::vector<std::pair<GroupSpec, int>> cases = {
      {spec(Family::SL, 2, 2), 3},    {spec(Family::PGL, 3, 2), 8},  {spec(Family::G2, 14, 3), 14},
      {spec(Family::Sp, 4, 2), 10},   {spec(Family::PGU, 3, 2), 8},  {spec(Family::PGL, 2, 2, 2), 3},
      {spec(Family::PGSp, 6, 2), 21}, {spec(Family::SU, 3, 2), 8},   {spec(Family::GL, 2, 3), 4},
  };
  for (const auto& [s, d] : cases) {
    CAPTURE(s.label());
    LieModule L(s);
    CHECK(L.dim() == d);
    CHECK(L.validate());
    CHECK(L.labels().size() == static_cast<size_t>(d));
    CHECK(L.provenance() == s.label());
    // Random alternation.
    std::mt19937_64 rng(1);
    KVec x(d);
    for (auto& c : x) c = static_cast<uint32_t>(rng() % L.field().q());
    CHECK(is_zero(L.bracket(x, x)));
  }
  CHECK_THROWS_AS(LieModule(GroupSpec{Family::SL, 2, 2, 1, 2, {}}), DomainError);
}

TEST_CASE("derived algebra and center") {
  LieModule sl2(spec(Family::SL, 2, 2));
  CHECK(sl2.center().dim() == 1);
  CHECK(sl2.group_center().dim() == 1);
  CHECK(sl2.derived_subalgebra() == sl2.center());
  LieModule sl3(spec(Family::SL, 3, 2));
  CHECK(sl3.derived_subalgebra() == sl3.whole());
  CHECK(sl3.center().dim() == 0);
  LieModule sp4(spec(Family::Sp, 4, 2));
  CHECK(sp4.derived_subalgebra().dim() < sp4.dim());
  CHECK(sp4.derived_subalgebra().dim() == 6);

  // Group center matches the Lie algebra of the center scheme.
  const std::vector<std::pair<GroupSpec, int>> centers = {
      {spec(Family::SL, 3, 3), 1},  {spec(Family::SL, 3, 2), 0},   {spec(Family::SL, 4, 2), 1},
      {spec(Family::Sp, 4, 2), 1},  {spec(Family::Sp, 4, 3), 0},   {spec(Family::PGL, 3, 3), 0},
      {spec(Family::PGSp, 4, 2), 0}, {spec(Family::G2, 14, 2), 0}, {spec(Family::GL, 2, 3), 1},
      {spec(Family::SU, 3, 2), 0},
  };
  for (const auto& [s, d] : centers) {
    CAPTURE(s.label());
    CHECK(LieModule(s).group_center().dim() == d);
  }
}

TEST_CASE("lambda image") {
  LieModule pgl2(spec(Family::PGL, 2, 2));
  CHECK(pgl2.lambda_image().dim() == 2);
  LieModule pgu3(spec(Family::PGU, 3, 2));
  CHECK(pgu3.lambda_image() == pgu3.whole());
  CHECK(pgu3.derived_subalgebra() == pgu3.whole());
  LieModule pgsp4(spec(Family::PGSp, 4, 2));
  CHECK(pgsp4.lambda_image() == pgsp4.derived_subalgebra());

  // Lambda equals the derived algebra except for simply connected type C with p = 2.
  const std::vector<std::pair<GroupSpec, bool>> cases = {
      {spec(Family::SL, 2, 2), false},  {spec(Family::SL, 2, 2, 2), false}, {spec(Family::Sp, 4, 2), false},
      {spec(Family::Sp, 6, 2), false},  {spec(Family::SL, 2, 3), true},     {spec(Family::PGL, 2, 2), true},
      {spec(Family::SL, 3, 3), true},   {spec(Family::PGL, 3, 3), true},    {spec(Family::SL, 4, 2), true},
      {spec(Family::PGSp, 6, 2), true}, {spec(Family::G2, 14, 3), true},    {spec(Family::SU, 3, 2), true},
  };
  for (const auto& [s, equal] : cases) {
    CAPTURE(s.label());
    LieModule L(s);
    const Submodule lam = L.lambda_image(), der = L.derived_subalgebra();
    CHECK(lam.contains(L.field(), der));
    CHECK((lam == der) == equal);
  }
}

TEST_CASE("exceptional ideals") {
  LieModule g3(spec(Family::G2, 14, 3));
  const Submodule i3 = g3.exceptional_ideal();
  CHECK(i3.dim() > 0);
  CHECK(i3.dim() < 14);
  for (const auto& v : g3.short_root_vectors()) {
    CHECK(i3.contains(g3.field(), v));
    CHECK(g3.module_spin({v}) == i3);
  }
  LieModule sp4(spec(Family::Sp, 4, 2));
  const Submodule is = sp4.exceptional_ideal();
  CHECK(is.dim() < sp4.dim());
  for (const auto& v : sp4.short_root_vectors()) CHECK(is.contains(sp4.field(), v));
  // In characteristic 2 the short-root ideal of G2 is the whole algebra.
  LieModule g2(spec(Family::G2, 14, 2));
  CHECK(g2.exceptional_ideal() == g2.whole());
  CHECK_THROWS_AS(LieModule(spec(Family::Sp, 4, 3)).exceptional_ideal(), DomainError);
  CHECK_THROWS_AS(LieModule(spec(Family::SL, 3, 2)).exceptional_ideal(), DomainError);
}

TEST_CASE("spinning") {
  LieModule g3(spec(Family::G2, 14, 3));
  const OperatorSet m = g3.module_ops();
  CHECK(spin(m, {}).dim() == 0);
  CHECK(spin(m, identity_rows(14)) == g3.whole());
  std::mt19937_64 rng(3);
  const Submodule i = g3.exceptional_ideal();
  CHECK(randomly_stable(m, i, rng));
  CHECK(randomly_stable(g3.ideal_ops(), i, rng));
}

TEST_CASE("minimal submodules: fixed-point reduction agrees with exhaustive spinning") {
  for (const auto& s : {spec(Family::SL, 2, 2), spec(Family::PGL, 2, 2), spec(Family::SL, 2, 3), spec(Family::PGL, 2, 2, 2),
                        spec(Family::SL, 3, 2), spec(Family::PGL, 3, 3), spec(Family::SL, 3, 3), spec(Family::Sp, 4, 2),
                        spec(Family::PGSp, 4, 2), spec(Family::SU, 3, 2)}) {
    CAPTURE(s.label());
    LieModule L(s);
    for (const OperatorSet& m : {L.module_ops(), L.ideal_ops()}) {
      const auto fast = minimal_submodules(m);
      CHECK(fast == minimal_submodules(m, LineMode::Exhaustive));
      CHECK(fast == minimal_submodules_serial(m));
      CHECK(maximal_submodules(m) == maximal_submodules(m, LineMode::Exhaustive));
      CHECK(invariant_lines(m) == invariant_lines(m, LineMode::Exhaustive));
    }
  }
  LieModule sp6(spec(Family::Sp, 6, 2));
  CHECK_THROWS_AS(minimal_submodules(sp6.module_ops(), LineMode::Exhaustive), DomainError);
  CHECK_NOTHROW(minimal_submodules(sp6.module_ops()));
}

TEST_CASE("submodule lattices") {
  LieModule g3(spec(Family::G2, 14, 3));
  const auto mins = minimal_submodules(g3.module_ops());
  REQUIRE(mins.size() == 1);
  CHECK(mins[0] == g3.exceptional_ideal());

  LieModule pgsp4(spec(Family::PGSp, 4, 2));
  const auto m4 = minimal_submodules(pgsp4.module_ops());
  REQUIRE(m4.size() == 1);
  CHECK(m4[0] == pgsp4.exceptional_ideal());

  // The short-root ideal of G2 over F3 and the quotient by it.
  const OperatorSet lam = restrict_to(g3.module_ops(), g3.lambda_image());
  const auto maxes = maximal_submodules(lam);
  REQUIRE(maxes.size() == 1);
  CHECK_FALSE(acts_trivially(quotient_by(lam, maxes[0])));

  LieModule g2(spec(Family::G2, 14, 2));
  const OperatorSet lam2 = restrict_to(g2.module_ops(), g2.lambda_image());
  const auto max2 = maximal_submodules(lam2);
  REQUIRE(max2.size() == 1);
  CHECK(max2[0].dim() == 0);
  CHECK_FALSE(acts_trivially(quotient_by(lam2, max2[0])));

  LieModule pgu3(spec(Family::PGU, 3, 2));
  const auto mu = minimal_submodules(pgu3.module_ops());
  REQUIRE(mu.size() == 1);
  CHECK(mu[0] == pgu3.whole());
}

TEST_CASE("invariant lines") {
  CHECK(invariant_lines(LieModule(spec(Family::PGL, 2, 2, 2)).module_ops()).empty());
  CHECK(invariant_lines(LieModule(spec(Family::G2, 14, 2)).module_ops()).empty());
  LieModule sl2(spec(Family::SL, 2, 2));
  const auto lines = invariant_lines(sl2.module_ops());
  REQUIRE(lines.size() == 1);
  CHECK(sl2.center().contains(sl2.field(), lines[0]));
  // pgl2 over F2 is V + trivial as a module for SL2(F2) = S3; h + e + f is
  // fixed (stored with zero (1,1) entry).
  LieModule pgl2(spec(Family::PGL, 2, 2));
  const auto pl = invariant_lines(pgl2.module_ops());
  REQUIRE(pl.size() == 1);
  CHECK(pgl2.ambient(pl[0]) == KVec{0, 1, 1, 1});
}

TEST_CASE("ideals and simplicity") {
  CHECK_FALSE(LieModule(spec(Family::SL, 2, 2)).is_simple_algebra());
  CHECK(LieModule(spec(Family::SL, 2, 3)).is_simple_algebra());
  CHECK_FALSE(LieModule(spec(Family::SL, 3, 3)).is_simple_algebra());
  CHECK(LieModule(spec(Family::SL, 3, 2)).is_simple_algebra());
  CHECK_FALSE(LieModule(spec(Family::G2, 14, 3)).is_simple_algebra());
  CHECK(LieModule(spec(Family::G2, 14, 2)).is_simple_algebra());
  CHECK_FALSE(LieModule(spec(Family::Sp, 4, 2)).is_simple_algebra());
  CHECK(LieModule(spec(Family::PGU, 3, 2)).is_simple_algebra());
  CHECK(LieModule(spec(Family::PGSp, 4, 3)).is_simple_algebra());
  // Ideals found by the bracket closure are ideals.
  LieModule pgl3(spec(Family::PGL, 3, 3));
  const auto ideals = minimal_submodules(pgl3.ideal_ops());
  REQUIRE(ideals.size() == 1);
  CHECK(ideals[0].dim() == 7);
  for (const auto& v : ideals[0].basis)
    for (int j = 0; j < 8; ++j) CHECK(ideals[0].contains(pgl3.field(), pgl3.bracket(v, unit(8, j))));
}

TEST_CASE("supplements") {
  for (const auto& s : {spec(Family::SL, 3, 3), spec(Family::Sp, 4, 2), spec(Family::SL, 4, 2), spec(Family::SL, 2, 2, 2)}) {
    CAPTURE(s.label());
    LieModule L(s);
    CHECK(L.group_center().dim() == 1);
    CHECK_FALSE(supplement_exists(L.module_ops(), L.group_center()));
  }
  // Over F2 the center of sl2 has a stable complement.
  LieModule sl2(spec(Family::SL, 2, 2));
  CHECK(supplement_exists(sl2.module_ops(), sl2.group_center()));
  LieModule gl2(spec(Family::GL, 2, 3));
  CHECK(supplement_exists(gl2.module_ops(), gl2.group_center()));
  // Trivial module with Z = L: no proper subspace is needed, nothing to find.
  OperatorSet triv{&gl2.field(), 1, {identity_rows(1)}, {KRows{{0}}}};
  CHECK(supplement_exists(triv, make_subspace(gl2.field(), identity_rows(1), 1)));
  OperatorSet zero{&gl2.field(), 0, {}, {}};
  CHECK_FALSE(supplement_exists(zero, Submodule{}));
}

TEST_CASE("module extension splitting") {
  LieModule g3(spec(Family::G2, 14, 3));
  const OperatorSet m = g3.module_ops();
  const Submodule lam = g3.lambda_image(), i = g3.exceptional_ideal();
  CHECK_FALSE(module_extension_splits(m, lam, i));
  CHECK(module_extension_splits(m, lam, Submodule{}));
  CHECK(module_extension_splits(m, lam, lam));

  LieModule pgsp6(spec(Family::PGSp, 6, 2));
  const OperatorSet m6 = pgsp6.module_ops();
  const Submodule lam6 = pgsp6.lambda_image(), i6 = pgsp6.exceptional_ideal();
  CHECK(lam6.dim() - i6.dim() == 6);
  CHECK_FALSE(module_extension_splits(m6, lam6, i6));
  const OperatorSet q6 = quotient_by(restrict_to(m6, lam6), coords_in(pgsp6.field(), lam6, i6));
  CHECK(maximal_submodules(q6).size() == 1);
  CHECK(maximal_submodules(q6)[0].dim() == 0);
  CHECK_FALSE(acts_trivially(q6));

  // gl2 over F3 = center + sl2 splits as a module.
  LieModule gl2(spec(Family::GL, 2, 3));
  const Submodule sl = gl2.derived_subalgebra();
  CHECK(module_extension_splits(gl2.module_ops(), gl2.whole(), sl));
  CHECK(module_extension_splits(gl2.module_ops(), gl2.whole(), gl2.group_center()));
  LieModule sl2(spec(Family::SL, 2, 2));
  CHECK(module_extension_splits(sl2.module_ops(), sl2.whole(), sl2.center()));
  // sl3 over F3 contains the center without a stable complement.
  LieModule sl3(spec(Family::SL, 3, 3));
  CHECK_FALSE(module_extension_splits(sl3.module_ops(), sl3.whole(), sl3.center()));
}

TEST_CASE("dual module and annihilators") {
  LieModule sp4(spec(Family::Sp, 4, 2));
  const OperatorSet m = sp4.module_ops();
  for (const auto& s : minimal_submodules(dual(m))) {
    const Submodule a = annihilator(sp4.field(), s, m.dim);
    CHECK(is_stable(m, a));
    CHECK(a.dim() + s.dim() == m.dim);
  }
  CHECK(maximal_submodules(m).size() == 1);
  CHECK(maximal_submodules(m)[0] == sp4.derived_subalgebra());
}
