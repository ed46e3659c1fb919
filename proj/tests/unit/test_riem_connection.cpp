#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace lftest;

namespace {

std::vector<MetricLieAlgebra> random_spaces(std::mt19937_64& rng, int count) {
  std::vector<MetricLieAlgebra> out;
  const LieAlgebra families[] = {abelian(3), heisenberg3(), so3(), book3(), sl2(), heisenberg3_plus_r()};
  for (int i = 0; i < count; ++i) {
    const LieAlgebra& base = families[i % 6];
    const LieAlgebra a = change_basis(base, random_invertible(base.dim(), rng));
    out.emplace_back(a, MetricTensor(random_spd(a.dim(), rng)));
  }
  return out;
}

}  // namespace

TEST(RiemConnection, HeisenbergConnectionTable) {
  const MetricLieAlgebra m = identity_metric(heisenberg3());
  const ConnectionTable t = levi_civita(m);
  EXPECT_NEAR((t.at(0, 1) - 0.5 * e(3, 2)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t.at(1, 0) + 0.5 * e(3, 2)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t.at(0, 2) + 0.5 * e(3, 1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t.at(2, 0) + 0.5 * e(3, 1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t.at(1, 2) - 0.5 * e(3, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t.at(2, 1) - 0.5 * e(3, 0)).norm(), 0.0, 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(t.at(i, i).isZero());
}

TEST(RiemConnection, HeisenbergSectionalCurvatures) {
  const MetricLieAlgebra m = identity_metric(heisenberg3());
  const ConnectionTable t = levi_civita(m);
  EXPECT_NEAR(sectional(m, t, e(3, 0), e(3, 1)), -0.75, 1e-12);
  EXPECT_NEAR(sectional(m, t, e(3, 0), e(3, 2)), 0.25, 1e-12);
  EXPECT_NEAR(sectional(m, t, e(3, 1), e(3, 2)), 0.25, 1e-12);
}

TEST(RiemConnection, So3RoundMetricHasConstantCurvature) {
  // Bi-invariant metric: K(x,y) = 1/4 |[x,y]|^2 for orthonormal x, y.
  const MetricLieAlgebra m = identity_metric(so3());
  const ConnectionTable t = levi_civita(m);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const FlagPlane p = random_orthonormal_plane(m, rng, CaseTag::cc);
    EXPECT_NEAR(sectional(m, t, p.base_second(), p.base_pole()), 0.25, 1e-12);
  }
}

TEST(RiemConnection, TableInvariantsOnRandomSpaces) {
  std::mt19937_64 rng(17);
  for (const MetricLieAlgebra& m : random_spaces(rng, 50)) {
    const ConnectionTable t = levi_civita(m);
    EXPECT_LE(torsion_residual(m, t), 1e-12);
    EXPECT_LE(metric_compatibility_residual(m, t), 1e-12);
  }
}

TEST(RiemConnection, SectionalDependsOnlyOnThePlane) {
  std::mt19937_64 rng(23);
  for (const MetricLieAlgebra& m : random_spaces(rng, 12)) {
    const ConnectionTable t = levi_civita(m);
    for (int k = 0; k < 100; ++k) {
      const AlgVector y = random_vector(m.dim(), rng), v = random_vector(m.dim(), rng);
      const double c = std::cos(0.3 * k), s = std::sin(0.3 * k);
      const AlgVector y2 = 2.0 * (c * y + s * v), v2 = -s * y + c * v;
      EXPECT_NEAR(sectional(m, t, v, y), sectional(m, t, v2, y2), 1e-10);
    }
  }
}

TEST(RiemConnection, AbelianIsFlat) {
  std::mt19937_64 rng(4);
  const MetricLieAlgebra m(abelian(3), MetricTensor(random_spd(3, rng)));
  const ConnectionTable t = levi_civita(m);
  for (int k = 0; k < 20; ++k) {
    const AlgVector u = random_vector(3, rng), y = random_vector(3, rng);
    EXPECT_LE(curvature(m, t, u, y).norm(), 1e-12);
    EXPECT_LE(std::abs(sectional(m, t, u, y)), 1e-12);
  }
}

TEST(RiemConnection, DegeneratePlaneThrows) {
  const MetricLieAlgebra m = identity_metric(heisenberg3());
  const ConnectionTable t = levi_civita(m);
  EXPECT_THROW(sectional(m, t, e(3, 0), 2.0 * e(3, 0)), DegeneratePlaneError);
}

TEST(RiemConnection, UMapHeisenberg) {
  const MetricLieAlgebra m = identity_metric(heisenberg3());
  EXPECT_NEAR((u_map(m, e(3, 0), e(3, 2)) + 0.5 * e(3, 1)).norm(), 0.0, 1e-15);
  EXPECT_TRUE(u_map(m, e(3, 0), e(3, 0)).isZero());
}

TEST(RiemConnection, UMapIsSymmetricPartOfConnection) {
  std::mt19937_64 rng(29);
  for (const MetricLieAlgebra& m : random_spaces(rng, 12)) {
    const ConnectionTable t = levi_civita(m);
    for (int k = 0; k < 10; ++k) {
      const AlgVector x = random_vector(m.dim(), rng), y = random_vector(m.dim(), rng);
      EXPECT_LE((u_map(m, x, y) - u_map(m, y, x)).norm(), 1e-12);
      // nabla_x y = 1/2 [x,y] + U(x,y)
      EXPECT_LE((t.covariant(x, y) - 0.5 * m.bracket(x, y) - u_map(m, x, y)).norm(), 1e-11);
    }
  }
}
