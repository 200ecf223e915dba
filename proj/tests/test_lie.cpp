#include "support.hpp"

#include <gtest/gtest.h>

using namespace releq;
using namespace releq::testing;

namespace {

constexpr int kSamples = 100;

void expect_complex_near(Complex a, Complex b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

void expect_momentum_near(const SE2Momentum& a, const SE2Momentum& b, double tol) {
  expect_complex_near(a.c, b.c, tol);
  EXPECT_NEAR(a.r, b.r, tol);
}

}  // namespace

// --- SE(2) group operations ------------------------------------------------

TEST(SE2, ActExamples) {
  expect_complex_near(se2_act(SE2Element::identity(), {1.0, 2.0}), {1.0, 2.0}, 1e-15);
  expect_complex_near(se2_act({{1.0, 0.0}, kPi}, {1.0, 0.0}), {0.0, 0.0}, 1e-15);
  expect_complex_near(se2_act({{0.0, 1.0}, kPi / 2.0}, {1.0, 0.0}), {0.0, 2.0}, 1e-15);
}

TEST(SE2, ComposeAndInverseExamples) {
  const SE2Element g{{0.3, -1.2}, 0.7};
  EXPECT_LT(element_distance(se2_compose(SE2Element::identity(), g), g), 1e-15);
  const SE2Element t = se2_inverse({{2.0, -1.0}, 0.0});
  expect_complex_near(t.v, {-2.0, 1.0}, 1e-15);
  EXPECT_DOUBLE_EQ(t.phi, 0.0);
  const SE2Element r = se2_inverse({{0.0, 0.0}, 1.1});
  expect_complex_near(r.v, {0.0, 0.0}, 1e-15);
  EXPECT_DOUBLE_EQ(r.phi, -1.1);
}

TEST(SE2, AngleIsWrapped) {
  EXPECT_NEAR(SE2Element({}, 3.0 * kPi).phi, kPi, 1e-12);
  EXPECT_NEAR(SE2Element({}, -kPi).phi, kPi, 1e-12);
}

TEST(SE2, OperationsMatchHomogeneousMatrices) {
  Rng rng(11);
  for (int s = 0; s < kSamples; ++s) {
    const SE2Element g = random_se2(rng), h = random_se2(rng);
    const Complex z{uniform(rng, -2, 2), uniform(rng, -2, 2)};
    const Eigen::Vector3d p = homogeneous(g) * Eigen::Vector3d(z.real(), z.imag(), 1.0);
    expect_complex_near(se2_act(g, z), {p[0], p[1]}, 1e-12);
    EXPECT_LT(element_distance(se2_compose(g, h), from_homogeneous(homogeneous(g) * homogeneous(h))), 1e-12);
    EXPECT_LT(element_distance(se2_inverse(g), from_homogeneous(homogeneous(g).inverse())), 1e-12);
  }
}

TEST(SE2, ExponentialMatchesMatrixExponential) {
  Rng rng(12);
  for (int s = 0; s < kSamples; ++s) {
    const SE2Algebra xi = random_se2_algebra(rng);
    const double t = uniform(rng, -3.0, 3.0);
    const Mat3 m = (t * homogeneous(xi)).exp();
    EXPECT_LT(element_distance(se2_exp(xi, t), from_homogeneous(m)), 1e-12);
  }
  // small-angle branch
  const SE2Algebra xi{{0.4, -0.2}, 1e-10};
  const Mat3 m = homogeneous(xi).exp();
  EXPECT_LT(element_distance(se2_exp(xi), from_homogeneous(m)), 1e-14);
}

TEST(SE2, AdjointIsConjugation) {
  Rng rng(13);
  for (int s = 0; s < kSamples; ++s) {
    const SE2Element g = random_se2(rng);
    const SE2Algebra xi = random_se2_algebra(rng);
    const Mat3 m = homogeneous(g);
    const SE2Algebra oracle = algebra_from_homogeneous(m * homogeneous(xi) * m.inverse());
    const SE2Algebra ad = se2_adjoint(g, xi);
    expect_complex_near(ad.w, oracle.w, 1e-12);
    EXPECT_NEAR(ad.omega, oracle.omega, 1e-12);
  }
}

TEST(SE2, CoadjointIsDualOfInverseAdjoint) {
  Rng rng(14);
  for (int s = 0; s < kSamples; ++s) {
    const SE2Element g = random_se2(rng);
    const SE2Momentum mu = random_se2_momentum(rng);
    const SE2Algebra xi = random_se2_algebra(rng);
    EXPECT_NEAR(pairing(se2_coad(g, mu), xi), pairing(mu, se2_adjoint(se2_inverse(g), xi)), 1e-12);
  }
}

TEST(SE2, CoadjointExamples) {
  const SE2Momentum mu{{0.4, -1.0}, 2.0};
  expect_momentum_near(se2_coad(SE2Element::identity(), mu), mu, 1e-15);
  for (double phi : {0.3, 1.7, -2.9}) expect_momentum_near(se2_coad({{}, phi}, {{}, 1.5}), {{}, 1.5}, 1e-15);
}

TEST(SE2, CoadjointIsEquivarianceForBalancedVortices) {
  Rng rng(15);
  const Vorticities gamma({1.0, 1.0, -2.0});
  for (int s = 0; s < kSamples; ++s) {
    const SE2Element g = random_se2(rng);
    const VortexState z = random_vortex_state(rng, 3);
    expect_momentum_near(vortex_momentum(gamma, act(g, z)), se2_coad(g, vortex_momentum(gamma, z)), 1e-12);
  }
}

// --- cocycle and modified action ------------------------------------------

TEST(Cocycle, Examples) {
  Rng rng(21);
  const Vorticities synge({1.0, 1.0, -2.0});
  for (int s = 0; s < 10; ++s) expect_momentum_near(se2_cocycle(synge, random_se2(rng)), {}, 1e-12);
  expect_momentum_near(se2_cocycle(Vorticities({1.0, 1.0, 1.0}), SE2Element::identity()), {}, 1e-15);
  expect_momentum_near(se2_cocycle(Vorticities({0.5, -2.0, 3.0}), SE2Element::identity()), {}, 1e-15);

  const Complex v{0.7, -0.4};
  const SE2Momentum th = se2_cocycle(Vorticities({1.0, 1.0, 1.0}), {v, 0.0});
  expect_complex_near(th.c, 3.0 * I * v, 1e-12);
}

TEST(Cocycle, MatchesDefinitionAtRandomStates) {
  Rng rng(22);
  for (int s = 0; s < kSamples; ++s) {
    const Vorticities gamma(random_gamma(rng, 3));
    const SE2Element g = random_se2(rng);
    const VortexState z = random_vortex_state(rng, 3);
    const SE2Momentum oracle = vortex_momentum(gamma, act(g, z)) - se2_coad(g, vortex_momentum(gamma, z));
    expect_momentum_near(se2_cocycle(gamma, g), oracle, 1e-10);
  }
}

TEST(Cocycle, BasePointIndependence) {
  Rng rng(23);
  for (int s = 0; s < kSamples; ++s) {
    const Vorticities gamma(random_gamma(rng, 4));
    const SE2Element g = random_se2(rng);
    const VortexState a = random_vortex_state(rng, 4, 0.1), b = random_vortex_state(rng, 4, 0.1);
    expect_momentum_near(se2_cocycle_at(gamma, g, a), se2_cocycle_at(gamma, g, b), 1e-10);
  }
}

TEST(Cocycle, CocycleIdentity) {
  Rng rng(24);
  for (int s = 0; s < kSamples; ++s) {
    const Vorticities gamma(random_gamma(rng, 3));
    const SE2Element g = random_se2(rng), h = random_se2(rng);
    expect_momentum_near(se2_cocycle(gamma, se2_compose(g, h)),
                         se2_cocycle(gamma, g) + se2_coad(g, se2_cocycle(gamma, h)), 1e-10);
  }
}

TEST(Cocycle, VanishesExactlyWhenBalanced) {
  Rng rng(25);
  for (int s = 0; s < kSamples; ++s) {
    const std::size_t n = 2 + s % 4;
    const SE2Element g{{uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0)}, uniform(rng, -kPi, kPi)};
    const Vorticities balanced(random_balanced_gamma(rng, n));
    EXPECT_LT(distance(se2_cocycle(balanced, g), {}), 1e-12);
    const Vorticities unbalanced(random_gamma(rng, n));
    if (std::abs(unbalanced.total()) > 1e-3) EXPECT_GT(distance(se2_cocycle(unbalanced, g), {}), 1e-6);
  }
}

TEST(ModifiedCoadjoint, Examples) {
  Rng rng(26);
  const SE2Momentum mu{{0.2, 0.9}, -0.4};
  expect_momentum_near(se2_coad_modified(Vorticities({1.0, 1.0, 1.0}), SE2Element::identity(), mu), mu, 1e-15);
  for (int s = 0; s < 20; ++s) {
    const SE2Element g = random_se2(rng);
    expect_momentum_near(se2_coad_modified(Vorticities({1.0, 1.0, -2.0}), g, mu), se2_coad(g, mu), 1e-12);
  }
}

TEST(ModifiedCoadjoint, MomentumIsEquivariant) {
  Rng rng(27);
  const Vorticities gamma({1.0, 1.0, 1.0});
  for (int s = 0; s < kSamples; ++s) {
    const SE2Element g = random_se2(rng);
    const VortexState z = random_vortex_state(rng, 3);
    expect_momentum_near(vortex_momentum(gamma, act(g, z)), se2_coad_modified(gamma, g, vortex_momentum(gamma, z)),
                         1e-10);
  }
}

TEST(ModifiedCoadjoint, IsAnAction) {
  Rng rng(28);
  for (int s = 0; s < kSamples; ++s) {
    const Vorticities gamma(random_gamma(rng, 3));
    const SE2Element g = random_se2(rng), h = random_se2(rng);
    const SE2Momentum mu = random_se2_momentum(rng);
    expect_momentum_near(se2_coad_modified(gamma, se2_compose(g, h), mu),
                         se2_coad_modified(gamma, g, se2_coad_modified(gamma, h, mu)), 1e-10);
  }
}

// --- isotropy and Casimir --------------------------------------------------

TEST(Isotropy, Examples) {
  EXPECT_EQ(se2_isotropy(Vorticities({1.0, 1.0, -2.0}), {{}, 1.0}), (Isotropy{3, false}));
  EXPECT_EQ(se2_isotropy(Vorticities({1.0, 1.0, 1.0}), {{}, 0.0}), (Isotropy{1, true}));
  EXPECT_EQ(se2_isotropy(Vorticities({1.0, 1.0, -2.0}), {{1.0, 0.0}, 0.0}), (Isotropy{1, false}));
}

// The closed form is checked against the numerical kernel of the linearized
// modified action; compactness against the boundedness of exp(t xi) for
// kernel directions (bounded iff the rotation component is nonzero).
TEST(Isotropy, AgreesWithNumericalKernel) {
  Rng rng(31);
  for (int s = 0; s < kSamples; ++s) {
    const bool balanced = s % 2 == 0;
    const Vorticities gamma(balanced ? random_balanced_gamma(rng, 3) : random_gamma(rng, 3));
    if (!balanced && std::abs(gamma.total()) < 1e-2) continue;
    SE2Momentum mu = random_se2_momentum(rng);
    if (s % 5 == 0) mu.c = {};
    const Vec mv = mu.to_vector();
    const double total = gamma.balanced() ? 0.0 : gamma.total();
    auto orbit_map = [&](const Vec& xi) {
      const SE2Element g = se2_exp(SE2Algebra::from_vector(xi), 1.0);
      return Vec(se2_coad_modified(gamma, g, mu).to_vector() - mv);
    };
    const Mat lin = fd_jacobian(orbit_map, Vec::Zero(3));
    const Mat kernel = null_space(lin, 1e-7, 1e-7);
    const Isotropy iso = se2_isotropy(gamma, mu);
    EXPECT_EQ(kernel.cols(), iso.dimension) << "total " << total;

    // exp(t xi) is unbounded iff xi is a pure translation; such a direction
    // exists in the kernel iff the omega row restricted to it has a null space
    const Mat omega_row = kernel.row(2);
    const bool has_translation = kernel.cols() > 0 && null_space(omega_row, 1e-9, 1e-9).cols() > 0;
    EXPECT_EQ(iso.compact, !has_translation);
  }
}

TEST(Casimir, Examples) {
  EXPECT_DOUBLE_EQ(se2_casimir(Vorticities({1.0, 1.0, -2.0}), {{}, 5.0}), 0.0);
  EXPECT_DOUBLE_EQ(se2_casimir(Vorticities({1.0, 1.0, 1.0}), {{}, 0.8}), 0.8);
}

TEST(Casimir, ConstantOnModifiedOrbits) {
  Rng rng(32);
  for (int s = 0; s < kSamples; ++s) {
    const Vorticities gamma(s % 2 == 0 ? std::vector<double>{1.0, 1.0, 1.0} : random_balanced_gamma(rng, 3));
    const SE2Element g = random_se2(rng);
    const SE2Momentum mu = random_se2_momentum(rng);
    EXPECT_NEAR(se2_casimir(gamma, se2_coad_modified(gamma, g, mu)), se2_casimir(gamma, mu), 1e-10);
  }
}

// --- SO(3) x SO(3) ---------------------------------------------------------

TEST(SO3, HatVeeAndExponential) {
  Rng rng(41);
  for (int s = 0; s < kSamples; ++s) {
    const Vec3 a = gaussian_vector(rng, 3), b = gaussian_vector(rng, 3);
    EXPECT_LT((hat(a) * b - a.cross(b)).norm(), 1e-14);
    EXPECT_LT((vee(hat(a)) - a).norm(), 1e-15);
    const Mat3 oracle = hat(a).exp();
    EXPECT_LT((so3_exp(a) - oracle).norm(), 1e-12);
    EXPECT_TRUE(is_rotation(random_rotation(rng)));
  }
  EXPECT_LT((so3_exp(Vec3(1e-12, 0, 0)) - Mat3::Identity()).norm(), 1e-11);
  EXPECT_THROW(require_rotation(Mat3(Vec3(1, 1, -1).asDiagonal())), InputError);
}

TEST(SO3Pair, IdentityActsTrivially) {
  Rng rng(42);
  const ARBState s = random_arb_state(rng);
  const ARBState t = so3_pair_act(Mat3::Identity(), Mat3::Identity(), s);
  EXPECT_EQ(t.Q, s.Q);
  EXPECT_EQ(t.P, s.P);
  const SO3PairMomentum mu{Vec3(1, 2, 3), Vec3(-1, 0, 4)};
  const SO3PairMomentum m = so3_pair_coad(Mat3::Identity(), Mat3::Identity(), mu);
  EXPECT_EQ(m.muL, mu.muL);
  EXPECT_EQ(m.muR, mu.muR);
}

TEST(SO3Pair, MomentaAreEquivariant) {
  Rng rng(43);
  for (int s = 0; s < kSamples; ++s) {
    const Mat3 a = random_rotation(rng), b = random_rotation(rng);
    const ARBState x = random_arb_state(rng);
    const SO3PairMomentum mu = arb_momentum(x);
    const SO3PairMomentum left = arb_momentum(so3_pair_act(a, Mat3::Identity(), x));
    const SO3PairMomentum right = arb_momentum(so3_pair_act(Mat3::Identity(), b, x));
    EXPECT_LT((left.muL - a * mu.muL).norm(), 1e-10);
    EXPECT_LT((left.muR - mu.muR).norm(), 1e-10);
    EXPECT_LT((right.muR - b * mu.muR).norm(), 1e-10);
    EXPECT_LT((right.muL - mu.muL).norm(), 1e-10);
    const SO3PairMomentum both = arb_momentum(so3_pair_act(a, b, x));
    const SO3PairMomentum co = so3_pair_coad(a, b, mu);
    EXPECT_LT((both.muL - co.muL).norm() + (both.muR - co.muR).norm(), 1e-10);
  }
}

TEST(SO3Pair, IsotropyAlgebra) {
  // generic: one axis on each side
  EXPECT_EQ(so3_pair_isotropy_algebra({Vec3(0, 0, 1), Vec3(1, 0, 0)}).cols(), 2);
  EXPECT_EQ(so3_pair_isotropy_algebra({Vec3(0, 0, 1), Vec3::Zero()}).cols(), 4);
  EXPECT_EQ(so3_pair_isotropy_algebra({}).cols(), 6);
  const Mat basis = so3_pair_isotropy_algebra({Vec3(0, 0, 2), Vec3(0, 3, 0)});
  for (int k = 0; k < basis.cols(); ++k) {
    EXPECT_LT(Vec3(basis.col(k).head<3>()).cross(Vec3(0, 0, 1)).norm(), 1e-12);
    EXPECT_LT(Vec3(basis.col(k).tail<3>()).cross(Vec3(0, 1, 0)).norm(), 1e-12);
  }
}
