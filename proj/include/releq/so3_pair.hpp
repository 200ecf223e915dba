#pragma once

#include "releq/common.hpp"

#include <cmath>

namespace releq {

/// Hat map: (hat(a)) x = a x x.
inline Mat3 hat(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return m;
}

/// Inverse of the hat map applied to the antisymmetric part of `m`.
inline Vec3 vee(const Mat3& m) {
  return Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) / 2.0;
}

/// Rodrigues formula for exp(hat(a)).
inline Mat3 so3_exp(const Vec3& a) {
  const double theta = a.norm();
  const Mat3 k = hat(a);
  if (theta < 1e-8) return Mat3::Identity() + k + 0.5 * k * k;
  return Mat3::Identity() + std::sin(theta) / theta * k +
         (1.0 - std::cos(theta)) / (theta * theta) * k * k;
}

inline bool is_rotation(const Mat3& a, double tol = 1e-10) {
  return (a.transpose() * a - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(a.determinant() - 1.0) <= tol;
}

inline void require_rotation(const Mat3& a) {
  if (!is_rotation(a)) throw InputError("not a rotation");
}

/// Uniformly distributed rotation (normalised Gaussian quaternion).
inline Mat3 random_rotation(Rng& rng) {
  Vec q = gaussian_vector(rng, 4);
  q.normalize();
  return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).toRotationMatrix();
}

/// Phase point (Q, P) of the affine rigid body.
struct ARBState {
  Mat3 Q = Mat3::Identity();
  Mat3 P = Mat3::Zero();

  /// Real coordinates: Q row-major then P row-major.
  Vec to_vector() const {
    Vec x(18);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        x[3 * i + j] = Q(i, j);
        x[9 + 3 * i + j] = P(i, j);
      }
    return x;
  }

  static ARBState from_vector(const Vec& x) {
    if (x.size() != 18) throw InputError("ARB state vector must have 18 entries");
    ARBState s;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        s.Q(i, j) = x[3 * i + j];
        s.P(i, j) = x[9 + 3 * i + j];
      }
    return s;
  }
};

/// (mu_L, mu_R) in so(3)* x so(3)*, as 3-vectors under the hat map.
struct SO3PairMomentum {
  Vec3 muL = Vec3::Zero();
  Vec3 muR = Vec3::Zero();

  Vec to_vector() const {
    Vec v(6);
    v << muL, muR;
    return v;
  }
  static SO3PairMomentum from_vector(const Vec& v) { return {v.head<3>(), v.tail<3>()}; }
};

/// (Q, P) -> (A Q B^T, A P B^T).
inline ARBState so3_pair_act(const Mat3& a, const Mat3& b, const ARBState& s) {
  require_rotation(a);
  require_rotation(b);
  return {a * s.Q * b.transpose(), a * s.P * b.transpose()};
}

/// (mu_L, mu_R) -> (A mu_L, B mu_R).
inline SO3PairMomentum so3_pair_coad(const Mat3& a, const Mat3& b, const SO3PairMomentum& mu) {
  require_rotation(a);
  require_rotation(b);
  return {a * mu.muL, b * mu.muR};
}

// ---------------------------------------------------------------------------
// Single particle in R^3: momentum q x p of the diagonal rotation action.

/// (q, p) in R^6 -> q x p.
inline Vec cross_momentum(const Vec& x) {
  if (x.size() != 6) throw InputError("cross momentum expects (q, p) in R^6");
  return Vec(Vec3(x.head<3>()).cross(Vec3(x.tail<3>())));
}

/// (q, p) -> (R q, R p) with R uniformly random.
inline Vec random_diagonal_rotation(const Vec& x, Rng& rng) {
  const Mat3 r = random_rotation(rng);
  Vec y(6);
  y << r * x.head<3>(), r * x.tail<3>();
  return y;
}

/// The 26 nonzero directions of {-1, 0, 1}^3, normalized.
inline std::vector<Vec> grid_directions_26() {
  std::vector<Vec> dirs;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j)
      for (int k = -1; k <= 1; ++k)
        if (i != 0 || j != 0 || k != 0) dirs.push_back(Vec(Vec3(i, j, k).normalized()));
  return dirs;
}

}  // namespace releq
