#pragma once

#include <Eigen/Dense>

namespace psvf {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Vec3d = Vec3<double>;

/// A phase-space point (x, y, z). The switching plane is z = 0.
using State3 = Vec3d;

/// Coordinates on the switching plane; z is implicitly zero.
struct SigmaPoint {
  double x = 0.0;
  double y = 0.0;

  State3 lift() const { return State3(x, y, 0.0); }
};

/// Which half-space a smooth field is active on.
enum class Side { upper, lower };

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

/// |z| at or below this counts as lying on the switching plane.
inline constexpr double kSigmaMembershipTol = 1e-12;

}  // namespace psvf
