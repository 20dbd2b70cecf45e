#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include "psvf/field.hpp"

namespace psvf {

/// X.f = <grad f, X> with f = z, i.e. the third component of the field.
template <typename Scalar>
Scalar lie_derivative(const SmoothField& w, const Vec3<Scalar>& p) {
  return w(p).z();
}

/// X^2.f: derivative of X.f along X. For every family X.f depends on y only,
/// so X^2.f = (2 + xi''(y)) * dy/dt.
template <typename Scalar>
Scalar second_lie_derivative(const SmoothField& w, const Vec3<Scalar>& p) {
  Scalar slope(2);
  if (w.y_perturbed()) slope += xi_second(w.bump(), p.y());
  return slope * Scalar(w.y_rate());
}

enum class SigmaKind { crossing_up, crossing_down, sliding, escaping, fold_upper, fold_lower, two_fold };
enum class Visibility { visible, invisible };

struct SigmaClass {
  SigmaKind kind = SigmaKind::crossing_up;
  std::optional<Visibility> upper;
  std::optional<Visibility> lower;
};

std::string_view to_string(SigmaKind kind);
std::string_view to_string(Visibility v);

struct ClassifyOptions {
  double vanish_tol = 1e-10;
  double sigma_tol = kSigmaMembershipTol;
};

/// Classifies a point of the switching plane. The upper field is visible at a
/// fold when X^2.f > 0; the lower field is visible when Y^2.f < 0, so that
/// "invisible" on either side means the tangent arc curves away from the
/// field's own half-space.
/// Throws DegenerateTangency when a field has X.f = X^2.f = 0 and OffSigma when
/// |z| exceeds the membership tolerance.
SigmaClass classify_sigma_point(const Psvf& z, const State3& p, const ClassifyOptions& opt = {});

}  // namespace psvf
