#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "psvf/bump.hpp"
#include "psvf/errors.hpp"
#include "psvf/types.hpp"

namespace psvf {

/// Parameters shared by every family. Fields a family does not use are ignored.
struct FieldParams {
  double lambda = 0.5;  // amplitude of the x-perturbation
  double mu = 0.3;      // spacing of the invariant planes
  int L = 2;            // number of invariant planes
  double eps = 0.2;     // amplitude of the cylinder perturbation
  int k = 2;            // number of cylinders, finite profile
  Rho rho = Rho::finite;

  BumpSpec bump() const { return {rho, eps, k}; }
};

/// The four concrete families of piecewise-smooth fields.
///   z0   : unperturbed normal form, a continuum of nested cylinders
///   z_l  : x-perturbation only, L invariant planes
///   z_eps: cylinder perturbation only, isolated cylinders
///   z_kl : both, L*k limit cycles
enum class FamilyTag { z0, z_l, z_eps, z_kl };

enum class FieldFamily { x0, x_l, y0, y_eps };

std::string_view to_string(FamilyTag tag);
FamilyTag family_from_string(std::string_view name);

/// One smooth half of a piecewise field. Upper fields are (lambda*Pi(x), -1, 2y),
/// lower fields are (0, 1, 2y + xi'(y)). Fields are defined on all of R^3; the
/// Psvf decides where each is active.
class SmoothField {
 public:
  static SmoothField upper(double lambda = 0.0, double mu = 1.0, int L = 1) {
    SmoothField w;
    w.family_ = lambda == 0.0 ? FieldFamily::x0 : FieldFamily::x_l;
    w.lambda_ = lambda;
    w.mu_ = mu;
    w.L_ = L;
    return w;
  }

  static SmoothField lower() { return SmoothField{}.as_lower(FieldFamily::y0, {}); }

  static SmoothField lower(const BumpSpec& bump) {
    return SmoothField{}.as_lower(FieldFamily::y_eps, bump);
  }

  FieldFamily family() const { return family_; }
  Side side() const { return family_ == FieldFamily::x0 || family_ == FieldFamily::x_l ? Side::upper : Side::lower; }
  bool x_perturbed() const { return family_ == FieldFamily::x_l; }
  bool y_perturbed() const { return family_ == FieldFamily::y_eps; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  int L() const { return L_; }
  const BumpSpec& bump() const { return bump_; }

  /// dy/dt, constant along the flow.
  double y_rate() const { return side() == Side::upper ? -1.0 : 1.0; }

  template <typename Scalar>
  Vec3<Scalar> operator()(const Vec3<Scalar>& p) const {
    const Scalar y = p.y();
    const Scalar two_y = Scalar(2) * y;
    switch (family_) {
      case FieldFamily::x0:
        return {Scalar(0), Scalar(-1), two_y};
      case FieldFamily::x_l:
        return {Scalar(lambda_) * product_poly(p.x(), mu_, L_).value, Scalar(-1), two_y};
      case FieldFamily::y0:
        return {Scalar(0), Scalar(1), two_y};
      case FieldFamily::y_eps:
        return {Scalar(0), Scalar(1), two_y + xi_prime(bump_, y)};
    }
    return Vec3<Scalar>::Zero();
  }

  /// Third component as a function of y alone: 2y, or 2y + xi'(y).
  template <typename Scalar>
  Scalar z_rate(Scalar y) const {
    return y_perturbed() ? Scalar(2) * y + xi_prime(bump_, y) : Scalar(2) * y;
  }

 private:
  SmoothField as_lower(FieldFamily f, const BumpSpec& b) {
    family_ = f;
    bump_ = b;
    return *this;
  }

  FieldFamily family_ = FieldFamily::y0;
  double lambda_ = 0.0;
  double mu_ = 1.0;
  int L_ = 1;
  BumpSpec bump_{};
};

/// A piecewise-smooth field Z = (X, Y) with switching function f = z.
struct Psvf {
  SmoothField upper = SmoothField::upper();
  SmoothField lower = SmoothField::lower();
  FamilyTag tag = FamilyTag::z0;
  FieldParams params{};
};

template <typename Scalar>
struct SigmaPair {
  Vec3<Scalar> upper;
  Vec3<Scalar> lower;
};

/// Upper field above the plane, lower below, both on it.
template <typename Scalar>
std::variant<Vec3<Scalar>, SigmaPair<Scalar>> eval_psvf(const Psvf& z, const Vec3<Scalar>& p) {
  if (p.z() > Scalar(0)) return z.upper(p);
  if (p.z() < Scalar(0)) return z.lower(p);
  return SigmaPair<Scalar>{z.upper(p), z.lower(p)};
}

void validate(FamilyTag tag, const FieldParams& params);

/// Builds one of the concrete families. Parameters the family does not use are
/// zeroed in the returned params (z0 has lambda = eps = 0).
Psvf make_family(FamilyTag tag, FieldParams params = {});

enum class IntegralTag { H1, H2, L1, L2, M1, M2 };

template <typename Scalar>
Scalar first_integral(IntegralTag tag, const Vec3<Scalar>& p) {
  const Scalar y2 = p.y() * p.y();
  switch (tag) {
    case IntegralTag::H1:
    case IntegralTag::L1:
    case IntegralTag::M1:
      return p.x();
    case IntegralTag::H2:
      return p.z() + y2;
    case IntegralTag::L2:
      return p.z() - y2;
    case IntegralTag::M2:
      return p.z() >= Scalar(0) ? p.z() + y2 : p.z() - y2;
  }
  return Scalar(0);
}

}  // namespace psvf
