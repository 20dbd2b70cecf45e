#include "psvf/field.hpp"

#include <cmath>

namespace psvf {

std::string_view to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::z0:
      return "z0";
    case FamilyTag::z_l:
      return "z_l";
    case FamilyTag::z_eps:
      return "z_eps";
    case FamilyTag::z_kl:
      return "z_kl";
  }
  return "?";
}

FamilyTag family_from_string(std::string_view name) {
  if (name == "z0") return FamilyTag::z0;
  if (name == "z_l") return FamilyTag::z_l;
  if (name == "z_eps") return FamilyTag::z_eps;
  if (name == "z_kl") return FamilyTag::z_kl;
  throw InvalidParams("unknown family '" + std::string(name) + "' (expected z0, z_l, z_eps or z_kl)");
}

void validate(FamilyTag tag, const FieldParams& p) {
  const bool planes = tag == FamilyTag::z_l || tag == FamilyTag::z_kl;
  const bool cylinders = tag == FamilyTag::z_eps || tag == FamilyTag::z_kl;
  if (planes) {
    if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw InvalidParams("mu must be > 0 when the x-perturbation is active");
    if (p.L < 1) throw InvalidParams("L must be >= 1");
    if (!std::isfinite(p.lambda)) throw InvalidParams("lambda must be finite");
  }
  if (cylinders) {
    if (!std::isfinite(p.eps)) throw InvalidParams("eps must be finite");
    if (p.rho == Rho::finite && p.k < 1) throw InvalidParams("k must be >= 1 for the finite profile");
  }
}

Psvf make_family(FamilyTag tag, FieldParams params) {
  validate(tag, params);
  const bool planes = tag == FamilyTag::z_l || tag == FamilyTag::z_kl;
  const bool cylinders = tag == FamilyTag::z_eps || tag == FamilyTag::z_kl;
  if (!planes) params.lambda = 0.0;
  if (!cylinders) params.eps = 0.0;

  Psvf z;
  z.tag = tag;
  z.params = params;
  z.upper = planes ? SmoothField::upper(params.lambda, params.mu, params.L) : SmoothField::upper();
  z.lower = cylinders ? SmoothField::lower(params.bump()) : SmoothField::lower();
  return z;
}

}  // namespace psvf
