#include "psvf/classify.hpp"

#include <sstream>

namespace psvf {

std::string_view to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::crossing_up:
      return "crossing-up";
    case SigmaKind::crossing_down:
      return "crossing-down";
    case SigmaKind::sliding:
      return "sliding";
    case SigmaKind::escaping:
      return "escaping";
    case SigmaKind::fold_upper:
      return "fold-upper";
    case SigmaKind::fold_lower:
      return "fold-lower";
    case SigmaKind::two_fold:
      return "two-fold";
  }
  return "?";
}

std::string_view to_string(Visibility v) { return v == Visibility::visible ? "visible" : "invisible"; }

namespace {

std::string describe(const State3& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x() << ", " << p.y() << ", " << p.z() << ")";
  return os.str();
}

}  // namespace

SigmaClass classify_sigma_point(const Psvf& z, const State3& p, const ClassifyOptions& opt) {
  if (std::abs(p.z()) > opt.sigma_tol) throw OffSigma("classify_sigma_point: point " + describe(p) + " is not on the switching plane");

  const double a = lie_derivative(z.upper, p);
  const double b = lie_derivative(z.lower, p);
  const bool upper_fold = std::abs(a) < opt.vanish_tol;
  const bool lower_fold = std::abs(b) < opt.vanish_tol;

  SigmaClass out;
  if (upper_fold) {
    const double a2 = second_lie_derivative(z.upper, p);
    if (std::abs(a2) < opt.vanish_tol) throw DegenerateTangency("upper field has a degenerate tangency at " + describe(p));
    out.upper = a2 > 0.0 ? Visibility::visible : Visibility::invisible;
  }
  if (lower_fold) {
    const double b2 = second_lie_derivative(z.lower, p);
    if (std::abs(b2) < opt.vanish_tol) throw DegenerateTangency("lower field has a degenerate tangency at " + describe(p));
    out.lower = b2 < 0.0 ? Visibility::visible : Visibility::invisible;
  }

  if (upper_fold && lower_fold) {
    out.kind = SigmaKind::two_fold;
  } else if (upper_fold) {
    out.kind = SigmaKind::fold_upper;
  } else if (lower_fold) {
    out.kind = SigmaKind::fold_lower;
  } else if (a * b > 0.0) {
    out.kind = a > 0.0 ? SigmaKind::crossing_up : SigmaKind::crossing_down;
  } else if (a < 0.0) {
    out.kind = SigmaKind::sliding;
  } else {
    out.kind = SigmaKind::escaping;
  }
  return out;
}

}  // namespace psvf
