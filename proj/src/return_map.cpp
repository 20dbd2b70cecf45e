#include "psvf/return_map.hpp"

#include <algorithm>
#include <utility>

namespace psvf {

std::string_view to_string(ReturnMode mode) { return mode == ReturnMode::numeric ? "numeric" : "semi-analytic"; }

ReturnEngine::ReturnEngine(Psvf z, ReturnMode mode, IntegratorConfig cfg, RootConfig root)
    : z_(std::move(z)), mode_(mode), cfg_(cfg), root_(root) {
  cfg_.validate();
}

SigmaPoint ReturnEngine::half_return_upper(SigmaPoint p) const {
  if (!(p.y > 0.0)) throw InvalidParams("half_return_upper: requires y > 0");
  if (mode_ == ReturnMode::numeric) {
    const SigmaHit hit = first_sigma_crossing(z_.upper, p.lift(), cfg_);
    return {hit.point.x(), hit.point.y()};
  }
  // The y,z-subsystem of every upper field is the parabola z = 2yt - t^2,
  // which lands at (-y) after flight time 2y; x follows its own scalar flow.
  const SmoothField& up = z_.upper;
  const double x = up.x_perturbed() ? scalar_flow(up.lambda(), up.mu(), up.L(), p.x, 2.0 * p.y, cfg_) : p.x;
  return {x, -p.y};
}

SigmaPoint ReturnEngine::half_return_lower(SigmaPoint p) const {
  if (!(p.y < 0.0)) throw InvalidParams("half_return_lower: requires y < 0");
  if (mode_ == ReturnMode::numeric) {
    const SigmaHit hit = first_sigma_crossing(z_.lower, p.lift(), cfg_);
    return {hit.point.x(), hit.point.y()};
  }
  return {p.x, solve_lower_return(p.y)};
}

SigmaPoint ReturnEngine::full_return(SigmaPoint p) const { return half_return_lower(half_return_upper(p)); }

double ReturnEngine::phi2(double y) const { return full_return({0.0, y}).y; }

double ReturnEngine::displacement(double y) const {
  if (mode_ == ReturnMode::numeric) return phi2(y) - y;
  const double w = solve_lower_return(-y);
  if (!z_.lower.y_perturbed()) return w - y;
  return -xi_eval(z_.lower.bump(), w) / (w + y);
}

double ReturnEngine::phi2_implicit_residual(double y, double w) const {
  const double xi = z_.lower.y_perturbed() ? xi_eval(z_.lower.bump(), w) : 0.0;
  return y * y - w * w - xi;
}

double ReturnEngine::phi2_slope(double y) const {
  if (!(y > 0.0)) throw InvalidParams("phi2_slope: requires y > 0");
  const double w = solve_lower_return(-y);
  const double den = z_.lower.z_rate(w);
  if (std::abs(den) < 1e-300) throw SingularDenominator("phi2_slope: 2w + xi'(w) vanishes");
  return 2.0 * y / den;
}

double ReturnEngine::phi2_derivative(double y_star) const {
  if (!(y_star > 0.0)) throw InvalidParams("phi2_derivative: requires y* > 0");
  if (std::abs(phi2_implicit_residual(y_star, y_star)) >= 1e-12) {
    throw InvalidParams("phi2_derivative: y* is not a fixed point of the return map");
  }
  const double den = z_.lower.z_rate(y_star);
  if (std::abs(den) < 1e-300) throw SingularDenominator("phi2_derivative: 2y* + xi'(y*) vanishes");
  return 2.0 * y_star / den;
}

double ReturnEngine::solve_lower_return(double y_neg) const {
  const double target = y_neg * y_neg;  // G(y) = y^2 for y <= 0
  const double mirror = -y_neg;
  if (!z_.lower.y_perturbed()) return mirror;
  const BumpSpec& bump = z_.lower.bump();
  auto F = [&](double w) { return w * w + xi_eval(bump, w) - target; };

  double w = mirror;
  for (int iter = 0; iter < root_.max_iter; ++iter) {
    const double dF = 2.0 * w + xi_prime(bump, w);
    if (dF == 0.0 || !std::isfinite(dF)) break;
    const double step = F(w) / dF;
    w -= step;
    if (!(w > 0.0)) break;
    if (std::abs(step) <= root_.newton_tol * w) {
      if (w > 0.0 && w < 2.0 * mirror) return w;
      break;
    }
  }

  double lo = mirror / root_.bracket_expansion;
  double hi = mirror * root_.bracket_expansion;
  double flo = F(lo);
  const double fhi = F(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw RootNotBracketed("lower half-return: no sign change of G(w) - G(y) on the fallback bracket");
  }
  for (int iter = 0; iter < 200 && hi - lo > 2e-16 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = F(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace psvf
