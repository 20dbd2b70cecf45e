#pragma once

// Half-return and full return maps on the switching plane. Two independent
// routes are provided: direct numerical integration with event detection, and
// a semi-analytic route that uses the fact that every lower field is
// (0, 1, g(y)), so its orbits are vertical translates of the graph of a
// primitive G of g, and that the upper y,z-dynamics are a fixed parabola.

#include <cmath>
#include <string_view>

#include "psvf/field.hpp"
#include "psvf/flow.hpp"

namespace psvf {

enum class ReturnMode { numeric, semi_analytic };

std::string_view to_string(ReturnMode mode);

struct RootConfig {
  double newton_tol = 1e-14;
  int max_iter = 50;
  double bracket_expansion = 2.0;
};

/// G with G' = z_rate and G(0) = 0: y^2, or y^2 + xi(y).
inline double primitive_graph(const SmoothField& lower, double y) {
  return y * y + (lower.y_perturbed() ? xi_eval(lower.bump(), y) : 0.0);
}

class ReturnEngine {
 public:
  ReturnEngine(Psvf z, ReturnMode mode, IntegratorConfig cfg = {}, RootConfig root = {});

  const Psvf& field() const { return z_; }
  ReturnMode mode() const { return mode_; }
  const IntegratorConfig& integrator() const { return cfg_; }

  /// Upper arc from (x, y), y > 0, to its landing point (x', -y).
  SigmaPoint half_return_upper(SigmaPoint p) const;

  /// Lower arc from (x, y), y < 0, to its landing point (x, y') with y' > 0.
  SigmaPoint half_return_lower(SigmaPoint p) const;

  /// Lower half-return composed with the upper one.
  SigmaPoint full_return(SigmaPoint p) const;

  /// y-component of the full return for the starting height y > 0.
  double phi2(double y) const;

  /// phi2(y) - y. The semi-analytic route evaluates it as -xi(w) / (w + y),
  /// which keeps full relative accuracy when the displacement is tiny.
  double displacement(double y) const;

  /// y^2 - w^2 - xi(w); zero exactly when w = phi2(y).
  double phi2_implicit_residual(double y, double w) const;

  /// d phi2 / dy at an arbitrary y > 0: 2y / (2w + xi'(w)) with w = phi2(y).
  double phi2_slope(double y) const;

  /// d phi2 / dy at a fixed point: 2y / (2y + xi'(y)).
  double phi2_derivative(double y_star) const;

 private:
  double solve_lower_return(double y_neg) const;

  Psvf z_;
  ReturnMode mode_;
  IntegratorConfig cfg_;
  RootConfig root_;
};

}  // namespace psvf
