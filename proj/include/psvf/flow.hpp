#pragma once

// Adaptive Dormand-Prince 5(4) integration of a single smooth field, with
// detection of the first return to the switching plane z = 0.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "psvf/classify.hpp"
#include "psvf/errors.hpp"
#include "psvf/field.hpp"

namespace psvf {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.01;
  double event_tol = 1e-12;
  double max_flight_time = 100.0;

  void validate() const {
    if (!(rel_tol > 0.0 && abs_tol > 0.0 && max_step > 0.0 && event_tol > 0.0 && max_flight_time > 0.0)) {
      throw InvalidParams("integrator tolerances, max-step and max-flight-time must be positive");
    }
    if (event_tol > 10.0 * abs_tol) throw InvalidParams("event-tol must not exceed 10 * abs-tol");
  }
};

struct Sample {
  double t = 0.0;
  State3 state = State3::Zero();
};

enum class HitSide { from_above, from_below };

struct SigmaHit {
  State3 point = State3::Zero();
  double time = 0.0;
  HitSide side = HitSide::from_above;
};

/// Smallest step the controller may take before giving up.
inline constexpr double kMinStep = 1e-14;
/// Fixed advance used to leave a tangency before sign monitoring starts.
inline constexpr double kFoldEscapeStep = 1e-6;

namespace detail {

template <typename Vec>
struct StepResult {
  Vec y;
  Vec err;
};

// Dormand-Prince 5(4) tableau.
template <typename Vec, typename Rhs>
StepResult<Vec> dopri_step(const Rhs& f, const Vec& y, double h) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                   a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                   e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  const Vec k1 = f(y);
  const Vec k2 = f(Vec(y + h * a21 * k1));
  const Vec k3 = f(Vec(y + h * (a31 * k1 + a32 * k2)));
  const Vec k4 = f(Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const Vec k5 = f(Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const Vec k6 = f(Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vec k7 = f(y5);
  const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {y5, err};
}

template <typename Vec>
double error_norm(const Vec& y0, const Vec& y1, const Vec& err, const IntegratorConfig& cfg) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y0.size(); ++i) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

/// Adaptive driver. After every accepted step `on_step(t0, y0, t1, y1, h)` is
/// called; returning true stops the integration. Integration also stops at
/// t_end. Returns the final (t, y).
template <typename Vec, typename Rhs, typename OnStep>
std::pair<double, Vec> drive(const Rhs& f, Vec y, double t_end, double h0, const IntegratorConfig& cfg,
                             OnStep&& on_step) {
  double t = 0.0;
  double h = std::clamp(h0, kMinStep, cfg.max_step);
  while (t < t_end) {
    const bool last = t + h >= t_end;
    const double step = last ? t_end - t : h;
    const StepResult<Vec> trial = dopri_step(f, y, step);
    const double en = error_norm(y, trial.y, trial.err, cfg);
    if (!trial.y.allFinite()) {
      h *= 0.25;
      if (h < kMinStep) throw StepFailure("integration produced non-finite state");
      continue;
    }
    if (en <= 1.0) {
      const double t_next = last ? t_end : t + step;
      const Vec y_prev = y;
      const double t_prev = t;
      y = trial.y;
      t = t_next;
      if (on_step(t_prev, y_prev, t, y, step)) break;
      const double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h = std::min(cfg.max_step, step * grow);
    } else {
      h = step * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.5);
      if (h < kMinStep) throw StepFailure("step size collapsed below 1e-14");
    }
  }
  return {t, y};
}

}  // namespace detail

/// Samples the flow of `w` from p0 over [0, T] at every accepted step.
inline std::vector<Sample> integrate(const SmoothField& w, const State3& p0, double T,
                                     const IntegratorConfig& cfg = {}) {
  cfg.validate();
  if (!std::isfinite(T) || T < 0.0) throw InvalidParams("integrate: T must be finite and non-negative");
  std::vector<Sample> samples{{0.0, p0}};
  if (T == 0.0) return samples;
  auto rhs = [&w](const State3& p) { return w(p); };
  detail::drive(rhs, p0, T, cfg.max_step, cfg, [&](double, const State3&, double t1, const State3& y1, double) {
    samples.push_back({t1, y1});
    return false;
  });
  return samples;
}

struct FlowSegment {
  std::vector<Sample> samples;  // empty unless requested
  std::optional<SigmaHit> hit;
  double end_time = 0.0;
  State3 end_state = State3::Zero();
};

/// Flows `w` from p0 until it reaches z = 0 from inside its own half-space, or
/// until t_limit. Starting points on the plane must be pushed into the field's
/// half-space; tangent starts are advanced by a fixed escape step first.
inline FlowSegment flow_to_sigma(const SmoothField& w, const State3& p0, const IntegratorConfig& cfg,
                                 double t_limit, bool keep_samples) {
  cfg.validate();
  const double s = w.side() == Side::upper ? 1.0 : -1.0;
  auto rhs = [&w](const State3& p) { return w(p); };

  FlowSegment seg;
  if (keep_samples) seg.samples.push_back({0.0, p0});

  State3 start = p0;
  double t_offset = 0.0;
  double h0 = cfg.max_step * 0.1;
  if (std::abs(p0.z()) <= cfg.event_tol) {
    const double rate = s * lie_derivative(w, p0);
    if (std::abs(rate) < 1e-10) {
      start = detail::dopri_step<State3>(rhs, p0, kFoldEscapeStep).y;
      t_offset = kFoldEscapeStep;
      if (!(s * start.z() > 0.0)) throw NoReturn("tangent start does not enter the field's half-space");
      if (keep_samples) seg.samples.push_back({t_offset, start});
    } else if (rate < 0.0) {
      throw NoReturn("field points out of its own half-space at the start point");
    } else {
      // Keep the first step inside the arc so the trivial root t = 0 is never bracketed.
      const double curvature = std::abs(second_lie_derivative(w, p0));
      h0 = std::min(h0, 0.1 * rate / std::max(curvature, 1e-300));
    }
  } else if (s * p0.z() < 0.0) {
    throw NoReturn("start point lies outside the field's half-space");
  }

  auto event = [&](double t0, const State3& y0, double h) {
    // Illinois regula falsi on g(tau) = s * z(one DP step of size tau from y0).
    double ta = 0.0, ga = s * y0.z();
    double tb = h;
    State3 yc = detail::dopri_step<State3>(rhs, y0, tb).y;
    double gb = s * yc.z();
    double tc = tb;
    int last = 0;
    for (int iter = 0; iter < 200 && gb != 0.0; ++iter) {
      tc = (ta * gb - tb * ga) / (gb - ga);
      if (!(tc > ta && tc < tb)) tc = 0.5 * (ta + tb);
      yc = detail::dopri_step<State3>(rhs, y0, tc).y;
      const double gc = s * yc.z();
      if (std::abs(gc) <= 1e-2 * cfg.event_tol || (tb - ta) <= 4e-16 * std::max(1.0, t0 + tb)) break;
      if (gc > 0.0) {
        ta = tc;
        ga = gc;
        if (last == 1) gb *= 0.5;
        last = 1;
      } else {
        tb = tc;
        gb = gc;
        if (last == -1) ga *= 0.5;
        last = -1;
      }
    }
    SigmaHit hit;
    hit.point = yc;
    hit.time = t_offset + t0 + tc;
    hit.side = s > 0.0 ? HitSide::from_above : HitSide::from_below;
    return hit;
  };

  const double budget = t_limit - t_offset;
  if (budget <= 0.0) {
    seg.end_time = t_offset;
    seg.end_state = start;
    return seg;
  }
  auto [t_end, y_end] = detail::drive(rhs, start, budget, h0, cfg,
                                      [&](double t0, const State3& y0, double t1, const State3& y1, double h) {
                                        if (s * y1.z() <= 0.0) {
                                          seg.hit = event(t0, y0, h);
                                          if (keep_samples) seg.samples.push_back({seg.hit->time, seg.hit->point});
                                          return true;
                                        }
                                        if (keep_samples) seg.samples.push_back({t_offset + t1, y1});
                                        return false;
                                      });
  seg.end_time = seg.hit ? seg.hit->time : t_offset + t_end;
  seg.end_state = seg.hit ? seg.hit->point : y_end;
  return seg;
}

/// Smallest t > 0 at which the orbit of `w` from p0 returns to z = 0.
/// Throws NoReturn when nothing is found before cfg.max_flight_time.
inline SigmaHit first_sigma_crossing(const SmoothField& w, const State3& p0, const IntegratorConfig& cfg = {}) {
  FlowSegment seg = flow_to_sigma(w, p0, cfg, cfg.max_flight_time, false);
  if (!seg.hit) throw NoReturn("no return to the switching plane within max-flight-time");
  return *seg.hit;
}

/// x(T) for dx/dt = lambda * prod_{i<L} (x - i mu), x(0) = x0.
inline double scalar_flow(double lambda, double mu, int L, double x0, double T, const IntegratorConfig& cfg = {}) {
  cfg.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidParams("scalar_flow: T must be finite and non-negative");
  if (T == 0.0 || lambda == 0.0) return x0;
  using Vec1 = Eigen::Matrix<double, 1, 1>;
  const double bound = 10.0 * L * mu;
  if (std::abs(x0) > bound) throw Blowup("scalar_flow: start lies outside |x| <= 10 L mu");
  auto rhs = [&](const Vec1& x) { return Vec1(lambda * product_poly(x[0], mu, L).value); };
  auto [t, x] = detail::drive(rhs, Vec1(x0), T, cfg.max_step * 0.1, cfg,
                              [&](double, const Vec1&, double, const Vec1& x1, double) {
                                if (std::abs(x1[0]) > bound) throw Blowup("scalar_flow: |x| exceeded 10 L mu");
                                return false;
                              });
  return x[0];
}

}  // namespace psvf
