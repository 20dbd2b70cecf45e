#pragma once

// Flat bump h(y) = exp(-1/y) and the two cylinder perturbation profiles built
// on it: a finite product with k roots and an oscillating profile with roots
// accumulating at y = 0. Everything is templated on the scalar so the same
// code runs in long double for cross-checks.

#include <cmath>
#include <numbers>
#include <vector>

#include "psvf/errors.hpp"

namespace psvf {

enum class Rho { finite, infinite };

struct BumpSpec {
  Rho rho = Rho::finite;
  double eps = 0.0;
  int k = 1;  // number of factors, finite profile only
};

/// Value together with first and second derivatives.
template <typename Scalar>
struct Jet2 {
  Scalar value{0};
  Scalar d1{0};
  Scalar d2{0};
};

/// Below this y the bump underflows to exactly zero in double precision.
inline constexpr double kBumpUnderflowY = 1.0 / 745.0;

inline bool bump_underflows(double y) { return y > 0.0 && std::exp(-1.0 / y) == 0.0; }

template <typename Scalar>
Scalar bump_h(Scalar y) {
  using std::exp;
  if (!(y > Scalar(0))) return Scalar(0);
  return exp(-Scalar(1) / y);
}

template <typename Scalar>
Jet2<Scalar> bump_jet(Scalar y) {
  if (!(y > Scalar(0))) return {};
  const Scalar h = bump_h(y);
  const Scalar y2 = y * y;
  // h' = h / y^2, h'' = h (1 - 2y) / y^4
  return {h, h / y2, h * (Scalar(1) - Scalar(2) * y) / (y2 * y2)};
}

/// Jet of prod_{m=1..k} (m*eps - y) with respect to y.
template <typename Scalar>
Jet2<Scalar> root_product_jet(Scalar y, double eps, int k) {
  Jet2<Scalar> p{Scalar(1), Scalar(0), Scalar(0)};
  for (int m = 1; m <= k; ++m) {
    const Scalar f = Scalar(static_cast<double>(m) * eps) - y;  // f' = -1, f'' = 0
    p = {p.value * f, p.d1 * f - p.value, p.d2 * f - Scalar(2) * p.d1};
  }
  return p;
}

template <typename Scalar>
Jet2<Scalar> xi_jet(const BumpSpec& spec, Scalar y) {
  using std::cos;
  using std::sin;
  if (!(y > Scalar(0))) return {};
  const Jet2<Scalar> h = bump_jet(y);
  if (spec.rho == Rho::finite) {
    const Jet2<Scalar> p = root_product_jet(y, spec.eps, spec.k);
    const Scalar e(spec.eps);
    return {e * h.value * p.value, e * (h.d1 * p.value + h.value * p.d1),
            e * (h.d2 * p.value + Scalar(2) * h.d1 * p.d1 + h.value * p.d2)};
  }
  // xi = -h(y) sin(u), u = pi eps^2 / y
  const Scalar c = Scalar(std::numbers::pi) * Scalar(spec.eps) * Scalar(spec.eps);
  const Scalar u = c / y;
  const Scalar du = -c / (y * y);
  const Scalar ddu = Scalar(2) * c / (y * y * y);
  const Scalar s = sin(u);
  const Scalar co = cos(u);
  const Scalar ds = co * du;
  const Scalar dds = -s * du * du + co * ddu;
  return {-h.value * s, -(h.d1 * s + h.value * ds),
          -(h.d2 * s + Scalar(2) * h.d1 * ds + h.value * dds)};
}

template <typename Scalar>
Scalar xi_eval(const BumpSpec& spec, Scalar y) {
  using std::sin;
  if (!(y > Scalar(0))) return Scalar(0);
  if (spec.rho == Rho::finite) {
    return Scalar(spec.eps) * bump_h(y) * root_product_jet(y, spec.eps, spec.k).value;
  }
  const Scalar c = Scalar(std::numbers::pi) * Scalar(spec.eps) * Scalar(spec.eps);
  return -bump_h(y) * sin(c / y);
}

template <typename Scalar>
Scalar xi_prime(const BumpSpec& spec, Scalar y) {
  return xi_jet(spec, y).d1;
}

template <typename Scalar>
Scalar xi_second(const BumpSpec& spec, Scalar y) {
  return xi_jet(spec, y).d2;
}

struct XiRoot {
  int j = 0;
  double y = 0.0;
  double slope = 0.0;  // closed-form derivative of xi at the root
};

/// Positive roots of xi in closed form, with their closed-form slopes.
/// The finite profile has roots j*eps (j = 1..k) only when eps > 0; the
/// oscillating profile has roots eps^2/j for every j >= 1 when eps != 0.
inline std::vector<XiRoot> xi_root_list(const BumpSpec& spec, int j_max) {
  std::vector<XiRoot> roots;
  if (spec.rho == Rho::finite) {
    if (j_max > spec.k) throw InvalidParams("xi_root_list: j_max exceeds k for the finite profile");
    if (!(spec.eps > 0.0)) return roots;
    // (-1)^j eps^k h(j eps) (k-j)! (j-1)!
    for (int j = 1; j <= j_max; ++j) {
      const double y = static_cast<double>(j) * spec.eps;
      const double magnitude = std::pow(spec.eps, spec.k) * bump_h(y) *
                               std::tgamma(spec.k - j + 1.0) * std::tgamma(static_cast<double>(j));
      roots.push_back({j, y, (j % 2 == 0 ? 1.0 : -1.0) * magnitude});
    }
    return roots;
  }
  if (j_max < 1) throw InvalidParams("xi_root_list: j_max must be >= 1");
  if (spec.eps == 0.0) return roots;
  const double e2 = spec.eps * spec.eps;
  // (-1)^{j+1} (-pi j^2 / eps^2) h(eps^2 / j)
  for (int j = 1; j <= j_max; ++j) {
    const double y = e2 / static_cast<double>(j);
    const double magnitude = std::numbers::pi * j * j / e2 * bump_h(y);
    roots.push_back({j, y, (j % 2 == 0 ? 1.0 : -1.0) * magnitude});
  }
  return roots;
}

/// prod_{i=0..L-1} (x - i mu) and its x-derivative.
template <typename Scalar>
struct PolyValue {
  Scalar value{1};
  Scalar derivative{0};
};

template <typename Scalar>
PolyValue<Scalar> product_poly(Scalar x, double mu, int L) {
  PolyValue<Scalar> p;
  for (int i = 0; i < L; ++i) {
    const Scalar f = x - Scalar(static_cast<double>(i) * mu);
    p = {p.value * f, p.derivative * f + p.value};
  }
  return p;
}

}  // namespace psvf
