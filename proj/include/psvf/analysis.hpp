#pragma once

// Detection and classification of the invariant objects created by the
// perturbations: planes x = i*mu, isolated cylinders (fixed points of the
// y-return map) and the limit cycles at their intersections.

#include <string_view>
#include <vector>

#include "psvf/return_map.hpp"

namespace psvf {

enum class PlaneStability { repelling, attracting };
enum class CylinderStability { attractor, repeller };
enum class CycleStability { attractor, repeller, saddle_type };
enum class Detection { numeric, analytic_only };

std::string_view to_string(PlaneStability s);
std::string_view to_string(CylinderStability s);
std::string_view to_string(CycleStability s);
std::string_view to_string(Detection d);

struct PlaneRecord {
  int index = 0;
  double location = 0.0;      // x = i * mu
  double x_multiplier = 1.0;  // exp(2 y_ref lambda Pi'(i mu))
  double reference_y = 0.0;
  PlaneStability stability = PlaneStability::repelling;
};

struct CylinderRecord {
  int index = 0;  // j in the closed-form root family
  double radius = 0.0;
  double y_multiplier = 1.0;
  CylinderStability stability = CylinderStability::repeller;
  Detection detection = Detection::numeric;
};

struct CycleRecord {
  int plane_index = 0;
  int cylinder_index = 0;
  SigmaPoint base;
  double x_multiplier = 1.0;
  double y_multiplier = 1.0;
  CycleStability stability = CycleStability::saddle_type;
  Detection detection = Detection::numeric;
};

/// Planes x = i mu, i = 0..L-1. Stability follows the sign of lambda Pi'(i mu):
/// positive means the plane repels in x. Requires lambda != 0, mu > 0, L >= 1.
std::vector<PlaneRecord> find_invariant_planes(const FieldParams& params, double reference_y);

struct CylinderSearch {
  double y_lo = 0.05;
  double y_hi = 1.0;
  int grid_n = 2000;
  /// Closed-form roots at or below y_lo appended as analytic-only records.
  int analytic_tail = 8;
};

/// Default window: (0.05 eps, 1.5 k eps) for the finite profile,
/// (eps^2 / (j_cutoff + 1/2), 1.5 eps^2) for the oscillating one and (0.05, 1)
/// when eps = 0.
CylinderSearch default_cylinder_search(const FieldParams& params, int j_cutoff = 3);

struct CylinderScan {
  std::vector<CylinderRecord> records;  // numeric first (by radius), then analytic-only
  bool degenerate_continuum = false;    // return map is the identity: no isolated cylinders
  double y_lo = 0.0;
  double y_hi = 0.0;
};

/// All fixed points of phi2 inside (y_lo, y_hi): sign changes of phi2(y) - y on
/// a uniform grid refined by bisection, classified by the return-map slope.
CylinderScan find_cylinders(const ReturnEngine& engine, const CylinderSearch& search);

struct CycleOptions {
  int j_cutoff = 3;  // cylinders kept for the oscillating profile
  int grid_n = 2000;
  IntegratorConfig integrator{};
};

/// Every (plane, cylinder) pair of the combined family, sorted by (i, j).
std::vector<CycleRecord> enumerate_limit_cycles(const FieldParams& params, const CycleOptions& options = {});

struct HyperbolicityReport {
  double analytic_x = 1.0;
  double analytic_y = 1.0;
  double fd_x = 1.0;
  double fd_y = 1.0;
  double rel_err_x = 0.0;
  double rel_err_y = 0.0;
  bool x_checked = false;  // |mult - 1| > 1e-7, so the comparison is meaningful
  bool y_checked = false;
  CycleStability fd_stability = CycleStability::saddle_type;
  bool ok = false;
};

/// Finite-difference multipliers (step 1e-5) of the engine's return map at the
/// record's base point, compared with the analytic ones at 1e-4 relative.
/// Throws NotHyperbolicNumerically when a finite-difference multiplier is
/// within 1e-12 of 1.
HyperbolicityReport verify_hyperbolicity(const CycleRecord& record, const ReturnEngine& engine);

struct EpsilonScan {
  double eps = 0.0;
  CylinderScan cylinders;
};

/// Cylinder detection for each eps in the list (values in [-0.5, 0.5]), using
/// the cylinder-only family with the profile and k taken from `params`.
/// Results are ordered by eps.
std::vector<EpsilonScan> scan_epsilon(const FieldParams& params, const std::vector<double>& eps_list,
                                      int grid_n = 2000, int j_cutoff = 3);

}  // namespace psvf
