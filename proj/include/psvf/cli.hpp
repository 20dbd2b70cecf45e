#pragma once

#include <iosfwd>

#include "psvf/output.hpp"

namespace psvf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Trajectory rows (t, x, y, z, segment, side); segments split at the plane.
Table cmd_simulate(const RunConfig& cfg);

/// Rows (y, phi2, phi2_minus_y, dphi2[, phi2_numeric, abs_diff]).
Table cmd_poincare(const RunConfig& cfg);

/// Plane, cylinder and cycle records plus a "planes=.. cylinders=.. cycles=.." summary.
Table cmd_analyze(const RunConfig& cfg);

/// Long-format (eps, j, radius, multiplier, stability, detection, flag) table.
Table cmd_scan(const RunConfig& cfg);

/// Entry point shared by the executable and the tests. Returns the exit code:
/// 0 success, 1 configuration error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace psvf::cli
