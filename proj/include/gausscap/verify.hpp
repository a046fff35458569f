#pragma once

// Self-check run by `gausscap verify`: frozen reference capacities, threshold
// frequencies, critical constants, scenario labels, and agreement with the
// grid oracle on a small lattice. Needs no external data.

#include <iosfwd>
#include <vector>

namespace gausscap {

struct VerifyReport {
  int passed = 0;
  int failed = 0;
  bool ok() const { return failed == 0; }
};

struct LatticePoint {
  double tau, y, omega_env, n_bar;
};

/// tau evenly on [-2, 2], y = s * max(|1-tau|/2, 0.1) with s evenly on [1, 3],
/// omega_env evenly on [0.1, 1], n_bar in {0.1, 1, 5}.
std::vector<LatticePoint> oracle_lattice(int per_axis);

struct VerifyOptions {
  int oracle_resolution = 600;
  int lattice_per_axis = 3;  // tau, y and omega_env; n_bar uses {0.1, 1, 5}
};

VerifyReport run_verify(std::ostream& log, const VerifyOptions& opt = {});

}  // namespace gausscap
