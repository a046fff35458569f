#pragma once

// Brute-force maximisation of the Holevo quantity over diagonal Gaussian
// encodings. Independent of the stationarity conditions used by the capacity
// engine; it only evaluates entropies on a grid.

#include "gausscap/core.hpp"

namespace gausscap {

/// A pure input letter with frequency omega_in, displaced by a Gaussian
/// distribution that adds mod_q and mod_p to the two quadrature variances.
struct EncodingPoint {
  double omega_in = 1.0;
  double mod_q = 0.0;
  double mod_p = 0.0;

  /// 1/(2 omega_in) + omega_in/2 + mod_q + mod_p, i.e. 2N+1 of the ensemble.
  double energy_trace() const;
};

/// chi = g(M_bar_out) - g(M_out) for V_out = |tau| V_in + Y_F and
/// V_bar_out = V_out + |tau| diag(mod_q, mod_p).
double chi_g(const FiducialChannel& ch, const EncodingPoint& pt);

struct OracleResult {
  double capacity_bits = 0.0;
  EncodingPoint argmax;
  double split = 0.0;  ///< fraction of the modulation on q
};

/// Grid search over (omega_in, split) with mod_q = f R, mod_p = (1-f) R and
/// R = 2N+1 - omega_in/2 - 1/(2 omega_in). omega_in runs geometrically over
/// the interval where R >= 0 (clipped to [1e-3, 1e3]); one refinement pass
/// shrinks both axes tenfold around the incumbent. Ties resolve to the
/// smallest omega_in, then the smallest split.
OracleResult grid_search(const FiducialChannel& ch, const EnergyBudget& n, int resolution);

double grid_capacity(const FiducialChannel& ch, const EnergyBudget& n, int resolution);

}  // namespace gausscap
