#pragma once

// Gaussian capacity of the fiducial channel.
//
// Above the input energy threshold the optimum is the water-filling solution:
// the modulated output is thermal and the input squeezing matches the noise
// (omega_in = omega_env = omega_out), giving a closed form. Below the threshold
// only the p-quadrature is modulated and the optimal omega_in is the root of a
// transcendental stationarity condition in the output inverse temperatures.

#include <string_view>

#include "gausscap/core.hpp"

namespace gausscap {

enum class Regime { AboveThreshold, BelowThreshold, Degenerate };

std::string_view to_string(Regime r);

/// Raised when the transcendental root cannot be bracketed or refined.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double lo, double hi)
      : Error(what), bracket_lo_(lo), bracket_hi_(hi) {}
  double bracket_lo() const noexcept { return bracket_lo_; }
  double bracket_hi() const noexcept { return bracket_hi_; }

 private:
  double bracket_lo_;
  double bracket_hi_;
};

struct SolverConfig {
  double abs_tol = 1e-12;  ///< root tolerance on omega_in
  int max_iter = 200;
  int bracket_grid = 64;   ///< sign-scan points over the feasible bracket

  void validate() const;
};

/// Optimal Gaussian encoding and the capacity it achieves.
struct CapacitySolution {
  Regime regime = Regime::AboveThreshold;
  double capacity_bits = 0.0;
  double omega_in = 1.0;       ///< pure input letter state
  double omega_bar_in = 1.0;   ///< modulated (average) input
  double m_bar_in = 0.0;
  double omega_out = 1.0;
  double m_out = 0.0;
  double omega_bar_out = 1.0;
  double m_bar_out = 0.0;
  double beta_out = 0.0;       ///< +inf for a pure output
  double beta_bar_out = 0.0;
  double n_bar_out = 0.0;      ///< mean photons of the modulated output
  double residual = 0.0;       ///< stationarity residual at the root; 0 for closed forms
  int root_count = 0;          ///< sign changes seen by the scan (below threshold)
};

/// Input photon budget above which water-filling is feasible:
///   N_thr = [1 + (y/|tau|)|1 - omega_env^2|] / (2 omega_env) - 1/2.
double energy_threshold(const FiducialChannel& ch);

/// Noise frequency at which a budget n_bar sits exactly on the threshold; the
/// positive inverse of energy_threshold in omega_env. Lies in (0, 1].
double threshold_frequency(double tau, double y, double n_bar);

/// Closed-form water-filling solution. Requires n_bar >= energy_threshold(ch).
CapacitySolution capacity_above(const FiducialChannel& ch, const EnergyBudget& n);

/// Feasible omega_in for single-quadrature modulation: the q-variance is left
/// unmodulated and the p-modulation 2N+1 - omega/2 - 1/(2 omega) must be >= 0,
/// which holds on [1/w, w] with w = 2N+1 + sqrt((2N+1)^2 - 1).
struct FeasibleInterval {
  double lo;
  double hi;
};
FeasibleInterval feasible_input_frequencies(double n_bar);

/// Output quantities of the single-quadrature encoding at a given omega_in.
struct BelowPoint {
  double omega_out, omega_bar_out;
  double m_out, m_bar_out;
  double beta_out, beta_bar_out;
  double chi_bits;
};
BelowPoint evaluate_below(double omega_in, const FiducialChannel& ch, const EnergyBudget& n);

/// Stationarity residual
///   F(omega_in) = beta_bar_out (1 - omega_bar_out^2) - beta_out (omega_in^2 - omega_out^2).
double below_residual(double omega_in, const FiducialChannel& ch, const EnergyBudget& n);

/// Root of below_residual by sign scan and bisection. Requires
/// n_bar < energy_threshold(ch) and omega_env < 1.
CapacitySolution capacity_below(const FiducialChannel& ch, const EnergyBudget& n,
                                 const SolverConfig& cfg = {});

/// Regime dispatch. tau = 0 gives Degenerate with zero capacity; the perfect
/// channel gives g(n_bar).
CapacitySolution capacity(const FiducialChannel& ch, const EnergyBudget& n,
                          const SolverConfig& cfg = {});

}  // namespace gausscap
