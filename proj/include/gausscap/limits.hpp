#pragma once

// Asymptotic capacities and channel concatenation.

#include <map>
#include <string>

#include "gausscap/capacity.hpp"

namespace gausscap {

struct LimitResult {
  double value_bits = 0.0;
  Regime regime = Regime::AboveThreshold;
  std::map<std::string, double> auxiliary;  // threshold, n_env, e_p, omega_in
};

/// Capacity as |tau| -> infinity at fixed environment (m_env, omega_env).
/// Threshold: [1 + (m_env+1/2)(1 - omega_env^2)] / (2 omega_env) - 1/2.
/// Above it log2((N + N_env + 1)/(m_env + 1)); below it -log2(omega_in) with
/// omega_in = 1 / (sqrt(1 + (2N+1)/e_p + 1/(4 e_p^2)) - 1/(2 e_p)),
/// e_p = (m_env+1/2) omega_env.
LimitResult capacity_limit_tau_inf(double m_env, double omega_env, double n_bar);

/// log2(1 + 2N): infinitely squeezed noise leaves one noiseless quadrature,
/// twice the classical Shannon rate of a single real channel at that SNR.
double capacity_limit_squeeze(double n_bar);

/// Effective channel of ch1 followed by ch2. Both must share the
/// environment (m_env, omega_env) and (tau1, tau2) must fall into one of
/// tau1, tau2 >= 1; tau1, tau2 in [0, 1]; tau1 < 0, tau2 in [0, 1].
/// A perfect channel composes with anything. The result is checked against
/// the matrix-level composition on a few probe states.
FiducialChannel compose(const FiducialChannel& ch1, const FiducialChannel& ch2);

struct PipelineReport {
  double c_first = 0.0;
  double c_second = 0.0;
  double c_composed = 0.0;
  bool holds = false;  // c_composed <= min(c_first, c_second) + 1e-9
  // c_composed <= c_first + 1e-9. ch2 only post-processes ch1's output, so
  // this one always holds. The bound by c_second can fail when ch1 raises the
  // mean photon number (tau1 < 0 or tau1 > 1): ch2 then sees more than n_bar.
  bool first_bound = false;
};

PipelineReport pipelining_check(const FiducialChannel& ch1, const FiducialChannel& ch2,
                                double n_bar, const SolverConfig& cfg = {});

}  // namespace gausscap
