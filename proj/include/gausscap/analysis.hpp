#pragma once

// Shape of the capacity as a function of the noise frequency omega_env:
// extrema, small-omega_env expansion, critical constants, scenario labels,
// and parameter sweeps.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gausscap/capacity.hpp"

namespace gausscap {

enum class ExtremumKind { Max, Min, Saddle };
enum class ScenarioKind { Monotonic, OneMaximum, Saddle, MaxThenMin };

std::string_view to_string(ExtremumKind k);
std::string_view to_string(ScenarioKind k);

struct Extremum {
  double omega_env = 0.0;
  ExtremumKind kind = ExtremumKind::Max;
  bool confirmed = false;  // a local capacity sweep agrees with the label
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Monotonic;
  // ascending in omega_env, all in (0, omega_thr). For MaxThenMin the Min
  // comes first in this order.
  std::vector<Extremum> extrema;
  bool fast_path = false;
  bool irregular = false;  // extremum pattern did not match any known shape
};

struct CriticalConstants {
  double y_c;
  double tau_c_minus, tau_c_plus;  // depend on m_env
  double tau_tilde_c;              // depends on n_bar
  double tau_L, tau_R;
  double tau_tilde_L, tau_tilde_R;
  double n_c, m_c;
};

CriticalConstants critical_constants(double n_bar, double m_env);

/// C(omega_env) = log2(1+2N) + a w + b w^2 + c w^3 + ...,
/// omega_in(omega_env) = w_inf + alpha w + beta_coef w^2 + ...
struct TaylorCoeffs {
  double a = 0.0, b = 0.0, c = 0.0;
  double alpha = 0.0, beta_coef = 0.0;
  double fd_slope = 0.0;      // (C(2e-4) - C(1e-4)) / 1e-4 from the solver
  bool sign_mismatch = false; // sign(a) disagrees with fd_slope; trust fd_slope
};

TaylorCoeffs taylor_coefficients(double tau, double y, double n_bar);

/// Stationarity of C with respect to omega_env, evaluated on the small-squeezing
/// branch where the optimal letter is omega_in = 1/(1+2N): the single-quadrature
/// residual at that letter for noise frequency omega_env. Its interior roots in
/// (0, omega_thr) are the extrema of the capacity curve. Vanishes as omega_env -> 0.
double extremum_residual(double omega_env, double tau, double y, double n_bar);

/// Interior extrema of C(omega_env) on (0, omega_thr); roots closer than 1e-4
/// are merged into one Saddle.
std::vector<Extremum> find_extrema(double tau, double y, double n_bar);

/// Noise magnitude at which the maximum and minimum merge into a saddle, for
/// this tau and n_bar. Empty if the curve has no such transition above y_c.
std::optional<double> saddle_noise(double tau, double n_bar);

/// Fast paths first, then the numeric path.
Scenario classify_scenario(double tau, double y, double n_bar);

/// Numeric classification only (root scan plus saddle proximity), no fast paths.
Scenario classify_numeric(double tau, double y, double n_bar);

// ---------------------------------------------------------------- sweeps

enum class SweepParam { OmegaEnv, Tau, NBar, Y, MEnv };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view name);

/// Channel and budget held fixed during a sweep. Exactly one of m_env, y is
/// set. Sweeping tau at fixed m_env uses the family y = |1-tau|(m_env+1/2),
/// so tau = 1 is the perfect channel; every other family uses the
/// environment parametrization.
struct SweepBase {
  double tau = 1.0;
  std::optional<double> m_env;
  std::optional<double> y;
  double omega_env = 1.0;
  double n_bar = 1.0;
};

struct SweepSpec {
  SweepParam param = SweepParam::OmegaEnv;
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;
  bool log_spacing = false;
  SweepBase base;
  SolverConfig solver;

  void validate() const;
  std::vector<double> points() const;
};

struct SweepRow {
  double param = 0.0;
  std::string status = "ok";  // ok | unphysical | degenerate | domain | solver
  std::string message;
  double tau = 0.0, y = 0.0, omega_env = 1.0, n_bar = 0.0;
  CapacitySolution solution;
  double n_bar_thr = 0.0;
  double omega_thr = 0.0;
  bool regime_change = false;  // regime differs from the previous ok row
};

struct SweepTable {
  SweepParam param = SweepParam::OmegaEnv;
  std::vector<SweepRow> rows;
  std::optional<double> crossing;  // omega_thr or N_thr if inside [lo, hi]
};

/// Rows are computed in parallel and returned in parameter order. A failing
/// point becomes a row with a non-ok status; the sweep continues.
SweepTable sweep_capacity(const SweepSpec& spec);

/// Builds the channel for one sweep point.
FiducialChannel sweep_channel(const SweepSpec& spec, double value);

struct ZoneCell {
  double tau, y;
  std::string label;  // scenario name, or "unphysical"
};

/// Scenario labels on a (tau, y) lattice at fixed n_bar, tau outer, y inner.
std::vector<ZoneCell> zone_map(double n_bar, double tau_lo, double tau_hi, int tau_steps,
                               double y_lo, double y_hi, int y_steps);

}  // namespace gausscap
