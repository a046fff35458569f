#pragma once

// Single-mode Gaussian states and the fiducial channel in frequency
// representation. A diagonal covariance matrix is written as
//
//   V = (m + 1/2) * diag(1/omega, omega),
//
// where m is the number of thermal photons (symplectic eigenvalue minus 1/2)
// and omega is the squeezing "frequency" (omega = 1 is thermal).

#include <stdexcept>
#include <string>

namespace gausscap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// tau = 0: the output does not depend on the input.
class DegenerateChannel : public Error {
 public:
  using Error::Error;
};

/// The parameters violate complete positivity, y >= |1 - tau| / 2.
class UnphysicalChannel : public Error {
 public:
  UnphysicalChannel(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  /// y - |1 - tau|/2; negative by construction.
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// Entropy of a thermal state with x photons, in bits.
/// g(x) = (x+1) log2(x+1) - x log2(x), g(0) = 0.
double g(double x);

/// dg/dx = log2((x+1)/x) for x > 0.
double g_prime(double x);

/// Inverse temperature of a state with m thermal photons at frequency omega,
/// the inverse of the Bose-Einstein relation m = 1/(exp(omega*beta) - 1).
/// Returns +infinity for a pure state (m == 0).
double beta(double m, double omega);

/// Symmetric 2x2 covariance matrix.
struct CovMat2 {
  double vqq = 0.5;
  double vpp = 0.5;
  double vqp = 0.0;

  double det() const { return vqq * vpp - vqp * vqp; }
  double trace() const { return vqq + vpp; }
  bool is_diagonal() const { return vqp == 0.0; }
  /// Heisenberg bound det V >= 1/4 (with a small relative slack).
  bool is_quantum(double rel_tol = 1e-12) const;
};

/// General real 2x2 matrix, row-major.
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
};

/// Thermal photons of a covariance matrix, sqrt(det V) - 1/2. Round-off
/// below zero (within 1e-12) is clamped to 0.
double thermal_photons(const CovMat2& v);

/// A diagonal single-mode Gaussian state.
class ModeState {
 public:
  ModeState(double m, double omega);

  static ModeState vacuum() { return {0.0, 1.0}; }
  static ModeState from_covariance(const CovMat2& v);

  double m() const { return m_; }
  double omega() const { return omega_; }
  bool is_pure() const { return m_ == 0.0; }
  CovMat2 covariance() const;

 private:
  double m_;
  double omega_;
};

/// Mean photon number, (Tr V - 1)/2.
double photon_number(const ModeState& state);
double photon_number(const CovMat2& v);

/// Mean photon budget of the modulated input ensemble.
class EnergyBudget {
 public:
  explicit EnergyBudget(double n_bar);
  double n_bar() const { return n_bar_; }

 private:
  double n_bar_;
};

/// The canonical single-mode channel
///   X_F = diag(sqrt|tau|, sgn(tau) sqrt|tau|),  Y_F = y diag(1/omega_env, omega_env)
/// with omega_env canonicalised to (0, 1]. A channel given with the q-quadrature
/// of the noise squeezed (omega_env > 1) is stored with the quadratures swapped.
class FiducialChannel {
 public:
  /// From environment photons: y = |1-tau|(m_env+1/2) for tau != 1, y = m_env
  /// for tau = 1 (additive classical noise).
  static FiducialChannel from_environment(double tau, double m_env, double omega_env);

  /// From the noise magnitude directly; used where y is held fixed while tau
  /// varies.
  static FiducialChannel from_noise(double tau, double y, double omega_env);

  /// The family y = |1-tau|(m_env+1/2) for every tau, including tau = 1 (the
  /// perfect channel). Channels concatenate within this family.
  static FiducialChannel pure_family(double tau, double m_env, double omega_env);

  double tau() const { return tau_; }
  double y() const { return y_; }
  double omega_env() const { return omega_env_; }
  bool quadratures_swapped() const { return swapped_; }

  /// Environment thermal photons implied by (tau, y).
  double m_env() const;

  /// Physicality floor |1-tau|/2 for y.
  double noise_floor() const;

  bool is_perfect() const { return tau_ == 1.0 && y_ == 0.0; }
  bool is_degenerate() const { return tau_ == 0.0; }

  Mat2 scaling() const;
  CovMat2 noise() const;

 private:
  FiducialChannel(double tau, double y, double omega_env);

  double tau_;
  double y_;
  double omega_env_;
  bool swapped_ = false;
};

/// Throws UnphysicalChannel if (tau, y) violates y >= |1-tau|/2.
void check_physical(double tau, double y);

/// Reduces a channel given by (X, Y) to fiducial parameters:
/// tau = det X, y = sqrt(det Y), omega_env from the principal variances of Y.
/// Complete positivity Y + (i/2)(Omega - X Omega X^T) >= 0 is checked; for a
/// single mode X Omega X^T = det(X) Omega, so the condition is det Y >= ((1-tau)/2)^2.
FiducialChannel normalize_channel(const Mat2& x, const CovMat2& y);

/// V -> X V X^T + Y. For the fiducial channel X V X^T = |tau| V on the
/// diagonal; a phase-conjugating channel flips the sign of the off-diagonal.
CovMat2 apply_channel(const FiducialChannel& ch, const CovMat2& v);

}  // namespace gausscap
