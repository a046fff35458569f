#include "gausscap/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gausscap {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

}  // namespace

double g(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("g(x) requires finite x >= 0");
  }
  if (x == 0.0) return 0.0;
  // log2(x+1) + x log2(1 + 1/x); avoids cancelling two large terms.
  return (std::log1p(x) + x * std::log1p(1.0 / x)) / std::numbers::ln2;
}

double g_prime(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("g'(x) requires finite x > 0");
  }
  return std::log1p(1.0 / x) / std::numbers::ln2;
}

double beta(double m, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("beta requires omega > 0");
  }
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw DomainError("beta requires m >= 0");
  }
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return std::log1p(1.0 / m) / omega;
}

bool CovMat2::is_quantum(double rel_tol) const {
  return vqq > 0.0 && vpp > 0.0 && det() >= 0.25 * (1.0 - rel_tol);
}

double thermal_photons(const CovMat2& v) {
  const double m = std::sqrt(v.det()) - 0.5;
  if (m < 0.0) {
    if (m > -1e-12) return 0.0;
    throw DomainError("covariance matrix violates det V >= 1/4");
  }
  return m;
}

ModeState::ModeState(double m, double omega) : m_(m), omega_(omega) {
  require_finite(m, "m");
  require_finite(omega, "omega");
  if (m < 0.0) throw DomainError("thermal photons m must be >= 0");
  if (omega <= 0.0) throw DomainError("frequency omega must be > 0");
}

ModeState ModeState::from_covariance(const CovMat2& v) {
  if (!v.is_diagonal()) {
    throw DomainError("ModeState::from_covariance expects a diagonal matrix");
  }
  if (!(v.vqq > 0.0 && v.vpp > 0.0)) {
    throw DomainError("covariance matrix must be positive definite");
  }
  return {thermal_photons(v), std::sqrt(v.vpp / v.vqq)};
}

CovMat2 ModeState::covariance() const {
  const double nu = m_ + 0.5;
  return {nu / omega_, nu * omega_, 0.0};
}

double photon_number(const CovMat2& v) { return 0.5 * (v.trace() - 1.0); }

double photon_number(const ModeState& state) {
  return photon_number(state.covariance());
}

EnergyBudget::EnergyBudget(double n_bar) : n_bar_(n_bar) {
  require_finite(n_bar, "n_bar");
  if (n_bar < 0.0) throw DomainError("photon budget n_bar must be >= 0");
}

void check_physical(double tau, double y) {
  require_finite(tau, "tau");
  require_finite(y, "y");
  if (y < 0.0) {
    throw UnphysicalChannel("noise magnitude y must be >= 0", y);
  }
  const double floor = 0.5 * std::abs(1.0 - tau);
  if (y < floor * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "unphysical channel: y = " << y << " below the floor |1-tau|/2 = "
       << floor << " (deficit " << (y - floor) << ")";
    throw UnphysicalChannel(os.str(), y - floor);
  }
}

FiducialChannel::FiducialChannel(double tau, double y, double omega_env)
    : tau_(tau), y_(y), omega_env_(omega_env) {
  check_physical(tau, y);
  require_finite(omega_env, "omega_env");
  if (omega_env <= 0.0) throw DomainError("omega_env must be > 0");
  if (omega_env > 1.0) {
    omega_env_ = 1.0 / omega_env;
    swapped_ = true;
  }
  // Without noise the squeezing of the environment is meaningless.
  if (y_ == 0.0) omega_env_ = 1.0;
}

FiducialChannel FiducialChannel::from_environment(double tau, double m_env,
                                                  double omega_env) {
  require_finite(m_env, "m_env");
  if (m_env < 0.0) throw DomainError("m_env must be >= 0");
  const double y = tau == 1.0 ? m_env : std::abs(1.0 - tau) * (m_env + 0.5);
  return {tau, y, omega_env};
}

FiducialChannel FiducialChannel::from_noise(double tau, double y,
                                            double omega_env) {
  return {tau, y, omega_env};
}

FiducialChannel FiducialChannel::pure_family(double tau, double m_env,
                                             double omega_env) {
  require_finite(m_env, "m_env");
  if (m_env < 0.0) throw DomainError("m_env must be >= 0");
  return {tau, std::abs(1.0 - tau) * (m_env + 0.5), omega_env};
}

double FiducialChannel::m_env() const {
  if (tau_ == 1.0) return y_;
  return std::max(0.0, y_ / std::abs(1.0 - tau_) - 0.5);
}

double FiducialChannel::noise_floor() const { return 0.5 * std::abs(1.0 - tau_); }

Mat2 FiducialChannel::scaling() const {
  const double s = std::sqrt(std::abs(tau_));
  return {s, 0.0, 0.0, tau_ < 0.0 ? -s : s};
}

CovMat2 FiducialChannel::noise() const {
  return {y_ / omega_env_, y_ * omega_env_, 0.0};
}

FiducialChannel normalize_channel(const Mat2& x, const CovMat2& y) {
  for (double v : {x.a, x.b, x.c, x.d, y.vqq, y.vpp, y.vqp}) {
    require_finite(v, "channel matrix entry");
  }
  const double tr = y.trace();
  const double det = y.det();
  if (y.vqq < 0.0 || y.vpp < 0.0 || det < -1e-15 * std::max(1.0, tr * tr)) {
    throw DomainError("noise matrix Y must be positive semidefinite");
  }
  const double tau = x.det();
  const double ymag = std::sqrt(std::max(det, 0.0));
  check_physical(tau, ymag);

  // Principal variances of Y; a phase-space rotation diagonalises it.
  const double half_gap =
      std::sqrt(0.25 * (y.vqq - y.vpp) * (y.vqq - y.vpp) + y.vqp * y.vqp);
  const double lam_max = 0.5 * tr + half_gap;
  const double lam_min = std::max(0.5 * tr - half_gap, 0.0);
  double omega = 1.0;
  if (ymag > 0.0) omega = std::sqrt(lam_min / lam_max);
  // q carries the larger variance in canonical form; record a swap otherwise.
  const bool swapped = ymag > 0.0 && y.vpp > y.vqq;
  auto ch = FiducialChannel::from_noise(tau, ymag, swapped ? 1.0 / omega : omega);
  return ch;
}

CovMat2 apply_channel(const FiducialChannel& ch, const CovMat2& v) {
  const double t = std::abs(ch.tau());
  const double sign = ch.tau() < 0.0 ? -1.0 : 1.0;
  const CovMat2 n = ch.noise();
  return {t * v.vqq + n.vqq, t * v.vpp + n.vpp, sign * t * v.vqp + n.vqp};
}

}  // namespace gausscap
