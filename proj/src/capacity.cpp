#include "gausscap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace gausscap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nondegenerate(double tau) {
  if (tau == 0.0) {
    throw DegenerateChannel("tau = 0: the channel output is independent of the input");
  }
}

// beta * d with the convention inf * 0 = 0. A pure output has beta = inf and
// can only meet d = 0 at the resonance point.
double weighted(double beta_value, double d) {
  if (std::isinf(beta_value)) {
    if (d == 0.0) return 0.0;
    return std::copysign(kInf, d);
  }
  return beta_value * d;
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::AboveThreshold: return "AboveThreshold";
    case Regime::BelowThreshold: return "BelowThreshold";
    case Regime::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

void SolverConfig::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be > 0");
  if (max_iter < 1) throw DomainError("max_iter must be >= 1");
  if (bracket_grid < 2) throw DomainError("bracket_grid must be >= 2");
}

double energy_threshold(const FiducialChannel& ch) {
  require_nondegenerate(ch.tau());
  const double w = ch.omega_env();
  const double ratio = ch.y() / std::abs(ch.tau());
  return (1.0 + ratio * std::abs(1.0 - w * w)) / (2.0 * w) - 0.5;
}

double threshold_frequency(double tau, double y, double n_bar) {
  check_physical(tau, y);
  require_nondegenerate(tau);
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw DomainError("n_bar must be finite and >= 0");
  }
  const double r = y / std::abs(tau);
  const double h = n_bar + 0.5;
  return (1.0 + r) / (std::sqrt(r * r + r + h * h) + h);
}

CapacitySolution capacity_above(const FiducialChannel& ch, const EnergyBudget& n) {
  require_nondegenerate(ch.tau());
  const double n_bar = n.n_bar();
  const double thr = energy_threshold(ch);
  if (n_bar < thr - 1e-12 * (1.0 + thr)) {
    std::ostringstream os;
    os << "n_bar = " << n_bar << " is below the energy threshold " << thr
       << "; use capacity_below";
    throw PreconditionError(os.str());
  }
  const double t = std::abs(ch.tau());
  const double y = ch.y();
  const double w = ch.omega_env();
  const double spread = y * (1.0 / w - w);  // y (1/omega_env - omega_env)
  const double p2 = t * (2.0 * n_bar + 1.0);

  CapacitySolution s;
  s.regime = Regime::AboveThreshold;
  s.omega_in = w;
  s.omega_out = w;
  s.omega_bar_out = 1.0;
  s.omega_bar_in = std::sqrt((p2 + spread) / (p2 - spread));
  const double mod_det = (2.0 * n_bar + 1.0) * (2.0 * n_bar + 1.0) -
                         (spread / t) * (spread / t);
  s.m_bar_in = std::max(0.0, 0.5 * std::sqrt(std::max(mod_det, 0.0)) - 0.5);
  s.m_out = std::max(0.0, 0.5 * t + y - 0.5);
  s.n_bar_out = t * (n_bar + 0.5) + 0.5 * (ch.noise().trace() - 1.0);
  s.m_bar_out = std::max(0.0, s.n_bar_out);
  s.beta_out = beta(s.m_out, s.omega_out);
  s.beta_bar_out = beta(s.m_bar_out, 1.0);
  s.capacity_bits = std::max(0.0, g(s.m_bar_out) - g(s.m_out));
  s.residual = 0.0;
  return s;
}

FeasibleInterval feasible_input_frequencies(double n_bar) {
  const double p = 2.0 * n_bar + 1.0;
  const double w = p + std::sqrt(std::max(p * p - 1.0, 0.0));
  return {1.0 / w, w};
}

BelowPoint evaluate_below(double omega_in, const FiducialChannel& ch,
                          const EnergyBudget& n) {
  const double t = std::abs(ch.tau());
  const double y = ch.y();
  const double w = ch.omega_env();
  const double q = t / (2.0 * omega_in) + y / w;
  const double p = t * omega_in / 2.0 + y * w;
  const double p_bar = t * (2.0 * n.n_bar() + 1.0 - 1.0 / (2.0 * omega_in)) + y * w;

  BelowPoint pt{};
  pt.omega_out = std::sqrt(p / q);
  pt.omega_bar_out = std::sqrt(p_bar / q);
  pt.m_out = thermal_photons({q, p, 0.0});
  pt.m_bar_out = thermal_photons({q, p_bar, 0.0});
  pt.beta_out = beta(pt.m_out, pt.omega_out);
  pt.beta_bar_out = beta(pt.m_bar_out, pt.omega_bar_out);
  pt.chi_bits = g(pt.m_bar_out) - g(pt.m_out);
  return pt;
}

double below_residual(double omega_in, const FiducialChannel& ch, const EnergyBudget& n) {
  require_nondegenerate(ch.tau());
  if (!(ch.omega_env() < 1.0)) {
    throw PreconditionError("below_residual requires squeezed noise (omega_env < 1)");
  }
  const FeasibleInterval iv = feasible_input_frequencies(n.n_bar());
  const double slack = 1e-12;
  if (!(omega_in >= iv.lo * (1.0 - slack) && omega_in <= iv.hi * (1.0 + slack))) {
    std::ostringstream os;
    os << "omega_in = " << omega_in << " outside the feasible interval [" << iv.lo
       << ", " << iv.hi << "] of single-quadrature modulation";
    throw DomainError(os.str());
  }
  const BelowPoint pt = evaluate_below(omega_in, ch, n);
  const double lhs = weighted(pt.beta_bar_out, 1.0 - pt.omega_bar_out * pt.omega_bar_out);
  const double rhs =
      weighted(pt.beta_out, omega_in * omega_in - pt.omega_out * pt.omega_out);
  if (std::isinf(lhs) && std::isinf(rhs)) return lhs > rhs ? kInf : (lhs < rhs ? -kInf : 0.0);
  return lhs - rhs;
}

namespace {

CapacitySolution fill_below(double omega_in, const FiducialChannel& ch,
                            const EnergyBudget& n) {
  const double n_bar = n.n_bar();
  const BelowPoint pt = evaluate_below(omega_in, ch, n);
  CapacitySolution s;
  s.regime = Regime::BelowThreshold;
  s.omega_in = omega_in;
  s.omega_bar_in = std::sqrt(std::max(2.0 * (2.0 * n_bar + 1.0) * omega_in - 1.0, 0.0));
  // q-variance of the modulated input equals that of the letter state.
  s.m_bar_in = std::max(0.0, s.omega_bar_in / (2.0 * omega_in) - 0.5);
  s.omega_out = pt.omega_out;
  s.omega_bar_out = pt.omega_bar_out;
  s.m_out = pt.m_out;
  s.m_bar_out = pt.m_bar_out;
  s.beta_out = pt.beta_out;
  s.beta_bar_out = pt.beta_bar_out;
  s.capacity_bits = std::max(0.0, pt.chi_bits);
  const CovMat2 letter{1.0 / (2.0 * omega_in), omega_in / 2.0, 0.0};
  const CovMat2 modulated{letter.vqq, 2.0 * n_bar + 1.0 - letter.vqq, 0.0};
  s.n_bar_out = photon_number(apply_channel(ch, modulated));
  return s;
}

}  // namespace

CapacitySolution capacity_below(const FiducialChannel& ch, const EnergyBudget& n,
                                const SolverConfig& cfg) {
  cfg.validate();
  require_nondegenerate(ch.tau());
  if (!(ch.omega_env() < 1.0)) {
    throw PreconditionError("capacity_below requires squeezed noise (omega_env < 1)");
  }
  const double thr = energy_threshold(ch);
  if (!(n.n_bar() < thr)) {
    std::ostringstream os;
    os << "n_bar = " << n.n_bar() << " is not below the energy threshold " << thr
       << "; use capacity_above";
    throw PreconditionError(os.str());
  }
  if (n.n_bar() == 0.0) {
    // Nothing to modulate: the only admissible input is the vacuum.
    CapacitySolution s = fill_below(1.0, ch, n);
    s.capacity_bits = 0.0;
    return s;
  }

  const double lo = feasible_input_frequencies(n.n_bar()).lo;
  const double hi = 1.0;
  const int npts = cfg.bracket_grid;
  std::vector<double> xs(npts), fs(npts);
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < npts; ++i) {
    xs[i] = i + 1 == npts ? hi : lo * std::exp(ratio * i / (npts - 1));
    fs[i] = below_residual(xs[i], ch, n);
  }

  auto bisect = [&](double a, double fa, double b) {
    for (int it = 0; it < cfg.max_iter; ++it) {
      if (b - a <= cfg.abs_tol) return 0.5 * (a + b);
      const double mid = 0.5 * (a + b);
      const double fm = below_residual(mid, ch, n);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    if (b - a <= cfg.abs_tol) return 0.5 * (a + b);
    std::ostringstream os;
    os << "bisection did not reach tolerance " << cfg.abs_tol << " within "
       << cfg.max_iter << " iterations";
    throw SolverError(os.str(), a, b);
  };

  std::vector<double> roots;
  for (int i = 0; i < npts; ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < npts && fs[i + 1] != 0.0 && (fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
      roots.push_back(bisect(xs[i], fs[i], xs[i + 1]));
    }
  }
  if (roots.empty()) {
    std::ostringstream os;
    os << "no sign change of the stationarity residual on [" << lo << ", " << hi
       << "] (F(lo) = " << fs.front() << ", F(hi) = " << fs.back() << ")";
    throw SolverError(os.str(), lo, hi);
  }

  // The residual is only a stationarity condition; keep the best root.
  CapacitySolution best;
  bool have = false;
  for (double r : roots) {
    CapacitySolution s = fill_below(r, ch, n);
    if (!have || s.capacity_bits > best.capacity_bits) {
      best = s;
      have = true;
    }
  }
  best.residual = below_residual(best.omega_in, ch, n);
  best.root_count = static_cast<int>(roots.size());
  return best;
}

CapacitySolution capacity(const FiducialChannel& ch, const EnergyBudget& n,
                          const SolverConfig& cfg) {
  if (ch.is_degenerate()) {
    CapacitySolution s;
    s.regime = Regime::Degenerate;
    const CovMat2 out = ch.noise();
    s.omega_in = 1.0;
    s.omega_bar_in = 1.0;
    s.m_bar_in = n.n_bar();
    s.omega_out = s.omega_bar_out = std::sqrt(out.vpp / out.vqq);
    s.m_out = s.m_bar_out = thermal_photons(out);
    s.beta_out = s.beta_bar_out = beta(s.m_out, s.omega_out);
    s.n_bar_out = photon_number(out);
    s.capacity_bits = 0.0;
    return s;
  }
  if (ch.is_perfect() || n.n_bar() >= energy_threshold(ch)) {
    return capacity_above(ch, n);
  }
  return capacity_below(ch, n, cfg);
}

}  // namespace gausscap
