#include "gausscap/limits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gausscap {

LimitResult capacity_limit_tau_inf(double m_env, double omega_env, double n_bar) {
  if (!(m_env >= 0.0) || !std::isfinite(m_env)) throw DomainError("m_env must be finite and >= 0");
  if (!(omega_env > 0.0 && omega_env <= 1.0)) throw DomainError("omega_env must lie in (0, 1]");
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) throw DomainError("n_bar must be finite and >= 0");

  const double nu = m_env + 0.5;
  const double w = omega_env;
  LimitResult r;
  const double thr = (1.0 + nu * (1.0 - w * w)) / (2.0 * w) - 0.5;
  r.auxiliary["threshold"] = thr;
  if (n_bar >= thr) {
    const double n_env = nu * (w + 1.0 / w) / 2.0 - 0.5;
    r.regime = Regime::AboveThreshold;
    r.auxiliary["n_env"] = n_env;
    r.value_bits = std::log2((n_bar + n_env + 1.0) / (m_env + 1.0));
  } else {
    const double ep = nu * w;
    const double root =
        std::sqrt(1.0 + (2.0 * n_bar + 1.0) / ep + 1.0 / (4.0 * ep * ep)) - 1.0 / (2.0 * ep);
    const double w_in = 1.0 / root;
    r.regime = Regime::BelowThreshold;
    r.auxiliary["e_p"] = ep;
    r.auxiliary["omega_in"] = w_in;
    r.value_bits = -std::log2(w_in);
  }
  r.value_bits = std::max(0.0, r.value_bits);
  return r;
}

double capacity_limit_squeeze(double n_bar) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) throw DomainError("n_bar must be finite and >= 0");
  return std::log2(1.0 + 2.0 * n_bar);
}

namespace {

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

void require_family(const FiducialChannel& ch, const char* which) {
  if (ch.tau() == 1.0 && ch.y() != 0.0) {
    throw PreconditionError(std::string(which) +
                            ": additive-noise channel (tau = 1, y > 0) is not of the "
                            "form y = |1-tau|(m_env+1/2) and cannot be concatenated");
  }
}

bool lemma_holds(double t1, double t2) {
  const bool unit2 = t2 >= 0.0 && t2 <= 1.0;
  if (t1 >= 1.0 && t2 >= 1.0) return true;
  if (t1 >= 0.0 && t1 <= 1.0 && unit2) return true;
  return t1 < 0.0 && unit2;
}

}  // namespace

FiducialChannel compose(const FiducialChannel& ch1, const FiducialChannel& ch2) {
  require_family(ch1, "first channel");
  require_family(ch2, "second channel");
  const double t1 = ch1.tau();
  const double t2 = ch2.tau();
  if (!(ch1.is_perfect() || ch2.is_perfect()) && !lemma_holds(t1, t2)) {
    std::ostringstream os;
    os << "lemma precondition: (tau1, tau2) = (" << t1 << ", " << t2
       << ") is not in {both >= 1, both in [0,1], tau1 < 0 with tau2 in [0,1]}";
    throw PreconditionError(os.str());
  }

  double m = 0.0, w = 1.0;
  if (ch1.is_perfect() && ch2.is_perfect()) {
    // nothing to take the environment from
  } else if (ch1.is_perfect()) {
    m = ch2.m_env();
    w = ch2.omega_env();
  } else {
    m = ch1.m_env();
    w = ch1.omega_env();
    if (!ch2.is_perfect() &&
        (!close(m, ch2.m_env(), 1e-12) || !close(w, ch2.omega_env(), 1e-12) ||
         ch1.quadratures_swapped() != ch2.quadratures_swapped())) {
      std::ostringstream os;
      os << "mismatched environments: (m_env, omega_env) = (" << m << ", " << w << ") vs ("
         << ch2.m_env() << ", " << ch2.omega_env() << ")";
      throw PreconditionError(os.str());
    }
  }
  auto out = FiducialChannel::pure_family(t1 * t2, m, w);

  // Check against applying the two channels in turn.
  const CovMat2 probes[] = {{0.5, 0.5, 0.0}, {2.0, 0.3, 0.4}, {0.7, 1.9, -0.6}};
  for (const auto& v : probes) {
    const CovMat2 a = apply_channel(ch2, apply_channel(ch1, v));
    const CovMat2 b = apply_channel(out, v);
    if (!close(a.vqq, b.vqq, 1e-12) || !close(a.vpp, b.vpp, 1e-12) ||
        !close(a.vqp, b.vqp, 1e-12)) {
      throw Error("composition mismatch at matrix level");
    }
  }
  return out;
}

PipelineReport pipelining_check(const FiducialChannel& ch1, const FiducialChannel& ch2,
                                double n_bar, const SolverConfig& cfg) {
  const auto both = compose(ch1, ch2);
  const EnergyBudget n(n_bar);
  PipelineReport r;
  r.c_first = capacity(ch1, n, cfg).capacity_bits;
  r.c_second = capacity(ch2, n, cfg).capacity_bits;
  r.c_composed = capacity(both, n, cfg).capacity_bits;
  r.holds = r.c_composed <= std::min(r.c_first, r.c_second) + 1e-9;
  r.first_bound = r.c_composed <= r.c_first + 1e-9;
  return r;
}

}  // namespace gausscap
