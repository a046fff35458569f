#include "gausscap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gausscap/parallel.hpp"

namespace gausscap {

double EncodingPoint::energy_trace() const {
  return 0.5 / omega_in + 0.5 * omega_in + mod_q + mod_p;
}

double chi_g(const FiducialChannel& ch, const EncodingPoint& pt) {
  if (!(pt.omega_in > 0.0) || !std::isfinite(pt.omega_in)) {
    throw DomainError("encoding omega_in must be finite and > 0");
  }
  if (!(pt.mod_q >= 0.0) || !(pt.mod_p >= 0.0) || !std::isfinite(pt.mod_q) ||
      !std::isfinite(pt.mod_p)) {
    throw DomainError("modulation variances must be finite and >= 0");
  }
  const double t = std::abs(ch.tau());
  const CovMat2 letter{0.5 / pt.omega_in, 0.5 * pt.omega_in, 0.0};
  const CovMat2 out = apply_channel(ch, letter);
  const CovMat2 out_bar{out.vqq + t * pt.mod_q, out.vpp + t * pt.mod_p, 0.0};
  return g(thermal_photons(out_bar)) - g(thermal_photons(out));
}

namespace {

struct Axis {
  double lo, hi;  // omega axis in log space, split axis linear
};

struct Cell {
  double value = -1.0;
  int i = 0;
  int j = 0;
};

double clamp_photons(double v) { return std::max(0.0, std::sqrt(v) - 0.5); }

// One full grid pass. Rows (omega) are evaluated in parallel; the reduction
// runs in row order with a strict comparison so ties keep the earliest cell.
Cell scan(const FiducialChannel& ch, double two_n_plus_one, const Axis& logw,
          const Axis& split, int res, std::vector<double>& omegas,
          std::vector<double>& splits) {
  const double t = std::abs(ch.tau());
  const CovMat2 noise = ch.noise();
  omegas.resize(res);
  splits.resize(res);
  for (int i = 0; i < res; ++i) {
    const double u = res == 1 ? 0.0 : static_cast<double>(i) / (res - 1);
    omegas[i] = std::exp(logw.lo + (logw.hi - logw.lo) * u);
    splits[i] = split.lo + (split.hi - split.lo) * u;
  }
  splits.front() = split.lo;
  splits.back() = split.hi;

  std::vector<Cell> rows(res);
  parallel_for(static_cast<std::size_t>(res), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double w = omegas[i];
    const double q = t * 0.5 / w + noise.vqq;
    const double p = t * 0.5 * w + noise.vpp;
    const double budget = std::max(0.0, two_n_plus_one - 0.5 * w - 0.5 / w);
    const double base = g(clamp_photons(q * p));
    Cell best;
    for (int j = 0; j < res; ++j) {
      const double f = splits[j];
      const double mq = t * f * budget;
      const double mp = t * (1.0 - f) * budget;
      const double v = g(clamp_photons((q + mq) * (p + mp))) - base;
      if (v > best.value) best = {v, i, j};
    }
    rows[ii] = best;
  });
  Cell best;
  for (const Cell& c : rows) {
    if (c.value > best.value) best = c;
  }
  return best;
}

}  // namespace

OracleResult grid_search(const FiducialChannel& ch, const EnergyBudget& n, int resolution) {
  if (resolution < 50) throw DomainError("oracle resolution must be >= 50");
  const double two_n_plus_one = 2.0 * n.n_bar() + 1.0;
  const double p = two_n_plus_one;
  const double w_hi = p + std::sqrt(std::max(p * p - 1.0, 0.0));
  const double w_lo = 1.0 / w_hi;
  Axis logw{std::log(std::max(w_lo, 1e-3)), std::log(std::min(w_hi, 1e3))};
  Axis split{0.0, 1.0};

  std::vector<double> omegas, splits;
  Cell best = scan(ch, two_n_plus_one, logw, split, resolution, omegas, splits);
  double best_w = omegas[best.i];
  double best_f = splits[best.j];
  double best_v = best.value;

  // Single refinement: shrink both spans tenfold around the incumbent.
  auto shrink = [](const Axis& full, double centre) {
    const double half = 0.05 * (full.hi - full.lo);
    Axis a{centre - half, centre + half};
    if (a.lo < full.lo) a = {full.lo, full.lo + 2.0 * half};
    if (a.hi > full.hi) a = {full.hi - 2.0 * half, full.hi};
    return a;
  };
  const Axis fine_w = shrink(logw, std::log(best_w));
  const Axis fine_f = shrink(split, best_f);
  const Cell refined = scan(ch, two_n_plus_one, fine_w, fine_f, resolution, omegas, splits);
  if (refined.value > best_v) {
    best_v = refined.value;
    best_w = omegas[refined.i];
    best_f = splits[refined.j];
  }

  OracleResult r;
  r.capacity_bits = std::max(0.0, best_v);
  const double budget = std::max(0.0, two_n_plus_one - 0.5 * best_w - 0.5 / best_w);
  r.argmax = {best_w, best_f * budget, (1.0 - best_f) * budget};
  r.split = best_f;
  return r;
}

double grid_capacity(const FiducialChannel& ch, const EnergyBudget& n, int resolution) {
  return grid_search(ch, n, resolution).capacity_bits;
}

}  // namespace gausscap
