#include "gausscap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gausscap/parallel.hpp"

namespace gausscap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kYc = 1.0 / std::sqrt(12.0);
const double kTauTildeR = 2.0 / std::sqrt(15.0);

constexpr int kScanPoints = 400;
constexpr double kScanFloor = 1e-6;
constexpr double kCoalesce = 1e-4;      // root separation in omega_env
constexpr double kSaddleRelY = 1e-4;    // relative distance to the saddle noise

double omega_inf(double n_bar) { return 1.0 / (1.0 + 2.0 * n_bar); }

double cap_at(double tau, double y, double w, double n_bar) {
  return capacity(FiducialChannel::from_noise(tau, y, w), EnergyBudget(n_bar)).capacity_bits;
}

std::vector<double> geom(double lo, double hi, int n) {
  std::vector<double> xs(n);
  const double span = std::log(hi / lo);
  for (int i = 0; i < n; ++i) xs[i] = lo * std::exp(span * i / (n - 1));
  xs.back() = hi;
  return xs;
}

// Upper end of the interior scan: just short of omega_thr, where the
// single-quadrature branch ends.
double scan_top(double tau, double y, double n_bar) {
  return threshold_frequency(tau, y, n_bar) * (1.0 - 1e-6);
}

double bisect_root(double a, double fa, double b, double tau, double y, double n_bar) {
  for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = extremum_residual(m, tau, y, n_bar);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct Depth {
  double value;     // min of residual / omega_env over the scan interval
  double omega;     // where it is attained
};

// The residual tends to zero linearly as omega_env -> 0, so its depth is
// measured on residual / omega_env.
Depth residual_depth(double tau, double y, double n_bar) {
  const double top = scan_top(tau, y, n_bar);
  const auto xs = geom(kScanFloor, top, kScanPoints);
  auto h = [&](double w) { return extremum_residual(w, tau, y, n_bar) / w; };
  std::vector<double> hs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) hs[i] = h(xs[i]);
  const std::size_t i = std::min_element(hs.begin(), hs.end()) - hs.begin();
  if (i == 0 || i + 1 == xs.size()) return {hs[i], xs[i]};
  // golden section inside the bracketing cells
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = xs[i - 1], b = xs[i + 1];
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = h(c), fd = h(d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = h(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = h(d);
    }
  }
  const double w = 0.5 * (a + b);
  return {std::min(h(w), hs[i]), w};
}

void label_extremum(Extremum& e, double gap, double tau, double y, double n_bar) {
  const double w = e.omega_env;
  const double h = std::min(0.02 * w, 0.25 * gap);
  double c[5];
  for (int k = 0; k < 5; ++k) c[k] = cap_at(tau, y, w + (k - 2) * h, n_bar);
  const double d2 = c[3] - 2.0 * c[2] + c[1];
  e.kind = d2 < 0.0 ? ExtremumKind::Max : ExtremumKind::Min;
  // local sweep: the extreme sample must sit within one cell of the root
  const auto* ext = e.kind == ExtremumKind::Max ? std::max_element(c, c + 5)
                                                : std::min_element(c, c + 5);
  const long idx = ext - c;
  e.confirmed = idx >= 1 && idx <= 3;
}

}  // namespace

std::string_view to_string(ExtremumKind k) {
  switch (k) {
    case ExtremumKind::Max: return "Max";
    case ExtremumKind::Min: return "Min";
    case ExtremumKind::Saddle: return "Saddle";
  }
  return "Unknown";
}

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Monotonic: return "Monotonic";
    case ScenarioKind::OneMaximum: return "OneMaximum";
    case ScenarioKind::Saddle: return "Saddle";
    case ScenarioKind::MaxThenMin: return "MaxThenMin";
  }
  return "Unknown";
}

CriticalConstants critical_constants(double n_bar, double m_env) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) throw DomainError("n_bar must be finite and >= 0");
  if (!(m_env >= 0.0) || !std::isfinite(m_env)) throw DomainError("m_env must be finite and >= 0");
  const double s3 = std::sqrt(3.0);
  const double wi = omega_inf(n_bar);
  CriticalConstants k{};
  k.y_c = kYc;
  k.tau_c_minus = 1.0 - 1.0 / (s3 * (2.0 * m_env + 1.0));
  k.tau_c_plus = 1.0 + 1.0 / (s3 * (2.0 * m_env + 1.0));
  k.tau_tilde_c = std::sqrt(2.0 / 15.0) * std::sqrt(1.0 + wi * wi);
  k.tau_L = 1.0 - 1.0 / s3;
  k.tau_R = 1.0 + 1.0 / s3;
  k.tau_tilde_L = std::sqrt(2.0 / 15.0);
  k.tau_tilde_R = kTauTildeR;
  k.n_c = 0.5 * (std::sqrt(1.5 + 5.0 / std::sqrt(12.0)) - 1.0);
  k.m_c = 0.5 * (1.0 / (s3 - 2.0 / std::sqrt(5.0)) - 1.0);
  return k;
}

TaylorCoeffs taylor_coefficients(double tau, double y, double n_bar) {
  check_physical(tau, y);
  if (tau == 0.0) throw DegenerateChannel("tau = 0 has no expansion");
  if (!(y > 0.0)) throw DomainError("expansion needs y > 0");
  if (!(n_bar > 0.0) || !std::isfinite(n_bar)) throw DomainError("expansion needs n_bar > 0");

  const double ln2 = std::numbers::ln2;
  const double w = omega_inf(n_bar);
  const double u = w * std::abs(tau) * y;
  auto K = [&](int j) { return (j % 2 ? -1.0 : 1.0) / ln2 * (1.0 - w * w) / std::pow(u, j); };
  const double yc2 = 1.0 / 12.0;
  const double tt2 = (2.0 / 15.0) * (1.0 + w * w);
  const double d = y * y - yc2;
  const double T = tau * tau;

  TaylorCoeffs r;
  r.a = K(1) * d;
  const double bp = K(2) * (7.5 * tt2 * d * d - 0.5 * yc2 * (T - tt2));
  r.b = bp + K(2) * d * d * (1.0 - 3.75 * tt2);
  const double cp =
      K(3) * ((4.0 / 3.0) * d * d * d * ((1.0 - 7.5 * tt2) * (1.0 - 7.5 * tt2) + 7.5 * tt2) -
              7.5 * d * yc2 * tt2 * (T - 2.0 * tt2 + (4.0 / 15.0) * (1.0 - (2.0 / 15.0) / tt2)) -
              (1.0 / 48.0) * ((T - tt2) * (T - tt2) -
                              (1.0 / 21.0) * ((tt2 + 4.0 / 3.0) * (tt2 + 4.0 / 3.0) - 32.0 / 15.0)));
  r.c = cp + K(3) * (2.0 - 7.5 * tt2) * d * ((1.0 + 7.5 * tt2) * d * d - yc2 * (T - tt2));
  r.alpha = -ln2 * K(1) * w * d;
  r.beta_coef = -ln2 * K(2) * w * (7.5 * tt2 * d * d - yc2 * (T - tt2));

  r.fd_slope = (cap_at(tau, y, 2e-4, n_bar) - cap_at(tau, y, 1e-4, n_bar)) / 1e-4;
  r.sign_mismatch = r.a != 0.0 && r.fd_slope != 0.0 && ((r.a < 0.0) != (r.fd_slope < 0.0));
  return r;
}

double extremum_residual(double omega_env, double tau, double y, double n_bar) {
  if (!(omega_env > 0.0 && omega_env < 1.0)) {
    throw DomainError("extremum_residual needs omega_env in (0, 1)");
  }
  if (!(n_bar > 0.0) || !std::isfinite(n_bar)) throw DomainError("extremum_residual needs n_bar > 0");
  if (!(y > 0.0)) throw DomainError("extremum_residual needs y > 0");
  const auto ch = FiducialChannel::from_noise(tau, y, omega_env);
  return below_residual(omega_inf(n_bar), ch, EnergyBudget(n_bar));
}

std::vector<Extremum> find_extrema(double tau, double y, double n_bar) {
  check_physical(tau, y);
  if (tau == 0.0 || y == 0.0 || n_bar == 0.0) return {};
  const double top = scan_top(tau, y, n_bar);
  if (!(top > kScanFloor)) return {};

  const auto xs = geom(kScanFloor, top, kScanPoints);
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = extremum_residual(xs[i], tau, y, n_bar);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (fs[i] == 0.0) {
      if (i > 0) roots.push_back(xs[i]);
      continue;
    }
    if (fs[i + 1] != 0.0 && (fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
      roots.push_back(bisect_root(xs[i], fs[i], xs[i + 1], tau, y, n_bar));
    }
  }

  std::vector<Extremum> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i + 1 < roots.size() && roots[i + 1] - roots[i] < kCoalesce) {
      out.push_back({0.5 * (roots[i] + roots[i + 1]), ExtremumKind::Saddle, false});
      ++i;
      continue;
    }
    out.push_back({roots[i], ExtremumKind::Max, false});
  }
  // A near-degenerate pair can be closer than the scan resolves, or have just
  // annihilated; either way y sits within a hair of the saddle noise.
  if (tau > 0.0 && y >= kYc && (out.empty() || (out.size() == 2 && roots.size() == 2))) {
    if (const auto yt = saddle_noise(tau, n_bar); yt && std::abs(y - *yt) <= kSaddleRelY * *yt) {
      const double w = out.size() == 2 ? 0.5 * (out[0].omega_env + out[1].omega_env)
                                       : residual_depth(tau, y, n_bar).omega;
      return {{w, ExtremumKind::Saddle, false}};
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].kind == ExtremumKind::Saddle) continue;
    const double left = i == 0 ? out[i].omega_env : out[i].omega_env - out[i - 1].omega_env;
    const double right = (i + 1 == out.size() ? top : out[i + 1].omega_env) - out[i].omega_env;
    label_extremum(out[i], std::min(left, right), tau, y, n_bar);
  }
  return out;
}

std::optional<double> saddle_noise(double tau, double n_bar) {
  if (!(tau > 0.0) || !(n_bar > 0.0)) return std::nullopt;
  const double floor = 0.5 * std::abs(1.0 - tau);
  const double lo0 = std::max(floor, kYc) * (1.0 + 1e-9);
  auto depth = [&](double y) { return residual_depth(tau, y, n_bar).value; };
  if (!(depth(lo0) < 0.0)) return std::nullopt;
  double lo = lo0;
  double hi = 2.0 * lo0;
  while (depth(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) return std::nullopt;
  }
  for (int it = 0; it < 60; ++it) {
    const double m = 0.5 * (lo + hi);
    if (depth(m) < 0.0) lo = m;
    else hi = m;
  }
  return 0.5 * (lo + hi);
}

Scenario classify_numeric(double tau, double y, double n_bar) {
  check_physical(tau, y);
  Scenario s;
  s.extrema = find_extrema(tau, y, n_bar);
  const auto& ex = s.extrema;
  const bool has_saddle = std::any_of(ex.begin(), ex.end(), [](const Extremum& e) {
    return e.kind == ExtremumKind::Saddle;
  });
  if (has_saddle) {
    s.kind = ScenarioKind::Saddle;
    return s;
  }
  if (ex.empty()) {
    s.kind = ScenarioKind::Monotonic;
  } else if (ex.size() == 1 && ex[0].kind == ExtremumKind::Max) {
    s.kind = ScenarioKind::OneMaximum;
  } else if (ex.size() == 2 && ex[0].kind != ex[1].kind) {
    // Coming from omega_env -> 0 the curve dips first: Min at the smaller
    // omega_env, then Max. The other order is kept but flagged.
    s.kind = ScenarioKind::MaxThenMin;
    s.irregular = ex[0].kind != ExtremumKind::Min;
  } else {
    s.irregular = true;
    const bool any_max = std::any_of(ex.begin(), ex.end(), [](const Extremum& e) {
      return e.kind == ExtremumKind::Max;
    });
    s.kind = any_max ? ScenarioKind::OneMaximum : ScenarioKind::Monotonic;
  }
  return s;
}

Scenario classify_scenario(double tau, double y, double n_bar) {
  check_physical(tau, y);
  Scenario s;
  s.fast_path = true;
  if (tau <= 0.0 || y == 0.0) {
    s.kind = ScenarioKind::Monotonic;
    return s;
  }
  if (y < kYc) {
    s.kind = ScenarioKind::OneMaximum;
    for (const auto& e : find_extrema(tau, y, n_bar)) {
      if (e.kind == ExtremumKind::Max) s.extrema.push_back(e);
    }
    return s;
  }
  if (tau >= kTauTildeR) {
    s.kind = ScenarioKind::Monotonic;
    return s;
  }
  return classify_numeric(tau, y, n_bar);
}

// ---------------------------------------------------------------- sweeps

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::OmegaEnv: return "omega-env";
    case SweepParam::Tau: return "tau";
    case SweepParam::NBar: return "n-bar";
    case SweepParam::Y: return "y";
    case SweepParam::MEnv: return "m-env";
  }
  return "unknown";
}

SweepParam parse_sweep_param(std::string_view name) {
  for (auto p : {SweepParam::OmegaEnv, SweepParam::Tau, SweepParam::NBar, SweepParam::Y,
                 SweepParam::MEnv}) {
    if (name == to_string(p)) return p;
  }
  throw DomainError("unknown sweep parameter '" + std::string(name) +
                    "' (expected omega-env, tau, n-bar, y or m-env)");
}

void SweepSpec::validate() const {
  solver.validate();
  if (steps < 2) throw DomainError("sweep needs steps >= 2");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("sweep range needs finite lo < hi");
  }
  if (log_spacing && !(lo > 0.0)) throw DomainError("log spacing needs lo > 0");
  if (base.m_env.has_value() == base.y.has_value()) {
    throw DomainError("give exactly one of m_env and y");
  }
}

std::vector<double> SweepSpec::points() const {
  std::vector<double> xs(steps);
  for (int i = 0; i < steps; ++i) {
    const double u = static_cast<double>(i) / (steps - 1);
    xs[i] = log_spacing ? lo * std::exp(std::log(hi / lo) * u) : lo + (hi - lo) * u;
  }
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

FiducialChannel sweep_channel(const SweepSpec& spec, double value) {
  double tau = spec.base.tau;
  double w = spec.base.omega_env;
  switch (spec.param) {
    case SweepParam::OmegaEnv: w = value; break;
    case SweepParam::Tau: tau = value; break;
    case SweepParam::Y: return FiducialChannel::from_noise(tau, value, w);
    case SweepParam::MEnv: return FiducialChannel::from_environment(tau, value, w);
    case SweepParam::NBar: break;
  }
  if (spec.base.y) return FiducialChannel::from_noise(tau, *spec.base.y, w);
  if (spec.param == SweepParam::Tau) return FiducialChannel::pure_family(tau, *spec.base.m_env, w);
  return FiducialChannel::from_environment(tau, *spec.base.m_env, w);
}

SweepTable sweep_capacity(const SweepSpec& spec) {
  spec.validate();
  const auto xs = spec.points();
  SweepTable table;
  table.param = spec.param;
  table.rows.resize(xs.size());

  parallel_for(xs.size(), [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.param = xs[i];
    row.tau = spec.param == SweepParam::Tau ? xs[i] : spec.base.tau;
    row.omega_env = spec.param == SweepParam::OmegaEnv ? xs[i] : spec.base.omega_env;
    row.n_bar = spec.param == SweepParam::NBar ? xs[i] : spec.base.n_bar;
    row.y = kNaN;
    row.n_bar_thr = kNaN;
    row.omega_thr = kNaN;
    try {
      const auto ch = sweep_channel(spec, xs[i]);
      row.y = ch.y();
      row.omega_env = ch.omega_env();
      const EnergyBudget n(row.n_bar);
      if (!ch.is_degenerate()) {
        row.n_bar_thr = energy_threshold(ch);
        row.omega_thr = threshold_frequency(ch.tau(), ch.y(), row.n_bar);
      }
      row.solution = capacity(ch, n, spec.solver);
    } catch (const UnphysicalChannel& e) {
      row.status = "unphysical";
      row.message = e.what();
    } catch (const DegenerateChannel& e) {
      row.status = "degenerate";
      row.message = e.what();
    } catch (const SolverError& e) {
      row.status = "solver";
      row.message = e.what();
    } catch (const Error& e) {
      row.status = "domain";
      row.message = e.what();
    }
  });

  const SweepRow* prev = nullptr;
  for (auto& row : table.rows) {
    if (row.status != "ok") continue;
    row.regime_change = prev && prev->solution.regime != row.solution.regime;
    prev = &row;
  }

  // The threshold is a single number only when the channel itself is fixed
  // along the sweep direction.
  if (spec.param == SweepParam::OmegaEnv || spec.param == SweepParam::NBar) {
    try {
      const auto ch = sweep_channel(spec, spec.param == SweepParam::OmegaEnv ? spec.hi : spec.lo);
      if (!ch.is_degenerate()) {
        const double c = spec.param == SweepParam::OmegaEnv
                             ? threshold_frequency(ch.tau(), ch.y(), spec.base.n_bar)
                             : energy_threshold(ch);
        if (c >= spec.lo && c <= spec.hi) table.crossing = c;
      }
    } catch (const Error&) {
      // no crossing reported for an unphysical base channel
    }
  }
  return table;
}

std::vector<ZoneCell> zone_map(double n_bar, double tau_lo, double tau_hi, int tau_steps,
                               double y_lo, double y_hi, int y_steps) {
  if (tau_steps < 2 || y_steps < 2) throw DomainError("zone map needs >= 2 steps per axis");
  if (!(tau_lo < tau_hi) || !(y_lo < y_hi)) throw DomainError("zone map needs lo < hi");
  if (!(n_bar > 0.0)) throw DomainError("zone map needs n_bar > 0");
  std::vector<ZoneCell> cells(static_cast<std::size_t>(tau_steps) * y_steps);
  parallel_for(cells.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) / y_steps;
    const int j = static_cast<int>(k) % y_steps;
    ZoneCell& c = cells[k];
    c.tau = tau_lo + (tau_hi - tau_lo) * i / (tau_steps - 1);
    c.y = y_lo + (y_hi - y_lo) * j / (y_steps - 1);
    try {
      c.label = std::string(to_string(classify_scenario(c.tau, c.y, n_bar).kind));
    } catch (const UnphysicalChannel&) {
      c.label = "unphysical";
    } catch (const Error&) {
      c.label = "error";
    }
  });
  return cells;
}

}  // namespace gausscap
