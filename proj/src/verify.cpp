#include "gausscap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "gausscap/analysis.hpp"
#include "gausscap/limits.hpp"
#include "gausscap/oracle.hpp"
#include "gausscap/sweep_io.hpp"

namespace gausscap {

std::vector<LatticePoint> oracle_lattice(int per_axis) {
  if (per_axis < 2) throw DomainError("lattice needs >= 2 points per axis");
  auto lin = [per_axis](double lo, double hi, int i) {
    return lo + (hi - lo) * i / (per_axis - 1);
  };
  std::vector<LatticePoint> pts;
  for (int i = 0; i < per_axis; ++i) {
    const double tau = lin(-2.0, 2.0, i);
    const double base = std::max(0.5 * std::abs(1.0 - tau), 0.1);
    for (int j = 0; j < per_axis; ++j) {
      const double y = base * lin(1.0, 3.0, j);
      for (int k = 0; k < per_axis; ++k) {
        for (double n : {0.1, 1.0, 5.0}) pts.push_back({tau, y, lin(0.1, 1.0, k), n});
      }
    }
  }
  return pts;
}

namespace {

struct Golden {
  double tau, y, omega_env, n_bar, bits;
};

// Independent double-precision maximisation over (omega_in, split), 12 digits.
constexpr Golden kGolden[] = {
    {1.0, 0.1, 0.2, 1.0, 1.703980571405},  {1.0, 0.1, 1.0, 1.0, 1.613117026833},
    {1.0, 0.1, 0.2, 3.0, 2.865706323980},  {-1.0, 1.2, 0.3, 1.0, 0.991077109831},
    {0.5, 0.25, 0.3, 0.5, 1.042521725863}, {2.0, 0.6, 0.1, 0.1, 0.250904267705},
    {0.41, 0.29559, 0.5, 0.1, 0.267702091250}, {1.5, 0.3, 0.7, 2.0, 2.009435093098},
};

class Checker {
 public:
  explicit Checker(std::ostream& log) : log_(log) {}

  void check(bool ok, const std::string& name, const std::string& detail = {}) {
    log_ << (ok ? "PASS " : "FAIL ") << name;
    if (!ok && !detail.empty()) log_ << "  (" << detail << ")";
    log_ << '\n';
    (ok ? report_.passed : report_.failed)++;
  }

  void near(double got, double want, double tol, const std::string& name) {
    std::ostringstream os;
    os << "got " << format_number(got) << ", want " << format_number(want) << " +- " << tol;
    check(std::abs(got - want) <= tol, name, os.str());
  }

  VerifyReport report() const { return report_; }

 private:
  std::ostream& log_;
  VerifyReport report_;
};

std::string label(const char* what, double a, double b, double c, double d) {
  std::ostringstream os;
  os << what << " tau=" << a << " y=" << b << " w=" << c << " n=" << d;
  return os.str();
}

}  // namespace

VerifyReport run_verify(std::ostream& log, const VerifyOptions& opt) {
  Checker ck(log);

  for (const auto& gd : kGolden) {
    const auto ch = FiducialChannel::from_noise(gd.tau, gd.y, gd.omega_env);
    try {
      ck.near(capacity(ch, EnergyBudget(gd.n_bar)).capacity_bits, gd.bits, 1e-9,
              label("golden", gd.tau, gd.y, gd.omega_env, gd.n_bar));
    } catch (const Error& e) {
      ck.check(false, label("golden", gd.tau, gd.y, gd.omega_env, gd.n_bar), e.what());
    }
  }

  struct Thr {
    double tau, m_env, n_bar, want;
  };
  for (const Thr t : {Thr{-1.0, 0.1, 1.0, 0.59}, Thr{0.41, 1e-3, 0.1, 0.92},
                      Thr{1.0, 0.1, 1.0, 0.362}, Thr{1.167, 0.1, 1.0, 0.358}}) {
    const auto ch = FiducialChannel::from_environment(t.tau, t.m_env, 1.0);
    ck.near(threshold_frequency(ch.tau(), ch.y(), t.n_bar), t.want, 5e-3,
            label("omega_thr", t.tau, ch.y(), 1.0, t.n_bar));
  }

  const auto k = critical_constants(0.1, 1e-3);
  ck.near(k.y_c, 0.288675, 1e-6, "y_c");
  ck.near(k.n_c, 0.3578, 5e-5, "N_c");
  ck.near(k.m_c, 0.0969, 5e-5, "M_c");
  ck.near(k.tau_L, 0.42265, 1e-5, "tau_L");
  ck.near(k.tau_tilde_R, 0.51640, 1e-5, "tau_tilde_R");

  for (double tau : {-1.0, 0.5, 1.0, 2.0}) {
    const auto ch = FiducialChannel::from_environment(tau, 0.1, 1e-6);
    ck.near(capacity(ch, EnergyBudget(1.0)).capacity_bits, capacity_limit_squeeze(1.0), 1e-3,
            label("squeeze limit", tau, ch.y(), 1e-6, 1.0));
  }

  struct Cls {
    double tau;
    ScenarioKind want;
  };
  for (const Cls c : {Cls{0.34, ScenarioKind::Monotonic}, Cls{0.3759, ScenarioKind::Saddle},
                      Cls{0.41, ScenarioKind::MaxThenMin}, Cls{0.455, ScenarioKind::OneMaximum},
                      Cls{-1.0, ScenarioKind::Monotonic}}) {
    const double y = std::abs(1.0 - c.tau) * (1e-3 + 0.5);
    const auto got = classify_scenario(c.tau, y, 0.1).kind;
    ck.check(got == c.want, "scenario tau=" + format_number(c.tau) + " m_env=0.001 n=0.1",
             "got " + std::string(to_string(got)) + ", want " + std::string(to_string(c.want)));
  }

  int worst_fail = 0;
  double worst = 0.0;
  for (const auto& p : oracle_lattice(opt.lattice_per_axis)) {
    const auto ch = FiducialChannel::from_noise(p.tau, p.y, p.omega_env);
    const EnergyBudget n(p.n_bar);
    const double gap = std::abs(capacity(ch, n).capacity_bits -
                                grid_capacity(ch, n, opt.oracle_resolution));
    worst = std::max(worst, gap);
    if (gap > 1e-4) {
      ++worst_fail;
      ck.check(false, label("oracle", p.tau, p.y, p.omega_env, p.n_bar),
               "gap " + format_number(gap));
    }
  }
  ck.check(worst_fail == 0, "oracle lattice, max gap " + format_number(worst) + " bits");

  return ck.report();
}

}  // namespace gausscap
