#include <cmath>

#include "doctest.h"
#include "gausscap/analysis.hpp"
#include "gen.hpp"

using namespace gausscap;

namespace {

double lossy_y(double tau) { return std::abs(1.0 - tau) * (1e-3 + 0.5); }

double cap(double tau, double y, double w, double n) {
  return capacity(FiducialChannel::from_noise(tau, y, w), EnergyBudget(n)).capacity_bits;
}

}  // namespace

TEST_CASE("critical constants") {
  const auto k = critical_constants(0.1, 1e-3);
  CHECK(std::abs(k.y_c - 0.288675) < 1e-6);
  CHECK(std::abs(k.n_c - 0.3578) < 5e-5);
  CHECK(std::abs(k.m_c - 0.0969) < 5e-5);
  CHECK(std::abs(k.tau_L - 0.42265) < 1e-5);
  CHECK(std::abs(k.tau_R - 1.57735) < 1e-5);
  CHECK(std::abs(k.tau_tilde_L - std::sqrt(2.0 / 15.0)) < 1e-15);
  CHECK(std::abs(k.tau_tilde_R - 0.51640) < 1e-5);
  CHECK(k.tau_tilde_L < k.tau_L);
  CHECK(k.tau_L < k.tau_tilde_R);
  CHECK(k.tau_tilde_R < k.tau_R);
  // tau_c reduces to tau_L, tau_R for a pure environment
  const auto k0 = critical_constants(0.0, 0.0);
  CHECK(std::abs(k0.tau_c_minus - k0.tau_L) < 1e-15);
  CHECK(std::abs(k0.tau_c_plus - k0.tau_R) < 1e-15);
  CHECK(std::abs(k0.tau_tilde_c - std::sqrt(4.0 / 15.0)) < 1e-15);
  CHECK_THROWS_AS(critical_constants(-1.0, 0.0), DomainError);
}

TEST_CASE("Taylor coefficients") {
  const double yc = 1.0 / std::sqrt(12.0);
  const auto at_c = taylor_coefficients(0.8, yc, 0.3);
  CHECK(std::abs(at_c.a) < 1e-12);

  const auto add = taylor_coefficients(1.0, 0.1, 0.1);
  CHECK(add.a > 0.0);
  CHECK(add.fd_slope > 0.0);
  CHECK_FALSE(add.sign_mismatch);

  const auto pc = taylor_coefficients(-1.0, 1.2, 1.0);
  CHECK(pc.a < 0.0);
  CHECK(pc.fd_slope < 0.0);

  // the slope between 1e-4 and 2e-4 is a + 3e-4 b to leading order
  for (auto [t, y, n] : {std::tuple{1.0, 0.1, 0.1}, std::tuple{2.0, 0.6, 1.0},
                         std::tuple{0.5, 0.3, 0.1}}) {
    const auto c = taylor_coefficients(t, y, n);
    CHECK(std::abs(c.fd_slope - (c.a + 3e-4 * c.b)) < 1e-3 * std::abs(c.a) + 1e-6);
  }

  // omega_in expansion against the solver
  const auto c = taylor_coefficients(2.0, 0.6, 1.0);
  const double w = 1e-3;
  const double win = capacity(FiducialChannel::from_noise(2.0, 0.6, w), EnergyBudget(1.0)).omega_in;
  CHECK(std::abs(win - (1.0 / 3.0 + c.alpha * w + c.beta_coef * w * w)) < 1e-7);

  CHECK_THROWS_AS(taylor_coefficients(0.5, 0.1, 1.0), UnphysicalChannel);
  CHECK_THROWS_AS(taylor_coefficients(0.0, 0.5, 1.0), DegenerateChannel);
}

TEST_CASE("sign of a against the finite-difference slope") {
  gen::Source src(81);
  const double yc = 1.0 / std::sqrt(12.0);
  int tested = 0;
  while (tested < 20) {
    const auto ch = src.channel(-2.0, 2.0);
    if (std::abs(ch.tau) < 0.2 || std::abs(ch.y - yc) < 0.02) continue;
    const double n = src.log_uniform(0.05, 3.0);
    const auto c = taylor_coefficients(ch.tau, ch.y, n);
    CAPTURE(ch.tau);
    CAPTURE(ch.y);
    CAPTURE(n);
    CHECK((c.a > 0) == (c.fd_slope > 0));
    CHECK_FALSE(c.sign_mismatch);
    ++tested;
  }
}

TEST_CASE("extremum residual") {
  auto changes = [](double tau, double y, double n) {
    const double top = threshold_frequency(tau, y, n) * (1 - 1e-6);
    int k = 0;
    double prev = extremum_residual(1e-6, tau, y, n);
    for (int i = 1; i < 400; ++i) {
      const double w = 1e-6 * std::pow(top / 1e-6, i / 399.0);
      const double f = extremum_residual(w, tau, y, n);
      if ((f < 0) != (prev < 0)) ++k;
      prev = f;
    }
    return k;
  };
  CHECK(changes(1.2, 0.1001, 0.1) == 1);
  CHECK(changes(-1.0, 1.2, 0.1) == 0);
  CHECK(std::abs(extremum_residual(1e-9, 1.2, 0.1001, 0.1)) < 1e-6);
  CHECK_THROWS_AS(extremum_residual(1.0, 1.2, 0.1, 0.1), DomainError);
  CHECK_THROWS_AS(extremum_residual(0.5, 1.2, 0.1, 0.0), DomainError);
}

TEST_CASE("extrema of the capacity curve") {
  CHECK(find_extrema(-1.0, 1.2, 1.0).empty());

  const auto one = find_extrema(0.455, lossy_y(0.455), 0.1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].kind == ExtremumKind::Max);
  CHECK(one[0].confirmed);
  CHECK(std::abs(one[0].omega_env - 0.6295) < 1e-3);

  const auto sad = find_extrema(0.3759, lossy_y(0.3759), 0.1);
  REQUIRE(sad.size() == 1);
  CHECK(sad[0].kind == ExtremumKind::Saddle);

  const auto two = find_extrema(0.41, lossy_y(0.41), 0.1);
  REQUIRE(two.size() == 2);
  CHECK(two[0].kind == ExtremumKind::Min);
  CHECK(two[1].kind == ExtremumKind::Max);

  CHECK(find_extrema(1.0, 0.0, 1.0).empty());
}

TEST_CASE("extrema are confirmed by a direct sweep") {
  for (auto [t, y] : {std::pair{0.455, lossy_y(0.455)}, std::pair{1.2, 0.1002},
                      std::pair{0.41, lossy_y(0.41)}, std::pair{1.0, 0.2}}) {
    const auto ex = find_extrema(t, y, 0.1);
    const double top = threshold_frequency(t, y, 0.1);
    const int N = 400;
    std::vector<double> ws(N), cs(N);
    for (int i = 0; i < N; ++i) {
      ws[i] = 1e-3 + (top - 1e-3) * i / (N - 1);
      cs[i] = cap(t, y, ws[i], 0.1);
    }
    for (const auto& e : ex) {
      CHECK(e.confirmed);
      // a sampled local extreme of the same kind within one cell
      bool found = false;
      for (int i = 1; i + 1 < N; ++i) {
        const bool is_max = cs[i] >= cs[i - 1] && cs[i] >= cs[i + 1];
        const bool is_min = cs[i] <= cs[i - 1] && cs[i] <= cs[i + 1];
        const bool kind_ok = e.kind == ExtremumKind::Max ? is_max : is_min;
        if (kind_ok && std::abs(ws[i] - e.omega_env) <= (ws[1] - ws[0])) found = true;
      }
      CAPTURE(t);
      CAPTURE(e.omega_env);
      CHECK(found);
    }
  }
}

TEST_CASE("scenario classification") {
  auto kind = [](double tau, double n = 0.1) { return classify_scenario(tau, lossy_y(tau), n).kind; };
  CHECK(kind(0.34) == ScenarioKind::Monotonic);
  CHECK(kind(0.3759) == ScenarioKind::Saddle);
  CHECK(kind(0.41) == ScenarioKind::MaxThenMin);
  CHECK(kind(0.455) == ScenarioKind::OneMaximum);
  CHECK(classify_scenario(1.2, 0.1002, 0.1).kind == ScenarioKind::OneMaximum);
  CHECK(classify_scenario(1.9, 0.45045, 0.1).kind == ScenarioKind::Monotonic);
  for (double t : {-0.125, -0.5, -1.0, -4.0}) {
    CHECK(classify_scenario(t, std::abs(1.0 - t) * 0.5005, 0.1).kind == ScenarioKind::Monotonic);
  }
  CHECK_THROWS_AS(classify_scenario(0.5, 0.2, 0.1), UnphysicalChannel);
}

TEST_CASE("saddle noise sits between the two-extrema and monotonic zones") {
  const auto yt = saddle_noise(0.3759, 0.1);
  REQUIRE(yt.has_value());
  CHECK(std::abs(*yt - 0.3126717) < 2e-6);
  CHECK(classify_numeric(0.3759, (*yt + 0.31205) / 2, 0.1).kind == ScenarioKind::MaxThenMin);
  CHECK(classify_numeric(0.3759, *yt * 1.005, 0.1).kind == ScenarioKind::Monotonic);
  CHECK_FALSE(saddle_noise(-1.0, 0.1).has_value());
}

TEST_CASE("fast paths agree with the numeric path") {
  gen::Source src(91);
  int n_checked = 0;
  while (n_checked < 30) {
    const auto c = src.channel(-2.0, 3.0);
    const double n = src.log_uniform(0.05, 2.0);
    const auto fast = classify_scenario(c.tau, c.y, n);
    if (!fast.fast_path) continue;
    const auto slow = classify_numeric(c.tau, c.y, n);
    CAPTURE(c.tau);
    CAPTURE(c.y);
    CAPTURE(n);
    CHECK(fast.kind == slow.kind);
    ++n_checked;
  }
}

TEST_CASE("thermal noise is the worst case above omega_thr") {
  gen::Source src(101);
  for (int k = 0; k < 10; ++k) {
    const auto c = src.channel();
    const double n = src.log_uniform(0.05, 3.0);
    const double lo = threshold_frequency(c.tau, c.y, n);
    const int N = 41;
    std::vector<double> cs(N);
    for (int i = 0; i < N; ++i) cs[i] = cap(c.tau, c.y, lo + (1.0 - lo) * i / (N - 1), n);
    for (int i = 1; i < N; ++i) CHECK(cs[i] - cs[i - 1] <= 1e-12);
    for (int i = 1; i + 1 < N; ++i) CHECK(cs[i + 1] - 2 * cs[i] + cs[i - 1] >= -1e-12);
  }
}

TEST_CASE("omega_thr shrinks with the budget") {
  CHECK(threshold_frequency(0.7, 0.3, 0.0) == 1.0);
  double prev = 1.0;
  for (double n : {0.01, 0.1, 0.5, 1.0, 5.0, 50.0}) {
    const double w = threshold_frequency(0.7, 0.3, n);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("sweeps") {
  SweepSpec s;
  s.param = SweepParam::OmegaEnv;
  s.lo = 0.01;
  s.hi = 1.0;
  s.steps = 100;
  s.base.tau = 1.0;
  s.base.m_env = 0.1;
  s.base.n_bar = 1.0;
  auto t = sweep_capacity(s);
  REQUIRE(t.rows.size() == 100);
  REQUIRE(t.crossing.has_value());
  CHECK(std::abs(*t.crossing - 0.362) < 1e-3);
  // y = 0.1 < y_c: one interior maximum, then decreasing past omega_thr
  double cmax = -1.0;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].status == "ok");
    if (t.rows[i].solution.capacity_bits > cmax) {
      cmax = t.rows[i].solution.capacity_bits;
      imax = i;
    }
  }
  CHECK(imax > 0);
  CHECK(t.rows[imax].omega_env < *t.crossing);
  for (std::size_t i = imax + 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].solution.capacity_bits <= t.rows[i - 1].solution.capacity_bits);
  }
  int flips = 0;
  for (const auto& r : t.rows) flips += r.regime_change;
  CHECK(flips == 1);

  s.param = SweepParam::Tau;
  s.lo = 1.0;
  s.hi = 10.0;
  s.base.omega_env = 0.5;
  t = sweep_capacity(s);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].solution.capacity_bits <= t.rows[i - 1].solution.capacity_bits + 1e-12);
  }
  CHECK(t.rows.front().solution.capacity_bits == doctest::Approx(2.0));

  s.param = SweepParam::NBar;
  s.lo = 0.1;
  s.hi = 5.0;
  s.base.tau = 1.0;
  s.base.omega_env = 0.2;
  s.base.m_env.reset();
  s.base.y = 0.1;
  t = sweep_capacity(s);
  flips = 0;
  for (const auto& r : t.rows) flips += r.regime_change;
  CHECK(flips == 1);
  REQUIRE(t.crossing.has_value());
  CHECK(std::abs(*t.crossing - 2.24) < 1e-12);

  // unphysical points become rows, the sweep carries on
  s.param = SweepParam::Y;
  s.base.tau = 0.5;
  s.lo = 0.1;
  s.hi = 0.5;
  s.steps = 5;
  t = sweep_capacity(s);
  CHECK(t.rows[0].status == "unphysical");
  CHECK(t.rows[1].status == "unphysical");
  CHECK(t.rows[2].status == "ok");

  s.steps = 1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.steps = 5;
  s.base.m_env = 0.1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  CHECK_THROWS_AS(parse_sweep_param("omega"), DomainError);
}

TEST_CASE("zone map") {
  const auto cells = zone_map(0.1, 0.3, 0.5, 3, 0.2, 0.4, 3);
  REQUIRE(cells.size() == 9);
  CHECK(cells[0].tau == doctest::Approx(0.3));
  CHECK(cells[0].label == "unphysical");
  CHECK(cells[8].tau == doctest::Approx(0.5));
  CHECK(cells[8].y == doctest::Approx(0.4));
}
