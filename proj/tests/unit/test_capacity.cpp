#include <cmath>
#include <vector>

#include "doctest.h"
#include "gausscap/capacity.hpp"
#include "gen.hpp"

using namespace gausscap;
using doctest::Approx;

namespace {

double cap(double tau, double y, double w, double n) {
  return capacity(FiducialChannel::from_noise(tau, y, w), EnergyBudget(n)).capacity_bits;
}

double input_photons(const CapacitySolution& s) {
  const double nu = s.m_bar_in + 0.5;
  return 0.5 * (nu / s.omega_bar_in + nu * s.omega_bar_in - 1.0);
}

}  // namespace

TEST_CASE("energy threshold") {
  CHECK(energy_threshold(FiducialChannel::from_noise(2.0, 0.7, 1.0)) == Approx(0.0));
  CHECK(std::abs(energy_threshold(FiducialChannel::from_noise(1.0, 0.1, 0.2)) - 2.24) < 1e-12);
  CHECK_THROWS_AS(energy_threshold(FiducialChannel::from_noise(0.0, 0.5, 0.5)), DegenerateChannel);

  gen::Source src(21);
  for (int k = 0; k < 200; ++k) {
    const auto c = src.channel();
    const auto ch = FiducialChannel::from_noise(c.tau, c.y, c.omega_env);
    const double n = energy_threshold(ch);
    CHECK(std::abs(threshold_frequency(c.tau, c.y, n) - ch.omega_env()) < 1e-10);
  }
}

TEST_CASE("threshold frequency") {
  CHECK(std::abs(threshold_frequency(1.0, 0.1, 1.0) - 0.362) < 1e-3);
  CHECK(std::abs(threshold_frequency(-1.0, 1.2, 1.0) - 0.59) < 5e-3);
  CHECK(std::abs(threshold_frequency(0.41, 0.29530, 0.1) - 0.92) < 5e-3);
  CHECK(threshold_frequency(0.7, 0.4, 0.0) == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(threshold_frequency(0.0, 0.5, 1.0), DegenerateChannel);
  CHECK_THROWS_AS(threshold_frequency(0.5, 0.1, 1.0), UnphysicalChannel);
  // decreasing in the budget
  double prev = 1.0;
  for (double n = 0.05; n < 20.0; n *= 1.5) {
    const double w = threshold_frequency(1.3, 0.4, n);
    CHECK(w < prev);
    CHECK(w > 0.0);
    prev = w;
  }
}

TEST_CASE("capacity above threshold") {
  const auto perfect = FiducialChannel::from_environment(1.0, 0.0, 1.0);
  CHECK(capacity_above(perfect, EnergyBudget(1.0)).capacity_bits == Approx(2.0).epsilon(1e-14));

  const auto add = FiducialChannel::from_noise(1.0, 0.1, 1.0);
  const auto s = capacity_above(add, EnergyBudget(1.0));
  CHECK(std::abs(s.capacity_bits - (g(1.1) - g(0.1))) < 1e-14);
  CHECK(std::abs(s.capacity_bits - 1.613117026833) < 1e-9);
  CHECK(s.omega_bar_in == 1.0);
  CHECK(s.m_bar_in == Approx(1.0).epsilon(1e-14));
  CHECK(s.residual == 0.0);
  CHECK(s.regime == Regime::AboveThreshold);

  CHECK_THROWS_AS(capacity_above(FiducialChannel::from_noise(1.0, 0.1, 0.2), EnergyBudget(1.0)),
                  PreconditionError);
}

TEST_CASE("below-threshold residual") {
  const auto ch = FiducialChannel::from_noise(1.0, 0.1, 0.2);
  const EnergyBudget n(1.0);
  const auto iv = feasible_input_frequencies(1.0);
  CHECK(iv.lo * iv.hi == Approx(1.0));

  // one sign change on the default scan, bracketing the root
  const int pts = 64;
  int changes = 0;
  double prev = below_residual(iv.lo, ch, n);
  double bracket_lo = 0, bracket_hi = 0;
  for (int i = 1; i < pts; ++i) {
    const double w = iv.lo * std::pow(1.0 / iv.lo, static_cast<double>(i) / (pts - 1));
    const double f = below_residual(w, ch, n);
    if ((f < 0) != (prev < 0)) {
      ++changes;
      bracket_hi = w;
      bracket_lo = iv.lo * std::pow(1.0 / iv.lo, static_cast<double>(i - 1) / (pts - 1));
    }
    prev = f;
  }
  CHECK(changes == 1);
  CHECK(bracket_lo < 0.340012106);
  CHECK(bracket_hi > 0.340012106);

  // at the threshold budget the resonant letter is stationary
  const double nt = energy_threshold(ch);
  CHECK(std::abs(below_residual(ch.omega_env(), ch, EnergyBudget(nt))) < 1e-9);

  CHECK_THROWS_AS(below_residual(0.5, FiducialChannel::from_noise(1.0, 0.1, 1.0), n),
                  PreconditionError);
  CHECK_THROWS_AS(below_residual(0.1, ch, n), DomainError);
  CHECK_THROWS_AS(below_residual(10.0, ch, n), DomainError);
}

TEST_CASE("capacity below threshold") {
  const auto ch = FiducialChannel::from_noise(1.0, 0.1, 0.2);
  const auto s = capacity_below(ch, EnergyBudget(1.0));
  CHECK(s.regime == Regime::BelowThreshold);
  CHECK(s.omega_in > 0.2);
  CHECK(s.omega_in < 1.0);
  CHECK(std::abs(s.omega_in - 0.340012106) < 1e-8);
  CHECK(std::abs(s.capacity_bits - 1.703980571405) < 1e-9);
  CHECK(s.root_count == 1);
  CHECK(std::abs(s.residual) < 1e-9);
  CHECK(std::abs(s.capacity_bits - (g(s.m_bar_out) - g(s.m_out))) < 1e-14);

  CHECK_THROWS_AS(capacity_below(ch, EnergyBudget(3.0)), PreconditionError);
  CHECK_THROWS_AS(capacity_below(FiducialChannel::from_noise(1.0, 0.1, 1.0), EnergyBudget(1.0)),
                  PreconditionError);

  SolverConfig tight;
  tight.max_iter = 3;
  CHECK_THROWS_AS(capacity_below(ch, EnergyBudget(1.0), tight), SolverError);
  try {
    capacity_below(ch, EnergyBudget(1.0), tight);
  } catch (const SolverError& e) {
    CHECK(e.bracket_lo() < e.bracket_hi());
  }
}

TEST_CASE("frozen reference capacities") {
  struct Ref {
    double tau, y, w, n, bits;
  };
  const Ref refs[] = {
      {1.0, 0.1, 0.2, 1.0, 1.703980571405},  {1.0, 0.1, 1.0, 1.0, 1.613117026833},
      {1.0, 0.1, 0.2, 3.0, 2.865706323980},  {-1.0, 1.2, 0.3, 1.0, 0.991077109831},
      {0.5, 0.25, 0.3, 0.5, 1.042521725863}, {2.0, 0.6, 0.1, 0.1, 0.250904267705},
      {0.41, 0.29559, 0.5, 0.1, 0.267702091250}, {1.5, 0.3, 0.7, 2.0, 2.009435093098},
  };
  for (const auto& r : refs) {
    CAPTURE(r.tau);
    CAPTURE(r.w);
    CHECK(std::abs(cap(r.tau, r.y, r.w, r.n) - r.bits) < 1e-9);
  }
}

TEST_CASE("capacity dispatch") {
  const auto zero = capacity(FiducialChannel::from_noise(0.0, 0.7, 0.4), EnergyBudget(2.0));
  CHECK(zero.regime == Regime::Degenerate);
  CHECK(zero.capacity_bits == 0.0);

  const auto perfect = capacity(FiducialChannel::from_environment(1.0, 0.0, 1.0), EnergyBudget(0.5));
  CHECK(std::abs(perfect.capacity_bits - 1.377443751081734) < 1e-12);
  CHECK(std::isinf(perfect.beta_out));

  const auto above = capacity(FiducialChannel::from_noise(1.0, 0.1, 0.2), EnergyBudget(3.0));
  CHECK(above.regime == Regime::AboveThreshold);
  CHECK(std::abs(above.capacity_bits - 2.865706323980) < 1e-9);

  const auto nothing = capacity(FiducialChannel::from_noise(1.0, 0.1, 0.2), EnergyBudget(0.0));
  CHECK(nothing.capacity_bits == 0.0);

  SolverConfig bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = {};
  bad.max_iter = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("thermal noise means coherent-state encoding") {
  const auto s = capacity(FiducialChannel::from_noise(0.6, 0.5, 1.0), EnergyBudget(1.7));
  CHECK(s.omega_bar_in == 1.0);
  CHECK(std::abs(s.m_bar_in - 1.7) < 1e-14);
}

TEST_CASE("infinite squeezing limit") {
  for (double tau : {-1.0, 0.5, 1.0, 2.0}) {
    for (double n : {0.1, 1.0, 3.0}) {
      const auto ch = FiducialChannel::from_environment(tau, 0.1, 1e-6);
      const auto s = capacity(ch, EnergyBudget(n));
      CHECK(std::abs(s.capacity_bits - std::log2(1.0 + 2.0 * n)) < 1e-3);
      CHECK(std::abs(s.omega_in - 1.0 / (1.0 + 2.0 * n)) < 1e-3);
    }
  }
}

TEST_CASE("regime continuity and resonance at the threshold") {
  gen::Source src(31);
  int tested = 0;
  while (tested < 100) {
    const auto c = src.channel();
    if (c.omega_env > 0.95) continue;
    const auto ch = FiducialChannel::from_noise(c.tau, c.y, c.omega_env);
    const double nt = energy_threshold(ch);
    const double eps = 1e-9 * (1.0 + nt);
    const auto lo = capacity_below(ch, EnergyBudget(nt - eps));
    const auto hi = capacity_above(ch, EnergyBudget(nt + eps));
    CAPTURE(c.tau);
    CAPTURE(c.y);
    CAPTURE(c.omega_env);
    CHECK(std::abs(lo.capacity_bits - hi.capacity_bits) < 1e-6);
    CHECK(std::abs(lo.omega_in - ch.omega_env()) < 1e-6);
    ++tested;
  }
}

TEST_CASE("structure of the optimal encoding") {
  gen::Source src(41);
  for (int k = 0; k < 300; ++k) {
    const auto ch = src.fiducial();
    const double n = src.log_uniform(0.01, 20.0);
    const auto s = capacity(ch, EnergyBudget(n));
    CAPTURE(ch.tau());
    CAPTURE(ch.y());
    CAPTURE(ch.omega_env());
    CAPTURE(n);
    CHECK(std::abs(input_photons(s) - n) < 1e-9 * (1.0 + n));
    CHECK(s.capacity_bits >= 0.0);
    CHECK(s.capacity_bits <= g(n) + 1e-12);
    CHECK(std::abs(s.capacity_bits - (g(s.m_bar_out) - g(s.m_out))) < 1e-12);
    if (s.regime == Regime::AboveThreshold) {
      CHECK(s.omega_bar_out == 1.0);
      CHECK(std::abs(s.omega_in - ch.omega_env()) < 1e-12);
      CHECK(std::abs(s.omega_out - ch.omega_env()) < 1e-12);
    } else {
      const double nu = s.m_bar_in + 0.5;
      CHECK(std::abs(nu / s.omega_bar_in - 1.0 / (2.0 * s.omega_in)) < 1e-10);
      CHECK(nu * s.omega_bar_in - 0.5 * s.omega_in >= -1e-12);
    }
  }
}

TEST_CASE("more noise never helps") {
  gen::Source src(51);
  for (int k = 0; k < 40; ++k) {
    const auto c = src.channel();
    const double n = src.log_uniform(0.05, 5.0);
    double prev = cap(c.tau, c.y, c.omega_env, n);
    for (int j = 1; j <= 10; ++j) {
      const double now = cap(c.tau, c.y * (1.0 + 0.2 * j), c.omega_env, n);
      CHECK(now <= prev + 1e-12);
      prev = now;
    }
  }
}
