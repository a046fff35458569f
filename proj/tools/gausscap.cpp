// gausscap: capacities, sweeps, scenario labels and a self-check from the
// command line. Exit codes: 0 ok, 1 verify failed, 2 bad input, 3 solver failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gausscap/analysis.hpp"
#include "gausscap/capacity.hpp"
#include "gausscap/sweep_io.hpp"
#include "gausscap/verify.hpp"

using namespace gausscap;
using ojson = nlohmann::ordered_json;

namespace {

struct ChannelArgs {
  double tau = 1.0;
  double m_env = 0.0;
  double y = 0.0;
  double omega_env = 1.0;
  double n_bar = 0.0;
  CLI::Option* m_opt = nullptr;
  CLI::Option* y_opt = nullptr;

  bool has_m() const { return m_opt && m_opt->count() > 0; }
  bool has_y() const { return y_opt && y_opt->count() > 0; }
};

struct OutputArgs {
  std::string format = "csv";
  std::string path;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_channel(CLI::App* app, ChannelArgs& c, bool need_omega) {
  app->add_option("--tau", c.tau, "transmissivity / gain (negative: phase conjugation)")->required();
  c.m_opt = app->add_option("--m-env", c.m_env, "environment thermal photons");
  c.y_opt = app->add_option("--y", c.y, "noise magnitude");
  c.m_opt->excludes(c.y_opt);
  if (need_omega) {
    app->add_option("--omega-env", c.omega_env, "noise frequency (>1 is folded to 1/omega)")
        ->capture_default_str();
  }
}

void add_output(CLI::App* app, OutputArgs& o) {
  app->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--output,-o", o.path, "output file (default stdout)");
}

void add_solver(CLI::App* app, SolverConfig& s) {
  app->add_option("--abs-tol", s.abs_tol, "root tolerance on omega_in")->capture_default_str();
  app->add_option("--max-iter", s.max_iter, "bisection iteration cap")->capture_default_str();
  app->add_option("--bracket-grid", s.bracket_grid, "sign-scan points")->capture_default_str();
}

void require_one_noise(const ChannelArgs& c) {
  if (c.has_m() == c.has_y()) throw InputError("give exactly one of --m-env and --y");
}

FiducialChannel make_channel(const ChannelArgs& c) {
  require_one_noise(c);
  if (c.has_y()) return FiducialChannel::from_noise(c.tau, c.y, c.omega_env);
  return FiducialChannel::from_environment(c.tau, c.m_env, c.omega_env);
}

double noise_of(const ChannelArgs& c) { return make_channel(c).y(); }

ojson echo(const ChannelArgs& c) {
  ojson j;
  j["tau"] = c.tau;
  if (c.has_m()) j["m_env"] = c.m_env;
  if (c.has_y()) j["y"] = c.y;
  j["omega_env"] = c.omega_env;
  j["n_bar"] = c.n_bar;
  return j;
}

ojson echo(const SolverConfig& s) {
  return {{"abs_tol", s.abs_tol}, {"max_iter", s.max_iter}, {"bracket_grid", s.bracket_grid}};
}

// Opens --output or falls back to stdout.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file) throw InputError("cannot open output file " + path);
    os = file.get();
  }
  std::ostream& out() { return *os; }
};

int run_capacity(const ChannelArgs& c, const SolverConfig& solver, const OutputArgs& o) {
  const auto ch = make_channel(c);
  const auto sol = capacity(ch, EnergyBudget(c.n_bar), solver);
  Sink sink(o.path);
  if (o.format == "json") {
    ojson j;
    j["metadata"] = {{"tool", "gausscap"}, {"version", kToolVersion}, {"command", "capacity"},
                     {"config", echo(c)}, {"solver", echo(solver)}};
    j["channel"] = {{"tau", ch.tau()}, {"y", ch.y()}, {"omega_env", ch.omega_env()},
                    {"quadratures_swapped", ch.quadratures_swapped()}};
    j["solution"] = solution_json(sol);
    sink.out() << j.dump(2) << '\n';
  } else {
    write_solution_csv(sink.out(), ch, c.n_bar, sol);
  }
  return 0;
}

struct SweepArgs {
  std::string param;
  double lo = 0.0, hi = 1.0;
  int steps = 2;
  bool log = false;
};

int run_sweep(const ChannelArgs& c, const SweepArgs& s, const SolverConfig& solver,
              const OutputArgs& o) {
  require_one_noise(c);
  SweepSpec spec;
  spec.param = parse_sweep_param(s.param);
  spec.lo = s.lo;
  spec.hi = s.hi;
  spec.steps = s.steps;
  spec.log_spacing = s.log;
  spec.base.tau = c.tau;
  spec.base.omega_env = c.omega_env;
  spec.base.n_bar = c.n_bar;
  if (c.has_m()) spec.base.m_env = c.m_env;
  else spec.base.y = c.y;
  spec.solver = solver;
  spec.validate();
  const auto table = sweep_capacity(spec);

  Sink sink(o.path);
  if (o.format == "json") {
    ojson meta = {{"tool", "gausscap"}, {"version", kToolVersion}, {"command", "sweep"},
                  {"config", echo(c)},
                  {"sweep", {{"param", s.param}, {"lo", s.lo}, {"hi", s.hi}, {"steps", s.steps},
                             {"log", s.log}}},
                  {"solver", echo(solver)}};
    sink.out() << sweep_json(table, meta).dump(2) << '\n';
  } else {
    write_sweep_csv(sink.out(), table);
  }
  return 0;
}

int run_classify(const ChannelArgs& c, const OutputArgs& o) {
  const double y = noise_of(c);
  const auto sc = classify_scenario(c.tau, y, c.n_bar);
  Sink sink(o.path);
  if (o.format == "json") {
    ojson j;
    j["metadata"] = {{"tool", "gausscap"}, {"version", kToolVersion}, {"command", "classify"},
                     {"config", echo(c)}};
    j["y"] = y;
    j["scenario"] = std::string(to_string(sc.kind));
    j["fast_path"] = sc.fast_path;
    j["irregular"] = sc.irregular;
    auto ex = ojson::array();
    for (const auto& e : sc.extrema) {
      ex.push_back({{"omega_env", std::stod(format_number(e.omega_env))},
                    {"kind", std::string(to_string(e.kind))},
                    {"confirmed", e.confirmed}});
    }
    j["extrema"] = ex;
    sink.out() << j.dump(2) << '\n';
  } else {
    auto& os = sink.out();
    os << "scenario," << to_string(sc.kind) << '\n';
    for (const auto& e : sc.extrema) {
      os << "extremum," << format_number(e.omega_env) << ',' << to_string(e.kind) << ','
         << (e.confirmed ? "confirmed" : "unconfirmed") << '\n';
    }
  }
  return 0;
}

struct ZoneArgs {
  double tau_lo = -1.0, tau_hi = 2.0;
  int tau_steps = 61;
  double y_lo = 0.0, y_hi = 1.0;
  int y_steps = 51;
};

int run_zones(double n_bar, const ZoneArgs& z, const OutputArgs& o) {
  const auto cells = zone_map(n_bar, z.tau_lo, z.tau_hi, z.tau_steps, z.y_lo, z.y_hi, z.y_steps);
  Sink sink(o.path);
  if (o.format == "json") {
    ojson j;
    j["metadata"] = {{"tool", "gausscap"},
                     {"version", kToolVersion},
                     {"command", "zones"},
                     {"config",
                      {{"n_bar", n_bar}, {"tau_lo", z.tau_lo}, {"tau_hi", z.tau_hi},
                       {"tau_steps", z.tau_steps}, {"y_lo", z.y_lo}, {"y_hi", z.y_hi},
                       {"y_steps", z.y_steps}}}};
    auto rows = ojson::array();
    for (const auto& c : cells) {
      rows.push_back({{"tau", std::stod(format_number(c.tau))},
                      {"y", std::stod(format_number(c.y))},
                      {"scenario", c.label}});
    }
    j["cells"] = rows;
    sink.out() << j.dump(2) << '\n';
  } else {
    auto& os = sink.out();
    os << "tau,y,scenario\n";
    for (const auto& c : cells) {
      os << format_number(c.tau) << ',' << format_number(c.y) << ',' << c.label << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian classical capacity of single-mode fiducial channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ChannelArgs cap_ch, sw_ch, cl_ch;
  SolverConfig cap_solver, sw_solver;
  OutputArgs cap_out, sw_out, cl_out, zn_out;
  SweepArgs sweep;
  ZoneArgs zones;
  double zone_n = 0.1;
  VerifyOptions vopt;

  auto* cap = app.add_subcommand("capacity", "capacity and optimal encoding of one channel");
  add_channel(cap, cap_ch, true);
  cap->add_option("--n-bar", cap_ch.n_bar, "mean input photons")->required();
  add_solver(cap, cap_solver);
  add_output(cap, cap_out);

  auto* sw = app.add_subcommand("sweep", "capacity along one parameter");
  add_channel(sw, sw_ch, true);
  sw->add_option("--n-bar", sw_ch.n_bar, "mean input photons")->required();
  sw->add_option("--param", sweep.param, "omega-env, tau, n-bar, y or m-env")
      ->required()
      ->check(CLI::IsMember({"omega-env", "tau", "n-bar", "y", "m-env"}));
  sw->add_option("--lo", sweep.lo)->required();
  sw->add_option("--hi", sweep.hi)->required();
  sw->add_option("--steps", sweep.steps)->required();
  sw->add_flag("--log", sweep.log, "geometric spacing");
  add_solver(sw, sw_solver);
  add_output(sw, sw_out);

  auto* cl = app.add_subcommand("classify", "shape of capacity versus omega_env");
  add_channel(cl, cl_ch, false);
  cl->add_option("--n-bar", cl_ch.n_bar, "mean input photons")->required();
  add_output(cl, cl_out);

  auto* zn = app.add_subcommand("zones", "scenario labels on a (tau, y) grid");
  zn->add_option("--n-bar", zone_n, "mean input photons")->capture_default_str();
  zn->add_option("--tau-lo", zones.tau_lo)->capture_default_str();
  zn->add_option("--tau-hi", zones.tau_hi)->capture_default_str();
  zn->add_option("--tau-steps", zones.tau_steps)->capture_default_str();
  zn->add_option("--y-lo", zones.y_lo)->capture_default_str();
  zn->add_option("--y-hi", zones.y_hi)->capture_default_str();
  zn->add_option("--y-steps", zones.y_steps)->capture_default_str();
  add_output(zn, zn_out);

  auto* vf = app.add_subcommand("verify", "self-check against frozen values and the grid oracle");
  vf->add_option("--resolution", vopt.oracle_resolution, "oracle grid resolution")
      ->check(CLI::Range(50, 100000))
      ->capture_default_str();
  vf->add_option("--lattice", vopt.lattice_per_axis, "lattice points per axis")
      ->check(CLI::Range(2, 20))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cap) return run_capacity(cap_ch, cap_solver, cap_out);
    if (*sw) return run_sweep(sw_ch, sweep, sw_solver, sw_out);
    if (*cl) return run_classify(cl_ch, cl_out);
    if (*zn) return run_zones(zone_n, zones, zn_out);
    if (*vf) {
      const auto rep = run_verify(std::cout, vopt);
      std::cout << rep.passed << " passed, " << rep.failed << " failed\n";
      return rep.ok() ? 0 : 1;
    }
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " [bracket " << format_number(e.bracket_lo())
              << ", " << format_number(e.bracket_hi()) << "]\n";
    return 3;
  } catch (const UnphysicalChannel& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
