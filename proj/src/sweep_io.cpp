#include "gausscap/sweep_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace gausscap {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

// channel block, then solution block, then threshold block
const std::vector<std::string> kColumns = {
    "status",        "tau",         "y",         "omega_env",  "n_bar",
    "regime",        "capacity_bits", "omega_in", "omega_bar_in", "m_bar_in",
    "omega_out",     "m_out",       "omega_bar_out", "m_bar_out", "beta_out",
    "beta_bar_out",  "n_bar_out",   "residual",  "root_count", "n_bar_thr",
    "omega_thr",     "regime_change"};

constexpr std::size_t kSolutionFirst = 5;  // "regime"
constexpr std::size_t kSolutionLast = 18;  // "root_count"

std::vector<std::string> solution_fields(const CapacitySolution& s) {
  return {std::string(to_string(s.regime)),
          format_number(s.capacity_bits),
          format_number(s.omega_in),
          format_number(s.omega_bar_in),
          format_number(s.m_bar_in),
          format_number(s.omega_out),
          format_number(s.m_out),
          format_number(s.omega_bar_out),
          format_number(s.m_bar_out),
          format_number(s.beta_out),
          format_number(s.beta_bar_out),
          format_number(s.n_bar_out),
          format_number(s.residual),
          std::to_string(s.root_count)};
}

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  if (s.empty()) throw Error("empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw Error("bad numeric field '" + s + "'");
  return v;
}

Regime parse_regime(const std::string& s) {
  for (auto r : {Regime::AboveThreshold, Regime::BelowThreshold, Regime::Degenerate}) {
    if (s == to_string(r)) return r;
  }
  throw Error("bad regime field '" + s + "'");
}

nlohmann::ordered_json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // round to what the CSV carries so both formats agree
  return std::strtod(format_number(x).c_str(), nullptr);
}

}  // namespace

const std::vector<std::string>& sweep_columns() { return kColumns; }

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  std::vector<std::string> header{std::string(to_string(table.param))};
  header.insert(header.end(), kColumns.begin(), kColumns.end());
  write_line(os, header);
  for (const auto& row : table.rows) {
    std::vector<std::string> cells{format_number(row.param), row.status, format_number(row.tau),
                                   format_number(row.y), format_number(row.omega_env),
                                   format_number(row.n_bar)};
    if (row.status == "ok") {
      const auto sol = solution_fields(row.solution);
      cells.insert(cells.end(), sol.begin(), sol.end());
    } else {
      cells.emplace_back("none");
      for (std::size_t i = kSolutionFirst + 1; i <= kSolutionLast; ++i) cells.emplace_back("nan");
    }
    cells.push_back(format_number(row.n_bar_thr));
    cells.push_back(format_number(row.omega_thr));
    cells.push_back(row.regime_change ? "1" : "0");
    write_line(os, cells);
  }
}

SweepTable read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("empty CSV");
  const auto header = split(line);
  if (header.size() != kColumns.size() + 1) throw Error("unexpected CSV header width");
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (header[i + 1] != kColumns[i]) throw Error("unexpected CSV column '" + header[i + 1] + "'");
  }
  SweepTable table;
  table.param = parse_sweep_param(header[0]);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != header.size()) throw Error("CSV row has wrong width: " + line);
    SweepRow row;
    row.param = parse_number(c[0]);
    row.status = c[1];
    row.tau = parse_number(c[2]);
    row.y = parse_number(c[3]);
    row.omega_env = parse_number(c[4]);
    row.n_bar = parse_number(c[5]);
    if (row.status == "ok") {
      auto& s = row.solution;
      s.regime = parse_regime(c[6]);
      double* fields[] = {&s.capacity_bits, &s.omega_in,  &s.omega_bar_in, &s.m_bar_in,
                          &s.omega_out,     &s.m_out,     &s.omega_bar_out, &s.m_bar_out,
                          &s.beta_out,      &s.beta_bar_out, &s.n_bar_out, &s.residual};
      for (std::size_t k = 0; k < std::size(fields); ++k) *fields[k] = parse_number(c[7 + k]);
      s.root_count = static_cast<int>(parse_number(c[19]));
    }
    row.n_bar_thr = parse_number(c[20]);
    row.omega_thr = parse_number(c[21]);
    row.regime_change = c[22] == "1";
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::ordered_json solution_json(const CapacitySolution& s) {
  nlohmann::ordered_json j;
  j["regime"] = std::string(to_string(s.regime));
  j["capacity_bits"] = number(s.capacity_bits);
  j["omega_in"] = number(s.omega_in);
  j["omega_bar_in"] = number(s.omega_bar_in);
  j["m_bar_in"] = number(s.m_bar_in);
  j["omega_out"] = number(s.omega_out);
  j["m_out"] = number(s.m_out);
  j["omega_bar_out"] = number(s.omega_bar_out);
  j["m_bar_out"] = number(s.m_bar_out);
  j["beta_out"] = number(s.beta_out);
  j["beta_bar_out"] = number(s.beta_bar_out);
  j["n_bar_out"] = number(s.n_bar_out);
  j["residual"] = number(s.residual);
  j["root_count"] = s.root_count;
  return j;
}

nlohmann::ordered_json sweep_json(const SweepTable& table, const nlohmann::ordered_json& metadata) {
  nlohmann::ordered_json out;
  out["metadata"] = metadata;
  out["metadata"]["param"] = std::string(to_string(table.param));
  out["metadata"]["crossing"] = table.crossing ? number(*table.crossing) : nullptr;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json j;
    j["param"] = number(row.param);
    j["status"] = row.status;
    if (!row.message.empty()) j["message"] = row.message;
    j["tau"] = number(row.tau);
    j["y"] = number(row.y);
    j["omega_env"] = number(row.omega_env);
    j["n_bar"] = number(row.n_bar);
    if (row.status == "ok") {
      const auto sol = solution_json(row.solution);
      for (const auto& [k, v] : sol.items()) j[k] = v;
    }
    j["n_bar_thr"] = number(row.n_bar_thr);
    j["omega_thr"] = number(row.omega_thr);
    j["regime_change"] = row.regime_change;
    rows.push_back(std::move(j));
  }
  out["rows"] = std::move(rows);
  return out;
}

void write_solution_csv(std::ostream& os, const FiducialChannel& ch, double n_bar,
                        const CapacitySolution& s) {
  std::vector<std::string> header(kColumns.begin() + 1, kColumns.begin() + kSolutionLast + 1);
  write_line(os, header);
  std::vector<std::string> cells{format_number(ch.tau()), format_number(ch.y()),
                                 format_number(ch.omega_env()), format_number(n_bar)};
  const auto sol = solution_fields(s);
  cells.insert(cells.end(), sol.begin(), sol.end());
  write_line(os, cells);
}

}  // namespace gausscap
