#pragma once

// CSV and JSON emission of sweep tables and single solutions. Numbers are
// written with 12 significant digits, '.' decimal separator, ',' delimiter
// and LF line endings.

#include <iosfwd>
#include <string>
#include <vector>

#include "gausscap/analysis.hpp"
#include "json.hpp"

namespace gausscap {

inline constexpr const char* kToolVersion = "0.1.0";

/// printf("%.12g") with NaN and infinities spelled nan, inf, -inf.
std::string format_number(double x);

/// Column names of the sweep CSV, in order.
const std::vector<std::string>& sweep_columns();

void write_sweep_csv(std::ostream& os, const SweepTable& table);

/// Parses what write_sweep_csv produced. Throws Error on malformed input.
SweepTable read_sweep_csv(std::istream& is);

/// {"metadata": {...}, "rows": [...]}; rows mirror the CSV columns.
nlohmann::ordered_json sweep_json(const SweepTable& table, const nlohmann::ordered_json& metadata);

nlohmann::ordered_json solution_json(const CapacitySolution& s);

/// One header line plus one row, same field names as the sweep columns
/// after the channel block.
void write_solution_csv(std::ostream& os, const FiducialChannel& ch, double n_bar,
                        const CapacitySolution& s);

}  // namespace gausscap
