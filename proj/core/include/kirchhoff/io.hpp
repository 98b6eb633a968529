#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kirchhoff/bounds.hpp"
#include "kirchhoff/comparison.hpp"
#include "kirchhoff/dynamics.hpp"

namespace kirchhoff {

using Json = nlohmann::json;

/// Shortest decimal form that parses back to the same double; "inf", "-inf"
/// and "nan" for non-finite values.
std::string format_double(double x);

/// A column-oriented result table written as CSV or as a JSON array of
/// objects. Cells keep their type so JSON output stays numeric.
struct Table {
  using Cell = std::variant<double, std::int64_t, bool, std::string>;

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

void write_csv(std::ostream& os, const Table& t);
[[nodiscard]] Json table_to_json(const Table& t);

enum class OutputFormat { Csv, Json };

[[nodiscard]] OutputFormat parse_format(const std::string& s);

/// Writes text to path, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

[[nodiscard]] Json trajectory_to_json(const Trajectory& traj);
[[nodiscard]] Trajectory trajectory_from_json(const Json& j);

/// Columns t, u_1..u_n, v_1..v_n, H, E and F_phi when a weight is given.
[[nodiscard]] Table trajectory_table(const Trajectory& traj, const Nonlinearity& nl,
                                     const std::optional<Weight>& weight = std::nullopt,
                                     bool grid_only = false);

[[nodiscard]] Json to_json(const ConstantsBundle& cb);
[[nodiscard]] Json to_json(const GammaSet& gs);
[[nodiscard]] Json to_json(const LifespanEstimate& le);
[[nodiscard]] Json to_json(const GrowthEnvelope& env);

/// Rows (t, envelope rate, required rate, margin) of a supersolution check.
[[nodiscard]] Table envelope_check_table(const EnvelopeCheck& chk);

}  // namespace kirchhoff
