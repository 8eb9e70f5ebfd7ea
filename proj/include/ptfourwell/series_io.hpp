#pragma once

// CSV time series of controlled four-well runs.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ptfourwell/four_mode.hpp"
#include "ptfourwell/physical_map.hpp"

namespace ptfw {

/// One row per record entry. `trap` (same length as the record) adds the
/// V0, V3, delta0, delta3 columns of a physical run.
void write_series(const four_mode::TrajectoryRecord& record, const std::filesystem::path& path,
                  const std::vector<physical::TrapSolution>* trap = nullptr);

std::string format_series(const four_mode::TrajectoryRecord& record,
                          const std::vector<physical::TrapSolution>* trap = nullptr);

struct SeriesTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a column, throws InputError if absent.
  std::size_t column(const std::string& name) const;
};

SeriesTable read_series(const std::filesystem::path& path);
SeriesTable parse_series(const std::string& text);

const std::vector<std::string>& series_columns(bool physical);

}  // namespace ptfw
