#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace shockfront::output {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// "# config-hash: <hex>" comment, header row, then rows in %.17g.
void write_csv(std::ostream& out, const CsvTable& table, const std::string& config_hash);
std::string csv_string(const CsvTable& table, const std::string& config_hash);

/// Shortest-exact-ish number text (%.17g).
std::string format_number(double value);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // points instead of a polyline
};

/// Minimal static plot: axes box, tick labels at the data range, one
/// polyline or marker set per series.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<SvgSeries>& series);

/// Writes to a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace shockfront::output
