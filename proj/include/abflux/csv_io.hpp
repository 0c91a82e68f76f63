#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abflux/montecarlo.hpp"

namespace abflux {

inline constexpr std::string_view kToolVersion = "abflux 0.1.0";

// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double v);
std::optional<double> parse_number(std::string_view text);

// One provenance comment line: "# key=value, key=value".
using ProvenanceLine = std::vector<std::pair<std::string, std::string>>;

std::string render_comment(const ProvenanceLine& line);
ProvenanceLine geometry_provenance(const ApertureGeometry& g);
std::string format_window(const Window& w);  // "x_min:x_max"
std::optional<Window> parse_window(std::string_view text);

// Parsed numeric CSV with its comment-line provenance.
struct CsvTable {
  std::map<std::string, std::string> provenance;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> line_numbers;  // source line of each data row
};

// Comment lines ('#') before the header feed the provenance map. Throws
// IoError when the file cannot be read and ParseError (with the line number)
// for ragged rows or a missing header.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view content, const std::string& source);

void write_text_file(const std::filesystem::path& path, std::string_view content);

// Binary 8-bit graymap (P5). pixel = floor(255 * value / max); the maximum
// maps to 255. Rows are written top to bottom in the order given.
std::string render_pgm(std::size_t width, std::size_t height, const std::vector<double>& values);

// Hit files: comment provenance, then "index,x_m" rows in generation order.
std::string render_hits_csv(const HitSet& hits);

struct HitFile {
  std::vector<double> positions;
  std::optional<ApertureGeometry> geometry;
  std::optional<Window> window;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_points;
  std::map<std::string, std::string> provenance;
};

HitFile read_hits_csv(const std::filesystem::path& path);
HitFile parse_hits_csv(std::string_view content, const std::string& source);

}  // namespace abflux
