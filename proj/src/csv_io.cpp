#include "abflux/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "abflux/errors.hpp"

namespace abflux {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void parse_comment_into(std::string_view body, std::map<std::string, std::string>& into) {
  for (const auto part : split(body, ',')) {
    const auto item = trim(part);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) continue;
    into[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
  }
}

template <class T>
std::optional<T> lookup(const std::map<std::string, std::string>& m, const std::string& key);

template <>
std::optional<double> lookup(const std::map<std::string, std::string>& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return parse_number(it->second);
}

template <class Int>
std::optional<Int> lookup_integer(const std::map<std::string, std::string>& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  Int v{};
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::string render_comment(const ProvenanceLine& line) {
  std::string out = "# ";
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (i > 0) out += ", ";
    out += line[i].first + "=" + line[i].second;
  }
  out += '\n';
  return out;
}

ProvenanceLine geometry_provenance(const ApertureGeometry& g) {
  return {{"l", format_number(g.source_to_slit)},
          {"L", format_number(g.slit_to_screen)},
          {"b", format_number(g.slit_half_width)},
          {"x0", format_number(g.slit_separation)},
          {"lambda", format_number(g.wavelength)}};
}

std::string format_window(const Window& w) {
  return format_number(w.x_min) + ":" + format_number(w.x_max);
}

std::optional<Window> parse_window(std::string_view text) {
  const auto parts = split(trim(text), ':');
  if (parts.size() != 2) return std::nullopt;
  const auto lo = parse_number(parts[0]);
  const auto hi = parse_number(parts[1]);
  if (!lo || !hi) return std::nullopt;
  return Window{*lo, *hi};
}

CsvTable parse_csv(std::string_view content, const std::string& source) {
  CsvTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  for (const auto raw : split(content, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!have_header) parse_comment_into(line.substr(1), table.provenance);
      continue;
    }
    const auto fields = split(line, ',');
    if (!have_header) {
      for (const auto f : fields) table.columns.emplace_back(trim(f));
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw ParseError(source, line_no,
                       "expected " + std::to_string(table.columns.size()) + " fields, found " +
                           std::to_string(fields.size()));
    std::vector<std::string> row;
    row.reserve(fields.size());
    for (const auto f : fields) row.emplace_back(trim(f));
    table.cells.push_back(std::move(row));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw ParseError(source, line_no, "missing CSV header");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

std::string render_pgm(std::size_t width, std::size_t height, const std::vector<double>& values) {
  if (width == 0 || height == 0 || values.size() != width * height)
    throw DomainError("pgm: value count does not match the image size");
  const double max = *std::max_element(values.begin(), values.end());
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + values.size());
  for (const double v : values) {
    int pixel = 0;
    if (max > 0.0 && v > 0.0) pixel = static_cast<int>(std::floor(255.0 * v / max));
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(pixel, 0, 255))));
  }
  return out;
}

std::string render_hits_csv(const HitSet& hits) {
  std::string out = render_comment({{"tool", std::string(kToolVersion)}, {"content", "hits"}});
  out += render_comment({{"seed", std::to_string(hits.config.seed)},
                         {"theta", format_number(hits.flux.theta)},
                         {"phi", format_number(hits.flux.phi)},
                         {"omega", format_number(hits.flux.omega)},
                         {"window", format_window(hits.config.window)},
                         {"grid_points", std::to_string(hits.config.grid_points)},
                         {"n_hits", std::to_string(hits.positions.size())}});
  out += render_comment(geometry_provenance(hits.geometry));
  out += "index,x_m\n";
  for (std::size_t i = 0; i < hits.positions.size(); ++i)
    out += std::to_string(i) + "," + format_number(hits.positions[i]) + "\n";
  return out;
}

HitFile parse_hits_csv(std::string_view content, const std::string& source) {
  const CsvTable table = parse_csv(content, source);
  if (table.columns != std::vector<std::string>{"index", "x_m"})
    throw ParseError(source, 1, "hit files need the header 'index,x_m'");
  HitFile file;
  file.provenance = table.provenance;
  file.positions.reserve(table.cells.size());
  for (std::size_t r = 0; r < table.cells.size(); ++r) {
    const auto& row = table.cells[r];
    const auto idx = parse_number(row[0]);
    if (!idx || *idx != static_cast<double>(r))
      throw ParseError(source, table.line_numbers[r], "index must count up from 0");
    const auto x = parse_number(row[1]);
    if (!x || !std::isfinite(*x))
      throw ParseError(source, table.line_numbers[r], "x_m is not a finite number");
    file.positions.push_back(*x);
  }

  const auto& p = file.provenance;
  const auto l = lookup<double>(p, "l");
  const auto L = lookup<double>(p, "L");
  const auto b = lookup<double>(p, "b");
  const auto x0 = lookup<double>(p, "x0");
  const auto lambda = lookup<double>(p, "lambda");
  if (l && L && b && x0 && lambda) file.geometry = ApertureGeometry{*l, *L, *b, *x0, *lambda};
  if (const auto it = p.find("window"); it != p.end()) file.window = parse_window(it->second);
  file.seed = lookup_integer<std::uint64_t>(p, "seed");
  file.grid_points = lookup_integer<std::size_t>(p, "grid_points");
  return file;
}

HitFile read_hits_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hits_csv(buf.str(), path.string());
}

}  // namespace abflux
