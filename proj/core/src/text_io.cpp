#include "singlab/text_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "singlab/errors.hpp"

namespace singlab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    fail(ErrorCode::DomainError, "line " + std::to_string(line_no) + ": '" + std::string(field) + "' is not a finite number");
  }
  return v;
}

}  // namespace

PlaneDataset read_plane_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<Vec2> points;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      fail(ErrorCode::DomainError, "line " + std::to_string(line_no) + ": expected two columns");
    }
    if (line_no == 1) {
      if (trim(row.substr(0, comma)) != "x" || trim(row.substr(comma + 1)) != "y") {
        fail(ErrorCode::DomainError, "line 1: expected header 'x,y'");
      }
      continue;
    }
    points.push_back({parse_number(row.substr(0, comma), line_no), parse_number(row.substr(comma + 1), line_no)});
  }
  if (points.empty()) fail(ErrorCode::DomainError, "'" + path.string() + "' contains no points");
  return PlaneDataset(std::move(points));
}

}  // namespace singlab
