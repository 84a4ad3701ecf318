#pragma once

// Locale-independent number formatting and file writing shared by the CSV,
// SVG and JSON emitters.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "singlab/geometry.hpp"

namespace singlab {

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double value);
/// Fixed number of decimals (used for SVG coordinates).
std::string format_fixed(double value, int decimals);

/// Write the text to a file (binary mode, so LF endings are kept). Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Read a plane dataset from CSV: header row "x,y", then one point per row.
/// Throws IoError when the file cannot be read and DomainError on malformed rows.
PlaneDataset read_plane_csv(const std::filesystem::path& path);

}  // namespace singlab
