#ifndef DOM_CSV_HPP
#define DOM_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dom/point_set.hpp"

namespace dom {

// Point-set CSV: one point per row, comma-separated decimal fields with `.`
// as decimal point. Lines starting with `#` and blank lines are skipped.
// Parse errors are InvalidInput and name source, line and column.

PointSet parse_point_set(std::istream& in, std::string_view source_name);
PointSet read_point_set(const std::filesystem::path& path);

/// Writes with 17 significant digits so that reading back is bit-exact.
void write_point_set(std::ostream& out, const PointSet& s);
void write_point_set(const std::filesystem::path& path, const PointSet& s);

/// Shortest-safe text form used by every writer in the project (%.17g).
std::string format_real(double v);

}  // namespace dom

#endif  // DOM_CSV_HPP
