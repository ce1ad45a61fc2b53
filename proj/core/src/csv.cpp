#include "dom/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "dom/error.hpp"

namespace dom {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view source, std::size_t line, std::size_t column,
                       const std::string& what) {
  throw InvalidInput(std::string(source) + ":" + std::to_string(line) + ":" +
                     std::to_string(column) + ": " + what);
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PointSet parse_point_set(std::istream& in, std::string_view source_name) {
  std::vector<Point> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (trim(view).empty() || trim(view).front() == '#') continue;

    Point row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::size_t end = comma == std::string_view::npos ? view.size() : comma;
      const std::string_view raw = view.substr(start, end - start);
      const std::string_view field = trim(raw);
      const std::size_t column = start + (raw.find_first_not_of(" \t") == std::string_view::npos
                                              ? 0
                                              : raw.find_first_not_of(" \t")) + 1;
      if (field.empty()) fail(source_name, line_no, column, "empty field");
      double value = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc{} || ptr != last) {
        fail(source_name, line_no, column, "not a decimal number: '" + std::string(field) + "'");
      }
      if (!std::isfinite(value)) {
        fail(source_name, line_no, column, "non-finite value '" + std::string(field) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      fail(source_name, line_no, 1,
           "expected " + std::to_string(width) + " fields, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput(std::string(source_name) + ": no points");
  try {
    return PointSet(rows);
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(source_name) + ": " + e.what());
  }
}

PointSet read_point_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path.string() + ": cannot open file");
  return parse_point_set(in, path.string());
}

void write_point_set(std::ostream& out, const PointSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t m = 0; m < s.dim(); ++m) {
      if (m != 0) out << ',';
      out << format_real(s.at(i, m));
    }
    out << '\n';
  }
}

void write_point_set(const std::filesystem::path& path, const PointSet& s) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(path.string() + ": cannot open file for writing");
  write_point_set(out, s);
  if (!out) throw InvalidInput(path.string() + ": write failed");
}

}  // namespace dom
