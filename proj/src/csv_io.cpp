#include "csv_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "numeric.hpp"

namespace rsub {

namespace {

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_field(std::string_view field, double& out) {
  field = trimmed(field);
  if (field.empty()) return false;
  auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc{} && res.ptr == field.data() + field.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

PointSet parse_points_csv(const std::string& text, const std::string& source) {
  std::vector<Vector> points;
  Index dim = -1;
  std::size_t line_no = 0;
  bool header_possible = true;

  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view = line;
    if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
      view.remove_prefix(3);  // UTF-8 BOM
    }
    if (trimmed(view).empty()) continue;

    auto fields = split_fields(view);
    std::vector<double> values(fields.size());
    bool all_numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_field(fields[c], values[c])) {
        all_numeric = false;
        bad_col = c + 1;
        break;
      }
    }

    if (!all_numeric) {
      if (header_possible) {
        header_possible = false;  // a single leading non-numeric row is a header
        continue;
      }
      throw data_error(source + ": cannot parse field at row " + std::to_string(line_no) +
                       ", column " + std::to_string(bad_col));
    }
    header_possible = false;

    if (dim < 0) {
      dim = static_cast<Index>(values.size());
    } else if (static_cast<Index>(values.size()) != dim) {
      throw data_error(source + ": ragged row " + std::to_string(line_no) + " has " +
                       std::to_string(values.size()) + " fields, expected " +
                       std::to_string(dim));
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!std::isfinite(values[c])) {
        throw data_error(source + ": non-finite value at row " + std::to_string(line_no) +
                         ", column " + std::to_string(c + 1));
      }
    }
    points.push_back(Eigen::Map<Vector>(values.data(), dim));
  }

  if (points.empty()) throw data_error(source + ": no data rows found");
  return PointSet::from_vectors(points);
}

PointSet read_points_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_points_csv(buf.str(), path);
}

std::string points_to_csv(const PointSet& points) {
  std::string out;
  for (Index i = 0; i < points.size(); ++i) {
    for (Index c = 0; c < points.dim(); ++c) {
      if (c > 0) out += ',';
      out += format_double(points.point(i)[c]);
    }
    out += '\n';
  }
  return out;
}

void write_points_csv(const PointSet& points, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << points_to_csv(points);
  if (!out) throw io_error("failed writing '" + path + "'");
}

std::string distances_to_tsv(const std::vector<double>& distances) {
  std::string out;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    out += std::to_string(i + 1);
    out += '\t';
    out += format_double(distances[i]);
    out += '\n';
  }
  return out;
}

void write_distances_tsv(const std::vector<double>& distances, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << distances_to_tsv(distances);
  if (!out) throw io_error("failed writing '" + path + "'");
}

}  // namespace rsub
