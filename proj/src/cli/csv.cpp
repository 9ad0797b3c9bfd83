#include "torreg/cli/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "torreg/error.hpp"

namespace torreg::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_direction_column(const std::string& name) {
  return name == kCovPhi || name == kCovTheta || name == kRespPhi || name == kRespTheta;
}

constexpr double kDegPerRad = 180.0 / kPi;

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_angle(Angle a, AngleUnit unit) {
  if (unit == AngleUnit::radians) return format_number(a.value());
  double d = a.value() * kDegPerRad;
  if (d >= 360.0) d = 0.0;
  return format_number(d);
}

Angle to_angle(double value, AngleUnit unit) {
  if (unit == AngleUnit::radians) return Angle(value);
  double d = std::fmod(value, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  return Angle(d / kDegPerRad);
}

std::optional<std::size_t> CsvTable::find(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t CsvTable::column(const std::string& name) const {
  if (auto c = find(name)) return *c;
  throw ParseError("column " + name + " not found", 1, name);
}

std::optional<std::size_t> CsvTable::label_column() const {
  if (!header.empty() && !is_direction_column(header.front())) return 0;
  return std::nullopt;
}

CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      if (!fields.empty() && fields.front().starts_with("\xEF\xBB\xBF")) fields.front().erase(0, 3);
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    t.rows.push_back(std::move(fields));
    t.lines.push_back(line_no);
  }
  if (!have_header) throw ParseError("empty file: header row required");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  try {
    return parse_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

double parse_cell(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& cell = table.rows[row][col];
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  const std::size_t line = row < table.lines.size() ? table.lines[row] : row + 2;
  if (cell.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ParseError("row " + std::to_string(line) + ", column " + table.header[col] + ": '" + cell +
                         "' is not a finite number",
                     line, table.header[col]);
  }
  return v;
}

Dataset parse_dataset(std::istream& in, const CsvSchema& schema) {
  const CsvTable t = parse_csv(in);
  const std::array<std::size_t, 4> cols{t.column(kCovPhi), t.column(kCovTheta), t.column(kRespPhi),
                                        t.column(kRespTheta)};
  const auto label = t.label_column();
  Dataset d;
  d.rows.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::array<Angle, 4> a;
    for (std::size_t k = 0; k < 4; ++k) a[k] = to_angle(parse_cell(t, r, cols[k]), schema.unit);
    d.rows.push_back({{a[0], a[1]}, {a[2], a[3]}});
    if (label) d.labels.push_back(t.rows[r][*label]);
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  try {
    return parse_dataset(in, schema);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

CovariateTable load_covariates(const std::filesystem::path& path, const CsvSchema& schema) {
  const CsvTable t = read_csv(path);
  CovariateTable out;
  try {
    const std::size_t cp = t.column(kCovPhi), ct = t.column(kCovTheta);
    const auto label = t.label_column();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      out.covariates.push_back({to_angle(parse_cell(t, r, cp), schema.unit),
                                to_angle(parse_cell(t, r, ct), schema.unit)});
      if (label) out.labels.push_back(t.rows[r][*label]);
    }
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
  }
  return out;
}

void write_dataset(std::ostream& out, const Dataset& data, AngleUnit unit, const std::string& label_header) {
  const bool labels = !data.labels.empty();
  if (labels && data.labels.size() != data.rows.size()) {
    throw PreconditionError("write_dataset: label count does not match row count");
  }
  if (labels) out << label_header << ',';
  out << kCovPhi << ',' << kCovTheta << ',' << kRespPhi << ',' << kRespTheta << '\n';
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& r = data.rows[i];
    if (labels) out << data.labels[i] << ',';
    out << format_angle(r.covariate.phi, unit) << ',' << format_angle(r.covariate.theta, unit) << ','
        << format_angle(r.response.phi, unit) << ',' << format_angle(r.response.theta, unit) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << text;
  if (!out) throw PreconditionError("failed writing " + path.string());
}

}  // namespace torreg::cli
