#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torreg/model.hpp"

namespace torreg::cli {

enum class AngleUnit { degrees, radians };

/// Direction columns are located by header name; a leading column with any
/// other name is kept as the row label (typically a timestamp). Other extra
/// columns are ignored.
struct CsvSchema {
  AngleUnit unit = AngleUnit::degrees;
};

inline constexpr const char* kCovPhi = "cov_phi";
inline constexpr const char* kCovTheta = "cov_theta";
inline constexpr const char* kRespPhi = "resp_phi";
inline constexpr const char* kRespTheta = "resp_theta";

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

// Angle (radians) rendered in `unit`; degrees land in [0, 360).
std::string format_angle(Angle a, AngleUnit unit);

// Converts a cell value in `unit` to a wrapped Angle.
Angle to_angle(double value, AngleUnit unit);

/// Rows of a CSV table: header plus string cells. Throws ParseError for an
/// empty input or a row with the wrong number of fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  // Throws ParseError("column <name> not found").
  std::size_t column(const std::string& name) const;
  std::optional<std::size_t> find(const std::string& name) const;
  // Index of the leading label column, if present.
  std::optional<std::size_t> label_column() const;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

// Parses cell (row is 0-based into table.rows) as a finite real.
double parse_cell(const CsvTable& table, std::size_t row, std::size_t col);

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema);
Dataset parse_dataset(std::istream& in, const CsvSchema& schema);

/// Covariates only (cov_phi, cov_theta); labels from a leading label column.
struct CovariateTable {
  std::vector<TorusPoint> covariates;
  std::vector<std::string> labels;
};

CovariateTable load_covariates(const std::filesystem::path& path, const CsvSchema& schema);

void write_dataset(std::ostream& out, const Dataset& data, AngleUnit unit,
                   const std::string& label_header = "timestamp");

// Throws std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace torreg::cli
