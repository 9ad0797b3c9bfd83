#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "torreg/estimation.hpp"

namespace torreg::cli {

/// Fit report: "key = value" lines followed by a "[starts]" CSV section with
/// one row per optimizer start. Numbers are printed in shortest round-trip
/// form and no timing is recorded, so the text depends only on the inputs.
struct FitReport {
  ModelParams params;
  double loss = 0.0;
  double loss_torus = 0.0;
  double loss_sphere = 0.0;
  std::size_t n = 0;
  TorusGeometry geometry;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  std::size_t best_start = 0;
  std::optional<ParamVector> standard_errors;
  std::size_t bootstrap_replicates = 0;
  std::size_t bootstrap_failures = 0;
  std::vector<StartRecord> starts;
};

FitReport make_fit_report(const FitResult& fit, const FitConfig& config, std::size_t n);

std::string format_fit_report(const FitReport& report);

// Reads the key = value header; the [starts] section is parsed as well.
// Throws ParseError on missing keys or malformed numbers.
FitReport parse_fit_report(std::istream& in);
FitReport read_fit_report(const std::filesystem::path& path);

}  // namespace torreg::cli
