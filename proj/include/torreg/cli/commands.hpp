#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "torreg/cli/csv.hpp"
#include "torreg/estimation.hpp"

namespace torreg::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitParse = 3,
  kExitPrecondition = 4,
  kExitEstimation = 5,
};

// Runs `body`, mapping library exceptions to exit codes and printing a
// one-line diagnostic to `err`.
int run_guarded(const std::function<int()>& body, std::ostream& err);

struct SimulateOptions {
  ModelParams params;
  CovariateSpec covariates = VonMisesParams{Angle(0.0), 1.0};
  ErrorSpec errors = NoError{};
  std::size_t n = 100;
  std::uint64_t seed = 0;
  AngleUnit unit = AngleUnit::degrees;
  // "YYYY-MM-DDTHH:MM" start and step in hours for a leading timestamp column.
  std::optional<std::string> timestamp_start;
  int timestamp_step_hours = 12;
  std::filesystem::path out;
};

struct FitOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  AngleUnit unit = AngleUnit::degrees;
  FitConfig config;
  std::size_t bootstrap = 0;  // replicates; 0 disables
};

struct PredictOptions {
  std::filesystem::path fit;
  std::filesystem::path covariates;
  std::filesystem::path out;
  AngleUnit unit = AngleUnit::degrees;
};

struct McStudyOptions {
  ModelParams params;
  CovariateSpec covariates = VonMisesParams{Angle(0.0), 1.0};
  ErrorSpec errors = NoError{};
  std::vector<std::size_t> sizes{100};
  std::vector<double> dependencies;  // empty: use the error spec as given
  std::size_t reps = 100;
  FitConfig config;
  std::filesystem::path out;
};

struct DiagnoseOptions {
  std::filesystem::path fit;
  std::filesystem::path data;
  std::filesystem::path out;
  // QQ pairs go to <qq_prefix>_phi.csv and <qq_prefix>_theta.csv; defaults
  // to `out` without its extension.
  std::optional<std::filesystem::path> qq_prefix;
  AngleUnit unit = AngleUnit::degrees;
};

enum class PlotKind { circular_scatter, spoke, qq };

std::optional<PlotKind> parse_plot_kind(const std::string& name);

struct PlotOptions {
  PlotKind kind = PlotKind::circular_scatter;
  std::filesystem::path fit;
  std::filesystem::path data;
  std::filesystem::path out;
  bool theta_component = false;  // plot resp_theta instead of resp_phi
  int size = 480;
  AngleUnit unit = AngleUnit::degrees;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& log);
int cmd_fit(const FitOptions& o, std::ostream& log);
int cmd_predict(const PredictOptions& o, std::ostream& log);
int cmd_mc_study(const McStudyOptions& o, std::ostream& log);
int cmd_diagnose(const DiagnoseOptions& o, std::ostream& log);
int cmd_plot(const PlotOptions& o, std::ostream& log);

// Text of the tables written by cmd_mc_study, exposed for tests.
std::string format_mc_table(const McStudyOptions& o, const std::vector<McSummary>& cells);

// Signed componentwise residuals wrap(observed - predicted) shifted to [0, 2 pi).
struct Residuals {
  std::vector<Angle> phi;
  std::vector<Angle> theta;
};

Residuals componentwise_residuals(const ModelParams& params, const Dataset& data);

}  // namespace torreg::cli
