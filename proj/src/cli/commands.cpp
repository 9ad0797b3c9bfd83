#include "torreg/cli/commands.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <ostream>
#include <sstream>

#include "torreg/cli/report.hpp"
#include "torreg/cli/specs.hpp"
#include "torreg/diagnostics.hpp"
#include "torreg/error.hpp"
#include "torreg/viz.hpp"

namespace torreg::cli {

namespace {

const char* unit_name(AngleUnit u) { return u == AngleUnit::degrees ? "degrees" : "radians"; }

std::string meta_line(const std::string& key, const std::string& value) { return key + " = " + value + "\n"; }

int parse_int(std::string_view s, std::size_t pos, std::size_t len, const std::string& what) {
  int v = 0;
  const auto part = s.substr(pos, len);
  const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
  if (res.ec != std::errc() || res.ptr != part.data() + part.size()) {
    throw ParseError("timestamp start '" + std::string(s) + "': bad " + what);
  }
  return v;
}

std::vector<std::string> make_timestamps(const std::string& start, int step_hours, std::size_t n) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM
  if (start.size() != 16 || start[4] != '-' || start[7] != '-' || start[10] != 'T' || start[13] != ':') {
    throw ParseError("timestamp start must look like YYYY-MM-DDTHH:MM");
  }
  const year_month_day ymd{year{parse_int(start, 0, 4, "year")},
                           month{static_cast<unsigned>(parse_int(start, 5, 2, "month"))},
                           day{static_cast<unsigned>(parse_int(start, 8, 2, "day"))}};
  if (!ymd.ok()) throw ParseError("timestamp start '" + start + "' is not a valid date");
  const int hh = parse_int(start, 11, 2, "hour"), mm = parse_int(start, 14, 2, "minute");
  if (hh > 23 || mm > 59) throw ParseError("timestamp start '" + start + "' has a bad time of day");
  if (step_hours <= 0) throw PreconditionError("timestamp step must be positive");

  const sys_time<minutes> t0 = sys_days{ymd} + hours{hh} + minutes{mm};
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = t0 + hours{step_hours * static_cast<long long>(i)};
    const auto d = floor<days>(t);
    const year_month_day date{d};
    const auto tod = t - d;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<int>(duration_cast<hours>(tod).count()),
                  static_cast<int>(tod.count() % 60));
    out.emplace_back(buf);
  }
  return out;
}

std::string label_header_of(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (auto c = t.label_column()) return t.header[*c];
  return "timestamp";
}

std::string qq_csv(std::span<const std::pair<double, double>> pairs, AngleUnit unit) {
  std::ostringstream os;
  os << "observed,predicted\n";
  for (const auto& [a, b] : pairs) {
    os << format_angle(Angle(a), unit) << ',' << format_angle(Angle(b), unit) << '\n';
  }
  return os.str();
}

std::string watson_block(const std::string& name, const std::vector<Angle>& residuals) {
  std::ostringstream os;
  const auto s = circular_summary(residuals);
  os << "residual." << name << ".mean_direction = " << format_number(s.mean_direction.value()) << '\n'
     << "residual." << name << ".mean_defined = " << s.mean_defined << '\n'
     << "residual." << name << ".resultant_length = " << format_number(s.resultant_length) << '\n'
     << "residual." << name << ".circular_sd = " << format_number(s.circular_sd) << '\n';
  if (residuals.size() >= 10) {
    const auto w = watson_u2(residuals);
    os << "watson." << name << ".statistic = " << format_number(w.statistic) << '\n'
       << "watson." << name << ".critical_5pct = " << format_number(w.critical_value_5pct) << '\n'
       << "watson." << name << ".reject = " << w.reject << '\n'
       << "watson." << name << ".mu_hat = " << format_number(w.mu_hat.value()) << '\n'
       << "watson." << name << ".kappa_hat = " << format_number(w.kappa_hat) << '\n'
       << "watson." << name << ".kappa_capped = " << w.kappa_capped << '\n';
  } else {
    os << "watson." << name << ".skipped = fewer than 10 rows\n";
  }
  return os.str();
}

}  // namespace

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const EstimationError& e) {
    err << "estimation failed: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const DomainError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const SingularInputError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
}

std::optional<PlotKind> parse_plot_kind(const std::string& name) {
  if (name == "circular-scatter") return PlotKind::circular_scatter;
  if (name == "spoke") return PlotKind::spoke;
  if (name == "qq") return PlotKind::qq;
  return std::nullopt;
}

Residuals componentwise_residuals(const ModelParams& params, const Dataset& data) {
  Residuals r;
  r.phi.reserve(data.size());
  r.theta.reserve(data.size());
  for (const auto& row : data.rows) {
    const TorusPoint m = predict_mean(params, row.covariate);
    r.phi.emplace_back(wrap_signed(row.response.phi.value() - m.phi.value()));
    r.theta.emplace_back(wrap_signed(row.response.theta.value() - m.theta.value()));
  }
  return r;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& log) {
  if (const auto v = params_valid(o.params); !v.valid) throw PreconditionError("params: " + v.diagnostic);
  const RngSeed seed{o.seed};
  const auto x = sample_covariates(o.covariates, o.n, derive_seed(seed, 0));
  Dataset data = simulate_responses(o.params, x, o.errors, derive_seed(seed, 1));
  if (o.timestamp_start) data.labels = make_timestamps(*o.timestamp_start, o.timestamp_step_hours, o.n);

  std::ostringstream csv;
  write_dataset(csv, data, o.unit);
  write_text_file(o.out, csv.str());

  std::string meta;
  meta += meta_line("params", format_params(o.params));
  meta += meta_line("covariates", format_covariate_spec(o.covariates));
  meta += meta_line("errors", format_error_spec(o.errors));
  meta += meta_line("n", std::to_string(o.n));
  meta += meta_line("seed", std::to_string(o.seed));
  meta += meta_line("unit", unit_name(o.unit));
  if (o.timestamp_start) {
    meta += meta_line("timestamp.start", *o.timestamp_start);
    meta += meta_line("timestamp.step_hours", std::to_string(o.timestamp_step_hours));
  }
  auto meta_path = o.out;
  meta_path += ".meta";
  write_text_file(meta_path, meta);
  log << "wrote " << o.n << " rows to " << o.out.string() << '\n';
  return kExitOk;
}

int cmd_fit(const FitOptions& o, std::ostream& log) {
  const Dataset data = load_dataset(o.data, {o.unit});
  FitResult result = fit(data, o.config);
  std::size_t failures = 0;
  if (o.bootstrap > 0) result.standard_errors = bootstrap_se(data, o.config, o.bootstrap, &failures);
  FitReport report = make_fit_report(result, o.config, data.size());
  report.bootstrap_replicates = o.bootstrap;
  report.bootstrap_failures = failures;
  write_text_file(o.out, format_fit_report(report));
  log << "loss " << format_number(result.loss) << " from start " << result.best_start << " of "
      << result.starts.size() << '\n';
  return kExitOk;
}

int cmd_predict(const PredictOptions& o, std::ostream& log) {
  const FitReport report = read_fit_report(o.fit);
  const CovariateTable table = load_covariates(o.covariates, {o.unit});
  std::ostringstream os;
  const bool labels = !table.labels.empty();
  if (labels) os << label_header_of(o.covariates) << ',';
  os << kCovPhi << ',' << kCovTheta << ",pred_phi,pred_theta\n";
  for (std::size_t i = 0; i < table.covariates.size(); ++i) {
    const auto& x = table.covariates[i];
    const TorusPoint m = predict_mean(report.params, x);
    if (labels) os << table.labels[i] << ',';
    os << format_angle(x.phi, o.unit) << ',' << format_angle(x.theta, o.unit) << ','
       << format_angle(m.phi, o.unit) << ',' << format_angle(m.theta, o.unit) << '\n';
  }
  write_text_file(o.out, os.str());
  log << "wrote " << table.covariates.size() << " predictions to " << o.out.string() << '\n';
  return kExitOk;
}

std::string format_mc_table(const McStudyOptions& o, const std::vector<McSummary>& cells) {
  std::ostringstream os;
  os << "# params = " << format_params(o.params) << '\n'
     << "# covariates = " << format_covariate_spec(o.covariates) << '\n'
     << "# errors = " << format_error_spec(o.errors) << '\n'
     << "# reps = " << o.reps << ", restarts = " << o.config.restarts << ", seed = " << o.config.seed.value
     << '\n'
     << "# cell: mean (standard error) [standard deviation]\n";
  os << "n,dependency,reps,failures";
  for (const char* name : kParamNames) os << ',' << name;
  os << '\n';
  char buf[96];
  std::size_t k = 0;
  for (std::size_t n : o.sizes) {
    const std::size_t deps = o.dependencies.empty() ? 1 : o.dependencies.size();
    for (std::size_t d = 0; d < deps; ++d, ++k) {
      const McSummary& s = cells.at(k);
      os << n << ',' << (o.dependencies.empty() ? std::string("-") : format_number(o.dependencies[d])) << ','
         << s.replications << ',' << s.failures;
      for (std::size_t p = 0; p < 6; ++p) {
        std::snprintf(buf, sizeof buf, ",%.4f (%.4f) [%.4f]", s.mean[p], s.se[p], s.sd[p]);
        os << buf;
      }
      os << '\n';
    }
  }
  return os.str();
}

int cmd_mc_study(const McStudyOptions& o, std::ostream& log) {
  if (o.reps < 2) throw PreconditionError("mc-study: need reps >= 2");
  if (o.sizes.empty()) throw PreconditionError("mc-study: need at least one sample size");
  std::vector<McSummary> cells;
  std::size_t cell = 0;
  for (std::size_t n : o.sizes) {
    const std::size_t deps = o.dependencies.empty() ? 1 : o.dependencies.size();
    for (std::size_t d = 0; d < deps; ++d, ++cell) {
      const ErrorSpec errors = o.dependencies.empty() ? o.errors : with_dependency(o.errors, o.dependencies[d]);
      FitConfig config = o.config;
      config.seed = derive_seed(o.config.seed, cell);
      cells.push_back(monte_carlo_study(o.params, o.covariates, errors, n, o.reps, config));
      log << "cell n=" << n << " done (" << cells.back().failures << " failures)\n";
    }
  }
  write_text_file(o.out, format_mc_table(o, cells));
  return kExitOk;
}

int cmd_diagnose(const DiagnoseOptions& o, std::ostream& log) {
  const FitReport report = read_fit_report(o.fit);
  const Dataset data = load_dataset(o.data, {o.unit});
  if (data.empty()) throw PreconditionError("diagnose: data file has no rows");
  if (report.n != data.size()) {
    throw PreconditionError("fit report was produced from " + std::to_string(report.n) +
                            " rows but the data file has " + std::to_string(data.size()));
  }
  const Residuals res = componentwise_residuals(report.params, data);

  std::vector<Angle> obs_phi, obs_theta, pred_phi, pred_theta;
  for (const auto& row : data.rows) {
    const TorusPoint m = predict_mean(report.params, row.covariate);
    obs_phi.push_back(row.response.phi);
    obs_theta.push_back(row.response.theta);
    pred_phi.push_back(m.phi);
    pred_theta.push_back(m.theta);
  }
  std::filesystem::path prefix = o.qq_prefix.value_or(std::filesystem::path(o.out).replace_extension());
  auto qq_phi = prefix, qq_theta = prefix;
  qq_phi += "_phi.csv";
  qq_theta += "_theta.csv";
  write_text_file(qq_phi, qq_csv(qq_pairs(obs_phi, pred_phi), o.unit));
  write_text_file(qq_theta, qq_csv(qq_pairs(obs_theta, pred_theta), o.unit));

  std::ostringstream os;
  os << "format = torreg-diagnostics-1\n"
     << "n = " << data.size() << '\n'
     << "loss = " << format_number(loss_total(report.params, data, report.geometry)) << '\n'
     << watson_block("phi", res.phi) << watson_block("theta", res.theta)
     << "qq.phi = " << qq_phi.filename().string() << '\n'
     << "qq.theta = " << qq_theta.filename().string() << '\n';
  write_text_file(o.out, os.str());
  log << "wrote diagnostics to " << o.out.string() << '\n';
  return kExitOk;
}

int cmd_plot(const PlotOptions& o, std::ostream& log) {
  const FitReport report = read_fit_report(o.fit);
  const Dataset data = load_dataset(o.data, {o.unit});
  if (data.empty()) throw PreconditionError("plot: data file has no rows");
  std::vector<Angle> observed, predicted;
  for (const auto& row : data.rows) {
    const TorusPoint m = predict_mean(report.params, row.covariate);
    observed.push_back(o.theta_component ? row.response.theta : row.response.phi);
    predicted.push_back(o.theta_component ? m.theta : m.phi);
  }
  SvgDoc doc;
  switch (o.kind) {
    case PlotKind::circular_scatter: {
      const std::vector<PlotSeries> series{{"observed", observed, Marker::circle, "#1f77b4"},
                                           {"predicted", predicted, Marker::cross, "#d62728"}};
      doc = circular_scatter_svg(series, o.size);
      break;
    }
    case PlotKind::spoke:
      doc = spoke_plot_svg(observed, predicted, o.size);
      break;
    case PlotKind::qq:
      doc = qq_plot_svg(qq_pairs(observed, predicted), o.size);
      break;
  }
  write_text_file(o.out, doc.body);
  log << "wrote " << o.out.string() << '\n';
  return kExitOk;
}

}  // namespace torreg::cli
