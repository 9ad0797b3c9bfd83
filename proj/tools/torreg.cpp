// torreg command-line driver. Option values are collected as strings and
// handed to the library parsers so that malformed specs map to the parse
// exit code rather than a usage error.

#include <CLI11.hpp>
#include <iostream>

#include "torreg/cli/commands.hpp"
#include "torreg/cli/specs.hpp"
#include "torreg/error.hpp"
#include "torreg/kernels/loss_kernel.hpp"

namespace {

using namespace torreg;
using namespace torreg::cli;

struct FitFlags {
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double major = 2.0;
  double minor = 1.0;
  double tolerance = 1e-10;
  double gradient_step = 1e-6;
  int max_iterations = 500;
  double b_bound = 20.0;

  void add(CLI::App* app) {
    app->add_option("--restarts", restarts, "optimizer starts")->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
    app->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
    app->add_option("--major", major, "torus major radius R")->capture_default_str();
    app->add_option("--minor", minor, "torus minor radius r")->capture_default_str();
    app->add_option("--tolerance", tolerance, "relative loss-change tolerance")->capture_default_str();
    app->add_option("--gradient-step", gradient_step, "central-difference step")->capture_default_str();
    app->add_option("--max-iterations", max_iterations, "iterations per start")->capture_default_str();
    app->add_option("--b-bound", b_bound, "box half-width for b1..b4")->capture_default_str();
  }

  FitConfig config() const {
    FitConfig c;
    c.restarts = restarts;
    c.seed = RngSeed{seed};
    c.threads = threads;
    c.geometry = TorusGeometry(major, minor);
    c.tolerance = tolerance;
    c.gradient_step = gradient_step;
    c.max_iterations = max_iterations;
    for (std::size_t i = 1; i <= 4; ++i) {
      c.bounds.lower[i] = -b_bound;
      c.bounds.upper[i] = b_bound;
    }
    return c;
  }
};

// List options may arrive split (command line or config arrays); rejoin for parse_list.
std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
  return out;
}

AngleUnit unit_of(bool radians) { return radians ? AngleUnit::radians : AngleUnit::degrees; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torus-to-torus regression with Moebius links"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML config file; command-line flags take precedence");
  std::string kernel;
  app.add_option("--kernel", kernel, "loss kernel: scalar or avx2 (default: best available)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw covariates and errors, write a CSV");
  std::string sim_params, sim_cov = "vm:0,1", sim_err = "none", sim_ts;
  SimulateOptions so;
  bool sim_rad = false;
  sim->add_option("--params", sim_params, "phi0,b1,b2,b3,b4,theta0 (radians)")->required();
  sim->add_option("--covariates", sim_cov, "vm:mu,kappa | wc:mu,zeta")->capture_default_str();
  sim->add_option("--errors", sim_err, "none | sine:k1,k2,k3 | cosine:r1,r2,r3 | mixture:k1,k2,k3,r1,r2,r3,w")
      ->capture_default_str();
  sim->add_option("-n,--n", so.n, "rows")->capture_default_str();
  sim->add_option("--seed", so.seed, "random seed")->capture_default_str();
  sim->add_option("--timestamps", sim_ts, "add a timestamp column starting at YYYY-MM-DDTHH:MM");
  sim->add_option("--timestamp-step", so.timestamp_step_hours, "hours between rows")->capture_default_str();
  sim->add_flag("--radians", sim_rad, "write radians instead of degrees");
  sim->add_option("-o,--out", so.out, "output CSV")->required();

  // fit
  auto* fitc = app.add_subcommand("fit", "estimate the link parameters");
  FitOptions fo;
  FitFlags fit_flags;
  bool fit_rad = false;
  fitc->add_option("-d,--data", fo.data, "input CSV")->required();
  fitc->add_option("-o,--out", fo.out, "report file")->required();
  fitc->add_option("--bootstrap", fo.bootstrap, "bootstrap replicates for standard errors (0 = off, else >= 20)")
      ->capture_default_str();
  fitc->add_option("--bootstrap-restarts", fo.config.bootstrap_restarts, "starts per bootstrap refit")
      ->capture_default_str();
  fitc->add_flag("--radians", fit_rad, "input is in radians");
  fit_flags.add(fitc);

  // predict
  auto* pred = app.add_subcommand("predict", "predicted mean directions for new covariates");
  PredictOptions po;
  bool pred_rad = false;
  pred->add_option("-f,--fit", po.fit, "fit report")->required();
  pred->add_option("-c,--covariates", po.covariates, "CSV with cov_phi, cov_theta")->required();
  pred->add_option("-o,--out", po.out, "output CSV")->required();
  pred->add_flag("--radians", pred_rad, "input and output in radians");

  // mc-study
  auto* mc = app.add_subcommand("mc-study", "Monte Carlo recovery study");
  McStudyOptions mo;
  std::string mc_params, mc_cov = "vm:0,1", mc_err = "none";
  std::vector<std::string> mc_sizes{"100"}, mc_deps;
  FitFlags mc_flags;
  mc_flags.restarts = 16;
  mc->add_option("--params", mc_params, "true phi0,b1,b2,b3,b4,theta0")->required();
  mc->add_option("--covariates", mc_cov, "covariate law")->capture_default_str();
  mc->add_option("--errors", mc_err, "error law")->capture_default_str();
  mc->add_option("--sizes", mc_sizes, "comma-separated sample sizes")->delimiter(',')->capture_default_str();
  mc->add_option("--dependency", mc_deps, "comma-separated values for k3/r3 (default: as in --errors)")->delimiter(',');
  mc->add_option("--reps", mo.reps, "replications per cell")->capture_default_str();
  mc->add_option("-o,--out", mo.out, "table file")->required();
  mc_flags.add(mc);

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "residual summaries, Watson tests, QQ data");
  DiagnoseOptions dopt;
  std::string qq_prefix;
  bool diag_rad = false;
  diag->add_option("-f,--fit", dopt.fit, "fit report")->required();
  diag->add_option("-d,--data", dopt.data, "CSV the fit was made on")->required();
  diag->add_option("-o,--out", dopt.out, "diagnostics report")->required();
  diag->add_option("--qq-prefix", qq_prefix, "prefix for the two QQ CSV files");
  diag->add_flag("--radians", diag_rad, "data and QQ output in radians");

  // plot
  auto* plot = app.add_subcommand("plot", "SVG plots");
  PlotOptions pl;
  std::string kind, component = "phi";
  bool plot_rad = false;
  plot->add_option("kind", kind, "circular-scatter | spoke | qq")->required();
  plot->add_option("-f,--fit", pl.fit, "fit report")->required();
  plot->add_option("-d,--data", pl.data, "data CSV")->required();
  plot->add_option("-o,--out", pl.out, "SVG file")->required();
  plot->add_option("--component", component, "phi or theta")->capture_default_str();
  plot->add_option("--size", pl.size, "plot size in pixels")->capture_default_str();
  plot->add_flag("--radians", plot_rad, "data in radians");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!kernel.empty()) {
    const auto isa = kernels::parse_isa(kernel);
    if (!isa || !kernels::isa_available(*isa)) {
      std::cerr << "kernel '" << kernel << "' is not available on this machine\n";
      return kExitUsage;
    }
    kernels::force_isa(*isa);
  }

  if (plot->parsed()) {
    const auto k = parse_plot_kind(kind);
    if (!k) {
      std::cerr << "unknown plot kind '" << kind << "' (expected circular-scatter, spoke or qq)\n";
      return kExitUsage;
    }
    if (component != "phi" && component != "theta") {
      std::cerr << "--component must be phi or theta\n";
      return kExitUsage;
    }
  }

  return run_guarded(
      [&]() -> int {
        if (sim->parsed()) {
          so.params = parse_params(sim_params);
          so.covariates = parse_covariate_spec(sim_cov);
          so.errors = parse_error_spec(sim_err);
          so.unit = unit_of(sim_rad);
          if (!sim_ts.empty()) so.timestamp_start = sim_ts;
          return cmd_simulate(so, std::cerr);
        }
        if (fitc->parsed()) {
          const auto bootstrap_restarts = fo.config.bootstrap_restarts;
          fo.config = fit_flags.config();
          fo.config.bootstrap_restarts = bootstrap_restarts;
          fo.unit = unit_of(fit_rad);
          return cmd_fit(fo, std::cerr);
        }
        if (pred->parsed()) {
          po.unit = unit_of(pred_rad);
          return cmd_predict(po, std::cerr);
        }
        if (mc->parsed()) {
          mo.params = parse_params(mc_params);
          mo.covariates = parse_covariate_spec(mc_cov);
          mo.errors = parse_error_spec(mc_err);
          mo.sizes.clear();
          for (double v : parse_list(join(mc_sizes), "sizes")) {
            if (v < 3 || v != static_cast<double>(static_cast<std::size_t>(v))) {
              throw ParseError("sizes: each entry must be an integer >= 3");
            }
            mo.sizes.push_back(static_cast<std::size_t>(v));
          }
          if (!mc_deps.empty()) mo.dependencies = parse_list(join(mc_deps), "dependency");
          mo.config = mc_flags.config();
          return cmd_mc_study(mo, std::cerr);
        }
        if (diag->parsed()) {
          if (!qq_prefix.empty()) dopt.qq_prefix = qq_prefix;
          dopt.unit = unit_of(diag_rad);
          return cmd_diagnose(dopt, std::cerr);
        }
        pl.kind = *parse_plot_kind(kind);
        pl.theta_component = component == "theta";
        pl.unit = unit_of(plot_rad);
        return cmd_plot(pl, std::cerr);
      },
      std::cerr);
}
