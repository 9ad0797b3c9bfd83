#include "torreg/cli/report.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "torreg/cli/csv.hpp"
#include "torreg/cli/specs.hpp"
#include "torreg/error.hpp"

namespace torreg::cli {

namespace {

constexpr const char* kFormat = "torreg-fit-1";

double number(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("fit report: missing key '" + key + "'");
  return parse_list(it->second, "fit report " + key).at(0);
}

template <class Int>
Int integer(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("fit report: missing key '" + key + "'");
  Int v{};
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("fit report: '" + key + "' is not an integer");
  }
  return v;
}

}  // namespace

FitReport make_fit_report(const FitResult& fit, const FitConfig& config, std::size_t n) {
  FitReport r;
  r.params = fit.params;
  r.loss = fit.loss;
  r.loss_torus = fit.loss_torus;
  r.loss_sphere = fit.loss_sphere;
  r.n = n;
  r.geometry = config.geometry;
  r.seed = config.seed.value;
  r.restarts = config.restarts;
  r.best_start = fit.best_start;
  r.standard_errors = fit.standard_errors;
  r.starts = fit.starts;
  return r;
}

std::string format_fit_report(const FitReport& r) {
  std::ostringstream os;
  os << "format = " << kFormat << '\n'
     << "n = " << r.n << '\n'
     << "geometry.major = " << format_number(r.geometry.major()) << '\n'
     << "geometry.minor = " << format_number(r.geometry.minor()) << '\n'
     << "seed = " << r.seed << '\n'
     << "restarts = " << r.restarts << '\n';
  const auto p = r.params.to_array();
  for (std::size_t i = 0; i < 6; ++i) os << kParamNames[i] << " = " << format_number(p[i]) << '\n';
  if (r.standard_errors) {
    for (std::size_t i = 0; i < 6; ++i) {
      os << "se." << kParamNames[i] << " = " << format_number((*r.standard_errors)[i]) << '\n';
    }
    os << "bootstrap.replicates = " << r.bootstrap_replicates << '\n'
       << "bootstrap.failures = " << r.bootstrap_failures << '\n';
  }
  os << "loss = " << format_number(r.loss) << '\n'
     << "loss.torus = " << format_number(r.loss_torus) << '\n'
     << "loss.sphere = " << format_number(r.loss_sphere) << '\n'
     << "best_start = " << r.best_start << '\n'
     << "[starts]\n"
     << "index";
  for (const char* prefix : {"init_", "final_"}) {
    for (const char* name : kParamNames) os << ',' << prefix << name;
  }
  os << ",final_loss,iterations,evaluations,converged,fallback,valid\n";
  for (std::size_t k = 0; k < r.starts.size(); ++k) {
    const auto& s = r.starts[k];
    os << k;
    for (double v : s.initial) os << ',' << format_number(v);
    for (double v : s.final_params) os << ',' << format_number(v);
    os << ',' << format_number(s.final_loss) << ',' << s.iterations << ',' << s.evaluations << ','
       << s.converged << ',' << s.used_fallback << ',' << s.valid << '\n';
  }
  return os.str();
}

FitReport parse_fit_report(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  bool starts_section = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line == "[starts]") {
      starts_section = true;
      break;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ParseError("fit report: malformed line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  if (kv["format"] != kFormat) throw ParseError("fit report: unsupported or missing format tag");

  FitReport r;
  r.n = integer<std::size_t>(kv, "n");
  r.geometry = TorusGeometry(number(kv, "geometry.major"), number(kv, "geometry.minor"));
  r.seed = integer<std::uint64_t>(kv, "seed");
  r.restarts = integer<std::size_t>(kv, "restarts");
  ParamVector p{};
  for (std::size_t i = 0; i < 6; ++i) p[i] = number(kv, kParamNames[i]);
  r.params = ModelParams::from_array(p);
  if (kv.contains("se.phi0")) {
    ParamVector se{};
    for (std::size_t i = 0; i < 6; ++i) se[i] = number(kv, std::string("se.") + kParamNames[i]);
    r.standard_errors = se;
    r.bootstrap_replicates = integer<std::size_t>(kv, "bootstrap.replicates");
    r.bootstrap_failures = integer<std::size_t>(kv, "bootstrap.failures");
  }
  r.loss = number(kv, "loss");
  r.loss_torus = number(kv, "loss.torus");
  r.loss_sphere = number(kv, "loss.sphere");
  r.best_start = integer<std::size_t>(kv, "best_start");

  if (starts_section) {
    const CsvTable t = parse_csv(in);
    if (t.header.size() != 19) throw ParseError("fit report: bad [starts] header");
    for (std::size_t row = 0; row < t.rows.size(); ++row) {
      StartRecord s;
      for (std::size_t i = 0; i < 6; ++i) {
        s.initial[i] = parse_cell(t, row, 1 + i);
        s.final_params[i] = parse_cell(t, row, 7 + i);
      }
      s.final_loss = parse_cell(t, row, 13);
      s.iterations = static_cast<int>(parse_cell(t, row, 14));
      s.evaluations = static_cast<int>(parse_cell(t, row, 15));
      s.converged = parse_cell(t, row, 16) != 0.0;
      s.used_fallback = parse_cell(t, row, 17) != 0.0;
      s.valid = parse_cell(t, row, 18) != 0.0;
      r.starts.push_back(s);
    }
  }
  return r;
}

FitReport read_fit_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  try {
    return parse_fit_report(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

}  // namespace torreg::cli
