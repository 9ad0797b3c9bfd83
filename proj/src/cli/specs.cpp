#include "torreg/cli/specs.hpp"

#include <charconv>
#include <cmath>

#include "torreg/cli/csv.hpp"
#include "torreg/error.hpp"

namespace torreg::cli {

namespace {

std::pair<std::string, std::string> split_kind(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, {}};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::vector<double> expect(const std::string& body, std::size_t count, const std::string& what) {
  auto v = parse_list(body, what);
  if (v.size() != count) {
    throw ParseError(what + ": expected " + std::to_string(count) + " values, found " +
                     std::to_string(v.size()));
  }
  return v;
}

std::string join(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += format_number(v);
  }
  return out;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (item.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
      throw ParseError(what + ": '" + item + "' is not a finite number");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

ModelParams parse_params(const std::string& text) {
  const auto v = expect(text, 6, "params");
  const auto p = ModelParams::from_array({v[0], v[1], v[2], v[3], v[4], v[5]});
  if (const auto ok = params_valid(p); !ok.valid) throw PreconditionError("params: " + ok.diagnostic);
  return p;
}

CovariateSpec parse_covariate_spec(const std::string& text) {
  const auto [kind, body] = split_kind(text);
  if (kind == "vm") {
    const auto v = expect(body, 2, "covariates vm");
    VonMisesParams p{Angle(v[0]), v[1]};
    validate(p);
    return p;
  }
  if (kind == "wc") {
    const auto v = expect(body, 2, "covariates wc");
    WrappedCauchyParams p{Angle(v[0]), v[1]};
    validate(p);
    return p;
  }
  throw ParseError("covariates: unknown family '" + kind + "' (expected vm or wc)");
}

ErrorSpec parse_error_spec(const std::string& text) {
  const auto [kind, body] = split_kind(text);
  if (kind == "none") {
    if (!body.empty()) throw ParseError("errors: 'none' takes no values");
    return NoError{};
  }
  if (kind == "sine") {
    const auto v = expect(body, 3, "errors sine");
    BvmSineParams p{Angle(0.0), Angle(0.0), v[0], v[1], v[2]};
    validate(p);
    return p;
  }
  if (kind == "cosine") {
    const auto v = expect(body, 3, "errors cosine");
    BvmCosineParams p{Angle(0.0), Angle(0.0), v[0], v[1], v[2]};
    validate(p);
    return p;
  }
  if (kind == "mixture") {
    const auto v = expect(body, 7, "errors mixture");
    MixtureParams p{{Angle(0.0), Angle(0.0), v[0], v[1], v[2]}, {Angle(0.0), Angle(0.0), v[3], v[4], v[5]}, v[6]};
    validate(p);
    return p;
  }
  throw ParseError("errors: unknown family '" + kind + "' (expected none, sine, cosine or mixture)");
}

std::string format_params(const ModelParams& p) {
  const auto a = p.to_array();
  return join({a[0], a[1], a[2], a[3], a[4], a[5]});
}

std::string format_covariate_spec(const CovariateSpec& s) {
  return std::visit(Overloaded{
                        [](const VonMisesParams& p) { return "vm:" + join({p.mu.value(), p.kappa}); },
                        [](const WrappedCauchyParams& p) { return "wc:" + join({p.mu.value(), p.zeta}); },
                    },
                    s);
}

std::string format_error_spec(const ErrorSpec& s) {
  return std::visit(
      Overloaded{
          [](const NoError&) { return std::string("none"); },
          [](const BvmSineParams& p) { return "sine:" + join({p.kappa1, p.kappa2, p.kappa3}); },
          [](const BvmCosineParams& p) { return "cosine:" + join({p.rho1, p.rho2, p.rho3}); },
          [](const MixtureParams& p) {
            return "mixture:" + join({p.sine.kappa1, p.sine.kappa2, p.sine.kappa3, p.cosine.rho1,
                                      p.cosine.rho2, p.cosine.rho3, p.weight});
          },
      },
      s);
}

ErrorSpec with_dependency(const ErrorSpec& s, double dependency) {
  return std::visit(Overloaded{
                        [](const NoError& e) -> ErrorSpec { return e; },
                        [&](BvmSineParams p) -> ErrorSpec {
                          p.kappa3 = dependency;
                          return p;
                        },
                        [&](BvmCosineParams p) -> ErrorSpec {
                          p.rho3 = dependency;
                          return p;
                        },
                        [&](MixtureParams p) -> ErrorSpec {
                          p.sine.kappa3 = dependency;
                          p.cosine.rho3 = dependency;
                          return p;
                        },
                    },
                    s);
}

}  // namespace torreg::cli
