#include "torreg/viz.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

#include "torreg/error.hpp"

namespace torreg {

namespace {

constexpr double kMargin = 40.0;
constexpr double kMarkerSize = 3.0;
constexpr double kLegendRow = 18.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

class Writer {
 public:
  Writer(int width, int height) : width_(width), height_(height) {
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";
  }

  void circle(double cx, double cy, double r, const char* cls) {
    os_ << "<circle class=\"" << cls << "\" cx=\"" << format_coord(cx) << "\" cy=\"" << format_coord(cy)
        << "\" r=\"" << format_coord(r) << "\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"0.5\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const char* cls, const char* color) {
    os_ << "<line class=\"" << cls << "\" x1=\"" << format_coord(x1) << "\" y1=\"" << format_coord(y1)
        << "\" x2=\"" << format_coord(x2) << "\" y2=\"" << format_coord(y2) << "\" stroke=\"" << color
        << "\" stroke-width=\"0.75\"/>\n";
  }

  void text(double x, double y, const std::string& s, const char* anchor = "start") {
    os_ << "<text x=\"" << format_coord(x) << "\" y=\"" << format_coord(y)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" << anchor << "\">"
        << xml_escape(s) << "</text>\n";
  }

  void marker(double x, double y, Marker m, const std::string& color, const char* cls = "marker") {
    os_ << "<g class=\"" << cls << "\" transform=\"translate(" << format_coord(x) << ' ' << format_coord(y)
        << ")\">";
    const std::string s = format_coord(kMarkerSize);
    const std::string ns = format_coord(-kMarkerSize);
    switch (m) {
      case Marker::circle:
        os_ << "<circle cx=\"0\" cy=\"0\" r=\"" << s << "\" fill=\"" << color << "\"/>";
        break;
      case Marker::cross:
        os_ << "<path d=\"M" << ns << ' ' << ns << 'L' << s << ' ' << s << 'M' << ns << ' ' << s << 'L' << s
            << ' ' << ns << "\" stroke=\"" << color << "\" stroke-width=\"1.5\" fill=\"none\"/>";
        break;
      case Marker::box:
        os_ << "<rect x=\"" << ns << "\" y=\"" << ns << "\" width=\"" << format_coord(2 * kMarkerSize)
            << "\" height=\"" << format_coord(2 * kMarkerSize) << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>";
        break;
    }
    os_ << "</g>\n";
  }

  void legend(double x, double y, const std::vector<std::pair<std::string, std::pair<Marker, std::string>>>& items) {
    os_ << "<g class=\"legend\">\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double row = y + kLegendRow * static_cast<double>(i);
      marker(x, row, items[i].second.first, items[i].second.second, "legend-marker");
      text(x + 10.0, row + 4.0, items[i].first);
    }
    os_ << "</g>\n";
  }

  SvgDoc finish() {
    os_ << "</svg>\n";
    return {width_, height_, os_.str()};
  }

 private:
  int width_;
  int height_;
  std::ostringstream os_;
};

void check_size(int size) {
  if (size < 4 * static_cast<int>(kMargin)) throw PreconditionError("plot size too small");
}

}  // namespace

void validate(const PlotSeries& s) {
  static const std::regex hex("#([0-9a-fA-F]{3}|[0-9a-fA-F]{6})");
  if (s.label.empty()) throw PreconditionError("plot series needs a label");
  if (!std::regex_match(s.color, hex)) throw PreconditionError("invalid color '" + s.color + "'");
}

std::string format_coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

SvgDoc circular_scatter_svg(std::span<const PlotSeries> series, int size) {
  check_size(size);
  if (series.empty()) throw PreconditionError("circular scatter: no series");
  const std::size_t n = series.front().angles.size();
  if (n == 0) throw PreconditionError("circular scatter: empty series");
  for (const auto& s : series) {
    validate(s);
    if (s.angles.size() != n) throw PreconditionError("circular scatter: series lengths differ");
  }

  const double legend_height = kLegendRow * static_cast<double>(series.size()) + 8.0;
  Writer w(size, size + static_cast<int>(std::ceil(legend_height)));
  const double c = size / 2.0;
  const double radius = c - kMargin;
  for (std::size_t i = 1; i <= n; ++i) {
    w.circle(c, c, radius * static_cast<double>(i) / static_cast<double>(n), "guide");
  }
  w.line(c + radius, c, c + radius + 8.0, c, "tick", "#000000");
  w.text(c + radius + 11.0, c + 4.0, "0");
  for (const auto& s : series) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = radius * static_cast<double>(i + 1) / static_cast<double>(n);
      const double a = s.angles[i].value();
      w.marker(c + r * std::cos(a), c - r * std::sin(a), s.marker, s.color);
    }
  }
  std::vector<std::pair<std::string, std::pair<Marker, std::string>>> items;
  for (const auto& s : series) items.push_back({s.label, {s.marker, s.color}});
  w.legend(kMargin / 2.0, size + 4.0, items);
  return w.finish();
}

SvgDoc spoke_plot_svg(std::span<const Angle> observed, std::span<const Angle> predicted, int size) {
  check_size(size);
  if (observed.size() != predicted.size()) throw PreconditionError("spoke plot: length mismatch");
  if (observed.empty()) throw PreconditionError("spoke plot: empty input");

  const std::string obs_color = "#1f77b4", pred_color = "#d62728";
  Writer w(size, size + static_cast<int>(2 * kLegendRow + 8.0));
  const double c = size / 2.0;
  const double radius = c - kMargin;
  const double inner = kSpokeInnerRadius * radius;
  w.circle(c, c, radius, "ring");
  w.circle(c, c, inner, "ring");
  w.line(c + radius, c, c + radius + 8.0, c, "tick", "#000000");
  w.text(c + radius + 11.0, c + 4.0, "0");
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double a = observed[i].value(), b = predicted[i].value();
    w.line(c + radius * std::cos(a), c - radius * std::sin(a), c + inner * std::cos(b),
           c - inner * std::sin(b), "chord", "#7f7f7f");
  }
  for (const Angle& a : observed) {
    w.marker(c + radius * std::cos(a.value()), c - radius * std::sin(a.value()), Marker::circle, obs_color);
  }
  for (const Angle& b : predicted) {
    w.marker(c + inner * std::cos(b.value()), c - inner * std::sin(b.value()), Marker::cross, pred_color);
  }
  w.legend(kMargin / 2.0, size + 4.0,
           {{"observed", {Marker::circle, obs_color}}, {"predicted", {Marker::cross, pred_color}}});
  return w.finish();
}

SvgDoc qq_plot_svg(std::span<const std::pair<double, double>> pairs, int size,
                   const std::string& x_label, const std::string& y_label) {
  check_size(size);
  if (pairs.empty()) throw PreconditionError("qq plot: empty input");
  Writer w(size, size);
  const double lo = kMargin, hi = size - kMargin;
  auto px = [&](double v) { return lo + (hi - lo) * v / kTwoPi; };
  auto py = [&](double v) { return hi - (hi - lo) * v / kTwoPi; };
  w.line(lo, hi, hi, hi, "axis", "#000000");
  w.line(lo, hi, lo, lo, "axis", "#000000");
  w.line(px(0.0), py(0.0), px(kTwoPi), py(kTwoPi), "identity", "#c8c8c8");
  const std::pair<double, const char*> ticks[] = {{0.0, "0"}, {kPi, "pi"}, {kTwoPi, "2pi"}};
  for (const auto& [v, label] : ticks) {
    w.line(px(v), hi, px(v), hi + 5.0, "tick", "#000000");
    w.text(px(v), hi + 18.0, label, "middle");
    w.line(lo - 5.0, py(v), lo, py(v), "tick", "#000000");
    w.text(lo - 8.0, py(v) + 4.0, label, "end");
  }
  w.text((lo + hi) / 2.0, size - 6.0, x_label, "middle");
  w.text(8.0, lo - 12.0, y_label);
  for (const auto& [x, y] : pairs) w.marker(px(x), py(y), Marker::circle, "#1f77b4");
  return w.finish();
}

}  // namespace torreg
