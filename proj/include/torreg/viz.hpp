#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torreg/angle.hpp"

namespace torreg {

enum class Marker { circle, cross, box };

struct PlotSeries {
  std::string label;
  std::vector<Angle> angles;
  Marker marker = Marker::circle;
  std::string color = "#1f77b4";  // #rgb or #rrggbb
};

// Throws PreconditionError on an empty label or a malformed color.
void validate(const PlotSeries& s);

/// A complete SVG document. Every data marker is a <g class="marker">
/// translated to its pixel position, so marker centers can be read back
/// from the transform attribute.
struct SvgDoc {
  int width = 0;
  int height = 0;
  std::string body;
};

// Fixed-point with 4 decimals; "-0.0000" is printed as "0.0000".
std::string format_coord(double v);

/// Circular scatter plot: n concentric guide circles of radius i/n, and point
/// i of each series placed on circle i at its angle. Series are drawn in the
/// order given, so later series sit on top.
SvgDoc circular_scatter_svg(std::span<const PlotSeries> series, int size = 480);

/// Observed directions on the outer ring (radius 1), predicted on an inner
/// ring (radius 0.7), one chord per pair.
SvgDoc spoke_plot_svg(std::span<const Angle> observed, std::span<const Angle> predicted,
                      int size = 480);

inline constexpr double kSpokeInnerRadius = 0.7;

/// Scatter of (observed, predicted) quantile pairs on [0, 2 pi]^2 with the
/// identity line.
SvgDoc qq_plot_svg(std::span<const std::pair<double, double>> pairs, int size = 480,
                   const std::string& x_label = "observed", const std::string& y_label = "predicted");

}  // namespace torreg
