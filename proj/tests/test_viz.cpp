#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <random>
#include <sstream>

#include "torreg/error.hpp"
#include "torreg/viz.hpp"

using namespace torreg;
using doctest::Approx;
namespace pt = boost::property_tree;

namespace {

pt::ptree parse(const SvgDoc& doc) {
  std::istringstream in(doc.body);
  pt::ptree tree;
  pt::read_xml(in, tree);  // throws on malformed XML
  return tree;
}

void collect(const pt::ptree& node, const std::string& cls, std::vector<const pt::ptree*>& out) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") continue;
    if (child.get("<xmlattr>.class", "") == cls) out.push_back(&child);
    collect(child, cls, out);
  }
}

std::vector<const pt::ptree*> by_class(const pt::ptree& tree, const std::string& cls) {
  std::vector<const pt::ptree*> out;
  collect(tree, cls, out);
  return out;
}

std::pair<double, double> translate(const pt::ptree& g) {
  const auto t = g.get<std::string>("<xmlattr>.transform");
  double x = 0, y = 0;
  std::sscanf(t.c_str(), "translate(%lf %lf)", &x, &y);
  return {x, y};
}

std::vector<Angle> angles(std::initializer_list<double> v) {
  std::vector<Angle> out;
  for (double x : v) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("coordinate formatting") {
  CHECK(format_coord(1.0) == "1.0000");
  CHECK(format_coord(-0.00001) == "0.0000");
  CHECK(format_coord(12.34567) == "12.3457");
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(validate(PlotSeries{"", angles({1.0})}), PreconditionError);
  CHECK_THROWS_AS(validate(PlotSeries{"a", angles({1.0}), Marker::box, "red"}), PreconditionError);
  CHECK_NOTHROW(validate(PlotSeries{"a", angles({1.0}), Marker::box, "#abc"}));
}

TEST_CASE("circular scatter layout") {
  const std::vector<PlotSeries> one{{"obs", angles({0.0})}};
  const auto doc = circular_scatter_svg(one, 480);
  const auto tree = parse(doc);
  CHECK(tree.get<int>("svg.<xmlattr>.width") == 480);
  const auto guides = by_class(tree, "guide");
  REQUIRE(guides.size() == 1);
  const double c = 240.0, radius = guides[0]->get<double>("<xmlattr>.r");
  CHECK(guides[0]->get<double>("<xmlattr>.cx") == c);
  const auto markers = by_class(tree, "marker");
  REQUIRE(markers.size() == 1);
  const auto [x, y] = translate(*markers[0]);
  CHECK(x == Approx(c + radius));
  CHECK(y == Approx(c));
  CHECK(by_class(tree, "tick").size() == 1);
  CHECK(by_class(tree, "legend-marker").size() == 1);

  const std::vector<PlotSeries> four{{"obs", angles({0.1, 0.2, 0.3, 0.4})}};
  const auto t4 = parse(circular_scatter_svg(four, 480));
  const auto g4 = by_class(t4, "guide");
  REQUIRE(g4.size() == 4);
  const double outer = g4[3]->get<double>("<xmlattr>.r");
  for (int i = 0; i < 4; ++i) CHECK(g4[i]->get<double>("<xmlattr>.r") == Approx(outer * (i + 1) / 4.0));
}

TEST_CASE("equal series give coincident markers and the count matches") {
  const auto a = angles({0.5, 2.0, 4.0, 6.0, 1.0});
  const std::vector<PlotSeries> s{{"observed", a, Marker::circle, "#1f77b4"},
                                  {"predicted", a, Marker::cross, "#d62728"},
                                  {"curve <&>", a, Marker::box, "#000"}};
  const auto tree = parse(circular_scatter_svg(s, 400));
  const auto m = by_class(tree, "marker");
  REQUIRE(m.size() == 15);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(translate(*m[i]) == translate(*m[i + 5]));
    CHECK(translate(*m[i]) == translate(*m[i + 10]));
  }
  CHECK(by_class(tree, "legend-marker").size() == 3);
  const std::vector<PlotSeries> bad{{"a", a}, {"b", angles({1.0})}};
  CHECK_THROWS_AS(circular_scatter_svg(bad, 400), PreconditionError);
}

TEST_CASE("rotating the input rotates every marker about the centre") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  std::vector<Angle> a;
  for (int i = 0; i < 30; ++i) a.emplace_back(u(rng));
  for (double alpha : {0.3, 2.0, 5.0}) {
    std::vector<Angle> b;
    for (auto x : a) b.push_back(x + Angle(alpha));
    const auto ta = parse(circular_scatter_svg(std::vector<PlotSeries>{{"s", a}}, 480));
    const auto tb = parse(circular_scatter_svg(std::vector<PlotSeries>{{"s", b}}, 480));
    const auto ma = by_class(ta, "marker");
    const auto mb = by_class(tb, "marker");
    REQUIRE(ma.size() == mb.size());
    for (std::size_t i = 0; i < ma.size(); ++i) {
      const auto [x, y] = translate(*ma[i]);
      const auto [xr, yr] = translate(*mb[i]);
      // Screen y points down, so a counter-clockwise turn is (dx cos - dy sin, dx sin + dy cos) with dy flipped.
      const double dx = x - 240, dy = 240 - y;
      const double ex = 240 + dx * std::cos(alpha) - dy * std::sin(alpha);
      const double ey = 240 - (dx * std::sin(alpha) + dy * std::cos(alpha));
      CHECK(std::abs(xr - ex) < 0.01);
      CHECK(std::abs(yr - ey) < 0.01);
    }
  }
}

TEST_CASE("spoke plot") {
  const auto obs = angles({0.0, 1.0, 2.5});
  auto tree = parse(spoke_plot_svg(obs, obs, 480));
  const auto rings = by_class(tree, "ring");
  REQUIRE(rings.size() == 2);
  const double outer = rings[0]->get<double>("<xmlattr>.r"), inner = rings[1]->get<double>("<xmlattr>.r");
  CHECK(inner == Approx(kSpokeInnerRadius * outer).epsilon(1e-6));
  const auto chords = by_class(tree, "chord");
  REQUIRE(chords.size() == 3);
  for (const auto* ch : chords) {
    const double x1 = ch->get<double>("<xmlattr>.x1") - 240, y1 = 240 - ch->get<double>("<xmlattr>.y1");
    const double x2 = ch->get<double>("<xmlattr>.x2") - 240, y2 = 240 - ch->get<double>("<xmlattr>.y2");
    CHECK(std::atan2(y1, x1) == Approx(std::atan2(y2, x2)).epsilon(1e-4).scale(1.0));
  }
  CHECK(by_class(tree, "marker").size() == 6);

  tree = parse(spoke_plot_svg(angles({0.0}), angles({kPi}), 480));
  const auto ch = by_class(tree, "chord");
  REQUIRE(ch.size() == 1);
  CHECK(ch[0]->get<double>("<xmlattr>.x1") == Approx(240 + outer));
  CHECK(ch[0]->get<double>("<xmlattr>.x2") == Approx(240 - inner).epsilon(1e-6));
  CHECK(ch[0]->get<double>("<xmlattr>.y2") == Approx(240.0).epsilon(1e-6));

  CHECK_THROWS_AS(spoke_plot_svg(std::vector<Angle>{}, std::vector<Angle>{}, 480), PreconditionError);
  CHECK_THROWS_AS(spoke_plot_svg(obs, angles({1.0}), 480), PreconditionError);
}

TEST_CASE("qq plot") {
  const std::vector<std::pair<double, double>> pairs{{0.5, 0.6}, {1.0, 1.2}, {3.0, 3.0}};
  const auto tree = parse(qq_plot_svg(pairs, 400, "obs <phi>", "pred"));
  CHECK(by_class(tree, "marker").size() == 3);
  CHECK(by_class(tree, "identity").size() == 1);
  CHECK_THROWS_AS(qq_plot_svg(std::vector<std::pair<double, double>>{}, 400), PreconditionError);
}

TEST_CASE("output is byte-identical across calls") {
  const std::vector<PlotSeries> s{{"a", angles({0.1, 3.3, 6.0})}, {"b", angles({1.1, 0.3, 2.0}), Marker::cross, "#d62728"}};
  CHECK(circular_scatter_svg(s, 480).body == circular_scatter_svg(s, 480).body);
  const auto o = angles({0.1, 0.2}), p = angles({0.3, 0.4});
  CHECK(spoke_plot_svg(o, p).body == spoke_plot_svg(o, p).body);
  CHECK_THROWS_AS(circular_scatter_svg(s, 100), PreconditionError);
}
