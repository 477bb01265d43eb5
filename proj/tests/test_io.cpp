#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "olb/io.hpp"
#include "olb/svg.hpp"

using namespace olb;

TEST(Io, FourierRoundTrip) {
  const SupportOval o = SupportOval::fourier(1.0, {0.0, 0.05, 0.01}, {0.0, 0.02});
  const SupportOval back = io::oval_from_json(io::json::parse(io::oval_to_json(o).dump()));
  for (double a = 0.0; a < kTwoPi; a += 0.1) EXPECT_EQ(back.p(a), o.p(a));
}

TEST(Io, FunctionBackendSerializesAsSamples) {
  const ForgedTable t = from_f(FourPeriodicSpec::from_harmonics({{2, 0.1, 0.0}}));
  const SupportOval back = io::oval_from_json(io::oval_to_json(t.oval));
  for (double a = 0.0; a < kTwoPi; a += 0.1) EXPECT_NEAR(back.p(a), t.oval.p(a), 1e-12);
}

TEST(Io, SpecParsing) {
  const auto spec = io::spec_from_json(io::json::parse(R"({"type":"four-periodic","harmonics":[{"k":2,"sin":0.1}]})"));
  const auto& fp = std::get<FourPeriodicSpec>(spec);
  EXPECT_NEAR(fp.eval(0.3)[0], 0.1 * std::sin(0.6), 1e-16);
  const auto e = io::spec_from_json(io::json::parse(R"({"type":"four-periodic","ellipse_t":0.8})"));
  EXPECT_NEAR(std::get<FourPeriodicSpec>(e).eval(0.2)[0], std::cos(1.6) * std::sin(0.4), 1e-16);
  EXPECT_THROW(io::spec_from_json(io::json::parse(R"({"type":"bogus"})")), IoError);
  EXPECT_THROW(io::spec_from_json(io::json::parse(R"({"harmonics":[]})")), IoError);
}

TEST(Io, OrbitAndPolygonRoundTrip) {
  PeriodicOrbit o;
  o.n = 3;
  o.angles = {0.1, 2.2, 4.3};
  o.perimeter = 10.5;
  const PeriodicOrbit b = io::orbit_from_json(io::orbit_to_json(o));
  EXPECT_EQ(b.angles, o.angles);
  EXPECT_EQ(b.perimeter, o.perimeter);
  const PolygonConfig poly{{0.0, 2.0, 4.0}, {1.0, 1.1, 0.9}};
  const PolygonConfig q = io::polygon_from_json(io::polygon_to_json(poly));
  EXPECT_EQ(q.alpha, poly.alpha);
  EXPECT_EQ(q.p, poly.p);
  const PolygonConfig greek = io::polygon_from_json(io::json::parse(R"({"α":[0,2,4],"p":[1,1,1]})"));
  EXPECT_EQ(greek.alpha.size(), 3u);
}

TEST(Io, OrbitCsv) {
  const Orbit o = orbit(SupportOval::circle(1.0), {0.0, kPi / 2}, 2);
  std::ostringstream out;
  io::write_orbit_csv(out, o, 0.0);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("step,alpha1,alpha2,R,M_x,M_y\n", 0), 0u);
  EXPECT_NE(s.find("# closure_residual,0"), std::string::npos);
}

TEST(Io, MissingFile) { EXPECT_THROW(io::read_json("/nonexistent/table.json"), IoError); }

TEST(Svg, RenderContainsPrimitives) {
  svg::Scene scene;
  scene.boundary = svg::boundary_points(SupportOval::circle(1.0));
  EXPECT_EQ(scene.boundary.size(), 720u);
  scene.polylines.push_back({{1, 1}, {-1, 1}});
  scene.dots.push_back({0, 1});
  scene.circles.push_back({{0, 2}, 1.0});
  const std::string s = svg::render(scene);
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("<circle"), std::string::npos);
  EXPECT_NE(s.find("<path"), std::string::npos);
}
