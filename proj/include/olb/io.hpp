#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"

#include "olb/billiard_map.hpp"
#include "olb/errors.hpp"
#include "olb/periodic_orbits.hpp"
#include "olb/polygon.hpp"
#include "olb/support_oval.hpp"
#include "olb/table_forge.hpp"

namespace olb::io {

using nlohmann::json;

inline constexpr std::size_t kFunctionSamples = 4096;

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Series tables keep their coefficients; sampled and function-backed tables
/// are written as uniform samples of p.
inline json oval_to_json(const SupportOval& oval, std::size_t samples = kFunctionSamples) {
  return std::visit(
      [&](const auto& rep) -> json {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, FourierSupport>) {
          return {{"type", "fourier"}, {"a0", rep.a0}, {"cos", rep.cos}, {"sin", rep.sin}};
        } else if constexpr (std::is_same_v<T, SampledSupport>) {
          return {{"type", "samples"}, {"p", rep.spline.samples()}};
        } else {
          return {{"type", "samples"}, {"p", oval.sample(samples)}, {"source", rep.label}};
        }
      },
      oval.representation());
}

inline SupportOval oval_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "fourier") {
      return SupportOval::fourier(j.at("a0").get<double>(), j.value("cos", std::vector<double>{}),
                                  j.value("sin", std::vector<double>{}));
    }
    if (type == "samples") return SupportOval::samples(j.at("p").get<std::vector<double>>());
    if (type == "ellipse") return SupportOval::ellipse(j.at("a").get<double>(), j.at("b").get<double>());
    throw IoError("unknown oval type '" + type + "'");
  } catch (const json::exception& e) {
    throw IoError(std::string("bad oval descriptor: ") + e.what());
  }
}

inline SupportOval load_oval(const std::string& path) { return oval_from_json(read_json(path)); }

/// Either a four-periodic spec or a radon arc.
using TableSpec = std::variant<FourPeriodicSpec, std::vector<double>>;

inline TableSpec spec_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "four-periodic") {
      std::vector<Harmonic> hs;
      if (j.contains("ellipse_t")) hs.push_back({2, std::cos(2.0 * j.at("ellipse_t").get<double>()), 0.0});
      for (const auto& h : j.value("harmonics", json::array()))
        hs.push_back({h.at("k").get<int>(), h.value("sin", 0.0), h.value("cos", 0.0)});
      return FourPeriodicSpec::from_harmonics(std::move(hs));
    }
    if (type == "radon-arc") return j.at("p").get<std::vector<double>>();
    throw IoError("unknown spec type '" + type + "'");
  } catch (const json::exception& e) {
    throw IoError(std::string("bad spec descriptor: ") + e.what());
  }
}

inline json spec_to_json(const FourPeriodicSpec& spec) {
  json hs = json::array();
  for (const Harmonic& h : spec.harmonics) hs.push_back({{"k", h.k}, {"sin", h.sin}, {"cos", h.cos}});
  return {{"type", "four-periodic"}, {"harmonics", hs}};
}

inline json radon_arc_to_json(const std::vector<double>& arc) { return {{"type", "radon-arc"}, {"p", arc}}; }

inline json orbit_to_json(const PeriodicOrbit& o) {
  return {{"n", o.n},           {"m", o.m},         {"angles", o.angles}, {"perimeter", o.perimeter},
          {"residual", o.residual}, {"action", o.action}, {"closure", o.closure}};
}

inline PeriodicOrbit orbit_from_json(const json& j) {
  try {
    PeriodicOrbit o;
    o.n = j.at("n").get<int>();
    o.m = j.at("m").get<int>();
    o.angles = j.at("angles").get<std::vector<double>>();
    o.perimeter = j.at("perimeter").get<double>();
    o.residual = j.at("residual").get<double>();
    o.action = j.value("action", 0.0);
    o.closure = j.value("closure", 0.0);
    return o;
  } catch (const json::exception& e) {
    throw IoError(std::string("bad orbit record: ") + e.what());
  }
}

inline json polygon_to_json(const PolygonConfig& poly) { return {{"alpha", poly.alpha}, {"p", poly.p}}; }

inline PolygonConfig polygon_from_json(const json& j) {
  try {
    PolygonConfig poly;
    poly.alpha = (j.contains("alpha") ? j.at("alpha") : j.at("α")).get<std::vector<double>>();
    poly.p = j.at("p").get<std::vector<double>>();
    return poly;
  } catch (const json::exception& e) {
    throw IoError(std::string("bad polygon record: ") + e.what());
  }
}

inline json validation_to_json(const ValidationReport& r) {
  return {{"passed", r.passed},
          {"min_p", r.min_p},
          {"min_p_at", r.min_p_at},
          {"min_curvature_radius", r.min_curvature_radius},
          {"min_curvature_radius_at", r.min_curvature_radius_at},
          {"max_periodicity_defect", r.max_periodicity_defect},
          {"failures", r.failures}};
}

/// step,alpha1,alpha2,R,M_x,M_y rows; `closure` (if finite) is appended as a
/// comment footer.
inline void write_orbit_csv(std::ostream& out, const Orbit& o,
                            double closure = std::numeric_limits<double>::quiet_NaN()) {
  out << "step,alpha1,alpha2,R,M_x,M_y\n" << std::setprecision(17);
  for (std::size_t k = 0; k < o.states.size(); ++k) {
    out << k << ',' << o.states[k].alpha1 << ',' << o.states[k].alpha2 << ',' << o.phase[k].R << ','
        << o.vertices[k].x() << ',' << o.vertices[k].y() << '\n';
  }
  if (std::isfinite(closure)) out << "# closure_residual," << closure << '\n';
}

inline void write_scan_csv(std::ostream& out, const ScanReport& r) {
  out << "alpha1,residual,closed\n" << std::setprecision(17);
  for (const ScanSample& s : r.samples)
    out << s.alpha1 << ',' << s.residual << ',' << (s.solved && std::abs(s.residual) < r.tol ? 1 : 0) << '\n';
}

inline json scan_summary_json(const ScanReport& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"samples", r.samples.size()},
          {"tol", r.tol},
          {"max_abs_residual", r.max_abs_residual},
          {"sign_changes", r.sign_changes},
          {"closed_count", r.closed_count},
          {"longest_closed_run", r.longest_closed_run},
          {"newton_failures", r.newton_failures},
          {"all_closed", r.all_closed}};
}

}  // namespace olb::io
