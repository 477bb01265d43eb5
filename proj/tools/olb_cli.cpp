// olb: command-line front end for the outer length billiard library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "olb/io.hpp"
#include "olb/olb.hpp"
#include "olb/svg.hpp"
#include "olb/verify.hpp"

namespace {

using olb::io::json;

enum Exit : int { kOk = 0, kValidation = 2, kNumeric = 3, kIo = 4 };

struct RunConfig {
  std::string table;
  std::string spec;
  std::string out;
  std::string svg;
  int n = 3;
  int m = 1;
  int steps = 8;
  std::size_t samples = 256;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<double> state;
  std::vector<double> point;
  std::optional<double> x;
  int size = 640;
  double stroke = 1.5;
  bool circles = false;
};

void emit(const RunConfig& cfg, const json& j) {
  if (cfg.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    olb::io::write_json(cfg.out, j);
  }
}

olb::SupportOval forge_from_spec(const std::string& path) {
  const auto spec = olb::io::spec_from_json(olb::io::read_json(path));
  if (const auto* fp = std::get_if<olb::FourPeriodicSpec>(&spec)) return olb::from_f(*fp).oval;
  return olb::radon_like(std::get<std::vector<double>>(spec));
}

/// --table wins; otherwise the table is forged from --spec.
olb::SupportOval load_table(const RunConfig& cfg) {
  if (!cfg.table.empty()) {
    olb::SupportOval oval = olb::io::load_oval(cfg.table);
    oval.require_valid();
    return oval;
  }
  if (!cfg.spec.empty()) return forge_from_spec(cfg.spec);
  throw olb::DomainError("either --table or --spec is required");
}

olb::LinePairState initial_state(const RunConfig& cfg, const olb::SupportOval& oval) {
  if (cfg.state.size() == 2) return {cfg.state[0], cfg.state[1]};
  if (cfg.point.size() == 2) return olb::state_from_point(oval, {cfg.point[0], cfg.point[1]});
  if (cfg.x) {
    if (cfg.spec.empty()) throw olb::DomainError("--x needs a four-periodic --spec");
    const auto spec = olb::io::spec_from_json(olb::io::read_json(cfg.spec));
    const auto* fp = std::get_if<olb::FourPeriodicSpec>(&spec);
    if (!fp) throw olb::DomainError("--x needs a four-periodic --spec");
    const olb::ParallelogramState p = olb::parallelogram_orbit(*fp, *cfg.x);
    return {p.alpha1, p.alpha2};
  }
  return {0.0, 0.5 * olb::kPi};
}

olb::svg::Scene orbit_scene(const olb::SupportOval& oval, const olb::Orbit& o, bool circles) {
  olb::svg::Scene scene;
  scene.boundary = olb::svg::boundary_points(oval);
  std::vector<olb::PlanePoint> poly;
  for (std::size_t k = 0; k < o.states.size(); ++k) {
    poly.push_back(oval.point_at(o.states[k].alpha1));
    poly.push_back(o.vertices[k]);
    poly.push_back(oval.point_at(o.states[k].alpha2));
    scene.dots.push_back(oval.point_at(o.states[k].alpha2));
    if (circles) {
      const double r = o.phase[k].R;
      if (k > 0) scene.circles.push_back({oval.point_at(o.states[k].alpha1) + r * olb::unit_normal(o.states[k].alpha1), r});
    }
  }
  scene.polylines.push_back(poly);
  return scene;
}

void write_svg(const RunConfig& cfg, const olb::svg::Scene& scene) {
  if (cfg.svg.empty()) return;
  olb::io::write_text(cfg.svg, olb::svg::render(scene, {cfg.size, cfg.stroke}));
}

int cmd_forge(const RunConfig& cfg) {
  if (cfg.spec.empty()) throw olb::DomainError("forge needs --spec");
  const auto spec = olb::io::spec_from_json(olb::io::read_json(cfg.spec));
  json report;
  std::optional<olb::SupportOval> oval;
  if (const auto* fp = std::get_if<olb::FourPeriodicSpec>(&spec)) {
    const olb::ForgedTable t = olb::from_f(*fp);
    oval = t.oval;
    report["kind"] = "four-periodic";
    report["fourier"] = t.fourier;
    report["max_abs_fprime"] = t.max_abs_fprime;
    report["min_alpha_prime"] = t.min_alpha_prime;
  } else {
    oval = olb::radon_like(std::get<std::vector<double>>(spec));
    report["kind"] = "radon-like";
  }
  // Support values along the axes; for an axis-aligned ellipse these are its semi-axes.
  report["support_axes"] = {oval->p(0.0), oval->p(0.5 * olb::kPi)};
  report["perimeter"] = oval->perimeter();
  report["validation"] = olb::io::validation_to_json(oval->validate());
  const json table = olb::io::oval_to_json(*oval);
  if (cfg.out.empty()) {
    std::cout << table.dump() << '\n';
  } else {
    olb::io::write_json(cfg.out, table);
  }
  std::cerr << report.dump(2) << '\n';
  olb::svg::Scene scene;
  scene.boundary = olb::svg::boundary_points(*oval);
  write_svg(cfg, scene);
  return kOk;
}

int cmd_iterate(const RunConfig& cfg) {
  const olb::SupportOval oval = load_table(cfg);
  const olb::LinePairState start = initial_state(cfg, oval);
  const olb::Orbit o = olb::orbit(oval, start, static_cast<std::size_t>(cfg.steps));
  const double closure = olb::closure_defect(o.states.back(), o.states.front());
  std::ostringstream csv;
  olb::io::write_orbit_csv(csv, o, closure);
  if (cfg.out.empty()) {
    std::cout << csv.str();
  } else {
    olb::io::write_text(cfg.out, csv.str());
  }
  write_svg(cfg, orbit_scene(oval, o, cfg.circles));
  return kOk;
}

int cmd_find_periodic(const RunConfig& cfg) {
  const olb::SupportOval oval = load_table(cfg);
  std::vector<std::vector<double>> seeds{olb::regular_angles(cfg.n, cfg.m)};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  const double gap = olb::kTwoPi * cfg.m / cfg.n;
  for (std::size_t k = 0; k < 8; ++k) {
    std::vector<double> s = olb::regular_angles(cfg.n, cfg.m, olb::kTwoPi * jitter(rng));
    for (double& a : s) a += gap * jitter(rng);
    seeds.push_back(s);
  }
  std::optional<olb::PeriodicOrbit> best;
  std::string last_error;
  for (const auto& s : seeds) {
    try {
      best = olb::find_periodic(oval, cfg.n, cfg.m, s);
      break;
    } catch (const olb::Error& e) {
      last_error = e.what();
    }
  }
  if (!best) throw olb::ConvergenceError(last_error);
  emit(cfg, olb::io::orbit_to_json(*best));
  if (!cfg.svg.empty()) {
    olb::svg::Scene scene;
    scene.boundary = olb::svg::boundary_points(oval);
    std::vector<olb::PlanePoint> poly;
    for (int i = 0; i <= best->n; ++i) {
      const double a = best->angles[static_cast<std::size_t>(i % best->n)];
      const double b = best->angles[static_cast<std::size_t>((i + 1) % best->n)];
      poly.push_back(olb::vertex(oval, {a, a + olb::wrap_angle(b - a)}));
      scene.dots.push_back(oval.point_at(b));
    }
    scene.polylines.push_back(poly);
    write_svg(cfg, scene);
  }
  return kOk;
}

int cmd_scan(const RunConfig& cfg) {
  const olb::SupportOval oval = load_table(cfg);
  const olb::ScanReport r = olb::invariant_curve_scan(oval, cfg.n, cfg.m, cfg.samples, cfg.tol, cfg.workers);
  std::ostringstream csv;
  olb::io::write_scan_csv(csv, r);
  if (cfg.out.empty()) {
    std::cout << csv.str();
  } else {
    olb::io::write_text(cfg.out, csv.str());
  }
  std::cerr << olb::io::scan_summary_json(r).dump(2) << '\n';
  return r.newton_failures == 0 ? kOk : kNumeric;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.table.empty() && cfg.spec.empty()) throw olb::DomainError("verify needs --table or --spec");
  const olb::SupportOval oval = cfg.table.empty() ? forge_from_spec(cfg.spec) : olb::io::load_oval(cfg.table);
  const olb::verify::Report rep = olb::verify::full_suite(oval, cfg.samples, cfg.seed);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"skipped", c.skipped},
                      {"measured", c.measured},
                      {"tolerance", c.tolerance},
                      {"samples", c.samples},
                      {"violations", c.violations},
                      {"failures", c.failures}});
  }
  emit(cfg, {{"passed", rep.passed()}, {"checks", checks}});
  if (rep.passed()) return kOk;
  return rep.checks.front().passed ? kNumeric : kValidation;
}

int cmd_render(const RunConfig& cfg) {
  if (cfg.svg.empty()) throw olb::DomainError("render needs --svg");
  const olb::SupportOval oval = load_table(cfg);
  if (cfg.steps > 0) {
    const olb::Orbit o = olb::orbit(oval, initial_state(cfg, oval), static_cast<std::size_t>(cfg.steps));
    write_svg(cfg, orbit_scene(oval, o, cfg.circles));
  } else {
    olb::svg::Scene scene;
    scene.boundary = olb::svg::boundary_points(oval);
    write_svg(cfg, scene);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer length billiards: tables, orbits, periodic orbits and verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto table_opt = [&](CLI::App* sc) { sc->add_option("--table", cfg.table, "table JSON")->check(CLI::ExistingFile); };
  auto spec_opt = [&](CLI::App* sc) { sc->add_option("--spec", cfg.spec, "table spec JSON")->check(CLI::ExistingFile); };
  auto out_opt = [&](CLI::App* sc) { sc->add_option("--out", cfg.out, "output path (default stdout)"); };
  auto svg_opts = [&](CLI::App* sc) {
    sc->add_option("--svg", cfg.svg, "SVG output path");
    sc->add_option("--size", cfg.size, "SVG size in pixels")->check(CLI::PositiveNumber);
    sc->add_option("--stroke", cfg.stroke, "stroke width in pixels")->check(CLI::PositiveNumber);
  };
  auto nm_opts = [&](CLI::App* sc) {
    sc->add_option("--n", cfg.n, "period")->check(CLI::Range(3, 100000));
    sc->add_option("--m", cfg.m, "rotation index")->check(CLI::PositiveNumber);
  };
  auto state_opts = [&](CLI::App* sc) {
    sc->add_option("--state", cfg.state, "initial tangency angles a1,a2")->delimiter(',')->expected(2);
    sc->add_option("--point", cfg.point, "initial exterior point x,y")->delimiter(',')->expected(2);
    sc->add_option("--x", cfg.x, "family parameter of a four-periodic spec");
    sc->add_option("--steps", cfg.steps, "number of map steps")->check(CLI::NonNegativeNumber);
    sc->add_flag("--circles", cfg.circles, "draw auxiliary circles");
  };
  auto common = [&](CLI::App* sc) {
    sc->add_option("--samples", cfg.samples, "sample count")->check(CLI::PositiveNumber);
    sc->add_option("--tol", cfg.tol, "tolerance in (0, 1e-2]")->check(CLI::Range(0.0, 1e-2));
    sc->add_option("--seed", cfg.seed, "PRNG seed");
    sc->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* forge = app.add_subcommand("forge", "construct a table from a spec");
  spec_opt(forge);
  out_opt(forge);
  svg_opts(forge);
  auto* iterate = app.add_subcommand("iterate", "iterate the billiard map");
  table_opt(iterate);
  spec_opt(iterate);
  out_opt(iterate);
  svg_opts(iterate);
  state_opts(iterate);
  auto* findp = app.add_subcommand("find-periodic", "find an n-periodic orbit");
  table_opt(findp);
  spec_opt(findp);
  out_opt(findp);
  svg_opts(findp);
  nm_opts(findp);
  common(findp);
  auto* scan = app.add_subcommand("scan", "closure residual along the first angle");
  table_opt(scan);
  spec_opt(scan);
  out_opt(scan);
  nm_opts(scan);
  common(scan);
  auto* verify = app.add_subcommand("verify", "run the verification suites on a table");
  table_opt(verify);
  spec_opt(verify);
  out_opt(verify);
  common(verify);
  auto* render = app.add_subcommand("render", "draw a table and optionally an orbit");
  table_opt(render);
  spec_opt(render);
  svg_opts(render);
  state_opts(render);
  render->get_option("--steps")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  if (!(cfg.tol > 0.0)) {
    std::cerr << "error: --tol must be positive\n";
    return kValidation;
  }

  try {
    if (forge->parsed()) return cmd_forge(cfg);
    if (iterate->parsed()) return cmd_iterate(cfg);
    if (findp->parsed()) return cmd_find_periodic(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (render->parsed()) return cmd_render(cfg);
  } catch (const olb::StepFailure& e) {
    std::cerr << "error: step failure at index " << e.index() << ": " << e.what() << '\n';
    return kNumeric;
  } catch (const olb::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const olb::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const olb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}
