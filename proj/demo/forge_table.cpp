// Forge a table from f(x) = eps sin 2x and check its family of
// parallelogram orbits.
//
//   demo_forge_table [eps] [table.json]

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "olb/io.hpp"
#include "olb/olb.hpp"

int main(int argc, char** argv) {
  using namespace olb;
  const double eps = argc > 1 ? std::atof(argv[1]) : 0.1;
  const FourPeriodicSpec spec = FourPeriodicSpec::from_harmonics({{2, eps, 0.0}});
  std::optional<ForgedTable> forged;
  try {
    forged = from_f(spec);
  } catch (const ConstructionError& e) {
    std::fprintf(stderr, "cannot forge: %s\n", e.what());
    return 2;
  }
  const ForgedTable& t = *forged;
  std::printf("eps=%g  fourier=%d  max|f'|=%.4f  min alpha'=%.4f  p(0)=%.6f\n", eps, t.fourier, t.max_abs_fprime,
              t.min_alpha_prime, t.oval.p(0.0));

  for (double x = 0.0; x < kPi / 2; x += kPi / 16) {
    const ParallelogramState s = parallelogram_orbit(spec, x);
    const Orbit o = orbit(t.oval, {s.alpha1, s.alpha2}, 4);
    std::printf("  x=%.4f  omega=%.6f  perimeter=%.12f  closure=%.1e\n", x, s.omega(),
                circumscribed_perimeter(t.oval, {o.states[0].alpha1, o.states[1].alpha1, o.states[2].alpha1,
                                                 o.states[3].alpha1}, 1),
                std::abs(o.states[4].alpha1 - s.alpha1 - kTwoPi));
  }

  const ScanReport r = invariant_curve_scan(t.oval, 4, 1, 128);
  std::printf("n=4 scan: %zu/%zu closed, max |residual| %.2e\n", r.closed_count, r.samples.size(), r.max_abs_residual);
  if (argc > 2) io::write_json(argv[2], io::oval_to_json(t.oval));
}
