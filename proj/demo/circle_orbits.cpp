// Periodic orbits of a perturbed circle and of an ellipse.

#include <cmath>
#include <cstdio>

#include "olb/olb.hpp"

int main() {
  using namespace olb;
  const SupportOval tables[] = {SupportOval::circle(1.0), SupportOval::ellipse(0.9, 0.6),
                                SupportOval::fourier(1.0, {0.0, 0.0, 0.05}, {})};
  const char* names[] = {"circle", "ellipse 0.9x0.6", "1 + 0.05 cos 3a"};

  for (int t = 0; t < 3; ++t) {
    std::printf("%s (perimeter %.6f)\n", names[t], tables[t].perimeter());
    for (auto [n, m] : {std::pair{3, 1}, std::pair{4, 1}, std::pair{5, 1}, std::pair{5, 2}}) {
      const PeriodicOrbit o = find_periodic(tables[t], n, m);
      std::printf("  n=%d m=%d  perimeter %.12f  residual %.1e  closure %.1e\n", n, m, o.perimeter, o.residual,
                  o.closure);
    }
  }

  // A non-periodic orbit: rotation number of an irrational-looking start.
  const SupportOval& o = tables[2];
  const double rho = rotation_number(o, {0.0, 1.0}, 2000);
  std::printf("rotation number from (0, 1) on %s: %.9f\n", names[2], rho);
}
