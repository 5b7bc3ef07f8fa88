// The two-orbit stressed crystal: stress, cone rays, and the period bar each
// ray holds fixed.

#include <perigid/perigid.hpp>

#include <cmath>
#include <cstdio>

using namespace perigid;

int main() {
  const auto fw = stressed_framework();
  const auto report = analyze(fw);
  std::printf("dof %ld, stresses %ld\n", static_cast<long>(report.dof), static_cast<long>(report.stress_dim()));

  const Vec alpha = stress_coefficients(fw, report, 0, -1.0);
  std::printf("stress:");
  for (Eigen::Index k = 0; k < alpha.size(); ++k) std::printf(" %+.3f", alpha[k]);
  std::printf("\n");

  const auto cone = expansive_cone(fw, report, 2);
  const auto pairs = enumerate_pairs(fw, 2);
  for (std::size_t i = 0; i < cone.rays.size(); ++i) {
    const Vec u = cone.ray_motion(i);
    std::printf("ray %zu keeps fixed:", i);
    for (const auto& pc : pairs) {
      if (pc.orbit_a != kRed || pc.orbit_b != kRed) continue;
      if (std::abs(relative_value(pc, u)) < 1e-8) {
        std::printf(" (");
        for (std::size_t c = 0; c < pc.shift.size(); ++c) std::printf(c ? ",%d" : "%d", pc.shift[c]);
        std::printf(")");
      }
    }
    std::printf("\n");
  }
}
