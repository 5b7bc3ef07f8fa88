// Open up a simplex-family mechanism and watch the facet separation grow.
//
//   demo_simplex_mechanism [d] [edge]

#include <perigid/perigid.hpp>

#include <cstdio>
#include <cstdlib>

using namespace perigid;

int main(int argc, char** argv) {
  const int d = argc > 1 ? std::atoi(argv[1]) : 2;
  const int k = argc > 2 ? std::atoi(argv[2]) : 1;

  const auto fw = simplex_framework(d, SimplexVariant::removed_edge(k), /*regular=*/true);
  const auto report = analyze(fw);
  std::printf("d=%d removed e_%d: rank %ld, dof %ld\n", d, k, static_cast<long>(report.rank),
              static_cast<long>(report.dof));
  if (report.dof != 1) return 1;

  Vec flex = report.flex_basis.col(0);
  if (classify_flex(fw, flex) != Expansiveness::EffectivelyExpansive) flex = -flex;

  ContinuationOptions opts;
  opts.steps = 40;
  const auto path = continue_motion(fw, flex, opts);
  const auto sep = facet_separation(path);
  const auto audit = audit_expansiveness(path);
  for (std::size_t s = 0; s < sep.size(); s += 5)
    std::printf("step %3zu  separation %.6f  residual %.1e\n", s, sep[s], path.residuals[s]);
  std::printf("audit over %zu pairs: %s\n", audit.pairs.size(), audit.passed ? "expansive" : "violated");
  return audit.passed ? 0 : 1;
}
