// Simulate fBm for a few Hurst values, then recover H from R^{2,n} with a 95% interval.
#include <cstdio>

#include "roughir/roughir.hpp"

int main() {
  roughir::TableStore store(roughir::resolve_table_dir(), false);
  const auto& [table, info] = store.gaussian();
  const std::size_t n = 8192;
  for (const double h : {0.2, 0.5, 0.8}) {
    roughir::Rng rng = roughir::make_rng(42, roughir::stream::kPath, static_cast<std::uint64_t>(h * 100));
    const roughir::SampledPath path = roughir::sim::FbmSampler(n, h).sample(rng);
    const auto est = roughir::estimate_H(path, table);
    std::printf("H=%.2f  R2=%.5f  H_hat=%.4f  95%% CI [%.4f, %.4f]\n", h, est.statistic.value, est.h_hat,
                est.ci_low, est.ci_high);
  }
  // R1 of Brownian motion converges to Lambda_1(1/2) = lambda(0).
  roughir::Rng rng = roughir::make_rng(7);
  const auto bm = roughir::sim::FbmSampler(n, 0.5).sample(rng);
  std::printf("Brownian R1=%.5f  Lambda_1(1/2)=%.5f\n", roughir::r_pn(bm, 1).value, roughir::Lambda_p(1, 0.5));
  for (const auto& w : store.warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
}
