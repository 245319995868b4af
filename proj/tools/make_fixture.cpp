// Produces the pinned 117-alter benchmark network (data/network_117.json):
// scans generator seeds for a draw with exactly 117 alters, then rescales
// every baseline time so the total is exactly 1288 h. The result is one
// plausible sample of the generative model with a round total, convenient
// for sweep demonstrations.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "egotime/ego_network.hpp"
#include "egotime/sweep.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <output.json>\n", argv[0]);
    return 2;
  }
  const std::size_t target_size = 117;
  const double target_total = 1288.0;

  for (std::uint64_t seed = 1; seed < 100000; ++seed) {
    egotime::EgoNetwork net = egotime::generate_network(
        seed, egotime::default_layer_specs(), egotime::kSweepBeta);
    if (net.size() != target_size) continue;

    const double scale = target_total / net.total_baseline_hours();
    std::vector<egotime::Alter> alters = net.alters();
    for (egotime::Alter& alter : alters) alter.baseline_hours *= scale;
    const egotime::EgoNetwork scaled(seed, std::move(alters));

    egotime::save_network(scaled, argv[1]);
    std::printf("seed %llu: |V| = %zu, total = %.9f h -> %s\n",
                static_cast<unsigned long long>(seed), scaled.size(),
                scaled.total_baseline_hours(), argv[1]);
    return 0;
  }
  std::fprintf(stderr, "no seed below 100000 produced %zu alters\n",
               target_size);
  return 1;
}
