// Puts a random symmetric polytope in shadow position and prints what changed.
// Usage: shadow_position_demo [n] [m] [seed]

#include "shadows/shadow_position.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

using namespace shadows;

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 3;
  const int m = argc > 2 ? std::atoi(argv[2]) : 6;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  RandomSource rng(seed);
  const auto body = random_symmetric_polytope(n, m, rng);
  const PolytopeGeometry before(body);
  const auto before_min = min_shadow_direction(before);
  const double before_ratio = before_min.value / std::pow(before.volume(), (n - 1.0) / n);

  const auto r = shadow_position(body);
  std::printf("n=%d m=%d seed=%llu\n", n, m, static_cast<unsigned long long>(seed));
  std::printf("input   : volume %.6f  min shadow %.6f  ratio %.6f\n", before.volume(), before_min.value, before_ratio);
  std::printf("position: volume %.6f  min shadow %.6f  ratio %.6f  (%s search)\n", r.volume, r.min_shadow, r.ratio,
              r.branch.c_str());
  std::printf("John contacts %d, Frobenius residual %.2e, trace gap %.2e, MVEE iterations %ld\n", r.john.size(),
              r.john_frobenius, r.john_trace_gap, r.mvee_iterations);
  std::printf("contact shadow spread %.2e\n", r.contact_shadow_spread);
  return r.ratio >= 1.0 - kShadowPositionTolerance ? 0 : 1;
}
