#include "percolab/simd/kernels.hpp"

#include <cstddef>

namespace percolab::simd::scalar {

namespace {

inline std::uint32_t close_one(std::span<const std::uint32_t> endpoints, std::uint32_t open, std::uint32_t reach) {
  std::uint32_t prev = 0;
  do {
    prev = reach;
    for (std::size_t e = 0; e < endpoints.size(); ++e) {
      const std::uint32_t ends = endpoints[e];
      if (((open >> e) & 1U) && (reach & ends)) reach |= ends;
    }
  } while (reach != prev);
  return reach;
}

}  // namespace

void closure_enumerate(std::span<const std::uint32_t> endpoints, std::uint32_t seed, std::uint32_t first_config,
                       std::span<std::uint32_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = close_one(endpoints, first_config + static_cast<std::uint32_t>(i), seed);
  }
}

void closure(std::span<const std::uint32_t> endpoints, std::span<const std::uint32_t> open_masks,
             std::span<const std::uint32_t> seeds, std::span<std::uint32_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = close_one(endpoints, open_masks[i], seeds[i]);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t lane = 0; lane < 4; ++lane) acc[lane] += a[i + lane] * b[i + lane];
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

}  // namespace percolab::simd::scalar
