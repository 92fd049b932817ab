#include "percolab/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "percolab/simd/kernels.hpp"

namespace percolab {

EnumeratedBall::EnumeratedBall(const GraphBall& ball, std::size_t max_edges) {
  constexpr std::size_t kHardEdgeLimit = 24;
  if (ball.num_edges() > max_edges || ball.num_edges() > kHardEdgeLimit) {
    throw CapExceeded("enumeration over 2^" + std::to_string(ball.num_edges()) + " configurations exceeds cap 2^" +
                      std::to_string(std::min(max_edges, kHardEdgeLimit)));
  }
  if (ball.num_vertices() > 32) throw CapExceeded("enumeration supports at most 32 vertices");
  num_vertices_ = ball.num_vertices();
  origin_ = ball.origin();
  for (const Edge& e : ball.edges()) endpoints_.push_back((1U << e.u) | (1U << e.v));
  origin_clusters_.resize(num_configs());
  simd::closure_enumerate(endpoints_, 1U << origin_, 0, origin_clusters_);
  origin_sizes_.resize(num_configs());
  for (std::size_t i = 0; i < origin_clusters_.size(); ++i) {
    origin_sizes_[i] = static_cast<std::uint8_t>(std::popcount(origin_clusters_[i]));
  }
}

std::vector<std::uint32_t> EnumeratedBall::rooted_clusters(std::uint32_t root) const {
  if (root >= num_vertices_) throw ContractViolation("root out of range");
  std::vector<std::uint32_t> out(num_configs());
  simd::closure_enumerate(endpoints_, 1U << root, 0, out);
  return out;
}

std::vector<double> EnumeratedBall::product_weights(double p) const {
  const std::size_t m = num_edges();
  std::vector<double> by_open(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    by_open[k] = std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(m - k));
  }
  std::vector<double> out(num_configs());
  for (std::uint32_t w = 0; w < num_configs(); ++w) out[w] = by_open[static_cast<std::size_t>(std::popcount(w))];
  return out;
}

std::vector<double> avoidance_table(double h, std::size_t n) {
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    out[k] = k == 0 ? 1.0 : (std::isinf(h) ? 0.0 : std::exp(-h * static_cast<double>(k)));
  }
  return out;
}

std::vector<double> EnumeratedBall::avoidance_weights(double h) const {
  const auto table = avoidance_table(h, num_vertices_);
  std::vector<double> out(num_configs());
  for (std::uint32_t w = 0; w < num_configs(); ++w) out[w] = table[origin_sizes_[w]];
  return out;
}

}  // namespace percolab
