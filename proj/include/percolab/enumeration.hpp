#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "percolab/lattice.hpp"

namespace percolab {

/// Mask form of a small ball: configuration ω is the integer whose bit e is ω_e, vertex sets
/// are 32-bit masks. Builds the per-configuration cluster table of the origin with the SIMD
/// closure kernel.
class EnumeratedBall {
 public:
  /// Throws CapExceeded when |E| > max_edges (hard limit 24) or |V| > 32.
  EnumeratedBall(const GraphBall& ball, std::size_t max_edges);

  [[nodiscard]] std::size_t num_edges() const noexcept { return endpoints_.size(); }
  [[nodiscard]] std::size_t num_vertices() const noexcept { return num_vertices_; }
  [[nodiscard]] std::uint32_t num_configs() const noexcept { return std::uint32_t{1} << num_edges(); }
  [[nodiscard]] std::uint32_t origin() const noexcept { return origin_; }
  [[nodiscard]] const std::vector<std::uint32_t>& endpoints() const noexcept { return endpoints_; }

  /// C_o(ω) as a vertex mask, for every ω.
  [[nodiscard]] const std::vector<std::uint32_t>& origin_clusters() const noexcept { return origin_clusters_; }
  /// |C_o(ω)| for every ω.
  [[nodiscard]] const std::vector<std::uint8_t>& origin_sizes() const noexcept { return origin_sizes_; }

  /// C_v(ω) for every ω (computed on demand, not cached).
  [[nodiscard]] std::vector<std::uint32_t> rooted_clusters(std::uint32_t root) const;

  /// p^{#open} (1-p)^{#closed} for every ω.
  [[nodiscard]] std::vector<double> product_weights(double p) const;

  /// e^{-h |C_o(ω)|} for every ω.
  [[nodiscard]] std::vector<double> avoidance_weights(double h) const;

 private:
  std::size_t num_vertices_ = 0;
  std::uint32_t origin_ = 0;
  std::vector<std::uint32_t> endpoints_;
  std::vector<std::uint32_t> origin_clusters_;
  std::vector<std::uint8_t> origin_sizes_;
};

/// e^{-h k} for k = 0..n, with e^{-inf * 0} = 1.
[[nodiscard]] std::vector<double> avoidance_table(double h, std::size_t n);

}  // namespace percolab
