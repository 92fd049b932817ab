#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace percolab {

/// A probability measure on {0,1}^E, configuration ω stored at index Σ ω_e 2^e.
struct ExplicitMeasure {
  std::size_t num_edges = 0;
  std::vector<double> weights;

  /// Nonnegative, length 2^E, total within `tol` of 1.
  [[nodiscard]] bool is_valid(double tol = 1e-12) const;
  [[nodiscard]] double total() const;
  /// Σ_e |a(e) - b(e)| / 2.
  [[nodiscard]] friend double total_variation(const ExplicitMeasure& a, const ExplicitMeasure& b);
  /// Probability that edge e is open.
  [[nodiscard]] double edge_marginal(std::size_t edge) const;
};

}  // namespace percolab
