#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "percolab/bitvec.hpp"
#include "percolab/lattice.hpp"
#include "percolab/rng.hpp"

namespace percolab {

/// Edge-open probability p and ghost intensity h (h = 0: no ghost, h = +inf: all green).
struct Params {
  double p = 0.5;
  double h = 0.0;

  void validate() const;
  /// 1 - e^{-h}.
  [[nodiscard]] double green_prob() const noexcept { return std::isinf(h) ? 1.0 : -std::expm1(-h); }
  /// p (1 - m) for a supplied magnetisation m in [0, 1].
  [[nodiscard]] double q(double magnetization) const;
};

[[nodiscard]] EdgeConfig sample_config(const GraphBall& ball, double p, std::uint64_t seed);

/// Edge e open iff uniforms[e] < p. With shared uniforms the result is nondecreasing in p.
[[nodiscard]] EdgeConfig config_from_uniforms(std::span<const double> uniforms, double p);

[[nodiscard]] GhostConfig sample_ghost(const GraphBall& ball, double h, std::uint64_t seed);

struct ClusterResult {
  std::vector<std::uint32_t> members;     // sorted vertex indices, contains the origin
  std::vector<std::uint32_t> open_edges;  // sorted open edges with an endpoint in the cluster
  std::size_t size = 0;
  bool truncated = false;
};

/// Open cluster of `root` (default: the ball's origin).
[[nodiscard]] ClusterResult cluster_of_origin(const GraphBall& ball, const EdgeConfig& config);
[[nodiscard]] ClusterResult cluster_of_vertex(const GraphBall& ball, const EdgeConfig& config,
                                              std::uint32_t root);

/// P(no vertex of a set of `size` vertices is green) = e^{-h size}.
[[nodiscard]] double ghost_avoidance_weight(std::size_t size, double h);

// ---- infinite-lattice growth -------------------------------------------------------------

inline constexpr std::size_t kMaxLazyCap = std::size_t{1} << 20;

/// Stable 64-bit key of a lattice vertex / edge. The keyed edge source draws U(key).
[[nodiscard]] std::uint64_t vertex_key(const LatticeSpec& spec, const Coord& c);
[[nodiscard]] std::uint64_t edge_key(const LatticeSpec& spec, const Coord& a, const Coord& b);

/// Fresh Bernoulli(p) per revealed edge, consumed in reveal order.
struct SequentialEdges {
  Rng rng;
  double p;
  bool open(std::uint64_t /*key*/) noexcept { return rng.bernoulli(p); }
};

/// Edge open iff U(seed, key) < p: the same seed gives configurations that are monotone in p
/// and that agree with any other consumer of the same keys.
struct KeyedEdges {
  std::uint64_t seed;
  double p;
  [[nodiscard]] bool open(std::uint64_t key) const noexcept { return keyed_uniform(seed, key) < p; }
};

struct LazyCluster {
  std::vector<Coord> members;  // reveal order, origin first
  std::size_t size = 0;
  bool truncated = false;      // growth stopped because size reached cap, so |C_o| >= cap
};

/// Grows C_o on the infinite lattice, revealing each edge with at most one endpoint in the
/// current cluster exactly once. Throws CapExceeded when cap > kMaxLazyCap.
[[nodiscard]] LazyCluster lazy_cluster(const LatticeSpec& spec, double p, std::size_t cap,
                                       std::uint64_t seed);
[[nodiscard]] LazyCluster lazy_cluster_keyed(const LatticeSpec& spec, const KeyedEdges& source,
                                             std::size_t cap);

/// Ball configuration read from a keyed source, consistent with lazy_cluster_keyed.
[[nodiscard]] EdgeConfig keyed_config(const GraphBall& ball, const KeyedEdges& source);

struct ClusterSize {
  std::size_t size = 0;
  bool truncated = false;
};

/// Reusable, allocation-amortised grower returning only |C_o| (capped). Hypercubic and
/// triangular coordinates are packed into 64 bits and tracked in an open-addressing set;
/// the tree needs no visited set.
class LazyGrower {
 public:
  explicit LazyGrower(LatticeSpec spec);

  ClusterSize grow(SequentialEdges& source, std::size_t cap);
  ClusterSize grow(const KeyedEdges& source, std::size_t cap);

 private:
  template <class Source>
  ClusterSize grow_impl(Source& source, std::size_t cap);
  template <class Source>
  ClusterSize grow_packed(Source& source, std::size_t cap);
  template <class Source>
  ClusterSize grow_tree(Source& source, std::size_t cap);

  bool insert(std::uint64_t key);
  void reset_table(std::size_t cap);

  LatticeSpec spec_;
  std::vector<std::int64_t> offsets_;
  std::vector<std::uint64_t> table_;
  std::vector<std::size_t> used_;
  std::vector<std::uint64_t> queue_;
  std::uint64_t mask_ = 0;
};

}  // namespace percolab
