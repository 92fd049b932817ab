#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace percolab {

/// Raised when a request exceeds a configured size budget (ball size, enumeration cap, memory cap).
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class LatticeFamily : std::uint8_t { hypercubic, triangular, regular_tree };

/// A vertex-transitive lattice. Hypercubic uses `dim`, the regular tree uses `degree`.
struct LatticeSpec {
  LatticeFamily family = LatticeFamily::hypercubic;
  int dim = 1;
  int tree_degree = 3;

  static LatticeSpec hypercubic(int d);
  static LatticeSpec triangular();
  static LatticeSpec regular_tree(int degree);

  /// Accepts the CLI names z1, z2, z3, tri, tree<k>.
  static LatticeSpec parse(std::string_view name);

  [[nodiscard]] std::string name() const;
  [[nodiscard]] int degree() const;
  void validate() const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// Vertex coordinates. Hypercubic: d integers. Triangular: axial (x, y).
/// Tree: the path of child choices from the root; the root has `degree`
/// children numbered 0..degree-1, every other vertex has degree-1.
using Coord = std::vector<std::int32_t>;

[[nodiscard]] Coord lattice_origin(const LatticeSpec& spec);

/// Exactly the lattice neighbours of `v`, in a fixed order.
[[nodiscard]] std::vector<Coord> lazy_neighbors(const LatticeSpec& spec, const Coord& v);

struct Edge {
  std::uint32_t u = 0;  // u < v
  std::uint32_t v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite ball around the origin with every lattice edge whose endpoints both lie inside.
/// Vertices are sorted by (distance to the origin, coordinate), so the origin is vertex 0;
/// edges lexicographically by (u, v).
/// Immutable after construction.
class GraphBall {
 public:
  GraphBall() = default;

  [[nodiscard]] const LatticeSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] int radius() const noexcept { return radius_; }
  [[nodiscard]] std::size_t num_vertices() const noexcept { return coords_.size(); }
  [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
  [[nodiscard]] std::uint32_t origin() const noexcept { return origin_; }

  [[nodiscard]] const std::vector<Coord>& coords() const noexcept { return coords_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const std::vector<int>& distances() const noexcept { return dist_; }
  [[nodiscard]] const Coord& coord(std::uint32_t v) const { return coords_.at(v); }
  [[nodiscard]] const Edge& edge(std::uint32_t e) const { return edges_.at(e); }

  /// Edge indices incident to `v`, ascending.
  [[nodiscard]] const std::vector<std::uint32_t>& incident(std::uint32_t v) const { return incident_.at(v); }

  /// Vertex index of `c`, or -1 when `c` is outside the ball.
  [[nodiscard]] std::int64_t find(const Coord& c) const;

  /// True when this is a genuine lattice ball rather than an induced sub-graph fixture.
  [[nodiscard]] bool is_full_ball() const noexcept { return full_ball_; }

  friend GraphBall build_ball(const LatticeSpec& spec, int radius, std::size_t max_edges);
  friend GraphBall induced_subgraph(const GraphBall& ball, const std::vector<std::uint32_t>& keep);

 private:
  void index_incidence();
  void index_coords();

  LatticeSpec spec_;
  int radius_ = 0;
  std::uint32_t origin_ = 0;
  bool full_ball_ = true;
  std::vector<Coord> coords_;
  std::vector<int> dist_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<std::uint32_t> by_coord_;  // vertex indices in coordinate order
};

inline constexpr std::size_t kDefaultMaxBallEdges = std::size_t{1} << 24;

/// Ball of graph radius `radius`. Throws CapExceeded when |E| would exceed `max_edges`.
[[nodiscard]] GraphBall build_ball(const LatticeSpec& spec, int radius,
                                   std::size_t max_edges = kDefaultMaxBallEdges);

/// Sub-graph induced by a vertex subset (must contain the origin). Used for test fixtures
/// such as the single-edge graph.
[[nodiscard]] GraphBall induced_subgraph(const GraphBall& ball, const std::vector<std::uint32_t>& keep);

/// Every vertex at distance < radius has full lattice degree inside the ball.
[[nodiscard]] bool interior_is_transitive(const GraphBall& ball);

}  // namespace percolab
