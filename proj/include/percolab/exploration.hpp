#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percolab/bitvec.hpp"
#include "percolab/lattice.hpp"

namespace percolab {

/// Revealed edges e_1..e_k and their states, in reveal order.
struct ExplorationTrace {
  std::vector<std::uint32_t> order;
  std::vector<std::uint8_t> values;

  [[nodiscard]] std::size_t k() const noexcept { return order.size(); }
  void push(std::uint32_t edge, bool open) {
    order.push_back(edge);
    values.push_back(open ? 1 : 0);
  }
  /// First `k` steps.
  [[nodiscard]] ExplorationTrace prefix(std::size_t k) const;

  friend bool operator==(const ExplorationTrace&, const ExplorationTrace&) = default;
};

/// An adaptive reveal order: the next edge is a function of the revealed prefix only.
/// next_edge on the empty trace is the constant first edge.
class ExplorationRule {
 public:
  virtual ~ExplorationRule() = default;
  [[nodiscard]] virtual std::optional<std::uint32_t> next_edge(const GraphBall& ball,
                                                               const ExplorationTrace& trace) const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

/// Reveal the origin's cluster first (smallest-index unrevealed edge touching the cluster
/// known so far), then every remaining edge by index.
class ClusterFirstRule final : public ExplorationRule {
 public:
  [[nodiscard]] std::optional<std::uint32_t> next_edge(const GraphBall& ball,
                                                       const ExplorationTrace& trace) const override;
  [[nodiscard]] std::string name() const override { return "cluster-first"; }
};

/// Plain index order, ignoring revealed values.
class IndexOrderRule final : public ExplorationRule {
 public:
  [[nodiscard]] std::optional<std::uint32_t> next_edge(const GraphBall& ball,
                                                       const ExplorationTrace& trace) const override;
  [[nodiscard]] std::string name() const override { return "index-order"; }
};

/// Next edge of the cluster-first rule, or nullopt once all edges are revealed.
/// Throws ContractViolation if the trace is not one the rule can produce.
[[nodiscard]] std::optional<std::uint32_t> cluster_first_next(const GraphBall& ball, const ExplorationTrace& trace);

/// Replaying `rule` on the trace's own values reproduces its order, without repeats.
[[nodiscard]] bool replay_consistent(const GraphBall& ball, const ExplorationRule& rule,
                                     const ExplorationTrace& trace);

[[nodiscard]] ExplorationTrace run_exploration(const GraphBall& ball, const ExplorationRule& rule,
                                               const EdgeConfig& config);

/// Vertices joined to the origin by revealed open edges (membership flags).
[[nodiscard]] std::vector<char> revealed_cluster(const GraphBall& ball, const ExplorationTrace& trace);

/// Endpoints (v, w) of `edge` with v in the revealed cluster and w outside it, if that holds.
struct BoundaryEdge {
  std::uint32_t inside;
  std::uint32_t outside;
};
[[nodiscard]] std::optional<BoundaryEdge> boundary_split(const GraphBall& ball, const ExplorationTrace& trace,
                                                         std::uint32_t edge);

/// Does flipping `edge` (ghost fixed) change the indicator of {C_o ∩ G = ∅}?
[[nodiscard]] bool is_pivotal_A(const GraphBall& ball, const EdgeConfig& config, const GhostConfig& ghost,
                                std::uint32_t edge);

/// Ghost-averaged pivotality e^{-h|C⁻|}(1 - e^{-h|C⁺ \ C⁻|}), where C± is C_o with the edge
/// forced open / closed.
[[nodiscard]] double pivotal_ghost_weight(const GraphBall& ball, const EdgeConfig& config, std::uint32_t edge,
                                          double h);

}  // namespace percolab
