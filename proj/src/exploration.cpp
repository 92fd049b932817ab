#include "percolab/exploration.hpp"

#include "percolab/percolation.hpp"

namespace percolab {

ExplorationTrace ExplorationTrace::prefix(std::size_t k) const {
  if (k > order.size()) throw ContractViolation("prefix longer than trace");
  ExplorationTrace out;
  out.order.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  out.values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

std::vector<char> revealed_cluster(const GraphBall& ball, const ExplorationTrace& trace) {
  std::vector<char> open(ball.num_edges(), 0);
  for (std::size_t j = 0; j < trace.k(); ++j) {
    if (trace.order[j] >= ball.num_edges()) throw ContractViolation("edge index out of range");
    if (trace.values[j]) open[trace.order[j]] = 1;
  }
  std::vector<char> in(ball.num_vertices(), 0);
  std::vector<std::uint32_t> stack{ball.origin()};
  in[ball.origin()] = 1;
  while (!stack.empty()) {
    const std::uint32_t u = stack.back();
    stack.pop_back();
    for (std::uint32_t e : ball.incident(u)) {
      if (!open[e]) continue;
      const Edge& edge = ball.edge(e);
      const std::uint32_t w = edge.u == u ? edge.v : edge.u;
      if (!in[w]) {
        in[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return in;
}

namespace {

std::vector<char> revealed_flags(const GraphBall& ball, const ExplorationTrace& trace) {
  std::vector<char> revealed(ball.num_edges(), 0);
  for (auto e : trace.order) {
    if (e >= ball.num_edges()) throw ContractViolation("edge index out of range");
    if (revealed[e]) throw ContractViolation("edge revealed twice");
    revealed[e] = 1;
  }
  return revealed;
}

std::optional<std::uint32_t> cluster_first_step(const GraphBall& ball, const ExplorationTrace& trace) {
  const auto revealed = revealed_flags(ball, trace);
  if (trace.k() == ball.num_edges()) return std::nullopt;
  const auto in = revealed_cluster(ball, trace);
  for (std::uint32_t e = 0; e < ball.num_edges(); ++e) {
    if (!revealed[e] && (in[ball.edge(e).u] || in[ball.edge(e).v])) return e;
  }
  for (std::uint32_t e = 0; e < ball.num_edges(); ++e) {
    if (!revealed[e]) return e;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::uint32_t> ClusterFirstRule::next_edge(const GraphBall& ball, const ExplorationTrace& trace) const {
  return cluster_first_step(ball, trace);
}

std::optional<std::uint32_t> IndexOrderRule::next_edge(const GraphBall& ball, const ExplorationTrace& trace) const {
  const auto revealed = revealed_flags(ball, trace);
  for (std::uint32_t e = 0; e < ball.num_edges(); ++e) {
    if (!revealed[e]) return e;
  }
  return std::nullopt;
}

bool replay_consistent(const GraphBall& ball, const ExplorationRule& rule, const ExplorationTrace& trace) {
  if (trace.values.size() != trace.order.size() || trace.k() > ball.num_edges()) return false;
  ExplorationTrace replay;
  for (std::size_t j = 0; j < trace.k(); ++j) {
    std::optional<std::uint32_t> next;
    try {
      next = rule.next_edge(ball, replay);
    } catch (const ContractViolation&) {
      return false;
    }
    if (!next || *next != trace.order[j]) return false;
    replay.push(trace.order[j], trace.values[j] != 0);
  }
  return true;
}

std::optional<std::uint32_t> cluster_first_next(const GraphBall& ball, const ExplorationTrace& trace) {
  static const ClusterFirstRule rule;
  if (!replay_consistent(ball, rule, trace)) throw ContractViolation("trace is not a cluster-first exploration");
  return rule.next_edge(ball, trace);
}

ExplorationTrace run_exploration(const GraphBall& ball, const ExplorationRule& rule, const EdgeConfig& config) {
  if (config.bits.size() != ball.num_edges()) throw ContractViolation("config length differs from |E|");
  ExplorationTrace trace;
  trace.order.reserve(ball.num_edges());
  trace.values.reserve(ball.num_edges());
  while (auto next = rule.next_edge(ball, trace)) trace.push(*next, config.bits[*next]);
  return trace;
}

std::optional<BoundaryEdge> boundary_split(const GraphBall& ball, const ExplorationTrace& trace, std::uint32_t edge) {
  const auto in = revealed_cluster(ball, trace);
  const Edge& e = ball.edge(edge);
  if (in[e.u] && !in[e.v]) return BoundaryEdge{e.u, e.v};
  if (in[e.v] && !in[e.u]) return BoundaryEdge{e.v, e.u};
  return std::nullopt;
}

namespace {

bool avoids_green(const ClusterResult& cluster, const GhostConfig& ghost) {
  for (auto v : cluster.members) {
    if (ghost.bits[v]) return false;
  }
  return true;
}

}  // namespace

bool is_pivotal_A(const GraphBall& ball, const EdgeConfig& config, const GhostConfig& ghost, std::uint32_t edge) {
  if (edge >= ball.num_edges()) throw ContractViolation("edge index out of range");
  if (ghost.bits.size() != ball.num_vertices()) throw ContractViolation("ghost length differs from |V|");
  EdgeConfig flipped = config;
  flipped.bits.set(edge, true);
  const bool open_case = avoids_green(cluster_of_origin(ball, flipped), ghost);
  flipped.bits.set(edge, false);
  const bool closed_case = avoids_green(cluster_of_origin(ball, flipped), ghost);
  return open_case != closed_case;
}

double pivotal_ghost_weight(const GraphBall& ball, const EdgeConfig& config, std::uint32_t edge, double h) {
  if (edge >= ball.num_edges()) throw ContractViolation("edge index out of range");
  EdgeConfig flipped = config;
  flipped.bits.set(edge, true);
  const std::size_t plus = cluster_of_origin(ball, flipped).size;
  flipped.bits.set(edge, false);
  const std::size_t minus = cluster_of_origin(ball, flipped).size;
  const std::size_t gained = plus - minus;
  if (gained == 0) return 0.0;
  // 1 - e^{-h|D|}; expm1 keeps precision for small h.
  const double reach_green = std::isinf(h) ? 1.0 : -std::expm1(-h * static_cast<double>(gained));
  return ghost_avoidance_weight(minus, h) * reach_green;
}

}  // namespace percolab
