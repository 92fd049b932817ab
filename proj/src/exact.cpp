#include "percolab/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "percolab/percolation.hpp"
#include "percolab/simd/kernels.hpp"

namespace percolab {

namespace {

void check_params(double p, double h) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(h >= 0.0)) throw std::invalid_argument("h must be nonnegative");
}

// 1 - e^{-h k}
double meets_green(double h, std::size_t k) {
  if (k == 0) return 0.0;
  if (std::isinf(h)) return 1.0;
  return -std::expm1(-h * static_cast<double>(k));
}

EdgeConfig config_of(std::uint32_t mask, std::size_t num_edges) {
  return EdgeConfig{BitVector::from_mask(mask, num_edges)};
}

std::uint32_t trace_mask(const ExplorationTrace& trace) {
  std::uint32_t m = 0;
  for (auto e : trace.order) m |= 1U << e;
  return m;
}

std::uint32_t trace_values(const ExplorationTrace& trace) {
  std::uint32_t m = 0;
  for (std::size_t j = 0; j < trace.k(); ++j) {
    if (trace.values[j]) m |= 1U << trace.order[j];
  }
  return m;
}

}  // namespace

ExplicitMeasure product_measure(const GraphBall& ball, double p, std::size_t cap) {
  check_params(p, 0.0);
  const EnumeratedBall en(ball, cap);
  return {en.num_edges(), en.product_weights(p)};
}

double avoidance_normalizer(const GraphBall& ball, double p, double h, std::size_t cap) {
  check_params(p, h);
  const EnumeratedBall en(ball, cap);
  return simd::dot(en.product_weights(p), en.avoidance_weights(h));
}

ExplicitMeasure conditional_measure_A(const GraphBall& ball, double p, double h, std::size_t cap) {
  check_params(p, h);
  const EnumeratedBall en(ball, cap);
  const auto prod = en.product_weights(p);
  const auto avoid = en.avoidance_weights(h);
  ExplicitMeasure out{en.num_edges(), std::vector<double>(prod.size())};
  simd::multiply(prod, avoid, out.weights);
  const double z = simd::dot(prod, avoid);
  if (!(z > 0.0)) throw ContractViolation("conditioning event has probability zero");
  for (double& w : out.weights) w /= z;
  return out;
}

double exact_magnetization(const GraphBall& ball, double p, double h, std::optional<std::uint32_t> root,
                           std::size_t cap) {
  check_params(p, h);
  const EnumeratedBall en(ball, cap);
  const auto prod = en.product_weights(p);
  std::vector<double> meets(en.num_configs());
  if (!root || *root == en.origin()) {
    for (std::uint32_t w = 0; w < en.num_configs(); ++w) meets[w] = meets_green(h, en.origin_sizes()[w]);
  } else {
    const auto clusters = en.rooted_clusters(*root);
    for (std::uint32_t w = 0; w < en.num_configs(); ++w) {
      meets[w] = meets_green(h, static_cast<std::size_t>(std::popcount(clusters[w])));
    }
  }
  return simd::dot(prod, meets);
}

double finite_ball_magnetization_bound(const GraphBall& ball, double p, double h, std::size_t cap) {
  double best = 0.0;
  for (std::uint32_t v = 0; v < ball.num_vertices(); ++v) {
    best = std::max(best, exact_magnetization(ball, p, h, v, cap));
  }
  return best;
}

std::vector<double> exact_psi_table(const GraphBall& ball, double p, std::size_t cap) {
  check_params(p, 0.0);
  const EnumeratedBall en(ball, cap);
  const auto prod = en.product_weights(p);
  std::vector<double> by_size(en.num_vertices() + 2, 0.0);
  for (std::uint32_t w = 0; w < en.num_configs(); ++w) by_size[en.origin_sizes()[w]] += prod[w];
  // ψ_n = Σ_{s >= n} P(|C| = s); ψ_0 = ψ_1 = 1 exactly.
  std::vector<double> psi(by_size.size(), 0.0);
  double tail = 0.0;
  for (std::size_t s = by_size.size(); s-- > 0;) {
    tail += by_size[s];
    psi[s] = tail;
  }
  psi[0] = 1.0;
  psi[1] = 1.0;
  return psi;
}

double exact_psi(const GraphBall& ball, double p, std::size_t n, std::size_t cap) {
  const auto table = exact_psi_table(ball, p, cap);
  return n < table.size() ? table[n] : 0.0;
}

// ---- direct trace-indexed enumeration -------------------------------------------------------

namespace {

struct TraceScan {
  std::uint32_t revealed = 0;
  std::uint32_t values = 0;
  std::uint32_t next = 0;
};

TraceScan prepare_trace(const GraphBall& ball, const ExplorationRule& rule, double p, double h,
                        const ExplorationTrace& trace, std::size_t cap) {
  check_params(p, h);
  if (ball.num_edges() > cap || ball.num_edges() > 24) {
    throw CapExceeded("trace enumeration over " + std::to_string(ball.num_edges()) + " edges exceeds cap " +
                      std::to_string(cap));
  }
  if (!replay_consistent(ball, rule, trace)) throw ContractViolation("trace is not produced by the rule");
  const auto next = rule.next_edge(ball, trace);
  if (!next) throw ContractViolation("trace is complete; there is no next edge");
  return {trace_mask(trace), trace_values(trace), *next};
}

}  // namespace

double conditional_open_prob(const GraphBall& ball, const ExplorationRule& rule, double p, double h,
                             const ExplorationTrace& trace, std::size_t cap) {
  const TraceScan scan = prepare_trace(ball, rule, p, h, trace, cap);
  const std::size_t m = ball.num_edges();
  double all = 0.0;
  double open = 0.0;
  for (std::uint32_t w = 0; w < (1U << m); ++w) {
    if ((w & scan.revealed) != scan.values) continue;
    const std::size_t opened = static_cast<std::size_t>(std::popcount(w));
    const double weight = std::pow(p, static_cast<double>(opened)) * std::pow(1.0 - p, static_cast<double>(m - opened)) *
                          ghost_avoidance_weight(cluster_of_origin(ball, config_of(w, m)).size, h);
    all += weight;
    if ((w >> scan.next) & 1U) open += weight;
  }
  if (!(all > 0.0)) throw ContractViolation("zero-probability trace");
  return open / all;
}

FkgStep fkg_step_check(const GraphBall& ball, const ExplorationRule& rule, double p, double h,
                       const ExplorationTrace& trace, std::size_t cap) {
  const TraceScan scan = prepare_trace(ball, rule, p, h, trace, cap);
  const auto split = boundary_split(ball, trace, scan.next);
  if (!split) throw ContractViolation("next edge does not leave the revealed cluster");
  const std::size_t m = ball.num_edges();
  const std::uint32_t avail = ~(scan.revealed | (1U << scan.next));
  double expl = 0.0, a = 0.0, b = 0.0, ab = 0.0, piv_a = 0.0;
  for (std::uint32_t w = 0; w < (1U << m); ++w) {
    if ((w & scan.revealed) != scan.values) continue;
    const std::size_t opened = static_cast<std::size_t>(std::popcount(w));
    const double mu = std::pow(p, static_cast<double>(opened)) * std::pow(1.0 - p, static_cast<double>(m - opened));
    const ClusterResult c = cluster_of_origin(ball, config_of(w, m));
    const ClusterResult r = cluster_of_vertex(ball, config_of(w & avail, m), split->outside);
    std::vector<std::uint32_t> joined;
    std::set_union(c.members.begin(), c.members.end(), r.members.begin(), r.members.end(), std::back_inserter(joined));
    const double avoid_c = ghost_avoidance_weight(c.size, h);
    expl += mu;
    a += mu * avoid_c;
    b += mu * meets_green(h, r.size);
    // P(C ∩ G = ∅, R ∩ G ≠ ∅) = e^{-h|C|} - e^{-h|C ∪ R|}
    ab += mu * (avoid_c - ghost_avoidance_weight(joined.size(), h));
    if (!((w >> scan.next) & 1U)) piv_a += mu * pivotal_ghost_weight(ball, config_of(w, m), scan.next, h);
  }
  if (!(a > 0.0) || !(expl > 0.0)) throw ContractViolation("zero-probability conditioning event");
  return {ab / a, b / expl, piv_a / a, *split};
}

// ---- exploration tree ----------------------------------------------------------------------

ExplorationTree::ExplorationTree(const GraphBall& ball, const ExplorationRule& rule, double p, double h,
                                 std::size_t cap)
    : p_(p), h_(h) {
  check_params(p, h);
  if (ball.num_edges() > cap) {
    throw CapExceeded("exploration tree over " + std::to_string(ball.num_edges()) + " edges exceeds cap " +
                      std::to_string(cap));
  }
  const EnumeratedBall en(ball, cap);
  const auto prod = en.product_weights(p);
  const auto avoid = avoidance_table(h, en.num_vertices());
  const auto& clusters = en.origin_clusters();
  std::map<std::uint32_t, std::vector<std::uint32_t>> rooted;
  std::vector<std::uint32_t> avail;  // per node: edges usable by B_{k+1}

  auto make_node = [&](ExplorationTrace trace) {
    Node node;
    node.next = rule.next_edge(ball, trace);
    std::uint32_t usable = 0;
    if (node.next) {
      node.split = boundary_split(ball, trace, *node.next);
      usable = ~(trace_mask(trace) | (1U << *node.next));
      if (node.split && !rooted.contains(node.split->outside)) {
        rooted.emplace(node.split->outside, en.rooted_clusters(node.split->outside));
      }
    }
    node.trace = std::move(trace);
    nodes_.push_back(std::move(node));
    avail.push_back(usable);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  };
  make_node({});

  for (std::uint32_t w = 0; w < en.num_configs(); ++w) {
    const double mu = prod[w];
    const std::uint32_t c = clusters[w];
    const double a = mu * avoid[static_cast<std::size_t>(std::popcount(c))];
    std::int32_t at = 0;
    for (;;) {
      nodes_[at].w_expl += mu;
      nodes_[at].w_a += a;
      if (!nodes_[at].next) break;
      const std::uint32_t e = *nodes_[at].next;
      const bool open = (w >> e) & 1U;
      if (open) {
        nodes_[at].w_a_open += a;
      } else {
        const std::uint32_t plus = clusters[w | (1U << e)];
        const auto gained = static_cast<std::size_t>(std::popcount(plus & ~c));
        nodes_[at].w_piv_a += a * meets_green(h, gained);
      }
      if (nodes_[at].split) {
        const std::uint32_t r = rooted.at(nodes_[at].split->outside)[w & avail[at]];
        nodes_[at].w_b += mu * meets_green(h, static_cast<std::size_t>(std::popcount(r)));
        nodes_[at].w_ab += a - mu * avoid[static_cast<std::size_t>(std::popcount(r | c))];
      }
      std::int32_t child = nodes_[at].child[open ? 1 : 0];
      if (child < 0) {
        ExplorationTrace t = nodes_[at].trace;
        t.push(e, open);
        child = make_node(std::move(t));
        nodes_[at].child[open ? 1 : 0] = child;
      }
      at = child;
    }
  }
}

std::optional<std::size_t> ExplorationTree::find(const ExplorationTrace& trace) const {
  std::int32_t at = 0;
  for (std::size_t j = 0; j < trace.k(); ++j) {
    const Node& node = nodes_[static_cast<std::size_t>(at)];
    if (!node.next || *node.next != trace.order[j]) return std::nullopt;
    at = node.child[trace.values[j] ? 1 : 0];
    if (at < 0) return std::nullopt;
  }
  return static_cast<std::size_t>(at);
}

void ExplorationTree::for_each_reachable(const std::function<void(const ExplorationTrace&)>& visit) const {
  for (const Node& node : nodes_) {
    if (node.next && node.w_a > 0.0) visit(node.trace);
  }
}

double ExactConditionalOracle::open_probability(const ExplorationTrace& trace) const {
  const auto at = tree_->find(trace);
  if (!at) throw ContractViolation("trace is not reachable under the exploration rule");
  const auto& node = tree_->nodes()[*at];
  if (!node.next) throw ContractViolation("trace is complete; there is no next edge");
  if (!(node.w_a > 0.0)) throw ContractViolation("zero-probability trace");
  return node.open_prob();
}

PivotalMax max_conditional_pivotal(const ExplorationTree& tree) {
  PivotalMax best;
  for (const auto& node : tree.nodes()) {
    if (!node.next || !(node.w_a > 0.0)) continue;
    const double value = node.pivotal_prob();
    if (value > best.epsilon) {
      best.epsilon = value;
      best.argmax = node.trace;
    }
  }
  return best;
}

PivotalMax max_conditional_pivotal(const GraphBall& ball, const ExplorationRule& rule, double p, double h) {
  return max_conditional_pivotal(ExplorationTree(ball, rule, p, h));
}

std::vector<VolumeTailRow> volume_tail_rows(const GraphBall& ball, double p, double h, double q) {
  check_params(p, h);
  check_params(q, 0.0);
  const EnumeratedBall en(ball, kMeasureCap);
  const auto psi_q = exact_psi_table(ball, q);
  const auto psi_p = exact_psi_table(ball, p);
  const auto prod = en.product_weights(p);
  const auto avoid = avoidance_table(h, en.num_vertices());
  const double z = avoidance_normalizer(ball, p, h);
  const double m = exact_magnetization(ball, p, h);
  std::vector<double> tilted_by_size(en.num_vertices() + 2, 0.0);
  for (std::uint32_t w = 0; w < en.num_configs(); ++w) {
    tilted_by_size[en.origin_sizes()[w]] += prod[w] * avoid[en.origin_sizes()[w]];
  }
  std::vector<VolumeTailRow> rows;
  double tail = 0.0;
  std::vector<double> bayes(tilted_by_size.size(), 0.0);
  for (std::size_t s = tilted_by_size.size(); s-- > 0;) {
    tail += tilted_by_size[s];
    bayes[s] = tail / z;
  }
  for (std::size_t n = 0; n < psi_p.size(); ++n) {
    VolumeTailRow row;
    row.n = n;
    row.psi_q = psi_q[n];
    row.psi_p = psi_p[n];
    row.bayes = n <= 1 ? 1.0 : bayes[n];
    row.rhs = psi_p[n] * (std::isinf(h) ? (n == 0 ? 1.0 : 0.0) : std::exp(-h * static_cast<double>(n))) / (1.0 - m);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace percolab
