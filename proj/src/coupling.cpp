#include "percolab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "percolab/rng.hpp"

namespace percolab {

double ExplicitMeasure::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

bool ExplicitMeasure::is_valid(double tol) const {
  if (num_edges >= 64 || weights.size() != (std::size_t{1} << num_edges)) return false;
  for (double w : weights) {
    if (!(w >= 0.0)) return false;
  }
  return std::abs(total() - 1.0) <= tol;
}

double total_variation(const ExplicitMeasure& a, const ExplicitMeasure& b) {
  if (a.weights.size() != b.weights.size()) throw std::invalid_argument("measures on different spaces");
  double s = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) s += std::abs(a.weights[i] - b.weights[i]);
  return 0.5 * s;
}

double ExplicitMeasure::edge_marginal(std::size_t edge) const {
  double s = 0.0;
  for (std::size_t w = 0; w < weights.size(); ++w) {
    if ((w >> edge) & 1U) s += weights[w];
  }
  return s;
}

namespace {

double checked_oracle(const ConditionalOracle& oracle, const ExplorationTrace& trace) {
  const double value = oracle.open_probability(trace);
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ContractViolation("conditional oracle returned " + std::to_string(value) + ", outside [0, 1]");
  }
  return value;
}

}  // namespace

CoupledPair couple_sequential(const GraphBall& ball, const ExplorationRule& rule, double q,
                              const ConditionalOracle& oracle, std::uint64_t seed) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  Rng rng(seed);
  CoupledPair out;
  out.q = q;
  out.lower.bits = BitVector(ball.num_edges());
  out.upper.bits = BitVector(ball.num_edges());
  while (auto next = rule.next_edge(ball, out.trace)) {
    const double threshold = checked_oracle(oracle, out.trace);
    const double u = rng.uniform();
    const bool upper_open = u < threshold;
    const bool lower_open = u < q;
    if (threshold < q) ++out.hypothesis_breaches;
    if (lower_open && !upper_open) {
      out.violations.push_back({out.trace.k(), *next, u, threshold, out.trace});
    }
    out.upper.bits.set(*next, upper_open);
    out.lower.bits.set(*next, lower_open);
    out.uniforms.push_back(u);
    out.oracle_values.push_back(threshold);
    out.trace.push(*next, upper_open);
  }
  return out;
}

ExplicitMeasure CouplingLaw::lower_marginal(std::size_t num_edges) const {
  ExplicitMeasure m{num_edges, std::vector<double>(std::size_t{1} << num_edges, 0.0)};
  for (const auto& [key, mass] : joint) m.weights[key.first] += mass;
  return m;
}

ExplicitMeasure CouplingLaw::upper_marginal(std::size_t num_edges) const {
  ExplicitMeasure m{num_edges, std::vector<double>(std::size_t{1} << num_edges, 0.0)};
  for (const auto& [key, mass] : joint) m.weights[key.second] += mass;
  return m;
}

namespace {

struct LawBuilder {
  const GraphBall& ball;
  const ExplorationRule& rule;
  const ConditionalOracle& oracle;
  double q;
  CouplingLaw law;

  void descend(ExplorationTrace& trace, std::uint32_t lower, std::uint32_t upper, double mass, bool violated) {
    const auto next = rule.next_edge(ball, trace);
    if (!next) {
      law.joint[{lower, upper}] += mass;
      ++law.paths;
      if (violated) {
        law.violation_mass += mass;
        ++law.violating_paths;
      }
      return;
    }
    const double o = checked_oracle(oracle, trace);
    const double lo = std::min(q, o);
    const double hi = std::max(q, o);
    const std::uint32_t bit = 1U << *next;
    struct Region {
      double length;
      bool lower_open;
      bool upper_open;
    };
    const Region regions[3] = {{lo, true, true}, {hi - lo, q > o, o > q}, {1.0 - hi, false, false}};
    for (const auto& r : regions) {
      if (!(r.length > 0.0)) continue;
      trace.push(*next, r.upper_open);
      descend(trace, lower | (r.lower_open ? bit : 0U), upper | (r.upper_open ? bit : 0U), mass * r.length,
              violated || (r.lower_open && !r.upper_open));
      trace.order.pop_back();
      trace.values.pop_back();
    }
  }
};

}  // namespace

CouplingLaw exhaustive_coupling(const GraphBall& ball, const ExplorationRule& rule, double q,
                                const ConditionalOracle& oracle, std::size_t max_edges) {
  if (ball.num_edges() > max_edges || ball.num_edges() > 31) {
    throw CapExceeded("exhaustive coupling supports at most " + std::to_string(max_edges) + " edges");
  }
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  LawBuilder builder{ball, rule, oracle, q, {}};
  ExplorationTrace trace;
  builder.descend(trace, 0, 0, 1.0, false);
  return std::move(builder.law);
}

double domination_margin(const GraphBall& /*ball*/, const ExplorationRule& /*rule*/, const ConditionalOracle& oracle,
                         const TraceEnumerator& enumerator) {
  double margin = 1.0;
  enumerator.for_each_reachable(
      [&](const ExplorationTrace& trace) { margin = std::min(margin, checked_oracle(oracle, trace)); });
  return margin;
}

}  // namespace percolab
