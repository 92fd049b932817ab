#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "percolab/bitvec.hpp"
#include "percolab/exploration.hpp"
#include "percolab/lattice.hpp"
#include "percolab/measure.hpp"

namespace percolab {

/// P(next revealed edge open | Expl_k = trace) under some target measure.
/// Implementations must be safe for concurrent const use.
class ConditionalOracle {
 public:
  virtual ~ConditionalOracle() = default;
  [[nodiscard]] virtual double open_probability(const ExplorationTrace& trace) const = 0;
};

/// Product measure: every conditional equals p.
class ConstantOracle final : public ConditionalOracle {
 public:
  explicit ConstantOracle(double p) : p_(p) {}
  [[nodiscard]] double open_probability(const ExplorationTrace&) const override { return p_; }

 private:
  double p_;
};

/// Visits every trace prefix (with a next edge) of positive target probability.
class TraceEnumerator {
 public:
  virtual ~TraceEnumerator() = default;
  virtual void for_each_reachable(const std::function<void(const ExplorationTrace&)>& visit) const = 0;
};

struct OrderViolation {
  std::size_t step = 0;  // 0-based reveal step
  std::uint32_t edge = 0;
  double uniform = 0.0;
  double oracle_value = 0.0;
  ExplorationTrace prefix;  // upper trace before the step
};

/// One run of the shared-uniform sequential coupling. The upper configuration drives the
/// exploration; the lower one uses the constant threshold q.
struct CoupledPair {
  EdgeConfig lower;
  EdgeConfig upper;
  ExplorationTrace trace;             // upper trace
  std::vector<double> uniforms;       // U_1..U_|E| in reveal order
  std::vector<double> oracle_values;  // oracle(trace prefix) at each step
  double q = 0.0;
  std::vector<OrderViolation> violations;
  std::size_t hypothesis_breaches = 0;  // steps where oracle < q

  [[nodiscard]] bool ordered() const { return lower.bits.is_subset_of(upper.bits); }
};

/// Step k+1: U uniform on [0,1); upper edge open iff U < oracle(trace), lower iff U < q.
/// Throws ContractViolation if the oracle leaves [0, 1].
[[nodiscard]] CoupledPair couple_sequential(const GraphBall& ball, const ExplorationRule& rule, double q,
                                            const ConditionalOracle& oracle, std::uint64_t seed);

/// Exact joint law of (lower, upper) obtained by following every interval of U at every
/// step (each step has at most three outcomes).
struct CouplingLaw {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;  // (lower mask, upper mask) -> mass
  double violation_mass = 0.0;   // mass of paths with lower open where upper is closed
  std::size_t violating_paths = 0;
  std::size_t paths = 0;

  [[nodiscard]] ExplicitMeasure lower_marginal(std::size_t num_edges) const;
  [[nodiscard]] ExplicitMeasure upper_marginal(std::size_t num_edges) const;
};

/// Throws CapExceeded for |E| > max_edges (default 12).
[[nodiscard]] CouplingLaw exhaustive_coupling(const GraphBall& ball, const ExplorationRule& rule, double q,
                                              const ConditionalOracle& oracle, std::size_t max_edges = 12);

/// Minimum of the oracle over every reachable trace: the largest q for which the sequential
/// coupling is guaranteed ordered.
[[nodiscard]] double domination_margin(const GraphBall& ball, const ExplorationRule& rule,
                                       const ConditionalOracle& oracle, const TraceEnumerator& enumerator);

}  // namespace percolab
