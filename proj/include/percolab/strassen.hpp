#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "percolab/measure.hpp"

namespace percolab {

/// Max-flow solver (Dinic) on double capacities.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes);
  /// Returns the arc index; arc ^ 1 is its reverse.
  std::size_t add_arc(std::size_t from, std::size_t to, double capacity);
  double max_flow(std::size_t source, std::size_t sink, double eps = 1e-15);
  [[nodiscard]] double flow(std::size_t arc) const { return arcs_[arc].flow; }
  /// Nodes reachable from `source` through arcs with residual capacity > eps.
  [[nodiscard]] std::vector<char> residual_reachable(std::size_t source, double eps = 1e-15) const;

 private:
  struct Arc {
    std::size_t to;
    double capacity;
    double flow;
  };
  bool levels(std::size_t source, std::size_t sink, double eps);
  double augment(std::size_t v, std::size_t sink, double pushed, double eps);

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

struct CouplingMass {
  std::uint32_t lower = 0;
  std::uint32_t upper = 0;
  double mass = 0.0;
};

/// Outcome of a stochastic-domination test μ ⪯ ν. On success `coupling` is a joint law
/// supported on ordered pairs; on failure `event` is an increasing set with μ(event) > ν(event).
struct DominationCertificate {
  bool dominates = false;
  double flow_value = 0.0;
  std::vector<CouplingMass> coupling;
  std::vector<std::uint32_t> event;  // sorted configurations
  double mu_event = 0.0;
  double nu_event = 0.0;
  [[nodiscard]] double gap() const { return mu_event - nu_event; }
};

/// Monotone-coupling feasibility as max-flow: source -> x (cap μ(x)), x -> y for x ⊆ y
/// (unbounded), y -> sink (cap ν(y)); μ ⪯ ν iff the max flow is 1 within `tol`. The failure
/// event is the up-closure of the source side of the minimum cut.
/// Throws CapExceeded for |E| > cap, std::invalid_argument for mismatched spaces.
[[nodiscard]] DominationCertificate strassen_dominates(const ExplicitMeasure& mu, const ExplicitMeasure& nu,
                                                       double tol = 1e-9, std::size_t cap = 12);

/// Independent re-check of a certificate against the two measures.
[[nodiscard]] bool validate_certificate(const DominationCertificate& cert, const ExplicitMeasure& mu,
                                        const ExplicitMeasure& nu, double tol = 1e-9);

/// Is the configuration set closed under opening edges?
[[nodiscard]] bool is_increasing(const std::vector<std::uint32_t>& sorted_event, std::size_t num_edges);

}  // namespace percolab
