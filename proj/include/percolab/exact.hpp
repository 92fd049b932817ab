#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "percolab/coupling.hpp"
#include "percolab/enumeration.hpp"
#include "percolab/exploration.hpp"
#include "percolab/lattice.hpp"
#include "percolab/measure.hpp"

// Brute-force ground truth on small balls. The ghost field is integrated out analytically:
// for a vertex set S, P(S ∩ G = ∅) = e^{-h|S|}, so every event that depends on η only
// through which explored sets meet G reduces to set sizes.

namespace percolab {

inline constexpr std::size_t kMeasureCap = 20;
inline constexpr std::size_t kFlowCap = 12;
inline constexpr std::size_t kTraceCap = 10;

[[nodiscard]] ExplicitMeasure product_measure(const GraphBall& ball, double p, std::size_t cap = kMeasureCap);

/// Law of ω under ν_{p,h}[· | C_o ∩ G = ∅]: weight ∝ μ_p(ω) e^{-h|C_o(ω)|}.
[[nodiscard]] ExplicitMeasure conditional_measure_A(const GraphBall& ball, double p, double h,
                                                    std::size_t cap = kMeasureCap);

/// Σ_ω μ_p(ω) e^{-h|C_o(ω)|} = ν[C_o ∩ G = ∅].
[[nodiscard]] double avoidance_normalizer(const GraphBall& ball, double p, double h, std::size_t cap = kMeasureCap);

/// ν_{p,h}[C_root ∩ G ≠ ∅] on the ball (root defaults to the origin).
[[nodiscard]] double exact_magnetization(const GraphBall& ball, double p, double h,
                                         std::optional<std::uint32_t> root = std::nullopt,
                                         std::size_t cap = kMeasureCap);

/// max_v of the magnetisation seen from v; bounds ν[B_{k+1} | Expl_k] on the ball.
[[nodiscard]] double finite_ball_magnetization_bound(const GraphBall& ball, double p, double h,
                                                     std::size_t cap = kMeasureCap);

/// μ_p[|C_o| >= n].
[[nodiscard]] double exact_psi(const GraphBall& ball, double p, std::size_t n, std::size_t cap = kMeasureCap);

/// ψ_n(p) for n = 0..|V|+1 from a single pass.
[[nodiscard]] std::vector<double> exact_psi_table(const GraphBall& ball, double p, std::size_t cap = kMeasureCap);

// ---- trace-indexed quantities (direct enumeration over configurations) ----------------------

/// ν[ω_{e_{k+1}} = 1 | A ∩ Expl_k(trace)] with A = {C_o ∩ G = ∅}. Throws ContractViolation
/// for an inconsistent or zero-probability trace, or when the trace is complete.
[[nodiscard]] double conditional_open_prob(const GraphBall& ball, const ExplorationRule& rule, double p, double h,
                                           const ExplorationTrace& trace, std::size_t cap = kTraceCap);

struct FkgStep {
  double lhs = 0.0;            // ν[B_{k+1} | A ∩ Expl_k]
  double rhs = 0.0;            // ν[B_{k+1} | Expl_k]
  double pivotal = 0.0;        // ν[e_{k+1} pivotal for A | A ∩ Expl_k]
  BoundaryEdge split{0, 0};    // e_{k+1} = {inside, outside}
};

/// B_{k+1} = {w_{k+1} joined to a green vertex by open edges outside e_1..e_{k+1}}. Requires
/// e_{k+1} to have exactly one endpoint in the revealed cluster.
[[nodiscard]] FkgStep fkg_step_check(const GraphBall& ball, const ExplorationRule& rule, double p, double h,
                                     const ExplorationTrace& trace, std::size_t cap = kTraceCap);

// ---- exploration tree (all reachable prefixes at once) ------------------------------------

/// Every prefix of every exploration path with its weights accumulated in one pass over
/// configurations. Vertex sets come from the enumerated cluster tables.
class ExplorationTree final : public TraceEnumerator {
 public:
  struct Node {
    ExplorationTrace trace;
    std::optional<std::uint32_t> next;
    std::optional<BoundaryEdge> split;
    std::int32_t child[2] = {-1, -1};
    double w_expl = 0.0;      // μ[Expl_k]
    double w_a = 0.0;         // ν[A ∩ Expl_k]
    double w_a_open = 0.0;    // ν[A ∩ Expl_k ∩ {ω_next = 1}]
    double w_piv_a = 0.0;     // ν[A ∩ Expl_k ∩ {next pivotal}]
    double w_b = 0.0;         // ν[B ∩ Expl_k]
    double w_ab = 0.0;        // ν[A ∩ B ∩ Expl_k]

    [[nodiscard]] double open_prob() const { return w_a_open / w_a; }
    [[nodiscard]] double pivotal_prob() const { return w_piv_a / w_a; }
    [[nodiscard]] double fkg_lhs() const { return w_ab / w_a; }
    [[nodiscard]] double fkg_rhs() const { return w_b / w_expl; }
  };

  ExplorationTree(const GraphBall& ball, const ExplorationRule& rule, double p, double h,
                  std::size_t cap = kTraceCap);

  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::optional<std::size_t> find(const ExplorationTrace& trace) const;
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] double h() const noexcept { return h_; }

  /// Nodes with a next edge and ν[A ∩ Expl_k] > 0, i.e. the traces the target can produce.
  void for_each_reachable(const std::function<void(const ExplorationTrace&)>& visit) const override;

 private:
  std::vector<Node> nodes_;
  double p_;
  double h_;
};

/// The conditional oracle of ν_{p,h}[· | A] under a rule, read off an ExplorationTree.
class ExactConditionalOracle final : public ConditionalOracle {
 public:
  explicit ExactConditionalOracle(std::shared_ptr<const ExplorationTree> tree) : tree_(std::move(tree)) {}
  [[nodiscard]] double open_probability(const ExplorationTrace& trace) const override;
  [[nodiscard]] const ExplorationTree& tree() const { return *tree_; }

 private:
  std::shared_ptr<const ExplorationTree> tree_;
};

struct PivotalMax {
  double epsilon = 0.0;
  ExplorationTrace argmax;  // prefix attaining the maximum
};

/// ε* = max over reachable prefixes of ν[e_{k+1} pivotal for A | A ∩ Expl_k].
[[nodiscard]] PivotalMax max_conditional_pivotal(const ExplorationTree& tree);
[[nodiscard]] PivotalMax max_conditional_pivotal(const GraphBall& ball, const ExplorationRule& rule, double p,
                                                 double h);

// ---- volume-tail inequality on a ball ------------------------------------------------------

struct VolumeTailRow {
  std::size_t n = 0;
  double psi_q = 0.0;   // ψ_n(q)
  double psi_p = 0.0;   // ψ_n(p)
  double bayes = 0.0;   // ν[|C_o| >= n | A] (middle term)
  double rhs = 0.0;     // ψ_n(p) e^{-hn} / (1 - m)
  [[nodiscard]] double slack() const { return rhs - psi_q; }
};

/// Rows n = 0..|V|+1 for a given q; m is the origin-rooted ball magnetisation.
[[nodiscard]] std::vector<VolumeTailRow> volume_tail_rows(const GraphBall& ball, double p, double h, double q);

}  // namespace percolab
