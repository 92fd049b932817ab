#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "percolab/exact.hpp"
#include "percolab/strassen.hpp"

namespace percolab {

inline constexpr double kExactTolerance = 1e-12;

/// Exhaustive check of the exploration lemmas on one ball at one (p, h).
struct LemmaCheck {
  double p = 0.0;
  double h = 0.0;

  PivotalMax pivotal;            // ε* and its prefix
  double m_hat = 0.0;            // max_v ball magnetisation
  double m_origin = 0.0;         // origin-rooted ball magnetisation
  double q_star = 0.0;           // p (1 - ε*)
  double q_hat = 0.0;            // p (1 - m̂)
  double q_tested = 0.0;         // q_star, or the override

  double min_open = 1.0;         // min over reachable prefixes of ν[ω_next = 1 | A ∩ Expl_k]
  ExplorationTrace min_open_trace;
  double identity_error = 0.0;   // max |open - p (1 - pivotal)|

  std::size_t fkg_steps = 0;
  double fkg_excess = -1.0;      // max of lhs - rhs over boundary steps
  ExplorationTrace fkg_worst;
  double pivotal_vs_b_excess = -1.0;  // max of ν[piv ∩ A] - ν[A ∩ B], should be <= 0
  double pivot_vs_mhat_excess = -1.0; // max of pivotal - m̂ over boundary steps

  DominationCertificate certificate;       // product(q_tested) vs ν[· | A]
  bool certificate_valid = false;
  std::optional<DominationCertificate> certificate_q_hat;

  double theorem12_min_slack = 0.0;        // min over n of rhs - ψ_n(q_star)
  double theorem12_min_slack_q_hat = 0.0;

  [[nodiscard]] bool lemma_open_bound_ok() const { return min_open >= q_star - kExactTolerance; }
  [[nodiscard]] bool identity_ok() const { return identity_error <= kExactTolerance; }
  [[nodiscard]] bool fkg_ok() const { return fkg_excess <= kExactTolerance; }
  [[nodiscard]] bool epsilon_le_mhat() const { return pivotal.epsilon <= m_hat + kExactTolerance; }
  [[nodiscard]] bool theorem12_ok() const {
    return theorem12_min_slack >= -kExactTolerance && theorem12_min_slack_q_hat >= -kExactTolerance;
  }
  [[nodiscard]] bool all_ok() const;
};

/// Runs every exact check. Throws CapExceeded when the ball is too large for the exploration
/// tree or the flow network.
[[nodiscard]] LemmaCheck verify_lemmas(const GraphBall& ball, double p, double h,
                                       std::optional<double> q_override = std::nullopt);

}  // namespace percolab
