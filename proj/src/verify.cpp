#include "percolab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace percolab {

bool LemmaCheck::all_ok() const {
  return lemma_open_bound_ok() && identity_ok() && fkg_ok() && epsilon_le_mhat() && certificate.dominates &&
         certificate_valid && pivotal_vs_b_excess <= kExactTolerance && theorem12_ok() &&
         (!certificate_q_hat || certificate_q_hat->dominates);
}

LemmaCheck verify_lemmas(const GraphBall& ball, double p, double h, std::optional<double> q_override) {
  LemmaCheck out;
  out.p = p;
  out.h = h;
  const ClusterFirstRule rule;
  auto tree = std::make_shared<const ExplorationTree>(ball, rule, p, h);

  out.pivotal = max_conditional_pivotal(*tree);
  out.m_hat = finite_ball_magnetization_bound(ball, p, h);
  out.m_origin = exact_magnetization(ball, p, h);
  out.q_star = p * (1.0 - out.pivotal.epsilon);
  out.q_hat = p * (1.0 - std::min(out.m_hat, 1.0));
  out.q_tested = q_override.value_or(out.q_star);

  for (const auto& node : tree->nodes()) {
    if (!node.next || !(node.w_a > 0.0)) continue;
    const double open = node.open_prob();
    const double piv = node.pivotal_prob();
    if (open < out.min_open) {
      out.min_open = open;
      out.min_open_trace = node.trace;
    }
    out.identity_error = std::max(out.identity_error, std::abs(open - p * (1.0 - piv)));
    out.pivot_vs_mhat_excess = std::max(out.pivot_vs_mhat_excess, piv - out.m_hat);
    if (node.split && node.w_expl > 0.0) {
      ++out.fkg_steps;
      const double excess = node.fkg_lhs() - node.fkg_rhs();
      if (excess > out.fkg_excess) {
        out.fkg_excess = excess;
        out.fkg_worst = node.trace;
      }
      out.pivotal_vs_b_excess = std::max(out.pivotal_vs_b_excess, (node.w_piv_a - node.w_ab) / node.w_a);
    }
  }

  const ExplicitMeasure target = conditional_measure_A(ball, p, h);
  out.certificate = strassen_dominates(product_measure(ball, out.q_tested), target, 1e-9, kFlowCap);
  out.certificate_valid = validate_certificate(out.certificate, product_measure(ball, out.q_tested), target);
  if (!q_override) out.certificate_q_hat = strassen_dominates(product_measure(ball, out.q_hat), target, 1e-9, kFlowCap);

  auto min_slack = [&](double q) {
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& row : volume_tail_rows(ball, p, h, q)) slack = std::min(slack, row.slack());
    return slack;
  };
  out.theorem12_min_slack = min_slack(out.q_star);
  out.theorem12_min_slack_q_hat = min_slack(out.q_hat);
  return out;
}

}  // namespace percolab
