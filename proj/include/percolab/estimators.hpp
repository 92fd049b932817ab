#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

inline constexpr double kDefaultConfidence = 0.999;

/// Two-sided standard-normal quantile for confidence level γ (γ = 0.999 -> 3.2905...).
[[nodiscard]] double normal_quantile_two_sided(double confidence);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for `successes` out of `trials`.
[[nodiscard]] Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence);

struct EstimateCI {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t samples = 0;
  double truncated_fraction = 0.0;
  double confidence = kDefaultConfidence;
  std::string method;
};

struct EstimatorOptions {
  unsigned threads = 1;
  double confidence = kDefaultConfidence;
  /// Draw edges from keyed uniforms so runs at different (p, h) share randomness and are
  /// pointwise monotone.
  bool common_random_numbers = false;
};

/// Capped cluster sizes of `samples` independent replicates; replicate i uses the stream
/// derive_seed(seed, stream, i) whatever the thread count.
[[nodiscard]] std::vector<ClusterSize> sample_cluster_sizes(const LatticeSpec& spec, double p, std::size_t cap,
                                                            std::size_t samples, std::uint64_t seed,
                                                            std::uint64_t stream, const EstimatorOptions& options);

/// μ_p[|C_o| >= n] from lazy clusters capped at n; Wilson interval. n <= 1 is exact.
[[nodiscard]] EstimateCI estimate_psi(const LatticeSpec& spec, double p, std::size_t n, std::size_t samples,
                                      std::uint64_t seed, const EstimatorOptions& options = {});

/// ψ_n for every n in `ns` from one batch of clusters capped at max(ns).
[[nodiscard]] std::vector<EstimateCI> estimate_psi_table(const LatticeSpec& spec, double p,
                                                         const std::vector<std::size_t>& ns, std::size_t samples,
                                                         std::uint64_t seed, const EstimatorOptions& options = {});

/// ψ_n on a finite ball (sampled configurations); used for interval calibration.
[[nodiscard]] EstimateCI estimate_psi_ball(const GraphBall& ball, double p, std::size_t n, std::size_t samples,
                                           std::uint64_t seed, double confidence = kDefaultConfidence);

struct MagnetizationInterval {
  EstimateCI lower;  // truncated clusters contribute 1 - e^{-h cap}
  EstimateCI upper;  // truncated clusters contribute 1
  double truncated_fraction = 0.0;
};

/// Mean of 1 - e^{-h min(|C_o|, cap)} with normal-approximation intervals, clipped to
/// [1 - e^{-h}, 1] (every sample lies there).
[[nodiscard]] MagnetizationInterval estimate_magnetization(const LatticeSpec& spec, double p, double h,
                                                           std::size_t cap, std::size_t samples,
                                                           std::uint64_t seed, const EstimatorOptions& options = {});

enum class Verdict { pass, marginal, fail };
[[nodiscard]] const char* verdict_name(Verdict v);

struct Theorem12Row {
  std::size_t n = 0;
  EstimateCI psi_q;
  EstimateCI psi_p;
  Interval rhs;
  Verdict verdict = Verdict::marginal;
};

struct Theorem12Report {
  double p = 0.0;
  double h = 0.0;
  MagnetizationInterval m;
  double q = 0.0;        // p (1 - lower bound of m): at least the true q w.h.p.
  double q_prime = 0.0;  // p (1 - upper bound of m)
  std::vector<Theorem12Row> rows;
  [[nodiscard]] bool any_fail() const;
};

/// Checks ψ_n(q) <= ψ_n(p) e^{-hn} / (1 - m_h(p)) per n with interval endpoints used
/// adversarially: PASS iff LHS.hi <= RHS.lo, FAIL iff LHS.lo > RHS.hi, MARGINAL otherwise.
[[nodiscard]] Theorem12Report theorem12_verdict(const LatticeSpec& spec, double p, double h,
                                                const std::vector<std::size_t>& ns, std::size_t samples,
                                                std::size_t magnetization_cap, std::uint64_t seed,
                                                const EstimatorOptions& options = {});

struct DecayFit {
  double rate = 0.0;        // c in ψ_n ≈ C e^{-cn}
  double prefactor = 0.0;   // C
  double r2 = 0.0;
  double rate_se = 0.0;
  Interval rate_ci;         // at the input confidence level
  std::size_t points = 0;
};

/// Weighted least squares of log ψ̂_n on n (weights from interval widths; uniform when the
/// intervals are degenerate). Throws std::invalid_argument with fewer than 5 positive entries.
[[nodiscard]] DecayFit decay_fit(const std::vector<std::pair<std::size_t, EstimateCI>>& table,
                                 double confidence = kDefaultConfidence);

struct MeanFieldRow {
  double p = 0.0;
  MagnetizationInterval m;
  Interval q;  // [p (1 - m upper bound), p (1 - m lower bound)]
  Verdict verdict = Verdict::fail;
};

inline constexpr double kSquareLatticeThreshold = 0.5;

/// PASS iff the upper end of q = p (1 - m_h(p)) is at most p_c + tolerance. Only the square
/// lattice (exact p_c = 1/2) is supported.
[[nodiscard]] std::vector<MeanFieldRow> meanfield_verdict(const LatticeSpec& spec, const std::vector<double>& ps,
                                                          double h, std::size_t cap, std::size_t samples,
                                                          std::uint64_t seed, double tolerance = 0.01,
                                                          const EstimatorOptions& options = {});

/// Left-right open crossing of the (L+1) x L vertex rectangle of Z^2; equals 1/2 at p = 1/2.
[[nodiscard]] EstimateCI crossing_probability(int L, double p, std::size_t samples, std::uint64_t seed,
                                              double confidence = kDefaultConfidence);

}  // namespace percolab
