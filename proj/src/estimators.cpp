#include "percolab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "percolab/rng.hpp"

namespace percolab {

namespace {

constexpr std::uint64_t kStreamPsi = 0x01;
constexpr std::uint64_t kStreamMagnetization = 0x02;
constexpr std::uint64_t kStreamPsiQ = 0x03;
constexpr std::uint64_t kStreamPsiP = 0x04;
constexpr std::uint64_t kStreamBall = 0x05;
constexpr std::uint64_t kStreamCrossing = 0x06;
constexpr std::uint64_t kStreamMeanField = 0x07;

void check_samples(std::size_t samples) {
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
}

// Runs body(begin, end) over contiguous chunks; chunk boundaries never affect results because
// each replicate owns its seed and writes its own slot.
template <class Body>
void run_chunks(std::size_t count, unsigned threads, Body&& body) {
  const std::size_t workers = std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(count, w * chunk);
      const std::size_t end = std::min(count, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

EstimateCI binomial_estimate(std::size_t hits, std::size_t trials, double truncated_fraction, double confidence) {
  EstimateCI out;
  out.samples = trials;
  out.point = static_cast<double>(hits) / static_cast<double>(trials);
  const Interval ci = wilson_interval(hits, trials, confidence);
  out.lo = ci.lo;
  out.hi = ci.hi;
  out.truncated_fraction = truncated_fraction;
  out.confidence = confidence;
  out.method = "wilson";
  return out;
}

EstimateCI exact_one(std::size_t samples, double confidence) {
  EstimateCI out;
  out.point = out.lo = out.hi = 1.0;
  out.samples = samples;
  out.confidence = confidence;
  out.method = "exact";
  return out;
}

EstimateCI mean_estimate(const std::vector<double>& xs, double floor, double confidence) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double half = normal_quantile_two_sided(confidence) * sd / std::sqrt(n);
  EstimateCI out;
  out.point = mean;
  out.lo = std::clamp(mean - half, floor, 1.0);
  out.hi = std::clamp(mean + half, floor, 1.0);
  out.samples = xs.size();
  out.confidence = confidence;
  out.method = "normal";
  return out;
}

}  // namespace

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + confidence / 2.0);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw std::invalid_argument("Wilson interval needs at least one trial");
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  const double z = normal_quantile_two_sided(confidence);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) out.lo = 0.0;
  if (successes == trials) out.hi = 1.0;
  return out;
}

std::vector<ClusterSize> sample_cluster_sizes(const LatticeSpec& spec, double p, std::size_t cap,
                                              std::size_t samples, std::uint64_t seed, std::uint64_t stream,
                                              const EstimatorOptions& options) {
  Params{p, 0.0}.validate();
  spec.validate();
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (cap > kMaxLazyCap) {
    throw CapExceeded("cap " + std::to_string(cap) + " exceeds the lazy-growth budget of " +
                      std::to_string(kMaxLazyCap));
  }
  std::vector<ClusterSize> out(samples);
  run_chunks(samples, options.threads, [&](std::size_t begin, std::size_t end) {
    LazyGrower grower(spec);
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t s = derive_seed(seed, stream, i);
      if (options.common_random_numbers) {
        out[i] = grower.grow(KeyedEdges{s, p}, cap);
      } else {
        SequentialEdges source{Rng(s), p};
        out[i] = grower.grow(source, cap);
      }
    }
  });
  return out;
}

std::vector<EstimateCI> estimate_psi_table(const LatticeSpec& spec, double p, const std::vector<std::size_t>& ns,
                                           std::size_t samples, std::uint64_t seed,
                                           const EstimatorOptions& options) {
  check_samples(samples);
  Params{p, 0.0}.validate();
  std::vector<EstimateCI> out;
  if (ns.empty()) return out;
  const std::size_t cap = std::max<std::size_t>(*std::max_element(ns.begin(), ns.end()), 1);
  std::vector<ClusterSize> sizes;
  if (cap > 1) sizes = sample_cluster_sizes(spec, p, cap, samples, seed, kStreamPsi, options);
  for (std::size_t n : ns) {
    if (n <= 1) {
      out.push_back(exact_one(samples, options.confidence));
      continue;
    }
    std::size_t hits = 0;
    std::size_t truncated = 0;
    for (const auto& c : sizes) {
      hits += c.size >= n ? 1 : 0;
      truncated += c.truncated ? 1 : 0;
    }
    out.push_back(binomial_estimate(hits, samples, static_cast<double>(truncated) / static_cast<double>(samples),
                                    options.confidence));
  }
  return out;
}

EstimateCI estimate_psi(const LatticeSpec& spec, double p, std::size_t n, std::size_t samples, std::uint64_t seed,
                        const EstimatorOptions& options) {
  return estimate_psi_table(spec, p, {n}, samples, seed, options).front();
}

EstimateCI estimate_psi_ball(const GraphBall& ball, double p, std::size_t n, std::size_t samples,
                             std::uint64_t seed, double confidence) {
  check_samples(samples);
  Params{p, 0.0}.validate();
  if (n <= 1) return exact_one(samples, confidence);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const EdgeConfig config = sample_config(ball, p, derive_seed(seed, kStreamBall, i));
    hits += cluster_of_origin(ball, config).size >= n ? 1 : 0;
  }
  return binomial_estimate(hits, samples, 0.0, confidence);
}

MagnetizationInterval estimate_magnetization(const LatticeSpec& spec, double p, double h, std::size_t cap,
                                             std::size_t samples, std::uint64_t seed,
                                             const EstimatorOptions& options) {
  check_samples(samples);
  Params{p, h}.validate();
  const auto sizes = sample_cluster_sizes(spec, p, cap, samples, seed, kStreamMagnetization, options);
  std::vector<double> lower(samples);
  std::vector<double> upper(samples);
  std::size_t truncated = 0;
  auto statistic = [h](std::size_t size) {
    return std::isinf(h) ? 1.0 : -std::expm1(-h * static_cast<double>(size));
  };
  for (std::size_t i = 0; i < samples; ++i) {
    lower[i] = statistic(sizes[i].size);
    upper[i] = sizes[i].truncated ? 1.0 : lower[i];
    truncated += sizes[i].truncated ? 1 : 0;
  }
  const double floor = statistic(1);
  MagnetizationInterval out;
  out.lower = mean_estimate(lower, floor, options.confidence);
  out.upper = mean_estimate(upper, floor, options.confidence);
  out.truncated_fraction = static_cast<double>(truncated) / static_cast<double>(samples);
  out.lower.truncated_fraction = out.upper.truncated_fraction = out.truncated_fraction;
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::marginal:
      return "MARGINAL";
    case Verdict::fail:
      return "FAIL";
  }
  return "?";
}

bool Theorem12Report::any_fail() const {
  return std::any_of(rows.begin(), rows.end(), [](const Theorem12Row& r) { return r.verdict == Verdict::fail; });
}

Theorem12Report theorem12_verdict(const LatticeSpec& spec, double p, double h, const std::vector<std::size_t>& ns,
                                  std::size_t samples, std::size_t magnetization_cap, std::uint64_t seed,
                                  const EstimatorOptions& options) {
  Params{p, h}.validate();
  Theorem12Report out;
  out.p = p;
  out.h = h;
  out.m = estimate_magnetization(spec, p, h, magnetization_cap, samples, derive_seed(seed, kStreamMagnetization, 0),
                                 options);
  const double m_lo = out.m.lower.lo;
  const double m_hi = out.m.upper.hi;
  out.q = p * (1.0 - m_lo);
  out.q_prime = p * (1.0 - m_hi);
  const auto psi_q = estimate_psi_table(spec, out.q, ns, samples, derive_seed(seed, kStreamPsiQ, 0), options);
  const auto psi_p = estimate_psi_table(spec, p, ns, samples, derive_seed(seed, kStreamPsiP, 0), options);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    Theorem12Row row;
    row.n = ns[i];
    row.psi_q = psi_q[i];
    row.psi_p = psi_p[i];
    const double damp = std::exp(-h * static_cast<double>(ns[i]));
    auto bound = [damp](double psi, double m) {
      return m >= 1.0 ? std::numeric_limits<double>::infinity() : psi * damp / (1.0 - m);
    };
    row.rhs = {bound(row.psi_p.lo, m_lo), bound(row.psi_p.hi, m_hi)};
    if (row.psi_q.hi <= row.rhs.lo) {
      row.verdict = Verdict::pass;
    } else if (row.psi_q.lo > row.rhs.hi) {
      row.verdict = Verdict::fail;
    } else {
      row.verdict = Verdict::marginal;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

DecayFit decay_fit(const std::vector<std::pair<std::size_t, EstimateCI>>& table, double confidence) {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> sigmas;
  for (const auto& [n, est] : table) {
    if (!(est.point > 0.0)) continue;
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log(est.point));
    const double z = normal_quantile_two_sided(est.confidence);
    sigmas.push_back((est.hi - est.lo) / (2.0 * z * est.point));
  }
  if (xs.size() < 5) throw std::invalid_argument("decay fit needs at least 5 entries with positive estimates");
  const bool weighted = std::all_of(sigmas.begin(), sigmas.end(), [](double s) { return s > 0.0; });
  std::vector<double> w(xs.size(), 1.0);
  if (weighted) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (sigmas[i] * sigmas[i]);
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += w[i];
    sx += w[i] * xs[i];
    sy += w[i] * ys[i];
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += w[i] * (xs[i] - xbar) * (xs[i] - xbar);
    sxy += w[i] * (xs[i] - xbar) * (ys[i] - ybar);
    syy += w[i] * (ys[i] - ybar) * (ys[i] - ybar);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("decay fit needs at least two distinct n");
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += w[i] * r * r;
  }
  DecayFit out;
  out.points = xs.size();
  out.rate = slope == 0.0 ? 0.0 : -slope;
  out.prefactor = std::exp(intercept);
  out.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  out.rate_se = std::sqrt(ss_res / static_cast<double>(xs.size() - 2) / sxx);
  const double z = normal_quantile_two_sided(confidence);
  out.rate_ci = {out.rate - z * out.rate_se, out.rate + z * out.rate_se};
  return out;
}

std::vector<MeanFieldRow> meanfield_verdict(const LatticeSpec& spec, const std::vector<double>& ps, double h,
                                            std::size_t cap, std::size_t samples, std::uint64_t seed,
                                            double tolerance, const EstimatorOptions& options) {
  if (!(spec.family == LatticeFamily::hypercubic && spec.dim == 2)) {
    throw std::invalid_argument("mean-field check needs a lattice with known p_c; only z2 is supported");
  }
  std::vector<MeanFieldRow> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    MeanFieldRow row;
    row.p = ps[i];
    row.m = estimate_magnetization(spec, ps[i], h, cap, samples, derive_seed(seed, kStreamMeanField, i), options);
    row.q = {ps[i] * (1.0 - row.m.upper.hi), ps[i] * (1.0 - row.m.lower.lo)};
    row.verdict = row.q.hi <= kSquareLatticeThreshold + tolerance ? Verdict::pass : Verdict::fail;
    out.push_back(std::move(row));
  }
  return out;
}

EstimateCI crossing_probability(int L, double p, std::size_t samples, std::uint64_t seed, double confidence) {
  check_samples(samples);
  Params{p, 0.0}.validate();
  if (L < 1) throw std::invalid_argument("crossing rectangle needs L >= 1");
  const int width = L + 1;
  const int height = L;
  const auto cells = static_cast<std::size_t>(width * height);
  std::vector<std::size_t> parent(cells);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, kStreamCrossing, s));
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const auto id = static_cast<std::size_t>(y * width + x);
        if (x + 1 < width && rng.bernoulli(p)) parent[find(id)] = find(id + 1);
        if (y + 1 < height && rng.bernoulli(p)) parent[find(id)] = find(id + static_cast<std::size_t>(width));
      }
    }
    std::vector<char> left(cells, 0);
    for (int y = 0; y < height; ++y) left[find(static_cast<std::size_t>(y * width))] = 1;
    bool crossed = false;
    for (int y = 0; y < height && !crossed; ++y) crossed = left[find(static_cast<std::size_t>(y * width + L))] != 0;
    hits += crossed ? 1 : 0;
  }
  return binomial_estimate(hits, samples, 0.0, confidence);
}

}  // namespace percolab
