// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff every line passes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "percolab/commands.hpp"
#include "percolab/coupling.hpp"
#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"
#include "percolab/verify.hpp"

using namespace percolab;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240901;
const std::vector<double> kPs = {0.2, 0.5, 0.8};
const std::vector<double> kHs = {0.1, 0.5, 1.0};

struct Ball {
  std::string label;
  GraphBall ball;
};

GraphBall single_edge() {
  const auto line = build_ball(LatticeSpec::hypercubic(1), 1);
  return induced_subgraph(line, {line.origin(), static_cast<std::uint32_t>(line.find({1}))});
}

std::vector<Ball> lemma_balls() {
  std::vector<Ball> out;
  for (int n = 1; n <= 3; ++n) out.push_back({"z1/r" + std::to_string(n), build_ball(LatticeSpec::hypercubic(1), n)});
  out.push_back({"z2/r1", build_ball(LatticeSpec::hypercubic(2), 1)});
  for (int n = 1; n <= 2; ++n) {
    out.push_back({"tree3/r" + std::to_string(n), build_ball(LatticeSpec::regular_tree(3), n)});
  }
  return out;
}

std::vector<Ball> coupling_balls() {
  std::vector<Ball> out = {{"edge", single_edge()}};
  for (int n = 1; n <= 3; ++n) out.push_back({"z1/r" + std::to_string(n), build_ball(LatticeSpec::hypercubic(1), n)});
  out.push_back({"z2/r1", build_ball(LatticeSpec::hypercubic(2), 1)});
  out.push_back({"z3/r1", build_ball(LatticeSpec::hypercubic(3), 1)});
  out.push_back({"tree3/r1", build_ball(LatticeSpec::regular_tree(3), 1)});
  return out;
}

bool all_ok = true;

void report(int criterion, bool ok, const std::string& detail) {
  all_ok = all_ok && ok;
  std::cout << "CRITERION " << criterion << " " << (ok ? "PASS" : "FAIL") << ": " << detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void exact_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  bool c1 = true, c2 = true, c3 = true, c4 = true;
  double worst_flow_gap = 0.0, worst_eps_minus_mhat = -1.0, worst_open_margin = 1.0, worst_identity = 0.0;
  double worst_slack = 1.0, worst_fkg = -1.0;
  std::size_t points = 0, fkg_steps = 0;
  std::string failures;
  for (const auto& b : lemma_balls()) {
    for (double p : kPs) {
      for (double h : kHs) {
        const LemmaCheck c = verify_lemmas(b.ball, p, h);
        ++points;
        const std::string where = " " + b.label + " p=" + fmt(p) + " h=" + fmt(h);
        const bool d = c.certificate.dominates && c.certificate_valid && c.epsilon_le_mhat();
        if (!d) failures += " C1" + where;
        c1 = c1 && d;
        worst_flow_gap = std::max(worst_flow_gap, 1.0 - c.certificate.flow_value);
        worst_eps_minus_mhat = std::max(worst_eps_minus_mhat, c.pivotal.epsilon - c.m_hat);
        c2 = c2 && c.lemma_open_bound_ok() && c.identity_ok();
        worst_open_margin = std::min(worst_open_margin, c.min_open - c.q_star);
        worst_identity = std::max(worst_identity, c.identity_error);
        c3 = c3 && c.theorem12_ok();
        worst_slack = std::min({worst_slack, c.theorem12_min_slack, c.theorem12_min_slack_q_hat});
        c4 = c4 && c.fkg_ok() && c.pivotal_vs_b_excess <= kExactTolerance;
        worst_fkg = std::max(worst_fkg, c.fkg_excess);
        fkg_steps += c.fkg_steps;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  c1 = c1 && elapsed < 300.0;
  report(1, c1,
         std::to_string(points) + " (ball, p, h) points; product(p(1-eps*)) below conditional law everywhere, max(1 - flow) = " +
             fmt(worst_flow_gap) + ", max(eps* - m_hat) = " + fmt(worst_eps_minus_mhat) + ", " + fmt(elapsed) + " s" +
             failures);
  report(2, c2,
         "min over reachable prefixes of (open prob - p(1-eps*)) = " + fmt(worst_open_margin) +
             ", max |open - p(1 - pivotal)| = " + fmt(worst_identity));
  report(3, c3, "min slack of the volume-tail bound at q* and at p(1-m_hat) = " + fmt(worst_slack));
  report(4, c4, std::to_string(fkg_steps) + " boundary steps, max(lhs - rhs) = " + fmt(worst_fkg));
}

void coupling_criterion() {
  constexpr std::size_t kSeeds = 100000;
  constexpr std::size_t kViolationSeeds = 10000;
  bool ok = true;
  std::size_t violations = 0, violations_first = 0, breaches = 0, points = 0;
  double worst_mass = 0.0, worst_exact_tv = 0.0, worst_mc_tv = 0.0;
  std::string worst_at;
  for (const auto& b : coupling_balls()) {
    const std::size_t configs = std::size_t{1} << b.ball.num_edges();
    for (double p : kPs) {
      for (double h : kHs) {
        ++points;
        const ClusterFirstRule rule;
        auto tree = std::make_shared<const ExplorationTree>(b.ball, rule, p, h);
        const ExactConditionalOracle oracle(tree);
        const double q = p * (1.0 - max_conditional_pivotal(*tree).epsilon);
        const auto target = conditional_measure_A(b.ball, p, h);

        const auto law = exhaustive_coupling(b.ball, rule, q, oracle);
        worst_mass = std::max(worst_mass, law.violation_mass);
        worst_exact_tv = std::max(worst_exact_tv, total_variation(law.upper_marginal(b.ball.num_edges()), target));

        ExplicitMeasure empirical{b.ball.num_edges(), std::vector<double>(configs, 0.0)};
        for (std::size_t s = 0; s < kSeeds; ++s) {
          const auto pair = couple_sequential(b.ball, rule, q, oracle, derive_seed(kSeed, 0xc5, s));
          const std::size_t v = pair.violations.size() + (pair.ordered() ? 0 : 1);
          violations += v;
          if (s < kViolationSeeds) violations_first += v;
          breaches += pair.hypothesis_breaches;
          empirical.weights[pair.upper.bits.to_mask()] += 1.0 / static_cast<double>(kSeeds);
        }
        const double tv = total_variation(empirical, target);
        if (tv > worst_mc_tv) {
          worst_mc_tv = tv;
          worst_at = b.label + " p=" + fmt(p) + " h=" + fmt(h) + " (" + std::to_string(configs) + " configurations)";
        }
      }
    }
  }
  ok = violations == 0 && breaches == 0 && worst_mass == 0.0 && worst_exact_tv <= 1e-12 && worst_mc_tv <= 0.01;
  report(5, ok,
         std::to_string(points) + " (ball, p, h) points with |E| <= 8; order violations in the first 10^4 seeds = " +
             std::to_string(violations_first) + ", in all 10^5 = " + std::to_string(violations) +
             "; exhaustive violation mass = " + fmt(worst_mass) + ", exhaustive upper-marginal TV = " +
             fmt(worst_exact_tv) + "; max empirical TV at 10^5 seeds = " + fmt(worst_mc_tv) + " at " + worst_at);
}

void theorem12_mc_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::size_t> ns;
  for (std::size_t n = 10; n <= 100; n += 10) ns.push_back(n);
  const auto rep = theorem12_verdict(LatticeSpec::hypercubic(2), 0.45, 0.1, ns, 100000, 10000, kSeed);
  std::size_t pass = 0, marginal = 0, fail = 0;
  for (const auto& r : rep.rows) {
    pass += r.verdict == Verdict::pass ? 1 : 0;
    marginal += r.verdict == Verdict::marginal ? 1 : 0;
    fail += r.verdict == Verdict::fail ? 1 : 0;
  }
  const double elapsed = seconds_since(t0);
  report(6, fail == 0 && elapsed < 600.0,
         "z2 p=0.45 h=0.1 q=" + fmt(rep.q) + ": PASS " + std::to_string(pass) + ", MARGINAL " +
             std::to_string(marginal) + ", FAIL " + std::to_string(fail) + ", " + fmt(elapsed) + " s");
}

void meanfield_criterion() {
  const std::vector<double> ps = {0.55, 0.6, 0.7, 0.8, 0.9, 1.0};
  const auto rows = meanfield_verdict(LatticeSpec::hypercubic(2), ps, 0.05, 100000, 1000, kSeed);
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    ok = ok && r.verdict == Verdict::pass;
    detail += " p=" + fmt(r.p) + ":q<=" + fmt(r.q.hi);
  }
  const auto cross = crossing_probability(32, 0.5, 4000, kSeed);
  report(7, ok,
         "q upper bounds vs 0.51:" + detail + "; crossing probe at p=0.5: " + fmt(cross.point) + " [" + fmt(cross.lo) +
             ", " + fmt(cross.hi) + "]");
}

void decay_criterion() {
  std::vector<std::size_t> ns;
  for (std::size_t n = 20; n <= 120; n += 10) ns.push_back(n);
  const auto table = estimate_psi_table(LatticeSpec::hypercubic(2), 0.40, ns, 1000000, kSeed);
  std::vector<std::pair<std::size_t, EstimateCI>> rows;
  for (std::size_t i = 0; i < ns.size(); ++i) rows.emplace_back(ns[i], table[i]);
  const auto fit = decay_fit(rows);
  report(8, fit.r2 >= 0.99 && fit.rate > 0.0 && fit.rate_ci.lo > 0.0,
         "z2 p=0.40: c=" + fmt(fit.rate) + " [" + fmt(fit.rate_ci.lo) + ", " + fmt(fit.rate_ci.hi) +
             "], C=" + fmt(fit.prefactor) + ", R2=" + fmt(fit.r2));
}

bool strip_equal(const fs::path& a, const fs::path& b) {
  auto strip = [](const fs::path& p) {
    Json j = Json::parse(slurp(p));
    j.erase("started_at");
    j.erase("finished_at");
    j["params"].erase("threads");
    return j.dump();
  };
  return strip(a) == strip(b);
}

void calibration_criterion() {
  const auto one = single_edge();
  const double p = 0.3;
  std::size_t covered = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto e = estimate_psi_ball(one, p, 2, 1000, derive_seed(kSeed, 0xca1, t));
    covered += (e.lo <= p && p <= e.hi) ? 1 : 0;
  }
  const double coverage = static_cast<double>(covered) / 1000.0;

  bool identical = true;
  std::string checked;
  const auto base = fs::temp_directory_path() / "percolab_acceptance";
  fs::remove_all(base);
  std::vector<RunConfig> runs;
  {
    RunConfig c;
    c.command = "verify-lemmas";
    runs.push_back(c);
    c = RunConfig{};
    c.command = "decay";
    c.samples = 20000;
    c.threads = 1;
    runs.push_back(c);
    c = RunConfig{};
    c.command = "verify-theorem12";
    c.mode = "mc";
    c.samples = 5000;
    c.n_max = 40;
    runs.push_back(c);
    c = RunConfig{};
    c.command = "couple-demo";
    runs.push_back(c);
  }
  std::ostringstream log;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    RunConfig first = runs[i];
    first.out = base / (std::to_string(i) + "a");
    run_command(first, log);
    // Second run is driven by the first run's manifest, with a different thread count.
    RunConfig second;
    apply_config_json(second, Json::parse(slurp(first.out / "manifest.json")));
    second.out = base / (std::to_string(i) + "b");
    second.threads = 3;
    run_command(second, log);
    for (const auto& entry : fs::directory_iterator(first.out)) {
      const auto name = entry.path().filename();
      const bool same = name == "manifest.json" ? strip_equal(entry.path(), second.out / name)
                                                : slurp(entry.path()) == slurp(second.out / name);
      identical = identical && same;
      checked += " " + runs[i].command + "/" + name.string() + (same ? "" : "(DIFFERS)");
    }
  }
  report(9, coverage >= 0.995 && identical,
         "coverage " + std::to_string(covered) + "/1000 of 0.999 Wilson intervals on the single edge; reruns byte-identical:" +
             checked);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> steps = {
      {"exact", exact_criteria},           {"coupling", coupling_criterion}, {"theorem12", theorem12_mc_criterion},
      {"meanfield", meanfield_criterion}, {"decay", decay_criterion},       {"calibration", calibration_criterion}};
  for (const auto& [name, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      all_ok = false;
      std::cout << "ERROR in " << name << ": " << e.what() << std::endl;
    }
  }
  std::cout << (all_ok ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << std::endl;
  return all_ok ? 0 : 1;
}
