#include "percolab/commands.hpp"

#include <chrono>
#include <ctime>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "percolab/coupling.hpp"
#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"
#include "percolab/verify.hpp"

namespace percolab {

namespace {

struct Resolved {
  std::string command;
  LatticeSpec spec;
  int radius = 0;
  std::vector<double> p;
  std::vector<double> h;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t n_step = 0;
  std::size_t samples = 0;
  std::size_t cap = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<double> q_override;
  std::string mode;
};

Resolved resolve(const RunConfig& c) {
  Resolved r;
  r.command = c.command;
  r.seed = c.seed;
  r.threads = c.threads;
  r.q_override = c.q_override;
  r.mode = c.mode;
  std::string lattice = "z1";
  int radius = 2;
  std::vector<double> p = {0.2, 0.5, 0.8};
  std::vector<double> h = {0.1, 0.5, 1.0};
  std::size_t n_min = 1, n_max = 10, n_step = 1, samples = 1000, cap = 10000;
  if (c.command == "verify-lemmas") {
    // defaults above
  } else if (c.command == "verify-theorem12") {
    if (c.mode == "mc") {
      lattice = "z2";
      p = {0.45};
      h = {0.1};
      n_min = 10;
      n_max = 100;
      n_step = 10;
      samples = 100000;
    } else if (c.mode != "exact") {
      throw std::invalid_argument("--mode must be exact or mc");
    }
  } else if (c.command == "decay") {
    lattice = "z2";
    p = {0.40};
    h = {};
    n_min = 20;
    n_max = 120;
    n_step = 10;
    samples = 1000000;
  } else if (c.command == "meanfield") {
    lattice = "z2";
    p = {0.55, 0.6, 0.7, 0.8, 0.9, 1.0};
    h = {0.05};
    samples = 1000;
    cap = 100000;
  } else if (c.command == "couple-demo") {
    radius = 1;
    p = {0.5};
    h = {0.5};
  } else {
    throw std::invalid_argument("unknown command '" + c.command + "'");
  }
  r.spec = LatticeSpec::parse(c.lattice.value_or(lattice));
  r.radius = c.radius.value_or(radius);
  r.p = c.p.value_or(p);
  r.h = c.h.value_or(h);
  r.n_min = c.n_min.value_or(n_min);
  r.n_max = c.n_max.value_or(n_max);
  r.n_step = c.n_step.value_or(n_step);
  r.samples = c.samples.value_or(samples);
  r.cap = c.cap.value_or(cap);
  if (r.radius < 0) throw std::invalid_argument("--radius must be >= 0");
  if (r.n_step == 0) throw std::invalid_argument("--n-step must be >= 1");
  if (r.samples == 0) throw std::invalid_argument("--samples must be >= 1");
  for (double x : r.p) Params{x, 0.0}.validate();
  for (double x : r.h) Params{0.0, x}.validate();
  if (r.q_override) Params{*r.q_override, 0.0}.validate();
  return r;
}

Json params_json(const Resolved& r) {
  Json j;
  j["lattice"] = r.spec.name();
  j["radius"] = r.radius;
  j["p"] = r.p;
  j["h"] = r.h;
  j["n_min"] = r.n_min;
  j["n_max"] = r.n_max;
  j["n_step"] = r.n_step;
  j["samples"] = r.samples;
  j["cap"] = r.cap;
  j["seed"] = r.seed;
  j["threads"] = r.threads;
  j["q_override"] = r.q_override ? Json(*r.q_override) : Json(nullptr);
  j["mode"] = r.mode;
  return j;
}

std::vector<std::size_t> n_grid(const Resolved& r) {
  std::vector<std::size_t> ns;
  for (std::size_t n = r.n_min; n <= r.n_max; n += r.n_step) ns.push_back(n);
  return ns;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }
  void write(const std::string& name, std::string_view content) { digests_[name] = write_file(dir_ / name, content); }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }
  [[nodiscard]] Json digests() const {
    Json j = Json::object();
    for (const auto& [name, digest] : digests_) j[name] = "fnv1a64:" + digest;
    return j;
  }
  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> digests_;
};

std::string verdict_cell(bool ok) { return ok ? "PASS" : "FAIL"; }

// ---- verify-lemmas ----------------------------------------------------------------------

int cmd_verify_lemmas(const Resolved& r, Outputs& out, std::ostream& log) {
  const GraphBall ball = build_ball(r.spec, r.radius);
  Json checks = Json::array();
  Json failures = Json::array();
  CsvWriter csv({"lattice", "radius", "p", "h", "epsilon_star", "m_hat", "q_star", "q_tested", "min_open",
                 "fkg_excess", "theorem12_min_slack", "dominates", "ok"});
  for (double p : r.p) {
    for (double h : r.h) {
      const LemmaCheck c = verify_lemmas(ball, p, h, r.q_override);
      checks.push_back(to_json(c, ball.num_edges()));
      csv.row({r.spec.name(), fmt(static_cast<std::size_t>(r.radius)), fmt(p), fmt(h), fmt(c.pivotal.epsilon),
               fmt(c.m_hat), fmt(c.q_star), fmt(c.q_tested), fmt(c.min_open), fmt(c.fkg_excess),
               fmt(c.theorem12_min_slack), c.certificate.dominates ? "1" : "0", verdict_cell(c.all_ok())});
      if (!c.all_ok()) {
        Json f;
        f["ball"] = {{"lattice", r.spec.name()}, {"radius", r.radius}};
        f["p"] = p;
        f["h"] = h;
        f["q"] = c.q_tested;
        f["trace"] = to_json(c.certificate.dominates ? c.fkg_worst : c.min_open_trace);
        if (!c.certificate.dominates) f["witness"] = to_json(c.certificate, ball.num_edges());
        failures.push_back(std::move(f));
      }
      log << "p=" << fmt(p) << " h=" << fmt(h) << " eps*=" << fmt(c.pivotal.epsilon) << " m_hat=" << fmt(c.m_hat)
          << " " << verdict_cell(c.all_ok()) << "\n";
    }
  }
  Json report;
  report["ball"] = to_json(ball);
  report["checks"] = std::move(checks);
  report["failures"] = failures;
  report["ok"] = failures.empty();
  out.write_json("lemmas_report.json", report);
  out.write("lemmas.csv", csv.str());
  return failures.empty() ? kExitPass : kExitScientificFailure;
}

// ---- verify-theorem12 -------------------------------------------------------------------

int cmd_theorem12_exact(const Resolved& r, Outputs& out, std::ostream& log) {
  const GraphBall ball = build_ball(r.spec, r.radius);
  const ClusterFirstRule rule;
  CsvWriter csv({"lattice", "radius", "p", "h", "q", "n", "psi_q", "psi_p", "bayes", "rhs", "slack", "verdict"});
  bool ok = true;
  for (double p : r.p) {
    for (double h : r.h) {
      const double q = r.q_override.value_or(p * (1.0 - max_conditional_pivotal(ball, rule, p, h).epsilon));
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& row : volume_tail_rows(ball, p, h, q)) {
        const bool row_ok = row.slack() >= -kExactTolerance;
        ok = ok && row_ok;
        worst = std::min(worst, row.slack());
        csv.row({r.spec.name(), fmt(static_cast<std::size_t>(r.radius)), fmt(p), fmt(h), fmt(q), fmt(row.n),
                 fmt(row.psi_q), fmt(row.psi_p), fmt(row.bayes), fmt(row.rhs), fmt(row.slack()),
                 verdict_cell(row_ok)});
      }
      log << "p=" << fmt(p) << " h=" << fmt(h) << " q=" << fmt(q) << " min slack=" << fmt(worst) << "\n";
    }
  }
  out.write("theorem12.csv", csv.str());
  return ok ? kExitPass : kExitScientificFailure;
}

int cmd_theorem12_mc(const Resolved& r, Outputs& out, std::ostream& log) {
  const auto ns = n_grid(r);
  const EstimatorOptions options{r.threads};
  CsvWriter csv({"lattice", "p", "h", "q", "q_prime", "n", "psi_q", "psi_q_lo", "psi_q_hi", "psi_p", "psi_p_lo",
                 "psi_p_hi", "rhs_lo", "rhs_hi", "verdict"});
  Json summary = Json::array();
  bool any_fail = false;
  std::size_t point = 0;
  for (double p : r.p) {
    for (double h : r.h) {
      const auto rep = theorem12_verdict(r.spec, p, h, ns, r.samples, r.cap, derive_seed(r.seed, 0x7431, point++),
                                         options);
      any_fail = any_fail || rep.any_fail();
      std::map<std::string, int> tally;
      for (const auto& row : rep.rows) {
        ++tally[verdict_name(row.verdict)];
        csv.row({r.spec.name(), fmt(p), fmt(h), fmt(rep.q), fmt(rep.q_prime), fmt(row.n), fmt(row.psi_q.point),
                 fmt(row.psi_q.lo), fmt(row.psi_q.hi), fmt(row.psi_p.point), fmt(row.psi_p.lo), fmt(row.psi_p.hi),
                 fmt(row.rhs.lo), fmt(row.rhs.hi), verdict_name(row.verdict)});
      }
      summary.push_back({{"p", p}, {"h", h}, {"q", rep.q}, {"q_prime", rep.q_prime}, {"m", to_json(rep.m)},
                         {"verdicts", tally}});
      log << "p=" << fmt(p) << " h=" << fmt(h) << " q=" << fmt(rep.q) << (rep.any_fail() ? " FAIL" : " no FAIL")
          << "\n";
    }
  }
  out.write("theorem12.csv", csv.str());
  out.write_json("theorem12_summary.json", summary);
  return any_fail ? kExitScientificFailure : kExitPass;
}

// ---- decay ------------------------------------------------------------------------------

int cmd_decay(const Resolved& r, Outputs& out, std::ostream& log) {
  const auto ns = n_grid(r);
  const EstimatorOptions options{r.threads};
  CsvWriter csv({"lattice", "p", "n", "psi", "lo", "hi", "samples", "truncated_fraction"});
  Json fits = Json::array();
  std::size_t point = 0;
  for (double p : r.p) {
    const auto table = estimate_psi_table(r.spec, p, ns, r.samples, derive_seed(r.seed, 0xdeca, point++), options);
    std::vector<std::pair<std::size_t, EstimateCI>> rows;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      rows.emplace_back(ns[i], table[i]);
      csv.row({r.spec.name(), fmt(p), fmt(ns[i]), fmt(table[i].point), fmt(table[i].lo), fmt(table[i].hi),
               fmt(table[i].samples), fmt(table[i].truncated_fraction)});
    }
    Json entry{{"p", p}};
    try {
      const DecayFit fit = decay_fit(rows);
      entry["fit"] = to_json(fit);
      log << "p=" << fmt(p) << " c=" << fmt(fit.rate) << " C=" << fmt(fit.prefactor) << " R2=" << fmt(fit.r2)
          << "\n";
    } catch (const std::invalid_argument& e) {
      entry["fit"] = nullptr;
      entry["fit_error"] = e.what();
      log << "p=" << fmt(p) << " no fit: " << e.what() << "\n";
    }
    fits.push_back(std::move(entry));
  }
  out.write("decay.csv", csv.str());
  out.write_json("decay_fit.json", fits);
  return kExitPass;
}

// ---- meanfield --------------------------------------------------------------------------

int cmd_meanfield(const Resolved& r, Outputs& out, std::ostream& log) {
  const EstimatorOptions options{r.threads};
  CsvWriter csv({"lattice", "p", "h", "m_lo", "m_hi", "q_lo", "q_hi", "truncated_fraction", "p_c", "verdict"});
  bool ok = true;
  std::size_t point = 0;
  for (double h : r.h) {
    const auto rows =
        meanfield_verdict(r.spec, r.p, h, r.cap, r.samples, derive_seed(r.seed, 0x3f, point++), 0.01, options);
    for (const auto& row : rows) {
      ok = ok && row.verdict == Verdict::pass;
      csv.row({r.spec.name(), fmt(row.p), fmt(h), fmt(row.m.lower.lo), fmt(row.m.upper.hi), fmt(row.q.lo),
               fmt(row.q.hi), fmt(row.m.truncated_fraction), fmt(kSquareLatticeThreshold), verdict_name(row.verdict)});
      log << "p=" << fmt(row.p) << " h=" << fmt(h) << " q<=" << fmt(row.q.hi) << " " << verdict_name(row.verdict)
          << "\n";
    }
  }
  out.write("meanfield.csv", csv.str());
  return ok ? kExitPass : kExitScientificFailure;
}

// ---- couple-demo ------------------------------------------------------------------------

int cmd_couple_demo(const Resolved& r, Outputs& out, std::ostream& log) {
  const GraphBall ball = build_ball(r.spec, r.radius);
  const ClusterFirstRule rule;
  Json runs = Json::array();
  bool ordered = true;
  std::size_t point = 0;
  for (double p : r.p) {
    for (double h : r.h) {
      auto tree = std::make_shared<const ExplorationTree>(ball, rule, p, h);
      const ExactConditionalOracle oracle(tree);
      const double eps = max_conditional_pivotal(*tree).epsilon;
      const double q = r.q_override.value_or(p * (1.0 - eps));
      const CoupledPair pair = couple_sequential(ball, rule, q, oracle, derive_seed(r.seed, 0xc0, point++));
      ordered = ordered && pair.ordered();
      Json j = to_json(pair);
      j["p"] = p;
      j["h"] = h;
      j["epsilon_star"] = eps;
      runs.push_back(std::move(j));
      log << "p=" << fmt(p) << " h=" << fmt(h) << " q=" << fmt(q) << " lower=" << pair.lower.bits.to_hex()
          << " upper=" << pair.upper.bits.to_hex() << (pair.ordered() ? " ordered" : " NOT ordered") << "\n";
    }
  }
  Json report;
  report["ball"] = to_json(ball);
  report["runs"] = std::move(runs);
  out.write_json("couple_demo.json", report);
  return ordered ? kExitPass : kExitScientificFailure;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    const double value = std::stod(item.substr(first), &used);
    if (item.find_first_not_of(" \t", first + used) != std::string::npos) {
      throw std::invalid_argument("bad number '" + item + "'");
    }
    out.push_back(value);
  }
  return out;
}

Json resolved_params(const RunConfig& config) { return params_json(resolve(config)); }

void apply_config_json(RunConfig& c, const Json& input) {
  const Json& j = input.contains("params") && input["params"].is_object() ? input["params"] : input;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (input.contains("command") && c.command.empty()) c.command = input["command"].get<std::string>();
  auto list = [](const Json& v) {
    if (v.is_string()) return parse_list(v.get<std::string>());
    return v.get<std::vector<double>>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "lattice") c.lattice = v.get<std::string>();
    else if (key == "radius") c.radius = v.get<int>();
    else if (key == "p") c.p = list(v);
    else if (key == "h") c.h = list(v);
    else if (key == "n_min") c.n_min = v.get<std::size_t>();
    else if (key == "n_max") c.n_max = v.get<std::size_t>();
    else if (key == "n_step") c.n_step = v.get<std::size_t>();
    else if (key == "samples") c.samples = v.get<std::size_t>();
    else if (key == "cap") c.cap = v.get<std::size_t>();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "threads") c.threads = v.get<unsigned>();
    else if (key == "out") c.out = v.get<std::string>();
    else if (key == "q_override") {
      if (v.is_null()) c.q_override.reset();
      else c.q_override = v.get<double>();
    } else if (key == "mode") c.mode = v.get<std::string>();
    else if (key == "command") c.command = v.get<std::string>();
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

int run_command(const RunConfig& config, std::ostream& log) {
  Resolved r;
  try {
    r = resolve(config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string started = utc_now();
  int code = kExitUsage;
  Json manifest;
  try {
    Outputs out(config.out);
    if (r.command == "verify-lemmas") code = cmd_verify_lemmas(r, out, log);
    else if (r.command == "verify-theorem12") code = r.mode == "mc" ? cmd_theorem12_mc(r, out, log) : cmd_theorem12_exact(r, out, log);
    else if (r.command == "decay") code = cmd_decay(r, out, log);
    else if (r.command == "meanfield") code = cmd_meanfield(r, out, log);
    else code = cmd_couple_demo(r, out, log);

    const Json params = params_json(r);
    manifest["command"] = r.command;
    manifest["params"] = params;
    manifest["seed"] = r.seed;
    manifest["version"] = std::string(kVersion);
    manifest["csv_schema"] = kCsvSchemaVersion;
    manifest["interval_method"] = {{"frequency", "wilson"}, {"magnetization", "normal"}};
    manifest["confidence"] = kDefaultConfidence;
    // Outputs do not depend on the thread count, so neither does the run id.
    Json identity = params;
    identity.erase("threads");
    manifest["run_id"] = hex64(fnv1a64(r.command + "\n" + identity.dump() + "\n" + std::string(kVersion)));
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_now();
    manifest["outputs"] = out.digests();
    manifest["exit_code"] = code;
    write_file(out.dir() / "manifest.json", manifest.dump(2) + "\n");
  } catch (const CapExceeded& e) {
    log << "cap exceeded: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractViolation& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}

}  // namespace percolab
