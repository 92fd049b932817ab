#include "percolab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace percolab {

namespace {

Json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return fmt(x);
}

}  // namespace

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string fmt(std::size_t x) { return std::to_string(x); }

std::string config_hex(std::uint32_t mask, std::size_t num_edges) {
  return BitVector::from_mask(mask, num_edges).to_hex();
}

Json to_json(const GraphBall& ball) {
  Json j;
  j["lattice"] = ball.spec().name();
  j["radius"] = ball.radius();
  j["origin"] = ball.origin();
  j["vertices"] = ball.coords();
  Json edges = Json::array();
  for (const auto& e : ball.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  return j;
}

Json to_json(const ExplorationTrace& trace) {
  Json j = Json::array();
  for (std::size_t i = 0; i < trace.k(); ++i) j.push_back({trace.order[i], trace.values[i]});
  return j;
}

ExplorationTrace trace_from_json(const Json& j) {
  ExplorationTrace out;
  for (const auto& step : j) {
    if (!step.is_array() || step.size() != 2) throw std::invalid_argument("trace steps must be [edge, bit] pairs");
    const int bit = step[1].get<int>();
    if (bit != 0 && bit != 1) throw std::invalid_argument("trace bits must be 0 or 1");
    out.push(step[0].get<std::uint32_t>(), bit == 1);
  }
  return out;
}

Json to_json(const CoupledPair& pair) {
  Json j;
  j["q"] = pair.q;
  j["trace"] = to_json(pair.trace);
  j["uniforms"] = pair.uniforms;
  j["oracle_values"] = pair.oracle_values;
  j["lower"] = pair.lower.bits.to_hex();
  j["upper"] = pair.upper.bits.to_hex();
  j["ordered"] = pair.ordered();
  j["hypothesis_breaches"] = pair.hypothesis_breaches;
  Json v = Json::array();
  for (const auto& x : pair.violations) {
    v.push_back({{"step", x.step},
                 {"edge", x.edge},
                 {"uniform", x.uniform},
                 {"oracle", x.oracle_value},
                 {"prefix", to_json(x.prefix)}});
  }
  j["violations"] = std::move(v);
  return j;
}

Json to_json(const DominationCertificate& cert, std::size_t num_edges) {
  Json j;
  j["dominates"] = cert.dominates;
  j["flow"] = cert.flow_value;
  if (cert.dominates) {
    Json c = Json::array();
    for (const auto& m : cert.coupling) {
      c.push_back({config_hex(m.lower, num_edges), config_hex(m.upper, num_edges), m.mass});
    }
    j["coupling"] = std::move(c);
  } else {
    Json e = Json::array();
    for (auto w : cert.event) e.push_back(config_hex(w, num_edges));
    j["event"] = std::move(e);
    j["mu_event"] = cert.mu_event;
    j["nu_event"] = cert.nu_event;
    j["gap"] = cert.gap();
  }
  return j;
}

Json to_json(const EstimateCI& est) {
  return {{"point", est.point},
          {"lo", est.lo},
          {"hi", est.hi},
          {"samples", est.samples},
          {"truncated_fraction", est.truncated_fraction},
          {"confidence", est.confidence},
          {"method", est.method}};
}

Json to_json(const MagnetizationInterval& m) {
  return {{"lower", to_json(m.lower)}, {"upper", to_json(m.upper)}, {"truncated_fraction", m.truncated_fraction}};
}

Json to_json(const LemmaCheck& c, std::size_t num_edges) {
  Json j;
  j["p"] = c.p;
  j["h"] = c.h;
  j["epsilon_star"] = c.pivotal.epsilon;
  j["epsilon_argmax"] = to_json(c.pivotal.argmax);
  j["m_hat"] = c.m_hat;
  j["m_origin"] = c.m_origin;
  j["q_star"] = c.q_star;
  j["q_hat"] = c.q_hat;
  j["q_tested"] = c.q_tested;
  j["min_open_probability"] = c.min_open;
  j["min_open_trace"] = to_json(c.min_open_trace);
  j["identity_error"] = c.identity_error;
  j["fkg_steps"] = c.fkg_steps;
  j["fkg_excess"] = c.fkg_excess;
  j["fkg_worst_trace"] = to_json(c.fkg_worst);
  j["pivotal_vs_b_excess"] = c.pivotal_vs_b_excess;
  j["theorem12_min_slack"] = number_or_string(c.theorem12_min_slack);
  j["theorem12_min_slack_q_hat"] = number_or_string(c.theorem12_min_slack_q_hat);
  j["certificate"] = to_json(c.certificate, num_edges);
  j["certificate_valid"] = c.certificate_valid;
  if (c.certificate_q_hat) j["certificate_q_hat"] = to_json(*c.certificate_q_hat, num_edges);
  j["checks"] = {{"open_bound", c.lemma_open_bound_ok()},
                 {"pivotal_identity", c.identity_ok()},
                 {"fkg", c.fkg_ok()},
                 {"epsilon_le_m_hat", c.epsilon_le_mhat()},
                 {"theorem12", c.theorem12_ok()}};
  j["ok"] = c.all_ok();
  return j;
}

Json to_json(const DecayFit& fit) {
  return {{"c", fit.rate},
          {"C", fit.prefactor},
          {"r2", fit.r2},
          {"c_se", fit.rate_se},
          {"c_ci", {fit.rate_ci.lo, fit.rate_ci.hi}},
          {"points", fit.points}};
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CSV row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of(",\"\n") != std::string::npos) {
      throw std::logic_error("CSV cell needs quoting: " + cells[i]);
    }
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t x) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) out[static_cast<std::size_t>(i)] = digits[x & 15];
  return out;
}

std::string write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
  return hex64(fnv1a64(content));
}

}  // namespace percolab
