#include "percolab/strassen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "percolab/lattice.hpp"

namespace percolab {

FlowNetwork::FlowNetwork(std::size_t nodes) : out_(nodes), level_(nodes), cursor_(nodes) {}

std::size_t FlowNetwork::add_arc(std::size_t from, std::size_t to, double capacity) {
  const std::size_t id = arcs_.size();
  arcs_.push_back({to, capacity, 0.0});
  arcs_.push_back({from, 0.0, 0.0});
  out_[from].push_back(id);
  out_[to].push_back(id + 1);
  return id;
}

bool FlowNetwork::levels(std::size_t source, std::size_t sink, double eps) {
  std::fill(level_.begin(), level_.end(), -1);
  std::vector<std::size_t> queue{source};
  level_[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t v = queue[head];
    for (std::size_t id : out_[v]) {
      const Arc& a = arcs_[id];
      if (level_[a.to] < 0 && a.capacity - a.flow > eps) {
        level_[a.to] = level_[v] + 1;
        queue.push_back(a.to);
      }
    }
  }
  return level_[sink] >= 0;
}

double FlowNetwork::augment(std::size_t v, std::size_t sink, double pushed, double eps) {
  if (v == sink) return pushed;
  for (std::size_t& i = cursor_[v]; i < out_[v].size(); ++i) {
    const std::size_t id = out_[v][i];
    Arc& a = arcs_[id];
    if (level_[a.to] != level_[v] + 1 || a.capacity - a.flow <= eps) continue;
    const double got = augment(a.to, sink, std::min(pushed, a.capacity - a.flow), eps);
    if (got > eps) {
      a.flow += got;
      arcs_[id ^ 1].flow -= got;
      return got;
    }
  }
  return 0.0;
}

double FlowNetwork::max_flow(std::size_t source, std::size_t sink, double eps) {
  double total = 0.0;
  while (levels(source, sink, eps)) {
    std::fill(cursor_.begin(), cursor_.end(), 0);
    while (true) {
      const double got = augment(source, sink, std::numeric_limits<double>::infinity(), eps);
      if (got <= eps) break;
      total += got;
    }
  }
  return total;
}

std::vector<char> FlowNetwork::residual_reachable(std::size_t source, double eps) const {
  std::vector<char> seen(out_.size(), 0);
  std::vector<std::size_t> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t id : out_[v]) {
      const Arc& a = arcs_[id];
      if (!seen[a.to] && a.capacity - a.flow > eps) {
        seen[a.to] = 1;
        stack.push_back(a.to);
      }
    }
  }
  return seen;
}

bool is_increasing(const std::vector<std::uint32_t>& sorted_event, std::size_t num_edges) {
  for (std::uint32_t x : sorted_event) {
    for (std::size_t e = 0; e < num_edges; ++e) {
      const std::uint32_t y = x | (1U << e);
      if (!std::binary_search(sorted_event.begin(), sorted_event.end(), y)) return false;
    }
  }
  return true;
}

DominationCertificate strassen_dominates(const ExplicitMeasure& mu, const ExplicitMeasure& nu, double tol,
                                         std::size_t cap) {
  if (mu.num_edges != nu.num_edges || mu.weights.size() != nu.weights.size()) {
    throw std::invalid_argument("measures live on different edge sets");
  }
  if (mu.num_edges > cap) {
    throw CapExceeded("domination check over " + std::to_string(mu.num_edges) + " edges exceeds cap " +
                      std::to_string(cap));
  }
  const std::size_t n = mu.weights.size();
  const std::uint32_t full = static_cast<std::uint32_t>(n - 1);
  const std::size_t source = 2 * n;
  const std::size_t sink = 2 * n + 1;
  FlowNetwork net(2 * n + 2);
  constexpr double kUnbounded = 4.0;  // exceeds any cut through source/sink arcs

  for (std::uint32_t y = 0; y < n; ++y) {
    if (nu.weights[y] > 0.0) net.add_arc(n + y, sink, nu.weights[y]);
  }
  struct Middle {
    std::size_t arc;
    std::uint32_t x, y;
  };
  std::vector<Middle> middle;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (!(mu.weights[x] > 0.0)) continue;
    net.add_arc(source, x, mu.weights[x]);
    const std::uint32_t free = full & ~x;
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
      const std::uint32_t y = x | sub;
      if (nu.weights[y] > 0.0) middle.push_back({net.add_arc(x, n + y, kUnbounded), x, y});
      if (sub == 0) break;
    }
  }

  DominationCertificate cert;
  cert.flow_value = net.max_flow(source, sink);
  const double mu_total = mu.total();
  cert.dominates = cert.flow_value >= mu_total - tol;
  if (cert.dominates) {
    for (const auto& m : middle) {
      const double f = net.flow(m.arc);
      if (f > 0.0) cert.coupling.push_back({m.x, m.y, f});
    }
    return cert;
  }

  const auto reach = net.residual_reachable(source);
  std::vector<char> up(n, 0);
  for (std::uint32_t c = 0; c < n; ++c) {
    if (reach[c]) {
      up[c] = 1;
      continue;
    }
    for (std::size_t e = 0; e < mu.num_edges && !up[c]; ++e) {
      if ((c >> e) & 1U) up[c] = up[c & ~(1U << e)];
    }
  }
  for (std::uint32_t c = 0; c < n; ++c) {
    if (!up[c]) continue;
    cert.event.push_back(c);
    cert.mu_event += mu.weights[c];
    cert.nu_event += nu.weights[c];
  }
  return cert;
}

bool validate_certificate(const DominationCertificate& cert, const ExplicitMeasure& mu, const ExplicitMeasure& nu,
                          double tol) {
  const std::size_t n = mu.weights.size();
  if (nu.weights.size() != n) return false;
  if (cert.dominates) {
    std::vector<double> lower(n, 0.0), upper(n, 0.0);
    for (const auto& c : cert.coupling) {
      if (c.lower >= n || c.upper >= n || (c.lower & ~c.upper) != 0 || c.mass < 0.0) return false;
      lower[c.lower] += c.mass;
      upper[c.upper] += c.mass;
    }
    double err_lower = 0.0, err_upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err_lower += std::abs(lower[i] - mu.weights[i]);
      err_upper += std::abs(upper[i] - nu.weights[i]);
    }
    return err_lower <= tol + 1e-12 && err_upper <= tol + 1e-12;
  }
  if (!std::is_sorted(cert.event.begin(), cert.event.end())) return false;
  if (!is_increasing(cert.event, mu.num_edges)) return false;
  double m = 0.0, v = 0.0;
  for (auto c : cert.event) {
    if (c >= n) return false;
    m += mu.weights[c];
    v += nu.weights[c];
  }
  return m - v > tol && std::abs(m - cert.mu_event) <= 1e-12 && std::abs(v - cert.nu_event) <= 1e-12;
}

}  // namespace percolab
