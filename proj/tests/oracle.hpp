#pragma once

// Brute-force reference computations used only by the tests. They enumerate edge states and
// ghost colourings explicitly and share no code with the library beyond the ball's edge list.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "percolab/lattice.hpp"

namespace oracle {

struct Graph {
  std::uint32_t vertices = 0;
  std::uint32_t origin = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  static Graph from(const percolab::GraphBall& ball) {
    Graph g;
    g.vertices = static_cast<std::uint32_t>(ball.num_vertices());
    g.origin = ball.origin();
    for (const auto& e : ball.edges()) g.edges.emplace_back(e.u, e.v);
    return g;
  }
  [[nodiscard]] std::uint32_t num_edges() const { return static_cast<std::uint32_t>(edges.size()); }

  /// Vertex mask reachable from `root` through edges in `open`.
  [[nodiscard]] std::uint32_t reach(std::uint32_t open, std::uint32_t root) const {
    std::uint32_t seen = 1U << root;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::uint32_t e = 0; e < num_edges(); ++e) {
        if (!((open >> e) & 1U)) continue;
        const std::uint32_t a = 1U << edges[e].first;
        const std::uint32_t b = 1U << edges[e].second;
        if (((seen & a) != 0) != ((seen & b) != 0)) {
          seen |= a | b;
          grew = true;
        }
      }
    }
    return seen;
  }
};

inline double product_weight(std::uint32_t mask, std::uint32_t num_edges, double p) {
  double w = 1.0;
  for (std::uint32_t e = 0; e < num_edges; ++e) w *= ((mask >> e) & 1U) ? p : 1.0 - p;
  return w;
}

inline double ghost_weight(std::uint32_t green, std::uint32_t vertices, double h) {
  const double g = 1.0 - std::exp(-h);
  double w = 1.0;
  for (std::uint32_t v = 0; v < vertices; ++v) w *= ((green >> v) & 1U) ? g : 1.0 - g;
  return w;
}

struct Trace {
  std::vector<std::uint32_t> order;
  std::vector<int> values;
  [[nodiscard]] bool agrees(std::uint32_t mask) const {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (static_cast<int>((mask >> order[i]) & 1U) != values[i]) return false;
    }
    return true;
  }
};

/// Smallest unrevealed edge touching the cluster of revealed open edges, else smallest unrevealed.
inline std::optional<std::uint32_t> cluster_first(const Graph& g, const Trace& t) {
  std::uint32_t revealed = 0, open = 0;
  for (std::size_t i = 0; i < t.order.size(); ++i) {
    revealed |= 1U << t.order[i];
    if (t.values[i]) open |= 1U << t.order[i];
  }
  const std::uint32_t cluster = g.reach(open, g.origin);
  for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
    if ((revealed >> e) & 1U) continue;
    if (((cluster >> g.edges[e].first) & 1U) || ((cluster >> g.edges[e].second) & 1U)) return e;
  }
  for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
    if (!((revealed >> e) & 1U)) return e;
  }
  return std::nullopt;
}

/// Joint weights at one exploration prefix, summed over (ω, η) explicitly.
struct StepWeights {
  double expl = 0.0;    // μ[Expl_k]
  double a = 0.0;       // ν[A ∩ Expl_k]
  double a_open = 0.0;  // ν[A ∩ Expl_k ∩ {ω_next = 1}]
  double piv_a = 0.0;   // ν[A ∩ Expl_k ∩ {next pivotal for A}]
  double b = 0.0;       // ν[B ∩ Expl_k]
  double ab = 0.0;      // ν[A ∩ B ∩ Expl_k]
  bool has_split = false;
};

inline StepWeights step_weights(const Graph& g, const Trace& t, std::uint32_t next, double p, double h) {
  StepWeights s;
  std::uint32_t revealed = 0, open_revealed = 0;
  for (std::size_t i = 0; i < t.order.size(); ++i) {
    revealed |= 1U << t.order[i];
    if (t.values[i]) open_revealed |= 1U << t.order[i];
  }
  const std::uint32_t known = g.reach(open_revealed, g.origin);
  const auto [x, y] = g.edges[next];
  const bool xin = (known >> x) & 1U;
  const bool yin = (known >> y) & 1U;
  s.has_split = xin != yin;
  const std::uint32_t w = xin ? y : x;
  const std::uint32_t used = revealed | (1U << next);
  const std::uint32_t configs = 1U << g.num_edges();
  const std::uint32_t colourings = 1U << g.vertices;
  for (std::uint32_t om = 0; om < configs; ++om) {
    if (!t.agrees(om)) continue;
    const double mu = product_weight(om, g.num_edges(), p);
    s.expl += mu;
    const std::uint32_t c = g.reach(om, g.origin);
    const std::uint32_t c_open = g.reach(om | (1U << next), g.origin);
    const std::uint32_t c_closed = g.reach(om & ~(1U << next), g.origin);
    const std::uint32_t r = g.reach(om & ~used, w);
    for (std::uint32_t eta = 0; eta < colourings; ++eta) {
      const double wt = mu * ghost_weight(eta, g.vertices, h);
      const bool a = (c & eta) == 0;
      const bool b = s.has_split && (r & eta) != 0;
      const bool pivotal = ((c_open & eta) == 0) != ((c_closed & eta) == 0);
      if (a) {
        s.a += wt;
        if ((om >> next) & 1U) s.a_open += wt;
        if (pivotal) s.piv_a += wt;
        if (b) s.ab += wt;
      }
      if (b) s.b += wt;
    }
  }
  return s;
}

/// Every prefix with ν[A ∩ Expl_k] > 0 and a next edge, depth first.
inline void for_each_reachable(const Graph& g, double p, double h,
                               const std::function<void(const Trace&, std::uint32_t, const StepWeights&)>& visit,
                               Trace t = {}) {
  const auto next = cluster_first(g, t);
  if (!next) return;
  const StepWeights s = step_weights(g, t, *next, p, h);
  if (!(s.a > 0.0)) return;
  visit(t, *next, s);
  for (int bit = 0; bit < 2; ++bit) {
    Trace child = t;
    child.order.push_back(*next);
    child.values.push_back(bit);
    for_each_reachable(g, p, h, visit, child);
  }
}

/// ν[C_root ∩ G ≠ ∅] with explicit ghost enumeration.
inline double magnetization(const Graph& g, double p, double h, std::uint32_t root) {
  double m = 0.0;
  for (std::uint32_t om = 0; om < (1U << g.num_edges()); ++om) {
    const std::uint32_t c = g.reach(om, root);
    for (std::uint32_t eta = 0; eta < (1U << g.vertices); ++eta) {
      if (c & eta) m += product_weight(om, g.num_edges(), p) * ghost_weight(eta, g.vertices, h);
    }
  }
  return m;
}

inline double psi(const Graph& g, double p, std::size_t n) {
  double total = 0.0;
  for (std::uint32_t om = 0; om < (1U << g.num_edges()); ++om) {
    if (static_cast<std::size_t>(std::popcount(g.reach(om, g.origin))) >= n) {
      total += product_weight(om, g.num_edges(), p);
    }
  }
  return total;
}

/// Law of ω given A, ghost enumerated explicitly.
inline std::vector<double> conditional_A(const Graph& g, double p, double h) {
  std::vector<double> w(std::size_t{1} << g.num_edges(), 0.0);
  double z = 0.0;
  for (std::uint32_t om = 0; om < (1U << g.num_edges()); ++om) {
    const std::uint32_t c = g.reach(om, g.origin);
    for (std::uint32_t eta = 0; eta < (1U << g.vertices); ++eta) {
      if ((c & eta) == 0) w[om] += product_weight(om, g.num_edges(), p) * ghost_weight(eta, g.vertices, h);
    }
    z += w[om];
  }
  for (auto& x : w) x /= z;
  return w;
}

/// μ ⪯ ν by checking μ(U) <= ν(U) on every increasing set U (|E| <= 4).
inline bool dominated_by_upsets(const std::vector<double>& mu, const std::vector<double>& nu, double tol) {
  const std::size_t n = mu.size();
  const std::uint64_t sets = std::uint64_t{1} << n;
  for (std::uint64_t u = 1; u < sets; ++u) {
    bool increasing = true;
    for (std::size_t x = 0; x < n && increasing; ++x) {
      if (!((u >> x) & 1U)) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if ((x & y) == x && !((u >> y) & 1U)) {
          increasing = false;
          break;
        }
      }
    }
    if (!increasing) continue;
    double a = 0.0, b = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if ((u >> x) & 1U) {
        a += mu[x];
        b += nu[x];
      }
    }
    if (a > b + tol) return false;
  }
  return true;
}

}  // namespace oracle
