#include "percolab/percolation.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <string>

namespace percolab {

void Params::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(h >= 0.0)) throw std::invalid_argument("h must be nonnegative");
}

double Params::q(double magnetization) const {
  if (!(magnetization >= 0.0 && magnetization <= 1.0)) {
    throw std::invalid_argument("magnetization must lie in [0, 1]");
  }
  return p * (1.0 - magnetization);
}

EdgeConfig sample_config(const GraphBall& ball, double p, std::uint64_t seed) {
  Params{p, 0.0}.validate();
  Rng rng(seed);
  EdgeConfig out{BitVector(ball.num_edges())};
  for (std::size_t e = 0; e < ball.num_edges(); ++e) out.bits.set(e, rng.bernoulli(p));
  return out;
}

EdgeConfig config_from_uniforms(std::span<const double> uniforms, double p) {
  EdgeConfig out{BitVector(uniforms.size())};
  for (std::size_t e = 0; e < uniforms.size(); ++e) out.bits.set(e, uniforms[e] < p);
  return out;
}

GhostConfig sample_ghost(const GraphBall& ball, double h, std::uint64_t seed) {
  const Params params{0.0, h};
  params.validate();
  const double green = params.green_prob();
  Rng rng(seed);
  GhostConfig out{BitVector(ball.num_vertices())};
  for (std::size_t v = 0; v < ball.num_vertices(); ++v) out.bits.set(v, rng.bernoulli(green));
  return out;
}

ClusterResult cluster_of_vertex(const GraphBall& ball, const EdgeConfig& config, std::uint32_t root) {
  if (config.bits.size() != ball.num_edges()) throw ContractViolation("config length differs from |E|");
  if (root >= ball.num_vertices()) throw ContractViolation("root out of range");
  std::vector<char> seen(ball.num_vertices(), 0);
  std::vector<char> edge_seen(ball.num_edges(), 0);
  ClusterResult out;
  out.members.push_back(root);
  seen[root] = 1;
  for (std::size_t head = 0; head < out.members.size(); ++head) {
    const std::uint32_t u = out.members[head];
    for (std::uint32_t e : ball.incident(u)) {
      if (!config.bits[e]) continue;
      if (!edge_seen[e]) {
        edge_seen[e] = 1;
        out.open_edges.push_back(e);
      }
      const Edge& edge = ball.edge(e);
      const std::uint32_t w = edge.u == u ? edge.v : edge.u;
      if (!seen[w]) {
        seen[w] = 1;
        out.members.push_back(w);
      }
    }
  }
  std::sort(out.members.begin(), out.members.end());
  std::sort(out.open_edges.begin(), out.open_edges.end());
  out.size = out.members.size();
  return out;
}

ClusterResult cluster_of_origin(const GraphBall& ball, const EdgeConfig& config) {
  return cluster_of_vertex(ball, config, ball.origin());
}

double ghost_avoidance_weight(std::size_t size, double h) {
  if (size < 1) throw ContractViolation("cluster size must be >= 1");
  if (!(h >= 0.0)) throw std::invalid_argument("h must be nonnegative");
  if (std::isinf(h)) return 0.0;
  return std::exp(-h * static_cast<double>(size));
}

// ---- keys --------------------------------------------------------------------------------

namespace {

constexpr int kPackBits = 21;
constexpr std::int64_t kPackBias = std::int64_t{1} << 20;
constexpr std::uint64_t kTreeRootKey = 0x74726565726f6f74ULL;

std::uint64_t pack(const Coord& c) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    key |= static_cast<std::uint64_t>(c[i] + kPackBias) << (kPackBits * static_cast<int>(i));
  }
  return key;
}

constexpr std::uint64_t tree_child_key(std::uint64_t parent, std::uint64_t child) {
  return mix64(parent ^ ((child + 1) * 0xd1b54a32d192ed03ULL));
}

constexpr std::uint64_t tree_edge_key(std::uint64_t child_key) { return mix64(child_key ^ 0xa0761d6478bd642fULL); }

constexpr std::uint64_t packed_edge_key(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t lo = std::min(a, b);
  const std::uint64_t hi = std::max(a, b);
  return mix64(mix64(lo) + hi);
}

void check_cap(std::size_t cap) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (cap > kMaxLazyCap) {
    throw CapExceeded("cap " + std::to_string(cap) + " exceeds the lazy-growth budget of " +
                      std::to_string(kMaxLazyCap));
  }
}

}  // namespace

std::uint64_t vertex_key(const LatticeSpec& spec, const Coord& c) {
  if (spec.family != LatticeFamily::regular_tree) return pack(c);
  std::uint64_t key = kTreeRootKey;
  for (auto step : c) key = tree_child_key(key, static_cast<std::uint64_t>(step));
  return key;
}

std::uint64_t edge_key(const LatticeSpec& spec, const Coord& a, const Coord& b) {
  if (spec.family != LatticeFamily::regular_tree) return packed_edge_key(pack(a), pack(b));
  return tree_edge_key(vertex_key(spec, a.size() > b.size() ? a : b));
}

// ---- generic growth ----------------------------------------------------------------------

namespace {

template <class Source>
LazyCluster grow_generic(const LatticeSpec& spec, Source& source, std::size_t cap) {
  spec.validate();
  check_cap(cap);
  LazyCluster out;
  std::set<Coord> seen;
  Coord origin = lattice_origin(spec);
  seen.insert(origin);
  out.members.push_back(std::move(origin));
  if (cap <= 1) {
    out.size = 1;
    out.truncated = true;
    return out;
  }
  for (std::size_t head = 0; head < out.members.size(); ++head) {
    const Coord u = out.members[head];
    for (auto& w : lazy_neighbors(spec, u)) {
      if (seen.contains(w)) continue;
      if (!source.open(edge_key(spec, u, w))) continue;
      seen.insert(w);
      out.members.push_back(std::move(w));
      if (out.members.size() >= cap) {
        out.size = out.members.size();
        out.truncated = true;
        return out;
      }
    }
  }
  out.size = out.members.size();
  return out;
}

}  // namespace

LazyCluster lazy_cluster(const LatticeSpec& spec, double p, std::size_t cap, std::uint64_t seed) {
  Params{p, 0.0}.validate();
  SequentialEdges source{Rng(seed), p};
  return grow_generic(spec, source, cap);
}

LazyCluster lazy_cluster_keyed(const LatticeSpec& spec, const KeyedEdges& source, std::size_t cap) {
  KeyedEdges copy = source;
  return grow_generic(spec, copy, cap);
}

EdgeConfig keyed_config(const GraphBall& ball, const KeyedEdges& source) {
  EdgeConfig out{BitVector(ball.num_edges())};
  for (std::uint32_t e = 0; e < ball.num_edges(); ++e) {
    const Edge& edge = ball.edge(e);
    out.bits.set(e, source.open(edge_key(ball.spec(), ball.coord(edge.u), ball.coord(edge.v))));
  }
  return out;
}

// ---- fast grower -------------------------------------------------------------------------

LazyGrower::LazyGrower(LatticeSpec spec) : spec_(spec) {
  spec_.validate();
  if (spec_.family == LatticeFamily::hypercubic) {
    for (int axis = 0; axis < spec_.dim; ++axis) {
      const std::int64_t unit = std::int64_t{1} << (kPackBits * axis);
      offsets_.push_back(unit);
      offsets_.push_back(-unit);
    }
  } else if (spec_.family == LatticeFamily::triangular) {
    const std::int64_t x = 1;
    const std::int64_t y = std::int64_t{1} << kPackBits;
    offsets_ = {x, -x, y, -y, x - y, y - x};
  }
}

void LazyGrower::reset_table(std::size_t cap) {
  const std::size_t want = std::bit_ceil(std::max<std::size_t>(64, 4 * cap));
  if (table_.size() < want) {
    table_.assign(want, 0);
    used_.clear();
  } else {
    for (auto slot : used_) table_[slot] = 0;
    used_.clear();
  }
  mask_ = table_.size() - 1;
}

bool LazyGrower::insert(std::uint64_t key) {
  std::size_t slot = static_cast<std::size_t>(mix64(key) & mask_);
  while (table_[slot] != 0) {
    if (table_[slot] == key) return false;
    slot = (slot + 1) & mask_;
  }
  table_[slot] = key;
  used_.push_back(slot);
  return true;
}

template <class Source>
ClusterSize LazyGrower::grow_packed(Source& source, std::size_t cap) {
  reset_table(cap);
  queue_.clear();
  const std::uint64_t origin = pack(lattice_origin(spec_));
  insert(origin);
  queue_.push_back(origin);
  auto contains = [&](std::uint64_t key) {
    std::size_t slot = static_cast<std::size_t>(mix64(key) & mask_);
    while (table_[slot] != 0) {
      if (table_[slot] == key) return true;
      slot = (slot + 1) & mask_;
    }
    return false;
  };
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const std::uint64_t u = queue_[head];
    for (std::int64_t off : offsets_) {
      const std::uint64_t w = u + static_cast<std::uint64_t>(off);
      if (contains(w)) continue;
      if (!source.open(packed_edge_key(u, w))) continue;
      insert(w);
      queue_.push_back(w);
      if (queue_.size() >= cap) return {queue_.size(), true};
    }
  }
  return {queue_.size(), false};
}

template <class Source>
ClusterSize LazyGrower::grow_tree(Source& source, std::size_t cap) {
  queue_.clear();
  queue_.push_back(kTreeRootKey);
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const std::uint64_t u = queue_[head];
    const int children = head == 0 ? spec_.tree_degree : spec_.tree_degree - 1;
    for (int c = 0; c < children; ++c) {
      const std::uint64_t w = tree_child_key(u, static_cast<std::uint64_t>(c));
      if (!source.open(tree_edge_key(w))) continue;
      queue_.push_back(w);
      if (queue_.size() >= cap) return {queue_.size(), true};
    }
  }
  return {queue_.size(), false};
}

template <class Source>
ClusterSize LazyGrower::grow_impl(Source& source, std::size_t cap) {
  check_cap(cap);
  if (cap == 1) return {1, true};
  if (spec_.family == LatticeFamily::regular_tree) return grow_tree(source, cap);
  return grow_packed(source, cap);
}

ClusterSize LazyGrower::grow(SequentialEdges& source, std::size_t cap) { return grow_impl(source, cap); }

ClusterSize LazyGrower::grow(const KeyedEdges& source, std::size_t cap) {
  KeyedEdges copy = source;
  return grow_impl(copy, cap);
}

}  // namespace percolab
