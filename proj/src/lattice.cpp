#include "percolab/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <numeric>

namespace percolab {

LatticeSpec LatticeSpec::hypercubic(int d) {
  LatticeSpec s;
  s.family = LatticeFamily::hypercubic;
  s.dim = d;
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::triangular() {
  LatticeSpec s;
  s.family = LatticeFamily::triangular;
  s.dim = 2;
  return s;
}

LatticeSpec LatticeSpec::regular_tree(int degree) {
  LatticeSpec s;
  s.family = LatticeFamily::regular_tree;
  s.tree_degree = degree;
  s.validate();
  return s;
}

LatticeSpec LatticeSpec::parse(std::string_view name) {
  auto tail_int = [&](std::string_view tail) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
    if (ec != std::errc{} || ptr != tail.data() + tail.size()) {
      throw std::invalid_argument("unknown lattice: " + std::string(name));
    }
    return value;
  };
  if (name == "tri") return triangular();
  if (name.starts_with("tree")) return regular_tree(tail_int(name.substr(4)));
  if (name.starts_with("z")) return hypercubic(tail_int(name.substr(1)));
  throw std::invalid_argument("unknown lattice: " + std::string(name));
}

std::string LatticeSpec::name() const {
  switch (family) {
    case LatticeFamily::hypercubic: return "z" + std::to_string(dim);
    case LatticeFamily::triangular: return "tri";
    case LatticeFamily::regular_tree: return "tree" + std::to_string(tree_degree);
  }
  return "?";
}

int LatticeSpec::degree() const {
  switch (family) {
    case LatticeFamily::hypercubic: return 2 * dim;
    case LatticeFamily::triangular: return 6;
    case LatticeFamily::regular_tree: return tree_degree;
  }
  return 0;
}

void LatticeSpec::validate() const {
  if (family == LatticeFamily::hypercubic && (dim < 1 || dim > 3)) {
    // Packed coordinates in the lazy grower hold at most three axes.
    throw std::invalid_argument("hypercubic dimension must be in [1, 3]");
  }
  if (family == LatticeFamily::regular_tree && tree_degree < 2) {
    throw std::invalid_argument("regular tree degree must be >= 2");
  }
}

Coord lattice_origin(const LatticeSpec& spec) {
  switch (spec.family) {
    case LatticeFamily::hypercubic: return Coord(static_cast<std::size_t>(spec.dim), 0);
    case LatticeFamily::triangular: return Coord{0, 0};
    case LatticeFamily::regular_tree: return Coord{};
  }
  return {};
}

namespace {

constexpr std::int32_t kTriOffsets[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};

}  // namespace

std::vector<Coord> lazy_neighbors(const LatticeSpec& spec, const Coord& v) {
  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(spec.degree()));
  switch (spec.family) {
    case LatticeFamily::hypercubic:
      for (std::size_t axis = 0; axis < v.size(); ++axis) {
        for (int sign : {1, -1}) {
          Coord w = v;
          w[axis] += sign;
          out.push_back(std::move(w));
        }
      }
      break;
    case LatticeFamily::triangular:
      for (const auto& off : kTriOffsets) out.push_back(Coord{v[0] + off[0], v[1] + off[1]});
      break;
    case LatticeFamily::regular_tree: {
      if (!v.empty()) out.emplace_back(v.begin(), v.end() - 1);
      const int children = v.empty() ? spec.tree_degree : spec.tree_degree - 1;
      for (int c = 0; c < children; ++c) {
        Coord w = v;
        w.push_back(c);
        out.push_back(std::move(w));
      }
      break;
    }
  }
  return out;
}

void GraphBall::index_incidence() {
  incident_.assign(coords_.size(), {});
  for (std::uint32_t e = 0; e < edges_.size(); ++e) {
    incident_[edges_[e].u].push_back(e);
    incident_[edges_[e].v].push_back(e);
  }
}

void GraphBall::index_coords() {
  by_coord_.resize(coords_.size());
  std::iota(by_coord_.begin(), by_coord_.end(), 0U);
  std::sort(by_coord_.begin(), by_coord_.end(),
            [this](std::uint32_t a, std::uint32_t b) { return coords_[a] < coords_[b]; });
}

std::int64_t GraphBall::find(const Coord& c) const {
  auto it = std::lower_bound(by_coord_.begin(), by_coord_.end(), c,
                             [this](std::uint32_t v, const Coord& key) { return coords_[v] < key; });
  if (it == by_coord_.end() || coords_[*it] != c) return -1;
  return *it;
}

GraphBall build_ball(const LatticeSpec& spec, int radius, std::size_t max_edges) {
  spec.validate();
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");

  std::map<Coord, int> dist;
  std::deque<Coord> frontier;
  const Coord o = lattice_origin(spec);
  dist.emplace(o, 0);
  frontier.push_back(o);
  while (!frontier.empty()) {
    Coord v = std::move(frontier.front());
    frontier.pop_front();
    const int dv = dist.at(v);
    if (dv == radius) continue;
    for (auto& w : lazy_neighbors(spec, v)) {
      if (dist.emplace(w, dv + 1).second) {
        // A connected ball has at least |V|-1 edges.
        if (dist.size() > max_edges + 1) {
          throw CapExceeded("ball " + spec.name() + " radius " + std::to_string(radius) +
                            " exceeds the edge budget");
        }
        frontier.push_back(std::move(w));
      }
    }
  }

  GraphBall ball;
  ball.spec_ = spec;
  ball.radius_ = radius;
  ball.coords_.reserve(dist.size());
  ball.dist_.reserve(dist.size());
  // Nearer vertices first, so the edges at the origin carry the smallest indices.
  std::vector<std::pair<int, Coord>> order;
  order.reserve(dist.size());
  for (const auto& [c, d] : dist) order.emplace_back(d, c);
  std::sort(order.begin(), order.end());
  for (auto& [d, c] : order) {
    ball.coords_.push_back(std::move(c));
    ball.dist_.push_back(d);
  }
  ball.index_coords();
  ball.origin_ = static_cast<std::uint32_t>(ball.find(o));

  for (std::uint32_t i = 0; i < ball.coords_.size(); ++i) {
    for (const auto& w : lazy_neighbors(spec, ball.coords_[i])) {
      const std::int64_t j = ball.find(w);
      if (j > static_cast<std::int64_t>(i)) {
        ball.edges_.push_back({i, static_cast<std::uint32_t>(j)});
      }
    }
    if (ball.edges_.size() > max_edges) {
      throw CapExceeded("ball " + spec.name() + " radius " + std::to_string(radius) +
                        " exceeds the edge budget");
    }
  }
  std::sort(ball.edges_.begin(), ball.edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  ball.index_incidence();
  return ball;
}

GraphBall induced_subgraph(const GraphBall& ball, const std::vector<std::uint32_t>& keep) {
  std::vector<std::uint32_t> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!std::binary_search(sorted.begin(), sorted.end(), ball.origin())) {
    throw ContractViolation("induced sub-graph must contain the origin");
  }
  std::vector<std::int64_t> remap(ball.num_vertices(), -1);
  GraphBall out;
  out.spec_ = ball.spec_;
  out.radius_ = ball.radius_;
  out.full_ball_ = false;
  for (std::uint32_t v : sorted) {
    if (v >= ball.num_vertices()) throw ContractViolation("vertex index out of range");
    remap[v] = static_cast<std::int64_t>(out.coords_.size());
    out.coords_.push_back(ball.coords_[v]);
    out.dist_.push_back(ball.dist_[v]);
  }
  out.index_coords();
  out.origin_ = static_cast<std::uint32_t>(remap[ball.origin()]);
  for (const Edge& e : ball.edges_) {
    if (remap[e.u] >= 0 && remap[e.v] >= 0) {
      out.edges_.push_back({static_cast<std::uint32_t>(remap[e.u]), static_cast<std::uint32_t>(remap[e.v])});
    }
  }
  out.index_incidence();
  return out;
}

bool interior_is_transitive(const GraphBall& ball) {
  const auto degree = static_cast<std::size_t>(ball.spec().degree());
  for (std::uint32_t v = 0; v < ball.num_vertices(); ++v) {
    if (ball.distances()[v] < ball.radius() && ball.incident(v).size() != degree) return false;
  }
  return true;
}

}  // namespace percolab
