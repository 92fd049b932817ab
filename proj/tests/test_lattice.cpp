#include <doctest.h>

#include <algorithm>
#include <set>

#include "percolab/lattice.hpp"

using namespace percolab;

TEST_CASE("ball sizes") {
  SUBCASE("line of radius 1") {
    const auto b = build_ball(LatticeSpec::hypercubic(1), 1);
    CHECK(b.num_vertices() == 3);
    CHECK(b.num_edges() == 2);
  }
  SUBCASE("square lattice radius 1 is a plus sign") {
    const auto b = build_ball(LatticeSpec::hypercubic(2), 1);
    CHECK(b.num_vertices() == 5);
    CHECK(b.num_edges() == 4);
  }
  SUBCASE("ternary tree radius 2") {
    const auto b = build_ball(LatticeSpec::regular_tree(3), 2);
    CHECK(b.num_vertices() == 10);
    CHECK(b.num_edges() == 9);
  }
  SUBCASE("square lattice radius 2") {
    const auto b = build_ball(LatticeSpec::hypercubic(2), 2);
    CHECK(b.num_vertices() == 13);
    CHECK(b.num_edges() == 16);
  }
  SUBCASE("radius 0") {
    const auto b = build_ball(LatticeSpec::hypercubic(3), 0);
    CHECK(b.num_vertices() == 1);
    CHECK(b.num_edges() == 0);
  }
  SUBCASE("triangular radius 1") {
    const auto b = build_ball(LatticeSpec::triangular(), 1);
    CHECK(b.num_vertices() == 7);
    CHECK(b.num_edges() == 12);
  }
}

TEST_CASE("ball layout is canonical") {
  const auto b = build_ball(LatticeSpec::hypercubic(2), 2);
  CHECK(b.origin() == 0);
  for (std::uint32_t v = 1; v < b.num_vertices(); ++v) {
    CHECK(std::pair(b.distances()[v - 1], b.coord(v - 1)) < std::pair(b.distances()[v], b.coord(v)));
  }
  for (std::uint32_t v = 0; v < b.num_vertices(); ++v) CHECK(b.find(b.coord(v)) == static_cast<std::int64_t>(v));
  for (const auto& e : b.edges()) CHECK(e.u < e.v);
  CHECK(std::is_sorted(b.edges().begin(), b.edges().end(),
                       [](const Edge& a, const Edge& c) { return std::pair(a.u, a.v) < std::pair(c.u, c.v); }));
  CHECK(b.coord(b.origin()) == Coord{0, 0});
  CHECK(b.find(Coord{1, 1}) >= 0);
  CHECK(b.find(Coord{2, 1}) == -1);
}

TEST_CASE("every ball is interior transitive") {
  for (const auto* name : {"z1", "z2", "z3", "tri", "tree3", "tree4"}) {
    const auto spec = LatticeSpec::parse(name);
    for (int n = 0; n <= 3; ++n) {
      CAPTURE(name);
      CAPTURE(n);
      CHECK(interior_is_transitive(build_ball(spec, n)));
    }
  }
}

TEST_CASE("lazy neighbours") {
  CHECK(lazy_neighbors(LatticeSpec::hypercubic(2), {0, 0}) ==
        std::vector<Coord>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(lazy_neighbors(LatticeSpec::regular_tree(3), lattice_origin(LatticeSpec::regular_tree(3))).size() == 3);
  const auto tri = lazy_neighbors(LatticeSpec::triangular(), {0, 0});
  CHECK(tri.size() == 6);
  CHECK(std::set<Coord>(tri.begin(), tri.end()).size() == 6);
  // Every neighbour relation is symmetric.
  for (const auto* name : {"z2", "z3", "tri", "tree3"}) {
    const auto spec = LatticeSpec::parse(name);
    const auto start = lattice_origin(spec);
    for (const auto& w : lazy_neighbors(spec, start)) {
      for (const auto& x : lazy_neighbors(spec, w)) {
        const auto back = lazy_neighbors(spec, x);
        CHECK(std::find(back.begin(), back.end(), w) != back.end());
      }
      CHECK(static_cast<int>(lazy_neighbors(spec, w).size()) == spec.degree());
    }
  }
}

TEST_CASE("lattice names") {
  CHECK(LatticeSpec::parse("z2") == LatticeSpec::hypercubic(2));
  CHECK(LatticeSpec::parse("tree3") == LatticeSpec::regular_tree(3));
  CHECK(LatticeSpec::parse("tri").name() == "tri");
  CHECK(LatticeSpec::parse("tree3").degree() == 3);
  CHECK(LatticeSpec::parse("tri").degree() == 6);
  CHECK_THROWS_AS((void)LatticeSpec::parse("z9"), std::invalid_argument);
  CHECK_THROWS_AS((void)LatticeSpec::parse("tree1"), std::invalid_argument);
  CHECK_THROWS_AS((void)LatticeSpec::parse("hex"), std::invalid_argument);
}

TEST_CASE("ball budget") {
  CHECK_THROWS_AS((void)build_ball(LatticeSpec::hypercubic(2), 10, 50), CapExceeded);
  CHECK_THROWS_AS((void)build_ball(LatticeSpec::hypercubic(2), -1), std::invalid_argument);
}

TEST_CASE("induced single-edge fixture") {
  const auto line = build_ball(LatticeSpec::hypercubic(1), 1);
  const auto one = induced_subgraph(line, {line.origin(), static_cast<std::uint32_t>(line.find({1}))});
  CHECK(one.num_vertices() == 2);
  CHECK(one.num_edges() == 1);
  CHECK(one.coord(one.origin()) == Coord{0});
  CHECK_FALSE(one.is_full_ball());
  CHECK_THROWS((void)induced_subgraph(line, {static_cast<std::uint32_t>(line.find({1}))}));
}
