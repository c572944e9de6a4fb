#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>

#include "corpus.hpp"
#include "hgc/errors.hpp"
#include "hgc/geometry.hpp"
#include "hgc/planner.hpp"
#include "oracles.hpp"

using namespace hgc;

namespace {

const double kSqrt3 = std::sqrt(3.0);

struct Instance {
  Polygon poly;
  HexGrid grid;
  SLoISet slois;
  ACCGrid acc;
  TriangularGraph graph;
};

Instance make_instance(const std::vector<Point2>& ring, double l, Point2 offset = {0, 0}) {
  Polygon poly(ring);
  HexGrid grid(poly, l, offset);
  SLoISet slois = select_slois(grid, poly);
  ACCGrid acc = acc_decompose(grid, slois);
  TriangularGraph graph = build_adjacency(slois, grid);
  return {std::move(poly), std::move(grid), std::move(slois), std::move(acc), std::move(graph)};
}

std::vector<Point2> positions(const SLoISet& s) {
  std::vector<Point2> out;
  for (const SLoI& x : s.items()) out.push_back(x.pos);
  return out;
}

// A w-cells-wide, h-cells-tall block aligned with the coarse 2x2 grid: the
// anchor is shifted one pitch left so the block's first column is even.
Instance aligned_block(int w_cells, int h_cells, double l) {
  const double p = kSqrt3 * l;
  const double w = (w_cells - 1) * p + 0.7 * p;
  const double h = (h_cells - 1) * 1.5 * l + 0.5 * l;
  return make_instance(corpus::rect_ring(w, h), l, {-p, 0.0});
}

}  // namespace

TEST_CASE("one full ACC plans as a 4-cycle of length 4*sqrt(3)*l") {
  const double l = 2.0;
  Instance in = aligned_block(2, 2, l);
  REQUIRE(in.slois.size() == 4);
  REQUIRE(in.acc.full_count() == 1);

  const PathCycle pc = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0, 0});
  REQUIRE(pc.single());
  const auto check = oracle::check_cycle(pc.sequence(), positions(in.slois), in.grid.spacing());
  CHECK(check.closed_degree_two);
  CHECK(check.visits_all);
  CHECK(check.edges_on_lattice);
  CHECK(static_cast<double>(check.length) == doctest::Approx(4.0 * kSqrt3 * l).epsilon(1e-12));

  const CycleReport rep = validate_cycle(pc, in.slois, in.graph);
  CHECK(rep.valid);
  CHECK(rep.cycle_count == 1);
  CHECK(rep.visited_count == 4);
  CHECK(rep.unvisited.empty());
  CHECK(rep.total_length == doctest::Approx(4.0 * kSqrt3 * l).epsilon(1e-12));
}

TEST_CASE("aligned 4x4 block is a Hamiltonian lattice cycle") {
  const double l = 1.0;
  Instance in = aligned_block(4, 4, l);
  REQUIRE(in.slois.size() == 16);
  REQUIRE(in.acc.full_count() == 4);

  const PathCycle pc = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0, 0});
  REQUIRE(pc.single());
  const auto check = oracle::check_cycle(pc.sequence(), positions(in.slois), in.grid.spacing());
  CHECK(check.closed_degree_two);
  CHECK(check.visits_all);
  CHECK(check.edges_on_lattice);
  CHECK(static_cast<double>(check.length) == doctest::Approx(16.0 * kSqrt3 * l).epsilon(1e-12));
}

TEST_CASE("start snapping: sequence begins at the SLoI nearest the start point") {
  Instance in = aligned_block(4, 4, 1.0);
  const PathCycle pc = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0.1, 0.2});
  int nearest = 0;
  double best = 1e30;
  for (int i = 0; i < in.slois.size(); ++i) {
    const double d = dist(in.slois[i].pos, {0.1, 0.2});
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  CHECK(pc.sequence().front() == nearest);

  // planner output is deterministic
  const PathCycle pc2 = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0.1, 0.2});
  CHECK(pc.loops == pc2.loops);
}

TEST_CASE("unaligned rectangle: V/Z fixpoint absorbs the boundary strips") {
  const double l = 1.5;
  Instance in = make_instance(corpus::rect_ring(20, 16), l);
  REQUIRE(in.slois.size() > 40);

  const PathCycle pc = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0, 0});
  REQUIRE(pc.single());
  const auto check = oracle::check_cycle(pc.sequence(), positions(in.slois), in.grid.spacing());
  CHECK(check.closed_degree_two);
  CHECK(check.visits_all);
  CHECK(check.edges_on_lattice);
}

TEST_CASE("small L-shape: full coverage, single cycle") {
  Instance in = make_instance(corpus::l_ring(12, 10, 5, 4), 1.2);
  REQUIRE(in.slois.size() >= 10);
  REQUIRE(in.slois.size() <= 40);

  const PathCycle pc = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0, 0});
  REQUIRE(pc.single());
  const auto check = oracle::check_cycle(pc.sequence(), positions(in.slois), in.grid.spacing());
  CHECK(check.closed_degree_two);
  CHECK(check.visits_all);
  CHECK(check.edges_on_lattice);
}

TEST_CASE("V modification inserts a node into an adjacent path edge") {
  const double l = 2.0;
  const double p = kSqrt3 * l;
  // full ACC plus one extra cell to the right of its bottom row
  Instance in = make_instance(corpus::rect_ring(2.3 * p, 2.0 * l), l, {-p, 0.0});
  REQUIRE(in.slois.size() == 5);
  // row-major: 0,1,2 on the bottom row; 3,4 on the top row
  const PathCycle seed{{{0, 3, 4, 1}}};
  REQUIRE(validate_cycle(seed, in.slois, in.graph).problems.empty());

  const PathCycle grown = v_modification(seed, 2, {1, 4}, in.graph);
  REQUIRE(grown.single());
  const auto check = oracle::check_cycle(grown.sequence(), positions(in.slois), in.grid.spacing());
  CHECK(check.closed_degree_two);
  CHECK(check.visits_all);
  CHECK(check.edges_on_lattice);
  CHECK(cycle_length(grown, in.slois) ==
        doctest::Approx(cycle_length(seed, in.slois) + kSqrt3 * l).epsilon(1e-12));

  CHECK_THROWS_AS(v_modification(seed, 2, {0, 3}, in.graph), ValidationError);   // not adjacent
  CHECK_THROWS_AS(v_modification(seed, 2, {0, 4}, in.graph), ValidationError);   // not a path edge
  CHECK_THROWS_AS(v_modification(grown, 2, {1, 4}, in.graph), ValidationError);  // already visited
}

TEST_CASE("Z modification replaces a path edge with a zigzag over two new nodes") {
  const double l = 2.0;
  const double p = kSqrt3 * l;
  // full ACC plus a vertical pair of cells to its right
  Instance in = make_instance(corpus::rect_ring(2.7 * p, 2.0 * l), l, {-p, 0.0});
  REQUIRE(in.slois.size() == 6);
  // row-major: bottom row 0,1,2; top row 3,4,5; full ACC = {0,1,3,4}
  const PathCycle seed{{{0, 3, 4, 1}}};
  REQUIRE(validate_cycle(seed, in.slois, in.graph).problems.empty());

  const double before = cycle_length(seed, in.slois);
  SUBCASE("one orientation") {
    const PathCycle grown = z_modification(seed, {2, 5, 1, 4}, in.graph);
    REQUIRE(grown.single());
    const auto check = oracle::check_cycle(grown.sequence(), positions(in.slois), in.grid.spacing());
    CHECK(check.closed_degree_two);
    CHECK(check.visits_all);
    CHECK(check.edges_on_lattice);
    CHECK(cycle_length(grown, in.slois) == doctest::Approx(before + 2.0 * kSqrt3 * l).epsilon(1e-12));
  }
  SUBCASE("mirrored orientation") {
    const PathCycle grown = z_modification(seed, {5, 2, 4, 1}, in.graph);
    REQUIRE(grown.single());
    const auto check = oracle::check_cycle(grown.sequence(), positions(in.slois), in.grid.spacing());
    CHECK(check.visits_all);
    CHECK(check.edges_on_lattice);
  }
  SUBCASE("bad patterns throw") {
    CHECK_THROWS_AS(z_modification(seed, {2, 5, 0, 4}, in.graph), ValidationError);  // a not adjacent to u
    CHECK_THROWS_AS(z_modification(seed, {2, 5, 1, 3}, in.graph), ValidationError);  // (a,c) not a path edge
    CHECK_THROWS_AS(z_modification(seed, {0, 5, 1, 4}, in.graph), ValidationError);  // u already on path
  }
}

TEST_CASE("combine_cycles splices two loops at a parallel edge pair") {
  Instance in = aligned_block(4, 2, 1.0);
  REQUIRE(in.slois.size() == 8);
  // two 2x2 loops built by hand: {0,1,4,5} and {2,3,6,7}
  const PathCycle two{{{0, 4, 5, 1}, {2, 6, 7, 3}}};
  const CycleReport rep = validate_cycle(two, in.slois, in.graph);
  CHECK(rep.cycle_count == 2);
  CHECK(rep.problems.empty());

  const PathCycle one = combine_cycles(two, in.slois, in.graph);
  REQUIRE(one.single());
  const auto check = oracle::check_cycle(one.sequence(), positions(in.slois), in.grid.spacing());
  CHECK(check.closed_degree_two);
  CHECK(check.visits_all);
  CHECK(check.edges_on_lattice);
  // the swap preserves total length on the lattice
  CHECK(cycle_length(one, in.slois) == doctest::Approx(cycle_length(two, in.slois)).epsilon(1e-12));
}

TEST_CASE("disjoint regions cannot be combined and the planner reports it") {
  const double l = 1.0;
  const double p = kSqrt3 * l;
  const std::vector<Point2> dumbbell = {
      {0, 0},           {1.7 * p, 0},       {1.7 * p, 0.9 * l}, {6 * p, 0.9 * l},
      {6 * p, 0},       {7.7 * p, 0},       {7.7 * p, 2 * l},   {6 * p, 2 * l},
      {6 * p, 1.1 * l}, {1.7 * p, 1.1 * l}, {1.7 * p, 2 * l},   {0, 2 * l}};
  Instance in = make_instance(dumbbell, l, {-p, 0.0});
  REQUIRE(in.slois.size() == 8);
  REQUIRE(in.acc.full_count() == 2);

  try {
    gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0, 0});
    FAIL("expected PlanningError");
  } catch (const PlanningError& e) {
    CHECK(e.report.cycle_count == 2);
    CHECK(e.report.visited_count == 8);
  }

  const PathCycle two{{{0, 4, 5, 1}, {2, 6, 7, 3}}};
  CHECK_THROWS_AS(combine_cycles(two, in.slois, in.graph), PlanningError);
}

TEST_CASE("degenerate inputs: too few SLoIs, no seed ACC") {
  const double l = 2.0;
  const double p = kSqrt3 * l;
  // two cells only
  Instance two = make_instance(corpus::rect_ring(1.2 * p, 0.5 * l), l);
  REQUIRE(two.slois.size() == 2);
  CHECK_THROWS_AS(gen_coverage_path_cycle(two.slois, two.acc, two.graph, {0, 0}), PlanningError);

  // four cells spread over two ACCs: no full ACC, nothing seeds the cycle
  Instance split = make_instance(corpus::rect_ring(1.55 * p, 2.0 * l), l);
  REQUIRE(split.slois.size() == 4);
  REQUIRE(split.acc.full_count() == 0);
  try {
    gen_coverage_path_cycle(split.slois, split.acc, split.graph, {0, 0});
    FAIL("expected PlanningError");
  } catch (const PlanningError& e) {
    CHECK(e.report.cycle_count == 0);
    CHECK(static_cast<int>(e.report.unvisited.size()) == 4);
  }
}

TEST_CASE("validate_cycle flags repeated nodes and foreign hops") {
  Instance in = aligned_block(2, 2, 1.0);
  const PathCycle bad{{{0, 1, 0, 2}}};
  const CycleReport rep = validate_cycle(bad, in.slois, in.graph);
  CHECK_FALSE(rep.valid);
  bool saw_repeat = false;
  for (const std::string& p : rep.problems) {
    if (p.find("repeated") != std::string::npos) saw_repeat = true;
  }
  CHECK(saw_repeat);
}

TEST_CASE("small instances match the exhaustive TSP optimum") {
  const double l = 1.0;
  for (int w : {2, 3, 4}) {
    Instance in = aligned_block(w, 2, l);
    if (in.slois.size() > 10) continue;
    const PathCycle pc = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0, 0});
    const double planned = cycle_length(pc, in.slois);
    const double optimum = oracle::brute_force_tsp(positions(in.slois));
    CHECK(planned == doctest::Approx(optimum).epsilon(1e-12));
  }
}

TEST_CASE("medium rectangle plans quickly and fully") {
  Instance in = make_instance(corpus::rect_ring(30, 18), 1.0);
  REQUIRE(in.slois.size() > 150);
  const auto t0 = std::chrono::steady_clock::now();
  const PathCycle pc = gen_coverage_path_cycle(in.slois, in.acc, in.graph, {0, 0});
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(pc.single());
  const CycleReport rep = validate_cycle(pc, in.slois, in.graph);
  CHECK(rep.valid);
  CHECK(rep.unvisited.empty());
  CHECK(ms < 1000.0);
}
