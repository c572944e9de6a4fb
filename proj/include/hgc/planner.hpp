#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hgc/errors.hpp"
#include "hgc/geometry.hpp"

namespace hgc {

// A set of closed loops over dense SLoI indices. Each loop is implicitly
// closed (last element adjacent to first). A finished plan has exactly one
// loop; intermediate planner states may hold several.
struct PathCycle {
  std::vector<std::vector<int>> loops;

  bool single() const { return loops.size() == 1; }
  const std::vector<int>& sequence() const;  // requires single()
  std::size_t node_count() const;
  bool contains(int node) const;
};

struct CycleReport {
  int visited_count = 0;
  double total_length = 0.0;      // sum of hops including the closing edge(s)
  std::vector<int> unvisited;     // dense SLoI indices not on any loop
  int cycle_count = 0;
  bool valid = false;             // structural checks passed
  std::vector<std::string> problems;
};

// Planning failure that still carries the structural report (partial
// coverage, unmergeable cycles, no seed cycle).
class PlanningError : public Error {
 public:
  PlanningError(const std::string& msg, CycleReport report)
      : Error(msg), report(std::move(report)) {}
  CycleReport report;
};

// Builds the coverage cycle: seeds loops over full ACCs with the coarse-cell
// edge rules, combines disjoint loops, then absorbs leftover SLoIs with V/Z
// modifications to a fixpoint. Returns a single closed cycle whose first
// element is the SLoI nearest to `start` (ties: lowest index).
PathCycle gen_coverage_path_cycle(const SLoISet& slois, const ACCGrid& acc,
                                  const TriangularGraph& graph, const Point2& start);

// Inserts unvisited SLoI u between the adjacent cycle pair (a,b).
// Preconditions: (a,b) is an edge of the path, u is adjacent to both.
PathCycle v_modification(const PathCycle& path, int u, std::pair<int, int> pair,
                         const TriangularGraph& graph);

// The four SLoIs of a Z pattern: existing path edge (a,c); u and partner are
// unvisited, with u adjacent to a, partner adjacent to c, and u adjacent to
// partner. The edge (a,c) is replaced by the zigzag a-u-partner-c.
struct ZPattern {
  int u = -1;
  int partner = -1;
  int a = -1;
  int c = -1;
};

PathCycle z_modification(const PathCycle& path, const ZPattern& z, const TriangularGraph& graph);

// Merges loops pairwise wherever two loops run along lattice-parallel edges
// (u1,u2) / (v1,v2) with u1~v1 and u2~v2, repeating until one loop remains.
// Throws PlanningError when several loops remain but no such pair exists.
PathCycle combine_cycles(const PathCycle& path, const SLoISet& slois,
                         const TriangularGraph& graph);

CycleReport validate_cycle(const PathCycle& path, const SLoISet& slois,
                           const TriangularGraph& graph);

double cycle_length(const PathCycle& path, const SLoISet& slois);

}  // namespace hgc
