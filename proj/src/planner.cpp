#include "hgc/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace hgc {

namespace {

// ACC slot labels, matching the 2x2 block layout.
constexpr int kBL = 0;  // bottom-left
constexpr int kBR = 1;  // bottom-right
constexpr int kTL = 2;  // top-left
constexpr int kTR = 3;  // top-right

std::uint64_t ekey(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
}

// Plain undirected edge set used while the coarse-cell rules run; nodes hold
// at most two incident edges throughout (the rules guarantee it).
class EdgeSet {
 public:
  explicit EdgeSet(int n) : adj_(static_cast<std::size_t>(n)) {}

  void add(int u, int v) {
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
  }

  void remove(int u, int v) {
    auto drop = [](std::vector<int>& list, int x) {
      const auto it = std::find(list.begin(), list.end(), x);
      if (it == list.end()) throw Error("internal: removing a rule edge that is not present");
      list.erase(it);
    };
    drop(adj_[static_cast<std::size_t>(u)], v);
    drop(adj_[static_cast<std::size_t>(v)], u);
  }

  const std::vector<int>& at(int u) const { return adj_[static_cast<std::size_t>(u)]; }
  std::size_t size() const { return adj_.size(); }

 private:
  std::vector<std::vector<int>> adj_;
};

std::vector<std::vector<int>> extract_loops(const EdgeSet& es) {
  const int n = static_cast<int>(es.size());
  for (int u = 0; u < n; ++u) {
    const std::size_t d = es.at(u).size();
    if (d != 0 && d != 2) throw Error("internal: coarse-cell rules left a node with degree != 2");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> loops;
  for (int u0 = 0; u0 < n; ++u0) {
    if (seen[static_cast<std::size_t>(u0)] || es.at(u0).empty()) continue;
    std::vector<int> loop;
    int prev = -1;
    int cur = u0;
    do {
      loop.push_back(cur);
      seen[static_cast<std::size_t>(cur)] = 1;
      const std::vector<int>& nb = es.at(cur);
      int next;
      if (prev < 0) {
        next = std::min(nb[0], nb[1]);
      } else {
        next = (nb[0] == prev) ? nb[1] : nb[0];
      }
      prev = cur;
      cur = next;
    } while (cur != u0);
    loops.push_back(std::move(loop));
  }
  return loops;
}

// Sequence-level editor over a PathCycle: tracks which loop every node sits
// on and where every loop edge lives, so V/Z insertions and loop merges stay
// cheap on paths of a few thousand nodes.
class LoopEditor {
 public:
  LoopEditor(PathCycle pc, int n_nodes) : pc_(std::move(pc)) {
    node_loop_.assign(static_cast<std::size_t>(n_nodes), -1);
    rebuild_all();
  }

  const PathCycle& path() const { return pc_; }
  PathCycle take() { return std::move(pc_); }
  int loop_count() const { return static_cast<int>(pc_.loops.size()); }
  bool visited(int u) const { return node_loop_[static_cast<std::size_t>(u)] >= 0; }
  int loop_of(int u) const { return node_loop_[static_cast<std::size_t>(u)]; }

  bool is_path_edge(int u, int v) const { return edge_pos_.find(ekey(u, v)) != edge_pos_.end(); }

  void insert_between(int u, int a, int b) {
    const auto it = edge_pos_.find(ekey(a, b));
    if (it == edge_pos_.end()) throw ValidationError("pair is not an edge of the path");
    const int li = it->second.first;
    const std::size_t k = it->second.second;
    deindex_loop(li);
    std::vector<int>& seq = pc_.loops[static_cast<std::size_t>(li)];
    seq.insert(seq.begin() + static_cast<long>(k) + 1, u);
    node_loop_[static_cast<std::size_t>(u)] = li;
    index_loop(li);
  }

  // Replace path edge (a,c) by the zigzag a-u-b-c.
  void insert_zigzag(int u, int b, int a, int c) {
    const auto it = edge_pos_.find(ekey(a, c));
    if (it == edge_pos_.end()) throw ValidationError("Z pattern: (a,c) is not an edge of the path");
    const int li = it->second.first;
    const std::size_t k = it->second.second;
    deindex_loop(li);
    std::vector<int>& seq = pc_.loops[static_cast<std::size_t>(li)];
    const bool forward = seq[k] == a;  // otherwise the edge is stored c->a
    if (forward) {
      seq.insert(seq.begin() + static_cast<long>(k) + 1, {u, b});
    } else {
      seq.insert(seq.begin() + static_cast<long>(k) + 1, {b, u});
    }
    node_loop_[static_cast<std::size_t>(u)] = li;
    node_loop_[static_cast<std::size_t>(b)] = li;
    index_loop(li);
  }

  // Merge the loop containing the edge (v1,v2) into loop la by swapping the
  // parallel edges (u1,u2)/(v1,v2) for (u1,v1)/(u2,v2). The edge (u1,u2) is
  // loop la's edge at position k.
  void merge(int la, std::size_t k, int lb, int v1, int v2) {
    std::vector<int>& seq_a = pc_.loops[static_cast<std::size_t>(la)];
    const std::vector<int>& seq_b = pc_.loops[static_cast<std::size_t>(lb)];
    const std::size_t nb = seq_b.size();
    std::size_t m = 0;
    while (seq_b[m] != v1) ++m;

    std::vector<int> merged;
    merged.reserve(seq_a.size() + nb);
    merged.insert(merged.end(), seq_a.begin(), seq_a.begin() + static_cast<long>(k) + 1);
    if (seq_b[(m + 1) % nb] == v2) {
      // walk b backwards from v1 so we end on v2 without using edge (v1,v2)
      for (std::size_t t = 0; t < nb; ++t) merged.push_back(seq_b[(m + nb - t) % nb]);
    } else {
      for (std::size_t t = 0; t < nb; ++t) merged.push_back(seq_b[(m + t) % nb]);
    }
    merged.insert(merged.end(), seq_a.begin() + static_cast<long>(k) + 1, seq_a.end());

    pc_.loops[static_cast<std::size_t>(la)] = std::move(merged);
    pc_.loops.erase(pc_.loops.begin() + static_cast<long>(lb));
    rebuild_all();
  }

 private:
  void index_loop(int li) {
    const std::vector<int>& seq = pc_.loops[static_cast<std::size_t>(li)];
    const std::size_t n = seq.size();
    for (std::size_t k = 0; k < n; ++k) {
      edge_pos_[ekey(seq[k], seq[(k + 1) % n])] = {li, k};
    }
  }

  void deindex_loop(int li) {
    const std::vector<int>& seq = pc_.loops[static_cast<std::size_t>(li)];
    const std::size_t n = seq.size();
    for (std::size_t k = 0; k < n; ++k) {
      edge_pos_.erase(ekey(seq[k], seq[(k + 1) % n]));
    }
  }

  void rebuild_all() {
    edge_pos_.clear();
    std::fill(node_loop_.begin(), node_loop_.end(), -1);
    for (int li = 0; li < static_cast<int>(pc_.loops.size()); ++li) {
      for (int node : pc_.loops[static_cast<std::size_t>(li)]) {
        node_loop_[static_cast<std::size_t>(node)] = li;
      }
      index_loop(li);
    }
  }

  PathCycle pc_;
  std::vector<int> node_loop_;
  std::unordered_map<std::uint64_t, std::pair<int, std::size_t>> edge_pos_;
};

// V absorption: insert u into an existing path edge between two of its
// lattice neighbours. Candidate tie-break: the pair whose midpoint lies
// nearest the centre of u's coarse cell, then lowest index pair.
bool try_v(LoopEditor& ed, int u, const SLoISet& slois, const ACCGrid& acc,
           const TriangularGraph& g) {
  const std::vector<int>& nb = g.neighbors(u);
  const auto [ai, aj] = ACCGrid::acc_of(slois[u].cell);
  const Point2 target = acc.centroid(ai, aj);
  int best_a = -1, best_b = -1;
  double best_score = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      const int a = nb[i], b = nb[j];
      if (!ed.visited(a) || !ed.visited(b) || !ed.is_path_edge(a, b)) continue;
      const Point2 mid = 0.5 * (slois[a].pos + slois[b].pos);
      const double score = dist(mid, target);
      if (best_a < 0 || score < best_score) {
        best_a = a;
        best_b = b;
        best_score = score;
      }
    }
  }
  if (best_a < 0) return false;
  ed.insert_between(u, best_a, best_b);
  return true;
}

// Z absorption: u plus an unvisited neighbour b replace a path edge (a,c)
// with a~u and c~b. First match in ascending index order wins.
bool try_z(LoopEditor& ed, int u, const TriangularGraph& g) {
  for (int b : g.neighbors(u)) {
    if (ed.visited(b)) continue;
    for (int a : g.neighbors(u)) {
      if (!ed.visited(a)) continue;
      for (int c : g.neighbors(b)) {
        if (!ed.visited(c) || c == a) continue;
        if (!ed.is_path_edge(a, c)) continue;
        ed.insert_zigzag(u, b, a, c);
        return true;
      }
    }
  }
  return false;
}

bool merge_once(LoopEditor& ed, const TriangularGraph& g) {
  const PathCycle& pc = ed.path();
  for (int la = 0; la < static_cast<int>(pc.loops.size()); ++la) {
    const std::vector<int>& seq_a = pc.loops[static_cast<std::size_t>(la)];
    const std::size_t na = seq_a.size();
    for (std::size_t k = 0; k < na; ++k) {
      const int u1 = seq_a[k];
      const int u2 = seq_a[(k + 1) % na];
      for (int v1 : g.neighbors(u1)) {
        const int lb = ed.loop_of(v1);
        if (lb < 0 || lb == la) continue;
        const std::vector<int>& seq_b = pc.loops[static_cast<std::size_t>(lb)];
        const std::size_t nbsz = seq_b.size();
        std::size_t m = 0;
        while (seq_b[m] != v1) ++m;
        for (const int v2 : {seq_b[(m + 1) % nbsz], seq_b[(m + nbsz - 1) % nbsz]}) {
          if (g.has_edge(u2, v2)) {
            ed.merge(la, k, lb, v1, v2);
            return true;
          }
        }
      }
    }
  }
  return false;
}

int snap_start(const SLoISet& slois, const Point2& start) {
  int best = 0;
  double best_d = dist(slois[0].pos, start);
  for (int i = 1; i < slois.size(); ++i) {
    const double d = dist(slois[i].pos, start);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::vector<int> rotate_to_start(std::vector<int> seq, int start_node) {
  const auto it = std::find(seq.begin(), seq.end(), start_node);
  std::rotate(seq.begin(), it, seq.end());
  // orient so the second element is the smaller of the start's neighbours
  if (seq.size() >= 3 && seq.back() < seq[1]) {
    std::reverse(seq.begin() + 1, seq.end());
  }
  return seq;
}

}  // namespace

const std::vector<int>& PathCycle::sequence() const {
  if (!single()) throw Error("path cycle does not consist of a single loop");
  return loops.front();
}

std::size_t PathCycle::node_count() const {
  std::size_t n = 0;
  for (const std::vector<int>& l : loops) n += l.size();
  return n;
}

bool PathCycle::contains(int node) const {
  for (const std::vector<int>& l : loops) {
    if (std::find(l.begin(), l.end(), node) != l.end()) return true;
  }
  return false;
}

double cycle_length(const PathCycle& path, const SLoISet& slois) {
  double total = 0.0;
  for (const std::vector<int>& loop : path.loops) {
    const std::size_t n = loop.size();
    for (std::size_t k = 0; k < n; ++k) {
      total += dist(slois[loop[k]].pos, slois[loop[(k + 1) % n]].pos);
    }
  }
  return total;
}

CycleReport validate_cycle(const PathCycle& path, const SLoISet& slois,
                           const TriangularGraph& graph) {
  CycleReport r;
  r.cycle_count = static_cast<int>(path.loops.size());
  std::vector<char> seen(static_cast<std::size_t>(slois.size()), 0);
  for (const std::vector<int>& loop : path.loops) {
    if (loop.size() < 3) r.problems.push_back("loop with fewer than 3 nodes");
    const std::size_t n = loop.size();
    for (std::size_t k = 0; k < n; ++k) {
      const int node = loop[k];
      if (node < 0 || node >= slois.size()) {
        r.problems.push_back("node index out of range: " + std::to_string(node));
        continue;
      }
      if (seen[static_cast<std::size_t>(node)]) {
        r.problems.push_back("repeated node: " + std::to_string(node));
      }
      seen[static_cast<std::size_t>(node)] = 1;
      const int next = loop[(k + 1) % n];
      if (next >= 0 && next < slois.size() && !graph.has_edge(node, next)) {
        r.problems.push_back("hop is not a lattice adjacency: " + std::to_string(node) + "-" +
                             std::to_string(next));
      }
    }
  }
  for (int i = 0; i < slois.size(); ++i) {
    if (seen[static_cast<std::size_t>(i)]) {
      ++r.visited_count;
    } else {
      r.unvisited.push_back(i);
    }
  }
  r.total_length = cycle_length(path, slois);
  r.valid = r.problems.empty() && r.cycle_count >= 1;
  return r;
}

PathCycle gen_coverage_path_cycle(const SLoISet& slois, const ACCGrid& acc,
                                  const TriangularGraph& graph, const Point2& start) {
  const int n = slois.size();
  if (n < 3) {
    throw PlanningError("fewer than 3 sampling locations; no closed cycle exists",
                        validate_cycle(PathCycle{}, slois, graph));
  }

  // Coarse-cell rules over full ACCs. Row pair (j, j-1) is spliced together
  // at most once, at the first column where both cells are full.
  EdgeSet es(n);
  std::vector<char> row_connected(static_cast<std::size_t>(acc.rows()), 0);
  for (int i = 0; i < acc.cols(); ++i) {
    for (int j = 0; j < acc.rows(); ++j) {
      if (!acc.full(i, j)) continue;
      const int s1 = acc.slot(i, j, kBL);
      const int s2 = acc.slot(i, j, kBR);
      const int s3 = acc.slot(i, j, kTL);
      const int s4 = acc.slot(i, j, kTR);
      es.add(s3, s4);
      if (!acc.full(i - 1, j)) es.add(s1, s3);
      if (acc.full(i + 1, j)) {
        es.add(s2, acc.slot(i + 1, j, kBL));
        es.add(s4, acc.slot(i + 1, j, kTL));
      } else {
        es.add(s2, s4);
      }
      if (acc.full(i, j - 1) && !row_connected[static_cast<std::size_t>(j)]) {
        const int c7 = acc.slot(i, j - 1, kTL);
        const int c8 = acc.slot(i, j - 1, kTR);
        es.remove(c7, c8);
        es.add(s1, c7);
        es.add(s2, c8);
        row_connected[static_cast<std::size_t>(j)] = 1;
      } else {
        es.add(s1, s2);
      }
    }
  }

  PathCycle pc;
  pc.loops = extract_loops(es);
  if (pc.loops.empty()) {
    CycleReport r = validate_cycle(pc, slois, graph);
    throw PlanningError("no full coarse cell; nothing seeds the coverage cycle", std::move(r));
  }

  LoopEditor ed(std::move(pc), n);
  bool changed = true;
  while (changed) {
    changed = false;
    while (merge_once(ed, graph)) changed = true;
    for (int u = 0; u < n; ++u) {
      if (ed.visited(u)) continue;
      if (try_v(ed, u, slois, acc, graph) || try_z(ed, u, graph)) changed = true;
    }
  }

  if (ed.loop_count() > 1) {
    CycleReport r = validate_cycle(ed.path(), slois, graph);
    throw PlanningError("planned cycles could not be combined into one (" +
                            std::to_string(ed.loop_count()) + " remain)",
                        std::move(r));
  }
  {
    CycleReport r = validate_cycle(ed.path(), slois, graph);
    if (!r.unvisited.empty()) {
      throw PlanningError("partial coverage: " + std::to_string(r.unvisited.size()) + " of " +
                              std::to_string(n) + " SLoIs not absorbed",
                          std::move(r));
    }
  }

  PathCycle result = ed.take();
  result.loops[0] = rotate_to_start(std::move(result.loops[0]), snap_start(slois, start));
  return result;
}

PathCycle v_modification(const PathCycle& path, int u, std::pair<int, int> pair,
                         const TriangularGraph& graph) {
  const auto [a, b] = pair;
  const int n = graph.node_count();
  if (u < 0 || u >= n || a < 0 || a >= n || b < 0 || b >= n) {
    throw ValidationError("V modification: node index out of range");
  }
  if (path.contains(u)) throw ValidationError("V modification: node is already on the path");
  if (!graph.has_edge(u, a) || !graph.has_edge(u, b)) {
    throw ValidationError("V modification: node is not adjacent to both pair ends");
  }
  LoopEditor ed(path, n);
  if (!ed.is_path_edge(a, b)) throw ValidationError("V modification: pair is not a path edge");
  ed.insert_between(u, a, b);
  return ed.take();
}

PathCycle z_modification(const PathCycle& path, const ZPattern& z, const TriangularGraph& graph) {
  const int n = graph.node_count();
  for (int x : {z.u, z.partner, z.a, z.c}) {
    if (x < 0 || x >= n) throw ValidationError("Z modification: node index out of range");
  }
  if (path.contains(z.u) || path.contains(z.partner)) {
    throw ValidationError("Z modification: nodes to insert are already on the path");
  }
  if (!graph.has_edge(z.u, z.partner) || !graph.has_edge(z.a, z.u) ||
      !graph.has_edge(z.partner, z.c)) {
    throw ValidationError("Z modification: pattern nodes are not lattice-adjacent");
  }
  LoopEditor ed(path, n);
  if (!ed.is_path_edge(z.a, z.c)) {
    throw ValidationError("Z modification: (a,c) is not a path edge");
  }
  ed.insert_zigzag(z.u, z.partner, z.a, z.c);
  return ed.take();
}

PathCycle combine_cycles(const PathCycle& path, const SLoISet& slois,
                         const TriangularGraph& graph) {
  LoopEditor ed(path, graph.node_count());
  while (ed.loop_count() > 1) {
    if (!merge_once(ed, graph)) {
      CycleReport r = validate_cycle(ed.path(), slois, graph);
      throw PlanningError("cycles share no parallel adjacent edge pair; cannot combine",
                          std::move(r));
    }
  }
  return ed.take();
}

}  // namespace hgc
