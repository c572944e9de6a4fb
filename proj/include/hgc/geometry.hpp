#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace hgc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

double dist(Point2 a, Point2 b);

struct BoundingBox {
  Point2 lo;
  Point2 hi;
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

// Simple closed polygon, one ring, implicit closure. Construction validates:
// >= 3 vertices after dropping a duplicated closing vertex, finite
// coordinates, no repeated consecutive vertices, nonzero area and no
// self-intersection. Vertex order (CW/CCW) is accepted as given.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> ring);

  const std::vector<Point2>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }
  double signed_area() const;
  BoundingBox bbox() const { return bbox_; }

 private:
  std::vector<Point2> verts_;
  BoundingBox bbox_;
};

// Ray-casting parity test. Points within 1e-12 of the boundary count as
// inside so that samples placed exactly on the contour are kept.
bool point_in_polygon(const Point2& p, const Polygon& poly);

struct GridIndex {
  int col = 0;
  int row = 0;
  bool operator==(const GridIndex& o) const { return col == o.col && row == o.row; }
};

// Pointy-top hexagonal tessellation covering the polygon's bounding box plus
// a margin ring. Cell centroids form a triangular lattice: horizontal pitch
// sqrt(3)*l, row pitch 1.5*l, odd rows shifted right by half a pitch. The
// grid is anchored so that cell (1,2) sits exactly on the bounding-box
// lower-left corner (plus an optional anchor offset); the two rows below it
// are margin, keeping all indices non-negative and the anchor row even so
// the row-parity convention is independent of the contour.
class HexGrid {
 public:
  HexGrid(const Polygon& poly, double edge_length, Point2 anchor_offset = {0.0, 0.0});

  double edge_length() const { return edge_; }
  double spacing() const { return pitch_; }  // distance between adjacent centroids
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  Point2 anchor() const { return anchor_; }

  Point2 centroid(GridIndex c) const;
  // Inverse of centroid(); nullopt when the point is not a grid centroid.
  std::optional<GridIndex> index_of(Point2 p) const;
  // The six lattice neighbours of a cell (may fall outside the grid range).
  std::array<GridIndex, 6> neighbor_cells(GridIndex c) const;
  bool in_range(GridIndex c) const;

 private:
  double edge_ = 0.0;
  double pitch_ = 0.0;      // sqrt(3) * edge
  double row_pitch_ = 0.0;  // 1.5 * edge
  Point2 anchor_;
  Point2 origin_;  // centroid of cell (0,0)
  int cols_ = 0;
  int rows_ = 0;
};

// A sampling location of interest: a hexagon centroid inside the contour.
struct SLoI {
  GridIndex cell;
  Point2 pos;
};

// Ordered set of SLoIs (row-major by grid index). The dense position of a
// SLoI in this set is the node id used by the adjacency graph and the path.
class SLoISet {
 public:
  SLoISet() = default;
  explicit SLoISet(std::vector<SLoI> items);

  int size() const { return static_cast<int>(items_.size()); }
  bool empty() const { return items_.empty(); }
  const SLoI& operator[](int i) const { return items_[static_cast<std::size_t>(i)]; }
  // Dense index of the SLoI at the given cell, or -1.
  int find(GridIndex c) const;
  const std::vector<SLoI>& items() const { return items_; }

 private:
  std::vector<SLoI> items_;
  std::vector<std::uint64_t> keys_;   // sorted packed (row, col)
  std::vector<int> order_;            // dense index per key
};

SLoISet select_slois(const HexGrid& grid, const Polygon& poly);

// One auxiliary coarse cell = a 2x2 block of fine cells. Slot order matches
// the labels used by the planner rules: 0 bottom-left, 1 bottom-right,
// 2 top-left, 3 top-right. A slot holds the dense SLoI index or -1.
struct AccCell {
  std::array<int, 4> slot = {-1, -1, -1, -1};
  bool full = false;
};

class ACCGrid {
 public:
  ACCGrid() = default;
  ACCGrid(const HexGrid& grid, const SLoISet& slois);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  const AccCell& cell(int i, int j) const;
  bool full(int i, int j) const;  // false when out of range
  // Dense SLoI index in slot k of ACC (i,j), or -1.
  int slot(int i, int j, int k) const;
  // Geometric centre of the 2x2 block (average of the four fine centroids,
  // whether or not they are SLoIs).
  Point2 centroid(int i, int j) const;
  // Coarse cell containing a fine cell.
  static std::pair<int, int> acc_of(GridIndex c) { return {c.col / 2, c.row / 2}; }
  int full_count() const { return full_count_; }

 private:
  int cols_ = 0;
  int rows_ = 0;
  int full_count_ = 0;
  std::vector<AccCell> cells_;
  std::vector<Point2> centroids_;
};

ACCGrid acc_decompose(const HexGrid& grid, const SLoISet& slois);

// Adjacency between SLoIs whose centroids are one lattice pitch apart.
// Nodes are dense SLoI indices; neighbour lists are sorted.
class TriangularGraph {
 public:
  TriangularGraph() = default;
  explicit TriangularGraph(int n) : adj_(static_cast<std::size_t>(n)) {}

  int node_count() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<int>& neighbors(int u) const { return adj_[static_cast<std::size_t>(u)]; }
  bool has_edge(int u, int v) const;
  void add_edge(int u, int v);
  void finalize();  // sorts neighbour lists

 private:
  std::vector<std::vector<int>> adj_;
  std::size_t edges_ = 0;
};

TriangularGraph build_adjacency(const SLoISet& slois, const HexGrid& grid);

}  // namespace hgc
