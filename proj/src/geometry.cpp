#include "hgc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hgc/errors.hpp"

namespace hgc {

namespace {

constexpr double kBoundaryEps = 1e-12;

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment_box(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Exact-arithmetic style segment intersection used only for ring validation.
bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment_box(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment_box(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment_box(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment_box(p1, p2, q2)) return true;
  return false;
}

double point_segment_dist_sq(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len_sq = vx * vx + vy * vy;
  double t = 0.0;
  if (len_sq > 0.0) {
    t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double dx = p.x - (a.x + t * vx);
  const double dy = p.y - (a.y + t * vy);
  return dx * dx + dy * dy;
}

std::uint64_t pack_cell(GridIndex c) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.row)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.col));
}

}  // namespace

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Polygon::Polygon(std::vector<Point2> ring) : verts_(std::move(ring)) {
  if (verts_.size() >= 2) {
    const Point2& first = verts_.front();
    const Point2& last = verts_.back();
    if (first.x == last.x && first.y == last.y) verts_.pop_back();
  }
  if (verts_.size() < 3) {
    throw ValidationError("polygon needs at least 3 distinct vertices");
  }
  for (const Point2& v : verts_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw ValidationError("polygon has non-finite vertex coordinates");
    }
  }
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = verts_[i];
    const Point2& b = verts_[(i + 1) % n];
    if (a.x == b.x && a.y == b.y) {
      throw ValidationError("polygon has repeated consecutive vertices");
    }
  }
  if (signed_area() == 0.0) {
    throw ValidationError("polygon is degenerate (zero area)");
  }
  // Non-adjacent edge pairs must not touch or cross.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(verts_[i], verts_[(i + 1) % n], verts_[j], verts_[(j + 1) % n])) {
        throw ValidationError("polygon ring is self-intersecting");
      }
    }
  }
  bbox_.lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  bbox_.hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const Point2& v : verts_) {
    bbox_.lo.x = std::min(bbox_.lo.x, v.x);
    bbox_.lo.y = std::min(bbox_.lo.y, v.y);
    bbox_.hi.x = std::max(bbox_.hi.x, v.x);
    bbox_.hi.y = std::max(bbox_.hi.y, v.y);
  }
}

double Polygon::signed_area() const {
  double acc = 0.0;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = verts_[i];
    const Point2& b = verts_[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

bool point_in_polygon(const Point2& p, const Polygon& poly) {
  const std::vector<Point2>& v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_dist_sq(p, v[i], v[(i + 1) % n]) <= kBoundaryEps * kBoundaryEps) {
      return true;  // boundary counts as inside
    }
  }
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_int = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_int) inside = !inside;
    }
  }
  return inside;
}

HexGrid::HexGrid(const Polygon& poly, double edge_length, Point2 anchor_offset) {
  if (!(edge_length > 0.0) || !std::isfinite(edge_length)) {
    throw ValidationError("hexagon edge length must be positive and finite");
  }
  edge_ = edge_length;
  pitch_ = std::sqrt(3.0) * edge_;
  row_pitch_ = 1.5 * edge_;
  const BoundingBox bb = poly.bbox();
  anchor_ = bb.lo + anchor_offset;
  origin_ = anchor_ - Point2{pitch_, 2.0 * row_pitch_};
  cols_ = static_cast<int>(std::ceil(bb.width() / pitch_)) + 3;
  rows_ = static_cast<int>(std::ceil(bb.height() / row_pitch_)) + 4;
}

Point2 HexGrid::centroid(GridIndex c) const {
  const double shift = (c.row & 1) ? 0.5 * pitch_ : 0.0;
  return {origin_.x + c.col * pitch_ + shift, origin_.y + c.row * row_pitch_};
}

std::optional<GridIndex> HexGrid::index_of(Point2 p) const {
  const int row = static_cast<int>(std::llround((p.y - origin_.y) / row_pitch_));
  if (row < 0 || row >= rows_) return std::nullopt;
  const double shift = (row & 1) ? 0.5 * pitch_ : 0.0;
  const int col = static_cast<int>(std::llround((p.x - origin_.x - shift) / pitch_));
  if (col < 0 || col >= cols_) return std::nullopt;
  const GridIndex c{col, row};
  if (dist(centroid(c), p) > 1e-9 * pitch_) return std::nullopt;
  return c;
}

std::array<GridIndex, 6> HexGrid::neighbor_cells(GridIndex c) const {
  const int dc = (c.row & 1) ? 1 : -1;  // column shift of the diagonal neighbours
  return {GridIndex{c.col - 1, c.row},      GridIndex{c.col + 1, c.row},
          GridIndex{c.col, c.row + 1},      GridIndex{c.col + dc, c.row + 1},
          GridIndex{c.col, c.row - 1},      GridIndex{c.col + dc, c.row - 1}};
}

bool HexGrid::in_range(GridIndex c) const {
  return c.col >= 0 && c.col < cols_ && c.row >= 0 && c.row < rows_;
}

SLoISet::SLoISet(std::vector<SLoI> items) : items_(std::move(items)) {
  keys_.reserve(items_.size());
  for (const SLoI& s : items_) keys_.push_back(pack_cell(s.cell));
  order_.resize(items_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  std::sort(order_.begin(), order_.end(),
            [this](int a, int b) { return keys_[static_cast<std::size_t>(a)] < keys_[static_cast<std::size_t>(b)]; });
  std::sort(keys_.begin(), keys_.end());
}

int SLoISet::find(GridIndex c) const {
  const std::uint64_t key = pack_cell(c);
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return -1;
  return order_[static_cast<std::size_t>(it - keys_.begin())];
}

SLoISet select_slois(const HexGrid& grid, const Polygon& poly) {
  std::vector<SLoI> picked;
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      const GridIndex idx{c, r};
      const Point2 pos = grid.centroid(idx);
      if (point_in_polygon(pos, poly)) picked.push_back({idx, pos});
    }
  }
  return SLoISet(std::move(picked));
}

ACCGrid::ACCGrid(const HexGrid& grid, const SLoISet& slois) {
  cols_ = (grid.cols() + 1) / 2;
  rows_ = (grid.rows() + 1) / 2;
  cells_.assign(static_cast<std::size_t>(cols_) * rows_, AccCell{});
  centroids_.resize(cells_.size());
  for (int j = 0; j < rows_; ++j) {
    for (int i = 0; i < cols_; ++i) {
      Point2 acc{0.0, 0.0};
      for (int k = 0; k < 4; ++k) {
        const GridIndex fine{2 * i + (k & 1), 2 * j + (k >> 1)};
        acc = acc + grid.centroid(fine);
      }
      centroids_[static_cast<std::size_t>(j) * cols_ + i] = 0.25 * acc;
    }
  }
  for (int s = 0; s < slois.size(); ++s) {
    const GridIndex c = slois[s].cell;
    const auto [i, j] = acc_of(c);
    const int k = (c.col & 1) + 2 * (c.row & 1);
    cells_[static_cast<std::size_t>(j) * cols_ + i].slot[static_cast<std::size_t>(k)] = s;
  }
  for (AccCell& cell : cells_) {
    cell.full = cell.slot[0] >= 0 && cell.slot[1] >= 0 && cell.slot[2] >= 0 && cell.slot[3] >= 0;
    if (cell.full) ++full_count_;
  }
}

const AccCell& ACCGrid::cell(int i, int j) const {
  return cells_[static_cast<std::size_t>(j) * cols_ + i];
}

bool ACCGrid::full(int i, int j) const {
  if (i < 0 || i >= cols_ || j < 0 || j >= rows_) return false;
  return cell(i, j).full;
}

int ACCGrid::slot(int i, int j, int k) const {
  if (i < 0 || i >= cols_ || j < 0 || j >= rows_) return -1;
  return cell(i, j).slot[static_cast<std::size_t>(k)];
}

Point2 ACCGrid::centroid(int i, int j) const {
  return centroids_[static_cast<std::size_t>(j) * cols_ + i];
}

ACCGrid acc_decompose(const HexGrid& grid, const SLoISet& slois) {
  return ACCGrid(grid, slois);
}

bool TriangularGraph::has_edge(int u, int v) const {
  const std::vector<int>& nb = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(nb.begin(), nb.end(), v);
}

void TriangularGraph::add_edge(int u, int v) {
  adj_[static_cast<std::size_t>(u)].push_back(v);
  adj_[static_cast<std::size_t>(v)].push_back(u);
  ++edges_;
}

void TriangularGraph::finalize() {
  for (std::vector<int>& nb : adj_) std::sort(nb.begin(), nb.end());
}

TriangularGraph build_adjacency(const SLoISet& slois, const HexGrid& grid) {
  TriangularGraph g(slois.size());
  for (int u = 0; u < slois.size(); ++u) {
    for (const GridIndex& nc : grid.neighbor_cells(slois[u].cell)) {
      const int v = slois.find(nc);
      if (v > u) g.add_edge(u, v);
    }
  }
  g.finalize();
  return g;
}

}  // namespace hgc
