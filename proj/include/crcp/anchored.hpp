#pragma once

#include <optional>
#include <vector>

#include "crcp/geometry.hpp"
#include "crcp/query_space.hpp"
#include "crcp/top2_store.hpp"

namespace crcp {

struct AnchoredOptions {
  Top2Store::Options store{true, 0};  // leaf_size 0: 16 in 2D, 64 in 3D
  int sector_refinement = 1;          // multiplies the sector count
};

struct AnchoredTrace {
  std::size_t store_queries = 0;
  std::size_t candidates = 0;  // distinct points collected over both/all orientations
  std::size_t pairs_compared = 0;
};

// Closest o-anchored bichromatic pair in an axis-parallel rectangle, up to
// (1+eps). Around o each quadrant is cut into k angular sectors; per sector
// a top-2 store reports the two L1-nearest points of distinct colors, and
// the answer is the closest anchored pair among the reported points.
class AnchoredIndex2D {
 public:
  AnchoredIndex2D(const Dataset& s, const MonotoneNorm& norm, double eps, AnchoredOptions opt = {});

  std::optional<PointPair> query(const Rectangle& r, const Coords& o, AnchoredTrace* trace = nullptr) const;

  double eps() const { return eps_; }
  double theta() const { return eps_ / 8.0; }
  int sectors() const { return k_; }
  std::size_t node_count() const;

  // Sector (1..k) of p around o for the quadrant role (s1, s2), decided by
  // the same keys the stores use; 0 if p is not in that quadrant of o.
  int sector_of(const Coords& p, const Coords& o, int s1, int s2) const;

 private:
  struct Wedge {
    Coords lower, upper;  // halfplanes n.p <= n.o bounding the sector
    bool strict;          // lower line belongs to the previous sector
  };
  struct Role {
    int s1, s2;
    std::vector<Wedge> wedges;
    std::vector<Top2Store> full, vert, horiz;  // per sector: both edges, x edge only, y edge only
  };

  Wedge make_wedge(int s1, int s2, int i) const;
  std::optional<PointPair> orientation(const Role& a, const Role& b, const Rectangle& r, const Coords& o,
                                       AnchoredTrace* trace) const;
  void collect(const Role& role, const Rectangle& r, const Coords& o, std::vector<PointId>& t,
               AnchoredTrace* trace) const;

  Dataset s_;
  MonotoneNorm norm_;
  double eps_;
  int k_;
  Role roles_[4];              // ++, --, -+, +-
};

// 3D version: each octant around o is cut into k^2 cells by two families of
// planes through o; every cell uses one 7-halfspace store.
class AnchoredIndex3D {
 public:
  AnchoredIndex3D(const Dataset& s, const MonotoneNorm& norm, double eps, AnchoredOptions opt = {});

  std::optional<PointPair> query(const Box3& b, const Coords& o, AnchoredTrace* trace = nullptr) const;

  double eps() const { return eps_; }
  double theta() const { return eps_ / 18.0; }
  int sectors() const { return k_; }
  std::size_t node_count() const;

  // Cell (i, j), both 1..k, of p around o in octant role s; (0, 0) outside.
  std::pair<int, int> cell_of(const Coords& p, const Coords& o, const std::array<int, 3>& s) const;

 private:
  struct Cell {
    Coords az_lower, az_upper, po_lower, po_upper;
    bool az_strict, po_strict;
  };
  struct Role {
    std::array<int, 3> s;
    std::vector<Cell> geometry;    // (i-1)*k + (j-1)
    std::vector<Top2Store> cells;  // same indexing
  };

  std::optional<PointPair> orientation(const Role& a, const Role& b, const Box3& box, const Coords& o,
                                       AnchoredTrace* trace) const;
  Cell make_cell(const std::array<int, 3>& s, int i, int j) const;
  static std::vector<Coords> normals(const std::array<int, 3>& s, const Cell& c);
  static std::array<double, 7> offsets(const std::array<int, 3>& s, const Cell& c, const Box3& box, const Coords& o);

  Dataset s_;
  MonotoneNorm norm_;
  double eps_;
  int k_;
  std::vector<Role> roles_;  // roles_[2t] and roles_[2t+1] are opposite octants
};

inline AnchoredIndex2D build_anchored2d(const Dataset& s, const MonotoneNorm& norm, double eps,
                                        AnchoredOptions opt = {}) {
  return AnchoredIndex2D(s, norm, eps, opt);
}
inline AnchoredIndex3D build_anchored3d(const Dataset& s, const MonotoneNorm& norm, double eps,
                                        AnchoredOptions opt = {}) {
  return AnchoredIndex3D(s, norm, eps, opt);
}

// Angle at o subtended by a and b, measured after axis normalization.
double normalized_angle(const MonotoneNorm& norm, const Coords& a, const Coords& o, const Coords& b);

}  // namespace crcp
