#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crcp/geometry.hpp"

namespace crcp {

// Closed ranges. A sign of +1 means the axis is bounded below ([c, inf)),
// -1 means bounded above ((-inf, c]).
struct Strip {
  int axis = 0;  // 0: vertical strip [lo,hi] x R, 1: horizontal
  double lo = 0, hi = 0;
};

struct Quadrant {
  int sx = 1, sy = 1;
  double cx = 0, cy = 0;
};

struct Rectangle {
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
};

struct Slab {
  int dim = 3;
  int axis = 0;
  double lo = 0, hi = 0;
};

struct TwoBox {
  int dim = 3;
  int axis1 = 0, axis2 = 1;
  int sign1 = 1, sign2 = 1;
  double c1 = 0, c2 = 0;
};

struct Box3 {
  Coords lo{}, hi{};
};

struct Dominance3 {
  Coords corner{};
};

using OrthoRange = std::variant<Strip, Quadrant, Rectangle, Slab, TwoBox, Box3, Dominance3>;

int range_dim(const OrthoRange& r);
BoundingBox to_box(const OrthoRange& r);
void validate(const OrthoRange& r);

bool contains_point(const OrthoRange& r, const ColoredPoint& p);
bool contains_pair(const OrthoRange& r, const Dataset& s, const PointPair& phi);

std::string to_string(const OrthoRange& r);
// One range per line: STRIP axis lo hi | QUAD sx sy cx cy | RECT x- x+ y- y+ | SLAB axis lo hi |
// 2BOX ax1 ax2 s1 s2 c1 c2 | BOX3 x- x+ y- y+ z- z+ | DOM3 x- y- z-
OrthoRange parse_range(const std::string& line);

struct RangeQuery {
  OrthoRange range;
  std::optional<Coords> anchor;  // written as `@ ox oy [oz]` after the range
};
std::vector<RangeQuery> read_queries(std::istream& in);
std::string to_string(const RangeQuery& q);

class QuerySpace {
 public:
  enum class Kind {
    Band,     // bounded on both sides along one axis: strips, slabs
    Orthant,  // bounded on one side along two axes: quadrants, 2-boxes
    Rectangles,
    Boxes3,
    Dominance3,
  };

  static QuerySpace vertical_strips() { return band(2, 0); }
  static QuerySpace horizontal_strips() { return band(2, 1); }
  static QuerySpace quadrants(int sx, int sy) { return orthant(2, 0, 1, sx, sy); }
  static QuerySpace ne_quadrants() { return quadrants(1, 1); }
  static QuerySpace slabs(int axis) { return band(3, axis); }
  static QuerySpace two_boxes(int axis1, int axis2, int sign1, int sign2) {
    return orthant(3, axis1, axis2, sign1, sign2);
  }
  static QuerySpace rectangles() { return QuerySpace(Kind::Rectangles, 2); }
  static QuerySpace boxes3() { return QuerySpace(Kind::Boxes3, 3); }
  static QuerySpace dominance3() { return QuerySpace(Kind::Dominance3, 3); }
  static QuerySpace band(int dim, int axis);
  static QuerySpace orthant(int dim, int axis1, int axis2, int sign1, int sign2);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int axis() const { return axis1_; }
  int axis1() const { return axis1_; }
  int axis2() const { return axis2_; }
  int sign1() const { return sign1_; }
  int sign2() const { return sign2_; }

  // Bands and orthants have a two-number containment key (below).
  bool keyed() const { return kind_ == Kind::Band || kind_ == Kind::Orthant; }
  // True if `r` is a member of this family.
  bool accepts(const OrthoRange& r) const;
  std::string name() const;

  friend bool operator==(const QuerySpace&, const QuerySpace&) = default;

 private:
  QuerySpace(Kind k, int dim) : kind_(k), dim_(dim) {}

  Kind kind_;
  int dim_;
  int axis1_ = 0, axis2_ = 1;
  int sign1_ = 1, sign2_ = 1;
};

// Containment key for keyed spaces. For ranges X, Y of the space,
// Y ⊆ X iff key(Y) >= key(X) componentwise, and X contains pair phi iff
// pair_key(phi) >= range_key(X). Band: (lo, -hi); orthant: frame corner.
struct Key2 {
  double k0 = 0, k1 = 0;
  friend bool operator==(const Key2&, const Key2&) = default;
};
bool key_dominates(const Key2& hi, const Key2& lo);  // hi >= lo componentwise

Key2 pair_key(const QuerySpace& space, const Dataset& s, const PointPair& phi);
Key2 range_key(const QuerySpace& space, const OrthoRange& r);  // usage error if not a member
OrthoRange range_from_key(const QuerySpace& space, const Key2& k);

// Orientation of a pair in the (axis1, axis2) frame of an orthant space
// after applying the signs.
Orientation frame_orientation(const QuerySpace& space, const Dataset& s, const PointPair& phi);

// X_phi, the smallest range of the space containing phi. Orthant spaces
// require phi to be NW-SE (or Both) in their frame.
OrthoRange smallest_range(const QuerySpace& space, const Dataset& s, const PointPair& phi);

bool strongly_adjacent(const Dataset& s, const PointPair& phi, const PointPair& psi);

struct WellBehavedViolation {
  PointPair first;
  std::optional<PointPair> second;  // absent when `first` has no smallest range
  std::string reason;
};

std::optional<WellBehavedViolation> check_well_behaved(const QuerySpace& space, const Dataset& s,
                                                       std::span<const PointPair> pairs);

}  // namespace crcp
