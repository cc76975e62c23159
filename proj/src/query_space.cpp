#include "crcp/query_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

namespace crcp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_sign(int s) {
  if (s != 1 && s != -1) throw UsageError("range signs must be +1 or -1");
}

void check_axis(int axis, int dim) {
  if (axis < 0 || axis >= dim) throw UsageError("axis out of range");
}

void check_interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw UsageError("interval needs lo <= hi");
}

// bound on axis given a one-sided sign
void one_sided(BoundingBox& b, int axis, int sign, double c) {
  auto a = static_cast<std::size_t>(axis);
  if (sign > 0)
    b.lo[a] = c;
  else
    b.hi[a] = c;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

double token_double(const std::string& t) {
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw UsageError("bad number '" + t + "'");
  return v;
}

int token_int(const std::string& t) {
  double v = token_double(t);
  if (v != std::floor(v) || std::fabs(v) > 1e6) throw UsageError("expected an integer, got '" + t + "'");
  return static_cast<int>(v);
}

}  // namespace

int range_dim(const OrthoRange& r) {
  return std::visit(Overloaded{[](const Strip&) { return 2; }, [](const Quadrant&) { return 2; },
                               [](const Rectangle&) { return 2; }, [](const Slab& s) { return s.dim; },
                               [](const TwoBox& t) { return t.dim; }, [](const Box3&) { return 3; },
                               [](const Dominance3&) { return 3; }},
                    r);
}

void validate(const OrthoRange& r) {
  std::visit(Overloaded{
                 [](const Strip& s) {
                   check_axis(s.axis, 2);
                   check_interval(s.lo, s.hi);
                 },
                 [](const Quadrant& q) {
                   check_sign(q.sx);
                   check_sign(q.sy);
                 },
                 [](const Rectangle& r) {
                   check_interval(r.xlo, r.xhi);
                   check_interval(r.ylo, r.yhi);
                 },
                 [](const Slab& s) {
                   if (s.dim != 2 && s.dim != 3) throw UsageError("slab dimension must be 2 or 3");
                   check_axis(s.axis, s.dim);
                   check_interval(s.lo, s.hi);
                 },
                 [](const TwoBox& t) {
                   if (t.dim != 2 && t.dim != 3) throw UsageError("2-box dimension must be 2 or 3");
                   check_axis(t.axis1, t.dim);
                   check_axis(t.axis2, t.dim);
                   if (t.axis1 == t.axis2) throw UsageError("2-box axes must be distinct");
                   check_sign(t.sign1);
                   check_sign(t.sign2);
                 },
                 [](const Box3& b) {
                   for (int i = 0; i < 3; ++i) check_interval(b.lo[i], b.hi[i]);
                 },
                 [](const Dominance3&) {}},
             r);
}

BoundingBox to_box(const OrthoRange& r) {
  validate(r);
  BoundingBox b = BoundingBox::everything(range_dim(r));
  std::visit(Overloaded{[&](const Strip& s) {
                          b.lo[s.axis] = s.lo;
                          b.hi[s.axis] = s.hi;
                        },
                        [&](const Quadrant& q) {
                          one_sided(b, 0, q.sx, q.cx);
                          one_sided(b, 1, q.sy, q.cy);
                        },
                        [&](const Rectangle& r) {
                          b.lo = {r.xlo, r.ylo, 0};
                          b.hi = {r.xhi, r.yhi, 0};
                        },
                        [&](const Slab& s) {
                          b.lo[s.axis] = s.lo;
                          b.hi[s.axis] = s.hi;
                        },
                        [&](const TwoBox& t) {
                          one_sided(b, t.axis1, t.sign1, t.c1);
                          one_sided(b, t.axis2, t.sign2, t.c2);
                        },
                        [&](const Box3& x) {
                          b.lo = x.lo;
                          b.hi = x.hi;
                        },
                        [&](const Dominance3& d) { b.lo = d.corner; }},
             r);
  return b;
}

bool contains_point(const OrthoRange& r, const ColoredPoint& p) { return to_box(r).contains(p.coords); }

bool contains_pair(const OrthoRange& r, const Dataset& s, const PointPair& phi) {
  if (range_dim(r) != s.dim()) throw UsageError("range dimension does not match dataset");
  BoundingBox b = to_box(r);
  return b.contains(s[phi.a].coords) && b.contains(s[phi.b].coords);
}

std::string to_string(const OrthoRange& r) {
  return std::visit(
      Overloaded{
          [](const Strip& s) { return "STRIP " + std::to_string(s.axis) + " " + fmt(s.lo) + " " + fmt(s.hi); },
          [](const Quadrant& q) {
            return "QUAD " + std::to_string(q.sx) + " " + std::to_string(q.sy) + " " + fmt(q.cx) + " " +
                   fmt(q.cy);
          },
          [](const Rectangle& r) {
            return "RECT " + fmt(r.xlo) + " " + fmt(r.xhi) + " " + fmt(r.ylo) + " " + fmt(r.yhi);
          },
          [](const Slab& s) { return "SLAB " + std::to_string(s.axis) + " " + fmt(s.lo) + " " + fmt(s.hi); },
          [](const TwoBox& t) {
            return "2BOX " + std::to_string(t.axis1) + " " + std::to_string(t.axis2) + " " +
                   std::to_string(t.sign1) + " " + std::to_string(t.sign2) + " " + fmt(t.c1) + " " + fmt(t.c2);
          },
          [](const Box3& b) {
            std::string out = "BOX3";
            for (int i = 0; i < 3; ++i) out += " " + fmt(b.lo[i]) + " " + fmt(b.hi[i]);
            return out;
          },
          [](const Dominance3& d) {
            return "DOM3 " + fmt(d.corner[0]) + " " + fmt(d.corner[1]) + " " + fmt(d.corner[2]);
          }},
      r);
}

OrthoRange parse_range(const std::string& line) {
  std::istringstream in(line);
  std::string tag;
  in >> tag;
  std::vector<std::string> t;
  for (std::string x; in >> x;) t.push_back(x);
  auto need = [&](std::size_t n) {
    if (t.size() != n) throw UsageError(tag + " expects " + std::to_string(n) + " fields: '" + line + "'");
  };
  OrthoRange r;
  if (tag == "STRIP") {
    need(3);
    r = Strip{token_int(t[0]), token_double(t[1]), token_double(t[2])};
  } else if (tag == "QUAD") {
    need(4);
    r = Quadrant{token_int(t[0]), token_int(t[1]), token_double(t[2]), token_double(t[3])};
  } else if (tag == "RECT") {
    need(4);
    r = Rectangle{token_double(t[0]), token_double(t[1]), token_double(t[2]), token_double(t[3])};
  } else if (tag == "SLAB") {
    need(3);
    r = Slab{3, token_int(t[0]), token_double(t[1]), token_double(t[2])};
  } else if (tag == "2BOX") {
    need(6);
    r = TwoBox{3, token_int(t[0]), token_int(t[1]), token_int(t[2]), token_int(t[3]), token_double(t[4]),
               token_double(t[5])};
  } else if (tag == "BOX3") {
    need(6);
    Box3 b;
    for (int i = 0; i < 3; ++i) {
      b.lo[i] = token_double(t[2 * i]);
      b.hi[i] = token_double(t[2 * i + 1]);
    }
    r = b;
  } else if (tag == "DOM3") {
    need(3);
    r = Dominance3{{token_double(t[0]), token_double(t[1]), token_double(t[2])}};
  } else {
    throw UsageError("unknown range type '" + tag + "'");
  }
  validate(r);
  return r;
}

std::vector<RangeQuery> read_queries(std::istream& in) {
  std::vector<RangeQuery> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    RangeQuery q;
    auto at = line.find('@');
    q.range = parse_range(line.substr(0, at));
    if (at != std::string::npos) {
      std::istringstream a(line.substr(at + 1));
      std::vector<std::string> t;
      for (std::string x; a >> x;) t.push_back(x);
      int d = range_dim(q.range);
      if (static_cast<int>(t.size()) != d) throw UsageError("anchor needs " + std::to_string(d) + " coordinates");
      Coords o{};
      for (int i = 0; i < d; ++i) o[i] = token_double(t[i]);
      q.anchor = o;
    }
    out.push_back(q);
  }
  return out;
}

std::string to_string(const RangeQuery& q) {
  std::string out = to_string(q.range);
  if (q.anchor) {
    out += " @";
    for (int i = 0; i < range_dim(q.range); ++i) out += " " + fmt((*q.anchor)[i]);
  }
  return out;
}

QuerySpace QuerySpace::band(int dim, int axis) {
  if (dim != 2 && dim != 3) throw UsageError("dimension must be 2 or 3");
  check_axis(axis, dim);
  QuerySpace q(Kind::Band, dim);
  q.axis1_ = axis;
  return q;
}

QuerySpace QuerySpace::orthant(int dim, int axis1, int axis2, int sign1, int sign2) {
  if (dim != 2 && dim != 3) throw UsageError("dimension must be 2 or 3");
  check_axis(axis1, dim);
  check_axis(axis2, dim);
  if (axis1 == axis2) throw UsageError("orthant axes must be distinct");
  check_sign(sign1);
  check_sign(sign2);
  QuerySpace q(Kind::Orthant, dim);
  q.axis1_ = axis1;
  q.axis2_ = axis2;
  q.sign1_ = sign1;
  q.sign2_ = sign2;
  return q;
}

bool QuerySpace::accepts(const OrthoRange& r) const {
  switch (kind_) {
    case Kind::Band:
      if (dim_ == 2) {
        if (auto* s = std::get_if<Strip>(&r)) return s->axis == axis1_;
      }
      if (auto* s = std::get_if<Slab>(&r)) return s->dim == dim_ && s->axis == axis1_;
      return false;
    case Kind::Orthant:
      if (dim_ == 2 && axis1_ == 0 && axis2_ == 1) {
        if (auto* q = std::get_if<Quadrant>(&r)) return q->sx == sign1_ && q->sy == sign2_;
      }
      if (auto* t = std::get_if<TwoBox>(&r)) {
        if (t->dim != dim_) return false;
        if (t->axis1 == axis1_ && t->axis2 == axis2_) return t->sign1 == sign1_ && t->sign2 == sign2_;
        if (t->axis1 == axis2_ && t->axis2 == axis1_) return t->sign1 == sign2_ && t->sign2 == sign1_;
      }
      return false;
    case Kind::Rectangles: return std::holds_alternative<Rectangle>(r);
    case Kind::Boxes3: return std::holds_alternative<Box3>(r);
    case Kind::Dominance3: return std::holds_alternative<Dominance3>(r);
  }
  return false;
}

std::string QuerySpace::name() const {
  switch (kind_) {
    case Kind::Band:
      if (dim_ == 2) return axis1_ == 0 ? "vertical-strips" : "horizontal-strips";
      return "slabs(axis " + std::to_string(axis1_) + ")";
    case Kind::Orthant: {
      if (dim_ == 2) {
        const char* names[2][2] = {{"sw", "nw"}, {"se", "ne"}};
        return std::string(names[sign1_ > 0][sign2_ > 0]) + "-quadrants";
      }
      auto sg = [](int s) { return s > 0 ? '+' : '-'; };
      return std::string("2-boxes(") + char('x' + axis1_) + sg(sign1_) + char('x' + axis2_) + sg(sign2_) + ")";
    }
    case Kind::Rectangles: return "rectangles";
    case Kind::Boxes3: return "boxes3";
    case Kind::Dominance3: return "dominance3";
  }
  return "?";
}

bool key_dominates(const Key2& hi, const Key2& lo) { return hi.k0 >= lo.k0 && hi.k1 >= lo.k1; }

Key2 pair_key(const QuerySpace& space, const Dataset& s, const PointPair& phi) {
  const auto& a = s[phi.a];
  const auto& b = s[phi.b];
  switch (space.kind()) {
    case QuerySpace::Kind::Band: {
      int x = space.axis();
      return {std::min(a[x], b[x]), -std::max(a[x], b[x])};
    }
    case QuerySpace::Kind::Orthant: {
      int x = space.axis1(), y = space.axis2();
      double s1 = space.sign1(), s2 = space.sign2();
      return {std::min(s1 * a[x], s1 * b[x]), std::min(s2 * a[y], s2 * b[y])};
    }
    default: throw UsageError("space " + space.name() + " has no containment key");
  }
}

Key2 range_key(const QuerySpace& space, const OrthoRange& r) {
  if (!space.accepts(r)) throw UsageError("range " + to_string(r) + " is not in space " + space.name());
  validate(r);
  BoundingBox b = to_box(r);
  if (space.kind() == QuerySpace::Kind::Band) return {b.lo[space.axis()], -b.hi[space.axis()]};
  auto frame = [&](int axis, int sign) { return sign > 0 ? b.lo[axis] : -b.hi[axis]; };
  return {frame(space.axis1(), space.sign1()), frame(space.axis2(), space.sign2())};
}

OrthoRange range_from_key(const QuerySpace& space, const Key2& k) {
  if (space.kind() == QuerySpace::Kind::Band) {
    if (space.dim() == 2) return Strip{space.axis(), k.k0, -k.k1};
    return Slab{space.dim(), space.axis(), k.k0, -k.k1};
  }
  if (space.kind() != QuerySpace::Kind::Orthant) throw UsageError("space " + space.name() + " has no key");
  double c1 = space.sign1() * k.k0, c2 = space.sign2() * k.k1;
  if (space.dim() == 2 && space.axis1() == 0 && space.axis2() == 1)
    return Quadrant{space.sign1(), space.sign2(), c1, c2};
  return TwoBox{space.dim(), space.axis1(), space.axis2(), space.sign1(), space.sign2(), c1, c2};
}

Orientation frame_orientation(const QuerySpace& space, const Dataset& s, const PointPair& phi) {
  const auto& a = s[phi.a];
  const auto& b = s[phi.b];
  int x = space.kind() == QuerySpace::Kind::Orthant ? space.axis1() : 0;
  int y = space.kind() == QuerySpace::Kind::Orthant ? space.axis2() : 1;
  double s1 = space.kind() == QuerySpace::Kind::Orthant ? space.sign1() : 1;
  double s2 = space.kind() == QuerySpace::Kind::Orthant ? space.sign2() : 1;
  return classify_pair(Coords{s1 * a[x], s2 * a[y], 0}, Coords{s1 * b[x], s2 * b[y], 0});
}

namespace {

// Smallest member of the family containing phi, as a box. Exists for every
// supported family (corner/interval/bounding box of the pair).
BoundingBox minimal_box(const QuerySpace& space, const Dataset& s, const PointPair& phi) {
  BoundingBox bb = BoundingBox::of(s, phi);
  BoundingBox b = BoundingBox::everything(space.dim());
  switch (space.kind()) {
    case QuerySpace::Kind::Band:
      b.lo[space.axis()] = bb.lo[space.axis()];
      b.hi[space.axis()] = bb.hi[space.axis()];
      return b;
    case QuerySpace::Kind::Orthant:
      for (auto [axis, sign] : {std::pair{space.axis1(), space.sign1()}, std::pair{space.axis2(), space.sign2()}}) {
        if (sign > 0)
          b.lo[axis] = bb.lo[axis];
        else
          b.hi[axis] = bb.hi[axis];
      }
      return b;
    case QuerySpace::Kind::Rectangles:
    case QuerySpace::Kind::Boxes3: return bb;
    case QuerySpace::Kind::Dominance3: b.lo = bb.lo; return b;
  }
  return b;
}

}  // namespace

OrthoRange smallest_range(const QuerySpace& space, const Dataset& s, const PointPair& phi) {
  if (space.dim() != s.dim()) throw UsageError("space dimension does not match dataset");
  switch (space.kind()) {
    case QuerySpace::Kind::Band: return range_from_key(space, pair_key(space, s, phi));
    case QuerySpace::Kind::Orthant:
      if (frame_orientation(space, s, phi) == Orientation::NeSw)
        throw UsageError("pair " + std::to_string(phi.a) + "," + std::to_string(phi.b) +
                         " is NE-SW in the frame of " + space.name() + "; the space is not well-behaved on it");
      return range_from_key(space, pair_key(space, s, phi));
    case QuerySpace::Kind::Rectangles: {
      BoundingBox b = BoundingBox::of(s, phi);
      return Rectangle{b.lo[0], b.hi[0], b.lo[1], b.hi[1]};
    }
    case QuerySpace::Kind::Boxes3: {
      BoundingBox b = BoundingBox::of(s, phi);
      return Box3{b.lo, b.hi};
    }
    case QuerySpace::Kind::Dominance3: return Dominance3{BoundingBox::of(s, phi).lo};
  }
  throw UsageError("unsupported space");
}

bool strongly_adjacent(const Dataset& s, const PointPair& phi, const PointPair& psi) {
  PointId shared;
  PointId other_phi, other_psi;
  if (phi.a == psi.a && phi.b != psi.b) {
    shared = phi.a, other_phi = phi.b, other_psi = psi.b;
  } else if (phi.a == psi.b && phi.b != psi.a) {
    shared = phi.a, other_phi = phi.b, other_psi = psi.a;
  } else if (phi.b == psi.a && phi.a != psi.b) {
    shared = phi.b, other_phi = phi.a, other_psi = psi.b;
  } else if (phi.b == psi.b && phi.a != psi.a) {
    shared = phi.b, other_phi = phi.a, other_psi = psi.a;
  } else {
    return false;
  }
  Coords pts[3] = {s[shared].coords, s[other_phi].coords, s[other_psi].coords};
  return BoundingBox::of(s.dim(), pts).is_vertex(s[shared].coords);
}

std::optional<WellBehavedViolation> check_well_behaved(const QuerySpace& space, const Dataset& s,
                                                       std::span<const PointPair> pairs) {
  if (space.dim() != s.dim()) throw UsageError("space dimension does not match dataset");
  // Condition 1 holds for every family here: minimal_box is the unique
  // smallest member. Condition 2 is checked over pairs sharing a point.
  std::vector<std::vector<std::uint32_t>> incident(s.size());
  for (std::uint32_t i = 0; i < pairs.size(); ++i) {
    incident[pairs[i].a].push_back(i);
    incident[pairs[i].b].push_back(i);
  }
  std::vector<BoundingBox> boxes;
  boxes.reserve(pairs.size());
  for (const auto& p : pairs) boxes.push_back(minimal_box(space, s, p));
  for (const auto& inc : incident) {
    for (std::size_t x = 0; x < inc.size(); ++x)
      for (std::size_t y = x + 1; y < inc.size(); ++y) {
        const auto& phi = pairs[inc[x]];
        const auto& psi = pairs[inc[y]];
        if (!strongly_adjacent(s, phi, psi)) continue;
        const auto& bx = boxes[inc[x]];
        const auto& by = boxes[inc[y]];
        if (!bx.contains(by) && !by.contains(bx))
          return WellBehavedViolation{phi, psi, "smallest ranges of strongly adjacent pairs are not nested"};
      }
  }
  return std::nullopt;
}

}  // namespace crcp
