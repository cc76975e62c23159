#include "crcp/anchored.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crcp {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kRouteSlack = 1e-9;  // angular margin before trusting a triangle-shaped sector

// Line normal (cos t, -sin t) for t = i*pi/(2k), exact at both ends.
std::array<double, 2> azimuth(int i, int k) {
  if (i == 0) return {1.0, 0.0};
  if (i == k) return {0.0, -1.0};
  double t = i * kHalfPi / k;
  return {std::cos(t), -std::sin(t)};
}

// Plane normal (cos t, cos t, -sqrt2 sin t), exact at both ends.
std::array<double, 3> polar(int j, int k) {
  if (j == 0) return {1.0, 1.0, 0.0};
  if (j == k) return {0.0, 0.0, -std::numbers::sqrt2};
  double t = j * kHalfPi / k;
  return {std::cos(t), std::cos(t), -std::numbers::sqrt2 * std::sin(t)};
}

Coords neg(const Coords& c) { return {-c[0], -c[1], -c[2]}; }

double dot(const Coords& n, const Coords& p, int dim) {
  double k = n[0] * p[0] + n[1] * p[1];
  if (dim == 3) k += n[2] * p[2];
  return k;
}

double below(double v) { return std::nextafter(v, -kInf); }

int sector_count(double angle_unit, double theta, int refinement) {
  if (refinement < 1) throw UsageError("sector refinement must be at least 1");
  double k = std::ceil(angle_unit / theta);
  if (!(k >= 1) || k > 1e5) throw UsageError("eps too small for an anchored index");
  return static_cast<int>(k) * refinement;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw UsageError("eps must be a positive finite number");
}

std::optional<PointPair> closest_anchored(const Dataset& s, const MonotoneNorm& norm, std::vector<PointId>& t,
                                          const BoundingBox& range, const Coords& o, AnchoredTrace* trace) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::erase_if(t, [&](PointId id) { return !range.contains(s[id].coords); });
  if (trace) trace->candidates += t.size();
  std::optional<PointPair> best;
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = x + 1; y < t.size(); ++y) {
      const auto& a = s[t[x]];
      const auto& b = s[t[y]];
      if (a.color == b.color) continue;
      Coords pts[2] = {a.coords, b.coords};
      if (!BoundingBox::of(s.dim(), pts).contains(o)) continue;
      if (trace) ++trace->pairs_compared;
      best = lighter_of(best, make_pair(s, norm, t[x], t[y]));
    }
  return best;
}

std::vector<WeightedPoint> weighted(const Dataset& s, const MonotoneNorm& norm, const int* sign) {
  std::vector<WeightedPoint> w(s.size());
  for (PointId i = 0; i < s.size(); ++i) {
    double wt = 0;
    for (int d = 0; d < s.dim(); ++d) wt += sign[d] * norm.axis_norm(d) * s[i][d];
    w[i] = {s[i].coords, wt, s[i].color, i};
  }
  return w;
}

}  // namespace

double normalized_angle(const MonotoneNorm& norm, const Coords& a, const Coords& o, const Coords& b) {
  Coords u{}, v{};
  for (int d = 0; d < norm.dim(); ++d) {
    u[d] = norm.axis_norm(d) * (a[d] - o[d]);
    v[d] = norm.axis_norm(d) * (b[d] - o[d]);
  }
  Coords c{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  double cross = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  return std::atan2(cross, u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
}

// ---------------------------------------------------------------- 2D

AnchoredIndex2D::Wedge AnchoredIndex2D::make_wedge(int s1, int s2, int i) const {
  auto scaled = [&](int idx) {
    auto g = azimuth(idx, k_);
    return Coords{g[0] * s1 * norm_.axis_norm(0), g[1] * s2 * norm_.axis_norm(1), 0.0};
  };
  Wedge w;
  w.upper = i == k_ ? Coords{0.0, -double(s2), 0.0} : scaled(i);
  w.lower = i == 1 ? Coords{-double(s1), 0.0, 0.0} : neg(scaled(i - 1));
  w.strict = i > 1;
  return w;
}

AnchoredIndex2D::AnchoredIndex2D(const Dataset& s, const MonotoneNorm& norm, double eps, AnchoredOptions opt)
    : s_(s), norm_(norm), eps_(eps) {
  check_eps(eps);
  if (s.dim() != 2 || norm.dim() != 2) throw UsageError("the 2D anchored index needs 2D points and norm");
  k_ = sector_count(kHalfPi, theta(), opt.sector_refinement);
  if (opt.store.leaf_size == 0) opt.store.leaf_size = 16;
  const int signs[4][2] = {{1, 1}, {-1, -1}, {-1, 1}, {1, -1}};
  for (int r = 0; r < 4; ++r) {
    Role& role = roles_[r];
    role.s1 = signs[r][0];
    role.s2 = signs[r][1];
    auto pts = weighted(s, norm, signs[r]);
    Coords box1{double(role.s1), 0, 0}, box2{0, double(role.s2), 0};
    for (int i = 1; i <= k_; ++i) {
      Wedge w = make_wedge(role.s1, role.s2, i);
      role.wedges.push_back(w);
      role.full.emplace_back(2, pts, std::vector<Coords>{box1, box2, w.lower, w.upper}, opt.store);
      role.vert.emplace_back(2, pts, std::vector<Coords>{box1, w.lower, w.upper}, opt.store);
      role.horiz.emplace_back(2, pts, std::vector<Coords>{box2, w.lower, w.upper}, opt.store);
    }
  }
}

std::size_t AnchoredIndex2D::node_count() const {
  std::size_t n = 0;
  for (const auto& r : roles_)
    for (int i = 0; i < k_; ++i) n += r.full[i].node_count() + r.vert[i].node_count() + r.horiz[i].node_count();
  return n;
}

int AnchoredIndex2D::sector_of(const Coords& p, const Coords& o, int s1, int s2) const {
  for (int i = 1; i <= k_; ++i) {
    Wedge w = make_wedge(s1, s2, i);
    double lo = dot(w.lower, o, 2);
    bool in_lower = w.strict ? dot(w.lower, p, 2) <= below(lo) : dot(w.lower, p, 2) <= lo;
    if (in_lower && dot(w.upper, p, 2) <= dot(w.upper, o, 2)) return i;
  }
  return 0;
}

void AnchoredIndex2D::collect(const Role& role, const Rectangle& r, const Coords& o, std::vector<PointId>& t,
                              AnchoredTrace* trace) const {
  double u1 = role.s1 > 0 ? r.xhi : -r.xlo;
  double u2 = role.s2 > 0 ? r.yhi : -r.ylo;
  // corner of the role's part of R, seen from o in normalized coordinates
  double d1 = norm_.axis_norm(0) * (u1 - role.s1 * o[0]);
  double d2 = norm_.axis_norm(1) * (u2 - role.s2 * o[1]);
  bool finite = std::isfinite(d1) && std::isfinite(d2);
  double corner = finite ? std::atan2(d1, d2) : 0.0;
  for (int i = 1; i <= k_; ++i) {
    const Wedge& w = role.wedges[static_cast<std::size_t>(i - 1)];
    double lo = dot(w.lower, o, 2);
    if (w.strict) lo = below(lo);
    double hi = dot(w.upper, o, 2);
    double a = (i - 1) * kHalfPi / k_, b = i * kHalfPi / k_;
    Top2Answer ans;
    if (finite && b <= corner - kRouteSlack) {
      double off[3] = {u2, lo, hi};  // sector leaves R through its y edge only
      ans = role.horiz[i - 1].query(off);
    } else if (finite && a >= corner + kRouteSlack) {
      double off[3] = {u1, lo, hi};
      ans = role.vert[i - 1].query(off);
    } else {
      double off[4] = {u1, u2, lo, hi};
      ans = role.full[i - 1].query(off);
    }
    if (trace) ++trace->store_queries;
    if (ans.first) t.push_back(ans.first->id);
    if (ans.second) t.push_back(ans.second->id);
  }
}

std::optional<PointPair> AnchoredIndex2D::orientation(const Role& a, const Role& b, const Rectangle& r,
                                                      const Coords& o, AnchoredTrace* trace) const {
  std::vector<PointId> t;
  collect(a, r, o, t, trace);
  collect(b, r, o, t, trace);
  return closest_anchored(s_, norm_, t, to_box(r), o, trace);
}

std::optional<PointPair> AnchoredIndex2D::query(const Rectangle& r, const Coords& o, AnchoredTrace* trace) const {
  BoundingBox box = to_box(r);
  if (!box.contains(o)) return std::nullopt;
  return lighter_of(orientation(roles_[0], roles_[1], r, o, trace), orientation(roles_[2], roles_[3], r, o, trace));
}

// ---------------------------------------------------------------- 3D

AnchoredIndex3D::Cell AnchoredIndex3D::make_cell(const std::array<int, 3>& s, int i, int j) const {
  const double w[3] = {s[0] * norm_.axis_norm(0), s[1] * norm_.axis_norm(1), s[2] * norm_.axis_norm(2)};
  auto az = [&](int idx) {
    auto g = azimuth(idx, k_);
    return Coords{g[0] * w[0], g[1] * w[1], 0.0};
  };
  auto po = [&](int idx) {
    auto h = polar(idx, k_);
    return Coords{h[0] * w[0], h[1] * w[1], h[2] * w[2]};
  };
  Cell c;
  c.az_upper = i == k_ ? Coords{0, -double(s[1]), 0} : az(i);
  c.az_lower = i == 1 ? Coords{-double(s[0]), 0, 0} : neg(az(i - 1));
  c.az_strict = i > 1;
  c.po_upper = j == k_ ? Coords{0, 0, -double(s[2])} : po(j);
  c.po_lower = neg(po(j - 1));
  c.po_strict = j > 1;
  return c;
}

AnchoredIndex3D::AnchoredIndex3D(const Dataset& s, const MonotoneNorm& norm, double eps, AnchoredOptions opt)
    : s_(s), norm_(norm), eps_(eps) {
  check_eps(eps);
  if (s.dim() != 3 || norm.dim() != 3) throw UsageError("the 3D anchored index needs 3D points and norm");
  k_ = sector_count(std::numbers::pi / 4.0, theta(), opt.sector_refinement);
  if (opt.store.leaf_size == 0) opt.store.leaf_size = 64;
  const std::array<int, 3> reps[4] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
  for (const auto& rep : reps)
    for (int flip : {1, -1}) {
      Role role;
      role.s = {rep[0] * flip, rep[1] * flip, rep[2] * flip};
      auto pts = weighted(s, norm, role.s.data());
      for (int i = 1; i <= k_; ++i)
        for (int j = 1; j <= k_; ++j) {
          role.geometry.push_back(make_cell(role.s, i, j));
          role.cells.emplace_back(3, pts, normals(role.s, role.geometry.back()), opt.store);
        }
      roles_.push_back(std::move(role));
    }
}

std::vector<Coords> AnchoredIndex3D::normals(const std::array<int, 3>& s, const Cell& c) {
  return {Coords{double(s[0]), 0, 0}, Coords{0, double(s[1]), 0}, Coords{0, 0, double(s[2])},
          c.az_lower, c.az_upper, c.po_lower, c.po_upper};
}

std::array<double, 7> AnchoredIndex3D::offsets(const std::array<int, 3>& s, const Cell& c, const Box3& box,
                                               const Coords& o) {
  std::array<double, 7> off;
  for (int d = 0; d < 3; ++d) off[d] = s[d] > 0 ? box.hi[d] : -box.lo[d];
  off[3] = dot(c.az_lower, o, 3);
  if (c.az_strict) off[3] = below(off[3]);
  off[4] = dot(c.az_upper, o, 3);
  off[5] = dot(c.po_lower, o, 3);
  if (c.po_strict) off[5] = below(off[5]);
  off[6] = dot(c.po_upper, o, 3);
  return off;
}

std::size_t AnchoredIndex3D::node_count() const {
  std::size_t n = 0;
  for (const auto& r : roles_)
    for (const auto& st : r.cells) n += st.node_count();
  return n;
}

std::pair<int, int> AnchoredIndex3D::cell_of(const Coords& p, const Coords& o, const std::array<int, 3>& s) const {
  Box3 everything{{-kInf, -kInf, -kInf}, {kInf, kInf, kInf}};
  for (int i = 1; i <= k_; ++i)
    for (int j = 1; j <= k_; ++j) {
      Cell c = make_cell(s, i, j);
      auto n = normals(s, c);
      auto off = offsets(s, c, everything, o);
      bool in = true;
      for (int d = 3; d < 7 && in; ++d) in = dot(n[d], p, 3) <= off[d];
      if (in) return {i, j};
    }
  return {0, 0};
}

std::optional<PointPair> AnchoredIndex3D::orientation(const Role& a, const Role& b, const Box3& box,
                                                      const Coords& o, AnchoredTrace* trace) const {
  std::vector<PointId> t;
  for (const Role* role : {&a, &b})
    for (std::size_t c = 0; c < role->cells.size(); ++c) {
        auto off = offsets(role->s, role->geometry[c], box, o);
        Top2Answer ans = role->cells[c].query(off);
        if (trace) ++trace->store_queries;
        if (ans.first) t.push_back(ans.first->id);
        if (ans.second) t.push_back(ans.second->id);
      }
  return closest_anchored(s_, norm_, t, to_box(box), o, trace);
}

std::optional<PointPair> AnchoredIndex3D::query(const Box3& box, const Coords& o, AnchoredTrace* trace) const {
  if (!to_box(box).contains(o)) return std::nullopt;
  std::optional<PointPair> best;
  for (std::size_t r = 0; r + 1 < roles_.size(); r += 2)
    best = lighter_of(best, orientation(roles_[r], roles_[r + 1], box, o, trace));
  return best;
}

}  // namespace crcp
