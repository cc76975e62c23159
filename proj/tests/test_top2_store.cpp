#include <doctest.h>

#include <cmath>

#include "crcp/oracle.hpp"
#include "crcp/top2_store.hpp"

using namespace crcp;

namespace {

double dot(const Coords& n, const Coords& p) { return n[0] * p[0] + n[1] * p[1] + n[2] * p[2]; }

bool lighter_point(const WeightedPoint& a, const WeightedPoint& b) {
  return a.weight != b.weight ? a.weight < b.weight : a.id < b.id;
}

// Written independently of the library's own scan.
Top2Answer reference(const std::vector<WeightedPoint>& pts, const std::vector<Coords>& normals,
                     const std::vector<double>& off) {
  std::vector<WeightedPoint> in;
  for (const auto& p : pts) {
    bool ok = true;
    for (std::size_t d = 0; d < normals.size(); ++d) ok = ok && dot(normals[d], p.coords) <= off[d];
    if (ok) in.push_back(p);
  }
  std::sort(in.begin(), in.end(), lighter_point);
  Top2Answer r;
  if (in.empty()) return r;
  r.first = in[0];
  for (const auto& p : in)
    if (p.color != in[0].color) {
      r.second = p;
      break;
    }
  return r;
}

std::optional<PointId> id_of(const std::optional<WeightedPoint>& p) {
  if (!p) return std::nullopt;
  return p->id;
}

bool same(const Top2Answer& x, const Top2Answer& y) {
  return id_of(x.first) == id_of(y.first) && id_of(x.second) == id_of(y.second);
}

std::vector<WeightedPoint> random_points(int dim, std::size_t m, std::uint32_t colors, Rng& r, bool lattice) {
  std::vector<WeightedPoint> pts(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (int d = 0; d < dim; ++d)
      pts[i].coords[static_cast<std::size_t>(d)] = lattice ? double(r.below(6)) : r.uniform(-1, 1);
    pts[i].weight = lattice ? double(r.below(10)) : r.uniform();
    pts[i].color = static_cast<Color>(r.below(colors));
    pts[i].id = static_cast<PointId>(i);
  }
  return pts;
}

std::vector<Coords> random_normals(int dim, int c, Rng& r) {
  std::vector<Coords> out;
  for (int i = 0; i < c; ++i) {
    Coords n{};
    for (int d = 0; d < dim; ++d) n[static_cast<std::size_t>(d)] = r.below(5) == 0 ? 0.0 : r.uniform(-1, 1);
    if (n[0] == 0 && n[1] == 0 && n[2] == 0) n[0] = 1;
    out.push_back(n);
  }
  return out;
}

// Offsets at the key of a random point, nudged, or unbounded.
std::vector<double> random_offsets(const std::vector<WeightedPoint>& pts, const std::vector<Coords>& normals,
                                   Rng& r) {
  std::vector<double> off;
  for (const auto& n : normals) {
    auto roll = r.below(8);
    if (roll == 0 || pts.empty())
      off.push_back(kInf);
    else if (roll < 5)
      off.push_back(dot(n, pts[r.below(pts.size())].coords));
    else
      off.push_back(dot(n, pts[r.below(pts.size())].coords) + r.uniform(0, 0.5));
  }
  return off;
}

}  // namespace

TEST_CASE("trivial stores") {
  std::vector<Coords> normals{{1, 0, 0}, {0, 1, 0}};
  Top2Store empty(2, {}, normals);
  auto a = empty.query(std::vector<double>{kInf, kInf});
  CHECK_FALSE(a.first);
  CHECK_FALSE(a.second);

  std::vector<WeightedPoint> pts{{{0, 0, 0}, 2, 0, 0}, {{1, 1, 0}, 1, 0, 1}, {{2, 0, 0}, 3, 1, 2}};
  Top2Store st(2, pts, normals);
  auto all = st.query(std::vector<double>{kInf, kInf});
  CHECK(id_of(all.first) == 1u);
  CHECK(id_of(all.second) == 2u);
  auto one = st.query(std::vector<double>{0.5, 0.5});
  CHECK(id_of(one.first) == 0u);
  CHECK_FALSE(one.second);
  CHECK_THROWS_AS(st.query(std::vector<double>{0}), UsageError);

  std::vector<WeightedPoint> mono{{{0, 0, 0}, 2, 4, 0}, {{1, 1, 0}, 1, 4, 1}};
  Top2Store m(2, mono, normals);
  CHECK_FALSE(m.query(std::vector<double>{kInf, kInf}).second);

  CHECK_THROWS_AS(Top2Store(2, pts, {Coords{1, 0, 0}}), UsageError);
  CHECK_THROWS_AS(Top2Store(2, pts, std::vector<Coords>(8, Coords{1, 0, 0})), UsageError);
  CHECK_THROWS_AS(Top2Store(2, pts, {Coords{1, 0, 0}, Coords{0, 0, 0}}), UsageError);
  CHECK_THROWS_AS(Top2Store(4, pts, normals), UsageError);
}

TEST_CASE("stores match the scan with and without cascading") {
  Rng r(41);
  for (int build = 0; build < 20; ++build) {
    int dim = build % 2 ? 3 : 2;
    int c = 2 + build % 6;
    bool lattice = build % 3 == 0;
    auto pts = random_points(dim, 300, 2 + build % 3, r, lattice);
    auto normals = random_normals(dim, c, r);
    for (std::size_t leaf : {1, 2, 4, 16}) {
      Top2Store on(dim, pts, normals, {true, leaf}), off(dim, pts, normals, {false, leaf});
      Rng q(build);
      for (int t = 0; t < 1000; ++t) {
        auto offs = random_offsets(pts, normals, q);
        auto want = reference(pts, normals, offs);
        auto x = on.query(offs), y = off.query(offs);
        CHECK(same(x, want));
        CHECK(same(y, want));
        CHECK(same(scan_top2(dim, pts, normals, offs), want));
      }
    }
  }
  // seven directions, the most any anchored cell uses
  auto pts = random_points(3, 200, 3, r, false);
  auto normals = random_normals(3, 7, r);
  Top2Store st(3, pts, normals);
  for (int t = 0; t < 1000; ++t) {
    auto offs = random_offsets(pts, normals, r);
    CHECK(same(st.query(offs), reference(pts, normals, offs)));
  }
}

TEST_CASE("merging answers of a partition gives the answer of the union") {
  Rng r(42);
  std::vector<Coords> normals{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  for (int trial = 0; trial < 200; ++trial) {
    auto pts = random_points(2, 40, 3, r, trial % 2 == 0);
    auto offs = random_offsets(pts, normals, r);
    std::size_t parts = 1 + r.below(5);
    std::vector<std::vector<WeightedPoint>> split(parts);
    for (const auto& p : pts) split[r.below(parts)].push_back(p);
    Top2Answer acc;
    for (const auto& part : split) acc = merge_top2(acc, Top2Store(2, part, normals).query(offs));
    CHECK(same(acc, reference(pts, normals, offs)));
  }
}

TEST_CASE("node counts grow like m log^(c-1) m") {
  Rng r(43);
  for (int c : {2, 3}) {
    auto normals = random_normals(2, c, r);
    double prev = 0;
    for (std::size_t m : {256, 512, 1024, 2048}) {
      auto pts = random_points(2, m, 2, r, false);
      Top2Store st(2, pts, normals, {true, 1});
      double lg = std::log2(static_cast<double>(m));
      double fitted = static_cast<double>(st.node_count()) / (static_cast<double>(m) * std::pow(lg, c - 1));
      if (prev > 0) {
        CHECK(fitted <= 2 * prev);
        CHECK(prev <= 2 * fitted);
      }
      prev = fitted;
    }
  }
}
