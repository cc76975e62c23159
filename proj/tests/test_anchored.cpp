#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "crcp/anchored.hpp"
#include "crcp/coreset.hpp"
#include "crcp/oracle.hpp"

using namespace crcp;

namespace {

const double kPi = std::numbers::pi;

std::vector<MonotoneNorm> norms(int dim) {
  if (dim == 2)
    return {MonotoneNorm::l1(2), MonotoneNorm::l2(2), MonotoneNorm::linf(2), MonotoneNorm::lp(3, 2),
            MonotoneNorm::weighted(1, {1, 3}), MonotoneNorm::weighted(2, {0.5, 2})};
  return {MonotoneNorm::l1(3), MonotoneNorm::l2(3), MonotoneNorm::linf(3), MonotoneNorm::weighted(1, {2, 1, 0.5})};
}

// Random rectangle around o with sides at point coordinates or random values.
Rectangle around(const Dataset& s, const Coords& o, Rng& r) {
  auto pick = [&](int axis, int side) {
    double c = r.below(2) ? s[r.below(s.size())][axis] : r.uniform(-0.2, 1.2);
    if (r.below(10) == 0) c = side * kInf;
    return side < 0 ? std::min(c, o[axis]) : std::max(c, o[axis]);
  };
  return Rectangle{pick(0, -1), pick(0, 1), pick(1, -1), pick(1, 1)};
}

Box3 around3(const Dataset& s, const Coords& o, Rng& r) {
  Box3 b;
  for (int d = 0; d < 3; ++d) {
    double lo = r.below(2) ? s[r.below(s.size())][d] : r.uniform(-0.2, 1.2);
    double hi = r.below(2) ? s[r.below(s.size())][d] : r.uniform(-0.2, 1.2);
    b.lo[d] = std::min(lo, o[d]);
    b.hi[d] = std::max(hi, o[d]);
  }
  return b;
}

Coords anchor_near(const Dataset& s, Rng& r, int dim) {
  Coords o{};
  for (int d = 0; d < dim; ++d) o[d] = r.below(3) == 0 ? s[r.below(s.size())][d] : r.uniform();
  return o;
}

void check_answer(const Dataset& s, const MonotoneNorm& norm, double eps, const OrthoRange& x, const Coords& o,
                  const std::optional<PointPair>& got) {
  auto want = brute_force_anchored(s, norm, x, o);
  REQUIRE(got.has_value() == want.has_value());
  if (!got) return;
  CHECK(s[got->a].color != s[got->b].color);
  CHECK(contains_pair(x, s, *got));
  CHECK(BoundingBox::of(s, *got).contains(o));
  CHECK(got->length == norm.distance(s[got->a], s[got->b]));
  CHECK(within_factor(got->length, want->length, eps));
}

}  // namespace

TEST_CASE("2D anchored examples") {
  auto l2 = MonotoneNorm::l2(2);
  AnchoredIndex2D none(Dataset(2), l2, 0.5);
  CHECK_FALSE(none.query(Rectangle{-1, 1, -1, 1}, Coords{0, 0, 0}));

  Dataset s(2, {make_point(1, 1, 0), make_point(-1, -1, 1)});
  for (double eps : {0.05, 0.5, 2.0}) {
    AnchoredIndex2D idx(s, l2, eps);
    auto got = idx.query(Rectangle{-2, 2, -2, 2}, Coords{0, 0, 0});
    REQUIRE(got);
    CHECK(got->a == 0);
    CHECK(got->b == 1);
    CHECK_FALSE(idx.query(Rectangle{-2, 2, -2, 2}, Coords{10, 10, 0}));
    CHECK_FALSE(idx.query(Rectangle{-2, 0.5, -2, 2}, Coords{0, 0, 0}));
    CHECK_FALSE(idx.query(Rectangle{-2, 2, -2, 2}, Coords{1.5, 0, 0}));
  }
  AnchoredIndex2D idx(s, l2, 0.1);
  CHECK(idx.theta() == doctest::Approx(0.1 / 8));
  CHECK(idx.sectors() == static_cast<int>(std::ceil(kPi / 2 / idx.theta())));
  CHECK_THROWS_AS(AnchoredIndex2D(s, l2, 0), UsageError);
  CHECK_THROWS_AS(AnchoredIndex2D(s, MonotoneNorm::l2(3), 1), UsageError);
}

TEST_CASE("3D anchored examples") {
  auto l2 = MonotoneNorm::l2(3);
  AnchoredIndex3D none(Dataset(3), l2, 1);
  Box3 big{{-2, -2, -2}, {2, 2, 2}};
  CHECK_FALSE(none.query(big, Coords{0, 0, 0}));
  Dataset s(3, {make_point(1, 1, 1, 0), make_point(-1, -1, -1, 1), make_point(1, 1, 1.5, 0)});
  AnchoredIndex3D idx(s, l2, 1);
  CHECK(idx.theta() == doctest::Approx(1.0 / 18));
  CHECK(idx.sectors() == static_cast<int>(std::ceil(kPi / 4 / idx.theta())));
  auto got = idx.query(big, Coords{0, 0, 0});
  REQUIRE(got);
  CHECK(got->a == 0);
  CHECK(got->b == 1);
  CHECK_FALSE(idx.query(big, Coords{3, 0, 0}));
  // the other anchored pair straddles o = (0.5, 0.5, 0.5) too, but is longer
  got = idx.query(big, Coords{0.5, 0.5, 0.5});
  REQUIRE(got);
  CHECK(got->a == 0);
}

TEST_CASE("sector mates subtend at most theta") {
  Rng r(51);
  for (int refinement : {1, 4}) {
    for (const auto& norm : {MonotoneNorm::l2(2), MonotoneNorm::weighted(1, {0.3, 2})}) {
      AnchoredOptions opt;
      opt.sector_refinement = refinement;
      AnchoredIndex2D idx(Dataset(2), norm, 1.0, opt);
      CHECK(kPi / 2 / idx.sectors() <= idx.theta());
      const int roles[4][2] = {{1, 1}, {-1, -1}, {-1, 1}, {1, -1}};
      for (const auto& role : roles) {
        Coords o{r.uniform(), r.uniform(), 0};
        std::map<int, std::vector<Coords>> by_sector;
        for (int i = 0; i < 4000; ++i) {
          Coords p{o[0] + role[0] * r.uniform(0, 2), o[1] + role[1] * r.uniform(0, 2), 0};
          if (i % 50 == 0) p[i % 100 == 0] = o[i % 100 == 0];  // on a quadrant edge
          int sec = idx.sector_of(p, o, role[0], role[1]);
          REQUIRE(sec >= 1);
          by_sector[sec].push_back(p);
        }
        CHECK(idx.sector_of(Coords{o[0] - role[0], o[1] + role[1], 0}, o, role[0], role[1]) == 0);
        for (const auto& [sec, pts] : by_sector)
          for (int t = 0; t < 200; ++t) {
            const auto& a = pts[r.below(pts.size())];
            const auto& b = pts[r.below(pts.size())];
            CHECK(normalized_angle(norm, a, o, b) <= kPi / 2 / idx.sectors() + 1e-12);
          }
      }
    }
  }
}

// With the default cell count the cells are wider than theta (up to about
// 3.3 pi/(4k)); four times as many cells per angle bring them under theta.
TEST_CASE("3D cell mates subtend at most theta") {
  Rng r(52);
  for (int refinement : {1, 4}) {
    for (const auto& norm : {MonotoneNorm::l2(3), MonotoneNorm::weighted(2, {1, 0.5, 3})}) {
      AnchoredOptions opt;
      opt.sector_refinement = refinement;
      AnchoredIndex3D idx(Dataset(3), norm, 2.0, opt);
      double bound = refinement == 1 ? 3.5 * kPi / 4 / idx.sectors() : idx.theta();
      for (const std::array<int, 3> s : {std::array{1, 1, 1}, std::array{-1, 1, -1}, std::array{-1, -1, -1}}) {
        Coords o{r.uniform(), r.uniform(), r.uniform()};
        std::map<std::pair<int, int>, std::vector<Coords>> by_cell;
        for (int i = 0; i < 6000; ++i) {
          Coords p{};
          for (int d = 0; d < 3; ++d) p[d] = o[d] + s[d] * r.uniform(0, 2);
          auto cell = idx.cell_of(p, o, s);
          REQUIRE(cell.first >= 1);
          by_cell[cell].push_back(p);
        }
        for (const auto& [cell, pts] : by_cell)
          for (int t = 0; t < 50; ++t) {
            const auto& a = pts[r.below(pts.size())];
            const auto& b = pts[r.below(pts.size())];
            CHECK(normalized_angle(norm, a, o, b) <= bound + 1e-12);
          }
      }
    }
  }
}

TEST_CASE("L1-nearest in a quadrant is the extreme coordinate sum") {
  Rng r(53);
  for (int trial = 0; trial < 500; ++trial) {
    int sx = r.below(2) ? 1 : -1, sy = r.below(2) ? 1 : -1;
    Coords o{r.uniform(), r.uniform(), 0};
    std::size_t by_l1 = 0, by_sum = 0;
    double best_l1 = kInf, best_sum = kInf;
    for (std::size_t i = 0; i < 20; ++i) {
      Coords p{o[0] + sx * r.uniform(), o[1] + sy * r.uniform(), 0};
      double l1 = std::fabs(p[0] - o[0]) + std::fabs(p[1] - o[1]);
      double sum = sx * p[0] + sy * p[1];
      if (l1 < best_l1) best_l1 = l1, by_l1 = i;
      if (sum < best_sum) best_sum = sum, by_sum = i;
    }
    CHECK(by_l1 == by_sum);
  }
}

TEST_CASE("angle condition bounds the pair length") {
  // a*, a on one side of o and b*, b on the opposite side, each starred point
  // within theta of its partner and no farther from o in L1.
  Rng r(54);
  for (int dim : {2, 3}) {
    double eps = 0.5;
    double theta = dim == 2 ? eps / 8 : eps / 18;
    for (const auto& norm : norms(dim)) {
      auto sample = [&](int side, Coords& far, Coords& near) {
        Coords u{}, v{};
        double l1u = 0;
        for (int d = 0; d < dim; ++d) l1u += (u[d] = r.uniform(0.01, 1));
        // tilt u by a small random vector, then shrink to no larger L1 size
        for (int t = 0; t < 100; ++t) {
          for (int d = 0; d < dim; ++d) v[d] = std::max(0.0, u[d] + r.uniform(-1, 1) * theta * l1u / dim);
          Coords zero{};
          if (normalized_angle(MonotoneNorm::l2(dim), u, zero, v) <= theta) break;
          v = u;
        }
        double l1v = 0;
        for (int d = 0; d < dim; ++d) l1v += v[d];
        double shrink = r.uniform(0.2, 1) * l1u / l1v;
        for (int d = 0; d < dim; ++d) {
          far[d] = side * u[d] / norm.axis_norm(d);
          near[d] = side * v[d] * shrink / norm.axis_norm(d);
        }
      };
      for (int t = 0; t < 5000; ++t) {
        Coords a{}, as{}, b{}, bs{};
        sample(1, a, as);
        sample(-1, b, bs);
        CHECK(norm.distance(as, bs) <= (1 + eps) * norm.distance(a, b));
      }
    }
  }
}

TEST_CASE("2D anchored answers are within 1+eps of the anchored optimum") {
  Rng r(55);
  for (int trial = 0; trial < 16; ++trial) {
    auto dist = static_cast<Distribution>(trial % 3);
    Dataset s = gen_random(60, 2 + trial % 3, dist, 2, r.next());
    auto norm = norms(2)[trial % 6];
    double eps = trial % 2 ? 0.1 : 0.5;
    AnchoredOptions opt;
    opt.store.leaf_size = trial % 4 == 0 ? 1 : 0;
    opt.store.cascading = trial % 3 != 1;
    AnchoredIndex2D idx(s, norm, eps, opt);
    for (int q = 0; q < 150; ++q) {
      Coords o = anchor_near(s, r, 2);
      Rectangle rect = around(s, o, r);
      AnchoredTrace tr;
      auto got = idx.query(rect, o, &tr);
      check_answer(s, norm, eps, rect, o, got);
      CHECK(tr.store_queries <= 4u * static_cast<std::size_t>(idx.sectors()));
    }
  }
}

TEST_CASE("3D anchored answers are within 1+eps of the anchored optimum") {
  Rng r(56);
  for (int trial = 0; trial < 6; ++trial) {
    Dataset s = gen_random(30, 2 + trial % 2, static_cast<Distribution>(trial % 3), 3, r.next());
    auto norm = norms(3)[trial % 4];
    double eps = trial % 2 ? 1.0 : 2.0;
    AnchoredIndex3D idx(s, norm, eps);
    for (int q = 0; q < 60; ++q) {
      Coords o = anchor_near(s, r, 3);
      Box3 box = around3(s, o, r);
      check_answer(s, norm, eps, box, o, idx.query(box, o));
    }
  }
}
