// Acceptance gate: one PASS/FAIL line per criterion. Exit status 0 iff all pass.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "crcp/anchored.hpp"
#include "crcp/bench.hpp"
#include "crcp/coreset.hpp"
#include "crcp/crcp_index.hpp"
#include "crcp/oracle.hpp"
#include "crcp/pair_locator.hpp"
#include "crcp/top2_store.hpp"

using namespace crcp;

namespace {

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failures_ == 0; }
  std::string text() const {
    std::ostringstream out;
    out << checks_ << " checks";
    if (!notes_.empty()) out << "; " << notes_;
    if (failures_) out << "; " << failures_ << " failed, first: " << first_;
    return out.str();
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::string first_, notes_;
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

const std::array<double, 4> kEps{0.05, 0.1, 0.5, 1.0};

// L1, L2, L-infinity, weighted L1.
MonotoneNorm norm_of(int which, int dim) {
  switch (which % 4) {
    case 0: return MonotoneNorm::l1(dim);
    case 1: return MonotoneNorm::l2(dim);
    case 2: return MonotoneNorm::linf(dim);
    default: return dim == 2 ? MonotoneNorm::weighted(1, {1, 2.5}) : MonotoneNorm::weighted(1, {1, 2.5, 0.75});
  }
}

// ---------------------------------------------------------------- 1

bool soundness(Tally& t) {
  Rng r(101);
  std::size_t datasets = 0, queries = 0;
  double worst = 1;
  auto run = [&](IndexKind kind, const Dataset& s, const MonotoneNorm& norm, double eps,
                 const std::vector<RangeQuery>& work, const BuildOptions& opt = {}) {
    BenchOptions bo;
    bo.build = opt;
    bo.keep_records = false;
    auto rep = run_benchmark(kind, s, norm, eps, work, 0, bo);
    ++datasets;
    queries += work.size();
    worst = std::max(worst, rep.max_ratio);
    t.check(rep.passed(), std::string(to_string(kind)) + " n=" + std::to_string(s.size()) + " eps=" + fmt(eps) +
                              " " + norm.to_string() + ": " + rep.violation.value_or(""));
    t.check(rep.max_ratio <= 1 + eps, "ratio above 1+eps");
  };

  // 2D: canonical ranges for strips and quadrants, 200 random rectangles for rect kinds
  const IndexKind kinds2[] = {IndexKind::Strip, IndexKind::Quadrant, IndexKind::Rect1, IndexKind::Rect2};
  for (int i = 0; i < 80; ++i) {
    IndexKind kind = kinds2[i % 4];
    auto norm = norm_of(i / 4, 2);
    double eps = kEps[static_cast<std::size_t>((i / 16) % 4)];
    std::uint32_t colors = 2 + static_cast<std::uint32_t>(i % 4);
    auto dist = static_cast<Distribution>(i % 3);
    bool rect = kind == IndexKind::Rect1 || kind == IndexKind::Rect2;
    std::size_t n = rect ? 200 : 100 + 25 * static_cast<std::size_t>(i % 3);
    Dataset s = gen_random(n, colors, dist, 2, r.next());
    BuildOptions opt;
    opt.cascading = i % 5 != 0;
    auto work = rect ? random_workload(kind, s, 200, r.next()) : canonical_workload(kind, s);
    run(kind, s, norm, eps, work, opt);
  }

  // 3D: every slab, 2-box and dominance corner range
  for (int i = 0; i < 30; ++i) {
    auto norm = norm_of(i, 3);
    std::uint32_t colors = 2 + static_cast<std::uint32_t>(i % 4);
    auto dist = static_cast<Distribution>(i % 3);
    BuildOptions opt;
    if (i < 10) {
      Dataset s = gen_random(60 + 4 * static_cast<std::size_t>(i), colors, dist, 3, r.next());
      run(IndexKind::Slab, s, norm, kEps[static_cast<std::size_t>(i % 4)], canonical_workload(IndexKind::Slab, s));
    } else if (i < 20) {
      Dataset s = gen_random(40 + 6 * static_cast<std::size_t>(i - 10), colors, dist, 3, r.next());
      if (i % 2) opt.two_box_spaces = all_two_box_spaces();
      run(IndexKind::TwoBox, s, norm, kEps[static_cast<std::size_t>(i % 4)],
          canonical_workload(IndexKind::TwoBox, s, opt), opt);
    } else {
      // the dominance index carries a 3D anchored index whose size grows as eps^-2
      Dataset s = gen_random(10 + static_cast<std::size_t>(i % 3), colors, dist, 3, r.next());
      run(IndexKind::Dom3, s, norm, i % 2 ? 0.5 : 1.0, canonical_workload(IndexKind::Dom3, s));
    }
  }
  t.check(datasets >= 100, "fewer than 100 datasets");
  t.note(std::to_string(datasets) + " datasets, " + std::to_string(queries) + " ranges, max ratio " + fmt(worst, 6));
  return t.ok();
}

// ---------------------------------------------------------------- 2

std::vector<QuerySpace> keyed_spaces() {
  std::vector<QuerySpace> out{QuerySpace::vertical_strips(), QuerySpace::horizontal_strips()};
  for (int sx : {1, -1})
    for (int sy : {1, -1}) out.push_back(QuerySpace::quadrants(sx, sy));
  for (int a = 0; a < 3; ++a) out.push_back(QuerySpace::slabs(a));
  for (const auto& sp : all_two_box_spaces()) out.push_back(sp);
  return out;
}

// The pair set a coreset is built from: all bichromatic pairs, or for
// orthant spaces the strictly NW-SE ones.
std::vector<PointPair> coreset_input(const Dataset& s, const MonotoneNorm& norm, const QuerySpace& space) {
  auto pairs = bichromatic_pairs(s, norm);
  if (space.kind() == QuerySpace::Kind::Orthant)
    std::erase_if(pairs, [&](const PointPair& p) { return frame_orientation(space, s, p) != Orientation::NwSe; });
  return pairs;
}

bool coreset_validity(Tally& t) {
  Rng r(202);
  std::size_t built = 0, kept = 0, input = 0;
  auto spaces = keyed_spaces();
  for (const auto& space : spaces) {
    for (int i = 0; i < 50; ++i) {
      int dim = space.dim();
      std::size_t n = dim == 2 ? 20 + r.below(41) : 12 + r.below(19);
      Dataset s = gen_random(n, 2 + static_cast<std::uint32_t>(i % 4), static_cast<Distribution>(i % 3), dim,
                             r.next());
      auto norm = norm_of(i, dim);
      double eps = kEps[static_cast<std::size_t>(i % 4)];
      auto pairs = coreset_input(s, norm, space);
      auto res = build_coreset(s, pairs, space, norm, eps);
      ++built;
      kept += res.pairs.size();
      input += pairs.size();
      std::string tag = space.name() + " instance " + std::to_string(i);
      auto bad = verify_coreset(s, pairs, res.pairs, space, eps);
      t.check(!bad, tag + ": coreset misses range " + (bad ? to_string(*bad) : ""));
      t.check(!check_kept_gap(s, res.pairs, eps), tag + ": kept pairs without the length gap");
    }
  }
  t.note(std::to_string(built) + " coresets over " + std::to_string(spaces.size()) + " spaces, kept " +
         std::to_string(kept) + " of " + std::to_string(input) + " pairs");
  return t.ok();
}

// ---------------------------------------------------------------- 3

bool size_scaling(Tally& t) {
  const std::vector<double> eps{0.1, 1.0};
  const std::vector<std::size_t> ns{128, 256, 512, 1024, 2048};
  SizeGrowthOptions opt;
  opt.trials = 3;
  // rows are grouped by n, one per eps
  auto at = [&](const std::vector<SizeGrowthRow>& rows, std::size_t ni, std::size_t ei) -> const SizeGrowthRow& {
    return rows[ni * eps.size() + ei];
  };
  for (const auto& space : {QuerySpace::vertical_strips(), QuerySpace::horizontal_strips()}) {
    auto rows = measure_size_growth(space, MonotoneNorm::l2(2), eps, ns, opt);
    double worst = 1;
    for (std::size_t ei = 0; ei < eps.size(); ++ei)
      for (std::size_t ni = 0; ni + 1 < ns.size(); ++ni) {
        double a = at(rows, ni, ei).fitted, b = at(rows, ni + 1, ei).fitted;
        double ratio = std::max(a, b) / std::min(a, b);
        worst = std::max(worst, ratio);
        t.check(ratio <= 2.0, space.name() + " eps=" + fmt(eps[ei]) + " fitted constant moved " + fmt(ratio) +
                                  "x from n=" + std::to_string(ns[ni]));
      }
    for (std::size_t ni = 0; ni < ns.size(); ++ni)
      t.check(at(rows, ni, 0).mean_size >= at(rows, ni, 1).mean_size,
              space.name() + " n=" + std::to_string(ns[ni]) + ": smaller eps gave a smaller coreset");
    t.note(space.name() + " worst ratio " + fmt(worst) + ", |coreset| at n=2048: " +
           fmt(at(rows, 4, 0).mean_size, 6) + " (eps 0.1) / " + fmt(at(rows, 4, 1).mean_size, 6) + " (eps 1)");
  }
  // Quadrant coresets stay far below the bound, so their fitted constant
  // keeps falling; reported, not gated.
  auto quad = measure_size_growth(QuerySpace::ne_quadrants(), MonotoneNorm::l2(2), eps, ns, opt);
  std::string sizes;
  for (std::size_t ni = 0; ni < ns.size(); ++ni) sizes += " " + fmt(at(quad, ni, 0).mean_size, 4);
  t.note("ne-quadrant sizes at eps 0.1:" + sizes);
  return t.ok();
}

// ---------------------------------------------------------------- 4

void check_part(Tally& t, const OrthantPart& p, const std::string& where) {
  t.check(p.nn_pairs() <= p.subset_size(), where + ": " + std::to_string(p.nn_pairs()) + " nn pairs on " +
                                               std::to_string(p.subset_size()) + " points");
}

bool nn_pair_bound(Tally& t) {
  Rng r(404);
  std::size_t parts = 0;
  for (int i = 0; i < 40; ++i) {
    Dataset s = gen_random(50 + r.below(151), 2 + static_cast<std::uint32_t>(i % 4), static_cast<Distribution>(i % 3),
                           2, r.next());
    auto norm = norm_of(i, 2);
    double eps = kEps[static_cast<std::size_t>(i % 4)];
    OrthantIndex quad(s, norm, eps);
    for (std::size_t k = 0; k < quad.spaces().size(); ++k, ++parts) check_part(t, quad.part(k), "quadrant");
    if (i % 4 == 0) {
      RectIndexV1 v1(s, norm, 1.0);
      const auto& nodes = v1.primary().nodes();
      for (std::size_t u = 0; u < nodes.size(); ++u) {
        if (nodes[u].left < 0) continue;
        for (const auto& quads : v1.secondary(static_cast<int>(u)).parts)
          for (const auto& p : quads)
            if (p) check_part(t, *p, "rect-v1 secondary"), ++parts;
      }
    }
  }
  for (int i = 0; i < 20; ++i) {
    Dataset s = gen_random(30 + r.below(51), 2 + static_cast<std::uint32_t>(i % 3), static_cast<Distribution>(i % 3),
                           3, r.next());
    auto norm = norm_of(i, 3);
    BuildOptions opt;
    opt.two_box_spaces = all_two_box_spaces();
    OrthantIndex boxes(s, norm, kEps[static_cast<std::size_t>(i % 4)], opt);
    for (std::size_t k = 0; k < boxes.spaces().size(); ++k, ++parts) check_part(t, boxes.part(k), "2-box");
    if (i % 5 == 0) {
      Dataset small = gen_random(24, 2, static_cast<Distribution>(i % 3), 3, r.next());
      Dominance3Index dom(small, norm, 1.0);
      for (int a = 0; a < 3; ++a)
        for (std::size_t v = 0; v < dom.tree(a).nodes().size(); ++v)
          if (const auto& p = dom.part(a, static_cast<int>(v))) check_part(t, *p, "dominance 2-box"), ++parts;
    }
  }
  t.note(std::to_string(parts) + " quadrant/2-box parts");
  return t.ok();
}

// ---------------------------------------------------------------- 5

bool hardness(Tally& t) {
  auto l2 = MonotoneNorm::l2(2);
  std::string counts;
  for (std::size_t n : {8, 16, 32, 64}) {
    auto strip = count_candidate_pairs(gen_adversarial_strip(n), QuerySpace::vertical_strips(), l2);
    auto quad = count_candidate_pairs(gen_adversarial_quadrant(n), QuerySpace::ne_quadrants(), l2);
    t.check(strip >= n * n / 4, "strip candidates below n^2/4 at n=" + std::to_string(n));
    t.check(quad >= n * n / 4, "quadrant candidates below n^2/4 at n=" + std::to_string(n));
    counts += " n=" + std::to_string(n) + ":" + std::to_string(strip) + "/" + std::to_string(quad);
    Dataset mono = gen_random(n, 1, Distribution::UniformBox, 2, n);
    t.check(count_candidate_pairs(mono, QuerySpace::vertical_strips(), l2) == 0, "monochromatic strip control");
    t.check(count_candidate_pairs(mono, QuerySpace::ne_quadrants(), l2) == 0, "monochromatic quadrant control");
  }
  t.note("candidates (strip/quadrant)" + counts);
  return t.ok();
}

// ---------------------------------------------------------------- 6

double random_coord(const std::vector<double>& values, Rng& r) {
  auto roll = r.below(10);
  if (roll == 0) return -kInf;
  if (roll == 1) return kInf;
  if (roll < 6) return values[r.below(values.size())];
  return r.uniform(-0.1, 1.1);
}

OrthoRange random_member(const QuerySpace& space, const Dataset& s, Rng& r) {
  if (space.kind() == QuerySpace::Kind::Band) {
    auto vals = axis_values(s, space.axis());
    double a = random_coord(vals, r), b = random_coord(vals, r);
    if (a > b) std::swap(a, b);
    return range_from_key(space, {a, -b});
  }
  double c1 = random_coord(axis_values(s, space.axis1()), r);
  double c2 = random_coord(axis_values(s, space.axis2()), r);
  return range_from_key(space, {space.sign1() * c1, space.sign2() * c2});
}

std::optional<std::uint32_t> locator_scan(const Dataset& s, const std::vector<PointPair>& pairs, const OrthoRange& x) {
  std::optional<std::uint32_t> best;
  for (std::uint32_t i = 0; i < pairs.size(); ++i)
    if (contains_pair(x, s, pairs[i]) && (!best || pairs[i].length < pairs[*best].length)) best = i;
  return best;
}

double dot3(const Coords& n, const Coords& p) { return n[0] * p[0] + n[1] * p[1] + n[2] * p[2]; }

std::pair<std::optional<PointId>, std::optional<PointId>> top2_scan(const std::vector<WeightedPoint>& pts,
                                                                   const std::vector<Coords>& normals,
                                                                   const std::vector<double>& off) {
  const WeightedPoint* first = nullptr;
  auto lighter_pt = [](const WeightedPoint& a, const WeightedPoint& b) {
    return a.weight != b.weight ? a.weight < b.weight : a.id < b.id;
  };
  auto inside = [&](const WeightedPoint& p) {
    for (std::size_t d = 0; d < normals.size(); ++d)
      if (dot3(normals[d], p.coords) > off[d]) return false;
    return true;
  };
  for (const auto& p : pts)
    if (inside(p) && (!first || lighter_pt(p, *first))) first = &p;
  if (!first) return {};
  const WeightedPoint* second = nullptr;
  for (const auto& p : pts)
    if (inside(p) && p.color != first->color && (!second || lighter_pt(p, *second))) second = &p;
  return {first->id, second ? std::optional<PointId>(second->id) : std::nullopt};
}

std::pair<std::optional<PointId>, std::optional<PointId>> ids(const Top2Answer& a) {
  return {a.first ? std::optional<PointId>(a.first->id) : std::nullopt,
          a.second ? std::optional<PointId>(a.second->id) : std::nullopt};
}

bool substructures(Tally& t) {
  Rng r(606);
  std::vector<QuerySpace> spaces{QuerySpace::vertical_strips(), QuerySpace::horizontal_strips()};
  for (int sx : {1, -1})
    for (int sy : {1, -1}) spaces.push_back(QuerySpace::quadrants(sx, sy));
  for (int a = 0; a < 3; ++a) spaces.push_back(QuerySpace::slabs(a));
  spaces.push_back(QuerySpace::two_boxes(0, 2, 1, -1));
  spaces.push_back(QuerySpace::two_boxes(1, 2, -1, 1));

  std::size_t locator_queries = 0, store_queries = 0;
  for (int build = 0; build < 20; ++build) {
    for (const auto& space : spaces) {
      Dataset s = gen_random(60, 2, build % 2 ? Distribution::Lattice : Distribution::UniformBox, space.dim(),
                             r.next());
      // integer lengths so that ties are frequent
      std::vector<PointPair> pairs;
      for (int i = 0; i < 500; ++i) {
        auto a = static_cast<PointId>(r.below(s.size())), b = static_cast<PointId>(r.below(s.size()));
        pairs.push_back({std::min(a, b), std::max(a, b), static_cast<double>(r.below(20))});
      }
      PairLocator on(s, pairs, space, true), off(s, pairs, space, false);
      for (int q = 0; q < 1000; ++q, ++locator_queries) {
        OrthoRange x = random_member(space, s, r);
        auto want = locator_scan(s, pairs, x);
        auto a = on.query_index(x), b = off.query_index(x);
        t.check(a == want && b == want, space.name() + " locator differs from the scan on " + to_string(x));
      }
    }

    int dim = build % 2 ? 3 : 2, c = 2 + build % 6;
    std::vector<WeightedPoint> pts(300);
    bool lattice = build % 3 == 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int d = 0; d < dim; ++d)
        pts[i].coords[static_cast<std::size_t>(d)] = lattice ? double(r.below(6)) : r.uniform(-1, 1);
      pts[i].weight = lattice ? double(r.below(10)) : r.uniform();
      pts[i].color = static_cast<Color>(r.below(3));
      pts[i].id = static_cast<PointId>(i);
    }
    std::vector<Coords> normals;
    for (int i = 0; i < c; ++i) {
      Coords n{};
      for (int d = 0; d < dim; ++d) n[static_cast<std::size_t>(d)] = r.below(5) == 0 ? 0.0 : r.uniform(-1, 1);
      if (n[0] == 0 && n[1] == 0 && n[2] == 0) n[0] = 1;
      normals.push_back(n);
    }
    Top2Store::Options small_on{true, 2}, small_off{false, 2};
    Top2Store on(dim, pts, normals, small_on), off(dim, pts, normals, small_off);
    for (int q = 0; q < 1000; ++q, ++store_queries) {
      std::vector<double> offs;
      for (const auto& n : normals) {
        auto roll = r.below(8);
        double base = dot3(n, pts[r.below(pts.size())].coords);
        offs.push_back(roll == 0 ? kInf : roll < 5 ? base : base + r.uniform(0, 0.5));
      }
      auto want = top2_scan(pts, normals, offs);
      auto a = ids(on.query(offs)), b = ids(off.query(offs));
      t.check(a == want, "top-2 store with cascading differs from the scan");
      t.check(b == want, "top-2 store without cascading differs from the scan");
      t.check(a == b, "cascading changes a top-2 answer");
    }
  }
  t.note(std::to_string(locator_queries) + " locator queries over " + std::to_string(spaces.size()) +
         " spaces, " + std::to_string(store_queries) + " top-2 queries");
  return t.ok();
}

// ---------------------------------------------------------------- 7

bool anchored(Tally& t) {
  Rng r(707);
  std::size_t queries = 0, empty_anchor = 0;
  double worst = 1;
  auto judge = [&](const Dataset& s, const MonotoneNorm& norm, double eps, const OrthoRange& x, const Coords& o,
                   const std::optional<PointPair>& got) {
    RangeQuery q{x, o};
    auto want = brute_force_anchored(s, norm, x, o);
    auto bad = check_answer(s, norm, eps, q, got, want);
    t.check(!bad, bad.value_or(""));
    if (got && want && want->length > 0) worst = std::max(worst, got->length / want->length);
    ++queries;
  };
  auto coord = [&](const Dataset& s, int axis) { return r.below(3) == 0 ? s[r.below(s.size())][axis] : r.uniform(); };

  for (int i = 0; i < 100; ++i) {
    Dataset s = gen_random(40 + r.below(41), 2 + static_cast<std::uint32_t>(i % 4), static_cast<Distribution>(i % 3),
                           2, r.next());
    auto norm = norm_of(i, 2);
    double eps = kEps[static_cast<std::size_t>(i % 4)];
    AnchoredIndex2D idx(s, norm, eps);
    for (int q = 0; q < 30; ++q) {
      Coords o{coord(s, 0), coord(s, 1), 0};
      auto side = [&](int axis, int sgn) {
        double c = r.below(10) == 0 ? sgn * kInf : coord(s, axis);
        return sgn < 0 ? std::min(c, o[static_cast<std::size_t>(axis)]) : std::max(c, o[static_cast<std::size_t>(axis)]);
      };
      Rectangle x{side(0, -1), side(0, 1), side(1, -1), side(1, 1)};
      judge(s, norm, eps, x, o, idx.query(x, o));
    }
    Coords out{2.5, 0.5, 0};
    t.check(!idx.query(Rectangle{-1, 2, -1, 2}, out), "2D anchor outside the range gave an answer");
    ++empty_anchor;
  }
  for (int i = 0; i < 50; ++i) {
    Dataset s = gen_random(20 + r.below(21), 2 + static_cast<std::uint32_t>(i % 3), static_cast<Distribution>(i % 3),
                           3, r.next());
    auto norm = norm_of(i, 3);
    double eps = std::array{0.5, 1.0, 2.0}[static_cast<std::size_t>(i % 3)];
    AnchoredIndex3D idx(s, norm, eps);
    for (int q = 0; q < 10; ++q) {
      Coords o{coord(s, 0), coord(s, 1), coord(s, 2)};
      Box3 b;
      for (std::size_t d = 0; d < 3; ++d) {
        b.lo[d] = std::min(coord(s, static_cast<int>(d)), o[d]);
        b.hi[d] = std::max(coord(s, static_cast<int>(d)), o[d]);
      }
      judge(s, norm, eps, b, o, idx.query(b, o));
    }
    t.check(!idx.query(Box3{{-1, -1, -1}, {2, 2, 2}}, Coords{0.5, 3, 0.5}), "3D anchor outside the box gave an answer");
    ++empty_anchor;
  }
  t.note(std::to_string(queries) + " anchored queries, max ratio " + fmt(worst, 6) + ", " +
         std::to_string(empty_anchor) + " outside-anchor checks");
  return t.ok();
}

// ---------------------------------------------------------------- 8

bool node_scaling(Tally& t) {
  const std::vector<std::size_t> ns{128, 256, 512, 1024, 2048};
  for (auto kind : {IndexKind::Strip, IndexKind::Quadrant, IndexKind::Rect2, IndexKind::Rect1}) {
    auto rows = measure_node_scaling(kind, ns, 0.5, MonotoneNorm::l2(2), 808);
    double worst = max_consecutive_ratio(rows);
    t.check(worst <= 2.0, std::string(to_string(kind)) + " fitted constant moved " + fmt(worst) + "x");
    t.note(std::string(to_string(kind)) + " " + fmt(worst));
  }
  return t.ok();
}

// ---------------------------------------------------------------- 9

bool norm_layer(Tally& t) {
  Rng r(909);
  std::vector<MonotoneNorm> norms;
  for (int dim : {2, 3}) {
    norms.push_back(MonotoneNorm::l1(dim));
    norms.push_back(MonotoneNorm::l2(dim));
    norms.push_back(MonotoneNorm::linf(dim));
    norms.push_back(MonotoneNorm::lp(3, dim));
    norms.push_back(norm_of(3, dim));
    norms.push_back(dim == 2 ? MonotoneNorm::weighted(2, {0.5, 4}) : MonotoneNorm::weighted(2, {0.5, 4, 1.5}));
    norms.push_back(dim == 2 ? MonotoneNorm::weighted(kInf, {3, 0.2}) : MonotoneNorm::weighted(kInf, {3, 0.2, 1}));
  }
  const int samples = 10000;
  for (const auto& n : norms) {
    int dim = n.dim();
    auto vec = [&] {
      Coords v{};
      for (int d = 0; d < dim; ++d) v[static_cast<std::size_t>(d)] = r.uniform(-10, 10);
      return v;
    };
    std::size_t bad_mono = 0, bad_metric = 0;
    std::vector<std::pair<Coords, Coords>> pairs;
    for (int i = 0; i < samples; ++i) {
      // monotone: shrinking every coordinate's magnitude never increases the norm
      Coords x = vec(), y{};
      for (int d = 0; d < dim; ++d) y[static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)] * r.uniform();
      if (n(std::span<const double>(y.data(), static_cast<std::size_t>(dim))) >
          n(std::span<const double>(x.data(), static_cast<std::size_t>(dim))))
        ++bad_mono;
      Coords a = vec(), b = vec(), c = vec();
      double ab = n.distance(a, b), ba = n.distance(b, a), bc = n.distance(b, c), ac = n.distance(a, c);
      // relative rounding slack for the triangle inequality only
      if (ab != ba || n.distance(a, a) != 0 || ab <= 0 || ac > (ab + bc) * (1 + 1e-12)) ++bad_metric;
      pairs.emplace_back(a, b);
    }
    t.check(bad_mono == 0, n.to_string() + ": monotonicity failed on " + std::to_string(bad_mono) + " samples");
    t.check(bad_metric == 0, n.to_string() + ": metric axioms failed on " + std::to_string(bad_metric) + " samples");
    t.check(check_norm_equivalence(n, pairs), n.to_string() + ": L2 equivalence bounds fail");
  }
  t.note(std::to_string(norms.size()) + " norms x " + std::to_string(samples) + " samples");
  return t.ok();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(Tally&)> run;
  };
  const Criterion all[] = {
      {1, "approximation soundness of every index kind", soundness},
      {2, "coreset validity and kept-pair gap", coreset_validity},
      {3, "coreset size scaling", size_scaling},
      {4, "nearest-neighbour pairs per quadrant/2-box part at most n", nn_pair_bound},
      {5, "quadratic candidate pairs on adversarial inputs", hardness},
      {6, "pair locator and top-2 store match linear scans", substructures},
      {7, "anchored indexes within 1+eps of the anchored optimum", anchored},
      {8, "node counts follow the space bounds", node_scaling},
      {9, "norm layer properties", norm_layer},
  };
  bool pass = true;
  for (const auto& c : all) {
    Tally t;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(t);
    } catch (const std::exception& e) {
      t.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << t.text() << "; "
              << fmt(secs, 3) << " s)" << std::endl;
    pass = pass && ok;
  }
  return pass ? 0 : 1;
}
