#include "crcp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>

namespace crcp {

namespace {

std::vector<PointId> inside(const Dataset& s, const BoundingBox& box) {
  std::vector<PointId> ids;
  for (PointId i = 0; i < s.size(); ++i)
    if (box.contains(s[i].coords)) ids.push_back(i);
  return ids;
}

Dataset adversarial(std::size_t n, bool quadrant) {
  if (n < 2 || n % 2 != 0) throw UsageError("adversarial generators need an even n >= 2, got " + std::to_string(n));
  auto nn = static_cast<double>(n);
  Dataset s(2);
  for (std::size_t i = 1; i <= n / 2; ++i) {
    auto d = static_cast<double>(i);
    s.add(make_point(-d, nn * nn - d * nn, 0));
  }
  for (std::size_t i = 1; i <= n / 2; ++i) {
    auto d = static_cast<double>(i);
    if (quadrant)
      s.add(make_point(nn * nn - d * nn, -d, 1));
    else
      s.add(make_point(d, d * nn - nn * nn, 1));
  }
  return s;
}

// Grows a point set one point at a time while tracking its closest
// bichromatic pair.
class Incremental {
 public:
  Incremental(const Dataset& s, const MonotoneNorm& norm) : s_(s), norm_(norm) {}
  void clear() {
    pts_.clear();
    best_.reset();
  }
  void add(PointId p) {
    for (PointId q : pts_)
      if (s_[q].color != s_[p].color) best_ = lighter_of(best_, make_pair(s_, norm_, p, q));
    pts_.push_back(p);
  }
  const std::optional<PointPair>& best() const { return best_; }

 private:
  const Dataset& s_;
  const MonotoneNorm& norm_;
  std::vector<PointId> pts_;
  std::optional<PointPair> best_;
};

// Points grouped by a key, groups in increasing key order.
std::vector<std::vector<PointId>> groups_by(std::span<const PointId> ids, const std::function<double(PointId)>& key) {
  std::map<double, std::vector<PointId>> g;
  for (PointId i : ids) g[key(i)].push_back(i);
  std::vector<std::vector<PointId>> out;
  for (auto& [k, v] : g) out.push_back(std::move(v));
  return out;
}

}  // namespace

std::optional<PointPair> brute_force_crcp(const Dataset& s, const MonotoneNorm& norm, const OrthoRange& x) {
  auto ids = inside(s, to_box(x));
  std::optional<PointPair> best;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (s[ids[i]].color != s[ids[j]].color) best = lighter_of(best, make_pair(s, norm, ids[i], ids[j]));
  return best;
}

std::optional<PointPair> brute_force_crcp(const Dataset& s, const MonotoneNorm& norm) {
  std::optional<PointPair> best;
  for (PointId i = 0; i < s.size(); ++i)
    for (PointId j = i + 1; j < s.size(); ++j)
      if (s[i].color != s[j].color) best = lighter_of(best, make_pair(s, norm, i, j));
  return best;
}

std::optional<PointPair> brute_force_anchored(const Dataset& s, const MonotoneNorm& norm, const OrthoRange& x,
                                              const Coords& o) {
  BoundingBox box = to_box(x);
  if (!box.contains(o)) return std::nullopt;
  auto ids = inside(s, box);
  std::optional<PointPair> best;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (s[ids[i]].color == s[ids[j]].color) continue;
      PointPair p = make_pair(s, norm, ids[i], ids[j]);
      if (BoundingBox::of(s, p).contains(o)) best = lighter_of(best, p);
    }
  return best;
}

Dataset gen_adversarial_strip(std::size_t n) { return adversarial(n, false); }
Dataset gen_adversarial_quadrant(std::size_t n) { return adversarial(n, true); }

std::vector<PointPair> candidate_pairs(const Dataset& s, const QuerySpace& space, const MonotoneNorm& norm) {
  if (!space.keyed()) throw UsageError("candidate counting supports strip-like and quadrant-like spaces");
  if (space.dim() != s.dim()) throw UsageError("dimension mismatch");
  std::vector<PointId> all(s.size());
  for (PointId i = 0; i < s.size(); ++i) all[i] = i;
  std::set<std::pair<PointId, PointId>> found;
  Incremental inc(s, norm);
  auto record = [&] {
    if (inc.best()) found.emplace(inc.best()->a, inc.best()->b);
  };
  if (space.kind() == QuerySpace::Kind::Band) {
    int ax = space.axis();
    auto g = groups_by(all, [&](PointId i) { return s[i][ax]; });
    for (std::size_t lo = 0; lo < g.size(); ++lo) {
      inc.clear();
      for (std::size_t hi = lo; hi < g.size(); ++hi) {
        for (PointId p : g[hi]) inc.add(p);
        record();
      }
    }
  } else {
    auto f1 = [&](PointId i) { return space.sign1() * s[i][space.axis1()]; };
    auto f2 = [&](PointId i) { return space.sign2() * s[i][space.axis2()]; };
    auto g1 = groups_by(all, f1);
    std::vector<PointId> right;  // points with frame x >= current corner
    for (std::size_t c = g1.size(); c-- > 0;) {
      right.insert(right.end(), g1[c].begin(), g1[c].end());
      auto g2 = groups_by(right, f2);
      inc.clear();
      for (std::size_t r = g2.size(); r-- > 0;) {
        for (PointId p : g2[r]) inc.add(p);
        record();
      }
    }
  }
  std::vector<PointPair> out;
  for (auto [a, b] : found) out.push_back(make_pair(s, norm, a, b));
  return out;
}

std::size_t count_candidate_pairs(const Dataset& s, const QuerySpace& space, const MonotoneNorm& norm) {
  return candidate_pairs(s, space, norm).size();
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::UniformBox: return "uniform";
    case Distribution::Clustered: return "clustered";
    case Distribution::Lattice: return "lattice";
  }
  return "?";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "uniform" || name == "uniform-box") return Distribution::UniformBox;
  if (name == "clustered") return Distribution::Clustered;
  if (name == "lattice") return Distribution::Lattice;
  throw UsageError("unknown distribution '" + std::string(name) + "'");
}

Rng::Rng(std::uint64_t seed) : gen_(seed) {}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t m) {
  if (m == 0) throw UsageError("empty range");
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * m) >> 64);
}

double Rng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Dataset gen_random(std::size_t n, std::uint32_t num_colors, Distribution dist, int dim, std::uint64_t seed) {
  if (num_colors < 1) throw UsageError("need at least one color");
  if (dim != 2 && dim != 3) throw UsageError("dimension must be 2 or 3");
  Rng rng(seed);
  std::vector<Coords> centres;
  if (dist == Distribution::Clustered) {
    std::size_t k = std::max<std::size_t>(1, n / 16);
    for (std::size_t c = 0; c < k; ++c) {
      Coords x{};
      for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(d)] = rng.uniform();
      centres.push_back(x);
    }
  }
  std::vector<ColoredPoint> pts(n);
  for (auto& p : pts) {
    switch (dist) {
      case Distribution::UniformBox:
        for (int d = 0; d < dim; ++d) p.coords[static_cast<std::size_t>(d)] = rng.uniform();
        break;
      case Distribution::Clustered: {
        const Coords& c = centres[rng.below(centres.size())];
        for (int d = 0; d < dim; ++d)
          p.coords[static_cast<std::size_t>(d)] = c[static_cast<std::size_t>(d)] + 0.03 * rng.normal();
        break;
      }
      case Distribution::Lattice:
        for (int d = 0; d < dim; ++d) p.coords[static_cast<std::size_t>(d)] = static_cast<double>(rng.below(8));
        break;
    }
    p.color = static_cast<Color>(rng.below(num_colors));
  }
  return Dataset(dim, std::move(pts));
}

}  // namespace crcp
