#include "crcp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "crcp/coreset.hpp"
#include "crcp/oracle.hpp"

namespace crcp {

namespace {

bool anchored_kind(IndexKind k) { return k == IndexKind::Anchored2D || k == IndexKind::Anchored3D; }

std::vector<QuerySpace> two_box_spaces(const BuildOptions& opt) {
  return opt.two_box_spaces.empty() ? dominance_two_box_spaces() : opt.two_box_spaces;
}

void append_canonical(std::vector<RangeQuery>& out, const Dataset& s, const QuerySpace& space) {
  for (auto& r : canonical_ranges(s, space)) out.push_back({r, std::nullopt});
}

std::string pair_text(const std::optional<PointPair>& p) {
  if (!p) return "none";
  std::ostringstream out;
  out << *p;
  return out.str();
}

class RangeSampler {
 public:
  RangeSampler(const Dataset& s, std::uint64_t seed) : s_(s), rng_(seed) {}

  // A point coordinate on `axis`, or an infinite bound now and then.
  double bound(int axis, int side) {
    if (s_.empty() || rng_.uniform() < 0.08) return side < 0 ? -kInf : kInf;
    return s_[static_cast<PointId>(rng_.below(s_.size()))][axis];
  }
  std::pair<double, double> interval(int axis) {
    double a = bound(axis, -1), b = bound(axis, 1);
    if (a > b) std::swap(a, b);
    return {a, b};
  }
  double corner(int axis) {
    if (s_.empty() || rng_.uniform() < 0.08) return -kInf;
    return s_[static_cast<PointId>(rng_.below(s_.size()))][axis];
  }
  int sign() { return rng_.below(2) == 0 ? 1 : -1; }
  std::uint64_t below(std::uint64_t m) { return rng_.below(m); }

  Coords anchor(const BoundingBox& box) {
    Coords o{};
    bool outside = rng_.uniform() < 0.15;
    for (int d = 0; d < box.dim; ++d) {
      auto [mn, mx] = extent(d);
      double lo = std::isfinite(box.lo[d]) ? box.lo[d] : mn - 1;
      double hi = std::isfinite(box.hi[d]) ? box.hi[d] : mx + 1;
      if (outside) {
        lo = mn - 1;
        hi = mx + 1;
      }
      o[static_cast<std::size_t>(d)] = rng_.uniform() < 0.3 && !s_.empty()
                                           ? std::clamp(s_[static_cast<PointId>(rng_.below(s_.size()))][d], lo, hi)
                                           : rng_.uniform(lo, hi);
    }
    return o;
  }

 private:
  std::pair<double, double> extent(int axis) const {
    double mn = 0, mx = 0;
    for (PointId i = 0; i < s_.size(); ++i) {
      mn = i == 0 ? s_[i][axis] : std::min(mn, s_[i][axis]);
      mx = i == 0 ? s_[i][axis] : std::max(mx, s_[i][axis]);
    }
    return {mn, mx};
  }

  const Dataset& s_;
  Rng rng_;
};

}  // namespace

std::vector<RangeQuery> canonical_workload(IndexKind kind, const Dataset& s, const BuildOptions& opt) {
  std::vector<RangeQuery> out;
  switch (kind) {
    case IndexKind::Strip:
      append_canonical(out, s, QuerySpace::vertical_strips());
      append_canonical(out, s, QuerySpace::horizontal_strips());
      break;
    case IndexKind::Quadrant:
      for (int sx : {1, -1})
        for (int sy : {1, -1}) append_canonical(out, s, QuerySpace::quadrants(sx, sy));
      break;
    case IndexKind::Slab:
      for (int a = 0; a < 3; ++a) append_canonical(out, s, QuerySpace::slabs(a));
      break;
    case IndexKind::TwoBox:
      for (const auto& sp : two_box_spaces(opt)) append_canonical(out, s, sp);
      break;
    case IndexKind::Dom3: {
      std::array<std::vector<double>, 3> vals;
      for (int a = 0; a < 3; ++a) {
        vals[static_cast<std::size_t>(a)] = axis_values(s, a);
        vals[static_cast<std::size_t>(a)].insert(vals[static_cast<std::size_t>(a)].begin(), -kInf);
      }
      for (double x : vals[0])
        for (double y : vals[1])
          for (double z : vals[2]) out.push_back({Dominance3{{x, y, z}}, std::nullopt});
      break;
    }
    default:
      throw UsageError("no canonical workload for " + std::string(to_string(kind)) + " indexes; use random queries");
  }
  return out;
}

std::vector<RangeQuery> random_workload(IndexKind kind, const Dataset& s, std::size_t count, std::uint64_t seed,
                                        const BuildOptions& opt) {
  RangeSampler rs(s, seed);
  auto spaces = two_box_spaces(opt);
  std::vector<RangeQuery> out;
  for (std::size_t i = 0; i < count; ++i) {
    RangeQuery q;
    switch (kind) {
      case IndexKind::Strip: {
        int axis = static_cast<int>(rs.below(2));
        auto [lo, hi] = rs.interval(axis);
        q.range = Strip{axis, lo, hi};
        break;
      }
      case IndexKind::Quadrant: {
        int sx = rs.sign(), sy = rs.sign();
        double cx = rs.corner(0), cy = rs.corner(1);
        if (sx < 0 && !std::isfinite(cx)) cx = kInf;  // unbounded on the other side
        if (sy < 0 && !std::isfinite(cy)) cy = kInf;
        q.range = Quadrant{sx, sy, cx, cy};
        break;
      }
      case IndexKind::Rect1:
      case IndexKind::Rect2:
      case IndexKind::Anchored2D: {
        auto [xl, xh] = rs.interval(0);
        auto [yl, yh] = rs.interval(1);
        q.range = Rectangle{xl, xh, yl, yh};
        break;
      }
      case IndexKind::Slab: {
        int axis = static_cast<int>(rs.below(3));
        auto [lo, hi] = rs.interval(axis);
        q.range = Slab{3, axis, lo, hi};
        break;
      }
      case IndexKind::TwoBox: {
        const auto& sp = spaces[rs.below(spaces.size())];
        double c1 = rs.corner(sp.axis1()), c2 = rs.corner(sp.axis2());
        if (sp.sign1() < 0) c1 = std::isfinite(c1) ? c1 : kInf;
        if (sp.sign2() < 0) c2 = std::isfinite(c2) ? c2 : kInf;
        q.range = TwoBox{3, sp.axis1(), sp.axis2(), sp.sign1(), sp.sign2(), c1, c2};
        break;
      }
      case IndexKind::Dom3:
        q.range = Dominance3{{rs.corner(0), rs.corner(1), rs.corner(2)}};
        break;
      case IndexKind::Anchored3D: {
        Box3 b;
        for (int a = 0; a < 3; ++a) {
          auto [lo, hi] = rs.interval(a);
          b.lo[static_cast<std::size_t>(a)] = lo;
          b.hi[static_cast<std::size_t>(a)] = hi;
        }
        q.range = b;
        break;
      }
    }
    if (anchored_kind(kind)) q.anchor = rs.anchor(to_box(q.range));
    out.push_back(q);
  }
  return out;
}

std::optional<PointPair> oracle_answer(const Dataset& s, const MonotoneNorm& norm, const RangeQuery& q) {
  return q.anchor ? brute_force_anchored(s, norm, q.range, *q.anchor) : brute_force_crcp(s, norm, q.range);
}

std::optional<std::string> check_answer(const Dataset& s, const MonotoneNorm& norm, double eps, const RangeQuery& q,
                                        const std::optional<PointPair>& answer,
                                        const std::optional<PointPair>& optimum) {
  auto fail = [&](const std::string& why) {
    return "range " + to_string(q) + " answer " + pair_text(answer) + " optimum " + pair_text(optimum) + ": " + why;
  };
  if (answer.has_value() != optimum.has_value())
    return fail(answer ? "answer for a range without bichromatic pairs" : "no answer although a pair exists");
  if (!answer) return std::nullopt;
  const PointPair& p = *answer;
  if (p.a >= p.b || p.b >= s.size()) return fail("malformed pair");
  if (s[p.a].color == s[p.b].color) return fail("pair is monochromatic");
  if (!contains_pair(q.range, s, p)) return fail("pair is not inside the range");
  if (norm.distance(s[p.a], s[p.b]) != p.length) return fail("reported length is not the pair's distance");
  if (q.anchor && !BoundingBox::of(s, p).contains(*q.anchor)) return fail("pair is not anchored at the query point");
  if (!within_factor(p.length, optimum->length, eps)) return fail("length exceeds (1+eps) times the optimum");
  return std::nullopt;
}

BenchReport run_benchmark(const CrcpIndex& index, const std::vector<RangeQuery>& workload, std::uint64_t seed,
                          const BenchOptions& opt) {
  BenchReport rep;
  rep.kind = std::string(to_string(index.kind()));
  rep.norm = index.norm().to_string();
  rep.n = index.dataset().size();
  rep.eps = index.eps();
  rep.seed = seed;
  rep.stats = index.stats();
  const auto& s = index.dataset();
  for (const auto& q : workload) {
    QueryStats st;
    auto t0 = std::chrono::steady_clock::now();
    auto ans = index.query(q, &st);
    auto t1 = std::chrono::steady_clock::now();
    BenchRecord rec;
    rec.query = q;
    rec.answer = ans;
    rec.optimum = oracle_answer(s, index.norm(), q);
    rec.micros = std::chrono::duration<double, std::micro>(t1 - t0).count();
    rec.comparisons = st.sub_queries + st.candidates;
    if (rec.answer && rec.optimum)
      rec.ratio = rec.optimum->length > 0 ? rec.answer->length / rec.optimum->length
                                           : (rec.answer->length == 0 ? 1.0 : kInf);
    rep.max_ratio = std::max(rep.max_ratio, rec.ratio);
    auto bad = check_answer(s, index.norm(), index.eps(), q, rec.answer, rec.optimum);
    if (bad && !rep.violation) rep.violation = bad;
    if (opt.keep_records) rep.records.push_back(std::move(rec));
    if (bad && opt.stop_on_violation) break;
  }
  return rep;
}

BenchReport run_benchmark(IndexKind kind, const Dataset& s, const MonotoneNorm& norm, double eps,
                          const std::vector<RangeQuery>& workload, std::uint64_t seed, const BenchOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  auto index = build_index(kind, s, norm, eps, opt.build);
  auto t1 = std::chrono::steady_clock::now();
  auto rep = run_benchmark(*index, workload, seed, opt);
  rep.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

void BenchReport::write(std::ostream& out, bool with_timing) const {
  auto old = out.precision(17);
  for (const auto& r : records) {
    out << "query " << to_string(r.query) << " | answer " << pair_text(r.answer) << " | optimum "
        << pair_text(r.optimum) << " | ratio " << r.ratio << " | comparisons " << r.comparisons;
    if (with_timing) out << " | micros " << r.micros;
    out << '\n';
  }
  out.precision(old);
  out << summary();
  if (with_timing) out << "build_ms " << build_ms << '\n';
}

std::string BenchReport::summary() const {
  std::ostringstream out;
  out.precision(17);
  out << "# summary\n";
  out << "kind " << kind << "\nnorm " << norm << "\nn " << n << "\neps " << eps << "\nseed " << seed << '\n';
  out << "queries " << records.size() << "\nmax_ratio " << max_ratio << '\n';
  out << stats.to_text();
  out << "status " << (passed() ? "pass" : "fail") << '\n';
  if (violation) out << "violation " << *violation << '\n';
  return out.str();
}

int space_log_power(IndexKind kind) {
  switch (kind) {
    case IndexKind::Strip:
    case IndexKind::Quadrant: return 2;
    case IndexKind::Rect2:
    case IndexKind::Slab:
    case IndexKind::TwoBox: return 3;
    case IndexKind::Rect1:
    case IndexKind::Dom3: return 4;
    case IndexKind::Anchored2D:
    case IndexKind::Anchored3D: return 0;
  }
  return 0;
}

double space_bound(IndexKind kind, std::size_t n, double eps) {
  double nn = static_cast<double>(n);
  return nn * std::pow(std::log2(std::max(nn, 2.0)), space_log_power(kind)) / eps;
}

std::vector<ScalingRow> measure_node_scaling(IndexKind kind, std::span<const std::size_t> sizes, double eps,
                                             const MonotoneNorm& norm, std::uint64_t seed, const BuildOptions& opt,
                                             std::uint32_t num_colors) {
  std::vector<ScalingRow> rows;
  for (std::size_t n : sizes) {
    Dataset s = gen_random(n, num_colors, Distribution::UniformBox, index_dim(kind), seed + n);
    auto t0 = std::chrono::steady_clock::now();
    std::size_t nodes = build_index(kind, s, norm, eps, opt)->node_count();
    auto t1 = std::chrono::steady_clock::now();
    ScalingRow r;
    r.n = n;
    r.nodes = nodes;
    r.bound = space_bound(kind, n, eps);
    r.fitted = static_cast<double>(nodes) / r.bound;
    r.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rows.push_back(r);
  }
  return rows;
}

double max_consecutive_ratio(std::span<const ScalingRow> rows) {
  double worst = 1.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    double a = rows[i].fitted, b = rows[i + 1].fitted;
    worst = std::max(worst, std::max(a, b) / std::min(a, b));
  }
  return worst;
}

}  // namespace crcp
