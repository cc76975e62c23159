#include "crcp/crcp_index.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crcp {

namespace {

void check_common(const Dataset& s, const MonotoneNorm& norm, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw UsageError("eps must be a positive finite number");
  if (norm.dim() != s.dim()) throw UsageError("norm and dataset dimensions differ");
}

void need_dim(const Dataset& s, int dim, std::string_view what) {
  if (s.dim() != dim) throw UsageError(std::string(what) + " needs " + std::to_string(dim) + "D points");
}

// Bichromatic pairs of a subset, global ids, in (a, b) order.
std::vector<PointPair> subset_pairs(const Dataset& s, const MonotoneNorm& norm, std::span<const PointId> subset,
                                    std::size_t cap) {
  std::vector<PointId> ids(subset.begin(), subset.end());
  std::sort(ids.begin(), ids.end());
  std::vector<PointPair> out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (s[ids[i]].color != s[ids[j]].color) {
        if (out.size() == cap) throw UsageError("bichromatic pair count exceeds the cap");
        out.push_back(make_pair(s, norm, ids[i], ids[j]));
      }
  return out;
}

std::vector<PointPair> coreset_of(const Dataset& s, std::span<const PointPair> pairs, const QuerySpace& space,
                                  const MonotoneNorm& norm, double eps, BuildOptions& opt) {
  CoresetOptions co;
  co.max_pairs = opt.coreset_cap;
  co.record_trace = false;
  auto kept = build_coreset(s, pairs, space, norm, eps, co).pairs;
  if (opt.drop_coreset_pair && !kept.empty()) {
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(*opt.drop_coreset_pair % kept.size()));
    opt.drop_coreset_pair.reset();
  }
  return kept;
}

// Locator positions follow the global pair order, so its position
// tie-break is the pair order.
std::vector<PointPair> by_pair_order(std::vector<PointPair> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const PointPair& x, const PointPair& y) { return lighter(x, y); });
  return pairs;
}

void note(QueryStats* st, const std::optional<PointPair>& ans) {
  if (!st) return;
  ++st->sub_queries;
  if (ans) ++st->candidates;
}

}  // namespace

// ---------------------------------------------------------------- kinds

std::string_view to_string(IndexKind k) {
  switch (k) {
    case IndexKind::Strip: return "strip";
    case IndexKind::Quadrant: return "quadrant";
    case IndexKind::Rect1: return "rect1";
    case IndexKind::Rect2: return "rect2";
    case IndexKind::Slab: return "slab";
    case IndexKind::TwoBox: return "2box";
    case IndexKind::Dom3: return "dom3";
    case IndexKind::Anchored2D: return "anchored2d";
    case IndexKind::Anchored3D: return "anchored3d";
  }
  return "?";
}

IndexKind parse_index_kind(std::string_view name) {
  for (auto k : {IndexKind::Strip, IndexKind::Quadrant, IndexKind::Rect1, IndexKind::Rect2, IndexKind::Slab,
                 IndexKind::TwoBox, IndexKind::Dom3, IndexKind::Anchored2D, IndexKind::Anchored3D})
    if (to_string(k) == name) return k;
  throw UsageError("unknown index kind '" + std::string(name) + "'");
}

int index_dim(IndexKind k) {
  switch (k) {
    case IndexKind::Slab:
    case IndexKind::TwoBox:
    case IndexKind::Dom3:
    case IndexKind::Anchored3D: return 3;
    default: return 2;
  }
}

std::size_t IndexStats::get(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  return 0;
}

std::string IndexStats::to_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : values) out << k << ' ' << v << '\n';
  return out.str();
}

CrcpIndex::CrcpIndex(const Dataset& s, const MonotoneNorm& norm, double eps) : s_(s), norm_(norm), eps_(eps) {
  check_common(s, norm, eps);
}

std::vector<QuerySpace> all_two_box_spaces() {
  std::vector<QuerySpace> out;
  for (auto [a1, a2] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}})
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) out.push_back(QuerySpace::two_boxes(a1, a2, s1, s2));
  return out;
}

std::vector<QuerySpace> dominance_two_box_spaces() {
  return {QuerySpace::two_boxes(1, 2, 1, 1), QuerySpace::two_boxes(0, 2, 1, 1), QuerySpace::two_boxes(0, 1, 1, 1)};
}

// ---------------------------------------------------------------- parts

BandPart::BandPart(const Dataset& s, std::span<const PointId> subset, const MonotoneNorm& norm, double eps,
                   const QuerySpace& space, BuildOptions& opt) {
  auto pairs = subset_pairs(s, norm, subset, opt.coreset_cap);
  loc_ = PairLocator(s, by_pair_order(coreset_of(s, pairs, space, norm, eps, opt)), space, opt.cascading);
}

std::vector<PointPair> dominating_nn_pairs(const Dataset& s, std::span<const PointId> subset,
                                           const MonotoneNorm& norm, const QuerySpace& space) {
  if (space.kind() != QuerySpace::Kind::Orthant) throw UsageError("nearest-neighbour pairs need an orthant space");
  const int a1 = space.axis1(), a2 = space.axis2();
  const double s1 = space.sign1(), s2 = space.sign2();
  std::vector<PointPair> out;
  for (PointId a : subset) {
    std::optional<PointPair> best;
    for (PointId b : subset) {
      if (b == a || s[b].color == s[a].color) continue;
      if (!(s1 * s[b][a1] >= s1 * s[a][a1] && s2 * s[b][a2] >= s2 * s[a][a2])) continue;
      best = lighter_of(best, make_pair(s, norm, a, b));
    }
    if (best) out.push_back(*best);
  }
  return out;
}

OrthantPart::OrthantPart(const Dataset& s, std::span<const PointId> subset, const MonotoneNorm& norm, double eps,
                         const QuerySpace& space, BuildOptions& opt)
    : n_(subset.size()) {
  auto all = subset_pairs(s, norm, subset, opt.coreset_cap);
  // Pairs sharing a frame coordinate go with the dominance pairs; only
  // strictly NW-SE pairs keep the nesting the greedy coreset relies on.
  std::erase_if(all, [&](const PointPair& p) { return frame_orientation(space, s, p) != Orientation::NwSe; });
  auto pairs = coreset_of(s, all, space, norm, eps, opt);
  coreset_pairs_ = pairs.size();
  auto nn = dominating_nn_pairs(s, subset, norm, space);
  nn_pairs_ = nn.size();
  if (nn_pairs_ > n_) throw std::logic_error("nearest-neighbour pair set larger than the point set");
  pairs.insert(pairs.end(), nn.begin(), nn.end());
  loc_ = PairLocator(s, by_pair_order(std::move(pairs)), space, opt.cascading);
}

// ---------------------------------------------------------------- rank tree

RankTree::RankTree(const Dataset& s, std::vector<PointId> ids, int axis) : axis_(axis), ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end(), [&](PointId a, PointId b) {
    return s[a][axis] != s[b][axis] ? s[a][axis] < s[b][axis] : a < b;
  });
  coord_.resize(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) coord_[i] = s[ids_[i]][axis];
  if (!ids_.empty()) {
    nodes_.reserve(2 * ids_.size());
    build(0, static_cast<std::uint32_t>(ids_.size()));
  }
}

void RankTree::build(std::uint32_t lo, std::uint32_t hi) {
  auto id = nodes_.size();
  nodes_.push_back({lo, hi, -1, -1});
  if (hi - lo < 2) return;
  std::uint32_t mid = lo + (hi - lo) / 2;
  auto l = static_cast<std::int32_t>(nodes_.size());
  build(lo, mid);
  auto r = static_cast<std::int32_t>(nodes_.size());
  build(mid, hi);
  nodes_[id].left = l;
  nodes_[id].right = r;
}

std::span<const PointId> RankTree::points(int node) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  return std::span<const PointId>(ids_).subspan(n.lo, n.hi - n.lo);
}

std::pair<std::uint32_t, std::uint32_t> RankTree::rank_range(double lo, double hi) const {
  auto l = std::lower_bound(coord_.begin(), coord_.end(), lo) - coord_.begin();
  auto r = std::upper_bound(coord_.begin(), coord_.end(), hi) - coord_.begin();
  if (r < l) r = l;
  return {static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(r)};
}

std::vector<int> RankTree::canonical(std::uint32_t l, std::uint32_t r) const {
  std::vector<int> out;
  if (l >= r || nodes_.empty()) return out;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.hi <= l || n.lo >= r) continue;
    if (l <= n.lo && n.hi <= r) {
      out.push_back(id);
      continue;
    }
    stack.push_back(n.right);  // left child is popped first
    stack.push_back(n.left);
  }
  return out;
}

int RankTree::splitting(std::uint32_t l, std::uint32_t r) const {
  if (l >= r || r > ids_.size()) throw UsageError("splitting node of an empty rank range");
  int id = 0;
  for (;;) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left < 0) return id;
    if (r <= nodes_[static_cast<std::size_t>(n.left)].hi)
      id = n.left;
    else if (l >= nodes_[static_cast<std::size_t>(n.right)].lo)
      id = n.right;
    else
      return id;
  }
}

double RankTree::separator(int node) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.left < 0) throw UsageError("leaves have no separator");
  std::uint32_t mid = nodes_[static_cast<std::size_t>(n.left)].hi;
  return (coord_[mid - 1] + coord_[mid]) / 2.0;
}

std::vector<double> RankTree::separators(const std::vector<int>& canonical_nodes) const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < canonical_nodes.size(); ++i) {
    const Node& a = nodes_[static_cast<std::size_t>(canonical_nodes[i])];
    const Node& b = nodes_[static_cast<std::size_t>(canonical_nodes[i + 1])];
    out.push_back((coord_[a.hi - 1] + coord_[b.lo]) / 2.0);
  }
  return out;
}

// ---------------------------------------------------------------- strips, slabs

BandIndex::BandIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt)
    : CrcpIndex(s, norm, eps) {
  std::vector<PointId> all(s.size());
  for (PointId i = 0; i < s.size(); ++i) all[i] = i;
  for (int axis = 0; axis < s.dim(); ++axis) parts_.emplace_back(s_, all, norm, eps, QuerySpace::band(s.dim(), axis), opt);
}

std::optional<PointPair> BandIndex::query(const RangeQuery& q, QueryStats* st) const {
  int axis = -1;
  if (auto* x = std::get_if<Strip>(&q.range); x && s_.dim() == 2) axis = x->axis;
  if (auto* x = std::get_if<Slab>(&q.range); x && s_.dim() == 3) axis = x->axis;
  if (axis < 0) throw UsageError("a " + std::string(to_string(kind())) + " index cannot answer " + to_string(q.range));
  validate(q.range);
  auto ans = part(axis).query(q.range);
  note(st, ans);
  return ans;
}

IndexStats BandIndex::stats() const {
  IndexStats out;
  std::size_t total = 0, pairs = 0;
  for (std::size_t a = 0; a < parts_.size(); ++a) {
    out.add("axis" + std::to_string(a) + ".coreset", parts_[a].coreset_size());
    out.add("axis" + std::to_string(a) + ".nodes", parts_[a].node_count());
    total += parts_[a].node_count();
    pairs += parts_[a].coreset_size();
  }
  out.add("coreset.pairs", pairs);
  out.add("nodes.total", total);
  return out;
}

// ---------------------------------------------------------------- quadrants, 2-boxes

OrthantIndex::OrthantIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt)
    : CrcpIndex(s, norm, eps) {
  if (s.dim() == 2)
    spaces_ = {QuerySpace::quadrants(1, 1), QuerySpace::quadrants(1, -1), QuerySpace::quadrants(-1, 1),
               QuerySpace::quadrants(-1, -1)};
  else
    spaces_ = opt.two_box_spaces.empty() ? dominance_two_box_spaces() : opt.two_box_spaces;
  std::vector<PointId> all(s.size());
  for (PointId i = 0; i < s.size(); ++i) all[i] = i;
  for (const auto& sp : spaces_) {
    if (sp.kind() != QuerySpace::Kind::Orthant || sp.dim() != s.dim())
      throw UsageError("configuration " + sp.name() + " is not an orthant space of the dataset's dimension");
    parts_.emplace_back(s_, all, norm, eps, sp, opt);
  }
}

std::optional<PointPair> OrthantIndex::query(const RangeQuery& q, QueryStats* st) const {
  for (std::size_t i = 0; i < spaces_.size(); ++i)
    if (spaces_[i].accepts(q.range)) {
      validate(q.range);
      auto ans = parts_[i].query(q.range);
      note(st, ans);
      return ans;
    }
  throw UsageError("no configuration of this " + std::string(to_string(kind())) + " index answers " +
                   to_string(q.range));
}

IndexStats OrthantIndex::stats() const {
  IndexStats out;
  std::size_t total = 0, coreset_pairs = 0, nn_pairs = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    std::string key = spaces_[i].name();
    out.add(key + ".coreset", parts_[i].coreset_size());
    out.add(key + ".nn_pairs", parts_[i].nn_pairs());
    out.add(key + ".nodes", parts_[i].node_count());
    total += parts_[i].node_count();
    coreset_pairs += parts_[i].coreset_size();
    nn_pairs += parts_[i].nn_pairs();
  }
  out.add("coreset.pairs", coreset_pairs);
  out.add("nn.pairs", nn_pairs);
  out.add("nodes.total", total);
  return out;
}

// ---------------------------------------------------------------- rectangles

RectIndexBase::RectIndexBase(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions& opt)
    : CrcpIndex(s, norm, eps) {
  need_dim(s, 2, "a rectangle index");
  std::vector<PointId> all(s.size());
  for (PointId i = 0; i < s.size(); ++i) all[i] = i;
  tx_ = RankTree(s_, all, 0);
  ty_ = RankTree(s_, all, 1);
  for (auto [tree, parts, axis] : {std::tuple{&tx_, &bx_, 1}, std::tuple{&ty_, &by_, 0}}) {
    parts->resize(tree->nodes().size());
    for (std::size_t v = 0; v < tree->nodes().size(); ++v) {
      auto pts = tree->points(static_cast<int>(v));
      if (pts.size() >= 2) (*parts)[v].emplace(s_, pts, norm, eps, QuerySpace::band(2, axis), opt);
    }
  }
  c_ = std::make_unique<AnchoredIndex2D>(s_, norm, eps, opt.anchored);
}

std::optional<PointPair> RectIndexBase::query(const RangeQuery& q, QueryStats* st) const {
  auto* r = std::get_if<Rectangle>(&q.range);
  if (!r) throw UsageError("a rectangle index cannot answer " + to_string(q.range));
  validate(q.range);
  return query_rect(*r, st);
}

std::optional<PointPair> RectIndexBase::strips(const Rectangle& r, QueryStats* st, RectTrace& trace) const {
  std::optional<PointPair> best;
  auto [xl, xr] = tx_.rank_range(r.xlo, r.xhi);
  trace.x_canonical = tx_.canonical(xl, xr);
  for (int v : trace.x_canonical)
    if (const auto& b = bx_[static_cast<std::size_t>(v)]) {
      auto ans = b->query(Strip{1, r.ylo, r.yhi});
      note(st, ans);
      best = lighter_of(best, ans);
    }
  auto [yl, yr] = ty_.rank_range(r.ylo, r.yhi);
  trace.y_canonical = ty_.canonical(yl, yr);
  for (int v : trace.y_canonical)
    if (const auto& b = by_[static_cast<std::size_t>(v)]) {
      auto ans = b->query(Strip{0, r.xlo, r.xhi});
      note(st, ans);
      best = lighter_of(best, ans);
    }
  return best;
}

std::optional<PointPair> RectIndexBase::anchored_at(const Rectangle& r, const std::vector<Coords>& anchors,
                                                    QueryStats* st) const {
  std::optional<PointPair> best;
  for (const auto& o : anchors) {
    AnchoredTrace t;
    auto ans = c_->query(r, o, &t);
    if (st) {
      ++st->sub_queries;
      st->candidates += t.pairs_compared;
      st->anchors.push_back(o);
    }
    best = lighter_of(best, ans);
  }
  return best;
}

void RectIndexBase::add_base_stats(IndexStats& out, std::size_t& total) const {
  std::size_t xn = tx_.nodes().size(), yn = ty_.nodes().size(), xc = 0, yc = 0;
  for (const auto& b : bx_)
    if (b) {
      xn += b->node_count();
      xc += b->coreset_size();
    }
  for (const auto& b : by_)
    if (b) {
      yn += b->node_count();
      yc += b->coreset_size();
    }
  out.add("xtree.nodes", xn);
  out.add("xtree.coreset", xc);
  out.add("ytree.nodes", yn);
  out.add("ytree.coreset", yc);
  out.add("anchored.sectors", static_cast<std::size_t>(c_->sectors()));
  out.add("anchored.nodes", c_->node_count());
  total += xn + yn + c_->node_count();
}

RectIndexV1::RectIndexV1(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt)
    : RectIndexBase(s, norm, eps, opt) {
  const auto& nodes = tx_.nodes();
  // x position of every point, to split a secondary subset at l_u
  std::vector<std::uint32_t> xpos(s.size());
  for (std::uint32_t p = 0; p < tx_.size(); ++p) xpos[tx_.at(p)] = p;
  const QuerySpace spaces[4] = {QuerySpace::quadrants(-1, -1), QuerySpace::quadrants(1, -1),
                                QuerySpace::quadrants(1, 1), QuerySpace::quadrants(-1, 1)};
  secondary_.resize(nodes.size());
  for (std::size_t u = 0; u < nodes.size(); ++u) {
    if (nodes[u].left < 0) continue;
    std::uint32_t xmid = nodes[static_cast<std::size_t>(nodes[u].left)].hi;
    auto pts = tx_.points(static_cast<int>(u));
    auto sec = std::make_unique<Secondary>();
    sec->tree = RankTree(s_, std::vector<PointId>(pts.begin(), pts.end()), 1);
    const auto& sn = sec->tree.nodes();
    sec->parts.resize(sn.size());
    for (std::size_t v = 0; v < sn.size(); ++v) {
      if (sn[v].left < 0) continue;
      std::vector<PointId> sub[4];  // ne, nw, sw, se
      for (int half : {0, 1}) {
        int child = half == 0 ? sn[v].left : sn[v].right;  // lower y, upper y
        for (PointId id : sec->tree.points(child)) {
          bool right = xpos[id] >= xmid;
          int q = half == 1 ? (right ? 0 : 1) : (right ? 3 : 2);
          sub[q].push_back(id);
        }
      }
      for (int q = 0; q < 4; ++q)
        if (sub[q].size() >= 2) sec->parts[v][static_cast<std::size_t>(q)].emplace(s_, sub[q], norm, eps, spaces[q], opt);
    }
    secondary_[u] = std::move(sec);
  }
}

std::optional<PointPair> RectIndexV1::query_rect(const Rectangle& r, QueryStats* st, RectTrace* trace) const {
  RectTrace local;
  RectTrace& tr = trace ? *trace : local;
  tr = RectTrace{};
  auto [xl, xr] = tx_.rank_range(r.xlo, r.xhi);
  if (xr - xl < 2) return std::nullopt;
  int u = tx_.splitting(xl, xr);
  const Secondary& sec = *secondary_[static_cast<std::size_t>(u)];
  auto [yl, yr] = sec.tree.rank_range(r.ylo, r.yhi);
  if (yr - yl < 2) return std::nullopt;
  int v = sec.tree.splitting(yl, yr);
  tr.split_u = u;
  tr.split_v = v;
  std::optional<PointPair> best;
  const Quadrant quads[4] = {{-1, -1, r.xhi, r.yhi}, {1, -1, r.xlo, r.yhi}, {1, 1, r.xlo, r.ylo}, {-1, 1, r.xhi, r.ylo}};
  for (std::size_t q = 0; q < 4; ++q)
    if (const auto& part = sec.parts[static_cast<std::size_t>(v)][q]) {
      auto ans = part->query(quads[q]);
      note(st, ans);
      best = lighter_of(best, ans);
    }
  best = lighter_of(best, strips(r, st, tr));
  auto xs = tx_.separators(tr.x_canonical);
  auto ys = ty_.separators(tr.y_canonical);
  double lu = tx_.separator(u), lv = sec.tree.separator(v);
  for (double x : xs) tr.anchors.push_back({x, lv, 0});
  for (double y : ys) tr.anchors.push_back({lu, y, 0});
  best = lighter_of(best, anchored_at(r, tr.anchors, st));
  return best;
}

IndexStats RectIndexV1::stats() const {
  IndexStats out;
  std::size_t total = 0, sec_nodes = 0, coreset_pairs = 0, nn_pairs = 0, parts = 0;
  for (const auto& sec : secondary_) {
    if (!sec) continue;
    sec_nodes += sec->tree.nodes().size();
    for (const auto& four : sec->parts)
      for (const auto& p : four)
        if (p) {
          ++parts;
          sec_nodes += p->node_count();
          coreset_pairs += p->coreset_size();
          nn_pairs += p->nn_pairs();
        }
  }
  out.add("secondary.nodes", sec_nodes);
  out.add("secondary.quadrant_parts", parts);
  out.add("secondary.coreset", coreset_pairs);
  out.add("secondary.nn_pairs", nn_pairs);
  total += sec_nodes;
  add_base_stats(out, total);
  out.add("nodes.total", total);
  return out;
}

RectIndexV2::RectIndexV2(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt)
    : RectIndexBase(s, norm, eps, opt) {}

std::optional<PointPair> RectIndexV2::query_rect(const Rectangle& r, QueryStats* st, RectTrace* trace) const {
  RectTrace local;
  RectTrace& tr = trace ? *trace : local;
  tr = RectTrace{};
  auto best = strips(r, st, tr);
  for (double x : tx_.separators(tr.x_canonical))
    for (double y : ty_.separators(tr.y_canonical)) tr.anchors.push_back({x, y, 0});
  return lighter_of(best, anchored_at(r, tr.anchors, st));
}

IndexStats RectIndexV2::stats() const {
  IndexStats out;
  std::size_t total = 0;
  add_base_stats(out, total);
  out.add("nodes.total", total);
  return out;
}

// ---------------------------------------------------------------- dominance

Dominance3Index::Dominance3Index(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt)
    : CrcpIndex(s, norm, eps) {
  need_dim(s, 3, "a dominance index");
  std::vector<PointId> all(s.size());
  for (PointId i = 0; i < s.size(); ++i) all[i] = i;
  auto spaces = dominance_two_box_spaces();  // axis a's tree uses the other two axes
  for (int a = 0; a < 3; ++a) {
    auto& tree = trees_[static_cast<std::size_t>(a)];
    tree = RankTree(s_, all, a);
    auto& parts = parts_[static_cast<std::size_t>(a)];
    parts.resize(tree.nodes().size());
    for (std::size_t v = 0; v < parts.size(); ++v) {
      auto pts = tree.points(static_cast<int>(v));
      if (pts.size() >= 2) parts[v].emplace(s_, pts, norm, eps, spaces[static_cast<std::size_t>(a)], opt);
    }
  }
  c_ = std::make_unique<AnchoredIndex3D>(s_, norm, eps, opt.anchored);
}

std::optional<PointPair> Dominance3Index::query(const RangeQuery& q, QueryStats* st) const {
  auto* d = std::get_if<Dominance3>(&q.range);
  if (!d) throw UsageError("a dominance index cannot answer " + to_string(q.range));
  validate(q.range);
  return query_dominance(*d, st);
}

std::optional<PointPair> Dominance3Index::query_dominance(const Dominance3& d, QueryStats* st,
                                                          DominanceTrace* trace) const {
  DominanceTrace local;
  DominanceTrace& tr = trace ? *trace : local;
  tr = DominanceTrace{};
  std::optional<PointPair> best;
  std::array<std::vector<double>, 3> seps;
  for (int a = 0; a < 3; ++a) {
    const auto& tree = trees_[static_cast<std::size_t>(a)];
    auto [l, r] = tree.rank_range(d.corner[static_cast<std::size_t>(a)], kInf);
    auto& canon = tr.canonical[static_cast<std::size_t>(a)];
    canon = tree.canonical(l, r);
    int b = a == 0 ? 1 : 0, c = a == 2 ? 1 : 2;
    TwoBox box{3, b, c, 1, 1, d.corner[static_cast<std::size_t>(b)], d.corner[static_cast<std::size_t>(c)]};
    for (int v : canon)
      if (const auto& part = parts_[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)]) {
        auto ans = part->query(box);
        note(st, ans);
        best = lighter_of(best, ans);
      }
    seps[static_cast<std::size_t>(a)] = tree.separators(canon);
  }
  Box3 box{d.corner, {kInf, kInf, kInf}};
  for (double x : seps[0])
    for (double y : seps[1])
      for (double z : seps[2]) tr.anchors.push_back({x, y, z});
  for (const auto& o : tr.anchors) {
    AnchoredTrace t;
    auto ans = c_->query(box, o, &t);
    if (st) {
      ++st->sub_queries;
      st->candidates += t.pairs_compared;
      st->anchors.push_back(o);
    }
    best = lighter_of(best, ans);
  }
  return best;
}

IndexStats Dominance3Index::stats() const {
  IndexStats out;
  std::size_t total = 0;
  for (int a = 0; a < 3; ++a) {
    std::size_t nodes = trees_[static_cast<std::size_t>(a)].nodes().size(), coreset_pairs = 0, nn_pairs = 0;
    for (const auto& p : parts_[static_cast<std::size_t>(a)])
      if (p) {
        nodes += p->node_count();
        coreset_pairs += p->coreset_size();
        nn_pairs += p->nn_pairs();
      }
    std::string key = "tree" + std::to_string(a);
    out.add(key + ".nodes", nodes);
    out.add(key + ".coreset", coreset_pairs);
    out.add(key + ".nn_pairs", nn_pairs);
    total += nodes;
  }
  out.add("anchored.sectors", static_cast<std::size_t>(c_->sectors()));
  out.add("anchored.nodes", c_->node_count());
  total += c_->node_count();
  out.add("nodes.total", total);
  return out;
}

// ---------------------------------------------------------------- anchored wrappers

Anchored2DIndex::Anchored2DIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt)
    : CrcpIndex(s, norm, eps), c_(s, norm, eps, opt.anchored) {}

std::optional<PointPair> Anchored2DIndex::query(const RangeQuery& q, QueryStats* st) const {
  auto* r = std::get_if<Rectangle>(&q.range);
  if (!r || !q.anchor) throw UsageError("an anchored 2D index answers rectangles with an anchor (`@ ox oy`)");
  validate(q.range);
  AnchoredTrace t;
  auto ans = c_.query(*r, *q.anchor, &t);
  if (st) {
    ++st->sub_queries;
    st->candidates += t.pairs_compared;
    st->anchors.push_back(*q.anchor);
  }
  return ans;
}

IndexStats Anchored2DIndex::stats() const {
  IndexStats out;
  out.add("anchored.sectors", static_cast<std::size_t>(c_.sectors()));
  out.add("nodes.total", c_.node_count());
  return out;
}

Anchored3DIndex::Anchored3DIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt)
    : CrcpIndex(s, norm, eps), c_(s, norm, eps, opt.anchored) {}

std::optional<PointPair> Anchored3DIndex::query(const RangeQuery& q, QueryStats* st) const {
  std::optional<Box3> box;
  if (auto* b = std::get_if<Box3>(&q.range)) box = *b;
  if (auto* d = std::get_if<Dominance3>(&q.range)) box = Box3{d->corner, {kInf, kInf, kInf}};
  if (!box || !q.anchor)
    throw UsageError("an anchored 3D index answers boxes or dominance corners with an anchor (`@ ox oy oz`)");
  validate(q.range);
  AnchoredTrace t;
  auto ans = c_.query(*box, *q.anchor, &t);
  if (st) {
    ++st->sub_queries;
    st->candidates += t.pairs_compared;
    st->anchors.push_back(*q.anchor);
  }
  return ans;
}

IndexStats Anchored3DIndex::stats() const {
  IndexStats out;
  out.add("anchored.sectors", static_cast<std::size_t>(c_.sectors()));
  out.add("nodes.total", c_.node_count());
  return out;
}

// ---------------------------------------------------------------- factory

std::unique_ptr<CrcpIndex> build_index(IndexKind kind, const Dataset& s, const MonotoneNorm& norm, double eps,
                                       const BuildOptions& opt) {
  if (s.dim() != index_dim(kind))
    throw UsageError(std::string(to_string(kind)) + " indexes need " + std::to_string(index_dim(kind)) +
                     "D points, got " + std::to_string(s.dim()) + "D");
  switch (kind) {
    case IndexKind::Strip:
    case IndexKind::Slab: return std::make_unique<BandIndex>(s, norm, eps, opt);
    case IndexKind::Quadrant:
    case IndexKind::TwoBox: return std::make_unique<OrthantIndex>(s, norm, eps, opt);
    case IndexKind::Rect1: return std::make_unique<RectIndexV1>(s, norm, eps, opt);
    case IndexKind::Rect2: return std::make_unique<RectIndexV2>(s, norm, eps, opt);
    case IndexKind::Dom3: return std::make_unique<Dominance3Index>(s, norm, eps, opt);
    case IndexKind::Anchored2D: return std::make_unique<Anchored2DIndex>(s, norm, eps, opt);
    case IndexKind::Anchored3D: return std::make_unique<Anchored3DIndex>(s, norm, eps, opt);
  }
  throw UsageError("unknown index kind");
}

}  // namespace crcp
