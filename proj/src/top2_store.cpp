#include "crcp/top2_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "crcp/dominance_tree.hpp"

namespace crcp {

namespace {

double dot_key(const Coords& n, const Coords& p, int dim) {
  double k = n[0] * p[0] + n[1] * p[1];
  if (dim == 3) k += n[2] * p[2];
  return k;
}

// Indices into the store's point array; -1 when absent.
struct Pick2 {
  std::int32_t first = -1;
  std::int32_t second = -1;
};

}  // namespace

struct Top2Store::Impl {
  int dim = 2;
  int c = 0;
  Options opt;
  std::vector<WeightedPoint> pts;
  std::vector<Coords> normals;
  std::vector<std::vector<double>> keys;  // keys[direction][point]
  std::size_t entries = 0;

  bool lighter(std::int32_t x, std::int32_t y) const {
    const auto& a = pts[static_cast<std::size_t>(x)];
    const auto& b = pts[static_cast<std::size_t>(y)];
    return a.weight != b.weight ? a.weight < b.weight : a.id < b.id;
  }

  Pick2 merge(Pick2 x, Pick2 y) const {
    std::int32_t cand[4] = {x.first, x.second, y.first, y.second};
    Pick2 r;
    for (auto v : cand)
      if (v >= 0 && (r.first < 0 || lighter(v, r.first))) r.first = v;
    if (r.first < 0) return r;
    Color col = pts[static_cast<std::size_t>(r.first)].color;
    for (auto v : cand)
      if (v >= 0 && pts[static_cast<std::size_t>(v)].color != col && (r.second < 0 || lighter(v, r.second)))
        r.second = v;
    return r;
  }

  bool inside(std::uint32_t i, int upto, std::span<const double> off) const {
    for (int d = 0; d < upto; ++d)
      if (!(keys[static_cast<std::size_t>(d)][i] <= off[static_cast<std::size_t>(d)])) return false;
    return true;
  }

  // Handles directions [0, c) of one subset.
  struct Level {
    int c = 0;
    DominanceTree<Pick2> base;  // c == 2
    // c >= 3: items sorted by key c-1, a segment tree over them
    std::vector<std::uint32_t> items;
    std::vector<double> last_key;
    struct Node {
      std::uint32_t lo = 0, hi = 0;
      std::int32_t left = -1, right = -1;
      std::unique_ptr<Level> sub;  // null: scanned bucket
    };
    std::vector<Node> nodes;
  };

  std::unique_ptr<Level> root;

  std::unique_ptr<Level> build(int cc, std::vector<std::uint32_t> items) {
    auto lv = std::make_unique<Level>();
    lv->c = cc;
    if (cc == 2) {
      std::vector<double> k0(items.size()), k1(items.size());
      for (std::size_t i = 0; i < items.size(); ++i) {
        k0[i] = keys[0][items[i]];
        k1[i] = keys[1][items[i]];
      }
      auto leaf = [&](std::uint32_t i) { return Pick2{static_cast<std::int32_t>(items[i]), -1}; };
      auto mrg = [this](Pick2 x, Pick2 y) { return merge(x, y); };
      lv->base = DominanceTree<Pick2>(k0, k1, leaf, mrg, opt.cascading);
      entries += lv->base.node_count();
      return lv;
    }
    const auto& kl = keys[static_cast<std::size_t>(cc - 1)];
    std::sort(items.begin(), items.end(), [&](std::uint32_t a, std::uint32_t b) {
      return kl[a] != kl[b] ? kl[a] < kl[b] : a < b;
    });
    lv->last_key.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) lv->last_key[i] = kl[items[i]];
    lv->items = std::move(items);
    if (!lv->items.empty()) make_node(*lv, 0, static_cast<std::uint32_t>(lv->items.size()));
    return lv;
  }

  std::int32_t make_node(Level& lv, std::uint32_t lo, std::uint32_t hi) {
    auto id = static_cast<std::int32_t>(lv.nodes.size());
    lv.nodes.emplace_back();
    lv.nodes.back().lo = lo;
    lv.nodes.back().hi = hi;
    entries += hi - lo;
    if (hi - lo <= opt.leaf_size) return id;
    std::vector<std::uint32_t> sub(lv.items.begin() + lo, lv.items.begin() + hi);
    auto child = build(lv.c - 1, std::move(sub));
    lv.nodes[static_cast<std::size_t>(id)].sub = std::move(child);
    std::uint32_t mid = lo + (hi - lo) / 2;
    std::int32_t l = make_node(lv, lo, mid);
    std::int32_t r = make_node(lv, mid, hi);
    lv.nodes[static_cast<std::size_t>(id)].left = l;
    lv.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  void scan(const Level& lv, std::uint32_t lo, std::uint32_t hi, std::span<const double> off, Pick2& acc) const {
    for (std::uint32_t p = lo; p < hi; ++p) {
      std::uint32_t i = lv.items[p];
      if (inside(i, lv.c - 1, off)) acc = merge(acc, Pick2{static_cast<std::int32_t>(i), -1});
    }
  }

  void query(const Level& lv, std::span<const double> off, Pick2& acc) const {
    if (lv.c == 2) {
      auto mrg = [this](Pick2 x, Pick2 y) { return merge(x, y); };
      acc = lv.base.query(off[0], off[1], acc, mrg);
      return;
    }
    if (lv.items.empty()) return;
    auto r = static_cast<std::uint32_t>(
        std::upper_bound(lv.last_key.begin(), lv.last_key.end(), off[static_cast<std::size_t>(lv.c - 1)]) -
        lv.last_key.begin());
    if (r > 0) visit(lv, 0, r, off, acc);
  }

  void visit(const Level& lv, std::int32_t id, std::uint32_t r, std::span<const double> off, Pick2& acc) const {
    const auto& nd = lv.nodes[static_cast<std::size_t>(id)];
    if (nd.lo >= r) return;
    if (!nd.sub) {
      scan(lv, nd.lo, std::min(nd.hi, r), off, acc);
      return;
    }
    if (nd.hi <= r) {
      query(*nd.sub, off, acc);
      return;
    }
    visit(lv, nd.left, r, off, acc);
    visit(lv, nd.right, r, off, acc);
  }
};

Top2Store::Top2Store() : Top2Store(2, {}, {Coords{1, 0, 0}, Coords{0, 1, 0}}) {}

Top2Store::Top2Store(int dim, std::vector<WeightedPoint> points, std::vector<Coords> normals, Options opt) {
  if (dim != 2 && dim != 3) throw UsageError("top-2 stores work in 2 or 3 dimensions");
  int c = static_cast<int>(normals.size());
  if (c < 2 || c > 7) throw UsageError("top-2 stores take between 2 and 7 directions, got " + std::to_string(c));
  for (const auto& n : normals) {
    bool zero = true;
    for (int d = 0; d < dim; ++d) {
      if (!std::isfinite(n[static_cast<std::size_t>(d)])) throw UsageError("direction must be finite");
      if (n[static_cast<std::size_t>(d)] != 0) zero = false;
    }
    if (zero) throw UsageError("directions must be nonzero");
  }
  if (points.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
    throw UsageError("too many points");
  if (opt.leaf_size == 0) opt.leaf_size = 1;
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->c = c;
  impl->opt = opt;
  impl->pts = std::move(points);
  impl->normals = std::move(normals);
  impl->keys.assign(static_cast<std::size_t>(c), std::vector<double>(impl->pts.size()));
  for (int d = 0; d < c; ++d)
    for (std::size_t i = 0; i < impl->pts.size(); ++i)
      impl->keys[static_cast<std::size_t>(d)][i] = dot_key(impl->normals[static_cast<std::size_t>(d)],
                                                           impl->pts[i].coords, dim);
  std::vector<std::uint32_t> all(impl->pts.size());
  std::iota(all.begin(), all.end(), 0u);
  impl->root = impl->build(c, std::move(all));
  impl_ = std::move(impl);
}

Top2Answer Top2Store::query(std::span<const double> offsets) const {
  if (static_cast<int>(offsets.size()) != impl_->c) throw UsageError("expected one offset per direction");
  Pick2 acc;
  impl_->query(*impl_->root, offsets, acc);
  Top2Answer ans;
  if (acc.first >= 0) ans.first = impl_->pts[static_cast<std::size_t>(acc.first)];
  if (acc.second >= 0) ans.second = impl_->pts[static_cast<std::size_t>(acc.second)];
  return ans;
}

double Top2Store::key(int direction, const Coords& p) const {
  return dot_key(impl_->normals.at(static_cast<std::size_t>(direction)), p, impl_->dim);
}

int Top2Store::directions() const { return impl_->c; }
std::size_t Top2Store::size() const { return impl_->pts.size(); }
std::size_t Top2Store::node_count() const { return impl_->entries; }

namespace {

bool lighter_wp(const WeightedPoint& a, const WeightedPoint& b) {
  return a.weight != b.weight ? a.weight < b.weight : a.id < b.id;
}

}  // namespace

Top2Answer merge_top2(const Top2Answer& x, const Top2Answer& y) {
  const std::optional<WeightedPoint>* cand[4] = {&x.first, &x.second, &y.first, &y.second};
  Top2Answer r;
  for (auto* c : cand)
    if (*c && (!r.first || lighter_wp(**c, *r.first))) r.first = **c;
  if (!r.first) return r;
  for (auto* c : cand)
    if (*c && (*c)->color != r.first->color && (!r.second || lighter_wp(**c, *r.second))) r.second = **c;
  return r;
}

Top2Answer scan_top2(int dim, std::span<const WeightedPoint> points, std::span<const Coords> normals,
                     std::span<const double> offsets) {
  Top2Answer r;
  for (const auto& p : points) {
    bool in = true;
    for (std::size_t d = 0; d < normals.size(); ++d)
      if (!(dot_key(normals[d], p.coords, dim) <= offsets[d])) in = false;
    if (in && (!r.first || lighter_wp(p, *r.first))) r.first = p;
  }
  if (!r.first) return r;
  for (const auto& p : points) {
    bool in = true;
    for (std::size_t d = 0; d < normals.size(); ++d)
      if (!(dot_key(normals[d], p.coords, dim) <= offsets[d])) in = false;
    if (in && p.color != r.first->color && (!r.second || lighter_wp(p, *r.second))) r.second = p;
  }
  return r;
}

}  // namespace crcp
