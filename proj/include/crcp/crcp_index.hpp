#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crcp/anchored.hpp"
#include "crcp/coreset.hpp"
#include "crcp/geometry.hpp"
#include "crcp/pair_locator.hpp"
#include "crcp/query_space.hpp"

namespace crcp {

enum class IndexKind { Strip, Quadrant, Rect1, Rect2, Slab, TwoBox, Dom3, Anchored2D, Anchored3D };

std::string_view to_string(IndexKind k);
IndexKind parse_index_kind(std::string_view name);
int index_dim(IndexKind k);

struct BuildOptions {
  bool cascading = true;
  AnchoredOptions anchored;
  std::size_t coreset_cap = 40'000'000;
  // 2-box configurations (orthant spaces in 3D); empty: the three (+,+)
  // configurations a dominance query needs.
  std::vector<QuerySpace> two_box_spaces;
  // Test hook: remove the coreset pair at this position (mod size) from the
  // first nonempty coreset the build produces.
  std::optional<std::size_t> drop_coreset_pair;
};

struct QueryStats {
  std::size_t sub_queries = 0;  // locator and anchored lookups
  std::size_t candidates = 0;   // pairs compared for the final answer
  std::vector<Coords> anchors;  // anchors used (rectangle and dominance queries)
};

// Key-value statistics, printable as `key value` lines.
struct IndexStats {
  std::vector<std::pair<std::string, std::size_t>> values;
  void add(const std::string& key, std::size_t v) { values.emplace_back(key, v); }
  std::size_t get(const std::string& key) const;
  std::string to_text() const;
};

class CrcpIndex {
 public:
  virtual ~CrcpIndex() = default;

  virtual IndexKind kind() const = 0;
  // Anchored kinds need q.anchor; the others ignore it.
  virtual std::optional<PointPair> query(const RangeQuery& q, QueryStats* st = nullptr) const = 0;
  std::optional<PointPair> query(const OrthoRange& r, QueryStats* st = nullptr) const {
    return query(RangeQuery{r, std::nullopt}, st);
  }
  virtual IndexStats stats() const = 0;
  std::size_t node_count() const { return stats().get("nodes.total"); }

  const Dataset& dataset() const { return s_; }
  const MonotoneNorm& norm() const { return norm_; }
  double eps() const { return eps_; }

 protected:
  CrcpIndex(const Dataset& s, const MonotoneNorm& norm, double eps);

  Dataset s_;
  MonotoneNorm norm_;
  double eps_;
};

// Coreset of the bichromatic pairs of a point subset for one band space,
// with a locator on top.
class BandPart {
 public:
  BandPart(const Dataset& s, std::span<const PointId> subset, const MonotoneNorm& norm, double eps,
           const QuerySpace& space, BuildOptions& opt);
  std::optional<PointPair> query(const OrthoRange& r) const { return loc_.query_lightest(r); }
  std::size_t coreset_size() const { return loc_.size(); }
  std::size_t node_count() const { return loc_.node_count(); }
  const PairLocator& locator() const { return loc_; }

 private:
  PairLocator loc_;
};

// One orthant space over a point subset: coreset of the frame NW-SE pairs
// plus one nearest-neighbour pair per point for the NE-SW pairs.
class OrthantPart {
 public:
  OrthantPart(const Dataset& s, std::span<const PointId> subset, const MonotoneNorm& norm, double eps,
              const QuerySpace& space, BuildOptions& opt);
  std::optional<PointPair> query(const OrthoRange& r) const { return loc_.query_lightest(r); }
  std::size_t coreset_size() const { return coreset_pairs_; }
  std::size_t nn_pairs() const { return nn_pairs_; }
  std::size_t subset_size() const { return n_; }
  std::size_t node_count() const { return loc_.node_count(); }
  const PairLocator& locator() const { return loc_; }

 private:
  PairLocator loc_;
  std::size_t coreset_pairs_ = 0, nn_pairs_ = 0, n_ = 0;
};

// All 3D orthant configurations: 3 axis pairs x 4 sign patterns.
std::vector<QuerySpace> all_two_box_spaces();
// The three (+,+) configurations a dominance query needs.
std::vector<QuerySpace> dominance_two_box_spaces();

// Nearest differently-colored point weakly dominating each point in the
// orthant frame (ties on a frame axis count); one pair per point at most.
std::vector<PointPair> dominating_nn_pairs(const Dataset& s, std::span<const PointId> subset,
                                           const MonotoneNorm& norm, const QuerySpace& space);

// Balanced tree over a point subset sorted by (coordinate, id) on one axis.
class RankTree {
 public:
  struct Node {
    std::uint32_t lo = 0, hi = 0;  // positions [lo, hi)
    std::int32_t left = -1, right = -1;
  };

  RankTree() = default;
  RankTree(const Dataset& s, std::vector<PointId> ids, int axis);

  int axis() const { return axis_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::span<const PointId> points(int node) const;
  PointId at(std::uint32_t pos) const { return ids_[pos]; }
  double coord(std::uint32_t pos) const { return coord_[pos]; }

  // Positions of the points with coordinate in [lo, hi].
  std::pair<std::uint32_t, std::uint32_t> rank_range(double lo, double hi) const;
  // Maximal nodes covering [l, r), left to right.
  std::vector<int> canonical(std::uint32_t l, std::uint32_t r) const;
  // Deepest node whose positions include all of [l, r); needs r > l.
  int splitting(std::uint32_t l, std::uint32_t r) const;
  // Value between the last coordinate of the left child and the first of the right.
  double separator(int node) const;
  // Values between consecutive canonical nodes.
  std::vector<double> separators(const std::vector<int>& canonical_nodes) const;

 private:
  void build(std::uint32_t lo, std::uint32_t hi);

  int axis_ = 0;
  std::vector<PointId> ids_;
  std::vector<double> coord_;
  std::vector<Node> nodes_;
};

class BandIndex final : public CrcpIndex {
 public:
  // Strips in 2D (both axes), slabs in 3D (all three axes).
  BandIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt = {});
  IndexKind kind() const override { return s_.dim() == 2 ? IndexKind::Strip : IndexKind::Slab; }
  std::optional<PointPair> query(const RangeQuery& q, QueryStats* st = nullptr) const override;
  using CrcpIndex::query;
  IndexStats stats() const override;
  const BandPart& part(int axis) const { return parts_[static_cast<std::size_t>(axis)]; }

 private:
  std::vector<BandPart> parts_;
};

class OrthantIndex final : public CrcpIndex {
 public:
  // Quadrants in 2D (all four sign patterns); 2-boxes in 3D per configuration.
  OrthantIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt = {});
  IndexKind kind() const override { return s_.dim() == 2 ? IndexKind::Quadrant : IndexKind::TwoBox; }
  std::optional<PointPair> query(const RangeQuery& q, QueryStats* st = nullptr) const override;
  using CrcpIndex::query;
  IndexStats stats() const override;
  const std::vector<QuerySpace>& spaces() const { return spaces_; }
  const OrthantPart& part(std::size_t i) const { return parts_[i]; }

 private:
  std::vector<QuerySpace> spaces_;
  std::vector<OrthantPart> parts_;
};

struct RectTrace {
  std::vector<int> x_canonical, y_canonical;  // nodes of the x and y trees
  std::optional<int> split_u, split_v;         // rect-v1 only
  std::vector<Coords> anchors;
};

// Shared by both rectangle indexes: the x tree whose nodes answer horizontal
// strips, the y tree whose nodes answer vertical strips, and the anchored index.
class RectIndexBase : public CrcpIndex {
 public:
  std::optional<PointPair> query(const RangeQuery& q, QueryStats* st = nullptr) const override;
  using CrcpIndex::query;
  virtual std::optional<PointPair> query_rect(const Rectangle& r, QueryStats* st = nullptr,
                                              RectTrace* trace = nullptr) const = 0;
  const RankTree& x_tree() const { return tx_; }
  const RankTree& y_tree() const { return ty_; }
  const AnchoredIndex2D& anchored() const { return *c_; }

 protected:
  RectIndexBase(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions& opt);
  // Strip sub-answers over canonical nodes; fills the trace's canonical lists.
  std::optional<PointPair> strips(const Rectangle& r, QueryStats* st, RectTrace& trace) const;
  std::optional<PointPair> anchored_at(const Rectangle& r, const std::vector<Coords>& anchors, QueryStats* st) const;
  void add_base_stats(IndexStats& out, std::size_t& total) const;

  RankTree tx_, ty_;
  std::vector<std::optional<BandPart>> bx_, by_;  // per node; empty for single points
  std::unique_ptr<AnchoredIndex2D> c_;
};

class RectIndexV1 final : public RectIndexBase {
 public:
  RectIndexV1(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt = {});
  IndexKind kind() const override { return IndexKind::Rect1; }
  std::optional<PointPair> query_rect(const Rectangle& r, QueryStats* st = nullptr,
                                      RectTrace* trace = nullptr) const override;
  IndexStats stats() const override;

  struct Secondary {
    RankTree tree;  // on y over the primary node's points
    // per secondary node: quadrant parts for the ne, nw, sw, se subsets
    std::vector<std::array<std::optional<OrthantPart>, 4>> parts;
  };
  // The primary tree is the x tree shared with the strip part.
  const RankTree& primary() const { return tx_; }
  const Secondary& secondary(int u) const { return *secondary_[static_cast<std::size_t>(u)]; }

 private:
  std::vector<std::unique_ptr<Secondary>> secondary_;  // per primary node; null for leaves
};

class RectIndexV2 final : public RectIndexBase {
 public:
  RectIndexV2(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt = {});
  IndexKind kind() const override { return IndexKind::Rect2; }
  std::optional<PointPair> query_rect(const Rectangle& r, QueryStats* st = nullptr,
                                      RectTrace* trace = nullptr) const override;
  IndexStats stats() const override;
};

struct DominanceTrace {
  std::array<std::vector<int>, 3> canonical;  // per axis tree
  std::vector<Coords> anchors;
};

class Dominance3Index final : public CrcpIndex {
 public:
  Dominance3Index(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt = {});
  IndexKind kind() const override { return IndexKind::Dom3; }
  std::optional<PointPair> query(const RangeQuery& q, QueryStats* st = nullptr) const override;
  using CrcpIndex::query;
  std::optional<PointPair> query_dominance(const Dominance3& d, QueryStats* st = nullptr,
                                           DominanceTrace* trace = nullptr) const;
  IndexStats stats() const override;
  const RankTree& tree(int axis) const { return trees_[static_cast<std::size_t>(axis)]; }
  // 2-box part at a node of the axis tree; empty below two points.
  const std::optional<OrthantPart>& part(int axis, int node) const {
    return parts_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(node)];
  }
  const AnchoredIndex3D& anchored() const { return *c_; }

 private:
  std::array<RankTree, 3> trees_;
  std::array<std::vector<std::optional<OrthantPart>>, 3> parts_;
  std::unique_ptr<AnchoredIndex3D> c_;
};

class Anchored2DIndex final : public CrcpIndex {
 public:
  Anchored2DIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt = {});
  IndexKind kind() const override { return IndexKind::Anchored2D; }
  std::optional<PointPair> query(const RangeQuery& q, QueryStats* st = nullptr) const override;
  using CrcpIndex::query;
  IndexStats stats() const override;

 private:
  AnchoredIndex2D c_;
};

class Anchored3DIndex final : public CrcpIndex {
 public:
  Anchored3DIndex(const Dataset& s, const MonotoneNorm& norm, double eps, BuildOptions opt = {});
  IndexKind kind() const override { return IndexKind::Anchored3D; }
  std::optional<PointPair> query(const RangeQuery& q, QueryStats* st = nullptr) const override;
  using CrcpIndex::query;
  IndexStats stats() const override;

 private:
  AnchoredIndex3D c_;
};

std::unique_ptr<CrcpIndex> build_index(IndexKind kind, const Dataset& s, const MonotoneNorm& norm, double eps,
                                       const BuildOptions& opt = {});

inline std::unique_ptr<CrcpIndex> build_strip_index(const Dataset& s, const MonotoneNorm& norm, double eps) {
  return build_index(IndexKind::Strip, s, norm, eps);
}
inline std::unique_ptr<CrcpIndex> build_quadrant_index(const Dataset& s, const MonotoneNorm& norm, double eps) {
  return build_index(IndexKind::Quadrant, s, norm, eps);
}
inline std::unique_ptr<CrcpIndex> build_rect_index_v1(const Dataset& s, const MonotoneNorm& norm, double eps) {
  return build_index(IndexKind::Rect1, s, norm, eps);
}
inline std::unique_ptr<CrcpIndex> build_rect_index_v2(const Dataset& s, const MonotoneNorm& norm, double eps) {
  return build_index(IndexKind::Rect2, s, norm, eps);
}
inline std::unique_ptr<CrcpIndex> build_slab_index(const Dataset& s, const MonotoneNorm& norm, double eps) {
  return build_index(IndexKind::Slab, s, norm, eps);
}
inline std::unique_ptr<CrcpIndex> build_2box_index(const Dataset& s, const MonotoneNorm& norm, double eps) {
  return build_index(IndexKind::TwoBox, s, norm, eps);
}
inline std::unique_ptr<CrcpIndex> build_dominance3_index(const Dataset& s, const MonotoneNorm& norm, double eps) {
  return build_index(IndexKind::Dom3, s, norm, eps);
}

}  // namespace crcp
