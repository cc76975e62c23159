#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crcp/dominance_tree.hpp"
#include "crcp/geometry.hpp"
#include "crcp/query_space.hpp"

namespace crcp {

// Lightest pair fully inside a strip/slab or quadrant/2-box. Each pair is
// reduced to its containment key; containment becomes 2D dominance.
class PairLocator {
 public:
  PairLocator() = default;
  // Weights are the pair lengths; ties go to the lowest position in `pairs`.
  PairLocator(const Dataset& s, std::vector<PointPair> pairs, const QuerySpace& space, bool cascading = true);

  std::optional<PointPair> query_lightest(const OrthoRange& x) const;
  // Position in the input list of the answer.
  std::optional<std::uint32_t> query_index(const OrthoRange& x) const;

  const QuerySpace& space() const { return space_; }
  const std::vector<PointPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  std::size_t node_count() const { return tree_.node_count(); }

 private:
  struct Best {
    std::int64_t idx = -1;
  };
  Best better(Best x, Best y) const;

  QuerySpace space_ = QuerySpace::vertical_strips();
  std::vector<PointPair> pairs_;
  DominanceTree<Best> tree_;
};

inline PairLocator build_locator(const Dataset& s, std::vector<PointPair> pairs, const QuerySpace& space,
                                 bool cascading = true) {
  return PairLocator(s, std::move(pairs), space, cascading);
}

inline std::optional<PointPair> query_lightest(const PairLocator& loc, const OrthoRange& x) {
  return loc.query_lightest(x);
}

}  // namespace crcp
