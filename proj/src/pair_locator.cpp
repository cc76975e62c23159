#include "crcp/pair_locator.hpp"

#include <cmath>

namespace crcp {

PairLocator::PairLocator(const Dataset& s, std::vector<PointPair> pairs, const QuerySpace& space, bool cascading)
    : space_(space), pairs_(std::move(pairs)) {
  if (!space.keyed()) throw UsageError("pair locators support strips, quadrants, slabs and 2-boxes, not " + space.name());
  if (space.dim() != s.dim()) throw UsageError("space dimension does not match dataset");
  std::vector<double> k0(pairs_.size()), k1(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    if (p.a >= s.size() || p.b >= s.size()) throw UsageError("pair refers to a missing point");
    if (!std::isfinite(p.length)) throw UsageError("pair weights must be finite");
    Key2 k = pair_key(space, s, p);
    k0[i] = -k.k0;
    k1[i] = -k.k1;
  }
  auto leaf = [](std::uint32_t i) { return Best{i}; };
  auto merge = [this](Best x, Best y) { return better(x, y); };
  tree_ = DominanceTree<Best>(k0, k1, leaf, merge, cascading);
}

PairLocator::Best PairLocator::better(Best x, Best y) const {
  if (x.idx < 0) return y;
  if (y.idx < 0) return x;
  const auto& px = pairs_[static_cast<std::size_t>(x.idx)];
  const auto& py = pairs_[static_cast<std::size_t>(y.idx)];
  if (px.length != py.length) return px.length < py.length ? x : y;
  return x.idx < y.idx ? x : y;
}

std::optional<std::uint32_t> PairLocator::query_index(const OrthoRange& x) const {
  Key2 t = range_key(space_, x);  // usage error on a kind mismatch
  auto merge = [this](Best u, Best v) { return better(u, v); };
  Best b = tree_.query(-t.k0, -t.k1, Best{}, merge);
  if (b.idx < 0) return std::nullopt;
  return static_cast<std::uint32_t>(b.idx);
}

std::optional<PointPair> PairLocator::query_lightest(const OrthoRange& x) const {
  auto i = query_index(x);
  if (!i) return std::nullopt;
  return pairs_[*i];
}

}  // namespace crcp
