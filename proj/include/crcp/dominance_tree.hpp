#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace crcp {

// Layered merge-sort tree answering "summary of all items with k0 <= t0 and
// k1 <= t1". The tree splits the items by k1 rank; every node keeps its items
// sorted by k0 with prefix summaries. With cascading on, each position also
// stores how many of the node's first items went to the left child, so only
// the root needs a binary search.
template <class Summary>
class DominanceTree {
 public:
  DominanceTree() = default;

  // leaf(i) makes the summary of item i; merge(a, b) combines two summaries.
  template <class Leaf, class Merge>
  DominanceTree(std::span<const double> k0, std::span<const double> k1, Leaf leaf, Merge merge, bool cascading)
      : cascading_(cascading), m_(k0.size()) {
    if (m_ == 0) return;
    std::vector<std::uint32_t> by_k1(m_);
    std::iota(by_k1.begin(), by_k1.end(), 0u);
    std::sort(by_k1.begin(), by_k1.end(), [&](std::uint32_t a, std::uint32_t b) {
      return k1[a] != k1[b] ? k1[a] < k1[b] : a < b;
    });
    k1_sorted_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) k1_sorted_[i] = k1[by_k1[i]];
    fill(0, 0, m_, by_k1, k0, leaf, merge);
    // Item ids are only needed while merging; with cascading only the root
    // keys are searched.
    for (std::size_t d = 0; d < levels_.size(); ++d) {
      std::vector<std::uint32_t>().swap(levels_[d].item);
      if (cascading_ && d > 0) std::vector<double>().swap(levels_[d].key0);
      if (!cascading_) std::vector<std::uint32_t>().swap(levels_[d].left);
    }
  }

  template <class Merge>
  Summary query(double t0, double t1, Summary acc, Merge merge) const {
    if (m_ == 0) return acc;
    std::size_t r1 = static_cast<std::size_t>(std::upper_bound(k1_sorted_.begin(), k1_sorted_.end(), t1) -
                                              k1_sorted_.begin());
    if (r1 == 0) return acc;
    std::size_t r0 = count_le(0, 0, m_, t0);
    visit(0, 0, m_, r0, r1, t0, acc, merge);
    return acc;
  }

  std::size_t size() const { return m_; }
  std::size_t node_count() const { return entries_; }
  bool cascading() const { return cascading_; }

 private:
  struct Level {
    std::vector<std::uint32_t> item;
    std::vector<double> key0;
    std::vector<Summary> prefix;
    std::vector<std::uint32_t> left;  // inclusive count of left-child items
  };

  Level& level(std::size_t d) {
    while (levels_.size() <= d) {
      Level l;
      l.item.resize(m_);
      l.key0.resize(m_);
      l.prefix.resize(m_);
      l.left.resize(m_);
      levels_.push_back(std::move(l));
    }
    return levels_[d];
  }

  template <class Leaf, class Merge>
  void fill(std::size_t d, std::size_t lo, std::size_t hi, const std::vector<std::uint32_t>& by_k1,
            std::span<const double> k0, Leaf& leaf, Merge& merge) {
    entries_ += hi - lo;
    if (hi - lo == 1) {
      Level& l = level(d);
      l.item[lo] = by_k1[lo];
      l.key0[lo] = k0[by_k1[lo]];
      l.prefix[lo] = leaf(by_k1[lo]);
      l.left[lo] = 0;
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    fill(d + 1, lo, mid, by_k1, k0, leaf, merge);
    fill(d + 1, mid, hi, by_k1, k0, leaf, merge);
    Level& l = level(d);
    const Level& c = levels_[d + 1];
    std::size_t i = lo, j = mid;
    std::uint32_t nleft = 0;
    for (std::size_t pos = lo; pos < hi; ++pos) {
      bool take_left = j == hi || (i < mid && (c.key0[i] < c.key0[j] ||
                                               (c.key0[i] == c.key0[j] && c.item[i] < c.item[j])));
      std::size_t src = take_left ? i++ : j++;
      if (take_left) ++nleft;
      l.item[pos] = c.item[src];
      l.key0[pos] = c.key0[src];
      Summary s = leaf(c.item[src]);
      l.prefix[pos] = pos == lo ? s : merge(l.prefix[pos - 1], s);
      l.left[pos] = nleft;
    }
  }

  std::size_t count_le(std::size_t d, std::size_t lo, std::size_t hi, double t0) const {
    const auto& k = levels_[d].key0;
    return static_cast<std::size_t>(std::upper_bound(k.begin() + static_cast<std::ptrdiff_t>(lo),
                                                     k.begin() + static_cast<std::ptrdiff_t>(hi), t0) -
                                    (k.begin() + static_cast<std::ptrdiff_t>(lo)));
  }

  // r0: number of the node's items with k0 <= t0; r1: k1-rank prefix bound
  template <class Merge>
  void visit(std::size_t d, std::size_t lo, std::size_t hi, std::size_t r0, std::size_t r1, double t0,
             Summary& acc, Merge& merge) const {
    if (r0 == 0 || lo >= r1) return;
    const Level& l = levels_[d];
    if (hi <= r1) {
      acc = merge(acc, l.prefix[lo + r0 - 1]);
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    std::size_t rl, rr;
    if (cascading_) {
      rl = l.left[lo + r0 - 1];
      rr = r0 - rl;
    } else {
      rl = count_le(d + 1, lo, mid, t0);
      rr = count_le(d + 1, mid, hi, t0);
    }
    visit(d + 1, lo, mid, rl, r1, t0, acc, merge);
    visit(d + 1, mid, hi, rr, r1, t0, acc, merge);
  }

  bool cascading_ = true;
  std::size_t m_ = 0;
  std::size_t entries_ = 0;
  std::vector<double> k1_sorted_;
  std::vector<Level> levels_;
};

}  // namespace crcp
