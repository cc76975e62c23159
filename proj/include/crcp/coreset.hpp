#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "crcp/geometry.hpp"
#include "crcp/query_space.hpp"

namespace crcp {

struct CoresetStep {
  OrthoRange range;  // the minimal range selected in this iteration
  PointPair pair;    // the closest remaining pair inside it
  std::uint32_t index = 0;  // position of `pair` in the input list
  bool kept = false;
};

struct CoresetResult {
  std::vector<PointPair> pairs;
  std::vector<std::uint32_t> indices;  // input positions of `pairs`
  std::vector<CoresetStep> trace;      // one entry per input pair
  std::size_t ground_size = 0;         // distinct points touched by the input
};

struct CoresetOptions {
  std::size_t max_pairs = 40'000'000;
  bool record_trace = true;
};

// Greedy coreset of a pair set for a keyed (band or orthant) space. Pairs
// with equal length are ordered by input position. The pair lengths are
// the weights; `norm` is only used to recheck them.
CoresetResult build_coreset(const Dataset& s, std::span<const PointPair> pairs, const QuerySpace& space,
                            const MonotoneNorm& norm, double eps, const CoresetOptions& opt = {});

// The three-step procedure run literally, one minimal range per iteration.
// Quadratic in |pairs|; used as a reference.
CoresetResult build_coreset_greedy(const Dataset& s, std::span<const PointPair> pairs, const QuerySpace& space,
                                   const MonotoneNorm& norm, double eps, const CoresetOptions& opt = {});

// Index (into `remaining`) of a pair whose smallest range is ⊆-minimal among
// the smallest ranges of all remaining pairs: smallest span (band) or largest
// corner sum (orthant) first, lowest position among equals.
std::size_t select_minimal(const Dataset& s, std::span<const PointPair> remaining, const QuerySpace& space);

// Checks the coreset condition on every combinatorially distinct range of the
// space (boundaries at point coordinates or infinite). Returns the first
// violating range.
std::optional<OrthoRange> verify_coreset(const Dataset& s, std::span<const PointPair> all,
                                         std::span<const PointPair> kept, const QuerySpace& space, double eps);

// Distinct coordinate values of the dataset on `axis`, sorted, optionally
// scaled by `sign` (so the values are frame coordinates).
std::vector<double> axis_values(const Dataset& s, int axis, int sign = 1);

// All combinatorially distinct ranges of a keyed space (the enumeration used
// by verify_coreset).
std::vector<OrthoRange> canonical_ranges(const Dataset& s, const QuerySpace& space);

// Kept-pair gap: any two strongly adjacent kept pairs differ in length by
// more than a (1+eps) factor. Returns an offending couple.
std::optional<std::pair<PointPair, PointPair>> check_kept_gap(const Dataset& s, std::span<const PointPair> kept,
                                                              double eps);

struct SizeGrowthRow {
  std::size_t n = 0;
  double eps = 0;
  double mean_size = 0;
  double bound = 0;  // eps^-1 n log2^d n
  double fitted = 0;  // mean_size / bound
};

struct SizeGrowthOptions {
  std::size_t trials = 3;
  std::uint32_t num_colors = 2;
  std::uint64_t seed = 1;
  int log_power = 0;  // 0: the dimension of the space
};

// Coresets of all bichromatic pairs of uniform random point sets, averaged over trials.
std::vector<SizeGrowthRow> measure_size_growth(const QuerySpace& space, const MonotoneNorm& norm,
                                               std::span<const double> eps_list, std::span<const std::size_t> n_list,
                                               const SizeGrowthOptions& opt = {});

// Pair list text format: one `i j length` line per pair, '#' comments.
void write_pairs(std::ostream& out, std::span<const PointPair> pairs);
std::vector<PointPair> read_pairs(std::istream& in);

// Same eps test used everywhere: candidate <= (1+eps) * optimum, no slack.
inline bool within_factor(double candidate, double optimum, double eps) { return candidate <= (1.0 + eps) * optimum; }

}  // namespace crcp
