#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "crcp/geometry.hpp"
#include "crcp/query_space.hpp"

namespace crcp {

// Exact closest bichromatic pair inside X by scanning all pairs; ties go to
// the lowest (i, j).
std::optional<PointPair> brute_force_crcp(const Dataset& s, const MonotoneNorm& norm, const OrthoRange& x);
// Same over the whole space.
std::optional<PointPair> brute_force_crcp(const Dataset& s, const MonotoneNorm& norm);
// Restricted to pairs whose bounding box contains o.
std::optional<PointPair> brute_force_anchored(const Dataset& s, const MonotoneNorm& norm, const OrthoRange& x,
                                              const Coords& o);

// n/2 red a_i = (-i, n^2 - i n), n/2 blue b_i = (i, i n - n^2); n even.
Dataset gen_adversarial_strip(std::size_t n);
// Blue points mirrored onto the x axis: b_i = (n^2 - i n, -i).
Dataset gen_adversarial_quadrant(std::size_t n);

// Distinct pairs that are the exact closest bichromatic pair of at least one
// range of the space (2D strips or quadrants), over all combinatorially
// distinct ranges.
std::size_t count_candidate_pairs(const Dataset& s, const QuerySpace& space, const MonotoneNorm& norm);
// The pairs themselves, sorted by (a, b).
std::vector<PointPair> candidate_pairs(const Dataset& s, const QuerySpace& space, const MonotoneNorm& norm);

enum class Distribution {
  UniformBox,  // uniform in [0,1)^d
  Clustered,   // Gaussian blobs around uniform centres
  Lattice,     // integer grid 0..7 per axis, many ties and shared coordinates
};
std::string_view to_string(Distribution d);
Distribution parse_distribution(std::string_view name);

Dataset gen_random(std::size_t n, std::uint32_t num_colors, Distribution dist, int dim, std::uint64_t seed);

// Small seeded generator with a platform-independent uniform double.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next() { return gen_(); }
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  std::uint64_t below(std::uint64_t m);    // [0, m), m > 0
  double normal();

 private:
  std::mt19937_64 gen_;
};

}  // namespace crcp
