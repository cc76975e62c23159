#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "crcp/geometry.hpp"

namespace crcp {

struct WeightedPoint {
  Coords coords{};
  double weight = 0;
  Color color = 0;
  PointId id = 0;  // tie-break and identity
};

struct Top2Answer {
  std::optional<WeightedPoint> first;   // lightest in range
  std::optional<WeightedPoint> second;  // lightest in range with a color other than first's
};

// Lightest point, and lightest point of a different color, inside an
// intersection of translates of c fixed halfplanes/halfspaces
// {p : normal_i . p <= offset_i}. Ties go to the lower point id.
class Top2Store {
 public:
  struct Options {
    bool cascading = true;
    std::size_t leaf_size = 16;  // node sizes at or below this are scanned
  };

  Top2Store();
  Top2Store(int dim, std::vector<WeightedPoint> points, std::vector<Coords> normals, Options opt);
  Top2Store(int dim, std::vector<WeightedPoint> points, std::vector<Coords> normals)
      : Top2Store(dim, std::move(points), std::move(normals), Options{}) {}

  Top2Answer query(std::span<const double> offsets) const;

  // The key a point gets for direction i (the value compared with offset i).
  double key(int direction, const Coords& p) const;

  int directions() const;
  std::size_t size() const;
  std::size_t node_count() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

inline Top2Store build_top2(int dim, std::vector<WeightedPoint> points, std::vector<Coords> normals,
                            Top2Store::Options opt = {}) {
  return Top2Store(dim, std::move(points), std::move(normals), opt);
}

// Combine two answers of disjoint point sets into the answer of their union.
Top2Answer merge_top2(const Top2Answer& x, const Top2Answer& y);

// Linear scan with the same tie-break; the reference for tests.
Top2Answer scan_top2(int dim, std::span<const WeightedPoint> points, std::span<const Coords> normals,
                     std::span<const double> offsets);

}  // namespace crcp
