#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crcp {

// Raised for malformed input and contract violations by the caller.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxDim = 3;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using PointId = std::uint32_t;
using Color = std::uint32_t;
using Coords = std::array<double, kMaxDim>;

struct ColoredPoint {
  Coords coords{};  // axes beyond the dataset dimension are zero
  Color color = 0;

  double operator[](int axis) const { return coords[static_cast<std::size_t>(axis)]; }
};

ColoredPoint make_point(double x, double y, Color color);
ColoredPoint make_point(double x, double y, double z, Color color);

class Dataset {
 public:
  explicit Dataset(int dim = 2);
  Dataset(int dim, std::vector<ColoredPoint> points);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const ColoredPoint& operator[](PointId id) const { return points_[id]; }
  std::span<const ColoredPoint> points() const { return points_; }

  void add(const ColoredPoint& p);

  // Text format: `x y [z] color` per line, '#' comments, blank lines ignored.
  static Dataset read(std::istream& in, int dim = 0);
  static Dataset load(const std::string& path, int dim = 0);
  void write(std::ostream& out, std::string_view header = {}) const;
  void save(const std::string& path, std::string_view header = {}) const;

 private:
  int dim_;
  std::vector<ColoredPoint> points_;
};

// An L_p norm (p >= 1 or p = inf) with positive per-axis weights:
// ||v|| = (sum_i (w_i |v_i|)^p)^(1/p), so ||e_i|| = w_i.
class MonotoneNorm {
 public:
  static MonotoneNorm lp(double p, int dim);
  static MonotoneNorm l1(int dim) { return lp(1.0, dim); }
  static MonotoneNorm l2(int dim) { return lp(2.0, dim); }
  static MonotoneNorm linf(int dim) { return lp(kInf, dim); }
  static MonotoneNorm weighted(double p, std::vector<double> weights);

  // `l1`, `l2`, `linf`, `lp:<p>`, `wl1:w1,w2[,w3]`, `wl2:...`, `wlinf:...`, `wlp:<p>:w1,...`
  static MonotoneNorm parse(std::string_view spec, int dim);

  int dim() const { return dim_; }
  double p() const { return p_; }
  bool is_weighted() const;
  double axis_norm(int axis) const { return w_[static_cast<std::size_t>(axis)]; }
  double min_axis_norm() const;
  double max_axis_norm() const;

  double operator()(std::span<const double> v) const;
  double distance(const Coords& a, const Coords& b) const;
  double distance(const ColoredPoint& a, const ColoredPoint& b) const {
    return distance(a.coords, b.coords);
  }

  // Same exponent, unit weights.
  MonotoneNorm unweighted() const;
  std::string to_string() const;

 private:
  MonotoneNorm(double p, int dim, Coords w) : p_(p), dim_(dim), w_(w) {}

  double p_;
  int dim_;
  Coords w_;
};

double norm_distance(const MonotoneNorm& norm, std::span<const double> a, std::span<const double> b);
double norm_distance(const MonotoneNorm& norm, const ColoredPoint& a, const ColoredPoint& b);

enum class Orientation { NeSw, NwSe, Both };

std::string_view to_string(Orientation o);

// Sign-based, so tiny coordinate differences never collapse to Both.
Orientation classify_pair(const Coords& a, const Coords& b);
Orientation classify_pair(const ColoredPoint& a, const ColoredPoint& b);

struct PointPair {
  PointId a = 0;  // a < b
  PointId b = 0;
  double length = 0.0;

  friend bool operator==(const PointPair&, const PointPair&) = default;
};

PointPair make_pair(const Dataset& s, const MonotoneNorm& norm, PointId i, PointId j);

// Global pair order: length, then smaller id, then larger id.
inline bool lighter(const PointPair& x, const PointPair& y) {
  if (x.length != y.length) return x.length < y.length;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

inline std::optional<PointPair> lighter_of(const std::optional<PointPair>& x,
                                           const std::optional<PointPair>& y) {
  if (!x) return y;
  if (!y) return x;
  return lighter(*y, *x) ? y : x;
}

std::ostream& operator<<(std::ostream& out, const PointPair& p);

// All pairs with distinct colors, enumerated in (i, j) order, i < j.
std::vector<PointPair> bichromatic_pairs(const Dataset& s, const MonotoneNorm& norm,
                                         std::size_t cap = 0);

struct BoundingBox {
  int dim = 2;
  Coords lo{};
  Coords hi{};

  static BoundingBox of(int dim, std::span<const Coords> pts);
  static BoundingBox of(const Dataset& s, const PointPair& p);
  static BoundingBox everything(int dim);

  bool contains(const Coords& p) const;
  bool contains(const BoundingBox& other) const;
  bool is_vertex(const Coords& p) const;
};

// Image under x_i -> x_i * ||e_i|| plus the induced unit-axis norm.
std::pair<Dataset, MonotoneNorm> normalize_axes(const Dataset& s, const MonotoneNorm& norm);

// Equivalence with L2: (1/sqrt d) L2 min||e_i|| <= delta <= d L2 max||e_i||.
bool check_norm_equivalence(const MonotoneNorm& norm,
                            std::span<const std::pair<Coords, Coords>> samples);

}  // namespace crcp
