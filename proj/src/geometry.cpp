#include "crcp/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace crcp {

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw UsageError("dimension must be 2 or 3, got " + std::to_string(dim));
}

double parse_double(std::string_view tok, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw UsageError("bad " + std::string(what) + ": '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

ColoredPoint make_point(double x, double y, Color color) { return {{x, y, 0.0}, color}; }

ColoredPoint make_point(double x, double y, double z, Color color) { return {{x, y, z}, color}; }

Dataset::Dataset(int dim) : dim_(dim) { check_dim(dim); }

Dataset::Dataset(int dim, std::vector<ColoredPoint> points) : dim_(dim) {
  check_dim(dim);
  points_.reserve(points.size());
  for (const auto& p : points) add(p);
}

void Dataset::add(const ColoredPoint& p) {
  for (int i = 0; i < dim_; ++i)
    if (!std::isfinite(p[i])) throw UsageError("point coordinates must be finite");
  ColoredPoint q = p;
  for (int i = dim_; i < kMaxDim; ++i) q.coords[static_cast<std::size_t>(i)] = 0.0;
  if (points_.size() >= std::numeric_limits<PointId>::max()) throw UsageError("dataset too large");
  points_.push_back(q);
}

Dataset Dataset::read(std::istream& in, int dim) {
  std::vector<ColoredPoint> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    int d = static_cast<int>(toks.size()) - 1;
    if (dim == 0) {
      check_dim(d);
      dim = d;
    }
    if (d != dim)
      throw UsageError("line " + std::to_string(lineno) + ": expected " + std::to_string(dim + 1) +
                       " fields");
    ColoredPoint p;
    for (int i = 0; i < dim; ++i) p.coords[static_cast<std::size_t>(i)] = parse_double(toks[i], "coordinate");
    double c = parse_double(toks.back(), "color");
    if (c < 0 || c != std::floor(c) || c > 1e9)
      throw UsageError("line " + std::to_string(lineno) + ": color must be a nonnegative integer");
    p.color = static_cast<Color>(c);
    pts.push_back(p);
  }
  return Dataset(dim == 0 ? 2 : dim, std::move(pts));
}

Dataset Dataset::load(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return read(in, dim);
}

void Dataset::write(std::ostream& out, std::string_view header) const {
  out << "# " << (header.empty() ? "crcp dataset" : header) << " d=" << dim_ << " n=" << size()
      << '\n';
  std::ostringstream ls;
  ls << std::setprecision(17);
  for (const auto& p : points_) {
    ls.str({});
    for (int i = 0; i < dim_; ++i) ls << p[i] << ' ';
    ls << p.color << '\n';
    out << ls.str();
  }
}

void Dataset::save(const std::string& path, std::string_view header) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write(out, header);
}

MonotoneNorm MonotoneNorm::lp(double p, int dim) {
  return weighted(p, std::vector<double>(static_cast<std::size_t>(dim), 1.0));
}

MonotoneNorm MonotoneNorm::weighted(double p, std::vector<double> weights) {
  int dim = static_cast<int>(weights.size());
  check_dim(dim);
  if (std::isnan(p) || p < 1.0) throw UsageError("norm exponent must satisfy p >= 1");
  Coords w{1.0, 1.0, 1.0};
  for (int i = 0; i < dim; ++i) {
    double wi = weights[static_cast<std::size_t>(i)];
    if (!(wi > 0.0) || !std::isfinite(wi)) throw UsageError("axis weights must be positive and finite");
    w[static_cast<std::size_t>(i)] = wi;
  }
  return MonotoneNorm(p, dim, w);
}

MonotoneNorm MonotoneNorm::parse(std::string_view spec, int dim) {
  auto exponent = [](std::string_view s) -> double {
    if (s == "1") return 1.0;
    if (s == "2") return 2.0;
    if (s == "inf") return kInf;
    return parse_double(s, "norm exponent");
  };
  auto weights = [&](std::string_view s) {
    std::vector<double> w;
    for (auto tok : split(s, ',')) w.push_back(parse_double(tok, "axis weight"));
    if (static_cast<int>(w.size()) != dim)
      throw UsageError("norm '" + std::string(spec) + "' needs " + std::to_string(dim) + " weights");
    return w;
  };
  if (spec == "l1") return l1(dim);
  if (spec == "l2") return l2(dim);
  if (spec == "linf") return linf(dim);
  if (spec.starts_with("lp:")) return lp(exponent(spec.substr(3)), dim);
  if (spec.starts_with("wlp:")) {
    auto rest = spec.substr(4);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw UsageError("expected wlp:<p>:<weights>");
    return weighted(exponent(rest.substr(0, colon)), weights(rest.substr(colon + 1)));
  }
  for (std::string_view pre : {"wl1:", "wl2:", "wlinf:"}) {
    if (spec.starts_with(pre)) {
      auto e = pre.substr(2, pre.size() - 3);
      return weighted(exponent(e), weights(spec.substr(pre.size())));
    }
  }
  throw UsageError("unknown norm '" + std::string(spec) + "'");
}

bool MonotoneNorm::is_weighted() const {
  for (int i = 0; i < dim_; ++i)
    if (w_[static_cast<std::size_t>(i)] != 1.0) return true;
  return false;
}

double MonotoneNorm::min_axis_norm() const {
  return *std::min_element(w_.begin(), w_.begin() + dim_);
}

double MonotoneNorm::max_axis_norm() const {
  return *std::max_element(w_.begin(), w_.begin() + dim_);
}

double MonotoneNorm::operator()(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dim_) throw UsageError("vector dimension does not match norm");
  double acc = 0.0;
  if (std::isinf(p_)) {
    for (int i = 0; i < dim_; ++i) acc = std::max(acc, w_[static_cast<std::size_t>(i)] * std::fabs(v[static_cast<std::size_t>(i)]));
    return acc;
  }
  if (p_ == 1.0) {
    for (int i = 0; i < dim_; ++i) acc += w_[static_cast<std::size_t>(i)] * std::fabs(v[static_cast<std::size_t>(i)]);
    return acc;
  }
  if (p_ == 2.0) {
    for (int i = 0; i < dim_; ++i) {
      double t = w_[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
      acc += t * t;
    }
    return std::sqrt(acc);
  }
  // scale by the largest term to keep pow() in range
  double big = 0.0;
  for (int i = 0; i < dim_; ++i)
    big = std::max(big, w_[static_cast<std::size_t>(i)] * std::fabs(v[static_cast<std::size_t>(i)]));
  if (big == 0.0) return 0.0;
  for (int i = 0; i < dim_; ++i)
    acc += std::pow(w_[static_cast<std::size_t>(i)] * std::fabs(v[static_cast<std::size_t>(i)]) / big, p_);
  return big * std::pow(acc, 1.0 / p_);
}

double MonotoneNorm::distance(const Coords& a, const Coords& b) const {
  Coords d{};
  for (int i = 0; i < dim_; ++i) d[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
  return (*this)(std::span<const double>(d.data(), static_cast<std::size_t>(dim_)));
}

MonotoneNorm MonotoneNorm::unweighted() const { return MonotoneNorm(p_, dim_, {1.0, 1.0, 1.0}); }

std::string MonotoneNorm::to_string() const {
  std::ostringstream s;
  s << std::setprecision(17);
  std::string e = std::isinf(p_) ? "inf" : p_ == 1.0 ? "1" : p_ == 2.0 ? "2" : "";
  if (!is_weighted()) {
    if (!e.empty()) return "l" + e;
    s << "lp:" << p_;
    return s.str();
  }
  if (!e.empty())
    s << "wl" << e << ':';
  else
    s << "wlp:" << p_ << ':';
  for (int i = 0; i < dim_; ++i) s << (i ? "," : "") << w_[static_cast<std::size_t>(i)];
  return s.str();
}

double norm_distance(const MonotoneNorm& norm, std::span<const double> a, std::span<const double> b) {
  if (static_cast<int>(a.size()) != norm.dim() || static_cast<int>(b.size()) != norm.dim())
    throw UsageError("point dimension does not match norm");
  Coords ca{}, cb{};
  std::copy(a.begin(), a.end(), ca.begin());
  std::copy(b.begin(), b.end(), cb.begin());
  return norm.distance(ca, cb);
}

double norm_distance(const MonotoneNorm& norm, const ColoredPoint& a, const ColoredPoint& b) {
  return norm.distance(a, b);
}

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::NeSw: return "NE-SW";
    case Orientation::NwSe: return "NW-SE";
    case Orientation::Both: return "Both";
  }
  return "?";
}

Orientation classify_pair(const Coords& a, const Coords& b) {
  if (a[0] == b[0] || a[1] == b[1]) return Orientation::Both;
  return ((a[0] < b[0]) == (a[1] < b[1])) ? Orientation::NeSw : Orientation::NwSe;
}

Orientation classify_pair(const ColoredPoint& a, const ColoredPoint& b) {
  return classify_pair(a.coords, b.coords);
}

PointPair make_pair(const Dataset& s, const MonotoneNorm& norm, PointId i, PointId j) {
  if (i == j) throw UsageError("a pair needs two distinct points");
  if (i > j) std::swap(i, j);
  return {i, j, norm.distance(s[i], s[j])};
}

std::ostream& operator<<(std::ostream& out, const PointPair& p) {
  auto old = out.precision(17);
  out << '{' << p.a << ',' << p.b << " |" << p.length << "|}";
  out.precision(old);
  return out;
}

std::vector<PointPair> bichromatic_pairs(const Dataset& s, const MonotoneNorm& norm, std::size_t cap) {
  if (norm.dim() != s.dim()) throw UsageError("norm dimension does not match dataset");
  std::vector<PointPair> out;
  const auto n = static_cast<PointId>(s.size());
  for (PointId i = 0; i < n; ++i)
    for (PointId j = i + 1; j < n; ++j)
      if (s[i].color != s[j].color) {
        if (cap && out.size() >= cap) throw UsageError("bichromatic pair count exceeds cap");
        out.push_back({i, j, norm.distance(s[i], s[j])});
      }
  return out;
}

BoundingBox BoundingBox::of(int dim, std::span<const Coords> pts) {
  BoundingBox b;
  b.dim = dim;
  for (int i = 0; i < dim; ++i) {
    b.lo[static_cast<std::size_t>(i)] = kInf;
    b.hi[static_cast<std::size_t>(i)] = -kInf;
  }
  for (const auto& p : pts)
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  return b;
}

BoundingBox BoundingBox::of(const Dataset& s, const PointPair& p) {
  Coords pts[2] = {s[p.a].coords, s[p.b].coords};
  return of(s.dim(), pts);
}

BoundingBox BoundingBox::everything(int dim) {
  BoundingBox b;
  b.dim = dim;
  for (int i = 0; i < dim; ++i) {
    b.lo[static_cast<std::size_t>(i)] = -kInf;
    b.hi[static_cast<std::size_t>(i)] = kInf;
  }
  return b;
}

bool BoundingBox::contains(const Coords& p) const {
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

bool BoundingBox::contains(const BoundingBox& o) const {
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i)
    if (o.lo[i] < lo[i] || o.hi[i] > hi[i]) return false;
  return true;
}

bool BoundingBox::is_vertex(const Coords& p) const {
  for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i)
    if (p[i] != lo[i] && p[i] != hi[i]) return false;
  return true;
}

std::pair<Dataset, MonotoneNorm> normalize_axes(const Dataset& s, const MonotoneNorm& norm) {
  if (norm.dim() != s.dim()) throw UsageError("norm dimension does not match dataset");
  std::vector<ColoredPoint> pts(s.points().begin(), s.points().end());
  for (auto& p : pts)
    for (int i = 0; i < s.dim(); ++i) p.coords[static_cast<std::size_t>(i)] *= norm.axis_norm(i);
  return {Dataset(s.dim(), std::move(pts)), norm.unweighted()};
}

bool check_norm_equivalence(const MonotoneNorm& norm,
                            std::span<const std::pair<Coords, Coords>> samples) {
  if (samples.empty()) throw UsageError("need at least one sample");
  const MonotoneNorm euclid = MonotoneNorm::l2(norm.dim());
  const double d = norm.dim();
  for (const auto& [a, b] : samples) {
    double l2 = euclid.distance(a, b);
    double delta = norm.distance(a, b);
    if (!(l2 / std::sqrt(d) * norm.min_axis_norm() <= delta)) return false;
    if (!(delta <= d * l2 * norm.max_axis_norm())) return false;
  }
  return true;
}

}  // namespace crcp
