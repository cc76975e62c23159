#include "crcp/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "crcp/oracle.hpp"

namespace crcp {

namespace {

void check_inputs(const Dataset& s, std::span<const PointPair> pairs, const QuerySpace& space,
                  const MonotoneNorm& norm, double eps, const CoresetOptions& opt) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw UsageError("eps must be a positive finite number");
  if (!space.keyed()) throw UsageError("coresets need a strip-like or quadrant-like space, got " + space.name());
  if (space.dim() != s.dim() || norm.dim() != s.dim()) throw UsageError("dimension mismatch");
  if (pairs.size() > opt.max_pairs)
    throw UsageError("pair set of size " + std::to_string(pairs.size()) + " exceeds the cap " +
                     std::to_string(opt.max_pairs));
  if (pairs.size() > std::numeric_limits<std::uint32_t>::max()) throw UsageError("pair set too large");
  for (const auto& p : pairs) {
    if (p.a >= p.b || p.b >= s.size()) throw UsageError("malformed pair");
    if (norm.distance(s[p.a], s[p.b]) != p.length) throw UsageError("pair length does not match the norm");
  }
  // Sufficient condition first (bands always, orthants on strictly NW-SE
  // frame pairs);
  // only if it fails fall back to the definition.
  if (space.kind() == QuerySpace::Kind::Orthant) {
    bool ok = std::all_of(pairs.begin(), pairs.end(),
                          [&](const PointPair& p) { return frame_orientation(space, s, p) == Orientation::NwSe; });
    if (!ok) {
      if (auto bad = check_well_behaved(space, s, pairs))
        throw UsageError(space.name() + " is not well-behaved on the pair set: pairs " +
                         std::to_string(bad->first.a) + "," + std::to_string(bad->first.b) + " and " +
                         (bad->second ? std::to_string(bad->second->a) + "," + std::to_string(bad->second->b)
                                      : std::string("-")));
    }
  }
}

std::size_t ground_size(std::span<const PointPair> pairs) {
  std::vector<PointId> ids;
  ids.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    ids.push_back(p.a);
    ids.push_back(p.b);
  }
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

// Minimum over a suffix of positions, point updates.
class SuffixMin {
 public:
  explicit SuffixMin(std::size_t n) : t_(n + 1, kInf) {}
  void update(std::size_t pos, double v) {
    for (std::size_t i = t_.size() - 1 - pos; i < t_.size(); i += i & (~i + 1)) t_[i] = std::min(t_[i], v);
  }
  double query(std::size_t pos) const {  // min over [pos, n)
    double r = kInf;
    for (std::size_t i = t_.size() - 1 - pos; i > 0; i -= i & (~i + 1)) r = std::min(r, t_[i]);
    return r;
  }

 private:
  std::vector<double> t_;
};

}  // namespace

CoresetResult build_coreset(const Dataset& s, std::span<const PointPair> pairs, const QuerySpace& space,
                            const MonotoneNorm& norm, double eps, const CoresetOptions& opt) {
  check_inputs(s, pairs, space, norm, eps, opt);
  CoresetResult res;
  res.ground_size = ground_size(pairs);
  const std::size_t m = pairs.size();
  std::vector<Key2> key(m);
  for (std::size_t i = 0; i < m; ++i) key[i] = pair_key(space, s, pairs[i]);

  // Descending keys put every pair after all pairs with strictly smaller
  // ranges; equal ranges go lightest first, as the greedy would pick them.
  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    if (key[x].k0 != key[y].k0) return key[x].k0 > key[y].k0;
    if (key[x].k1 != key[y].k1) return key[x].k1 > key[y].k1;
    if (pairs[x].length != pairs[y].length) return pairs[x].length < pairs[y].length;
    return x < y;
  });

  std::vector<double> k1(m);
  for (std::size_t i = 0; i < m; ++i) k1[i] = key[i].k1;
  std::sort(k1.begin(), k1.end());
  k1.erase(std::unique(k1.begin(), k1.end()), k1.end());
  SuffixMin kept_min(k1.size());

  if (opt.record_trace) res.trace.reserve(m);
  for (std::uint32_t idx : order) {
    const PointPair& phi = pairs[idx];
    auto rank = static_cast<std::size_t>(std::lower_bound(k1.begin(), k1.end(), key[idx].k1) - k1.begin());
    double best = kept_min.query(rank);
    bool keep = best == kInf || (1.0 + eps) * phi.length < best;
    if (keep) {
      kept_min.update(rank, phi.length);
      res.pairs.push_back(phi);
      res.indices.push_back(idx);
    }
    if (opt.record_trace) res.trace.push_back({range_from_key(space, key[idx]), phi, idx, keep});
  }
  return res;
}

std::size_t select_minimal(const Dataset& s, std::span<const PointPair> remaining, const QuerySpace& space) {
  if (remaining.empty()) throw UsageError("select_minimal needs a nonempty pair list");
  if (!space.keyed()) throw UsageError("select_minimal needs a strip-like or quadrant-like space");
  auto measure = [&](const PointPair& p) {
    Key2 k = pair_key(space, s, p);
    // both are nonincreasing under ⊆
    return space.kind() == QuerySpace::Kind::Band ? -k.k1 - k.k0 : -(k.k0 + k.k1);
  };
  double best = kInf;
  for (const auto& p : remaining) best = std::min(best, measure(p));
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < remaining.size(); ++i)
    if (measure(remaining[i]) == best) tied.push_back(i);
  // Rounding can tie nested ranges; anything strictly inside a tied range is tied too.
  for (std::size_t i : tied) {
    Key2 ki = pair_key(space, s, remaining[i]);
    bool minimal = std::none_of(tied.begin(), tied.end(), [&](std::size_t j) {
      Key2 kj = pair_key(space, s, remaining[j]);
      return key_dominates(kj, ki) && !(kj == ki);
    });
    if (minimal) return i;
  }
  return tied.front();
}

CoresetResult build_coreset_greedy(const Dataset& s, std::span<const PointPair> pairs, const QuerySpace& space,
                                   const MonotoneNorm& norm, double eps, const CoresetOptions& opt) {
  check_inputs(s, pairs, space, norm, eps, opt);
  CoresetResult res;
  res.ground_size = ground_size(pairs);
  std::vector<std::uint32_t> remaining(pairs.size());
  std::iota(remaining.begin(), remaining.end(), 0u);
  std::vector<PointPair> rem_pairs(pairs.begin(), pairs.end());
  std::vector<Key2> kept_keys;
  while (!remaining.empty()) {
    // Step 1: a minimal range X*
    std::size_t j = select_minimal(s, rem_pairs, space);
    Key2 xstar = pair_key(space, s, rem_pairs[j]);
    // Step 2: closest remaining pair inside X*, lowest position among ties
    std::size_t pick = remaining.size();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (!key_dominates(pair_key(space, s, rem_pairs[i]), xstar)) continue;
      if (pick == remaining.size() || rem_pairs[i].length < rem_pairs[pick].length ||
          (rem_pairs[i].length == rem_pairs[pick].length && remaining[i] < remaining[pick]))
        pick = i;
    }
    const PointPair phi = rem_pairs[pick];
    double best = kInf;
    for (std::size_t i = 0; i < res.pairs.size(); ++i)
      if (key_dominates(kept_keys[i], xstar)) best = std::min(best, res.pairs[i].length);
    bool keep = best == kInf || (1.0 + eps) * phi.length < best;
    if (keep) {
      res.pairs.push_back(phi);
      res.indices.push_back(remaining[pick]);
      kept_keys.push_back(pair_key(space, s, phi));
    }
    if (opt.record_trace) res.trace.push_back({range_from_key(space, xstar), phi, remaining[pick], keep});
    // Step 3
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    rem_pairs.erase(rem_pairs.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return res;
}

std::vector<double> axis_values(const Dataset& s, int axis, int sign) {
  std::vector<double> v;
  v.reserve(s.size());
  for (const auto& p : s.points()) v.push_back(sign * p[axis]);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

namespace {

// Key-space grid: first coordinate values and second coordinate values such
// that every distinct contained-pair set is realised by some (k0, k1).
std::pair<std::vector<double>, std::vector<double>> key_grid(const Dataset& s, const QuerySpace& space) {
  if (space.kind() == QuerySpace::Kind::Band) {
    auto lo = axis_values(s, space.axis());
    auto neg_hi = axis_values(s, space.axis(), -1);
    return {lo, neg_hi};
  }
  return {axis_values(s, space.axis1(), space.sign1()), axis_values(s, space.axis2(), space.sign2())};
}

}  // namespace

std::vector<OrthoRange> canonical_ranges(const Dataset& s, const QuerySpace& space) {
  if (!space.keyed()) throw UsageError("canonical ranges are defined for strip-like and quadrant-like spaces");
  auto [g0, g1] = key_grid(s, space);
  std::vector<OrthoRange> out;
  for (double a : g0)
    for (double b : g1) {
      if (space.kind() == QuerySpace::Kind::Band && a > -b) continue;  // empty interval
      out.push_back(range_from_key(space, {a, b}));
    }
  return out;
}

std::optional<OrthoRange> verify_coreset(const Dataset& s, std::span<const PointPair> all,
                                         std::span<const PointPair> kept, const QuerySpace& space, double eps) {
  if (!space.keyed()) throw UsageError("verify_coreset needs a strip-like or quadrant-like space");
  auto [g0, g1] = key_grid(s, space);
  auto rank1 = [&](double v) {
    // first grid value >= v; pairs with k1 >= grid[r] are exactly those with rank >= r
    return static_cast<std::size_t>(std::lower_bound(g1.begin(), g1.end(), v) - g1.begin());
  };
  std::vector<Key2> kall(all.size()), kkept(kept.size());
  for (std::size_t i = 0; i < all.size(); ++i) kall[i] = pair_key(space, s, all[i]);
  for (std::size_t i = 0; i < kept.size(); ++i) kkept[i] = pair_key(space, s, kept[i]);
  std::vector<double> ball(g1.size() + 1), bkept(g1.size() + 1);
  for (double a : g0) {
    std::fill(ball.begin(), ball.end(), kInf);
    std::fill(bkept.begin(), bkept.end(), kInf);
    for (std::size_t i = 0; i < all.size(); ++i)
      if (kall[i].k0 >= a) {
        auto r = rank1(kall[i].k1);
        ball[r] = std::min(ball[r], all[i].length);
      }
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (kkept[i].k0 >= a) {
        auto r = rank1(kkept[i].k1);
        bkept[r] = std::min(bkept[r], kept[i].length);
      }
    // sweep k1 thresholds from the largest down; range (a, g1[j]) contains ranks >= j
    double mall = kInf, mkept = kInf;
    for (std::size_t j = g1.size(); j-- > 0;) {
      mall = std::min(mall, ball[j]);
      mkept = std::min(mkept, bkept[j]);
      if (space.kind() == QuerySpace::Kind::Band && a > -g1[j]) continue;
      if (mall == kInf) continue;
      if (mkept == kInf || !within_factor(mkept, mall, eps)) return range_from_key(space, {a, g1[j]});
    }
  }
  return std::nullopt;
}

std::optional<std::pair<PointPair, PointPair>> check_kept_gap(const Dataset& s, std::span<const PointPair> kept,
                                                              double eps) {
  std::vector<std::vector<std::uint32_t>> incident(s.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    incident[kept[i].a].push_back(i);
    incident[kept[i].b].push_back(i);
  }
  for (const auto& inc : incident)
    for (std::size_t x = 0; x < inc.size(); ++x)
      for (std::size_t y = x + 1; y < inc.size(); ++y) {
        const auto& phi = kept[inc[x]];
        const auto& psi = kept[inc[y]];
        if (!strongly_adjacent(s, phi, psi)) continue;
        if (phi.length > (1.0 + eps) * psi.length || psi.length > (1.0 + eps) * phi.length) continue;
        return std::pair{phi, psi};
      }
  return std::nullopt;
}

std::vector<SizeGrowthRow> measure_size_growth(const QuerySpace& space, const MonotoneNorm& norm,
                                               std::span<const double> eps_list, std::span<const std::size_t> n_list,
                                               const SizeGrowthOptions& opt) {
  const int power = opt.log_power ? opt.log_power : space.dim();
  CoresetOptions copt;
  copt.record_trace = false;
  std::vector<SizeGrowthRow> rows;
  for (std::size_t n : n_list) {
    std::vector<double> total(eps_list.size(), 0.0);
    for (std::size_t t = 0; t < opt.trials; ++t) {
      Dataset s = gen_random(n, opt.num_colors, Distribution::UniformBox, space.dim(),
                             opt.seed + 1000003ull * n + t);
      auto pairs = bichromatic_pairs(s, norm);
      if (space.kind() == QuerySpace::Kind::Orthant)
        std::erase_if(pairs, [&](const PointPair& p) { return frame_orientation(space, s, p) != Orientation::NwSe; });
      for (std::size_t e = 0; e < eps_list.size(); ++e)
        total[e] += static_cast<double>(build_coreset(s, pairs, space, norm, eps_list[e], copt).pairs.size());
    }
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      SizeGrowthRow r;
      r.n = n;
      r.eps = eps_list[e];
      r.mean_size = opt.trials ? total[e] / static_cast<double>(opt.trials) : 0.0;
      double lg = n > 1 ? std::log2(static_cast<double>(n)) : 1.0;
      r.bound = static_cast<double>(n) * std::pow(lg, power) / eps_list[e];
      r.fitted = r.bound > 0 ? r.mean_size / r.bound : 0.0;
      rows.push_back(r);
    }
  }
  return rows;
}

void write_pairs(std::ostream& out, std::span<const PointPair> pairs) {
  auto old = out.precision(17);
  for (const auto& p : pairs) out << p.a << ' ' << p.b << ' ' << p.length << '\n';
  out.precision(old);
}

std::vector<PointPair> read_pairs(std::istream& in) {
  std::vector<PointPair> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream f(line);
    PointPair p;
    if (!(f >> p.a)) continue;
    std::string extra;
    if (!(f >> p.b >> p.length) || (f >> extra)) throw UsageError("bad pair line '" + line + "'");
    out.push_back(p);
  }
  return out;
}

}  // namespace crcp
