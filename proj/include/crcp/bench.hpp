#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crcp/crcp_index.hpp"
#include "crcp/geometry.hpp"
#include "crcp/query_space.hpp"

namespace crcp {

struct BenchRecord {
  RangeQuery query;
  std::optional<PointPair> answer;
  std::optional<PointPair> optimum;
  double ratio = 1.0;  // answer / optimum; 1 when both are absent or zero
  double micros = 0;
  std::size_t comparisons = 0;  // sub-queries plus pairs compared
};

struct BenchReport {
  std::string kind;
  std::string norm;
  std::size_t n = 0;
  double eps = 0;
  std::uint64_t seed = 0;
  std::vector<BenchRecord> records;
  double max_ratio = 1.0;
  double build_ms = 0;
  IndexStats stats;
  std::optional<std::string> violation;  // first failing (range, answer, optimum)

  bool passed() const { return !violation.has_value(); }
  // One `query ...` line per record, then a summary block.
  void write(std::ostream& out, bool with_timing = true) const;
  std::string summary() const;
};

struct BenchOptions {
  BuildOptions build;
  bool stop_on_violation = true;
  bool keep_records = true;
};

// Ranges on which an index kind is checked: every combinatorially distinct
// range for strips, quadrants, slabs, 2-boxes and dominance corners.
std::vector<RangeQuery> canonical_workload(IndexKind kind, const Dataset& s, const BuildOptions& opt = {});
// Random ranges with endpoints at point coordinates (sometimes unbounded);
// anchored kinds get anchors, mostly inside the range.
std::vector<RangeQuery> random_workload(IndexKind kind, const Dataset& s, std::size_t count, std::uint64_t seed,
                                        const BuildOptions& opt = {});

// Checks one answer against the oracle; returns a description of the
// violation if any.
std::optional<std::string> check_answer(const Dataset& s, const MonotoneNorm& norm, double eps, const RangeQuery& q,
                                        const std::optional<PointPair>& answer,
                                        const std::optional<PointPair>& optimum);

// Oracle optimum for a query: anchored brute force if the query has an anchor.
std::optional<PointPair> oracle_answer(const Dataset& s, const MonotoneNorm& norm, const RangeQuery& q);

BenchReport run_benchmark(const CrcpIndex& index, const std::vector<RangeQuery>& workload, std::uint64_t seed = 0,
                          const BenchOptions& opt = {});
BenchReport run_benchmark(IndexKind kind, const Dataset& s, const MonotoneNorm& norm, double eps,
                          const std::vector<RangeQuery>& workload, std::uint64_t seed = 0,
                          const BenchOptions& opt = {});

struct ScalingRow {
  std::size_t n = 0;
  std::size_t nodes = 0;
  double bound = 0;   // eps^-1 n log2^k n for the kind's exponent k
  double fitted = 0;  // nodes / bound
  double build_ms = 0;
};

// Exponent k of the space bound eps^-1 n log^k n of an index kind.
int space_log_power(IndexKind kind);
double space_bound(IndexKind kind, std::size_t n, double eps);

// Builds the index on uniform random data for each n and records its node count.
std::vector<ScalingRow> measure_node_scaling(IndexKind kind, std::span<const std::size_t> sizes, double eps,
                                             const MonotoneNorm& norm, std::uint64_t seed,
                                             const BuildOptions& opt = {}, std::uint32_t num_colors = 2);

// Largest ratio between fitted constants of consecutive rows (>= 1).
double max_consecutive_ratio(std::span<const ScalingRow> rows);

}  // namespace crcp
