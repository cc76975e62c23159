// Command-line front end: gen, build, query, verify, bench.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "crcp/bench.hpp"
#include "crcp/crcp_index.hpp"
#include "crcp/oracle.hpp"

using namespace crcp;

namespace {

struct RunConfig {
  std::string data;
  std::string queries;
  std::string norm = "l2";
  double eps = 0.5;
  std::string kind = "strip";
  std::uint64_t seed = 1;
  std::string out;
  // gen
  std::string generator = "uniform";
  std::size_t n = 100;
  std::uint32_t colors = 2;
  int dim = 2;
  // verify / bench
  std::size_t random_queries = 200;
  std::optional<std::size_t> drop_pair;
  bool all_two_boxes = false;
  int refinement = 1;
  std::size_t leaf_size = 0;
  bool no_cascading = false;
  bool scaling = false;
  std::vector<std::size_t> sizes{128, 256, 512, 1024, 2048};
};

struct Failure {
  int code;
  std::string message;
};

// Output goes to --out or standard output.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Failure{2, "cannot open " + path + " for writing"};
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Dataset load_data(const RunConfig& c, int dim) {
  if (c.data.empty()) throw Failure{2, "--data is required"};
  try {
    return Dataset::load(c.data, dim);
  } catch (const UsageError& e) {
    throw Failure{2, e.what()};
  }
}

std::vector<RangeQuery> load_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{2, "cannot read " + path};
  return read_queries(in);
}

BuildOptions build_options(const RunConfig& c) {
  BuildOptions opt;
  opt.cascading = !c.no_cascading;
  opt.anchored.sector_refinement = c.refinement;
  opt.anchored.store.leaf_size = c.leaf_size;
  opt.anchored.store.cascading = !c.no_cascading;
  opt.drop_coreset_pair = c.drop_pair;
  if (c.all_two_boxes || parse_index_kind(c.kind) == IndexKind::TwoBox) opt.two_box_spaces = all_two_box_spaces();
  return opt;
}

void cmd_gen(const RunConfig& c) {
  Dataset s(c.dim);
  if (c.generator == "adv-strip")
    s = gen_adversarial_strip(c.n);
  else if (c.generator == "adv-quadrant")
    s = gen_adversarial_quadrant(c.n);
  else if (c.generator == "uniform" || c.generator == "clustered" || c.generator == "lattice")
    s = gen_random(c.n, c.colors, parse_distribution(c.generator), c.dim, c.seed);
  else
    throw Failure{2, "unknown generator '" + c.generator + "' (uniform, clustered, lattice, adv-strip, adv-quadrant)"};
  Sink out(c.out);
  s.write(out.get(), "generator=" + c.generator + " seed=" + std::to_string(c.seed));
}

void cmd_build(const RunConfig& c) {
  IndexKind kind = parse_index_kind(c.kind);
  Dataset s = load_data(c, index_dim(kind));
  auto norm = MonotoneNorm::parse(c.norm, s.dim());
  auto index = build_index(kind, s, norm, c.eps, build_options(c));
  Sink out(c.out);
  out.get() << "kind " << to_string(kind) << "\nn " << s.size() << '\n' << index->stats().to_text();
}

void cmd_query(const RunConfig& c) {
  IndexKind kind = parse_index_kind(c.kind);
  Dataset s = load_data(c, index_dim(kind));
  auto norm = MonotoneNorm::parse(c.norm, s.dim());
  if (c.queries.empty()) throw Failure{2, "--queries is required"};
  auto qs = load_queries(c.queries);
  auto index = build_index(kind, s, norm, c.eps, build_options(c));
  Sink out(c.out);
  auto& o = out.get();
  o.precision(17);
  for (const auto& q : qs) {
    auto ans = index->query(q);
    o << to_string(q) << " -> ";
    if (ans)
      o << ans->a << ' ' << ans->b << ' ' << ans->length << '\n';
    else
      o << "none\n";
  }
}

int cmd_verify(const RunConfig& c) {
  IndexKind kind = parse_index_kind(c.kind);
  Dataset s = load_data(c, index_dim(kind));
  auto norm = MonotoneNorm::parse(c.norm, s.dim());
  BenchOptions bo;
  bo.build = build_options(c);
  bo.keep_records = false;
  std::vector<RangeQuery> work;
  if (!c.queries.empty()) {
    work = load_queries(c.queries);
  } else {
    try {
      work = canonical_workload(kind, s, bo.build);
    } catch (const UsageError&) {
      work = random_workload(kind, s, c.random_queries, c.seed, bo.build);
    }
  }
  auto rep = run_benchmark(kind, s, norm, c.eps, work, c.seed, bo);
  Sink out(c.out);
  out.get() << "checked " << work.size() << " ranges\n" << rep.summary();
  if (!rep.passed()) {
    std::cerr << "violation: " << *rep.violation << '\n';
    return 1;
  }
  return 0;
}

int cmd_bench(const RunConfig& c) {
  IndexKind kind = parse_index_kind(c.kind);
  Sink out(c.out);
  if (c.scaling) {
    int dim = index_dim(kind);
    auto norm = MonotoneNorm::parse(c.norm, dim);
    auto rows = measure_node_scaling(kind, c.sizes, c.eps, norm, c.seed, build_options(c), c.colors);
    auto& o = out.get();
    o << "# node scaling kind=" << to_string(kind) << " eps=" << c.eps << " bound=eps^-1 n log^"
      << space_log_power(kind) << " n\n";
    o << "n nodes bound fitted build_ms\n";
    for (const auto& r : rows) o << r.n << ' ' << r.nodes << ' ' << r.bound << ' ' << r.fitted << ' ' << r.build_ms << '\n';
    o << "max_consecutive_ratio " << max_consecutive_ratio(rows) << '\n';
    std::cout << "max_consecutive_ratio " << max_consecutive_ratio(rows) << '\n';
    return 0;
  }
  Dataset s = load_data(c, index_dim(kind));
  auto norm = MonotoneNorm::parse(c.norm, s.dim());
  if (c.queries.empty()) throw Failure{2, "--queries is required"};
  auto work = load_queries(c.queries);
  BenchOptions bo;
  bo.build = build_options(c);
  bo.stop_on_violation = false;
  auto rep = run_benchmark(kind, s, norm, c.eps, work, c.seed, bo);
  rep.write(out.get());
  std::cout << rep.summary();
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate colored range closest-pair indexes"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--data", c.data, "dataset file (x y [z] color per line)");
    sub->add_option("--norm", c.norm, "norm: l1, l2, linf, lp:P, wl1:w1,w2, wlp:P:w1,w2 ...");
    sub->add_option("--eps", c.eps, "approximation parameter")->check(CLI::PositiveNumber);
    sub->add_option("--kind", c.kind, "strip, quadrant, rect1, rect2, slab, 2box, dom3, anchored2d, anchored3d");
    sub->add_option("--seed", c.seed, "seed for every random choice");
    sub->add_option("--out", c.out, "output path (default: standard output)");
    sub->add_flag("--all-2box", c.all_two_boxes, "build all 12 2-box configurations");
    sub->add_option("--sector-refinement", c.refinement, "anchored sector count multiplier");
    sub->add_option("--leaf-size", c.leaf_size, "anchored store bucket size (0: default)");
    sub->add_flag("--no-cascading", c.no_cascading, "binary search per node instead of cascading");
  };

  auto* gen = app.add_subcommand("gen", "generate a dataset");
  gen->add_option("--generator", c.generator, "uniform, clustered, lattice, adv-strip, adv-quadrant");
  gen->add_option("--n", c.n, "number of points");
  gen->add_option("--colors", c.colors, "number of colors")->check(CLI::PositiveNumber);
  gen->add_option("--dim", c.dim, "dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  gen->add_option("--seed", c.seed, "seed");
  gen->add_option("--out", c.out, "output path (default: standard output)");

  auto* build = app.add_subcommand("build", "build an index and print its statistics");
  common(build);
  auto* query = app.add_subcommand("query", "answer a query file");
  common(query);
  query->add_option("--queries", c.queries, "query file, one range per line");
  auto* verify = app.add_subcommand("verify", "check an index against the brute-force oracle");
  common(verify);
  verify->add_option("--queries", c.queries, "query file (default: all canonical ranges or random ones)");
  verify->add_option("--random", c.random_queries, "random ranges for kinds without a canonical set");
  verify->add_option("--drop-coreset-pair", c.drop_pair, "remove one coreset pair (corruption test)")
      ->group("");
  auto* bench = app.add_subcommand("bench", "time queries or tabulate node counts");
  common(bench);
  bench->add_option("--queries", c.queries, "query file");
  bench->add_option("--colors", c.colors, "colors for generated data (--scaling)");
  bench->add_flag("--scaling", c.scaling, "node counts on uniform data across sizes");
  bench->add_option("--sizes", c.sizes, "sizes for --scaling")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) cmd_gen(c);
    if (*build) cmd_build(c);
    if (*query) cmd_query(c);
    if (*verify) return cmd_verify(c);
    if (*bench) return cmd_bench(c);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
