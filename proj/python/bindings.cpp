#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "crcp/bench.hpp"
#include "crcp/coreset.hpp"
#include "crcp/crcp_index.hpp"
#include "crcp/oracle.hpp"

namespace py = pybind11;
using namespace crcp;

namespace {

Coords to_coords(const std::vector<double>& v) {
  if (v.size() < 2 || v.size() > 3) throw UsageError("points need 2 or 3 coordinates");
  Coords c{};
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
  return c;
}

py::tuple coords_tuple(const Coords& c, int dim) {
  if (dim == 2) return py::make_tuple(c[0], c[1]);
  return py::make_tuple(c[0], c[1], c[2]);
}

Dataset make_dataset(const std::vector<std::vector<double>>& pts, const std::vector<Color>& colors) {
  if (pts.size() != colors.size()) throw UsageError("points and colors differ in length");
  int dim = pts.empty() ? 2 : static_cast<int>(pts[0].size());
  Dataset s(dim);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<int>(pts[i].size()) != dim) throw UsageError("points of mixed dimension");
    s.add(ColoredPoint{to_coords(pts[i]), colors[i]});
  }
  return s;
}

// Bichromatic pairs a coreset for `space` is built from: all of them for
// band spaces, the strictly NW-SE ones for orthant spaces.
std::vector<PointPair> default_pairs(const Dataset& s, const MonotoneNorm& norm, const QuerySpace& space) {
  auto pairs = bichromatic_pairs(s, norm);
  if (space.kind() == QuerySpace::Kind::Orthant)
    std::erase_if(pairs, [&](const PointPair& p) { return frame_orientation(space, s, p) != Orientation::NwSe; });
  return pairs;
}

// OrthoRange is a variant, which the STL casters would claim; wrap it.
struct PyRange {
  OrthoRange r;
};

class PyIndex {
 public:
  PyIndex(const std::string& kind, const Dataset& s, const MonotoneNorm& norm, double eps, bool cascading,
          bool all_two_boxes, int sector_refinement) {
    BuildOptions opt;
    opt.cascading = cascading;
    opt.anchored.sector_refinement = sector_refinement;
    if (all_two_boxes) opt.two_box_spaces = all_two_box_spaces();
    opt_ = opt;
    index_ = build_index(parse_index_kind(kind), s, norm, eps, opt);
  }

  std::optional<PointPair> query(const PyRange& r, const std::optional<std::vector<double>>& anchor) const {
    RangeQuery q{r.r, std::nullopt};
    if (anchor) q.anchor = to_coords(*anchor);
    return index_->query(q);
  }

  py::dict stats() const {
    py::dict d;
    for (const auto& [k, v] : index_->stats().values) d[py::str(k)] = v;
    return d;
  }

  py::dict verify(std::size_t random_queries, std::uint64_t seed) const {
    std::vector<RangeQuery> work;
    try {
      work = canonical_workload(index_->kind(), index_->dataset(), opt_);
    } catch (const UsageError&) {
      work = random_workload(index_->kind(), index_->dataset(), random_queries, seed, opt_);
    }
    BenchOptions bo;
    bo.keep_records = false;
    auto rep = run_benchmark(*index_, work, seed, bo);
    py::dict d;
    d["passed"] = rep.passed();
    d["queries"] = work.size();
    d["max_ratio"] = rep.max_ratio;
    d["violation"] = rep.violation;
    return d;
  }

  const CrcpIndex& get() const { return *index_; }

 private:
  BuildOptions opt_;
  std::unique_ptr<CrcpIndex> index_;
};

}  // namespace

PYBIND11_MODULE(_crcp, m) {
  m.doc() = "Approximate colored range closest-pair indexes";
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  py::class_<PointPair>(m, "Pair")
      .def_readonly("a", &PointPair::a)
      .def_readonly("b", &PointPair::b)
      .def_readonly("length", &PointPair::length)
      .def("__eq__", [](const PointPair& x, const PointPair& y) { return x == y; })
      .def("__iter__", [](const PointPair& p) { return py::iter(py::make_tuple(p.a, p.b, p.length)); })
      .def("__repr__", [](const PointPair& p) {
        std::ostringstream out;
        out << "Pair(" << p.a << ", " << p.b << ", " << p.length << ")";
        return out.str();
      });

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<int>(), py::arg("dim") = 2)
      .def(py::init(&make_dataset), py::arg("points"), py::arg("colors"))
      .def_property_readonly("dim", &Dataset::dim)
      .def("__len__", &Dataset::size)
      .def("add", [](Dataset& s, const std::vector<double>& p, Color c) { s.add(ColoredPoint{to_coords(p), c}); },
           py::arg("point"), py::arg("color"))
      .def("point", [](const Dataset& s, PointId i) {
        if (i >= s.size()) throw py::index_error("point id out of range");
        return coords_tuple(s[i].coords, s.dim());
      })
      .def("color", [](const Dataset& s, PointId i) {
        if (i >= s.size()) throw py::index_error("point id out of range");
        return s[i].color;
      })
      .def_static("load", &Dataset::load, py::arg("path"), py::arg("dim") = 0)
      .def("save", &Dataset::save, py::arg("path"), py::arg("header") = "")
      .def("to_text", [](const Dataset& s) {
        std::ostringstream out;
        s.write(out);
        return out.str();
      })
      .def_static("from_text", [](const std::string& text, int dim) {
        std::istringstream in(text);
        return Dataset::read(in, dim);
      }, py::arg("text"), py::arg("dim") = 0);

  py::class_<MonotoneNorm>(m, "Norm")
      .def_static("parse", &MonotoneNorm::parse, py::arg("spec"), py::arg("dim") = 2)
      .def_static("lp", &MonotoneNorm::lp, py::arg("p"), py::arg("dim") = 2)
      .def_static("weighted", &MonotoneNorm::weighted, py::arg("p"), py::arg("weights"))
      .def_property_readonly("dim", &MonotoneNorm::dim)
      .def_property_readonly("p", &MonotoneNorm::p)
      .def("distance", [](const MonotoneNorm& n, const std::vector<double>& a, const std::vector<double>& b) {
        return n.distance(to_coords(a), to_coords(b));
      })
      .def("__str__", &MonotoneNorm::to_string)
      .def("__repr__", [](const MonotoneNorm& n) { return "Norm('" + n.to_string() + "')"; });

  py::class_<PyRange>(m, "Range")
      .def(py::init([](const std::string& text) { return PyRange{parse_range(text)}; }), py::arg("text"))
      .def("contains", [](const PyRange& r, const std::vector<double>& p) {
        return contains_point(r.r, ColoredPoint{to_coords(p), 0});
      })
      .def("__str__", [](const PyRange& r) { return to_string(r.r); })
      .def("__repr__", [](const PyRange& r) { return "Range('" + to_string(r.r) + "')"; });

  py::class_<QuerySpace>(m, "Space")
      .def_static("vertical_strips", &QuerySpace::vertical_strips)
      .def_static("horizontal_strips", &QuerySpace::horizontal_strips)
      .def_static("quadrants", &QuerySpace::quadrants, py::arg("sx") = 1, py::arg("sy") = 1)
      .def_static("slabs", &QuerySpace::slabs, py::arg("axis"))
      .def_static("two_boxes", &QuerySpace::two_boxes, py::arg("axis1"), py::arg("axis2"), py::arg("sign1") = 1,
                  py::arg("sign2") = 1)
      .def_property_readonly("dim", &QuerySpace::dim)
      .def_property_readonly("name", &QuerySpace::name)
      .def("__repr__", [](const QuerySpace& s) { return "Space('" + s.name() + "')"; });

  py::class_<PyIndex>(m, "Index")
      .def(py::init<const std::string&, const Dataset&, const MonotoneNorm&, double, bool, bool, int>(),
           py::arg("kind"), py::arg("data"), py::arg("norm"), py::arg("eps"), py::arg("cascading") = true,
           py::arg("all_two_boxes") = false, py::arg("sector_refinement") = 1)
      .def("query", &PyIndex::query, py::arg("range"), py::arg("anchor") = py::none())
      .def("stats", &PyIndex::stats)
      .def("verify", &PyIndex::verify, py::arg("random_queries") = 200, py::arg("seed") = 0,
           "Checks every canonical range (or random ones) against the brute-force oracle.")
      .def_property_readonly("node_count", [](const PyIndex& i) { return i.get().node_count(); })
      .def_property_readonly("kind", [](const PyIndex& i) { return std::string(to_string(i.get().kind())); })
      .def_property_readonly("eps", [](const PyIndex& i) { return i.get().eps(); });

  m.def(
      "brute_force",
      [](const Dataset& s, const MonotoneNorm& norm, const std::optional<PyRange>& r,
         const std::optional<std::vector<double>>& anchor) -> std::optional<PointPair> {
        if (anchor) {
          if (!r) throw UsageError("an anchored query needs a range");
          return brute_force_anchored(s, norm, r->r, to_coords(*anchor));
        }
        return r ? brute_force_crcp(s, norm, r->r) : brute_force_crcp(s, norm);
      },
      py::arg("data"), py::arg("norm"), py::arg("range") = py::none(), py::arg("anchor") = py::none());

  m.def(
      "gen_random",
      [](std::size_t n, std::uint32_t colors, const std::string& dist, int dim, std::uint64_t seed) {
        return gen_random(n, colors, parse_distribution(dist), dim, seed);
      },
      py::arg("n"), py::arg("colors") = 2, py::arg("distribution") = "uniform", py::arg("dim") = 2,
      py::arg("seed") = 0);
  m.def("gen_adversarial_strip", &gen_adversarial_strip, py::arg("n"));
  m.def("gen_adversarial_quadrant", &gen_adversarial_quadrant, py::arg("n"));
  m.def("count_candidate_pairs", &count_candidate_pairs, py::arg("data"), py::arg("space"), py::arg("norm"));
  m.def("bichromatic_pairs", [](const Dataset& s, const MonotoneNorm& n) { return bichromatic_pairs(s, n); },
        py::arg("data"), py::arg("norm"));

  m.def(
      "build_coreset",
      [](const Dataset& s, const QuerySpace& space, const MonotoneNorm& norm, double eps,
         const std::optional<std::vector<PointPair>>& pairs) {
        auto input = pairs ? *pairs : default_pairs(s, norm, space);
        return build_coreset(s, input, space, norm, eps).pairs;
      },
      py::arg("data"), py::arg("space"), py::arg("norm"), py::arg("eps"), py::arg("pairs") = py::none());
  m.def(
      "verify_coreset",
      [](const Dataset& s, const std::vector<PointPair>& all, const std::vector<PointPair>& kept,
         const QuerySpace& space, double eps) -> std::optional<PyRange> {
        if (auto bad = verify_coreset(s, all, kept, space, eps)) return PyRange{*bad};
        return std::nullopt;
      },
      py::arg("data"), py::arg("all_pairs"), py::arg("kept"), py::arg("space"), py::arg("eps"));

  m.attr("KINDS") = py::make_tuple("strip", "quadrant", "rect1", "rect2", "slab", "2box", "dom3", "anchored2d",
                                   "anchored3d");
}
