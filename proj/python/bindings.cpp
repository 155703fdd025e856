#include "illumdepth/bench.hpp"
#include "illumdepth/distributions.hpp"
#include "illumdepth/elliptical.hpp"
#include "illumdepth/ellipsoid.hpp"
#include "illumdepth/extremes.hpp"
#include "illumdepth/halfspace_depth.hpp"
#include "illumdepth/illumination_depth.hpp"
#include "illumdepth/polytope.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace illumdepth;

namespace {

Evaluation evaluation_for(const std::string& mode, int d) {
  Evaluation e = Evaluation::automatic(d);
  if (mode == "exact") {
    e.depth.mode = DepthMode::Exact2d;
    e.region.mode = RegionMode::Exact2d;
  } else if (mode == "approximate") {
    e.depth.mode = DepthMode::Approximate;
    e.region.mode = RegionMode::Directions;
  } else if (mode != "auto") {
    throw ConfigError("mode must be auto, exact or approximate");
  }
  return e;
}

RowMatrix trace_directions(int d, int count) { return d <= 3 ? sphere_points(d, count) : direction_set(d, count, 0); }

IlluminationDepthModel make_model(const RowMatrix& points, std::optional<double> alpha, const std::string& mode) {
  PointCloud P(points);
  const Evaluation eval = evaluation_for(mode, P.d());
  if (alpha) return IlluminationDepthModel(std::move(P), *alpha, eval);
  return IlluminationDepthModel::robust(std::move(P), eval);
}

py::dict depth_dict(const IlluminationDepth& v) {
  py::dict out;
  out["hd"] = v.hd;
  out["norm_illum"] = v.norm_illum;
  out["alpha"] = v.alpha_used;
  out["depth_count"] = v.depth_count;
  return out;
}

std::shared_ptr<const SymmetricCdf> cdf_named(const std::string& name) {
  if (name == "normal") return std::make_shared<NormalCdf>();
  if (name == "he-einmahl") return std::make_shared<HeEinmahlMarginalCdf>();
  throw ConfigError("cdf must be normal or he-einmahl");
}

ExperimentConfig make_config(const std::string& experiment, const py::kwargs& kw) {
  ExperimentConfig c;
  c.experiment = parse_experiment(experiment);
  for (auto item : kw) {
    const std::string key = py::str(item.first);
    const py::handle v = item.second;
    if (key == "n") c.n = v.cast<int>();
    else if (key == "d") c.d = v.cast<int>();
    else if (key == "reps") c.reps = v.cast<int>();
    else if (key == "k") c.k = v.cast<int>();
    else if (key == "delta") c.delta = v.cast<double>();
    else if (key == "contamination") c.contamination = v.cast<std::vector<double>>();
    else if (key == "offset") c.offset = v.cast<Vector>();
    else if (key == "tiebreak_deltas") c.tiebreak_deltas = v.cast<std::vector<double>>();
    else if (key == "test_per_class") c.test_per_class = v.cast<int>();
    else if (key == "outsider_pool") c.outsider_pool = v.cast<int>();
    else if (key == "directions") c.directions = v.cast<int>();
    else if (key == "seed") c.seed = v.cast<std::uint64_t>();
    else if (key == "threads") c.threads = v.cast<int>();
    else if (key == "out_dir") c.out_dir = v.cast<std::string>();
    else throw ConfigError("unknown option '" + key + "'");
  }
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Halfspace-illumination depth";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto geometry = py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<DegenerateInput>(m, "DegenerateInput", geometry.ptr());
  py::register_exception<EmptyRegion>(m, "EmptyRegion", geometry.ptr());
  py::register_exception<DegenerateRegion>(m, "DegenerateRegion", geometry.ptr());
  py::register_exception<SingularScatter>(m, "SingularScatter", geometry.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<ModeUnsupported>(m, "ModeUnsupported", base.ptr());
  py::register_exception<QuantileUndefined>(m, "QuantileUndefined", base.ptr());
  py::register_exception<InsufficientTail>(m, "InsufficientTail", base.ptr());
  py::register_exception<InflationOverflow>(m, "InflationOverflow", base.ptr());

  // Ellipsoids.
  m.def("g", &g, py::arg("d"), py::arg("t"), "Normalized illumination of the unit ball from distance t");
  m.def("g_inverse", &g_inverse, py::arg("d"), py::arg("y"));
  m.def("g_prime", &g_prime, py::arg("d"), py::arg("t"));
  m.def(
      "illumination_ellipsoid",
      [](const Vector& center, const Matrix& scatter, const Vector& x) {
        return illumination_ellipsoid(Ellipsoid(center, scatter), x);
      },
      py::arg("center"), py::arg("scatter"), py::arg("x"));

  // Polytopes.
  m.def(
      "hull_volume", [](const RowMatrix& points) { return convex_hull(points).volume(); }, py::arg("points"));
  m.def(
      "hull_volume_with_point",
      [](const RowMatrix& points, const Vector& x) { return hull_volume_with_point(convex_hull(points), x); },
      py::arg("points"), py::arg("x"));

  // Halfspace depth.
  m.def(
      "halfspace_depth",
      [](const RowMatrix& points, const RowMatrix& queries, const std::string& mode) {
        const PointCloud P(points);
        const DepthOptions opts = evaluation_for(mode, P.d()).depth;
        std::vector<double> out(queries.rows());
        for (int i = 0; i < queries.rows(); ++i) out[i] = hd(queries.row(i).transpose(), P, opts);
        return out;
      },
      py::arg("points"), py::arg("queries"), py::arg("mode") = "auto");
  m.def(
      "sample_depth_counts",
      [](const RowMatrix& points, const std::string& mode) {
        const PointCloud P(points);
        return sample_depth_counts(P, evaluation_for(mode, P.d()).depth);
      },
      py::arg("points"), py::arg("mode") = "auto");
  m.def(
      "tukey_region",
      [](const RowMatrix& points, double alpha, const std::string& mode) {
        const PointCloud P(points);
        const DepthRegion R = tukey_region(P, alpha, evaluation_for(mode, P.d()).region);
        py::dict out;
        out["vertices"] = R.region.vertices();
        out["volume"] = R.region.volume();
        out["level"] = R.level;
        out["n_inside"] = R.n_inside;
        return out;
      },
      py::arg("points"), py::arg("alpha"), py::arg("mode") = "auto");

  // Illumination depth.
  py::class_<IlluminationDepthModel>(m, "IlluminationDepthModel")
      .def(py::init(&make_model), py::arg("points"), py::arg("alpha") = py::none(), py::arg("mode") = "auto",
           "alpha None selects the robust cutoff Pi / (1 + Pi)")
      .def_property_readonly("alpha", &IlluminationDepthModel::alpha)
      .def_property_readonly("level", &IlluminationDepthModel::level)
      .def_property_readonly("pi_n", &IlluminationDepthModel::pi_n)
      .def_property_readonly("region_vertices",
                             [](const IlluminationDepthModel& s) { return s.region().region.vertices(); })
      .def_property_readonly("region_volume",
                             [](const IlluminationDepthModel& s) { return s.region().region.volume(); })
      .def(
          "evaluate", [](const IlluminationDepthModel& s, const Vector& x) { return depth_dict(s.evaluate(x)); },
          py::arg("x"))
      .def(
          "evaluate_many",
          [](const IlluminationDepthModel& s, const RowMatrix& Q) {
            const auto values = s.evaluate_many(Q);
            Vector hd(Q.rows()), ni(Q.rows());
            for (int i = 0; i < Q.rows(); ++i) {
              hd[i] = values[i].hd;
              ni[i] = values[i].norm_illum;
            }
            return py::make_tuple(hd, ni);
          },
          py::arg("queries"), "(hd, norm_illum) arrays")
      .def("level_set_member", &IlluminationDepthModel::level_set_member, py::arg("x"), py::arg("delta"))
      .def(
          "level_set_boundary",
          [](const IlluminationDepthModel& s, double delta, int directions) {
            return s.level_set_boundary(delta, trace_directions(s.sample().d(), directions));
          },
          py::arg("delta"), py::arg("directions") = 720);
  m.def("robust_alpha", &robust_alpha, py::arg("pi_n"));
  m.attr("ALPHA_HALFSPACE_SYMMETRIC") = kAlphaHalfspaceSymmetric;
  m.attr("ALPHA_LOG_CONCAVE") = kAlphaLogConcave;

  m.def(
      "rank_centre_outward",
      [](const RowMatrix& queries, const RowMatrix& points, std::optional<double> alpha) {
        const IlluminationDepthModel model = make_model(points, alpha, "auto");
        return rank_centre_outward(queries, model).rank;
      },
      py::arg("queries"), py::arg("points"), py::arg("alpha") = py::none(), "0-based centre-outward ranks");

  // Elliptical estimators.
  py::class_<ECModel>(m, "ECModel")
      .def(py::init([](const RowMatrix& points, double alpha, std::optional<std::string> cdf) {
             const PointCloud P(points);
             if (!cdf) return ECModel::fit(P, alpha);
             return ECModel::fit(P, alpha, Evaluation::automatic(P.d()), cdf_named(*cdf));
           }),
           py::arg("points"), py::arg("alpha"), py::arg("cdf") = py::none(),
           "cdf None estimates F from the sample; else 'normal' or 'he-einmahl'")
      .def_property_readonly("mu", &ECModel::mu)
      .def_property_readonly("sigma", &ECModel::sigma)
      .def("m_alpha", &ECModel::m_alpha, py::arg("x"))
      .def("rhd", &ECModel::rhd, py::arg("x"));

  // Extremes and classification.
  m.def(
      "hill_tail_index",
      [](const RowMatrix& points, const Vector& center, int k) { return hill_tail_index(PointCloud(points), center, k); },
      py::arg("points"), py::arg("center"), py::arg("k"));
  m.def(
      "extreme_region",
      [](const RowMatrix& points, int k, double delta, const std::string& kind, int directions) {
        ExtremeOptions opts;
        opts.directions = directions;
        ExtremeKind which;
        if (kind == "inflate") which = ExtremeKind::Inflate;
        else if (kind == "illuminate") which = ExtremeKind::Illuminate;
        else throw ConfigError("kind must be inflate or illuminate");
        const ExtremeRegionEstimate e = extreme_region(PointCloud(points), k, delta, which, opts);
        py::dict out;
        out["boundary"] = e.boundary;
        out["center"] = e.center;
        out["tail_index"] = e.tail_index;
        out["c"] = e.c;
        out["volume"] = e.region.volume();
        return out;
      },
      py::arg("points"), py::arg("k"), py::arg("delta"), py::arg("kind") = "illuminate", py::arg("directions") = 720);

  py::class_<QdaModel>(m, "IlluminationQDA")
      .def(py::init([](const RowMatrix& p1, const RowMatrix& p2, std::optional<double> delta, const std::string& cdf,
                       bool simplified, double prior1) {
             QdaOptions opts;
             opts.simplified_inside = simplified;
             opts.prior1 = prior1;
             const double dl = delta.value_or(cdf == "he-einmahl" ? he_einmahl_half_content_delta()
                                                                   : normal_half_content_delta());
             return QdaModel::fit(PointCloud(p1), PointCloud(p2), dl, cdf_named(cdf), opts);
           }),
           py::arg("train1"), py::arg("train2"), py::arg("delta") = py::none(), py::arg("cdf") = "normal",
           py::arg("simplified") = false, py::arg("prior1") = 0.5)
      .def("classify", &QdaModel::classify_many, py::arg("queries"), "labels 1 or 2")
      .def(
          "distance", [](const QdaModel& q, int j, const Vector& x) { return q.distance(j, x); }, py::arg("j"),
          py::arg("x"))
      .def_property_readonly("delta", &QdaModel::delta);

  py::class_<ClassicalQda>(m, "ClassicalQDA")
      .def(py::init([](const RowMatrix& p1, const RowMatrix& p2, double prior1) {
             return ClassicalQda::fit(PointCloud(p1), PointCloud(p2), prior1);
           }),
           py::arg("train1"), py::arg("train2"), py::arg("prior1") = 0.5)
      .def("classify", &ClassicalQda::classify_many, py::arg("queries"));

  // Samplers: stream (seed, stream) as in the experiments.
  m.def(
      "sample_normal",
      [](int n, int d, std::uint64_t seed, std::uint64_t stream) {
        Rng rng(seed, stream);
        return sample_normal(n, d, rng);
      },
      py::arg("n"), py::arg("d"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "sample_cauchy2d",
      [](int n, std::uint64_t seed, std::uint64_t stream) {
        Rng rng(seed, stream);
        return sample_cauchy2d(n, rng);
      },
      py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "sample_he_einmahl",
      [](int n, std::uint64_t seed, std::uint64_t stream) {
        Rng rng(seed, stream);
        return sample_he_einmahl(n, rng);
      },
      py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  m.def("normal_half_content_delta", &normal_half_content_delta);
  m.def("he_einmahl_half_content_delta", &he_einmahl_half_content_delta);

  // Experiments: keyword options mirror the CLI flags; returns the summary
  // table and one dict per replication row.
  m.def(
      "run_experiment",
      [](const std::string& experiment, const py::kwargs& kw) {
        const ExperimentConfig c = make_config(experiment, kw);
        py::list rows;
        std::string table;
        {
          py::gil_scoped_release release;
          if (c.experiment == Experiment::Tiebreak) {
            const TiebreakReport r = run_tiebreak(c);
            if (!c.out_dir.empty()) write_tiebreak(r, c.out_dir);
            table = tiebreak_table(r);
            py::gil_scoped_acquire acquire;
            for (const auto& x : r.rows)
              rows.append(py::dict(py::arg("subset") = x.subset, py::arg("rep") = x.rep, py::arg("count") = x.count,
                                   py::arg("cor_depth") = x.cor_depth,
                                   py::arg("cor_illumination") = x.cor_illumination));
          } else if (c.experiment == Experiment::Extreme) {
            const ExtremeReport r = run_extreme(c);
            if (!c.out_dir.empty()) write_extreme(r, c.out_dir);
            table = extreme_table(r);
            py::gil_scoped_acquire acquire;
            for (const auto& x : r.rows)
              rows.append(py::dict(py::arg("rep") = x.rep, py::arg("hausdorff_illumination") = x.hausdorff_illumination,
                                   py::arg("hausdorff_inflation") = x.hausdorff_inflation,
                                   py::arg("tail_index") = x.tail_index, py::arg("c") = x.c));
          } else {
            const ClassifyReport r = run_classify(c);
            if (!c.out_dir.empty()) write_classify(r, c.out_dir);
            table = classify_table(r);
            py::gil_scoped_acquire acquire;
            for (const auto& x : r.rows)
              rows.append(py::dict(py::arg("rep") = x.rep, py::arg("contamination") = x.contamination,
                                   py::arg("illumination") = x.illumination, py::arg("qda") = x.classical,
                                   py::arg("refined") = x.refined, py::arg("illumination_out") = x.illumination_out,
                                   py::arg("qda_out") = x.classical_out, py::arg("refined_out") = x.refined_out,
                                   py::arg("outsiders") = x.outsiders));
          }
        }
        return py::make_tuple(table, rows);
      },
      py::arg("experiment"));
}
