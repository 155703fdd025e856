#include "illumdepth/bench.hpp"
#include "illumdepth/distributions.hpp"
#include "illumdepth/elliptical.hpp"
#include "illumdepth/extremes.hpp"
#include "illumdepth/halfspace_depth.hpp"
#include "illumdepth/illumination_depth.hpp"
#include "illumdepth/polytope.hpp"
#include "illumdepth/svg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace illumdepth;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGeometry = 3;

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

struct EvalFlags {
  std::string mode = "auto";  // auto | exact | approximate
  int directions = 0;         // 0: library default
};

Evaluation make_evaluation(const EvalFlags& f, int d) {
  Evaluation e = Evaluation::automatic(d);
  if (f.mode == "exact") {
    if (d != 2) throw ConfigError("--mode exact needs bivariate data");
    e.depth.mode = DepthMode::Exact2d;
    e.region.mode = RegionMode::Exact2d;
  } else if (f.mode == "approximate") {
    e.depth.mode = DepthMode::Approximate;
    e.region.mode = RegionMode::Directions;
  } else if (f.mode != "auto") {
    throw ConfigError("--mode must be auto, exact or approximate");
  }
  if (f.directions > 0) e.depth.directions = e.region.directions = f.directions;
  return e;
}

// --alpha robust | symmetric | log-concave | <number>, or --content p.
struct CutoffFlags {
  std::string alpha = "robust";
  std::optional<double> content;
};

IlluminationDepthModel make_model(const PointCloud& P, const CutoffFlags& c, const Evaluation& eval) {
  if (c.content) {
    if (!(*c.content > 0.0 && *c.content <= 1.0)) throw ConfigError("--content must lie in (0, 1]");
    return IlluminationDepthModel(P, cutoff_for_probability(P, *c.content, eval.depth), eval);
  }
  if (c.alpha == "robust") return IlluminationDepthModel::robust(P, eval);
  if (c.alpha == "symmetric") return IlluminationDepthModel(P, kAlphaHalfspaceSymmetric, eval);
  if (c.alpha == "log-concave") return IlluminationDepthModel(P, kAlphaLogConcave, eval);
  double a = 0.0;
  try {
    std::size_t used = 0;
    a = std::stod(c.alpha, &used);
    if (used != c.alpha.size()) throw std::invalid_argument(c.alpha);
  } catch (const std::exception&) {
    throw ConfigError("--alpha must be robust, symmetric, log-concave or a number");
  }
  if (!(a > 0.0 && a <= 1.0)) throw ConfigError("--alpha must lie in (0, 1]");
  return IlluminationDepthModel(P, a, eval);
}

void add_cutoff_flags(CLI::App* cmd, CutoffFlags& c) {
  cmd->add_option("--alpha", c.alpha, "Depth cutoff: robust, symmetric, log-concave or a number in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--content", c.content, "Cutoff by probability content p of the sample")->excludes("--alpha");
}

void add_eval_flags(CLI::App* cmd, EvalFlags& f) {
  cmd->add_option("--mode", f.mode, "Depth and region computation: auto, exact or approximate")
      ->capture_default_str();
  cmd->add_option("--directions", f.directions, "Direction count of the approximate mode");
}

// Writes to --out when given, else to stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw ConfigError("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_boundary(std::ostream& out, const RowMatrix& B, const std::string& level) {
  for (int i = 0; i < B.rows(); ++i) {
    out << level;
    for (int j = 0; j < B.cols(); ++j) out << ',' << num(B(i, j));
    out << '\n';
  }
}

std::string coordinate_header(int d) {
  std::string h;
  for (int j = 0; j < d; ++j) h += ",x" + std::to_string(j + 1);
  return h;
}

void bounds_of(const RowMatrix& X, double& lo, double& hi) {
  lo = std::min(X.col(0).minCoeff(), X.col(1).minCoeff());
  hi = std::max(X.col(0).maxCoeff(), X.col(1).maxCoeff());
}

struct Common {
  std::string data, query, out;
  EvalFlags eval;
  CutoffFlags cutoff;
};

int run_depth(const Common& o) {
  const PointCloud P(read_points_csv(o.data));
  const RowMatrix Q = o.query.empty() ? P.matrix() : read_points_csv(o.query);
  const IlluminationDepthModel model = make_model(P, o.cutoff, make_evaluation(o.eval, P.d()));
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  out << "hd,depth_count,norm_illum,alpha\n";
  for (const IlluminationDepth& v : model.evaluate_many(Q))
    out << num(v.hd) << ',' << v.depth_count << ',' << num(v.norm_illum) << ',' << num(v.alpha_used) << '\n';
  return 0;
}

int run_illuminate(const Common& o) {
  const PointCloud P(read_points_csv(o.data));
  if (o.query.empty()) throw ConfigError("illuminate needs --query");
  const RowMatrix Q = read_points_csv(o.query);
  const IlluminationDepthModel model = make_model(P, o.cutoff, make_evaluation(o.eval, P.d()));
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  out << "ill,norm_illum\n";
  for (int i = 0; i < Q.rows(); ++i) {
    const Illumination v = illumination(Q.row(i).transpose(), model.region());
    out << num(v.ill) << ',' << num(v.norm_illum) << '\n';
  }
  return 0;
}

int run_region(const Common& o, const std::vector<double>& levels, int trace) {
  const PointCloud P(read_points_csv(o.data));
  const IlluminationDepthModel model = make_model(P, o.cutoff, make_evaluation(o.eval, P.d()));
  const DepthRegion& R = model.region();
  std::cout << "alpha " << num(model.alpha()) << ", level " << R.level << ", points inside " << R.n_inside
            << ", volume " << num(R.region.volume()) << '\n';
  if (o.out.empty()) return 0;
  std::filesystem::create_directories(o.out);
  const auto dir = std::filesystem::path(o.out);
  write_points_csv((dir / "region_vertices.csv").string(), R.region.vertices());
  if (P.d() > 3) return 0;
  const RowMatrix dirs = sphere_points(P.d(), trace);
  std::vector<RowMatrix> traced;
  std::ofstream out(dir / "boundaries.csv");
  out << "level" << coordinate_header(P.d()) << '\n';
  std::vector<double> all{1.0};
  all.insert(all.end(), levels.begin(), levels.end());
  for (double lv : all) {
    traced.push_back(model.level_set_boundary(lv, dirs));
    write_boundary(out, traced.back(), num(lv));
  }
  if (P.d() != 2) return 0;
  double lo = 0.0, hi = 0.0;
  bounds_of(traced.back(), lo, hi);
  double slo = 0.0, shi = 0.0;
  bounds_of(P.matrix(), slo, shi);
  lo = std::min(lo, slo);
  hi = std::max(hi, shi);
  const double pad = 0.05 * (hi - lo);
  Svg svg(560, 560, lo - pad, hi + pad, lo - pad, hi + pad);
  svg.frame();
  for (int i = 0; i < P.n(); ++i) svg.dot(P.matrix()(i, 0), P.matrix()(i, 1), 1.5, "#333333");
  svg.polygon(traced.front(), "#1f78b4", "#a6cee3", 0.5);
  for (std::size_t j = 1; j < traced.size(); ++j) svg.polygon(traced[j], "#ff7f00", "none", 0.0);
  svg.label(50, 25, "sample, depth region (blue), illumination level sets (orange)");
  std::ofstream(dir / "region.svg") << svg.str();
  return 0;
}

int run_rank(const Common& o) {
  const PointCloud P(read_points_csv(o.data));
  const RowMatrix Q = o.query.empty() ? P.matrix() : read_points_csv(o.query);
  const IlluminationDepthModel model = make_model(P, o.cutoff, make_evaluation(o.eval, P.d()));
  const CentreOutwardRanking r = rank_centre_outward(Q, model);
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  out << "index,rank,hd,norm_illum,tie_broken\n";
  for (int i = 0; i < Q.rows(); ++i)
    out << i << ',' << r.rank[i] + 1 << ',' << num(r.depth[i].hd) << ',' << num(r.depth[i].norm_illum) << ','
        << static_cast<int>(r.tie_broken[i]) << '\n';
  return 0;
}

struct ExtremeFlags {
  int k = 75;
  std::optional<double> delta, tail_index;
  std::string kind = "both";
  int trace = 720;
};

int run_extreme_cmd(const Common& o, const ExtremeFlags& f) {
  const PointCloud P(read_points_csv(o.data));
  const double delta = f.delta.value_or(1.0 / P.n());
  ExtremeOptions opts;
  opts.eval = make_evaluation(o.eval, P.d());
  opts.directions = f.trace;
  opts.tail_index = f.tail_index;
  std::vector<std::pair<std::string, ExtremeKind>> kinds;
  if (f.kind == "inflate" || f.kind == "both") kinds.emplace_back("inflate", ExtremeKind::Inflate);
  if (f.kind == "illuminate" || f.kind == "both") kinds.emplace_back("illuminate", ExtremeKind::Illuminate);
  if (kinds.empty()) throw ConfigError("--kind must be inflate, illuminate or both");
  std::vector<ExtremeRegionEstimate> est;
  for (const auto& [name, kind] : kinds) {
    est.push_back(extreme_region(P, f.k, delta, kind, opts));
    std::cout << name << ": tail index " << num(est.back().tail_index) << ", c " << num(est.back().c) << ", volume "
              << num(est.back().region.volume()) << '\n';
  }
  if (o.out.empty()) return 0;
  std::filesystem::create_directories(o.out);
  const auto dir = std::filesystem::path(o.out);
  std::ofstream out(dir / "extreme_boundaries.csv");
  out << "kind" << coordinate_header(P.d()) << '\n';
  for (std::size_t j = 0; j < est.size(); ++j) write_boundary(out, est[j].boundary, kinds[j].first);
  if (P.d() != 2) return 0;
  double lo = 0.0, hi = 0.0;
  bounds_of(est.front().boundary, lo, hi);
  for (const auto& e : est) {
    double a = 0.0, b = 0.0;
    bounds_of(e.boundary, a, b);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  const double pad = 0.05 * (hi - lo);
  Svg svg(560, 560, lo - pad, hi + pad, lo - pad, hi + pad);
  svg.frame();
  for (int i = 0; i < P.n(); ++i) {
    const double x = P.matrix()(i, 0), y = P.matrix()(i, 1);
    if (x > lo && x < hi && y > lo && y < hi) svg.dot(x, y, 1.5, "#333333");
  }
  const char* colors[] = {"#1f78b4", "#ff7f00"};
  for (std::size_t j = 0; j < est.size(); ++j)
    svg.polygon(est[j].boundary, colors[kinds[j].second == ExtremeKind::Illuminate], "none", 0.0);
  svg.label(50, 25, "inflation (blue), illumination (orange)");
  std::ofstream(dir / "extreme.svg") << svg.str();
  return 0;
}

struct ClassifyFlags {
  std::string train1, train2;
  std::string method = "illumination";  // illumination | qda | refined
  std::string cdf = "normal";           // normal | he-einmahl
  std::optional<double> delta;
  bool simplified = false;
  double prior1 = 0.5;
  int k = 75;
};

int run_classify_cmd(const Common& o, const ClassifyFlags& f) {
  const PointCloud P1(read_points_csv(f.train1)), P2(read_points_csv(f.train2));
  if (o.query.empty()) throw ConfigError("classify needs --query");
  const RowMatrix Q = read_points_csv(o.query);
  std::vector<int> labels;
  if (f.method == "illumination") {
    std::shared_ptr<const SymmetricCdf> F;
    double delta = 0.0;
    if (f.cdf == "normal") {
      F = std::make_shared<NormalCdf>();
      delta = f.delta.value_or(normal_half_content_delta());
    } else if (f.cdf == "he-einmahl") {
      F = std::make_shared<HeEinmahlMarginalCdf>();
      delta = f.delta.value_or(he_einmahl_half_content_delta());
    } else {
      throw ConfigError("--cdf must be normal or he-einmahl");
    }
    QdaOptions opts;
    opts.prior1 = f.prior1;
    opts.simplified_inside = f.simplified;
    opts.eval = make_evaluation(o.eval, P1.d());
    labels = QdaModel::fit(P1, P2, delta, F, opts).classify_many(Q);
  } else if (f.method == "qda") {
    labels = ClassicalQda::fit(P1, P2, f.prior1).classify_many(Q);
  } else if (f.method == "refined") {
    labels = RefinedDepthClassifier(P1, P2, f.k, f.prior1, make_evaluation(o.eval, P1.d())).classify_many(Q);
  } else {
    throw ConfigError("--method must be illumination, qda or refined");
  }
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  out << "label\n";
  for (int l : labels) out << l << '\n';
  return 0;
}

struct BenchFlags {
  std::string experiment;
  std::optional<int> n, d, reps, k, test_per_class, outsider_pool, threads, trace;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::vector<double> contamination, offset, tiebreak_deltas;
  bool full_scale = false;
};

int run_bench(const BenchFlags& f, const std::string& out_dir) {
  ExperimentConfig c;
  c.experiment = parse_experiment(f.experiment);
  if (c.experiment == Experiment::Tiebreak) c.d = 3;
  if (f.full_scale) {
    c.reps = 100;
    if (c.experiment == Experiment::Tiebreak) {
      c.n = 1000;
      c.d = 5;
    }
  }
  if (f.n) c.n = *f.n;
  if (f.d) c.d = *f.d;
  if (f.reps) c.reps = *f.reps;
  if (f.k) c.k = *f.k;
  if (f.delta) c.delta = *f.delta;
  if (f.seed) c.seed = *f.seed;
  if (f.test_per_class) c.test_per_class = *f.test_per_class;
  if (f.outsider_pool) c.outsider_pool = *f.outsider_pool;
  if (f.threads) c.threads = *f.threads;
  if (f.trace) c.directions = *f.trace;
  if (!f.contamination.empty()) c.contamination = f.contamination;
  if (!f.tiebreak_deltas.empty()) c.tiebreak_deltas = f.tiebreak_deltas;
  if (!f.offset.empty()) {
    if (f.offset.size() != 2) throw ConfigError("--offset takes two numbers");
    c.offset = Vector::Map(f.offset.data(), 2);
  }
  c.out_dir = out_dir;
  c.validate();
  double seconds = 0.0;
  if (c.experiment == Experiment::Tiebreak) {
    const TiebreakReport r = run_tiebreak(c);
    std::cout << tiebreak_table(r);
    if (!out_dir.empty()) write_tiebreak(r, out_dir);
    seconds = r.seconds;
  } else if (c.experiment == Experiment::Extreme) {
    const ExtremeReport r = run_extreme(c);
    std::cout << extreme_table(r);
    if (!out_dir.empty()) write_extreme(r, out_dir);
    seconds = r.seconds;
  } else {
    const ClassifyReport r = run_classify(c);
    std::cout << classify_table(r);
    if (!out_dir.empty()) write_classify(r, out_dir);
    seconds = r.seconds;
  }
  std::cerr << "elapsed " << std::fixed << std::setprecision(1) << seconds << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Halfspace-illumination depth: regions, ranks, extreme regions, classification and benchmarks"};
  app.set_config("--config", "", "TOML or INI file with option values, one [section] per subcommand");
  app.require_subcommand(1);

  Common common;
  auto add_io = [&](CLI::App* cmd, bool needs_query) {
    cmd->add_option("--data", common.data, "Sample CSV (header row, one point per line)")->required();
    auto* q = cmd->add_option("--query", common.query, "Query points CSV (default: the sample)");
    if (needs_query) q->required();
    add_eval_flags(cmd, common.eval);
  };

  auto* depth = app.add_subcommand("depth", "Illumination depth (hd, norm_illum) of query points");
  add_io(depth, false);
  add_cutoff_flags(depth, common.cutoff);
  depth->add_option("--out", common.out, "Output CSV (default: stdout)");

  auto* illuminate = app.add_subcommand("illuminate", "Illumination of query points onto the depth region");
  add_io(illuminate, true);
  add_cutoff_flags(illuminate, common.cutoff);
  illuminate->add_option("--out", common.out, "Output CSV (default: stdout)");

  std::vector<double> levels{1.5, 2.0, 4.0};
  int trace = 720;
  auto* region = app.add_subcommand("region", "Depth region and illumination level sets");
  add_io(region, false);
  add_cutoff_flags(region, common.cutoff);
  region->add_option("--delta", levels, "norm_illum levels of the traced level sets")->capture_default_str();
  region->add_option("--trace", trace, "Rays used to trace boundaries")->capture_default_str();
  region->add_option("--out", common.out, "Output directory for CSV and SVG");

  auto* rank = app.add_subcommand("rank", "Centre-outward ranks with illumination tie-breaking");
  add_io(rank, false);
  add_cutoff_flags(rank, common.cutoff);
  rank->add_option("--out", common.out, "Output CSV (default: stdout)");

  ExtremeFlags xf;
  auto* extreme = app.add_subcommand("extreme", "Extreme central regions by inflation or illumination");
  add_io(extreme, false);
  extreme->add_option("--k", xf.k, "Tail sample size")->capture_default_str();
  extreme->add_option("--delta", xf.delta, "Target probability content (default 1/n)");
  extreme->add_option("--tail-index", xf.tail_index, "Known tail index (default: Hill estimate)");
  extreme->add_option("--kind", xf.kind, "inflate, illuminate or both")->capture_default_str();
  extreme->add_option("--trace", xf.trace, "Rays used to trace boundaries")->capture_default_str();
  extreme->add_option("--out", common.out, "Output directory for CSV and SVG");

  ClassifyFlags cf;
  auto* classify = app.add_subcommand("classify", "Two-class discriminant analysis");
  classify->add_option("--train1", cf.train1, "Class 1 training CSV")->required();
  classify->add_option("--train2", cf.train2, "Class 2 training CSV")->required();
  classify->add_option("--query", common.query, "Points to classify")->required();
  classify->add_option("--method", cf.method, "illumination, qda or refined")->capture_default_str();
  classify->add_option("--cdf", cf.cdf, "Generator CDF: normal or he-einmahl")->capture_default_str();
  classify->add_option("--delta", cf.delta, "Depth cutoff (default: half-content value of the CDF)");
  classify->add_flag("--simplified", cf.simplified, "Decide by depth inside either cutoff region");
  classify->add_option("--prior1", cf.prior1, "Prior of class 1")->capture_default_str();
  classify->add_option("--k", cf.k, "Tail sample size of the refined depth")->capture_default_str();
  add_eval_flags(classify, common.eval);
  classify->add_option("--out", common.out, "Output CSV (default: stdout)");

  BenchFlags bf;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Simulation experiments");
  bench->add_option("experiment", bf.experiment,
                    "tiebreak, extreme, classify-normal-locscale, classify-normal-loc, "
                    "classify-elliptical-locscale or classify-elliptical-loc")
      ->required();
  bench->add_option("--n", bf.n, "Sample size (per class)");
  bench->add_option("--d", bf.d, "Dimension (tiebreak)");
  bench->add_option("--reps", bf.reps, "Replications");
  bench->add_option("--k", bf.k, "Tail sample size");
  bench->add_option("--delta", bf.delta, "Cutoff or target content");
  bench->add_option("--seed", bf.seed, "Base seed; replication r uses stream (seed, r)");
  bench->add_option("--contamination", bf.contamination, "Contamination fractions of class 1")->delimiter(',');
  bench->add_option("--offset", bf.offset, "Contaminant shift x,y")->delimiter(',');
  bench->add_option("--tiebreak-deltas", bf.tiebreak_deltas, "Depth thresholds of the tie-break rows")
      ->delimiter(',');
  bench->add_option("--test-per-class", bf.test_per_class, "Test points per class");
  bench->add_option("--outsider-pool", bf.outsider_pool, "Outsider candidates per class");
  bench->add_option("--trace", bf.trace, "Rays used to trace boundaries");
  bench->add_option("--threads", bf.threads, "Worker threads (0: all cores)");
  bench->add_flag("--full-scale", bf.full_scale, "Full study sizes (tiebreak d = 5, n = 1000; 100 reps); hours");
  bench->add_option("--out", bench_out, "Output directory for CSV and SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*depth) return run_depth(common);
    if (*illuminate) return run_illuminate(common);
    if (*region) return run_region(common, levels, trace);
    if (*rank) return run_rank(common);
    if (*extreme) return run_extreme_cmd(common, xf);
    if (*classify) return run_classify_cmd(common, cf);
    if (*bench) return run_bench(bf, bench_out);
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return kExitGeometry;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
