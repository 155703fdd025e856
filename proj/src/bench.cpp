#include "illumdepth/bench.hpp"

#include "illumdepth/distributions.hpp"
#include "illumdepth/elliptical.hpp"
#include "illumdepth/extremes.hpp"
#include "illumdepth/halfspace_depth.hpp"
#include "illumdepth/illumination_depth.hpp"
#include "illumdepth/polytope.hpp"
#include "illumdepth/svg.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace illumdepth {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

// Ranks of (primary, secondary) pairs in lexicographic order, ties averaged.
std::vector<double> lexicographic_ranks(const std::vector<double>& primary, const std::vector<double>& secondary) {
  const int m = static_cast<int>(primary.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) { return std::make_pair(primary[i], secondary[i]); };
  std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<double> rank(m);
  for (int s = 0; s < m;) {
    int e = s + 1;
    while (e < m && key(order[e]) == key(order[s])) ++e;
    const double avg = 0.5 * (s + 1 + e);
    for (int j = s; j < e; ++j) rank[order[j]] = avg;
    s = e;
  }
  return rank;
}

double quantile_sorted(const std::vector<double>& v, double p) {
  if (v.empty()) return kNaN;
  const double h = p * (v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - lo) * (v[hi] - v[lo]);
}

struct Scenario {
  bool elliptical = false;
  double scale2 = 1.0;
  Vector shift2, offset3;
};

Scenario scenario_for(Experiment e) {
  Scenario s;
  s.elliptical = e == Experiment::ClassifyEllipticalLocScale || e == Experiment::ClassifyEllipticalLoc;
  const bool locscale = e == Experiment::ClassifyNormalLocScale || e == Experiment::ClassifyEllipticalLocScale;
  s.scale2 = locscale ? 2.0 : 1.0;
  s.shift2 = Vector::Constant(2, locscale ? 4.0 : 2.0);
  s.offset3 = Vector::Constant(2, locscale ? 40.0 : 20.0);
  return s;
}

double error_rate(const std::vector<int>& labels, int first_class2) {
  if (labels.empty()) return kNaN;
  int wrong = 0;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) wrong += labels[i] != (i < first_class2 ? 1 : 2);
  return static_cast<double>(wrong) / labels.size();
}

}  // namespace

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd out;
  double sum = 0.0;
  for (double v : values)
    if (!std::isnan(v)) {
      sum += v;
      ++out.count;
    }
  if (out.count == 0) {
    out.mean = out.sd = kNaN;
    return out;
  }
  out.mean = sum / out.count;
  if (out.count > 1) {
    double ss = 0.0;
    for (double v : values)
      if (!std::isnan(v)) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / (out.count - 1));
  }
  return out;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  return lexicographic_ranks(values, std::vector<double>(values.size(), 0.0));
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("spearman: lengths differ");
  if (a.size() < 2) return kNaN;
  const std::vector<double> ra = average_ranks(a), rb = average_ranks(b);
  const double m = 0.5 * (a.size() + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - m) * (rb[i] - m);
    saa += (ra[i] - m) * (ra[i] - m);
    sbb += (rb[i] - m) * (rb[i] - m);
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::Tiebreak, Experiment::Extreme, Experiment::ClassifyNormalLocScale,
                       Experiment::ClassifyNormalLoc, Experiment::ClassifyEllipticalLocScale,
                       Experiment::ClassifyEllipticalLoc})
    if (experiment_name(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Tiebreak: return "tiebreak";
    case Experiment::Extreme: return "extreme";
    case Experiment::ClassifyNormalLocScale: return "classify-normal-locscale";
    case Experiment::ClassifyNormalLoc: return "classify-normal-loc";
    case Experiment::ClassifyEllipticalLocScale: return "classify-elliptical-locscale";
    case Experiment::ClassifyEllipticalLoc: return "classify-elliptical-loc";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (n < 10) throw ConfigError("n must be at least 10");
  if (d < 1) throw ConfigError("d must be at least 1");
  if (experiment == Experiment::Tiebreak && d < 2) throw ConfigError("tiebreak needs d >= 2");
  if (experiment != Experiment::Tiebreak && d != 2) throw ConfigError(experiment_name(experiment) + " is bivariate (d = 2)");
  if (experiment != Experiment::Tiebreak && (k < 2 || k >= n)) throw ConfigError("k must satisfy 2 <= k < n");
  if (delta && !(*delta > 0.0 && *delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
  if (experiment == Experiment::Extreme && delta && *delta > static_cast<double>(k) / n)
    throw ConfigError("extreme: delta must not exceed k/n");
  if (contamination.empty()) throw ConfigError("contamination list is empty");
  for (double c : contamination)
    if (!(c >= 0.0 && c < 1.0)) throw ConfigError("contamination must lie in [0, 1)");
  if (offset && offset->size() != 2) throw ConfigError("offset must have two coordinates");
  for (double t : tiebreak_deltas)
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("tie-break thresholds must lie in (0, 1]");
  if (test_per_class < 1) throw ConfigError("test_per_class must be positive");
  if (outsider_pool < 0) throw ConfigError("outsider_pool must be non-negative");
  if (directions < 8) throw ConfigError("directions must be at least 8");
  if (threads < 0) throw ConfigError("threads must be non-negative");
}

Rng replication_rng(std::uint64_t seed, int rep) { return Rng(seed, static_cast<std::uint64_t>(rep)); }

void for_each_replication(int reps, int threads, const std::function<void(int)>& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(reps, 1));
  if (workers == 1) {
    for (int r = 0; r < reps; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int r = next++; r < reps; r = next++) {
        try {
          body(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = reps;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---- tie-break ----

namespace {

std::string subset_name(double delta) {
  std::ostringstream os;
  os << "hd<=" << delta;
  return os.str();
}

MeanSd summarize(const std::vector<TiebreakRow>& rows, const std::string& subset, double TiebreakRow::*field) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.subset == subset) v.push_back(r.*field);
  return mean_sd(v);
}

}  // namespace

MeanSd TiebreakReport::summary_count(const std::string& subset) const {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.subset == subset) v.push_back(r.count);
  return mean_sd(v);
}
MeanSd TiebreakReport::summary_depth(const std::string& subset) const {
  return summarize(rows, subset, &TiebreakRow::cor_depth);
}
MeanSd TiebreakReport::summary_illumination(const std::string& subset) const {
  return summarize(rows, subset, &TiebreakRow::cor_illumination);
}

TiebreakReport run_tiebreak(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  TiebreakReport report;
  std::vector<double> thresholds = config.tiebreak_deltas;
  for (double t : thresholds) report.subsets.push_back(subset_name(t));
  report.subsets.push_back("hull");
  const int n = config.n, d = config.d;
  double widest = 1.0 / n;
  for (double t : thresholds) widest = std::max(widest, t);

  std::vector<std::vector<TiebreakRow>> per_rep(config.reps);
  std::vector<double> hull_correct, hull_illum;
  for_each_replication(config.reps, config.threads, [&](int rep) {
    Rng rng = replication_rng(config.seed, rep);
    const PointCloud P(sample_normal(n, d, rng));
    const Evaluation eval = Evaluation::automatic(d);
    const std::vector<int> counts = sample_depth_counts(P, eval.depth);
    const RegionFamily family(P, eval.region);
    std::vector<double> radius(n), key(n, 1.0);
    for (int i = 0; i < n; ++i) {
      radius[i] = P.matrix().row(i).norm();
      if (counts[i] > widest * n + 1e-9) continue;
      try {
        key[i] = tiebreak_illumination(P.point(i), counts[i], family, counts);
      } catch (const GeometryError&) {
        key[i] = 1.0;
      }
    }
    auto subset_row = [&](const std::string& name, double limit) {
      std::vector<double> r, neg_depth, k;
      for (int i = 0; i < n; ++i)
        if (counts[i] <= limit + 1e-9) {
          r.push_back(radius[i]);
          neg_depth.push_back(-counts[i]);
          k.push_back(key[i]);
        }
      TiebreakRow row;
      row.subset = name;
      row.rep = rep;
      row.count = static_cast<int>(r.size());
      row.cor_depth = spearman(r, neg_depth);
      row.cor_illumination = spearman(r, lexicographic_ranks(neg_depth, k));
      if (rep == 0 && name == "hull") {
        hull_correct = average_ranks(r);
        hull_illum = lexicographic_ranks(neg_depth, k);
      }
      return row;
    };
    for (std::size_t s = 0; s < thresholds.size(); ++s)
      per_rep[rep].push_back(subset_row(report.subsets[s], thresholds[s] * n));
    per_rep[rep].push_back(subset_row("hull", 1.0));
  });
  for (std::size_t s = 0; s < report.subsets.size(); ++s)
    for (int rep = 0; rep < config.reps; ++rep) report.rows.push_back(per_rep[rep][s]);
  report.hull_rank_correct = std::move(hull_correct);
  report.hull_rank_illumination = std::move(hull_illum);
  report.seconds = seconds_since(t0);
  return report;
}

// ---- extreme regions ----

double ExtremeReport::win_fraction() const {
  if (rows.empty()) return kNaN;
  int wins = 0;
  for (const auto& r : rows) wins += r.hausdorff_illumination < r.hausdorff_inflation;
  return static_cast<double>(wins) / rows.size();
}

ExtremeReport run_extreme(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const double delta = config.delta.value_or(1.0 / config.n);
  ExtremeReport report;
  report.true_radius = std::sqrt(true_cauchy_region(delta).scatter()(0, 0));
  report.rows.resize(config.reps);
  for_each_replication(config.reps, config.threads, [&](int rep) {
    Rng rng = replication_rng(config.seed, rep);
    const PointCloud P(sample_cauchy2d(config.n, rng));
    ExtremeOptions opts;
    opts.directions = config.directions;
    const ExtremeRegionEstimate inflated = extreme_region(P, config.k, delta, ExtremeKind::Inflate, opts);
    opts.tail_index = inflated.tail_index;
    const ExtremeRegionEstimate lit = extreme_region(P, config.k, delta, ExtremeKind::Illuminate, opts);
    ExtremeRow& row = report.rows[rep];
    row.rep = rep;
    row.tail_index = inflated.tail_index;
    row.c = inflated.c;
    const Vector origin = Vector::Zero(2);
    row.hausdorff_inflation = hausdorff_to_ball(inflated.region.vertices(), origin, report.true_radius, config.directions);
    row.hausdorff_illumination = hausdorff_to_ball(lit.boundary, origin, report.true_radius, config.directions);
    if (rep == 0) {
      report.sample = P.matrix();
      report.inflation_boundary = inflated.boundary;
      report.illumination_boundary = lit.boundary;
    }
  });
  report.seconds = seconds_since(t0);
  return report;
}

// ---- classification ----

std::vector<double> ClassifyReport::levels() const {
  std::vector<double> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.contamination) == out.end()) out.push_back(r.contamination);
  return out;
}

MeanSd ClassifyReport::summary(double contamination, double ClassifyRow::*rate) const {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.contamination == contamination) v.push_back(r.*rate);
  return mean_sd(v);
}

ClassifyReport run_classify(const ExperimentConfig& config) {
  config.validate();
  if (config.experiment == Experiment::Tiebreak || config.experiment == Experiment::Extreme)
    throw ConfigError("run_classify: not a classification experiment");
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = scenario_for(config.experiment);
  ClassifyReport report;
  report.scenario = config.experiment;
  report.delta = config.delta.value_or(sc.elliptical ? he_einmahl_half_content_delta() : normal_half_content_delta());
  std::shared_ptr<const SymmetricCdf> F;
  if (sc.elliptical)
    F = std::make_shared<HeEinmahlMarginalCdf>();
  else
    F = std::make_shared<NormalCdf>();
  QdaOptions qopts;
  qopts.simplified_inside = sc.elliptical;
  const Vector offset = config.offset.value_or(sc.offset3);
  const int n = config.n, T = config.test_per_class, pool = config.outsider_pool;
  int max_extra = 0;
  for (double c : config.contamination) max_extra = std::max(max_extra, static_cast<int>(std::llround(c * n)));

  const int L = static_cast<int>(config.contamination.size());
  std::vector<std::vector<ClassifyRow>> per_rep(config.reps, std::vector<ClassifyRow>(L));
  for_each_replication(config.reps, config.threads, [&](int rep) {
    Rng rng = replication_rng(config.seed, rep);
    auto base = [&](int m) { return sc.elliptical ? sample_he_einmahl(m, rng) : sample_normal(m, 2, rng); };
    auto second = [&](int m) {
      RowMatrix X = base(m) * sc.scale2;
      X.rowwise() += sc.shift2.transpose();
      return X;
    };
    const RowMatrix X1 = base(n), X2 = second(n);
    RowMatrix test(2 * T, 2), candidates(2 * pool, 2);
    test.topRows(T) = base(T);
    test.bottomRows(T) = second(T);
    candidates.topRows(pool) = base(pool);
    candidates.bottomRows(pool) = second(pool);
    RowMatrix extra = sample_normal(max_extra, 2, rng);
    extra.rowwise() += offset.transpose();

    const PointCloud P2(X2);
    const Polytope hull2 = convex_hull(X2);
    for (int l = 0; l < L; ++l) {
      const int m = static_cast<int>(std::llround(config.contamination[l] * n));
      RowMatrix X1c(n + m, 2);
      X1c.topRows(n) = X1;
      X1c.bottomRows(m) = extra.topRows(m);
      const PointCloud P1(std::move(X1c));
      const Polytope hull1 = convex_hull(P1.matrix());
      std::vector<int> keep1, keep2;
      for (int i = 0; i < 2 * pool; ++i) {
        const Vector x = candidates.row(i).transpose();
        if (hull1.contains(x) || hull2.contains(x)) continue;
        (i < pool ? keep1 : keep2).push_back(i);
      }
      RowMatrix outsiders(keep1.size() + keep2.size(), 2);
      int row = 0;
      for (int i : keep1) outsiders.row(row++) = candidates.row(i);
      for (int i : keep2) outsiders.row(row++) = candidates.row(i);
      const int out_split = static_cast<int>(keep1.size());

      const QdaModel illum = QdaModel::fit(P1, P2, report.delta, F, qopts);
      const ClassicalQda classical = ClassicalQda::fit(P1, P2);
      const RefinedDepthClassifier refined(P1, P2, config.k);

      ClassifyRow& r = per_rep[rep][l];
      r.rep = rep;
      r.contamination = config.contamination[l];
      r.outsiders = static_cast<int>(outsiders.rows());
      r.illumination = error_rate(illum.classify_many(test), T);
      r.classical = error_rate(classical.classify_many(test), T);
      r.refined = error_rate(refined.classify_many(test), T);
      r.illumination_out = error_rate(illum.classify_many(outsiders), out_split);
      r.classical_out = error_rate(classical.classify_many(outsiders), out_split);
      r.refined_out = error_rate(refined.classify_many(outsiders), out_split);
    }
  });
  for (int l = 0; l < L; ++l)
    for (int rep = 0; rep < config.reps; ++rep) report.rows.push_back(per_rep[rep][l]);
  report.seconds = seconds_since(t0);
  return report;
}

// ---- output ----

std::string tiebreak_table(const TiebreakReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "subset" << std::setw(18) << "count" << std::setw(20) << "cor(R_HD, R_c)"
     << "cor(R_Ill, R_c)\n";
  for (const auto& s : report.subsets) {
    const MeanSd c = report.summary_count(s), h = report.summary_depth(s), i = report.summary_illumination(s);
    os << std::setw(12) << s << std::setw(18) << (fixed(c.mean, 1) + " (" + fixed(c.sd, 1) + ")") << std::setw(20)
       << (h.count ? fixed(h.mean, 3) + " (" + fixed(h.sd, 3) + ")" : std::string("-"))
       << fixed(i.mean, 3) << " (" << fixed(i.sd, 3) << ")\n";
  }
  return os.str();
}

std::string extreme_table(const ExtremeReport& report) {
  std::vector<double> hi, hr, a;
  for (const auto& r : report.rows) {
    hi.push_back(r.hausdorff_illumination);
    hr.push_back(r.hausdorff_inflation);
    a.push_back(r.tail_index);
  }
  const MeanSd mi = mean_sd(hi), mr = mean_sd(hr), ma = mean_sd(a);
  std::ostringstream os;
  os << "true radius " << fixed(report.true_radius, 2) << "\n";
  os << "Haus(E_Ill) " << fixed(mi.mean, 2) << " (" << fixed(mi.sd, 2) << ")\n";
  os << "Haus(E_R)   " << fixed(mr.mean, 2) << " (" << fixed(mr.sd, 2) << ")\n";
  os << "tail index  " << fixed(ma.mean, 3) << " (" << fixed(ma.sd, 3) << ")\n";
  os << "E_Ill closer in " << fixed(100.0 * report.win_fraction(), 1) << "% of " << report.rows.size() << " reps\n";
  return os.str();
}

std::string classify_table(const ClassifyReport& report) {
  std::ostringstream os;
  os << experiment_name(report.scenario) << ", delta = " << fixed(report.delta, 5) << "\n";
  os << std::left << std::setw(8) << "contam";
  for (const char* h : {"Illumination", "QDA", "Ref. depth", "Ill. (out)", "QDA (out)", "Ref. (out)"})
    os << std::setw(17) << h;
  os << "\n";
  double ClassifyRow::* const fields[] = {&ClassifyRow::illumination,     &ClassifyRow::classical,
                                         &ClassifyRow::refined,          &ClassifyRow::illumination_out,
                                         &ClassifyRow::classical_out,    &ClassifyRow::refined_out};
  for (double c : report.levels()) {
    os << std::setw(8) << (fixed(100 * c, 0) + "%");
    for (auto f : fields) {
      const MeanSd s = report.summary(c, f);
      os << std::setw(17) << (fixed(s.mean, 3) + " (" + fixed(s.sd, 3) + ")");
    }
    os << "\n";
  }
  return os.str();
}

void write_tiebreak(const TiebreakReport& report, const std::string& dir) {
  {
    std::ofstream out = open_output(dir, "tiebreak_reps.csv");
    out << "subset,rep,count,cor_depth,cor_illumination\n";
    for (const auto& r : report.rows)
      out << r.subset << ',' << r.rep << ',' << r.count << ',' << num(r.cor_depth) << ',' << num(r.cor_illumination)
          << '\n';
  }
  {
    std::ofstream out = open_output(dir, "tiebreak_summary.csv");
    out << "subset,count_mean,count_sd,cor_depth_mean,cor_depth_sd,cor_illumination_mean,cor_illumination_sd\n";
    for (const auto& s : report.subsets) {
      const MeanSd c = report.summary_count(s), h = report.summary_depth(s), i = report.summary_illumination(s);
      out << s << ',' << num(c.mean) << ',' << num(c.sd) << ',' << num(h.mean) << ',' << num(h.sd) << ','
          << num(i.mean) << ',' << num(i.sd) << '\n';
    }
  }
  const auto& rc = report.hull_rank_correct;
  const auto& ri = report.hull_rank_illumination;
  const double top = std::max<double>(1.0, static_cast<double>(rc.size()));
  Svg svg(480, 480, 0, top + 1, 0, top + 1);
  svg.frame();
  for (std::size_t i = 0; i < rc.size(); ++i) svg.dot(rc[i], ri[i], 3, "#d95f02");
  svg.line(0, 0, top + 1, top + 1, "#999999");
  svg.label(180, 470, "correct rank R_c");
  svg.label(5, 25, "illumination rank R_Ill (hull points)");
  std::ofstream out = open_output(dir, "tiebreak_hull.svg");
  out << svg.str();
}

void write_extreme(const ExtremeReport& report, const std::string& dir) {
  {
    std::ofstream out = open_output(dir, "extreme_reps.csv");
    out << "rep,hausdorff_illumination,hausdorff_inflation,tail_index,c\n";
    for (const auto& r : report.rows)
      out << r.rep << ',' << num(r.hausdorff_illumination) << ',' << num(r.hausdorff_inflation) << ','
          << num(r.tail_index) << ',' << num(r.c) << '\n';
  }
  const double lim = 1.5 * report.true_radius;
  Svg svg(560, 560, -lim, lim, -lim, lim);
  svg.frame();
  RowMatrix circle(360, 2);
  for (int i = 0; i < 360; ++i) {
    const double a = 2 * std::numbers::pi * i / 360;
    circle.row(i) << report.true_radius * std::cos(a), report.true_radius * std::sin(a);
  }
  if (report.inflation_boundary.rows() > 0) svg.polygon(report.inflation_boundary, "#1f78b4", "#a6cee3", 0.5);
  if (report.illumination_boundary.rows() > 0) svg.polygon(report.illumination_boundary, "#ff7f00", "#fdbf6f", 0.5);
  svg.polygon(circle, "black", "none", 0.0);
  for (int i = 0; i < report.sample.rows(); ++i)
    if (std::abs(report.sample(i, 0)) < lim && std::abs(report.sample(i, 1)) < lim)
      svg.dot(report.sample(i, 0), report.sample(i, 1), 1.5, "#333333");
  svg.label(50, 30, "black: true region; blue: inflation; orange: illumination");
  std::ofstream out = open_output(dir, "extreme_regions.svg");
  out << svg.str();
}

void write_classify(const ClassifyReport& report, const std::string& dir) {
  const std::string stem = experiment_name(report.scenario);
  {
    std::ofstream out = open_output(dir, stem + "_reps.csv");
    out << "contamination,rep,illumination,qda,refined,illumination_out,qda_out,refined_out,outsiders\n";
    for (const auto& r : report.rows)
      out << num(r.contamination) << ',' << r.rep << ',' << num(r.illumination) << ',' << num(r.classical) << ','
          << num(r.refined) << ',' << num(r.illumination_out) << ',' << num(r.classical_out) << ','
          << num(r.refined_out) << ',' << r.outsiders << '\n';
  }
  double ClassifyRow::* const fields[] = {&ClassifyRow::illumination,     &ClassifyRow::classical,
                                         &ClassifyRow::refined,          &ClassifyRow::illumination_out,
                                         &ClassifyRow::classical_out,    &ClassifyRow::refined_out};
  const char* names[] = {"illumination", "qda", "refined", "illumination_out", "qda_out", "refined_out"};
  {
    std::ofstream out = open_output(dir, stem + "_summary.csv");
    out << "contamination";
    for (const char* nme : names) out << ',' << nme << "_mean," << nme << "_sd";
    out << '\n';
    for (double c : report.levels()) {
      out << num(c);
      for (auto f : fields) {
        const MeanSd s = report.summary(c, f);
        out << ',' << num(s.mean) << ',' << num(s.sd);
      }
      out << '\n';
    }
  }
  // Boxplots of the all-points rates, three methods per contamination level.
  const std::vector<double> levels = report.levels();
  double ymax = 0.0;
  for (const auto& r : report.rows) ymax = std::max({ymax, r.illumination, r.classical, r.refined});
  ymax = ymax > 0 ? 1.1 * ymax : 1.0;
  const double width = 4.0 * levels.size();
  Svg svg(120 + 140 * levels.size(), 400, 0, width, 0, ymax);
  svg.frame();
  const char* colors[] = {"#ff7f00", "#1f78b4", "#33a02c"};
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (int m = 0; m < 3; ++m) {
      std::vector<double> v;
      for (const auto& r : report.rows)
        if (r.contamination == levels[l]) v.push_back(r.*fields[m]);
      std::sort(v.begin(), v.end());
      if (v.empty()) continue;
      const double x = 4.0 * l + 0.5 + m, q1 = quantile_sorted(v, 0.25), q3 = quantile_sorted(v, 0.75);
      svg.line(x + 0.4, v.front(), x + 0.4, v.back(), "black");
      svg.rect(x + 0.1, q1, x + 0.7, q3, "black", colors[m]);
      svg.line(x + 0.1, quantile_sorted(v, 0.5), x + 0.7, quantile_sorted(v, 0.5), "black", 2.0);
    }
    svg.text(4.0 * l + 1.2, 0.0, fixed(100 * levels[l], 0) + "%");
  }
  svg.label(50, 25, "misclassification: orange illumination, blue QDA, green refined depth");
  std::ofstream out = open_output(dir, stem + "_boxplot.svg");
  out << svg.str();
}

RowMatrix read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": missing header row");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(path + ": no data rows");
  RowMatrix X(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) X(i, j) = rows[i][j];
  return X;
}

void write_points_csv(const std::string& path, const RowMatrix& X, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  for (int j = 0; j < X.cols(); ++j) {
    if (j) out << ',';
    out << (j < static_cast<int>(header.size()) ? header[j] : "x" + std::to_string(j + 1));
  }
  out << '\n';
  for (int i = 0; i < X.rows(); ++i) {
    for (int j = 0; j < X.cols(); ++j) {
      if (j) out << ',';
      out << num(X(i, j));
    }
    out << '\n';
  }
}

}  // namespace illumdepth
