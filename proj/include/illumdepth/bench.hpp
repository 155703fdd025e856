#pragma once

#include "illumdepth/core.hpp"
#include "illumdepth/random.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace illumdepth {

// Sample statistics.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator; 0 for a single value
  int count = 0;
};
MeanSd mean_sd(const std::vector<double>& values);  // NaN entries are skipped

// 1-based ranks; tied values share their average rank.
std::vector<double> average_ranks(const std::vector<double>& values);
// Pearson correlation of the average ranks; NaN when either side is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

enum class Experiment {
  Tiebreak,
  Extreme,
  ClassifyNormalLocScale,
  ClassifyNormalLoc,
  ClassifyEllipticalLocScale,
  ClassifyEllipticalLoc,
};

Experiment parse_experiment(const std::string& name);  // ConfigError on unknown names
std::string experiment_name(Experiment e);

struct ExperimentConfig {
  Experiment experiment = Experiment::Tiebreak;
  int n = 500;
  int d = 2;
  int reps = 50;
  int k = 75;
  // Unset: 1/n for extreme, the half-content cutoff for classification.
  std::optional<double> delta;
  // Classification: contamination fractions of the class-1 training set
  // and the contaminant shift (unset: the scenario default).
  std::vector<double> contamination{0.0, 0.01, 0.05, 0.1};
  std::optional<Vector> offset;
  // Tie-break: depth thresholds of the summary rows.
  std::vector<double> tiebreak_deltas{0.5, 0.05, 0.01, 0.005, 0.001};
  int test_per_class = 1000;
  int outsider_pool = 2500;
  int directions = 720;  // boundary tracing
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  std::string out_dir;  // empty: no files written

  // Throws ConfigError.
  void validate() const;
};

// Stream of replication `rep`: Rng(seed, rep), independent of how many
// replications run or in which order.
Rng replication_rng(std::uint64_t seed, int rep);

// Runs body(rep) for rep in [0, reps) on up to `threads` workers.
void for_each_replication(int reps, int threads, const std::function<void(int)>& body);

// ---- tie-break ----

struct TiebreakRow {
  std::string subset;  // "hd<=0.05" or "hull"
  int rep = 0;
  int count = 0;
  double cor_depth = 0.0;         // NaN when all depths tie
  double cor_illumination = 0.0;
};

struct TiebreakReport {
  std::vector<TiebreakRow> rows;  // sorted by (subset order, rep)
  std::vector<std::string> subsets;
  // Hull points of replication 0: correct rank and illumination rank.
  std::vector<double> hull_rank_correct, hull_rank_illumination;
  double seconds = 0.0;

  MeanSd summary_count(const std::string& subset) const;
  MeanSd summary_depth(const std::string& subset) const;
  MeanSd summary_illumination(const std::string& subset) const;
};

TiebreakReport run_tiebreak(const ExperimentConfig& config);

// ---- extreme regions ----

struct ExtremeRow {
  int rep = 0;
  double hausdorff_illumination = 0.0;
  double hausdorff_inflation = 0.0;
  double tail_index = 0.0;
  double c = 0.0;
};

struct ExtremeReport {
  std::vector<ExtremeRow> rows;
  double true_radius = 0.0;
  // Replication 0 for the overlay plot.
  RowMatrix sample, inflation_boundary, illumination_boundary;
  double seconds = 0.0;

  double win_fraction() const;  // share of reps where illumination is closer
};

ExtremeReport run_extreme(const ExperimentConfig& config);

// ---- classification ----

struct ClassifyRow {
  int rep = 0;
  double contamination = 0.0;
  // Misclassification rates: all test points, then outsiders (NaN if none).
  double illumination = 0.0, classical = 0.0, refined = 0.0;
  double illumination_out = 0.0, classical_out = 0.0, refined_out = 0.0;
  int outsiders = 0;
};

struct ClassifyReport {
  Experiment scenario = Experiment::ClassifyNormalLocScale;
  double delta = 0.0;
  std::vector<ClassifyRow> rows;  // sorted by (contamination, rep)
  double seconds = 0.0;

  std::vector<double> levels() const;
  MeanSd summary(double contamination, double ClassifyRow::*rate) const;
};

ClassifyReport run_classify(const ExperimentConfig& config);

// ---- output ----

// CSV with a header row; numbers printed with 10 significant digits.
void write_tiebreak(const TiebreakReport& report, const std::string& dir);
void write_extreme(const ExtremeReport& report, const std::string& dir);
void write_classify(const ClassifyReport& report, const std::string& dir);

std::string tiebreak_table(const TiebreakReport& report);
std::string extreme_table(const ExtremeReport& report);
std::string classify_table(const ClassifyReport& report);

// Dataset I/O: CSV with a header row, one point per line.
RowMatrix read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const RowMatrix& X, const std::vector<std::string>& header = {});

}  // namespace illumdepth
