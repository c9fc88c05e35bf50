#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nskf/config.hpp"
#include "nskf/metrics.hpp"
#include "nskf/sensing.hpp"

namespace nskf::bench {

/// Runs solver "nkf", "cp" or "omp". Throws ConfigError for other ids.
RecoveryResult run_solver(const std::string& id, const SensingProblem& problem,
                          const SolverConfig& config);

std::vector<std::string> parse_solver_list(const std::string& csv);

/// Worker count: hardware concurrency, capped by CSBENCH_THREADS if set.
unsigned worker_count();

struct DtGridConfig {
  Index n = 128;
  int steps = 16;
  int trials_per_cell = 1;
  std::vector<std::string> solvers{"nkf", "cp", "omp"};
  std::uint64_t seed_base = 0;
  double success_threshold = 1e-3;
  SolverConfig solver;
  unsigned threads = 0;  // 0: worker_count()

  void validate() const;
};

struct DtSolverStats {
  std::string solver;
  int trials = 0;
  int successes = 0;
  int failures = 0;  // runs that threw
  double success_rate = 0.0;
  double mean_l2_error = 0.0;  // over runs that did not throw; NaN if none
  double median_wall_time_ms = 0.0;
};

/// delta = (i + 1) / steps, rho = (j + 1) / steps.
struct DtCellResult {
  int i_delta = 0;
  int j_rho = 0;
  double delta = 0.0;
  double rho = 0.0;
  Index m = 0;
  Index s = 0;
  std::vector<DtSolverStats> per_solver;  // in config.solvers order
};

struct DtGrid {
  DtGridConfig config;
  std::vector<DtCellResult> cells;  // cell index = i_delta * steps + j_rho

  const DtCellResult& at(int i_delta, int j_rho) const {
    return cells[static_cast<size_t>(i_delta * config.steps + j_rho)];
  }
};

Index cell_m(double delta, Index n);
Index cell_s(double rho, Index m);

DtGrid run_dt_grid(const DtGridConfig& config);

/// Everything except wall times; byte-identical across runs.
void write_grid_csv(const DtGrid& grid, const std::string& path);
void write_timing_csv(const DtGrid& grid, const std::string& path);

/// Field per cell for one solver: "success_rate", "mean_l2_error" or
/// "median_wall_time_ms". Result(j, i) holds rho index j, delta index i.
Eigen::MatrixXd grid_field(const DtGrid& grid, const std::string& solver, const std::string& field);

/// Writes <out_base>.csv (delta columns, rho rows, largest rho first) and
/// <out_base>.pgm.
void emit_heatmap(const DtGrid& grid, const std::string& solver, const std::string& field,
                  const std::string& out_base);

/// Plain P2 image of a matrix in display order (row 0 at the top). Linear map
/// of [min, max] onto [0, 255]; a constant field is mid-gray 128 and NaN is 0.
std::string pgm_text(const Eigen::MatrixXd& display);

struct SceneExperimentConfig {
  sensing::SceneSpec scene;
  double keep_fraction = 0.25;
  std::vector<std::string> solvers{"nkf", "cp", "omp"};
  std::vector<std::uint64_t> seeds{1};
  SolverConfig solver;
  double detect_threshold_db = -30.0;
};

struct SceneSolverRun {
  std::string solver;
  metrics::ImageMetrics metrics;
  double wall_time_ms = 0.0;
  ComplexMatrix image;
  std::string termination;
  bool failed = false;
  std::string message;
};

struct SceneSeedResult {
  std::uint64_t seed = 0;
  Index m = 0;
  ComplexMatrix truth;
  ComplexMatrix reference;    // inverse transform of the full data
  ComplexMatrix zero_filled;  // inverse transform of the kept data
  metrics::ImageMetrics zero_filled_metrics;
  std::vector<SceneSolverRun> runs;  // in config.solvers order
};

struct SceneExperimentResult {
  SceneExperimentConfig config;
  std::vector<SceneSeedResult> seeds;

  Index n() const { return config.scene.n_r * config.scene.n_a; }
  /// Median of a metric over seeds for one solver, failed runs skipped.
  double median(const std::string& solver, double metrics::ImageMetrics::*field) const;
};

SceneExperimentResult run_scene_experiment(const SceneExperimentConfig& config);

/// metrics.csv (one row per seed and solver, seed order), summary.csv
/// (medians), metrics.json and CMAT images per seed.
void write_scene_outputs(const SceneExperimentResult& result, const std::string& dir);

struct CrossoverConfig {
  Index n = 256;
  Index s = 5;
  std::vector<double> deltas{0.3, 0.6, 0.9};
  std::vector<std::string> solvers{"nkf", "cp"};
  int repeats = 5;
  std::uint64_t seed_base = 0;
  SolverConfig solver;
};

struct CrossoverRow {
  double delta = 0.0;
  Index m = 0;
  std::string solver;
  double median_ms = 0.0;
  std::vector<double> times_ms;
};

/// Serial. Each repeat solves a freshly seeded instance; the clock covers the
/// solver call only.
std::vector<CrossoverRow> time_crossover(const CrossoverConfig& config);
void write_crossover_csv(const std::vector<CrossoverRow>& rows, const std::string& path);

double median(std::vector<double> v);

}  // namespace nskf::bench
