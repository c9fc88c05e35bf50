#include "nskf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "nskf/baselines.hpp"
#include "nskf/cmat_io.hpp"
#include "nskf/nkf.hpp"
#include "nskf/rng.hpp"

namespace nskf::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using metrics::format_double;

void parallel_for(size_t jobs, unsigned threads, const std::function<void(size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (workers <= 1) {
    for (size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < jobs; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void close_out(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw IoError("error writing " + path);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

RecoveryResult run_solver(const std::string& id, const SensingProblem& problem,
                          const SolverConfig& config) {
  if (id == "nkf") return nkf::solve(problem, config.nkf);
  if (id == "cp") return baselines::chambolle_pock_bp(problem, config.cp);
  if (id == "omp") return baselines::omp(problem, config.omp).result;
  throw ConfigError("unknown solver '" + id + "'");
}

std::vector<std::string> parse_solver_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item != "nkf" && item != "cp" && item != "omp") {
      throw ConfigError("unknown solver '" + item + "'");
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty solver list");
  return out;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CSBENCH_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void DtGridConfig::validate() const {
  if (n < 1) throw ConfigError("dt-grid: n must be >= 1");
  if (steps < 2) throw ConfigError("dt-grid: steps must be >= 2");
  if (trials_per_cell < 1) throw ConfigError("dt-grid: trials must be >= 1");
  if (!(success_threshold > 0.0)) throw ConfigError("dt-grid: success threshold must be > 0");
  if (solvers.empty()) throw ConfigError("dt-grid: no solvers");
  for (const auto& s : solvers) parse_solver_list(s);
  solver.validate();
}

Index cell_m(double delta, Index n) {
  return std::clamp<Index>(static_cast<Index>(std::llround(delta * static_cast<double>(n))), 1, n);
}

Index cell_s(double rho, Index m) {
  return std::clamp<Index>(static_cast<Index>(std::llround(rho * static_cast<double>(m))), 0, m);
}

DtGrid run_dt_grid(const DtGridConfig& config) {
  config.validate();
  DtGrid grid;
  grid.config = config;
  const int k = config.steps;
  const size_t n_cells = static_cast<size_t>(k) * static_cast<size_t>(k);
  const size_t n_trials = static_cast<size_t>(config.trials_per_cell);
  const size_t n_solvers = config.solvers.size();

  grid.cells.resize(n_cells);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      DtCellResult& cell = grid.cells[static_cast<size_t>(i * k + j)];
      cell.i_delta = i;
      cell.j_rho = j;
      cell.delta = static_cast<double>(i + 1) / k;
      cell.rho = static_cast<double>(j + 1) / k;
      cell.m = cell_m(cell.delta, config.n);
      cell.s = cell_s(cell.rho, cell.m);
    }
  }

  struct Outcome {
    double error = kNaN;
    double time_ms = 0.0;
    bool success = false;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(n_cells * n_trials * n_solvers);

  const unsigned threads = config.threads ? config.threads : worker_count();
  parallel_for(n_cells * n_trials, threads, [&](size_t job) {
    const size_t c = job / n_trials;
    const size_t t = job % n_trials;
    const DtCellResult& cell = grid.cells[c];
    Outcome* out = &outcomes[(c * n_trials + t) * n_solvers];
    if (cell.s == 0) {
      for (size_t s = 0; s < n_solvers; ++s) out[s] = {0.0, 0.0, true, false};
      return;
    }
    const std::uint64_t trial_seed = rng::derive_seed(config.seed_base, {c, t});
    SensingProblem problem;
    problem.c = sensing::gen_gaussian_matrix(cell.m, config.n, rng::derive_seed(trial_seed, {1}));
    const ComplexVector x =
        sensing::gen_sparse_signal({config.n, cell.s, rng::derive_seed(trial_seed, {2})});
    problem.y = problem.c * x;
    for (size_t s = 0; s < n_solvers; ++s) {
      try {
        const RecoveryResult r = run_solver(config.solvers[s], problem, config.solver);
        const double err = metrics::l2_error(x, r.x_hat);
        out[s] = {err, r.wall_time_ms, err <= config.success_threshold, false};
      } catch (const Error&) {
        out[s] = {kNaN, 0.0, false, true};
      }
    }
  });

  for (size_t c = 0; c < n_cells; ++c) {
    DtCellResult& cell = grid.cells[c];
    for (size_t s = 0; s < n_solvers; ++s) {
      DtSolverStats st;
      st.solver = config.solvers[s];
      st.trials = static_cast<int>(n_trials);
      std::vector<double> errors, times;
      for (size_t t = 0; t < n_trials; ++t) {
        const Outcome& o = outcomes[(c * n_trials + t) * n_solvers + s];
        st.successes += o.success;
        st.failures += o.failed;
        if (!o.failed) {
          errors.push_back(o.error);
          times.push_back(o.time_ms);
        }
      }
      st.success_rate = static_cast<double>(st.successes) / static_cast<double>(n_trials);
      st.mean_l2_error = mean_of(errors);
      st.median_wall_time_ms = median(times);
      cell.per_solver.push_back(std::move(st));
    }
  }
  return grid;
}

void write_grid_csv(const DtGrid& grid, const std::string& path) {
  auto out = open_out(path);
  out << "cell,i_delta,j_rho,delta,rho,n,m,s,solver,trials,successes,failures,success_rate,"
         "mean_l2_error\n";
  for (size_t c = 0; c < grid.cells.size(); ++c) {
    const auto& cell = grid.cells[c];
    for (const auto& st : cell.per_solver) {
      out << c << ',' << cell.i_delta << ',' << cell.j_rho << ',' << format_double(cell.delta)
          << ',' << format_double(cell.rho) << ',' << grid.config.n << ',' << cell.m << ','
          << cell.s << ',' << st.solver << ',' << st.trials << ',' << st.successes << ','
          << st.failures << ',' << format_double(st.success_rate) << ','
          << format_double(st.mean_l2_error) << '\n';
    }
  }
  close_out(out, path);
}

void write_timing_csv(const DtGrid& grid, const std::string& path) {
  auto out = open_out(path);
  out << "cell,delta,rho,m,s,solver,median_wall_time_ms\n";
  for (size_t c = 0; c < grid.cells.size(); ++c) {
    const auto& cell = grid.cells[c];
    for (const auto& st : cell.per_solver) {
      out << c << ',' << format_double(cell.delta) << ',' << format_double(cell.rho) << ','
          << cell.m << ',' << cell.s << ',' << st.solver << ','
          << format_double(st.median_wall_time_ms) << '\n';
    }
  }
  close_out(out, path);
}

Eigen::MatrixXd grid_field(const DtGrid& grid, const std::string& solver, const std::string& field) {
  const auto& solvers = grid.config.solvers;
  const auto it = std::find(solvers.begin(), solvers.end(), solver);
  if (it == solvers.end()) throw ConfigError("solver '" + solver + "' not in grid");
  const size_t s = static_cast<size_t>(it - solvers.begin());
  double DtSolverStats::*member = nullptr;
  if (field == "success_rate") member = &DtSolverStats::success_rate;
  else if (field == "mean_l2_error") member = &DtSolverStats::mean_l2_error;
  else if (field == "median_wall_time_ms") member = &DtSolverStats::median_wall_time_ms;
  else throw ConfigError("unknown heatmap field '" + field + "'");
  const int k = grid.config.steps;
  Eigen::MatrixXd f(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) f(j, i) = grid.at(i, j).per_solver[s].*member;
  return f;
}

std::string pgm_text(const Eigen::MatrixXd& display) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index i = 0; i < display.size(); ++i) {
    const double v = display.data()[i];
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  std::ostringstream out;
  out << "P2\n" << display.cols() << ' ' << display.rows() << "\n255\n";
  for (Index r = 0; r < display.rows(); ++r) {
    for (Index c = 0; c < display.cols(); ++c) {
      const double v = display(r, c);
      int px = 0;
      if (!std::isfinite(v)) px = 0;
      else if (hi == lo) px = 128;
      else px = static_cast<int>(std::lround((v - lo) / (hi - lo) * 255.0));
      out << px << (c + 1 < display.cols() ? ' ' : '\n');
    }
  }
  return out.str();
}

void emit_heatmap(const DtGrid& grid, const std::string& solver, const std::string& field,
                  const std::string& out_base) {
  const Eigen::MatrixXd f = grid_field(grid, solver, field);
  const Eigen::MatrixXd display = f.colwise().reverse();
  const int k = grid.config.steps;

  const std::string csv_path = out_base + ".csv";
  auto csv = open_out(csv_path);
  csv << "rho\\delta";
  for (int i = 0; i < k; ++i) csv << ',' << format_double(static_cast<double>(i + 1) / k);
  csv << '\n';
  for (int r = 0; r < k; ++r) {
    csv << format_double(static_cast<double>(k - r) / k);
    for (int i = 0; i < k; ++i) csv << ',' << format_double(display(r, i));
    csv << '\n';
  }
  close_out(csv, csv_path);

  const std::string pgm_path = out_base + ".pgm";
  auto pgm = open_out(pgm_path);
  pgm << pgm_text(display);
  close_out(pgm, pgm_path);
}

double SceneExperimentResult::median(const std::string& solver,
                                     double metrics::ImageMetrics::*field) const {
  std::vector<double> v;
  for (const auto& s : seeds)
    for (const auto& r : s.runs)
      if (r.solver == solver && !r.failed) v.push_back(r.metrics.*field);
  return bench::median(std::move(v));
}

SceneExperimentResult run_scene_experiment(const SceneExperimentConfig& config) {
  config.scene.validate();
  for (const auto& s : config.solvers) parse_solver_list(s);
  config.solver.validate();

  SceneExperimentResult result;
  result.config = config;
  result.seeds.resize(config.seeds.size());
  const Index n_r = config.scene.n_r;
  const Index n_a = config.scene.n_a;
  const Rect region = config.scene.region();

  std::vector<Index> all_bins(static_cast<size_t>(n_r * n_a));
  for (size_t i = 0; i < all_bins.size(); ++i) all_bins[i] = static_cast<Index>(i);

  parallel_for(config.seeds.size(), worker_count(), [&](size_t idx) {
    SceneSeedResult& out = result.seeds[idx];
    out.seed = config.seeds[idx];
    sensing::SceneSpec spec = config.scene;
    spec.seed = rng::derive_seed(out.seed, {1});
    const ComplexVector truth = sensing::gen_scene(spec);
    const auto pf = sensing::gen_partial_fourier_2d(n_r, n_a, config.keep_fraction,
                                                    rng::derive_seed(out.seed, {2}));
    SensingProblem problem;
    problem.c = pf.c;
    problem.y = problem.c * truth;
    out.m = problem.m();
    out.truth = sensing::to_image(truth, n_r, n_a);
    out.reference = sensing::reference_image(sensing::fourier_samples(truth, all_bins, n_r, n_a),
                                             all_bins, n_r, n_a);
    out.zero_filled = sensing::reference_image(problem.y, pf.kept, n_r, n_a);
    out.zero_filled_metrics =
        metrics::evaluate(out.zero_filled, out.reference, region, config.detect_threshold_db);

    for (const auto& id : config.solvers) {
      SceneSolverRun run;
      run.solver = id;
      try {
        const RecoveryResult r = run_solver(id, problem, config.solver);
        run.wall_time_ms = r.wall_time_ms;
        run.termination = to_string(r.termination);
        run.message = r.message;
        run.image = sensing::to_image(r.x_hat, n_r, n_a);
        run.metrics = metrics::evaluate(run.image, out.reference, region, config.detect_threshold_db);
      } catch (const Error& e) {
        run.failed = true;
        run.message = e.what();
        run.metrics = {kNaN, kNaN, kNaN, kNaN, 0, 0};
      }
      out.runs.push_back(std::move(run));
    }
  });
  return result;
}

void write_scene_outputs(const SceneExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  const auto& cfg = result.config;
  const Index s = cfg.scene.n_scatterers;

  const std::string csv_path = dir + "/metrics.csv";
  auto csv = open_out(csv_path);
  csv << "seed," << metrics::csv_header() << '\n';
  nlohmann::json records = nlohmann::json::array();
  for (const auto& sr : result.seeds) {
    metrics::MetricsRow rd{"rd", result.n(), sr.m, s, sr.zero_filled_metrics, 0.0, true};
    csv << sr.seed << ',' << metrics::csv_row(rd) << '\n';
    auto jr = metrics::to_json(rd);
    jr["seed"] = sr.seed;
    records.push_back(jr);
    for (const auto& run : sr.runs) {
      metrics::MetricsRow row{run.solver, result.n(), sr.m, s, run.metrics, run.wall_time_ms, false};
      csv << sr.seed << ',' << metrics::csv_row(row) << '\n';
      auto j = metrics::to_json(row);
      j["seed"] = sr.seed;
      j["termination"] = run.failed ? "error" : run.termination;
      if (!run.message.empty()) j["message"] = run.message;
      records.push_back(j);
    }
    const std::string stem = dir + "/seed" + std::to_string(sr.seed) + "_";
    io::save_cmat(stem + "truth.cmat", sr.truth);
    io::save_cmat(stem + "rd.cmat", sr.zero_filled);
    for (const auto& run : sr.runs)
      if (!run.failed) io::save_cmat(stem + run.solver + ".cmat", run.image);
  }
  close_out(csv, csv_path);

  const std::string json_path = dir + "/metrics.json";
  auto js = open_out(json_path);
  js << records.dump(2) << '\n';
  close_out(js, json_path);

  const std::string sum_path = dir + "/summary.csv";
  auto sum = open_out(sum_path);
  sum << metrics::csv_header() << '\n';
  const Index m = result.seeds.empty() ? 0 : result.seeds.front().m;
  for (const auto& id : cfg.solvers) {
    metrics::ImageMetrics med;
    using IM = metrics::ImageMetrics;
    med.rrmse = result.median(id, &IM::rrmse);
    med.tcr_db = result.median(id, &IM::tcr_db);
    med.ie = result.median(id, &IM::ie);
    med.ic = result.median(id, &IM::ic);
    std::vector<double> fa, md, t;
    for (const auto& sr : result.seeds)
      for (const auto& run : sr.runs)
        if (run.solver == id && !run.failed) {
          fa.push_back(static_cast<double>(run.metrics.fa));
          md.push_back(static_cast<double>(run.metrics.md));
          t.push_back(run.wall_time_ms);
        }
    med.fa = fa.empty() ? 0 : static_cast<Index>(std::llround(median(fa)));
    med.md = md.empty() ? 0 : static_cast<Index>(std::llround(median(md)));
    sum << metrics::csv_row({id, result.n(), m, s, med, median(t), false}) << '\n';
  }
  close_out(sum, sum_path);
}

std::vector<CrossoverRow> time_crossover(const CrossoverConfig& config) {
  if (config.repeats < 1) throw ConfigError("crossover: repeats must be >= 1");
  if (config.deltas.empty()) throw ConfigError("crossover: no deltas");
  for (const auto& s : config.solvers) parse_solver_list(s);
  config.solver.validate();

  std::vector<CrossoverRow> rows;
  for (size_t di = 0; di < config.deltas.size(); ++di) {
    const double delta = config.deltas[di];
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("crossover: deltas must lie in (0, 1]");
    const Index m = cell_m(delta, config.n);
    if (config.s >= m) throw ConfigError("crossover: s must be below every m");
    std::vector<CrossoverRow> block(config.solvers.size());
    for (size_t k = 0; k < block.size(); ++k) {
      block[k].delta = delta;
      block[k].m = m;
      block[k].solver = config.solvers[k];
    }
    for (int rep = 0; rep < config.repeats; ++rep) {
      const std::uint64_t seed = rng::derive_seed(config.seed_base, {di, static_cast<std::uint64_t>(rep)});
      SensingProblem problem;
      problem.c = sensing::gen_gaussian_matrix(m, config.n, rng::derive_seed(seed, {1}));
      const ComplexVector x =
          sensing::gen_sparse_signal({config.n, config.s, rng::derive_seed(seed, {2})});
      problem.y = problem.c * x;
      for (auto& row : block) {
        row.times_ms.push_back(run_solver(row.solver, problem, config.solver).wall_time_ms);
      }
    }
    for (auto& row : block) {
      row.median_ms = median(row.times_ms);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_crossover_csv(const std::vector<CrossoverRow>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "delta,m,solver,repeats,median_wall_time_ms\n";
  for (const auto& r : rows) {
    out << format_double(r.delta) << ',' << r.m << ',' << r.solver << ',' << r.times_ms.size()
        << ',' << format_double(r.median_ms) << '\n';
  }
  close_out(out, path);
}

}  // namespace nskf::bench
