// csbench: sparse recovery benchmark driver.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nskf/bench.hpp"
#include "nskf/cmat_io.hpp"
#include "nskf/config.hpp"
#include "nskf/sensing.hpp"

namespace {

using namespace nskf;

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError("not a seed: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

SolverConfig config_or_default(const std::string& path) {
  return path.empty() ? SolverConfig{} : load_config(path);
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  out.close();
  if (!out) throw IoError("error writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse recovery solvers and benchmarks"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a sensing matrix (and optionally a test signal)");
  std::string gen_kind, gen_out, gen_x_out, gen_y_out;
  Index gen_m = 0, gen_n = 0, gen_nr = 0, gen_na = 0, gen_s = -1;
  double gen_keep = 0.25, gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "gaussian or fourier2d")
      ->required()
      ->check(CLI::IsMember({"gaussian", "fourier2d"}));
  gen->add_option("--m", gen_m, "Rows (gaussian)");
  gen->add_option("--n", gen_n, "Columns (gaussian)");
  gen->add_option("--nr", gen_nr, "Range bins (fourier2d)");
  gen->add_option("--na", gen_na, "Azimuth bins (fourier2d)");
  gen->add_option("--keep", gen_keep, "Kept fraction of frequency bins (fourier2d)");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Matrix output (CMAT); fourier2d also writes <out>.idx")
      ->required();
  gen->add_option("--s", gen_s, "Sparsity of a test signal to generate");
  gen->add_option("--noise", gen_noise, "Measurement noise sigma");
  gen->add_option("--x-out", gen_x_out, "Signal output (CMAT), needs --s");
  gen->add_option("--y-out", gen_y_out, "Measurement output (CMAT), needs --s");

  // solve
  auto* solve = app.add_subcommand("solve", "Recover a sparse vector");
  std::string sv_solver, sv_matrix, sv_meas, sv_config, sv_out;
  solve->add_option("--solver", sv_solver, "nkf, cp or omp")
      ->required()
      ->check(CLI::IsMember({"nkf", "cp", "omp"}));
  solve->add_option("--matrix", sv_matrix, "Sensing matrix (CMAT)")->required();
  solve->add_option("--measurements", sv_meas, "Measurement vector (CMAT)")->required();
  solve->add_option("--config", sv_config, "Solver config (JSON)");
  solve->add_option("--out", sv_out, "Result JSON")->required();

  // dt-grid
  auto* dt = app.add_subcommand("dt-grid", "Phase-transition grid sweep");
  bench::DtGridConfig dtc;
  std::string dt_solvers = "nkf,cp,omp", dt_out, dt_config;
  dt->add_option("--n", dtc.n, "Signal length")->capture_default_str();
  dt->add_option("--steps", dtc.steps, "Grid steps per axis")->capture_default_str();
  dt->add_option("--trials", dtc.trials_per_cell, "Trials per cell")->capture_default_str();
  dt->add_option("--solvers", dt_solvers, "Comma-separated solver ids")->capture_default_str();
  dt->add_option("--seed", dtc.seed_base, "Seed base")->capture_default_str();
  dt->add_option("--threshold", dtc.success_threshold, "Success bound on the l2 error")
      ->capture_default_str();
  dt->add_option("--config", dt_config, "Solver config (JSON)");
  dt->add_option("--out", dt_out, "Output directory")->required();

  // scene
  auto* scene = app.add_subcommand("scene", "Synthetic scene imaging experiment");
  bench::SceneExperimentConfig scc;
  std::string sc_solvers = "nkf,cp,omp", sc_seeds = "1", sc_out, sc_config;
  scene->add_option("--nr", scc.scene.n_r, "Range bins")->capture_default_str();
  scene->add_option("--na", scc.scene.n_a, "Azimuth bins")->capture_default_str();
  scene->add_option("--scatterers", scc.scene.n_scatterers, "Scatterer count")
      ->capture_default_str();
  scene->add_option("--keep", scc.keep_fraction, "Kept fraction of frequency bins")
      ->capture_default_str();
  scene->add_option("--solvers", sc_solvers, "Comma-separated solver ids")->capture_default_str();
  scene->add_option("--seeds", sc_seeds, "Comma-separated seeds")->capture_default_str();
  scene->add_option("--threshold-db", scc.detect_threshold_db, "Detection threshold below peak")
      ->capture_default_str();
  scene->add_option("--config", sc_config, "Solver config (JSON)");
  scene->add_option("--out", sc_out, "Output directory")->required();

  // crossover
  auto* cross = app.add_subcommand("crossover", "Median wall time against delta");
  bench::CrossoverConfig crc;
  std::string cr_deltas = "0.3,0.6,0.9", cr_solvers = "nkf,cp", cr_out, cr_config;
  cross->add_option("--n", crc.n, "Signal length")->capture_default_str();
  cross->add_option("--s", crc.s, "Sparsity")->capture_default_str();
  cross->add_option("--deltas", cr_deltas, "Comma-separated m/n values")->capture_default_str();
  cross->add_option("--solvers", cr_solvers, "Comma-separated solver ids")->capture_default_str();
  cross->add_option("--repeats", crc.repeats, "Repeats per delta")->capture_default_str();
  cross->add_option("--seed", crc.seed_base, "Seed base")->capture_default_str();
  cross->add_option("--config", cr_config, "Solver config (JSON)");
  cross->add_option("--out", cr_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      ComplexMatrix c;
      if (gen_kind == "gaussian") {
        if (gen_m < 1 || gen_n < 1) throw ConfigError("gen gaussian needs --m and --n");
        c = sensing::gen_gaussian_matrix(gen_m, gen_n, gen_seed);
        io::save_cmat(gen_out, c);
      } else {
        if (gen_nr < 1 || gen_na < 1) throw ConfigError("gen fourier2d needs --nr and --na");
        auto pf = sensing::gen_partial_fourier_2d(gen_nr, gen_na, gen_keep, gen_seed);
        io::save_cmat(gen_out, pf.c);
        io::save_indices(gen_out + ".idx", pf.kept);
        c = std::move(pf.c);
      }
      if (gen_s >= 0) {
        const auto x = sensing::gen_sparse_signal({c.cols(), gen_s, gen_seed + 1});
        if (!gen_x_out.empty()) io::save_cmat(gen_x_out, x);
        if (!gen_y_out.empty()) io::save_cmat(gen_y_out, sensing::measure(c, x, gen_noise, gen_seed + 2));
      } else if (!gen_x_out.empty() || !gen_y_out.empty()) {
        throw ConfigError("--x-out and --y-out need --s");
      }
      return kOk;
    }

    if (*solve) {
      const SolverConfig cfg = config_or_default(sv_config);
      SensingProblem problem;
      problem.c = io::load_cmat(sv_matrix);
      problem.y = io::load_cmat_vector(sv_meas);
      const RecoveryResult r = bench::run_solver(sv_solver, problem, cfg);
      write_text(sv_out, to_json(r).dump(2) + "\n");
      if (r.termination == Termination::NumericalFailure) {
        std::cerr << "csbench: " << r.message << '\n';
        return kNumerical;
      }
      return kOk;
    }

    if (*dt) {
      dtc.solvers = bench::parse_solver_list(dt_solvers);
      dtc.solver = config_or_default(dt_config);
      const auto grid = bench::run_dt_grid(dtc);
      make_dir(dt_out);
      bench::write_grid_csv(grid, dt_out + "/grid.csv");
      bench::write_timing_csv(grid, dt_out + "/timing.csv");
      for (const auto& s : dtc.solvers) {
        bench::emit_heatmap(grid, s, "success_rate", dt_out + "/" + s + "_success_rate");
        bench::emit_heatmap(grid, s, "mean_l2_error", dt_out + "/" + s + "_mean_l2_error");
      }
      return kOk;
    }

    if (*scene) {
      scc.solvers = bench::parse_solver_list(sc_solvers);
      scc.seeds = parse_seeds(sc_seeds);
      scc.solver = config_or_default(sc_config);
      const auto res = bench::run_scene_experiment(scc);
      bench::write_scene_outputs(res, sc_out);
      return kOk;
    }

    if (*cross) {
      crc.deltas = parse_doubles(cr_deltas);
      crc.solvers = bench::parse_solver_list(cr_solvers);
      crc.solver = config_or_default(cr_config);
      bench::write_crossover_csv(bench::time_crossover(crc), cr_out);
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "csbench: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "csbench: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionMismatch& e) {
    std::cerr << "csbench: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "csbench: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
