// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero if any selected criterion fails.
//
//   acceptance            run all criteria
//   acceptance 3 7        run the listed ones

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nskf/baselines.hpp"
#include "nskf/bench.hpp"
#include "nskf/lq.hpp"
#include "nskf/metrics.hpp"
#include "nskf/nkf.hpp"
#include "support/oracles.hpp"

#ifndef CSBENCH_PATH
#error "CSBENCH_PATH must be defined"
#endif

using namespace nskf;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kFactorTol = 1e-10;
constexpr double kFactorBudgetS = 10.0;
constexpr double kFeasibilityTol = 1e-8;
constexpr double kOracleRelTol = 0.01;
constexpr double kOracleBudgetS = 60.0;
constexpr double kRecoveryTol = 1e-3;
constexpr int kRecoveryMinSuccesses = 18;
constexpr double kSimilarityMax = 0.15;
constexpr double kGridBudgetS = 15.0 * 60.0;
constexpr double kIdentityTol = 1e-12;
constexpr double kTcrTol = 1e-6;
constexpr double kInvarianceTol = 1e-9;
constexpr double kAccelBand = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SensingProblem problem_of(const oracle::Instance& in) {
  SensingProblem p;
  p.c = in.c;
  p.y = in.y;
  return p;
}

Outcome factorization_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  rng::Xoshiro256 g(20240601);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + g.index_below(64);
    const Index m = 1 + g.index_below(n);
    const ComplexMatrix c = oracle::random_matrix(m, n, rng::derive_seed(1, {std::uint64_t(trial)}));
    const ComplexVector y = oracle::random_vector(m, rng::derive_seed(2, {std::uint64_t(trial)}));
    const auto f = linalg::lq_factorize(c);
    const auto d = linalg::decompose(c, y);
    ComplexMatrix l = ComplexMatrix::Zero(m, n);
    l.leftCols(m) = f.l1;
    ComplexMatrix q(n, n);
    q << f.q1, f.q2;
    worst = std::max(worst, (c - l * q).norm() / c.norm());
    worst = std::max(worst, (q * q.adjoint() - ComplexMatrix::Identity(n, n)).norm());
    if (n > m) worst = std::max(worst, (c * d.e_n).cwiseAbs().maxCoeff() / c.cwiseAbs().maxCoeff());
    worst = std::max(worst, (c * d.x_p - y).norm() / y.norm());
  }
  const double secs = seconds_since(t0);
  return {worst <= kFactorTol && secs < kFactorBudgetS,
          "worst relative residual " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome feasibility_invariance() {
  double worst = 0.0;
  long iterates = 0;
  for (int run = 0; run < 50; ++run) {
    const auto in = oracle::gaussian_instance(64, 128, 1 + run % 16, 500 + run);
    const auto d = linalg::decompose(in.c, in.y);
    const double ynorm = in.y.norm();
    worst = std::max(worst, (in.c * d.x_p - in.y).norm() / ynorm);
    nkf::solve(d, {}, [&](int, const nkf::NkfState& s) {
      ++iterates;
      worst = std::max(worst, (in.c * s.x_hat - in.y).norm() / ynorm);
    });
  }
  return {worst <= kFeasibilityTol,
          std::to_string(iterates) + " iterates, worst relative residual " + fmt("%.2e", worst)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_nkf = 0.0, worst_cp = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto in = oracle::small_bp_instance(static_cast<std::uint64_t>(seed));
    const double opt = oracle::bp_enumerate(in.c, in.y).l1;
    const auto p = problem_of(in);
    worst_nkf = std::max(worst_nkf, std::abs(l1_norm(nkf::solve(p).x_hat) - opt) / opt);
    worst_cp = std::max(worst_cp, std::abs(l1_norm(baselines::chambolle_pock_bp(p).x_hat) - opt) / opt);
  }
  const double secs = seconds_since(t0);
  return {worst_nkf <= kOracleRelTol && worst_cp <= kOracleRelTol && secs < kOracleBudgetS,
          "worst l1 gap nkf " + fmt("%.2e", worst_nkf) + ", cp " + fmt("%.2e", worst_cp) + ", " +
              fmt("%.2f", secs) + " s"};
}

Outcome easy_regime_recovery() {
  int ok[3] = {0, 0, 0};
  const char* ids[3] = {"nkf", "cp", "omp"};
  for (int seed = 0; seed < 20; ++seed) {
    const auto in = oracle::gaussian_instance(64, 128, 5, 9000 + seed);
    for (int s = 0; s < 3; ++s) {
      const auto r = bench::run_solver(ids[s], problem_of(in), {});
      ok[s] += metrics::l2_error(in.x, r.x_hat) <= kRecoveryTol;
    }
  }
  std::string detail;
  bool pass = true;
  for (int s = 0; s < 3; ++s) {
    detail += std::string(s ? ", " : "") + ids[s] + " " + std::to_string(ok[s]) + "/20";
    pass = pass && ok[s] >= kRecoveryMinSuccesses;
  }
  return {pass, detail};
}

Outcome transition_similarity() {
  const auto t0 = std::chrono::steady_clock::now();
  bench::DtGridConfig cfg;
  cfg.n = 64;
  cfg.steps = 8;
  cfg.trials_per_cell = 20;
  cfg.solvers = {"nkf", "cp"};
  cfg.seed_base = 1;
  const auto grid = bench::run_dt_grid(cfg);
  double sum = 0.0, worst = 0.0;
  for (const auto& cell : grid.cells) {
    const double d = std::abs(cell.per_solver[0].success_rate - cell.per_solver[1].success_rate);
    sum += d;
    worst = std::max(worst, d);
  }
  const double mean = sum / static_cast<double>(grid.cells.size());
  const double secs = seconds_since(t0);
  return {mean <= kSimilarityMax && secs < kGridBudgetS,
          "mean |success(nkf) - success(cp)| " + fmt("%.4f", mean) + ", worst cell " + fmt("%.2f", worst) +
              ", " + fmt("%.1f", secs) + " s"};
}

Outcome runtime_complementarity() {
  bench::CrossoverConfig cfg;
  cfg.n = 256;
  cfg.s = 5;
  cfg.deltas = {0.3, 0.6, 0.9};
  cfg.solvers = {"nkf", "cp"};
  cfg.repeats = 5;
  cfg.seed_base = 3;
  const auto rows = bench::time_crossover(cfg);
  auto at = [&](double delta, const std::string& solver) -> double {
    for (const auto& r : rows)
      if (r.delta == delta && r.solver == solver) return r.median_ms;
    return NAN;
  };
  const double n3 = at(0.3, "nkf"), n9 = at(0.9, "nkf"), c3 = at(0.3, "cp"), c9 = at(0.9, "cp");
  return {n9 < n3 && c9 > c3, "median ms nkf " + fmt("%.1f", n3) + " -> " + fmt("%.1f", n9) + ", cp " +
                                  fmt("%.1f", c3) + " -> " + fmt("%.1f", c9) + " (delta 0.3 -> 0.9)"};
}

Outcome metric_identities() {
  using namespace metrics;
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* what) {
    if (!ok) failed.push_back(what);
  };
  check(std::abs(image_entropy(ComplexMatrix::Constant(2, 2, 1.0)) - std::log(4.0)) <= kIdentityTol, "ie-uniform");
  ComplexMatrix single = ComplexMatrix::Zero(4, 4);
  single(2, 1) = Complex(0.3, -2);
  check(image_entropy(single) == 0.0, "ie-single");
  check(image_contrast(ComplexMatrix::Constant(3, 5, Complex(1, -1))) == 0.0, "ic-constant");
  ComplexMatrix tc(1, 4);
  tc << 2, Complex(0, -2), 1, Complex(0, 1);
  check(std::abs(tcr_db(tc, {0, 1}, {2, 3}) - 6.0206) <= kTcrTol, "tcr");
  const ComplexVector a = oracle::random_vector(9, 1);
  check(rrmse(a, a) == 0.0, "rrmse-identical");

  rng::Xoshiro256 g(5);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix img = oracle::random_matrix(8, 8, 100 + t);
    const Complex alpha = std::polar(std::exp(6.0 * g.uniform() - 3.0), 6.283 * g.uniform());
    const ComplexMatrix s = alpha * img;
    const auto [tgt, clu] = split_region(8, 8, Rect{2, 6, 1, 7});
    worst = std::max(worst, std::abs(image_contrast(s) - image_contrast(img)) / image_contrast(img));
    worst = std::max(worst, std::abs(tcr_db(s, tgt, clu) - tcr_db(img, tgt, clu)));
    worst = std::max(worst, std::abs(image_entropy(s) - image_entropy(img)));
    ComplexVector at = oracle::random_vector(6, 300 + t), ac = oracle::random_vector(6, 400 + t);
    ComplexVector rot = ac;
    for (Index k = 0; k < 6; ++k) rot(k) *= std::polar(1.0, 6.283 * g.uniform());
    worst = std::max(worst, std::abs(rrmse(at, rot) - rrmse(at, ac)));
  }
  check(worst <= kInvarianceTol, "invariance");
  std::string detail = "invariance worst " + fmt("%.2e", worst);
  for (const auto& f : failed) detail += ", failed " + f;
  return {failed.empty(), detail};
}

Outcome scene_ordering() {
  bench::SceneExperimentConfig cfg;
  cfg.scene.n_r = cfg.scene.n_a = 32;
  cfg.scene.n_scatterers = 40;
  cfg.keep_fraction = 0.25;
  cfg.solvers = {"nkf", "omp"};
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto res = bench::run_scene_experiment(cfg);
  using IM = metrics::ImageMetrics;
  const double tcr_nkf = res.median("nkf", &IM::tcr_db), tcr_omp = res.median("omp", &IM::tcr_db);
  const double ie_nkf = res.median("nkf", &IM::ie), ie_omp = res.median("omp", &IM::ie);
  return {tcr_nkf >= tcr_omp && ie_nkf <= ie_omp,
          "median TCR nkf " + metrics::format_double(std::round(tcr_nkf * 100) / 100) + " dB vs omp " +
              metrics::format_double(std::round(tcr_omp * 100) / 100) + " dB, median IE nkf " + fmt("%.5f", ie_nkf) +
              " vs omp " + fmt("%.5f", ie_omp)};
}

Outcome acceleration_benefit() {
  nkf::NkfConfig geo;
  geo.schedule.mode = schedule::Mode::Geometric;
  const nkf::NkfConfig acc;
  std::vector<double> geo_iters, acc_iters;
  for (int seed = 0; seed < 20; ++seed) {
    const auto p = problem_of(oracle::gaussian_instance(64, 128, 5, 7000 + seed));
    const auto rg = nkf::solve(p, geo);
    const double band = (1.0 + kAccelBand) * l1_norm(rg.x_hat);
    const auto ra = nkf::solve(p, acc);
    int reach = acc.max_iter + 1;
    for (size_t k = 0; k < ra.l1_trace.size(); ++k)
      if (ra.l1_trace[k] <= band) {
        reach = static_cast<int>(k);
        break;
      }
    geo_iters.push_back(rg.iterations);
    acc_iters.push_back(reach);
  }
  const double mg = bench::median(geo_iters), ma = bench::median(acc_iters);
  return {ma <= mg, "median iterations accelerated-to-band " + fmt("%.1f", ma) + " vs geometric " + fmt("%.1f", mg)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome grid_determinism() {
  const fs::path base = fs::temp_directory_path() / "nskf_acceptance_det";
  fs::remove_all(base);
  const std::string args = " dt-grid --n 32 --steps 4 --trials 2 --solvers nkf,cp,omp --seed 17 --out ";
  int rc = 0;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(CSBENCH_PATH) + args + (base / run).string() + " >/dev/null 2>&1";
    rc |= std::system(cmd.c_str());
  }
  const std::string a = slurp(base / "a" / "grid.csv"), b = slurp(base / "b" / "grid.csv");
  const bool same = rc == 0 && !a.empty() && a == b;
  fs::remove_all(base);
  return {same, same ? std::to_string(a.size()) + " identical bytes" : "outputs differ or run failed"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "factorization suite", factorization_suite},
      {2, "feasibility invariance", feasibility_invariance},
      {3, "brute-force oracle equivalence", oracle_equivalence},
      {4, "easy-regime recovery", easy_regime_recovery},
      {5, "phase-transition similarity", transition_similarity},
      {6, "runtime complementarity", runtime_complementarity},
      {7, "metric identities", metric_identities},
      {8, "synthetic-scene ordering", scene_ordering},
      {9, "acceleration benefit", acceleration_benefit},
      {10, "grid determinism", grid_determinism},
  };
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %2d  %-32s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
