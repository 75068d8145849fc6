#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "darkcav/figures.hpp"
#include "darkcav/sweep.hpp"

using namespace darkcav;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

double meta_double(const FigureDataset& ds, std::string_view key) {
  const auto v = ds.meta(key);
  if (!v) throw std::runtime_error("missing metadata " + std::string(key));
  return std::strtod(v->c_str(), nullptr);
}

const FigureDataset& figure4() {
  static const FigureDataset ds = run_figure("4");
  return ds;
}

RunConfig d00_sweep() {
  RunConfig c = figure4_configs()[0].second;
  c.mode = Mode::Sweep;
  return c;
}

}  // namespace

TEST(Figure, UnknownId) {
  for (const char* id : {"", "5", "1e", "3c", "4a", "1A"})
    EXPECT_EQ(code_of([&] { run_figure(id); }), ErrorCode::UnknownFigure) << id;
}

TEST(Figure, EveryIdIsPinned) {
  for (const auto& id : figure_ids()) {
    if (id == "4") continue;
    const auto c = figure_config(id);
    EXPECT_EQ(c.params.omega, 50.0) << id;
    EXPECT_EQ(c.params.delta, 0.0) << id;
    EXPECT_EQ(c.tol, 1e-9) << id;
  }
  EXPECT_TRUE(figure_config("1a").flag.rna);
  EXPECT_FALSE(figure_config("2b").flag.rna);
  EXPECT_EQ(figure_config("2d").params.kappa, 20.0);
  EXPECT_EQ(figure_config("3b").params.kappa, 20.0);
}

TEST(Figure, OneAWidthGrowsLinearly) {
  const auto ds = run_figure("1a");
  EXPECT_EQ(ds.meta("atoms"), "1");
  EXPECT_EQ(ds.meta("model"), "rna");
  EXPECT_EQ(ds.meta("truncation_warning"), "0");
  EXPECT_EQ(ds.meta("version"), std::string(software_version));
  ASSERT_TRUE(ds.meta("tol") && ds.meta("mmax") && ds.meta("kappa") && ds.meta("omega"));

  const auto [tau, width] = ds.series("width");
  ASSERT_GT(tau.size(), 10u);
  for (std::size_t i = 1; i < width.size(); ++i) EXPECT_GT(width[i], width[i - 1]);
  const auto fit = linear_fit(tau, width, tau.front(), tau.back());
  EXPECT_GT(fit.r2, 0.99);
  EXPECT_NEAR(fit.slope, std::sqrt(2.0) * 50, 0.05);

  // momentum distribution sums to the survival probability at every sample
  const auto [ts, surv] = ds.series("survival");
  std::vector<double> sum(ts.size(), 0.0);
  std::size_t i = 0;
  double last = -1;
  for (const auto& r : ds.rows)
    if (r.series == "P") {
      if (r.tau != last && last >= 0) ++i;
      last = r.tau;
      sum[i] += r.value;
    }
  for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_NEAR(sum[k], surv[k], 1e-9);

  const auto csv = ds.csv();
  EXPECT_NE(csv.find("\nseries,tau,index,value\n"), std::string::npos);
  EXPECT_EQ(csv.rfind("# figure=1a\n", 0), 0u);
}

TEST(Figure, ThreeAPlateaus) {
  const auto ds = run_figure("3a");
  const auto [tau, c1] = ds.series("curve1");
  const auto c2 = ds.series("curve2").second;
  const auto c3 = ds.series("curve3").second;
  ASSERT_EQ(tau.back(), 4.0);
  const auto p1 = detect_plateau(tau, c1);
  const auto p3 = detect_plateau(tau, c3);
  ASSERT_TRUE(p1 && p3);
  EXPECT_NEAR(p1->value, 0.5, 0.01);
  EXPECT_NEAR(p3->value, 0.25, 0.01);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    EXPECT_LE(c3[i], c2[i] + 1e-15);
    EXPECT_LE(c2[i], c1[i] + 1e-15);
  }
}

TEST(Figure, FourRatesFollowEstimate) {
  const auto& ds = figure4();
  for (const char* s : {"a", "b", "c", "d"}) {
    const auto [tau, p] = ds.series(s);
    EXPECT_EQ(tau.size(), 201u) << s;
    EXPECT_EQ(ds.meta(std::string(s) + "_truncation_warning"), "0") << s;
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LE(p[i], p[i - 1] + 1e-12);
  }
  const double a = meta_double(ds, "rate_a"), b = meta_double(ds, "rate_b");
  const double c = meta_double(ds, "rate_c"), d = meta_double(ds, "rate_d");
  EXPECT_GT(a, 0.0);
  EXPECT_LT(a, c);
  EXPECT_LT(a, b);
  EXPECT_GT(d, a);
  EXPECT_EQ(ds.meta("a_omega"), "100");
  EXPECT_EQ(ds.meta("d_initial"), "d0_2");
}

TEST(Figure, Deterministic) { EXPECT_EQ(run_figure("1c").csv(), run_figure("1c").csv()); }

// ---------------------------------------------------------------------------

TEST(Sweep, EmptyGrid) {
  RunConfig c;
  c.mode = Mode::Sweep;
  EXPECT_EQ(code_of([&] { run_sweep(c); }), ErrorCode::EmptyGrid);
}

TEST(Sweep, GridOrder) {
  RunConfig c;
  c.sweep_omega = {1, 2};
  c.sweep_kappa = {3, 4, 5};
  c.params.delta = 7;
  const auto g = sweep_grid(c);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g[0].omega, 1.0);
  EXPECT_EQ(g[0].kappa, 3.0);
  EXPECT_EQ(g[2].kappa, 5.0);
  EXPECT_EQ(g[3].omega, 2.0);
  for (const auto& p : g) EXPECT_EQ(p.delta, 7.0);
}

TEST(Sweep, RatesDecreaseWithCoupling) {
  auto c = d00_sweep();
  c.sweep_omega = {25, 50, 100};
  c.workers = 3;
  const auto res = run_sweep(c);
  ASSERT_EQ(res.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_TRUE(res.rows[i].ok) << res.rows[i].error;
    EXPECT_EQ(res.rows[i].index, i);
    EXPECT_EQ(res.rows[i].params.omega, c.sweep_omega[i]);
    EXPECT_EQ(res.rows[i].state, "d0_0");
  }
  EXPECT_GT(res.rows[0].rate, res.rows[1].rate);
  EXPECT_GT(res.rows[1].rate, res.rows[2].rate);
}

TEST(Sweep, SingleTupleMatchesFigure4a) {
  auto c = d00_sweep();
  c.sweep_omega = {100};
  const auto res = run_sweep(c);
  ASSERT_EQ(res.rows.size(), 1u);
  ASSERT_TRUE(res.rows[0].ok);
  EXPECT_NEAR(res.rows[0].rate, meta_double(figure4(), "rate_a"), 1e-6);
}

TEST(Sweep, FailuresAreReportedPerRow) {
  auto c = d00_sweep();
  c.mmax = 8;
  c.tau_end = 1.2;
  c.fit_t0 = 0.5;
  c.fit_t1 = 1.2;
  c.sweep_omega = {0, 50, -3};
  c.workers = 2;
  const auto res = run_sweep(c);
  ASSERT_EQ(res.rows.size(), 3u);
  EXPECT_FALSE(res.rows[0].ok);
  EXPECT_NE(res.rows[0].error.find("NonPositiveCoupling"), std::string::npos);
  EXPECT_TRUE(res.rows[1].ok);
  EXPECT_FALSE(res.rows[2].ok);
  const auto csv = res.csv();
  EXPECT_NE(csv.find(",failed,"), std::string::npos);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const auto columns = std::count(line.begin(), line.end(), ',');
  while (std::getline(in, line)) EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns) << line;
}

TEST(Sweep, OutputIndependentOfWorkerCount) {
  auto c = d00_sweep();
  c.mmax = 8;
  c.tau_end = 1.2;
  c.fit_t0 = 0.5;
  c.fit_t1 = 1.2;
  c.sweep_omega = {20, 30};
  c.sweep_kappa = {10, 20};
  c.workers = 1;
  const auto serial = run_sweep(c).csv();
  c.workers = 4;
  EXPECT_EQ(run_sweep(c).csv(), serial);
}

TEST(Sweep, WorkerCap) {
  ::unsetenv(max_workers_env);
  EXPECT_EQ(effective_workers(8, 10), 8u);
  EXPECT_EQ(effective_workers(8, 3), 3u);
  EXPECT_EQ(effective_workers(0, 3), 1u);
  ::setenv(max_workers_env, "2", 1);
  EXPECT_EQ(effective_workers(8, 10), 2u);
  ::setenv(max_workers_env, "junk", 1);
  EXPECT_EQ(effective_workers(8, 10), 8u);
  ::unsetenv(max_workers_env);
}

// ---------------------------------------------------------------------------

#ifdef DARKCAV_CLI
namespace {

int run_cli(const std::string& args, const std::string& out_file = "") {
  const std::string sink = out_file.empty() ? " > /dev/null" : " > '" + out_file + "'";
  const int status = std::system((std::string(DARKCAV_CLI) + " " + args + sink + " 2> /dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tmp(const std::string& name) { return (fs::path(::testing::TempDir()) / ("cli_" + name)).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("dark --mmax 6"), 0);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("simulate --bogus 1"), 2);
  EXPECT_EQ(run_cli("simulate --omega -1"), 2);
  EXPECT_EQ(run_cli("simulate --omega abc"), 2);
  EXPECT_EQ(run_cli("simulate --format bin"), 2);
  EXPECT_EQ(run_cli("simulate --config /nonexistent-dir/run.cfg"), 2);
  EXPECT_EQ(run_cli("figure --id 7"), 2);
  EXPECT_EQ(run_cli("sweep"), 2);
  EXPECT_EQ(run_cli("dark --mmax 2"), 2);
  // periodic G=128 with dtau=1e-3 violates the split-step stability bound
  EXPECT_EQ(run_cli("grid --initial D1 --grid 128 --dtau 1e-3 --tmax 0.01"), 3);
}

TEST(Cli, ConfigFileAndFlagsAreDeterministic) {
  const auto cfg = tmp("run.cfg");
  const auto saved = tmp("saved.cfg");
  std::ofstream(cfg) << "omega = 20\nkappa = 10\nmmax = 6\ntau_end = 0.5\nsamples = 11\n";
  const auto a = tmp("a.csv"), b = tmp("b.csv"), c = tmp("c.csv");
  ASSERT_EQ(run_cli("simulate --config " + cfg + " --kappa 5 --save-config " + saved, a), 0);
  ASSERT_EQ(run_cli("simulate --config " + saved, b), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto text = slurp(saved);
  EXPECT_NE(text.find("kappa = 5\n"), std::string::npos);
  EXPECT_NE(text.find("omega = 20\n"), std::string::npos);
  ASSERT_EQ(run_cli("simulate --config " + cfg, c), 0);
  EXPECT_NE(slurp(a), slurp(c));
  EXPECT_TRUE(parse_config(text) == parse_config(slurp(saved)));
}

TEST(Cli, WritesEachOutputKind) {
  const auto bin = tmp("f.bin"), table = tmp("t.json"), traj = tmp("tr.bin");
  ASSERT_EQ(run_cli("grid --initial D1 --grid 16 --dtau 1e-3 --tmax 0.05 --format bin --out " + bin), 0);
  EXPECT_EQ(fs::file_size(bin), 16u + 3 * 16 * 16 * 8);
  ASSERT_EQ(run_cli("dark --mmax 6 --format json --out " + table), 0);
  EXPECT_NE(slurp(table).find("\"darkcav.dark_table\""), std::string::npos);
  ASSERT_EQ(run_cli("simulate --atoms 1 --mmax 6 --tmax 0.1 --samples 3 --format bin --out " + traj), 0);
  EXPECT_EQ(import_trajectory_bin<OneAtomState>(traj).size(), 3u);
}
#endif
