#include <Eigen/SVD>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hawkesdp/errors.hpp"
#include "hawkesdp/harness.hpp"

using namespace hawkesdp;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ExperimentConfig small_sweep_config() {
  ExperimentConfig config;
  config.model = "paper-2d";
  config.target_events = 300.0;
  config.deltas = {0.5};
  config.lag.support = 4.0;
  config.method = Method::pgd;
  config.radius = 0.2;
  config.noise_grid = {0.0, 0.01};
  config.iterations = 50;
  config.replicates = 2;
  config.master_seed = 11;
  config.R = 4.0;
  config.privacy_delta = 0.05;
  return config;
}

}  // namespace

TEST_SUITE_BEGIN("harness_io");

TEST_CASE("builtin models") {
  SUBCASE("paper-2d branching integrals") {
    const Eigen::MatrixXd k = branching_matrix(builtin_model("paper-2d"));
    Eigen::MatrixXd expected(2, 2);
    expected << 0.0, 0.25, 0.4, 0.25;
    CHECK(k.isApprox(expected, 1e-12));
  }
  SUBCASE("both models pass the stationarity gate") {
    CHECK(is_stationary(builtin_model("paper-2d")));
    CHECK(is_stationary(builtin_model("paper-4d")));
  }
  SUBCASE("paper-4d truth is rank 2 at every grid point") {
    const HawkesModel model = builtin_model("paper-4d");
    const KernelEstimate truth = discretize_truth(model, 0.05, 80);
    for (const Eigen::MatrixXd& block : truth.blocks) {
      const Eigen::VectorXd sv =
          Eigen::JacobiSVD<Eigen::MatrixXd>(block).singularValues();
      CHECK(sv(2) <= 1e-12 * (1.0 + sv(0)));
      CHECK(sv(3) <= 1e-12 * (1.0 + sv(0)));
    }
  }
  SUBCASE("unknown names are rejected") {
    CHECK_THROWS_AS(builtin_model("paper-5d"), config_error);
  }
}

TEST_CASE("lag rule") {
  LagRule explicit_p;
  explicit_p.p = 8;
  CHECK(explicit_p.resolve(0.01) == 8);
  LagRule by_support;
  by_support.support = 4.0;
  CHECK(by_support.resolve(0.5) == 8);
  CHECK(by_support.resolve(0.01) == 400);
  CHECK(by_support.resolve(0.03) == 134);
  CHECK_THROWS_AS(LagRule{}.resolve(0.5), config_error);
}

TEST_CASE("solve_horizon hits the expected count") {
  const HawkesModel model = builtin_model("paper-2d");
  const double horizon = solve_horizon(model, 1000.0);
  CHECK(stationary_mean(model).sum() * horizon == doctest::Approx(1000.0));
}

TEST_CASE("a degenerate sweep equals the direct pipeline") {
  ExperimentConfig config;
  config.model = "paper-2d";
  config.target_events = 400.0;
  config.deltas = {0.5};
  config.lag.support = 4.0;
  config.method = Method::cls;
  config.radius = 1.0;
  config.noise_grid = {0.0};
  config.replicates = 1;
  config.master_seed = 3;
  const HawkesModel model = builtin_model("paper-2d");
  const CellOutcome cell = run_cell(config, model, 0, 0, 0);

  // the same pipeline, assembled by hand from the module calls
  Rng rng(derive_seed(3, {0, 0, 0}));
  const double horizon = solve_horizon(model, 400.0);
  const EventStream stream = simulate(model, horizon, rng);
  const DesignMatrices design =
      build_design(bin_counts(stream, BinConfig{0.5, horizon, 8}));
  const KernelEstimate est = rescale(cls_closed_form(design), 0.5);
  const KernelEstimate truth = discretize_truth(model, 0.5, 8);
  CHECK(cell.row.relative_error == relative_error(est, truth));
  CHECK(std::isinf(cell.row.epsilon));
}

TEST_CASE("sweeps are byte-reproducible and audit-consistent") {
  const ExperimentConfig config = small_sweep_config();
  std::ostringstream a, b;
  const std::vector<ResultRow> rows = run_sweep(config, a);
  run_sweep(config, b);
  CHECK(a.str() == b.str());
  REQUIRE(rows.size() == 4);  // 1 delta x 2 noise x 2 replicates

  for (const ResultRow& row : rows) {
    CHECK(row.status == "ok");
    // epsilon column round-trips through the accountant
    const double expected = epsilon_of_sigma(
        row.sigma2, config.iterations, config.privacy_delta,
        row.delta * config.radius, config.R, NoiseSource::pgd_theorem1);
    if (std::isinf(expected))
      CHECK(std::isinf(row.epsilon));
    else
      CHECK(row.epsilon == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::isfinite(row.relative_error));
  }

  // header and one line per row, fixed column order
  std::istringstream csv(a.str());
  std::string line;
  std::getline(csv, line);
  CHECK(line ==
        "replicate,seed,delta,p,sigma2,epsilon,method,relative_error,"
        "final_loss,status");
}

TEST_CASE("a failing cell is recorded and the sweep continues") {
  ExperimentConfig config = small_sweep_config();
  config.method = Method::cls;
  config.noise_grid = {0.0};
  config.deltas = {0.5, 400.0};  // second delta leaves no usable bins
  std::ostringstream csv;
  const std::vector<ResultRow> rows = run_sweep(config, csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].status == "ok");
  CHECK(rows[2].status.rfind("error:", 0) == 0);
  CHECK(csv.str().find("error:") != std::string::npos);
}

TEST_CASE("kernel overlay emits a dense strictly increasing grid") {
  ExperimentConfig config = small_sweep_config();
  config.method = Method::cls;
  config.noise_grid = {0.0};
  std::ostringstream csv;
  kernel_overlay(config, 0, 0, 0.0, csv);

  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,h_true,h_hat");
  int count = 0;
  double prev_t = 0.0;
  while (std::getline(in, line)) {
    double t = 0.0, h_true = -1.0, h_hat = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &h_true, &h_hat) == 3);
    CHECK(t > prev_t);
    CHECK(h_true == 0.0);  // h_{1,1} of paper-2d is the zero kernel
    prev_t = t;
    ++count;
  }
  CHECK(count == 200);
}

TEST_CASE("model json round trip") {
  const std::string path = temp_path("hawkesdp_model_test.json");
  const HawkesModel model = builtin_model("paper-2d");
  write_model_json(path, model);
  const HawkesModel loaded = read_model_json(path);
  CHECK(loaded.dim == 2);
  CHECK(loaded.baseline == model.baseline);
  for (double t : {0.5, 1.0, 2.5, 3.7})
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(eval_kernel(loaded.kernel(i, j), t) ==
              eval_kernel(model.kernel(i, j), t));
  std::remove(path.c_str());
}

TEST_CASE("events csv round trip") {
  const std::string path = temp_path("hawkesdp_events_test.csv");
  EventStream stream;
  stream.horizon = 3.0;
  stream.dim = 2;
  stream.events = {{0, 0.25}, {1, 0.25000000000000011}, {0, 2.9999999999}};
  write_events_csv(path, stream);
  const EventStream loaded = read_events_csv(path, 3.0);
  REQUIRE(loaded.events.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(loaded.events[i].dim == stream.events[i].dim);
    CHECK(loaded.events[i].time == stream.events[i].time);  // 17 digits
  }
  CHECK(loaded.dim == 2);
  std::remove(path.c_str());
}

TEST_CASE("bins csv round trip and validation") {
  const std::string path = temp_path("hawkesdp_bins_test.csv");
  CountMatrix counts(3, 2);
  counts << 0, 1, 2, 3, 4, 5;
  write_bins_csv(path, counts);
  CHECK(read_bins_csv(path) == counts);

  std::ofstream bad(path);
  bad << "1,2\n3,-1\n";
  bad.close();
  CHECK_THROWS_AS(read_bins_csv(path), config_error);
  std::remove(path.c_str());
}

TEST_CASE("estimate json round trip") {
  const std::string path = temp_path("hawkesdp_estimate_test.json");
  EstimateRecord rec;
  rec.theta = ParamMatrix::Random(2, 5);
  rec.estimate = rescale(rec.theta, 0.5);
  rec.sigma2 = 0.25;
  rec.epsilon = std::numeric_limits<double>::infinity();
  rec.iterations = 100;
  rec.seed = 0xdeadbeefULL;
  rec.method = "pgd";
  write_estimate_json(path, rec);
  const EstimateRecord loaded = read_estimate_json(path);
  CHECK(loaded.theta == rec.theta);
  CHECK(loaded.estimate.delta_bin == 0.5);
  CHECK(loaded.estimate.lag() == 2);
  CHECK(std::isinf(loaded.epsilon));
  CHECK(loaded.seed == rec.seed);
  CHECK(loaded.method == "pgd");
  std::remove(path.c_str());
}

TEST_CASE("format_double round-trips doubles") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const double v = std::exp(20.0 * (rng.uniform() - 0.5)) *
                     (rng.uniform() < 0.5 ? -1.0 : 1.0);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("config json") {
  const std::string path = temp_path("hawkesdp_config_test.json");
  std::ofstream out(path);
  out << R"({
    "model": "paper-2d",
    "target_events": 500,
    "deltas": [0.5, 0.01],
    "lag": {"support": 4.0},
    "method": "pgd",
    "radius": 0.2,
    "noise_grid": [0, 0.01, 10],
    "iters": 1000,
    "replicates": 10,
    "seed": 42,
    "R": 4.0,
    "privacy_delta": 0.05,
    "output_dir": "out",
    "step_constant": "appendix",
    "cg_schedule": "paper",
    "interpolation": "step"
  })";
  out.close();
  const ExperimentConfig config = read_config_json(path);
  CHECK(config.model == "paper-2d");
  CHECK(config.deltas.size() == 2);
  CHECK(config.lag.resolve(0.5) == 8);
  CHECK(config.method == Method::pgd);
  CHECK(config.master_seed == 42);
  CHECK(config.privacy_delta == 0.05);

  std::ofstream bad(path);
  bad << R"({"model": "paper-2d", "deltas": [0.5], "lag": {"p": 8},
             "method": "newton", "radius": 1, "noise_grid": [0],
             "target_events": 100})";
  bad.close();
  CHECK_THROWS_AS(read_config_json(path), config_error);
  std::remove(path.c_str());
}

TEST_SUITE_END();
