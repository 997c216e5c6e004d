#include "hawkesdp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hawkesdp/errors.hpp"
#include "json.hpp"

namespace hawkesdp {

using nlohmann::json;

std::string method_name(Method method) {
  switch (method) {
    case Method::pgd:
      return "pgd";
    case Method::cg:
      return "cg";
    case Method::cls:
      return "cls";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "pgd") return Method::pgd;
  if (name == "cg") return Method::cg;
  if (name == "cls") return Method::cls;
  throw config_error("unknown method \"" + name + "\" (pgd|cg|cls)");
}

int LagRule::resolve(double delta) const {
  if (p.has_value()) {
    if (*p < 1) throw config_error("lag p must be >= 1");
    return *p;
  }
  if (support.has_value()) {
    if (!(*support > 0.0)) throw config_error("lag support must be positive");
    return static_cast<int>(std::ceil(*support / delta - 1e-12));
  }
  throw config_error("lag rule needs either p or support");
}

HawkesModel builtin_model(const std::string& name) {
  if (name == "paper-2d") {
    HawkesModel model;
    model.dim = 2;
    model.baseline = Eigen::Vector2d(0.25, 0.125);
    model.kernels = {
        {KernelSpec::zero(), KernelSpec::box(1.0, 3.0, 0.125)},
        {KernelSpec::box(2.0, 4.0, 0.2), KernelSpec::exponential(0.25, 1.0)}};
    return model;
  }
  if (name == "paper-4d") {
    // 4-variate block model [[H0, H0^T], [H0, H0^T]]: rank <= 2 on the grid.
    const KernelSpec z = KernelSpec::zero();
    const KernelSpec h12 = KernelSpec::box(1.0, 3.0, 0.125);
    const KernelSpec h21 = KernelSpec::box(2.0, 4.0, 0.25);
    const KernelSpec h22 = KernelSpec::exponential(0.2, 1.0);
    HawkesModel model;
    model.dim = 4;
    model.baseline = Eigen::Vector4d::Constant(0.125);
    model.kernels = {{z, h12, z, h21},
                     {h21, h22, h12, h22},
                     {z, h12, z, h21},
                     {h21, h22, h12, h22}};
    return model;
  }
  throw config_error("unknown builtin model \"" + name + "\"");
}

std::vector<std::string> builtin_model_names() { return {"paper-2d", "paper-4d"}; }

HawkesModel resolve_model(const std::string& ref) {
  const auto names = builtin_model_names();
  if (std::find(names.begin(), names.end(), ref) != names.end())
    return builtin_model(ref);
  return read_model_json(ref);
}

double solve_horizon(const HawkesModel& model, double target_events) {
  if (!(target_events > 0.0))
    throw config_error("target event count must be positive");
  const double rate = stationary_mean(model).sum();
  if (!(rate > 0.0))
    throw numerical_error("model has zero stationary rate; cannot size horizon");
  return target_events / rate;
}

void validate_experiment_config(const ExperimentConfig& config) {
  if (config.model.empty()) throw config_error("config needs a model");
  if (config.horizon.has_value() == config.target_events.has_value())
    throw config_error("config needs exactly one of horizon / target_events");
  if (config.horizon && !(*config.horizon > 0.0))
    throw config_error("horizon must be positive");
  if (config.deltas.empty()) throw config_error("config needs at least one delta");
  for (double delta : config.deltas)
    if (!(delta > 0.0)) throw config_error("deltas must be positive");
  if (config.noise_grid.empty())
    throw config_error("config needs a non-empty noise grid");
  for (double s2 : config.noise_grid)
    if (s2 < 0.0) throw config_error("noise grid entries must be >= 0");
  if (config.replicates < 1) throw config_error("replicates must be >= 1");
  if (config.iterations < 1) throw config_error("iterations must be >= 1");
  if (!(config.radius > 0.0)) throw config_error("radius must be positive");
  if (!(config.R > 0.0)) throw config_error("R must be positive");
  if (!(config.privacy_delta > 0.0) || config.privacy_delta >= 1.0)
    throw config_error("privacy_delta must lie in (0, 1)");
}

ExperimentConfig read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error("invalid JSON in " + path + ": " + e.what());
  }

  ExperimentConfig config;
  try {
    config.model = j.at("model").get<std::string>();
    if (j.contains("horizon")) config.horizon = j.at("horizon").get<double>();
    if (j.contains("target_events"))
      config.target_events = j.at("target_events").get<double>();
    config.deltas = j.at("deltas").get<std::vector<double>>();
    const json& lag = j.at("lag");
    if (lag.contains("p")) config.lag.p = lag.at("p").get<int>();
    if (lag.contains("support"))
      config.lag.support = lag.at("support").get<double>();
    config.method = parse_method(j.at("method").get<std::string>());
    config.radius = j.at("radius").get<double>();
    config.noise_grid = j.at("noise_grid").get<std::vector<double>>();
    config.iterations = j.value("iters", 1000);
    config.replicates = j.value("replicates", 1);
    config.master_seed = j.value("seed", std::uint64_t{0});
    config.R = j.value("R", 1.0);
    config.privacy_delta = j.value("privacy_delta", 1e-6);
    config.output_dir = j.value("output_dir", std::string("."));
    if (j.contains("step_constant")) {
      const std::string c = j.at("step_constant").get<std::string>();
      if (c == "appendix")
        config.step_constant = StepConstant::appendix;
      else if (c == "theorem")
        config.step_constant = StepConstant::theorem;
      else
        throw config_error("step_constant must be appendix|theorem");
    }
    if (j.contains("cg_schedule")) {
      const std::string c = j.at("cg_schedule").get<std::string>();
      if (c == "paper")
        config.cg_schedule = CgSchedule::paper_fixed;
      else if (c == "classical")
        config.cg_schedule = CgSchedule::classical;
      else
        throw config_error("cg_schedule must be paper|classical");
    }
    if (j.contains("interpolation")) {
      const std::string c = j.at("interpolation").get<std::string>();
      if (c == "step")
        config.interpolation = Interpolation::step;
      else if (c == "linear")
        config.interpolation = Interpolation::linear;
      else
        throw config_error("interpolation must be step|linear");
    }
  } catch (const json::exception& e) {
    throw config_error("bad config " + path + ": " + e.what());
  }
  validate_experiment_config(config);
  return config;
}

CellOutcome run_cell(const ExperimentConfig& config, const HawkesModel& model,
                     int delta_index, int noise_index, int replicate) {
  const auto start = std::chrono::steady_clock::now();
  const double delta = config.deltas.at(delta_index);
  const double sigma2 = config.noise_grid.at(noise_index);
  const int p = config.lag.resolve(delta);

  CellOutcome outcome;
  ResultRow& row = outcome.row;
  row.replicate = replicate;
  row.seed = derive_seed(config.master_seed,
                         {static_cast<std::uint64_t>(delta_index),
                          static_cast<std::uint64_t>(noise_index),
                          static_cast<std::uint64_t>(replicate)});
  row.delta = delta;
  row.p = p;
  row.sigma2 = sigma2;
  row.method = config.method;

  Rng rng(row.seed);
  const double horizon = config.horizon
                             ? *config.horizon
                             : solve_horizon(model, *config.target_events);
  const EventStream stream = simulate(model, horizon, rng);
  const BinSeries bins = bin_counts(stream, BinConfig{delta, horizon, p});
  const DesignMatrices design = build_design(bins, DenseStorage::never);

  ParamMatrix theta;
  switch (config.method) {
    case Method::cls: {
      theta = cls_closed_form(design);
      row.final_loss = loss(theta, design);
      row.epsilon = std::numeric_limits<double>::infinity();
      break;
    }
    case Method::pgd: {
      NoisePlan plan;
      plan.sigma2 = sigma2;
      const FrobeniusBall ball{delta * config.radius};
      PgdOptions options;
      options.R = config.R;
      options.step_constant = config.step_constant;
      const ParamMatrix u0 = ParamMatrix::Zero(design.d, design.gram.rows());
      auto [U, report] =
          dp_pgd(design, ball, plan, config.iterations, u0, rng, options);
      theta = U;
      row.final_loss = report.final_loss;
      row.epsilon =
          epsilon_of_sigma(sigma2, config.iterations, config.privacy_delta,
                           ball.radius, config.R, NoiseSource::pgd_theorem1);
      break;
    }
    case Method::cg: {
      NoisePlan plan;
      plan.sigma2 = sigma2;
      const NuclearBall ball{delta * config.radius};
      CgOptions options;
      options.schedule = config.cg_schedule;
      const ParamMatrix u0 = ParamMatrix::Zero(design.d, design.gram.rows());
      auto [U, report] =
          dp_cg(design, ball, plan, config.iterations, u0, rng, options);
      theta = U;
      row.final_loss = report.final_loss;
      row.epsilon =
          epsilon_of_sigma(sigma2, config.iterations, config.privacy_delta,
                           ball.radius, config.R, NoiseSource::cg_theorem3);
      break;
    }
  }

  outcome.estimate = rescale(theta, delta, config.interpolation);
  outcome.truth = discretize_truth(model, delta, p);
  outcome.truth.interpolation = config.interpolation;
  row.relative_error = relative_error(outcome.estimate, outcome.truth);
  row.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return outcome;
}

void write_result_header(std::ostream& csv) {
  csv << "replicate,seed,delta,p,sigma2,epsilon,method,relative_error,"
         "final_loss,status\n";
}

void write_result_row(std::ostream& csv, const ResultRow& row) {
  std::string status = row.status;
  std::replace(status.begin(), status.end(), ',', ';');
  std::replace(status.begin(), status.end(), '\n', ' ');
  csv << row.replicate << "," << row.seed << "," << format_double(row.delta)
      << "," << row.p << "," << format_double(row.sigma2) << ","
      << format_double(row.epsilon) << "," << method_name(row.method) << ","
      << format_double(row.relative_error) << ","
      << format_double(row.final_loss) << "," << status << "\n";
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config,
                                 std::ostream& csv, std::ostream* log,
                                 int threads) {
  validate_experiment_config(config);
  const HawkesModel model = resolve_model(config.model);

  struct Cell {
    int delta_index;
    int noise_index;
    int replicate;
  };
  std::vector<Cell> cells;
  for (int di = 0; di < static_cast<int>(config.deltas.size()); ++di)
    for (int ni = 0; ni < static_cast<int>(config.noise_grid.size()); ++ni)
      for (int rep = 0; rep < config.replicates; ++rep)
        cells.push_back({di, ni, rep});

  auto evaluate = [&](const Cell& cell) -> ResultRow {
    try {
      return run_cell(config, model, cell.delta_index, cell.noise_index,
                      cell.replicate)
          .row;
    } catch (const std::exception& e) {
      // Record the failure and keep sweeping.
      ResultRow row;
      row.replicate = cell.replicate;
      row.seed = derive_seed(config.master_seed,
                             {static_cast<std::uint64_t>(cell.delta_index),
                              static_cast<std::uint64_t>(cell.noise_index),
                              static_cast<std::uint64_t>(cell.replicate)});
      row.delta = config.deltas[cell.delta_index];
      row.p = 0;
      row.sigma2 = config.noise_grid[cell.noise_index];
      row.epsilon = std::numeric_limits<double>::quiet_NaN();
      row.method = config.method;
      row.status = std::string("error: ") + e.what();
      return row;
    }
  };

  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, cells.size()));

  write_result_header(csv);
  std::vector<ResultRow> rows;
  rows.reserve(cells.size());
  // Chunks of one cell per worker keep output incremental and in grid order
  // no matter how the work is scheduled.
  for (std::size_t base = 0; base < cells.size(); base += workers) {
    const std::size_t end = std::min(cells.size(), base + workers);
    std::vector<std::future<ResultRow>> chunk;
    for (std::size_t i = base + 1; i < end; ++i)
      chunk.push_back(std::async(std::launch::async, evaluate, cells[i]));
    rows.push_back(evaluate(cells[base]));
    for (auto& f : chunk) rows.push_back(f.get());
    for (std::size_t i = base; i < end; ++i) {
      write_result_row(csv, rows[i]);
      if (log) {
        *log << "cell delta=" << format_double(rows[i].delta)
             << " sigma2=" << format_double(rows[i].sigma2)
             << " replicate=" << rows[i].replicate << " "
             << format_double(rows[i].wall_clock_s) << "s " << rows[i].status
             << "\n";
      }
    }
    csv.flush();
  }
  return rows;
}

void kernel_overlay(const ExperimentConfig& config, int i, int j,
                    double sigma2, std::ostream& csv) {
  validate_experiment_config(config);
  const HawkesModel model = resolve_model(config.model);
  if (i < 0 || i >= model.dim || j < 0 || j >= model.dim)
    throw config_error("overlay kernel entry out of range");

  // A single run: replicate 0 at the first delta, at the requested noise
  // level (appended to the grid when not already present).
  ExperimentConfig single = config;
  single.deltas = {config.deltas.front()};
  auto it = std::find(single.noise_grid.begin(), single.noise_grid.end(), sigma2);
  int noise_index;
  if (it == single.noise_grid.end()) {
    single.noise_grid.push_back(sigma2);
    noise_index = static_cast<int>(single.noise_grid.size()) - 1;
  } else {
    noise_index = static_cast<int>(it - single.noise_grid.begin());
  }
  const CellOutcome outcome = run_cell(single, model, 0, noise_index, 0);

  const int p = outcome.estimate.lag();
  const double delta = outcome.estimate.delta_bin;
  const double support = p * delta;
  csv << "t,h_true,h_hat\n";
  for (int q = 1; q <= 200; ++q) {
    const double t = support * q / 200.0;
    csv << format_double(t) << ","
        << format_double(eval_kernel(model.kernel(i, j), t)) << ","
        << format_double(eval_estimate(outcome.estimate, i, j, t)) << "\n";
  }
}

}  // namespace hawkesdp
