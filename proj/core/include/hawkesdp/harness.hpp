#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hawkesdp/dp.hpp"
#include "hawkesdp/io.hpp"
#include "hawkesdp/recovery.hpp"
#include "hawkesdp/simulate.hpp"

namespace hawkesdp {

enum class Method { pgd, cg, cls };

std::string method_name(Method method);
Method parse_method(const std::string& name);

// Maximal lag: explicit p, or ceil(support / delta).
struct LagRule {
  std::optional<int> p;
  std::optional<double> support;

  int resolve(double delta) const;
};

struct ExperimentConfig {
  std::string model;  // builtin name or path to a model JSON file
  std::optional<double> horizon;
  std::optional<double> target_events;  // exactly one of the two is required
  std::vector<double> deltas;
  LagRule lag;
  Method method = Method::cls;
  double radius = 1.0;  // Frobenius bound B for pgd, nuclear bound r for cg
  std::vector<double> noise_grid{0.0};
  int iterations = 1000;
  int replicates = 1;
  std::uint64_t master_seed = 0;
  double R = 1.0;           // user-supplied data-scale constant
  double privacy_delta = 1e-6;  // delta used to translate sigma^2 into epsilon
  std::string output_dir = ".";
  StepConstant step_constant = StepConstant::appendix;
  CgSchedule cg_schedule = CgSchedule::paper_fixed;
  Interpolation interpolation = Interpolation::step;
};

ExperimentConfig read_config_json(const std::string& path);
void validate_experiment_config(const ExperimentConfig& config);

struct ResultRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  int p = 0;
  double sigma2 = 0.0;
  double epsilon = std::numeric_limits<double>::infinity();
  Method method = Method::cls;
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  // Measured but kept out of the CSV so that sweep output is a pure function
  // of (config, master seed).
  double wall_clock_s = 0.0;
  std::string status = "ok";
};

struct CellOutcome {
  ResultRow row;
  KernelEstimate estimate;
  KernelEstimate truth;
};

// "paper-2d" and "paper-4d" synthetic models.
HawkesModel builtin_model(const std::string& name);
std::vector<std::string> builtin_model_names();

// Builtin name, else a model JSON path.
HawkesModel resolve_model(const std::string& ref);

// Horizon with expected total event count equal to target, from the
// stationary mean rate.
double solve_horizon(const HawkesModel& model, double target_events);

// One grid cell: simulate, bin, estimate, recover. The cell owns the RNG
// stream derived from (master seed, delta index, noise index, replicate).
CellOutcome run_cell(const ExperimentConfig& config, const HawkesModel& model,
                     int delta_index, int noise_index, int replicate);

void write_result_header(std::ostream& csv);
void write_result_row(std::ostream& csv, const ResultRow& row);

// Full factorial over deltas x noise grid x replicates; rows stream to `csv`
// in grid order. A failed cell is recorded in its row and the sweep
// continues. Cells may be evaluated on up to `threads` workers (0 = all
// hardware threads); the output bytes do not depend on the thread count.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config,
                                 std::ostream& csv,
                                 std::ostream* log = nullptr, int threads = 0);

// 200-point overlay of true vs estimated kernel entry (i, j) over the
// support, from a single replicate-0 run at the first delta.
void kernel_overlay(const ExperimentConfig& config, int i, int j,
                    double sigma2, std::ostream& csv);

}  // namespace hawkesdp
