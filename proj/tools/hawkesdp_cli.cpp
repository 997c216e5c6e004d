// Command line front end: simulate | discretize | estimate | accountant |
// recover | sweep | overlay. Exit codes: 0 success, 1 bad input, 2 numerical
// failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hawkesdp/errors.hpp"
#include "hawkesdp/harness.hpp"

namespace {

using namespace hawkesdp;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path);
  return out;
}

struct SimulateArgs {
  std::string model;
  std::optional<double> horizon;
  std::optional<double> target_events;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  const HawkesModel model = resolve_model(args.model);
  if (args.horizon.has_value() == args.target_events.has_value())
    throw config_error("give exactly one of --horizon / --target-events");
  const double horizon = args.horizon
                             ? *args.horizon
                             : solve_horizon(model, *args.target_events);
  Rng rng(args.seed);
  const EventStream stream = simulate(model, horizon, rng);
  write_events_csv(args.out, stream);
  std::cerr << "simulated " << stream.events.size() << " events on (0, "
            << format_double(horizon) << "]\n";
  return 0;
}

struct DiscretizeArgs {
  double delta = 0.0;
  int lag = 1;
  std::optional<double> horizon;
  std::string input;
  std::string output;
};

int cmd_discretize(const DiscretizeArgs& args) {
  const EventStream stream = read_events_csv(args.input, args.horizon);
  const double horizon = args.horizon.value_or(stream.horizon);
  const BinSeries bins =
      bin_counts(stream, BinConfig{args.delta, horizon, args.lag});
  write_bins_csv(args.output, bins.counts);
  std::cerr << "wrote " << bins.bins() << " bins x " << bins.dim() << " dims\n";
  return 0;
}

struct EstimateArgs {
  std::string method = "cls";
  std::optional<double> epsilon;
  std::optional<double> sigma2;
  double delta = 1e-6;
  bool delta_given = false;
  int iters = 1000;
  double radius = 1.0;
  double R = 1.0;
  std::uint64_t seed = 0;
  std::string bins;
  double delta_bin = 0.0;
  int lag = 1;
  std::string step_constant = "appendix";
  std::string cg_schedule = "paper";
  std::string out;
};

int cmd_estimate(const EstimateArgs& args) {
  const Method method = parse_method(args.method);
  const CountMatrix counts = read_bins_csv(args.bins);
  BinSeries bins;
  bins.counts = counts;
  bins.config = BinConfig{args.delta_bin,
                          static_cast<double>(counts.rows()) * args.delta_bin,
                          args.lag};
  const DesignMatrices design = build_design(bins, DenseStorage::never);

  EstimateRecord rec;
  rec.method = args.method;
  rec.seed = args.seed;

  if (method == Method::cls) {
    rec.theta = cls_closed_form(design);
    rec.iterations = 0;
  } else {
    if (args.epsilon.has_value() == args.sigma2.has_value())
      throw config_error("give exactly one of --epsilon / --sigma2");
    const double rho = args.delta_bin * args.radius;
    NoisePlan plan;
    if (args.epsilon) {
      const PrivacyBudget budget{*args.epsilon, args.delta, args.iters};
      for (const std::string& w : budget_warnings(budget))
        std::cerr << "warning: " << w << "\n";
      plan = method == Method::pgd ? calibrate_pgd(budget, rho, args.R)
                                   : calibrate_cg(budget, rho, args.R);
      std::cerr << "calibrated sigma^2 = " << format_double(plan.sigma2)
                << " (data-independent R = " << format_double(args.R) << ")\n";
    } else {
      plan.sigma2 = *args.sigma2;
      plan.source = method == Method::pgd ? NoiseSource::pgd_theorem1
                                          : NoiseSource::cg_theorem3;
      if (args.delta_given) {
        plan.claimed_delta = args.delta;
        plan.claimed_epsilon = epsilon_of_sigma(
            plan.sigma2, args.iters, args.delta, rho, args.R, plan.source);
      }
    }

    Rng rng(args.seed);
    const ParamMatrix u0 = ParamMatrix::Zero(design.d, design.gram.rows());
    if (method == Method::pgd) {
      PgdOptions options;
      options.R = args.R;
      options.step_constant = args.step_constant == "theorem"
                                  ? StepConstant::theorem
                                  : StepConstant::appendix;
      auto [U, report] =
          dp_pgd(design, FrobeniusBall{rho}, plan, args.iters, u0, rng, options);
      rec.theta = U;
    } else {
      CgOptions options;
      options.schedule = args.cg_schedule == "classical"
                             ? CgSchedule::classical
                             : CgSchedule::paper_fixed;
      auto [U, report] =
          dp_cg(design, NuclearBall{rho}, plan, args.iters, u0, rng, options);
      rec.theta = U;
    }
    rec.sigma2 = plan.sigma2;
    rec.epsilon = std::isnan(plan.claimed_epsilon)
                      ? std::numeric_limits<double>::infinity()
                      : plan.claimed_epsilon;
    rec.delta = plan.claimed_delta;
    rec.iterations = args.iters;
  }

  rec.estimate = rescale(rec.theta, args.delta_bin);
  write_estimate_json(args.out, rec);
  std::cerr << "wrote " << args.out << "\n";
  return 0;
}

struct AccountantArgs {
  std::string method = "pgd";
  std::optional<double> epsilon;
  std::optional<double> sigma2;
  int iters = 1;
  double delta = 1e-6;
  double radius = 1.0;
  double R = 1.0;
};

int cmd_accountant(const AccountantArgs& args) {
  const Method method = parse_method(args.method);
  if (method == Method::cls) throw config_error("accountant needs pgd or cg");
  if (args.epsilon.has_value() == args.sigma2.has_value())
    throw config_error("give exactly one of --epsilon / --sigma2");
  const NoiseSource source = method == Method::pgd ? NoiseSource::pgd_theorem1
                                                   : NoiseSource::cg_theorem3;
  if (args.epsilon) {
    const PrivacyBudget budget{*args.epsilon, args.delta, args.iters};
    for (const std::string& w : budget_warnings(budget))
      std::cerr << "warning: " << w << "\n";
    const NoisePlan plan = method == Method::pgd
                               ? calibrate_pgd(budget, args.radius, args.R)
                               : calibrate_cg(budget, args.radius, args.R);
    std::cout << "sigma2=" << format_double(plan.sigma2) << "\n";
  } else {
    const double eps = epsilon_of_sigma(*args.sigma2, args.iters, args.delta,
                                        args.radius, args.R, source);
    if (std::isinf(eps)) std::cerr << "warning: sigma^2 = 0 is non-private\n";
    std::cout << "epsilon=" << format_double(eps) << "\n";
  }
  return 0;
}

struct RecoverArgs {
  std::string estimate;
  std::string truth;
  std::string out;
};

int cmd_recover(const RecoverArgs& args) {
  const EstimateRecord rec = read_estimate_json(args.estimate);
  const HawkesModel model = resolve_model(args.truth);
  const KernelEstimate truth =
      discretize_truth(model, rec.estimate.delta_bin, rec.estimate.lag());
  const double err = relative_error(rec.estimate, truth);

  std::ofstream out = open_output(args.out);
  out << "i,j,grid_t,h_hat,h_true\n";
  for (int i = 0; i < model.dim; ++i)
    for (int j = 0; j < model.dim; ++j)
      for (int k = 1; k <= rec.estimate.lag(); ++k)
        out << i << "," << j << ","
            << format_double(k * rec.estimate.delta_bin) << ","
            << format_double(rec.estimate.blocks[k - 1](i, j)) << ","
            << format_double(truth.blocks[k - 1](i, j)) << "\n";
  out << "relative_error,,,," << format_double(err) << "\n";
  std::cerr << "relative error " << format_double(err) << "\n";
  return 0;
}

struct SweepArgs {
  std::string config;
  int threads = 0;
};

int cmd_sweep(const SweepArgs& args) {
  ExperimentConfig config = read_config_json(args.config);
  if (const char* env = std::getenv("HAWKESDP_OUTPUT_DIR"); env && *env)
    config.output_dir = env;
  std::filesystem::create_directories(config.output_dir);
  const std::string path =
      (std::filesystem::path(config.output_dir) / "results.csv").string();
  std::ofstream csv = open_output(path);
  run_sweep(config, csv, &std::cerr, args.threads);
  std::cerr << "wrote " << path << "\n";
  return 0;
}

struct OverlayArgs {
  std::string config;
  int i = 0;
  int j = 0;
  double sigma2 = 0.0;
  std::string out;
};

int cmd_overlay(const OverlayArgs& args) {
  const ExperimentConfig config = read_config_json(args.config);
  std::ofstream out = open_output(args.out);
  kernel_overlay(config, args.i, args.j, args.sigma2, out);
  std::cerr << "wrote " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private Hawkes process estimation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Sample an event stream");
  sim_cmd->add_option("--model", sim.model, "builtin name or model JSON path")
      ->required();
  double sim_horizon = 0.0, sim_target = 0.0;
  auto* sim_h = sim_cmd->add_option("--horizon", sim_horizon, "time horizon T");
  auto* sim_t = sim_cmd->add_option("--target-events", sim_target,
                                    "solve T for this expected event count");
  sim_cmd->add_option("--seed", sim.seed, "rng seed");
  sim_cmd->add_option("--out", sim.out, "output events CSV")->required();

  DiscretizeArgs dis;
  auto* dis_cmd = app.add_subcommand("discretize", "Bin an event stream");
  dis_cmd->add_option("--delta", dis.delta, "bin width")->required();
  dis_cmd->add_option("--lag", dis.lag, "maximal lag p")->required();
  double dis_horizon = 0.0;
  auto* dis_h = dis_cmd->add_option("--horizon", dis_horizon,
                                    "horizon (default: last event time)");
  dis_cmd->add_option("--input", dis.input, "events CSV")->required();
  dis_cmd->add_option("--output", dis.output, "bins CSV")->required();

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Fit kernels from bins");
  est_cmd->add_option("--method", est.method, "pgd|cg|cls")->required();
  double est_eps = 0.0, est_sigma2 = 0.0;
  auto* est_e = est_cmd->add_option("--epsilon", est_eps, "privacy budget");
  auto* est_s = est_cmd->add_option("--sigma2", est_sigma2,
                                    "per-iteration noise variance");
  auto* est_d = est_cmd->add_option("--delta", est.delta, "privacy delta");
  est_cmd->add_option("--iters", est.iters, "iteration count K");
  est_cmd->add_option("--radius", est.radius, "norm bound B (pgd) or r (cg)");
  est_cmd->add_option("--R", est.R, "data-scale constant R");
  est_cmd->add_option("--seed", est.seed, "rng seed");
  est_cmd->add_option("--bins", est.bins, "bins CSV")->required();
  est_cmd->add_option("--delta-bin", est.delta_bin, "bin width of the bins file")
      ->required();
  est_cmd->add_option("--lag", est.lag, "maximal lag p")->required();
  est_cmd->add_option("--step-constant", est.step_constant, "appendix|theorem");
  est_cmd->add_option("--cg-schedule", est.cg_schedule, "paper|classical");
  est_cmd->add_option("--out", est.out, "output estimate JSON")->required();

  AccountantArgs acc;
  auto* acc_cmd =
      app.add_subcommand("accountant", "Convert between epsilon and sigma^2");
  acc_cmd->add_option("--method", acc.method, "pgd|cg")->required();
  double acc_eps = 0.0, acc_sigma2 = 0.0;
  auto* acc_e = acc_cmd->add_option("--epsilon", acc_eps, "privacy budget");
  auto* acc_s = acc_cmd->add_option("--sigma2", acc_sigma2, "noise variance");
  acc_cmd->add_option("--iters", acc.iters, "iteration count K");
  acc_cmd->add_option("--delta", acc.delta, "privacy delta")->required();
  acc_cmd->add_option("--radius", acc.radius, "ball radius (delta_bin * B or r)")
      ->required();
  acc_cmd->add_option("--R", acc.R, "data-scale constant R")->required();

  RecoverArgs rcv;
  auto* rcv_cmd =
      app.add_subcommand("recover", "Compare an estimate against ground truth");
  rcv_cmd->add_option("--estimate", rcv.estimate, "estimate JSON")->required();
  rcv_cmd->add_option("--truth", rcv.truth, "builtin name or model JSON path")
      ->required();
  rcv_cmd->add_option("--out", rcv.out, "metrics CSV")->required();

  SweepArgs swp;
  auto* swp_cmd = app.add_subcommand("sweep", "Run a replicated grid sweep");
  swp_cmd->add_option("--config", swp.config, "experiment config JSON")
      ->required();
  swp_cmd->add_option("--threads", swp.threads, "worker threads (0 = auto)");

  OverlayArgs ovl;
  auto* ovl_cmd =
      app.add_subcommand("overlay", "True vs estimated kernel curve");
  ovl_cmd->add_option("--config", ovl.config, "experiment config JSON")
      ->required();
  ovl_cmd->add_option("--i", ovl.i, "target dim")->required();
  ovl_cmd->add_option("--j", ovl.j, "source dim")->required();
  ovl_cmd->add_option("--sigma2", ovl.sigma2, "noise variance")->required();
  ovl_cmd->add_option("--out", ovl.out, "overlay CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) {
      if (sim_h->count()) sim.horizon = sim_horizon;
      if (sim_t->count()) sim.target_events = sim_target;
      return cmd_simulate(sim);
    }
    if (dis_cmd->parsed()) {
      if (dis_h->count()) dis.horizon = dis_horizon;
      return cmd_discretize(dis);
    }
    if (est_cmd->parsed()) {
      if (est_e->count()) est.epsilon = est_eps;
      if (est_s->count()) est.sigma2 = est_sigma2;
      est.delta_given = est_d->count() > 0;
      return cmd_estimate(est);
    }
    if (acc_cmd->parsed()) {
      if (acc_e->count()) acc.epsilon = acc_eps;
      if (acc_s->count()) acc.sigma2 = acc_sigma2;
      return cmd_accountant(acc);
    }
    if (rcv_cmd->parsed()) return cmd_recover(rcv);
    if (swp_cmd->parsed()) return cmd_sweep(swp);
    if (ovl_cmd->parsed()) return cmd_overlay(ovl);
  } catch (const hawkesdp::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const hawkesdp::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
