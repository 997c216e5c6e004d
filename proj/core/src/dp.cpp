#include "hawkesdp/dp.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hawkesdp/errors.hpp"

namespace hawkesdp {

namespace {

void check_budget(const PrivacyBudget& budget) {
  if (!(budget.epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
  if (!(budget.delta > 0.0) || budget.delta >= 1.0)
    throw std::invalid_argument("delta must lie in (0, 1)");
  if (budget.iterations < 1)
    throw std::invalid_argument("iteration count must be >= 1");
}

// Shared factor rho^2 R^2 K log^2(K/delta) / eps^2; the two calibrators
// differ only in the leading constant, so their ratio is exact in floating
// point.
double calibration_base(double epsilon, double delta, int iterations,
                        double radius, double R) {
  const double lg = std::log(static_cast<double>(iterations) / delta);
  return radius * radius * R * R * iterations * lg * lg / (epsilon * epsilon);
}

void add_noise(ParamMatrix& g, double sigma, Rng& rng) {
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) += sigma * rng.normal();
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<std::string> budget_warnings(const PrivacyBudget& budget) {
  std::vector<std::string> warnings;
  if (budget.delta >= 1.0 / budget.iterations) {
    std::ostringstream msg;
    msg << "delta = " << budget.delta << " is not below 1/K = "
        << 1.0 / budget.iterations << "; the composition bound is weak";
    warnings.push_back(msg.str());
  }
  return warnings;
}

NoisePlan calibrate_pgd(const PrivacyBudget& budget, double rho_f, double R) {
  check_budget(budget);
  if (!(rho_f > 0.0) || !(R > 0.0))
    throw std::invalid_argument("radius and R must be positive");
  NoisePlan plan;
  plan.sigma2 = 8.0 * calibration_base(budget.epsilon, budget.delta,
                                       budget.iterations, rho_f, R);
  plan.source = NoiseSource::pgd_theorem1;
  plan.claimed_epsilon = budget.epsilon;
  plan.claimed_delta = budget.delta;
  return plan;
}

NoisePlan calibrate_cg(const PrivacyBudget& budget, double rho_star, double R) {
  check_budget(budget);
  if (!(rho_star > 0.0) || !(R > 0.0))
    throw std::invalid_argument("radius and R must be positive");
  NoisePlan plan;
  plan.sigma2 = 128.0 * calibration_base(budget.epsilon, budget.delta,
                                         budget.iterations, rho_star, R);
  plan.source = NoiseSource::cg_theorem3;
  plan.claimed_epsilon = budget.epsilon;
  plan.claimed_delta = budget.delta;
  return plan;
}

double epsilon_of_sigma(double sigma2, int iterations, double delta,
                        double radius, double R, NoiseSource source) {
  if (sigma2 < 0.0) throw std::invalid_argument("sigma^2 must be >= 0");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("delta must lie in (0, 1)");
  if (source == NoiseSource::manual)
    throw std::invalid_argument(
        "epsilon_of_sigma needs a calibration formula (pgd or cg source)");
  if (sigma2 == 0.0) return std::numeric_limits<double>::infinity();

  const double constant = source == NoiseSource::pgd_theorem1 ? 8.0 : 128.0;
  // invert sigma^2 = constant * base(eps = 1) / eps^2 ... base carries 1/eps^2,
  // so compute it at eps = 1 and solve for eps.
  const double c = constant * calibration_base(1.0, delta, iterations, radius, R);
  return std::sqrt(c / sigma2);
}

double pgd_step(int k, double rho_f, double R, int d, int p, double sigma2,
                StepConstant constant) {
  if (k < 1) throw std::invalid_argument("step index k must be >= 1");
  const double lip2 = (constant == StepConstant::appendix ? 4.0 : 16.0) *
                      rho_f * rho_f * R * R;
  const double width = static_cast<double>(d) * (static_cast<double>(d) * p + 1);
  return rho_f / std::sqrt(k * (lip2 + width * sigma2));
}

std::pair<ParamMatrix, OptimizerReport> dp_pgd(const DesignMatrices& design,
                                               FrobeniusBall ball,
                                               const NoisePlan& plan,
                                               int iterations,
                                               const ParamMatrix& U0, Rng& rng,
                                               const PgdOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (plan.sigma2 < 0.0) throw std::invalid_argument("sigma^2 must be >= 0");
  if (U0.norm() > ball.radius)
    throw std::invalid_argument("U0 lies outside the Frobenius ball");

  const double sigma = std::sqrt(plan.sigma2);
  ParamMatrix U = U0;
  OptimizerReport report;
  report.iterations = iterations;
  report.loss_trajectory.reserve(iterations);
  report.sigma2 = plan.sigma2;
  report.claimed_epsilon = plan.claimed_epsilon;
  report.claimed_delta = plan.claimed_delta;
  report.seed = rng.seed();
  {
    std::ostringstream schedule;
    schedule << "eta_k = rho/sqrt(k*("
             << (options.step_constant == StepConstant::appendix ? 4 : 16)
             << "*rho^2*R^2 + d(dp+1)*sigma^2)), R=" << options.R;
    report.schedule = schedule.str();
  }

  for (int k = 1; k <= iterations; ++k) {
    ParamMatrix g = gradient(U, design);
    if (sigma > 0.0) add_noise(g, sigma, rng);
    const double eta = pgd_step(k, ball.radius, options.R, design.d, design.p,
                                plan.sigma2, options.step_constant);
    U = project_frobenius(U - eta * g, ball.radius);
    report.loss_trajectory.push_back(loss(U, design));
    if (options.on_iterate) options.on_iterate(k, U);
  }
  report.final_loss = report.loss_trajectory.back();
  report.wall_clock_s = elapsed_s(start);
  return {U, report};
}

std::pair<ParamMatrix, OptimizerReport> dp_cg(const DesignMatrices& design,
                                              NuclearBall ball,
                                              const NoisePlan& plan,
                                              int iterations,
                                              const ParamMatrix& U0, Rng& rng,
                                              const CgOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (plan.sigma2 < 0.0) throw std::invalid_argument("sigma^2 must be >= 0");
  if (nuclear_norm(U0) > ball.radius * (1.0 + 1e-12))
    throw std::invalid_argument("U0 lies outside the nuclear ball");

  const double sigma = std::sqrt(plan.sigma2);
  ParamMatrix U = U0;
  OptimizerReport report;
  report.iterations = iterations;
  report.loss_trajectory.reserve(iterations);
  report.sigma2 = plan.sigma2;
  report.claimed_epsilon = plan.claimed_epsilon;
  report.claimed_delta = plan.claimed_delta;
  report.seed = rng.seed();
  report.schedule = options.schedule == CgSchedule::paper_fixed
                        ? "mu = 1/(K+2)"
                        : "mu = 2/(k+2)";

  for (int k = 1; k <= iterations; ++k) {
    ParamMatrix g = gradient(U, design);
    if (sigma > 0.0) add_noise(g, sigma, rng);
    const LmoResult lmo =
        nuclear_lmo(g, ball.radius, rng, options.lmo_tol, options.lmo_max_iter);
    const double mu = options.schedule == CgSchedule::paper_fixed
                          ? 1.0 / (iterations + 2.0)
                          : 2.0 / (k + 2.0);
    U = (1.0 - mu) * U + mu * lmo.vertex;
    report.loss_trajectory.push_back(loss(U, design));
    if (options.on_iterate) options.on_iterate(k, U);
  }
  report.final_loss = report.loss_trajectory.back();
  report.wall_clock_s = elapsed_s(start);
  return {U, report};
}

double curvature_bound(double rho_star, double R) {
  if (!(rho_star > 0.0) || !(R > 0.0))
    throw std::invalid_argument("radius and R must be positive");
  return 4.0 * rho_star * rho_star * R;
}

double gaussian_width_bound(int d, int p, double rho_star) {
  if (d < 1 || p < 0) throw std::invalid_argument("bad shape for width bound");
  if (!(rho_star > 0.0))
    throw std::invalid_argument("radius must be positive");
  const double cols = static_cast<double>(d) * p + 1;
  return rho_star * 2.0 * (std::sqrt(cols) + std::sqrt(static_cast<double>(d)));
}

UtilityBound utility_bound_pgd(double rho_f, int d, int p, double epsilon,
                               double delta) {
  if (!(rho_f > 0.0) || !(epsilon > 0.0) || !(delta > 0.0) || delta >= 1.0)
    throw std::invalid_argument("bad utility bound inputs");
  const double width = static_cast<double>(d) * (static_cast<double>(d) * p + 1);
  UtilityBound bound;
  bound.value =
      rho_f * rho_f * std::sqrt(width) * std::log(1.0 / delta) / epsilon;
  return bound;
}

UtilityBound utility_bound_cg(double R, double rho_star, int d, int p,
                              double epsilon, double delta) {
  if (!(R > 0.0) || !(rho_star > 0.0) || !(epsilon > 0.0) || !(delta > 0.0) ||
      delta >= 1.0)
    throw std::invalid_argument("bad utility bound inputs");
  const double cols = static_cast<double>(d) * p + 1;
  UtilityBound bound;
  bound.curvature = curvature_bound(rho_star, R);
  bound.width = gaussian_width_bound(d, p, rho_star);
  bound.lipschitz = 2.0 * rho_star * R;
  bound.value = R * std::pow(rho_star, 4.0 / 3.0) * std::cbrt(cols) *
                std::log(1.0 / delta) / std::pow(epsilon, 2.0 / 3.0);
  return bound;
}

}  // namespace hawkesdp
