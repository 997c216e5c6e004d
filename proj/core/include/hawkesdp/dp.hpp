#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hawkesdp/estimator.hpp"

namespace hawkesdp {

struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-6;
  int iterations = 1;
};

// Guidance that is not enforced (delta < 1/K is recommended); callers decide
// how to surface these.
std::vector<std::string> budget_warnings(const PrivacyBudget& budget);

enum class NoiseSource { pgd_theorem1, cg_theorem3, manual };

struct NoisePlan {
  double sigma2 = 0.0;
  NoiseSource source = NoiseSource::manual;
  // Filled by the calibrators; NaN when sigma2 was chosen by hand.
  double claimed_epsilon = std::numeric_limits<double>::quiet_NaN();
  double claimed_delta = std::numeric_limits<double>::quiet_NaN();
};

// sigma^2 = 8 rho_f^2 R^2 K log^2(K/delta) / eps^2.
NoisePlan calibrate_pgd(const PrivacyBudget& budget, double rho_f, double R);

// sigma^2 = 128 rho_star^2 R^2 K log^2(K/delta) / eps^2.
NoisePlan calibrate_cg(const PrivacyBudget& budget, double rho_star, double R);

// Exact inverse of the matching calibration formula. sigma2 = 0 reports
// +infinity (a non-private release); `source` selects the constant and must
// not be manual.
double epsilon_of_sigma(double sigma2, int iterations, double delta,
                        double radius, double R, NoiseSource source);

// The 4 rho^2 R^2 squared-Lipschitz constant in the step size comes from the
// derivation appendix; the theorem statement reads as 16 rho^2 R^2. Both are
// available, the derivation form is the default.
enum class StepConstant { appendix, theorem };

// eta_k = rho_f / sqrt(k (L2^2 + d (dp+1) sigma^2)), L2^2 = 4 rho_f^2 R^2.
double pgd_step(int k, double rho_f, double R, int d, int p, double sigma2,
                StepConstant constant = StepConstant::appendix);

struct OptimizerReport {
  int iterations = 0;
  std::vector<double> loss_trajectory;  // loss after each iterate, length K
  double final_loss = 0.0;
  double sigma2 = 0.0;
  double claimed_epsilon = std::numeric_limits<double>::quiet_NaN();
  double claimed_delta = std::numeric_limits<double>::quiet_NaN();
  std::string schedule;
  std::uint64_t seed = 0;
  double wall_clock_s = 0.0;
};

using IterateCallback = std::function<void(int, const ParamMatrix&)>;

struct PgdOptions {
  double R = 1.0;
  StepConstant step_constant = StepConstant::appendix;
  IterateCallback on_iterate;  // optional, called after each projection
};

// Projected gradient descent with per-entry Gaussian N(0, sigma^2) gradient
// perturbation: U_{k+1} = Proj(U_k - eta_k (grad + zeta_k)). U0 must lie in
// the ball; every iterate stays in it. sigma^2 = 0 consumes no randomness.
std::pair<ParamMatrix, OptimizerReport> dp_pgd(const DesignMatrices& design,
                                               FrobeniusBall ball,
                                               const NoisePlan& plan,
                                               int iterations,
                                               const ParamMatrix& U0, Rng& rng,
                                               const PgdOptions& options);

enum class CgSchedule { paper_fixed, classical };

struct CgOptions {
  CgSchedule schedule = CgSchedule::paper_fixed;  // mu = 1/(K+2) for all k
  double lmo_tol = 1e-9;
  int lmo_max_iter = 10000;
  IterateCallback on_iterate;
};

// Conditional gradient over the nuclear ball with perturbed gradients:
// U_{k+1} = (1-mu) U_k + mu argmin_{||U||_* <= rho} <U, grad + zeta_k>.
// The classical option switches mu to 2/(k+2).
std::pair<ParamMatrix, OptimizerReport> dp_cg(const DesignMatrices& design,
                                              NuclearBall ball,
                                              const NoisePlan& plan,
                                              int iterations,
                                              const ParamMatrix& U0, Rng& rng,
                                              const CgOptions& options = {});

// Curvature bound 4 rho_star^2 R for the quadratic loss over the nuclear ball.
double curvature_bound(double rho_star, double R);

// Gaussian width bound 2 rho_star (sqrt(dp+1) + sqrt(d)) for the nuclear ball.
double gaussian_width_bound(int d, int p, double rho_star);

struct UtilityBound {
  double value = 0.0;      // rate expression with unit constant
  double curvature = 0.0;  // conditional gradient components; zero for PGD
  double width = 0.0;
  double lipschitz = 0.0;
};

// rho_f^2 sqrt(d (dp+1)) log(1/delta) / eps. Trend checks only.
UtilityBound utility_bound_pgd(double rho_f, int d, int p, double epsilon,
                               double delta);

// R rho_star^{4/3} (dp+1)^{1/3} log(1/delta) / eps^{2/3}. Trend checks only.
UtilityBound utility_bound_cg(double R, double rho_star, int d, int p,
                              double epsilon, double delta);

}  // namespace hawkesdp
