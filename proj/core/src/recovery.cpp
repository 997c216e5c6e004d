#include "hawkesdp/recovery.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkesdp {

namespace {

void check_entry(const KernelEstimate& est, int i, int j) {
  if (i < 0 || i >= est.dim() || j < 0 || j >= est.dim())
    throw std::invalid_argument("kernel entry index out of range");
}

}  // namespace

KernelEstimate rescale(const ParamMatrix& theta, double delta_bin,
                       Interpolation interpolation) {
  if (!(delta_bin > 0.0))
    throw std::invalid_argument("delta_bin must be positive");
  const int d = static_cast<int>(theta.rows());
  const Eigen::Index cols = theta.cols();
  if (d < 1 || cols < 2 || (cols - 1) % d != 0)
    throw std::invalid_argument("theta must have shape d x (dp+1)");
  const int p = static_cast<int>((cols - 1) / d);

  KernelEstimate est;
  est.delta_bin = delta_bin;
  est.interpolation = interpolation;
  est.blocks.reserve(p);
  for (int a = 0; a < p; ++a)
    est.blocks.push_back(theta.middleCols(static_cast<Eigen::Index>(a) * d, d) /
                         delta_bin);
  est.eta_hat = theta.col(cols - 1) / delta_bin;
  return est;
}

Eigen::MatrixXd stack_blocks(const KernelEstimate& estimate) {
  const int d = estimate.dim();
  const int p = estimate.lag();
  Eigen::MatrixXd out(d, static_cast<Eigen::Index>(d) * p + 1);
  for (int a = 0; a < p; ++a)
    out.middleCols(static_cast<Eigen::Index>(a) * d, d) = estimate.blocks[a];
  out.col(out.cols() - 1) = estimate.eta_hat;
  return out;
}

ParamMatrix stack_param(const KernelEstimate& estimate) {
  return estimate.delta_bin * stack_blocks(estimate);
}

double eval_estimate(const KernelEstimate& est, int i, int j, double t) {
  check_entry(est, i, j);
  const int p = est.lag();
  const double delta = est.delta_bin;
  if (!(t > 0.0) || t > p * delta * (1.0 + 1e-12))
    throw std::invalid_argument("evaluation time outside (0, p delta]");

  if (est.interpolation == Interpolation::step) {
    int k = static_cast<int>(std::ceil(t / delta - 1e-12));
    k = std::max(1, std::min(k, p));
    return est.blocks[k - 1](i, j);
  }

  // linear: grid values at k delta, constant extension on (0, delta]
  const double pos = t / delta;
  if (pos <= 1.0) return est.blocks[0](i, j);
  int k0 = static_cast<int>(std::floor(pos));
  if (k0 >= p) return est.blocks[p - 1](i, j);
  const double frac = pos - k0;
  return (1.0 - frac) * est.blocks[k0 - 1](i, j) + frac * est.blocks[k0](i, j);
}

KernelEstimate discretize_truth(const HawkesModel& model, double delta_bin,
                                int p) {
  validate_model(model);
  if (!(delta_bin > 0.0))
    throw std::invalid_argument("delta_bin must be positive");
  if (p < 1) throw std::invalid_argument("lag p must be >= 1");

  KernelEstimate truth;
  truth.delta_bin = delta_bin;
  truth.blocks.reserve(p);
  for (int k = 1; k <= p; ++k) {
    Eigen::MatrixXd block(model.dim, model.dim);
    for (int i = 0; i < model.dim; ++i)
      for (int j = 0; j < model.dim; ++j)
        block(i, j) = eval_kernel(model.kernel(i, j), k * delta_bin);
    truth.blocks.push_back(std::move(block));
  }
  truth.eta_hat = model.baseline;
  return truth;
}

double relative_error(const KernelEstimate& est, const KernelEstimate& truth) {
  if (est.dim() != truth.dim() || est.lag() != truth.lag())
    throw std::invalid_argument("estimate and truth shapes differ");
  const Eigen::MatrixXd e = stack_blocks(est);
  const Eigen::MatrixXd t = stack_blocks(truth);
  const double truth_norm = t.norm();
  if (truth_norm == 0.0)
    throw std::invalid_argument("relative error undefined for zero truth");
  const double d = truth.dim();
  const double scale = d * (d * truth.lag() + 1);  // d (dp+1)
  return (e - t).norm() / (scale * truth_norm);
}

double reconstruct_intensity(const KernelEstimate& est,
                             const EventStream& history, double t, int m) {
  if (m < 0 || m >= est.dim())
    throw std::invalid_argument("intensity dim index out of range");
  const double support = est.lag() * est.delta_bin;
  double value = est.eta_hat(m);
  for (const Event& e : history.events) {
    if (e.time >= t) break;
    const double u = t - e.time;
    if (u <= support * (1.0 + 1e-12))
      value += eval_estimate(est, m, e.dim, u);
  }
  return std::max(value, 0.0);
}

}  // namespace hawkesdp
