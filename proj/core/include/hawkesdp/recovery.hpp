#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hawkesdp/estimator.hpp"
#include "hawkesdp/model.hpp"

namespace hawkesdp {

enum class Interpolation { step, linear };

// Grid estimate of the excitement function: blocks[k-1](i, j) estimates
// h_{ij}(k delta) for k = 1..p, plus the baseline estimate. Entries may be
// negative; only reconstructed intensities are floored at zero.
struct KernelEstimate {
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::VectorXd eta_hat;
  double delta_bin = 0.0;
  Interpolation interpolation = Interpolation::step;

  int lag() const { return static_cast<int>(blocks.size()); }
  int dim() const { return static_cast<int>(eta_hat.size()); }
};

// Splits theta / delta into p kernel blocks (matching the descending-lag
// column layout of the design matrix) and the trailing baseline column.
KernelEstimate rescale(const ParamMatrix& theta, double delta_bin,
                       Interpolation interpolation = Interpolation::step);

// [H_1, ..., H_p, eta] as one d x (dp+1) matrix, kernel scale.
Eigen::MatrixXd stack_blocks(const KernelEstimate& estimate);

// delta * stack_blocks: the exact inverse of rescale.
ParamMatrix stack_param(const KernelEstimate& estimate);

// Estimated h_{ij}(t) for t in (0, p delta]. Step mode is constant on each
// bin; linear mode interpolates between grid values, constant on (0, delta].
double eval_estimate(const KernelEstimate& est, int i, int j, double t);

// Ground-truth kernels sampled at the grid k delta, k = 1..p.
KernelEstimate discretize_truth(const HawkesModel& model, double delta_bin,
                                int p);

// || stacked(est) - stacked(truth) ||_F / (d (dp+1) || stacked(truth) ||_F).
double relative_error(const KernelEstimate& est, const KernelEstimate& truth);

// Intensity of dim m at time t under the estimated model; contributions
// beyond the support p delta are zero and the result is floored at 0.
double reconstruct_intensity(const KernelEstimate& est,
                             const EventStream& history, double t, int m);

}  // namespace hawkesdp
