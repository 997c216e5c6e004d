#pragma once

#include <vector>

namespace hawkesdp {

enum class KernelKind { zero, exponential, box, sum };

// One entry h(t) of the excitement matrix. Kernels are non-negative and
// causal: h(t) = 0 for every t < 0.
//
//   zero          h(t) = 0
//   exponential   h(t) = alpha * exp(-beta t),        alpha >= 0, beta > 0
//   box           h(t) = height * 1{lo <= t <= hi},   0 <= lo < hi, height >= 0
//   sum           h(t) = sum over terms
struct KernelSpec {
  KernelKind kind = KernelKind::zero;
  double alpha = 0.0;
  double beta = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  double height = 0.0;
  std::vector<KernelSpec> terms;

  static KernelSpec zero();
  static KernelSpec exponential(double alpha, double beta);
  static KernelSpec box(double lo, double hi, double height);
  static KernelSpec sum(std::vector<KernelSpec> terms);
};

// Throws std::invalid_argument when a parameter constraint is violated.
void validate_kernel(const KernelSpec& spec);

double eval_kernel(const KernelSpec& spec, double t);

// sup over v >= u of h(v), for u >= 0. Exact for single kernels, an upper
// bound for sums; this is what keeps the thinning envelope valid for boxes
// that have not switched on yet.
double kernel_sup_after(const KernelSpec& spec, double u);

// Closed-form integral of h over [0, inf).
double kernel_integral(const KernelSpec& spec);

}  // namespace hawkesdp
